#include "slgate/species.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace slgate {

double Species::omega_line(int line, int F) const {
  const auto& table = (line == 1) ? omega_D1_F : omega_D2_F;
  auto it = table.find(F);
  if (line != 1 && line != 2)
    throw std::invalid_argument("omega_line: line must be 1 or 2");
  if (it == table.end())
    throw std::invalid_argument("omega_line: no entry for F=" + std::to_string(F));
  return it->second;
}

namespace {

std::map<int, double> read_f_map(const nlohmann::json& j, const std::string& key,
                                 std::vector<std::string>& errors) {
  std::map<int, double> out;
  if (!j.contains(key) || !j.at(key).is_object()) {
    errors.push_back("missing or non-object field: " + key);
    return out;
  }
  for (const auto& [k, v] : j.at(key).items()) {
    try {
      out[std::stoi(k)] = v.get<double>();
    } catch (...) {
      errors.push_back("field " + key + " has non-numeric entry for key '" + k + "'");
    }
  }
  if (!out.count(1) || !out.count(2))
    errors.push_back("field " + key + " must provide entries for F=1 and F=2");
  return out;
}

double read_number(const nlohmann::json& j, const std::string& key,
                   std::vector<std::string>& errors) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    errors.push_back("missing or non-numeric field: " + key);
    return 0.0;
  }
  return j.at(key).get<double>();
}

}  // namespace

Species load_species(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpeciesError("cannot open species file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw SpeciesError("malformed JSON in " + path + ": " + e.what());
  }

  std::vector<std::string> errors;
  Species s;
  s.name = j.value("name", std::string{});
  s.mass = read_number(j, "mass", errors);
  s.omega0 = read_number(j, "omega0", errors);
  s.gamma = read_number(j, "gamma", errors);
  s.omega_D1_F = read_f_map(j, "omega_D1_F", errors);
  s.omega_D2_F = read_f_map(j, "omega_D2_F", errors);
  s.gF = read_f_map(j, "gF", errors);
  s.scattering_length = read_number(j, "scattering_length", errors);
  s.hfs_ground_split = read_number(j, "hfs_ground_split", errors);

  if (errors.empty()) {
    if (s.mass <= 0) errors.push_back("mass must be positive");
    if (s.gamma <= 0) errors.push_back("gamma must be positive");
    if (s.omega0 <= 0) errors.push_back("omega0 must be positive");
    if (s.hfs_ground_split <= 0) errors.push_back("hfs_ground_split must be positive");
    for (int F : {1, 2}) {
      if (s.omega_D1_F.count(F) && s.omega_D2_F.count(F) &&
          !(s.omega_D1_F[F] < s.omega_D2_F[F]))
        errors.push_back("omega_D1_F must lie below omega_D2_F for F=" +
                         std::to_string(F));
    }
    // The per-F transition frequencies of each line must differ by exactly the
    // ground-state hyperfine splitting (F=1 sits below F=2 in energy).
    for (const auto* tbl : {&s.omega_D1_F, &s.omega_D2_F}) {
      if (tbl->count(1) && tbl->count(2)) {
        double split = tbl->at(1) - tbl->at(2);
        if (std::abs(split - s.hfs_ground_split) >
            1e-6 * s.hfs_ground_split)
          errors.push_back(
              "per-F transition frequencies inconsistent with hfs_ground_split");
      }
    }
  }

  if (!errors.empty()) {
    std::ostringstream msg;
    msg << "invalid species file " << path << ":";
    for (const auto& e : errors) msg << "\n  - " << e;
    throw SpeciesError(msg.str());
  }
  return s;
}

std::string default_species_path() {
  return std::string(SLGATE_DATA_DIR) + "/rb87.json";
}

}  // namespace slgate
