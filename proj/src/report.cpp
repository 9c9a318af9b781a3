#include "fleetopt/report.hpp"

#include <sstream>
#include <stdexcept>

namespace fleetopt {

nlohmann::json report_json(const std::vector<IterationRecord>& trace, const std::string& instance_digest,
                           const nlohmann::json& config) {
  nlohmann::json rows = nlohmann::json::array();
  std::size_t vehicles = 0;
  std::int64_t covered = 0;
  std::int64_t wall = 0;
  for (const auto& r : trace) {
    std::int64_t units = 0;
    for (const auto& [test, cars] : r.newly_covered) units += cars;
    rows.push_back({{"iteration", r.iteration},
                    {"vehicles", r.vehicles_emitted},
                    {"tests_remaining", r.tests_remaining},
                    {"covered_units", units},
                    {"wall_ms", r.wall_time.count()},
                    {"status", to_string(r.solver_status)},
                    {"feasible_rate", r.feasible_rate}});
    vehicles += r.vehicles_emitted;
    covered += units;
    wall += r.wall_time.count();
  }
  nlohmann::json totals = {{"iterations", trace.size()},
                           {"vehicles", vehicles},
                           {"covered_units", covered},
                           {"wall_ms", wall},
                           {"tests_remaining", trace.empty() ? 0 : trace.back().tests_remaining}};
  return {{"instance_digest", instance_digest}, {"config", config}, {"rows", rows}, {"totals", totals}};
}

std::string report_csv(const std::vector<IterationRecord>& trace) {
  std::ostringstream os;
  os << "iter,vehicles,tests_remaining,wall_ms,status\n";
  for (const auto& r : trace)
    os << r.iteration << ',' << r.vehicles_emitted << ',' << r.tests_remaining << ',' << r.wall_time.count() << ','
       << to_string(r.solver_status) << '\n';
  return os.str();
}

nlohmann::json fleet_json(const Dataset& d, const FleetSolution& fleet) {
  nlohmann::json vehicles = nlohmann::json::array();
  for (const auto& v : fleet.vehicles) {
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t k = 0; k < v.features.size(); ++k)
      if (v.features[k]) features.push_back(d.feature_names[k]);
    vehicles.push_back({{"type", d.type_names[v.type.value]}, {"features", features}});
  }
  nlohmann::json assignment = nlohmann::json::object();
  for (const auto& [test, users] : fleet.assignment) assignment[std::to_string(test)] = users;
  nlohmann::json violations = fleet.violations;
  return {{"vehicles", vehicles}, {"assignment", assignment}, {"feasible", fleet.feasible}, {"violations", violations}};
}

FleetSolution fleet_from_json(const Dataset& d, const nlohmann::json& j) {
  auto lookup = [](const std::vector<std::string>& names, const std::string& name, const char* what) {
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) return k;
    throw std::invalid_argument(std::string("unknown ") + what + " '" + name + "'");
  };
  FleetSolution out;
  for (const auto& v : j.at("vehicles")) {
    VehicleConfig c{TypeId{lookup(d.type_names, v.at("type").get<std::string>(), "type")},
                    std::vector<bool>(d.feature_count(), false)};
    for (const auto& f : v.at("features")) c.features[lookup(d.feature_names, f.get<std::string>(), "feature")] = true;
    out.vehicles.push_back(std::move(c));
  }
  if (j.contains("assignment"))
    for (const auto& [test, users] : j.at("assignment").items()) {
      std::size_t id = std::stoul(test);
      for (const auto& u : users) {
        auto idx = u.get<std::size_t>();
        if (idx >= out.vehicles.size()) throw std::invalid_argument("assignment names vehicle " + std::to_string(idx));
        out.assignment[id].push_back(idx);
      }
    }
  return out;
}

}  // namespace fleetopt
