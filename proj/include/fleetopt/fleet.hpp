#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "fleetopt/dataset.hpp"

namespace fleetopt {

enum class SolveStatus { Optimal, Feasible, Infeasible, TimeoutNoSolution };

const char* to_string(SolveStatus s);

/// One round of the vehicle-greedy driver.
struct IterationRecord {
  std::size_t iteration = 0;
  std::size_t vehicles_emitted = 0;
  /// Remaining test units (sum of outstanding car counts) after this round.
  std::int64_t tests_remaining = 0;
  std::vector<std::pair<std::size_t, std::int64_t>> newly_covered;  // (test id, cars)
  std::chrono::milliseconds wall_time{0};
  SolveStatus solver_status = SolveStatus::Feasible;
  /// Annealing only: share of restarts that ended in a feasible sample.
  double feasible_rate = 1.0;
};

struct FleetSolution {
  std::vector<VehicleConfig> vehicles;
  /// test id -> indices into vehicles
  std::map<std::size_t, std::vector<std::size_t>> assignment;
  std::vector<IterationRecord> trace;
  bool feasible = true;
  std::vector<std::string> violations;
};

}  // namespace fleetopt
