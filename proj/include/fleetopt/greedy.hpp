#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fleetopt/dataset.hpp"
#include "fleetopt/fleet.hpp"
#include "fleetopt/model.hpp"
#include "fleetopt/solver.hpp"

namespace fleetopt {

enum class Backend { Exact, Anneal, ExportOnly };

const char* to_string(Backend b);

struct GreedyConfig {
  std::size_t n_bunch = 1;
  Backend backend = Backend::Exact;
  std::chrono::milliseconds per_iteration_time_limit{5000};
  /// 0 means the total number of required cars, which always suffices.
  std::size_t max_iterations = 0;
  /// Anneal seed; iteration k uses seed + k.
  std::uint64_t seed = 0;
  AnnealParams anneal;
};

struct GreedyResult {
  FleetSolution fleet;
  bool complete = false;
  bool stuck = false;
  /// (test id, cars still needed) when the loop stopped early.
  std::vector<std::pair<std::size_t, std::int64_t>> unsatisfied;
  std::string diagnostic;
  /// ExportOnly: the first iteration's model.
  std::optional<LinearModel> exported;
};

/// Vehicle-greedy loop: configure n_bunch vehicles for maximum weighted
/// coverage of the remaining tests, keep the vehicles that cover something,
/// lower the car counts, repeat.
GreedyResult run_greedy(const Dataset& d, const GreedyConfig& cfg);

struct BisectionResult {
  std::size_t n_min = 0;
  /// False when a heuristic or a timeout was involved: n_min is then only an upper bound.
  bool proven_optimal = false;
  FleetSolution fleet;
  std::vector<std::pair<std::size_t, SolveStatus>> probes;
};

class BisectionError : public std::runtime_error {
 public:
  BisectionError(const std::string& message, std::vector<std::string> evidence)
      : std::runtime_error(message), evidence_(std::move(evidence)) {}
  const std::vector<std::string>& evidence() const { return evidence_; }

 private:
  std::vector<std::string> evidence_;
};

/// Binary search for the smallest n whose SAT model is solvable. n_max = 0
/// means the total number of required cars.
BisectionResult run_bisection(const Dataset& d, std::size_t n_max, Backend backend,
                              std::chrono::milliseconds time_limit, std::uint64_t seed = 0,
                              const AnnealParams& anneal = {});

/// Total cars still needed over all tests.
std::int64_t required_units(const Dataset& d);

}  // namespace fleetopt
