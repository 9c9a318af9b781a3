#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fleetopt/fleet.hpp"
#include "fleetopt/linmodel.hpp"
#include "fleetopt/model.hpp"

namespace fleetopt {

enum class SolveTarget { FindFeasible, Maximize, Minimize };

struct SolveRequest {
  const LinearModel* model = nullptr;
  std::chrono::milliseconds time_limit{5000};
  std::uint64_t seed = 0;
  /// Maximize/Minimize use the model objective (a missing objective counts as 0).
  SolveTarget target = SolveTarget::Maximize;
};

/// Annealing schedule. The run length is fixed by these counts so results
/// under a seed do not depend on machine speed; the time limit only cuts a
/// run short.
struct AnnealParams {
  std::size_t restarts = 16;
  std::size_t sweeps = 400;
  /// Start and end temperature as multiples of the penalty weight and in
  /// absolute units respectively.
  double start_temperature = 2.0;
  double end_temperature = 0.05;
};

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t sweeps = 0;
  std::uint64_t restarts = 0;
  std::uint64_t feasible_restarts = 0;
  std::chrono::milliseconds wall_time{0};
  std::optional<Rational> best_bound;
};

struct SolveResult {
  SolveStatus status = SolveStatus::TimeoutNoSolution;
  /// Dense values in model variable order.
  std::optional<std::vector<std::uint8_t>> assignment;
  std::optional<Rational> objective;
  SolveStats stats;
  /// Anneal without a feasible sample: the least-violated sample and its violations.
  std::optional<std::vector<std::uint8_t>> best_infeasible;
  std::vector<Violation> violations;

  double feasible_rate() const {
    return stats.restarts == 0 ? 1.0
                               : static_cast<double>(stats.feasible_restarts) / static_cast<double>(stats.restarts);
  }
};

/// Depth-first branch-and-bound with bound propagation on every row and the
/// objective treated as a row once an incumbent exists. Returns Optimal when
/// the search completes (Feasible for FindFeasible), Feasible with the
/// incumbent on timeout, Infeasible or TimeoutNoSolution otherwise.
SolveResult solve_exact(const SolveRequest& req);

/// Penalty-method simulated annealing with single-bit Metropolis moves.
/// Never claims optimality.
SolveResult solve_anneal(const SolveRequest& req, const AnnealParams& params = {});

}  // namespace fleetopt
