#include "fleetopt/greedy.hpp"

#include <algorithm>
#include <numeric>

#include "fleetopt/compiler.hpp"

namespace fleetopt {

const char* to_string(Backend b) {
  switch (b) {
    case Backend::Exact: return "exact";
    case Backend::Anneal: return "anneal";
    case Backend::ExportOnly: return "export-only";
  }
  return "unknown";
}

std::int64_t required_units(const Dataset& d) {
  std::int64_t total = 0;
  for (const auto& t : d.tests) total += t.cars_needed;
  return total;
}

namespace {

using Clock = std::chrono::steady_clock;

SolveResult solve_with(Backend backend, const LinearModel& model, SolveTarget target,
                       std::chrono::milliseconds limit, std::uint64_t seed, const AnnealParams& anneal) {
  SolveRequest req{&model, limit, seed, target};
  return backend == Backend::Anneal ? solve_anneal(req, anneal) : solve_exact(req);
}

}  // namespace

GreedyResult run_greedy(const Dataset& d, const GreedyConfig& cfg) {
  if (cfg.n_bunch == 0) throw std::invalid_argument("n_bunch must be at least 1");
  GreedyResult out;
  std::vector<std::int64_t> remaining;
  for (const auto& t : d.tests) remaining.push_back(t.cars_needed);
  auto outstanding = [&] { return std::accumulate(remaining.begin(), remaining.end(), std::int64_t{0}); };
  const std::size_t max_iterations =
      cfg.max_iterations > 0 ? cfg.max_iterations : static_cast<std::size_t>(std::max<std::int64_t>(outstanding(), 1));

  for (std::size_t iteration = 1; outstanding() > 0; ++iteration) {
    if (iteration > max_iterations) {
      out.diagnostic = "stopped after " + std::to_string(max_iterations) + " iterations";
      break;
    }
    auto started = Clock::now();
    Dataset sub = d;
    sub.schedule.reset();
    sub.tests.clear();
    std::vector<std::size_t> origin;
    for (std::size_t j = 0; j < d.tests.size(); ++j) {
      if (remaining[j] == 0) continue;
      TestRequirement t = d.tests[j];
      t.id = sub.tests.size();
      t.cars_needed = remaining[j];
      sub.tests.push_back(std::move(t));
      origin.push_back(j);
    }
    LinearModel model = compile(sub, cfg.n_bunch, CompileMode::MaxSat);
    if (cfg.backend == Backend::ExportOnly) {
      out.exported = std::move(model);
      out.diagnostic = "export only: no solver run";
      break;
    }
    SolveResult res = solve_with(cfg.backend, model, SolveTarget::Maximize, cfg.per_iteration_time_limit,
                                 cfg.seed + iteration, cfg.anneal);

    IterationRecord rec;
    rec.iteration = iteration;
    rec.solver_status = res.status;
    rec.feasible_rate = res.feasible_rate();
    if (res.assignment) {
      FleetSolution bunch = decode(model, *res.assignment, sub);
      for (std::size_t v = 0; v < bunch.vehicles.size(); ++v) {
        const auto& vehicle = bunch.vehicles[v];
        if (!is_buildable(d, vehicle)) {
          out.fleet.violations.push_back("iteration " + std::to_string(iteration) + ": solver vehicle " +
                                         std::to_string(v) + " is not buildable; discarded");
          continue;
        }
        std::vector<std::pair<std::size_t, std::int64_t>> covered;
        for (std::size_t local = 0; local < sub.tests.size(); ++local) {
          std::size_t j = origin[local];
          if (remaining[j] > 0 && meets_test(d.tests[j], vehicle.features)) {
            --remaining[j];
            covered.emplace_back(j, 1);
          }
        }
        if (covered.empty()) continue;
        std::size_t index = out.fleet.vehicles.size();
        out.fleet.vehicles.push_back(vehicle);
        ++rec.vehicles_emitted;
        for (const auto& [j, cars] : covered) {
          out.fleet.assignment[j].push_back(index);
          auto it = std::find_if(rec.newly_covered.begin(), rec.newly_covered.end(),
                                 [&, j = j](const auto& e) { return e.first == j; });
          if (it == rec.newly_covered.end()) rec.newly_covered.emplace_back(j, cars);
          else it->second += cars;
        }
      }
    }
    std::sort(rec.newly_covered.begin(), rec.newly_covered.end());
    rec.tests_remaining = outstanding();
    rec.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started);
    out.fleet.trace.push_back(rec);

    if (rec.newly_covered.empty()) {
      out.stuck = true;
      if (!res.assignment) {
        out.diagnostic = "iteration " + std::to_string(iteration) + ": solver returned " + to_string(res.status);
        for (const auto& v : res.violations) out.diagnostic += "; violates " + to_string(v);
      } else {
        out.diagnostic = "iteration " + std::to_string(iteration) + ": no remaining test could be covered";
      }
      break;
    }
  }

  for (std::size_t j = 0; j < remaining.size(); ++j)
    if (remaining[j] > 0) out.unsatisfied.emplace_back(j, remaining[j]);
  out.complete = out.unsatisfied.empty();
  out.fleet.feasible = out.fleet.violations.empty();
  return out;
}

BisectionResult run_bisection(const Dataset& d, std::size_t n_max, Backend backend,
                              std::chrono::milliseconds time_limit, std::uint64_t seed, const AnnealParams& anneal) {
  if (backend == Backend::ExportOnly) throw std::invalid_argument("bisection needs a solving backend");
  Dataset base = d;
  base.schedule.reset();
  if (n_max == 0) n_max = static_cast<std::size_t>(std::max<std::int64_t>(required_units(base), 1));

  BisectionResult out;
  bool all_proofs = backend == Backend::Exact;
  auto attempt = [&](std::size_t n, FleetSolution& sink, SolveResult& res) {
    LinearModel model = compile(base, n, CompileMode::Sat);
    res = solve_with(backend, model, SolveTarget::FindFeasible, time_limit, seed + n, anneal);
    out.probes.emplace_back(n, res.status);
    if (!res.assignment) {
      if (res.status != SolveStatus::Infeasible) all_proofs = false;
      return false;
    }
    sink = decode(model, *res.assignment, base);
    return true;
  };

  FleetSolution best;
  SolveResult res;
  if (!attempt(n_max, best, res)) {
    std::vector<std::string> evidence;
    for (const auto& v : res.violations) evidence.push_back(to_string(v));
    if (evidence.empty()) evidence.push_back(std::string("solver status ") + to_string(res.status));
    throw BisectionError("no solution with " + std::to_string(n_max) + " vehicles", std::move(evidence));
  }
  std::size_t lo = 1, hi = n_max;
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (attempt(mid, best, res)) hi = mid;
    else lo = mid + 1;
  }
  out.n_min = hi;
  out.proven_optimal = all_proofs;
  out.fleet = std::move(best);
  return out;
}

}  // namespace fleetopt
