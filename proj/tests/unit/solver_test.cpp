#include "doctest.h"

#include "../support/brute.hpp"
#include "common.hpp"
#include "fleetopt/compiler.hpp"
#include "fleetopt/oracle.hpp"
#include "fleetopt/solver.hpp"
#include "fleetopt/synthetic.hpp"

using namespace fleetopt;
using namespace fleetopt::testing;
using std::chrono::milliseconds;

namespace {

SolveRequest request(const LinearModel& m, SolveTarget target = SolveTarget::Maximize, std::uint64_t seed = 0) {
  return {&m, milliseconds(10000), seed, target};
}

Dataset tiny(std::uint64_t seed) {
  auto d = generate_synthetic({.features = 3 + seed % 3, .types = 1 + seed % 2, .tests = 2 + seed % 2, .rules = 5,
                               .groups = seed % 2, .seed = seed});
  for (auto& t : d.tests) t.weight = Rational(1 + static_cast<std::int64_t>((seed + t.id) % 3), 1 + t.id % 2);
  return d;
}

// Best objective over all feasible assignments.
std::optional<Rational> brute_optimum(const LinearModel& m) {
  std::optional<Rational> best;
  for_each_assignment(m, [&](const std::vector<std::uint8_t>& x, std::size_t, bool ok) {
    if (!ok) return;
    auto v = *check_assignment(m, x).objective;
    if (!best || v > *best) best = v;
  });
  return best;
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("contradictory bounds") {
    LinearModel m;
    m.add_variables({VariableKey::b(0, 0)});
    auto x = LinearExpr::var(VariableKey::b(0, 0));
    m.add_constraint(make_constraint(x, Sense::Ge, 1, "lo"));
    m.add_constraint(make_constraint(x, Sense::Le, 0, "hi"));
    CHECK(solve_exact(request(m, SolveTarget::FindFeasible)).status == SolveStatus::Infeasible);
    CHECK(solve_exact(request(m)).status == SolveStatus::Infeasible);
    auto a = solve_anneal(request(m));
    CHECK(a.status == SolveStatus::TimeoutNoSolution);
    CHECK(a.best_infeasible.has_value());
    CHECK_FALSE(a.violations.empty());
  }

  TEST_CASE("trivial model") {
    Dataset d = blank(2, 1);
    make_test(d, ids({0}));
    auto m = compile(d, 1, CompileMode::Sat);
    auto e = solve_exact(request(m, SolveTarget::FindFeasible));
    CHECK(e.status == SolveStatus::Feasible);
    REQUIRE(e.assignment.has_value());
    CHECK(check_assignment(m, *e.assignment).feasible);
    auto start = std::chrono::steady_clock::now();
    auto a = solve_anneal({&m, milliseconds(1000), 5, SolveTarget::FindFeasible});
    CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(1));
    CHECK(a.status == SolveStatus::Feasible);
    REQUIRE(a.assignment.has_value());
    CHECK(check_assignment(m, *a.assignment).feasible);
  }

  TEST_CASE("maxsat optimum equals the oracle") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      auto d = tiny(seed);
      for (std::size_t n : {1, 2}) {
        auto m = compile(d, n, CompileMode::MaxSat);
        auto r = solve_exact(request(m));
        CAPTURE(seed);
        CAPTURE(n);
        REQUIRE(r.status == SolveStatus::Optimal);
        CHECK(*r.objective == oracle::max_coverage(d, n));
        CHECK(check_assignment(m, *r.assignment).feasible);
        CHECK(r.stats.best_bound == r.objective);
      }
    }
  }

  TEST_CASE("optimum equals enumeration on the raw model") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto d = tiny(seed);
      auto m = compile(d, 1, CompileMode::MaxSat);
      if (m.variables().size() > 16) continue;
      CHECK(solve_exact(request(m)).objective == brute_optimum(m));
    }
  }

  TEST_CASE("minimize target") {
    LinearModel m;
    m.add_variables({VariableKey::b(0, 0), VariableKey::b(0, 1), VariableKey::b(0, 2)});
    auto x = [](std::uint32_t k) { return LinearExpr::var(VariableKey::b(0, k)); };
    m.add_constraint(make_constraint(x(0) + x(1), Sense::Ge, 1, "a"));
    m.add_constraint(make_constraint(x(1) + x(2), Sense::Ge, 1, "b"));
    m.set_objective({ObjectiveSense::Minimize, {{3, VariableKey::b(0, 0)}, {5, VariableKey::b(0, 1)}, {3, VariableKey::b(0, 2)}}});
    auto r = solve_exact(request(m, SolveTarget::Minimize));
    CHECK(r.status == SolveStatus::Optimal);
    CHECK(*r.objective == 5);
  }

  TEST_CASE("sat models below the minimum fleet are infeasible") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto d = tiny(seed);
      auto opt = oracle::min_fleet(d, 6);
      REQUIRE(opt.has_value());
      CAPTURE(seed);
      if (*opt > 1) {
        auto below = compile(d, *opt - 1, CompileMode::Sat);
        CHECK(solve_exact(request(below, SolveTarget::FindFeasible)).status == SolveStatus::Infeasible);
      }
      auto at = compile(d, *opt, CompileMode::Sat);
      CHECK(solve_exact(request(at, SolveTarget::FindFeasible)).status == SolveStatus::Feasible);
    }
  }

  TEST_CASE("anneal is deterministic under a seed") {
    auto d = generate_synthetic({.features = 10, .types = 2, .tests = 6, .rules = 12, .groups = 2, .seed = 11});
    auto m = compile(d, 2, CompileMode::MaxSat);
    auto a = solve_anneal(request(m, SolveTarget::Maximize, 99));
    auto b = solve_anneal(request(m, SolveTarget::Maximize, 99));
    CHECK(a.status == b.status);
    CHECK(a.assignment == b.assignment);
    CHECK(a.objective == b.objective);
    CHECK(a.best_infeasible == b.best_infeasible);
    CHECK(a.stats.sweeps == b.stats.sweeps);
    CHECK(a.stats.feasible_restarts == b.stats.feasible_restarts);
  }

  TEST_CASE("anneal never beats the exact optimum") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto d = tiny(seed);
      auto m = compile(d, 2, CompileMode::MaxSat);
      auto e = solve_exact(request(m));
      auto a = solve_anneal(request(m, SolveTarget::Maximize, seed));
      if (a.assignment) {
        CHECK(check_assignment(m, *a.assignment).feasible);
        CHECK(*a.objective <= *e.objective);
        if (*a.objective < *e.objective) MESSAGE("seed " << seed << " gap " << to_string(*e.objective - *a.objective));
      }
      CHECK(a.status != SolveStatus::Optimal);
    }
  }

  TEST_CASE("adding a row never improves the optimum") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto d = tiny(seed);
      auto m = compile(d, 2, CompileMode::MaxSat);
      auto before = solve_exact(request(m));
      LinearModel tighter = m;
      // Forbid the first feature on vehicle 0.
      tighter.add_constraint(make_constraint(LinearExpr::var(VariableKey::b(0, 0)), Sense::Le, 0, "extra"));
      auto after = solve_exact(request(tighter));
      CHECK(*after.objective <= *before.objective);
    }
  }

  TEST_CASE("timeout keeps the incumbent") {
    auto d = generate_synthetic({.features = 40, .types = 4, .tests = 80, .rules = 200, .groups = 6, .seed = 2});
    auto m = compile(d, 6, CompileMode::MaxSat);
    auto r = solve_exact({&m, milliseconds(1), 0, SolveTarget::Maximize});
    CHECK((r.status == SolveStatus::Feasible || r.status == SolveStatus::TimeoutNoSolution ||
           r.status == SolveStatus::Optimal));
    if (r.assignment) CHECK(check_assignment(m, *r.assignment).feasible);
  }

  TEST_CASE("optimum is stable across runs") {
    auto d = generate_synthetic({.features = 12, .types = 2, .tests = 8, .rules = 20, .groups = 2, .seed = 5});
    auto m = compile(d, 2, CompileMode::MaxSat);
    auto a = solve_exact(request(m));
    auto b = solve_exact(request(m));
    CHECK(a.status == b.status);
    CHECK(a.objective == b.objective);
    CHECK(a.assignment == b.assignment);
  }
}
