#include "doctest.h"

#include <sstream>

#include "common.hpp"
#include "fleetopt/compiler.hpp"
#include "fleetopt/greedy.hpp"
#include "fleetopt/oracle.hpp"
#include "fleetopt/report.hpp"
#include "fleetopt/simplify.hpp"
#include "fleetopt/synthetic.hpp"

using namespace fleetopt;
using namespace fleetopt::testing;
using std::chrono::milliseconds;

namespace {

GreedyResult greedy(const Dataset& d, std::size_t n_bunch = 1, Backend backend = Backend::Exact) {
  GreedyConfig cfg;
  cfg.n_bunch = n_bunch;
  cfg.backend = backend;
  cfg.per_iteration_time_limit = milliseconds(10000);
  cfg.seed = 3;
  return run_greedy(d, cfg);
}

BisectionResult bisect(const Dataset& d, std::size_t n_max = 0) {
  return run_bisection(d, n_max, Backend::Exact, milliseconds(10000));
}

// Validity of a finished fleet, checked with the oracle's own semantics.
void check_fleet(const Dataset& d, const FleetSolution& fleet) {
  for (const auto& v : fleet.vehicles) CHECK(oracle::buildable(d, v));
  for (const auto& [test, users] : fleet.assignment) {
    CHECK(static_cast<std::int64_t>(users.size()) <= d.tests[test].cars_needed);
    for (auto i : users) CHECK(oracle::meets(d.tests[test], fleet.vehicles.at(i).features));
  }
}

bool fully_assigned(const Dataset& d, const FleetSolution& fleet) {
  for (const auto& t : d.tests) {
    auto it = fleet.assignment.find(t.id);
    if (it == fleet.assignment.end() || static_cast<std::int64_t>(it->second.size()) != t.cars_needed) return false;
  }
  return true;
}

Dataset small(std::uint64_t seed) {
  return simplify(generate_synthetic({.features = 5, .types = 2, .tests = 4, .rules = 4, .groups = 1, .seed = seed}));
}

}  // namespace

TEST_SUITE("greedy") {
  TEST_CASE("single test") {
    Dataset d = blank(2, 1);
    make_test(d, ids({0}));
    auto r = greedy(d);
    CHECK(r.complete);
    CHECK(r.fleet.vehicles.size() == 1);
    CHECK(r.fleet.trace.size() == 1);
    CHECK(r.fleet.trace[0].tests_remaining == 0);
  }

  TEST_CASE("one configuration covers everything") {
    Dataset d = blank(4, 1);
    for (std::size_t mask = 1; mask < 16; ++mask) {
      std::vector<FeatureId> present;
      for (std::size_t k = 0; k < 4; ++k)
        if (mask >> k & 1) present.push_back(FeatureId(k));
      make_test(d, present);
    }
    auto r = greedy(simplify(d));
    CHECK(r.complete);
    CHECK(r.fleet.vehicles.size() == 1);
  }

  TEST_CASE("pinned instance against the oracle minimum") {
    auto d = simplify(generate_synthetic({.features = 8, .types = 2, .tests = 10, .seed = 3}));
    auto r = greedy(d);
    REQUIRE(r.complete);
    check_fleet(d, r.fleet);
    CHECK(r.fleet.vehicles.size() == 4);
    CHECK(oracle::min_fleet(d, 4) == 4u);
    CHECK(r.fleet.vehicles.size() >= *oracle::min_fleet(d, 4));
  }

  TEST_CASE("greedy can be worse than the optimum") {
    auto d = simplify(generate_synthetic({.features = 5, .types = 2, .tests = 4, .seed = 79}));
    auto r = greedy(d);
    REQUIRE(r.complete);
    CHECK(r.fleet.vehicles.size() == 3);
    auto b = bisect(d);
    CHECK(b.n_min == 2);
    CHECK(b.proven_optimal);
    CHECK(oracle::min_fleet(d, 4) == 2u);
  }

  TEST_CASE("progress, bounds and validity") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      auto d = simplify(generate_synthetic({.features = 6 + seed % 5, .types = 1 + seed % 3, .tests = 3 + seed % 6,
                                            .rules = 6, .groups = seed % 3, .seed = seed}));
      for (std::size_t bunch : {1, 2}) {
        auto r = greedy(d, bunch);
        CAPTURE(seed);
        CAPTURE(bunch);
        REQUIRE(r.complete);
        CHECK_FALSE(r.stuck);
        CHECK(fully_assigned(d, r.fleet));
        check_fleet(d, r.fleet);
        CHECK(static_cast<std::int64_t>(r.fleet.vehicles.size()) <= required_units(d));
        CHECK(static_cast<std::int64_t>(r.fleet.trace.size()) <= required_units(d));
        std::int64_t last = required_units(d);
        for (const auto& rec : r.fleet.trace) {
          CHECK(rec.tests_remaining < last);
          last = rec.tests_remaining;
        }
        CHECK(last == 0);
      }
    }
  }

  TEST_CASE("each round covers the single-vehicle maximum") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      Dataset d = small(seed);
      for (auto& t : d.tests) t.weight = Rational(1 + static_cast<std::int64_t>((seed + t.id) % 3), 1);
      auto r = greedy(d);
      REQUIRE(r.complete);
      std::vector<std::int64_t> left;
      for (const auto& t : d.tests) left.push_back(t.cars_needed);
      for (const auto& rec : r.fleet.trace) {
        Dataset live = d;
        live.tests.clear();
        for (std::size_t j = 0; j < d.tests.size(); ++j)
          if (left[j] > 0) {
            live.tests.push_back(d.tests[j]);
            live.tests.back().id = live.tests.size() - 1;
            live.tests.back().cars_needed = left[j];
          }
        Rational got{0};
        for (auto [test, cars] : rec.newly_covered) {
          got += d.tests[test].weight * cars;
          left[test] -= cars;
        }
        CAPTURE(seed);
        CHECK(got == oracle::max_coverage(live, 1));
      }
    }
  }

  TEST_CASE("a test no configuration can meet leaves the loop stuck") {
    Dataset d = blank(2, 1);
    d.forbidden_per_type[0] = ids({1});
    make_test(d, ids({0}));
    make_test(d, ids({1}));
    auto r = greedy(d);
    CHECK_FALSE(r.complete);
    CHECK(r.stuck);
    REQUIRE(r.unsatisfied.size() == 1);
    CHECK(r.unsatisfied[0] == std::pair<std::size_t, std::int64_t>{1, 1});
    CHECK_FALSE(r.diagnostic.empty());
    CHECK(r.fleet.vehicles.size() == 1);
  }

  TEST_CASE("iteration cap") {
    Dataset d = blank(2, 1);
    d.groups.push_back({ids({0, 1})});
    make_test(d, ids({0}));
    make_test(d, ids({1}));
    GreedyConfig cfg;
    cfg.max_iterations = 1;
    auto r = run_greedy(d, cfg);
    CHECK_FALSE(r.complete);
    CHECK_FALSE(r.stuck);
    CHECK(r.fleet.trace.size() == 1);
    CHECK(r.unsatisfied.size() == 1);
  }

  TEST_CASE("export only") {
    Dataset d = small(2);
    auto r = greedy(d, 2, Backend::ExportOnly);
    REQUIRE(r.exported.has_value());
    CHECK(r.exported->variables().size() == 2 * (d.feature_count() + d.type_count() + d.test_count()));
    CHECK(r.fleet.vehicles.empty());
    CHECK_FALSE(r.complete);
  }

  TEST_CASE("anneal backend") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Dataset d = small(seed);
      auto r = greedy(d, 1, Backend::Anneal);
      check_fleet(d, r.fleet);
      CHECK(r.fleet.feasible);
      for (const auto& rec : r.fleet.trace) {
        CHECK(rec.feasible_rate >= 0.0);
        CHECK(rec.feasible_rate <= 1.0);
      }
      auto again = greedy(d, 1, Backend::Anneal);
      CHECK(fleet_json(d, again.fleet) == fleet_json(d, r.fleet));
    }
  }

  TEST_CASE("bisection examples") {
    Dataset one = blank(2, 1);
    make_test(one, ids({0}));
    CHECK(bisect(one).n_min == 1);

    Dataset split = blank(2, 1);
    make_test(split, ids({0}));
    make_test(split, {}, ids({0}));
    auto b = bisect(split);
    CHECK(b.n_min == 2);
    CHECK(b.proven_optimal);
    check_fleet(split, b.fleet);
    CHECK(fully_assigned(split, b.fleet));
  }

  TEST_CASE("bisection below the answer fails with evidence") {
    Dataset split = blank(2, 1);
    make_test(split, ids({0}));
    make_test(split, {}, ids({0}));
    try {
      bisect(split, 1);
      FAIL("expected a bisection error");
    } catch (const BisectionError& e) {
      CHECK_FALSE(e.evidence().empty());
    }
  }

  TEST_CASE("bisection equals the oracle") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
      Dataset d = small(seed);
      auto b = bisect(d);
      CAPTURE(seed);
      CHECK(b.n_min == oracle::min_fleet(d, 8));
      CHECK(b.proven_optimal);
      check_fleet(d, b.fleet);
      CHECK(fully_assigned(d, b.fleet));
      auto g = greedy(d);
      CHECK(g.fleet.vehicles.size() >= b.n_min);
      // Infeasible one below, feasible at the answer.
      for (auto [n, status] : b.probes) {
        if (n < b.n_min) CHECK(status == SolveStatus::Infeasible);
        else CHECK(status == SolveStatus::Feasible);
      }
    }
  }

  TEST_CASE("heuristic bisection is only an upper bound") {
    Dataset d = small(4);
    auto b = run_bisection(d, 0, Backend::Anneal, milliseconds(2000), 1);
    CHECK_FALSE(b.proven_optimal);
    CHECK(b.n_min >= *oracle::min_fleet(d, 8));
  }
}

TEST_SUITE("greedy") {
  TEST_CASE("report of a single round") {
    IterationRecord r;
    r.iteration = 1;
    r.vehicles_emitted = 1;
    r.tests_remaining = 0;
    r.newly_covered = {{0, 1}, {2, 2}};
    r.wall_time = milliseconds(7);
    r.solver_status = SolveStatus::Optimal;
    auto j = report_json({r}, "abc", {{"n_bunch", 1}});
    REQUIRE(j["rows"].size() == 1);
    CHECK(j["totals"]["vehicles"] == 1);
    CHECK(j["totals"]["wall_ms"] == 7);
    CHECK(j["totals"]["covered_units"] == 3);
    CHECK(j["totals"]["tests_remaining"] == 0);
    CHECK(j["rows"][0]["status"] == "optimal");
    CHECK(report_csv({r}) == "iter,vehicles,tests_remaining,wall_ms,status\n1,1,0,7,optimal\n");
  }

  TEST_CASE("report totals are row sums") {
    auto d = small(6);
    auto g = greedy(d, 1);
    auto j = report_json(g.fleet.trace, "x", nlohmann::json::object());
    std::int64_t vehicles = 0, wall = 0;
    for (const auto& row : j["rows"]) {
      vehicles += row["vehicles"].get<std::int64_t>();
      wall += row["wall_ms"].get<std::int64_t>();
    }
    CHECK(j["totals"]["vehicles"] == vehicles);
    CHECK(j["totals"]["wall_ms"] == wall);
    CHECK(j["totals"]["iterations"] == g.fleet.trace.size());
    CHECK(vehicles == static_cast<std::int64_t>(g.fleet.vehicles.size()));
  }

  TEST_CASE("fleet json round trip") {
    auto d = small(8);
    auto g = greedy(d, 2);
    auto j = fleet_json(d, g.fleet);
    auto back = fleet_from_json(d, j);
    CHECK(back.vehicles == g.fleet.vehicles);
    CHECK(back.assignment == g.fleet.assignment);
    j["vehicles"][0]["type"] = "nope";
    CHECK_THROWS_AS(fleet_from_json(d, j), std::invalid_argument);
  }
}
