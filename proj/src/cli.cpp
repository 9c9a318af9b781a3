#include "fleetopt/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "fleetopt/compiler.hpp"
#include "fleetopt/dataset_io.hpp"
#include "fleetopt/greedy.hpp"
#include "fleetopt/linmodel.hpp"
#include "fleetopt/oracle.hpp"
#include "fleetopt/report.hpp"
#include "fleetopt/scheduling.hpp"
#include "fleetopt/simplify.hpp"
#include "fleetopt/synthetic.hpp"

namespace fleetopt::cli {

namespace {

namespace fs = std::filesystem;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
}

Dataset load(const std::string& path) { return parse_dataset(read_file(path)); }

Backend parse_backend(const std::string& s) {
  if (s == "exact") return Backend::Exact;
  if (s == "anneal") return Backend::Anneal;
  return Backend::ExportOnly;
}

const std::vector<std::string> kBackends{"exact", "anneal", "export-only"};

struct SolveOptions {
  std::string instance;
  std::string mode = "greedy";
  std::size_t n_bunch = 1;
  std::string backend = "exact";
  std::uint64_t seed = 0;
  std::int64_t time_limit_ms = 5000;
  std::string format = "lp";
  std::string out = "out";
  std::size_t max_iterations = 0;
  std::size_t n_max = 0;
};

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  Dataset raw = load(o.instance);
  SimplifyReport sr;
  Dataset d = simplify(raw, &sr);
  const std::string digest = instance_digest(raw);
  const fs::path dir = fs::path(o.out) / digest;
  write_file(dir / "instance.simplified.txt", serialize_dataset(d));
  const Backend backend = parse_backend(o.backend);
  const std::chrono::milliseconds limit{o.time_limit_ms};

  nlohmann::json config = {{"mode", o.mode},       {"n_bunch", o.n_bunch}, {"backend", o.backend},
                           {"seed", o.seed},       {"time_limit_ms", o.time_limit_ms},
                           {"max_iterations", o.max_iterations}};

  if (o.mode == "bisect") {
    if (backend == Backend::ExportOnly) throw InputError("bisection needs --backend exact or anneal");
    BisectionResult res;
    try {
      res = run_bisection(d, o.n_max, backend, limit, o.seed);
    } catch (const BisectionError& e) {
      err << "error: " << e.what() << '\n';
      for (const auto& line : e.evidence()) err << "  " << line << '\n';
      return kIncomplete;
    }
    std::vector<IterationRecord> trace;
    for (std::size_t k = 0; k < res.probes.size(); ++k) {
      IterationRecord r;
      r.iteration = k + 1;
      r.vehicles_emitted = res.probes[k].first;
      r.solver_status = res.probes[k].second;
      bool solved = r.solver_status == SolveStatus::Optimal || r.solver_status == SolveStatus::Feasible;
      r.tests_remaining = solved ? 0 : required_units(d);
      trace.push_back(r);
    }
    nlohmann::json fleet = fleet_json(d, res.fleet);
    fleet["instance_digest"] = digest;
    fleet["n_min"] = res.n_min;
    fleet["proven_optimal"] = res.proven_optimal;
    fleet["complete"] = true;
    write_file(dir / "fleet.json", fleet.dump(2) + "\n");
    write_file(dir / "report.json", report_json(trace, digest, config).dump(2) + "\n");
    write_file(dir / "report.csv", report_csv(trace));
    out << "vehicles: " << res.n_min << (res.proven_optimal ? " (optimal)" : " (upper bound)") << '\n';
    out << "output: " << dir.string() << '\n';
    return kSuccess;
  }

  GreedyConfig cfg;
  cfg.n_bunch = o.n_bunch;
  cfg.backend = backend;
  cfg.per_iteration_time_limit = limit;
  cfg.max_iterations = o.max_iterations;
  cfg.seed = o.seed;
  GreedyResult res = run_greedy(d, cfg);
  if (res.exported) {
    const std::string name = "model." + o.format;
    write_file(dir / name, o.format == "mps" ? export_mps(*res.exported) : export_lp(*res.exported));
    out << "model: " << (dir / name).string() << '\n';
    return kSuccess;
  }
  nlohmann::json fleet = fleet_json(d, res.fleet);
  fleet["instance_digest"] = digest;
  fleet["complete"] = res.complete;
  nlohmann::json unsatisfied = nlohmann::json::array();
  for (const auto& [test, cars] : res.unsatisfied) unsatisfied.push_back({{"test", test}, {"cars", cars}});
  fleet["unsatisfied"] = unsatisfied;
  write_file(dir / "fleet.json", fleet.dump(2) + "\n");
  if (!res.fleet.trace.empty()) {
    write_file(dir / "report.json", report_json(res.fleet.trace, digest, config).dump(2) + "\n");
    write_file(dir / "report.csv", report_csv(res.fleet.trace));
  }
  out << "vehicles: " << res.fleet.vehicles.size() << '\n';
  out << "iterations: " << res.fleet.trace.size() << '\n';
  out << "output: " << dir.string() << '\n';
  if (!res.complete) {
    err << "incomplete: " << res.diagnostic << '\n';
    for (const auto& [test, cars] : res.unsatisfied) err << "  test " << test << " needs " << cars << " more\n";
    return kIncomplete;
  }
  return kSuccess;
}

int cmd_export(const std::string& instance, const std::string& mode, std::size_t n, const std::string& format,
               const std::string& out_path, std::ostream& out) {
  Dataset d = simplify(load(instance));
  LinearModel model = compile(d, n, mode == "sat" ? CompileMode::Sat : CompileMode::MaxSat);
  std::string text = format == "mps" ? export_mps(model) : export_lp(model);
  if (out_path.empty()) out << text;
  else write_file(out_path, text);
  return kSuccess;
}

int cmd_check(const std::string& instance, const std::string& assignment, const std::string& schedule_path,
              std::ostream& out, std::ostream& err) {
  Dataset d = simplify(load(instance));
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(assignment));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad solution file: ") + e.what());
  }
  FleetSolution fleet = fleet_from_json(d, j);
  std::vector<std::string> problems;
  for (const auto& [test, users] : fleet.assignment)
    if (test >= d.test_count()) throw InputError("solution names test " + std::to_string(test));
  if (!fleet.vehicles.empty()) {
    LinearModel model = compile(d, fleet.vehicles.size(), CompileMode::MaxSat);
    auto values = encode(model, fleet);
    for (const auto& v : check_assignment(model, values).violations) problems.push_back(to_string(v));
  }
  if (!schedule_path.empty()) {
    if (!d.schedule) throw InputError("instance has no schedule section");
    Schedule sched = parse_schedule_csv(read_file(schedule_path), *d.schedule);
    for (const auto& v : check_schedule(d, *d.schedule, sched, fleet.vehicles).violations)
      problems.push_back(std::string(to_string(v.rule)) + ": " + v.message);
  }
  std::int64_t missing = 0;
  for (const auto& t : d.tests) {
    auto it = fleet.assignment.find(t.id);
    std::int64_t have = it == fleet.assignment.end() ? 0 : static_cast<std::int64_t>(it->second.size());
    missing += std::max<std::int64_t>(0, t.cars_needed - have);
  }
  if (!problems.empty()) {
    err << problems.size() << " violation(s)\n";
    for (const auto& p : problems) err << "  " << p << '\n';
    return kIncomplete;
  }
  out << "valid: " << fleet.vehicles.size() << " vehicles, " << missing << " test units uncovered\n";
  return missing == 0 ? kSuccess : kIncomplete;
}

int cmd_schedule(const std::string& instance, std::size_t n, const std::string& backend, std::uint64_t seed,
                 std::int64_t time_limit_ms, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  Dataset raw = load(instance);
  Dataset d = simplify(raw);
  if (!d.schedule) throw InputError("instance has no schedule section");
  LinearModel model = compile_schedule(d, *d.schedule, n);
  SolveRequest req{&model, std::chrono::milliseconds(time_limit_ms), seed, SolveTarget::FindFeasible};
  SolveResult res = parse_backend(backend) == Backend::Anneal ? solve_anneal(req) : solve_exact(req);
  if (!res.assignment) {
    err << "no schedule found: " << to_string(res.status) << '\n';
    return kIncomplete;
  }
  auto decoded = decode_schedule(model, *res.assignment, d, *d.schedule);
  if (!decoded) {
    err << "solver returned a vehicle without a single type\n";
    return kIncomplete;
  }
  auto check = check_schedule(d, *d.schedule, decoded->schedule, decoded->vehicles);
  const fs::path dir = fs::path(out_dir) / instance_digest(raw);
  write_file(dir / "schedule.csv", schedule_csv(*d.schedule, decoded->schedule));
  FleetSolution fleet;
  fleet.vehicles = decoded->vehicles;
  for (const auto& en : decoded->schedule.entries)
    fleet.assignment[d.schedule->expanded_tests[en.expanded].origin].push_back(en.vehicle);
  for (auto& [test, users] : fleet.assignment) std::sort(users.begin(), users.end());
  fleet.feasible = check.valid;
  for (const auto& v : check.violations) fleet.violations.push_back(std::string(to_string(v.rule)) + ": " + v.message);
  write_file(dir / "fleet.json", fleet_json(d, fleet).dump(2) + "\n");
  out << "schedule: " << (dir / "schedule.csv").string() << '\n';
  if (!check.valid) {
    for (const auto& v : fleet.violations) err << "  " << v << '\n';
    return kIncomplete;
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Test fleet configuration optimizer", "fleetopt"};
  app.require_subcommand(1);

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Minimize the test fleet for an instance");
  solve->add_option("instance", so.instance, "Instance file")->required();
  solve->add_option("--mode", so.mode, "greedy or bisect")->check(CLI::IsMember({"greedy", "bisect"}));
  solve->add_option("--n-bunch", so.n_bunch, "Vehicles configured per greedy iteration")->check(CLI::PositiveNumber);
  solve->add_option("--backend", so.backend, "exact, anneal or export-only")->check(CLI::IsMember(kBackends));
  solve->add_option("--seed", so.seed, "Anneal seed");
  solve->add_option("--time-limit-ms", so.time_limit_ms, "Per-solve time limit")->check(CLI::PositiveNumber);
  solve->add_option("--format", so.format, "Export format for export-only")->check(CLI::IsMember({"lp", "mps"}));
  solve->add_option("--out", so.out, "Output directory");
  solve->add_option("--max-iterations", so.max_iterations, "Greedy iteration cap (0: total cars)");
  solve->add_option("--n-max", so.n_max, "Bisection upper bound (0: total cars)");

  std::string ex_instance, ex_mode = "maxsat", ex_format = "lp", ex_out;
  std::size_t ex_n = 1;
  auto* exp = app.add_subcommand("export", "Write the compiled model as LP or MPS");
  exp->add_option("instance", ex_instance, "Instance file")->required();
  exp->add_option("--mode", ex_mode, "sat or maxsat")->check(CLI::IsMember({"sat", "maxsat"}));
  exp->add_option("--n", ex_n, "Vehicle count")->check(CLI::PositiveNumber);
  exp->add_option("--format", ex_format, "lp or mps")->check(CLI::IsMember({"lp", "mps"}));
  exp->add_option("--out", ex_out, "Output file (default: standard output)");

  SyntheticParams gp;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a seeded synthetic instance");
  gen->add_option("--f", gp.features, "Features")->check(CLI::PositiveNumber);
  gen->add_option("--o", gp.types, "Types")->check(CLI::PositiveNumber);
  gen->add_option("--q", gp.tests, "Tests");
  gen->add_option("--rules", gp.rules, "Rules to draw");
  gen->add_option("--groups", gp.groups, "Feature groups");
  gen->add_option("--anchors", gp.anchors, "Legal configurations behind rules and tests (0: default)");
  gen->add_option("--seed", gp.seed, "Seed");
  gen->add_option("--out", gen_out, "Output file (default: standard output)");

  std::string or_what, or_instance;
  std::size_t or_n = 1, or_cap = 8;
  auto* orc = app.add_subcommand("oracle", "Brute-force answers for tiny instances");
  orc->add_option("query", or_what, "configs, min-fleet or max-coverage")
      ->required()
      ->check(CLI::IsMember({"configs", "min-fleet", "max-coverage"}));
  orc->add_option("instance", or_instance, "Instance file")->required();
  orc->add_option("--n", or_n, "Fleet size for max-coverage");
  orc->add_option("--n-cap", or_cap, "Largest fleet tried by min-fleet");

  std::string ck_instance, ck_assignment, ck_schedule;
  auto* chk = app.add_subcommand("check", "Validate a solution file against an instance");
  chk->add_option("instance", ck_instance, "Instance file")->required();
  chk->add_option("--assignment", ck_assignment, "fleet.json written by solve")->required();
  chk->add_option("--schedule", ck_schedule, "schedule.csv to check as well");

  std::string sc_instance, sc_backend = "exact", sc_out = "out";
  std::size_t sc_n = 1;
  std::uint64_t sc_seed = 0;
  std::int64_t sc_limit = 5000;
  auto* sch = app.add_subcommand("schedule", "Find a test schedule for n vehicles");
  sch->add_option("instance", sc_instance, "Instance file with a schedule section")->required();
  sch->add_option("--n", sc_n, "Vehicle count")->check(CLI::PositiveNumber);
  sch->add_option("--backend", sc_backend, "exact or anneal")->check(CLI::IsMember({"exact", "anneal"}));
  sch->add_option("--seed", sc_seed, "Anneal seed");
  sch->add_option("--time-limit-ms", sc_limit, "Time limit")->check(CLI::PositiveNumber);
  sch->add_option("--out", sc_out, "Output directory");

  std::string si_instance, si_out;
  auto* sim = app.add_subcommand("simplify", "Print the simplified instance");
  sim->add_option("instance", si_instance, "Instance file")->required();
  sim->add_option("--out", si_out, "Output file (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInputError;
  }

  try {
    if (*solve) return cmd_solve(so, out, err);
    if (*exp) return cmd_export(ex_instance, ex_mode, ex_n, ex_format, ex_out, out);
    if (*gen) {
      std::string text = serialize_dataset(generate_synthetic(gp));
      if (gen_out.empty()) out << text;
      else write_file(gen_out, text);
      return kSuccess;
    }
    if (*orc) {
      Dataset d = simplify(load(or_instance));
      if (or_what == "configs") {
        auto configs = oracle::enumerate_configs(d);
        out << configs.size() << " configurations\n";
        for (const auto& c : configs) {
          out << d.type_names[c.type.value] << ':';
          for (std::size_t k = 0; k < c.features.size(); ++k)
            if (c.features[k]) out << ' ' << d.feature_names[k];
          out << '\n';
        }
      } else if (or_what == "min-fleet") {
        auto n = oracle::min_fleet(d, or_cap);
        if (!n) {
          out << "none up to " << or_cap << '\n';
          return kIncomplete;
        }
        out << *n << '\n';
      } else {
        out << to_string(oracle::max_coverage(d, or_n)) << '\n';
      }
      return kSuccess;
    }
    if (*chk) return cmd_check(ck_instance, ck_assignment, ck_schedule, out, err);
    if (*sch) return cmd_schedule(sc_instance, sc_n, sc_backend, sc_seed, sc_limit, sc_out, out, err);
    if (*sim) {
      SimplifyReport r;
      std::string text = serialize_dataset(simplify(load(si_instance), &r));
      if (si_out.empty()) out << text;
      else write_file(si_out, text);
      err << "collapsed " << r.collapsed_rules << ", removed literals " << r.removed_literals << ", dropped "
          << r.dropped_unsatisfiable + r.dropped_tautologies + r.duplicate_rules << " rules, merged "
          << r.merged_tests << " tests\n";
      return kSuccess;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace fleetopt::cli
