#include "fleetopt/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "fleetopt/synthetic.hpp"

namespace fleetopt {

namespace {

using Clock = std::chrono::steady_clock;

// sum(coef * x) <= rhs over integers.
struct Row {
  std::vector<std::pair<std::size_t, std::int64_t>> entries;  // sorted by |coef| descending
  std::int64_t rhs = 0;
};

std::int64_t lcm_of_denominators(const std::vector<LinearTerm>& terms, const Rational& rhs) {
  std::int64_t l = rhs.denominator();
  for (const auto& t : terms) l = std::lcm(l, t.coefficient.denominator());
  return l;
}

std::int64_t scaled(const Rational& r, std::int64_t factor) { return r.numerator() * (factor / r.denominator()); }

// Row list in <= form: >= rows are negated, equalities become two rows.
std::vector<Row> integer_rows(const LinearModel& model) {
  std::vector<Row> rows;
  for (const auto& c : model.constraints()) {
    std::int64_t f = lcm_of_denominators(c.terms, c.rhs);
    Row r;
    for (const auto& t : c.terms) r.entries.emplace_back(*model.index_of(t.variable), scaled(t.coefficient, f));
    r.rhs = scaled(c.rhs, f);
    std::sort(r.entries.begin(), r.entries.end(), [](const auto& a, const auto& b) {
      return std::abs(a.second) != std::abs(b.second) ? std::abs(a.second) > std::abs(b.second) : a.first < b.first;
    });
    auto negated = [](Row x) {
      for (auto& e : x.entries) e.second = -e.second;
      x.rhs = -x.rhs;
      return x;
    };
    if (c.sense == Sense::Le) rows.push_back(r);
    else if (c.sense == Sense::Ge) rows.push_back(negated(r));
    else {
      rows.push_back(r);
      rows.push_back(negated(r));
    }
  }
  return rows;
}

// Objective as integers with the optimization direction folded in: larger is better.
struct ScaledObjective {
  std::vector<std::int64_t> gain;
  std::int64_t factor = 1;
  bool negate = false;

  Rational value(std::int64_t v) const { return Rational(negate ? -v : v, factor); }
};

ScaledObjective scaled_objective(const LinearModel& model, SolveTarget target) {
  ScaledObjective o;
  o.gain.assign(model.variables().size(), 0);
  if (target == SolveTarget::FindFeasible || !model.objective()) return o;
  const auto& terms = model.objective()->terms;
  o.factor = lcm_of_denominators(terms, Rational(0));
  o.negate = target == SolveTarget::Minimize;
  for (const auto& t : terms) {
    std::int64_t v = scaled(t.coefficient, o.factor);
    o.gain[*model.index_of(t.variable)] += o.negate ? -v : v;
  }
  return o;
}

Rational objective_value(const LinearModel& model, const std::vector<std::uint8_t>& x) {
  Rational v{0};
  if (model.objective())
    for (const auto& t : model.objective()->terms)
      if (x[*model.index_of(t.variable)]) v += t.coefficient;
  return v;
}

class BranchAndBound {
 public:
  BranchAndBound(const LinearModel& model, const SolveRequest& req)
      : model_(model), req_(req), rows_(integer_rows(model)), objective_(scaled_objective(model, req.target)) {
    const std::size_t n = model.variables().size();
    value_.assign(n, -1);
    occurs_.resize(n);
    // The objective row: -sum(gain * x) <= -(best + 1), active once an incumbent exists.
    Row obj;
    for (std::size_t k = 0; k < n; ++k)
      if (objective_.gain[k] != 0) obj.entries.emplace_back(k, -objective_.gain[k]);
    std::sort(obj.entries.begin(), obj.entries.end(), [](const auto& a, const auto& b) {
      return std::abs(a.second) != std::abs(b.second) ? std::abs(a.second) > std::abs(b.second) : a.first < b.first;
    });
    objective_row_ = rows_.size();
    rows_.push_back(std::move(obj));
    min_.assign(rows_.size(), 0);
    max_.assign(rows_.size(), 0);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [k, a] : rows_[r].entries) {
        occurs_[k].emplace_back(r, a);
        (a < 0 ? min_[r] : max_[r]) += a;
      }
    for (std::size_t r = 0; r < objective_row_; ++r)
      if (max_[r] > rows_[r].rhs) ++open_;
    active_objective_ = false;
  }

  SolveResult run() {
    start_ = Clock::now();
    SolveResult result;
    std::int64_t root_bound = 0;
    for (auto g : objective_.gain) root_bound += std::max<std::int64_t>(g, 0);

    bool consistent = true;
    for (std::size_t r = 0; r < objective_row_ && consistent; ++r) consistent = min_[r] <= rows_[r].rhs;
    if (consistent) {
      for (std::size_t r = 0; r < objective_row_; ++r) enqueue_forced(r);
      if (propagate()) search();
    }

    result.stats.nodes = nodes_;
    result.stats.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start_);
    if (best_) {
      result.assignment = best_;
      result.objective = objective_value(model_, *best_);
      if (aborted_) {
        result.status = SolveStatus::Feasible;
        result.stats.best_bound = objective_.value(root_bound);
      } else {
        result.status = req_.target == SolveTarget::FindFeasible ? SolveStatus::Feasible : SolveStatus::Optimal;
        result.stats.best_bound = result.objective;
      }
    } else {
      result.status = aborted_ ? SolveStatus::TimeoutNoSolution : SolveStatus::Infeasible;
      if (aborted_) result.stats.best_bound = objective_.value(root_bound);
    }
    return result;
  }

 private:
  bool assign(std::size_t k, int v) {
    if (value_[k] >= 0) return value_[k] == v;
    value_[k] = static_cast<std::int8_t>(v);
    trail_.push_back(k);
    bool ok = true;
    for (const auto& [r, a] : occurs_[k]) {
      bool was_open = r != objective_row_ && max_[r] > rows_[r].rhs;
      if (a < 0) {
        if (v == 1) max_[r] += a;
        else min_[r] -= a;
      } else {
        if (v == 1) min_[r] += a;
        else max_[r] -= a;
      }
      if (was_open && max_[r] <= rows_[r].rhs) --open_;
      if (!row_active(r)) continue;
      if (min_[r] > rows_[r].rhs) ok = false;
      else enqueue_forced(r);
    }
    return ok;
  }

  bool row_active(std::size_t r) const { return r != objective_row_ || active_objective_; }

  void enqueue_forced(std::size_t r) {
    std::int64_t slack = rows_[r].rhs - min_[r];
    for (const auto& [k, a] : rows_[r].entries) {
      if (std::abs(a) <= slack) break;
      if (value_[k] < 0) queue_.emplace_back(k, a > 0 ? 0 : 1);
    }
  }

  bool propagate() {
    bool ok = true;
    while (ok && !queue_.empty()) {
      auto [k, v] = queue_.back();
      queue_.pop_back();
      ok = assign(k, v);
    }
    queue_.clear();
    return ok;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      std::size_t k = trail_.back();
      trail_.pop_back();
      int v = value_[k];
      for (const auto& [r, a] : occurs_[k]) {
        bool was_open = r != objective_row_ && max_[r] > rows_[r].rhs;
        if (a < 0) {
          if (v == 1) max_[r] -= a;
          else min_[r] += a;
        } else {
          if (v == 1) min_[r] -= a;
          else max_[r] += a;
        }
        if (!was_open && r != objective_row_ && max_[r] > rows_[r].rhs) ++open_;
      }
      value_[k] = -1;
    }
  }

  void record_leaf() {
    std::vector<std::uint8_t> x(value_.size());
    std::int64_t total = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      int v = value_[k] >= 0 ? value_[k] : (objective_.gain[k] > 0 ? 1 : 0);
      x[k] = static_cast<std::uint8_t>(v);
      total += v * objective_.gain[k];
    }
    if (!best_ || total > best_value_) {
      best_ = std::move(x);
      best_value_ = total;
      rows_[objective_row_].rhs = -(total + 1);
      active_objective_ = true;
    }
    if (req_.target == SolveTarget::FindFeasible) stop_ = true;
  }

  std::size_t choose() const {
    std::vector<std::uint32_t> score(value_.size(), 0);
    for (std::size_t r = 0; r < objective_row_; ++r) {
      if (max_[r] <= rows_[r].rhs) continue;
      for (const auto& [k, a] : rows_[r].entries)
        if (value_[k] < 0) ++score[k];
    }
    std::size_t best = value_.size();
    for (std::size_t k = 0; k < value_.size(); ++k)
      if (value_[k] < 0 && score[k] > 0 && (best == value_.size() || score[k] > score[best])) best = k;
    return best;
  }

  void search() {
    if (stop_ || aborted_) return;
    if (++nodes_ % 1024 == 0 && Clock::now() - start_ > req_.time_limit) {
      aborted_ = true;
      return;
    }
    if (open_ == 0) {
      record_leaf();
      return;
    }
    std::size_t k = choose();
    int first = model_.variables()[k].kind == VarKind::P || model_.variables()[k].kind == VarKind::PD ? 1 : 0;
    for (int v : {first, 1 - first}) {
      std::size_t mark = trail_.size();
      // An incumbent found in the first branch tightens the objective row.
      if (active_objective_ && min_[objective_row_] > rows_[objective_row_].rhs) return;
      if (active_objective_) enqueue_forced(objective_row_);
      if (propagate() && assign(k, v) && propagate()) search();
      queue_.clear();
      undo(mark);
      if (stop_ || aborted_) return;
    }
  }

  const LinearModel& model_;
  const SolveRequest& req_;
  std::vector<Row> rows_;
  ScaledObjective objective_;
  std::size_t objective_row_ = 0;
  bool active_objective_ = false;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> occurs_;
  std::vector<std::int64_t> min_, max_;
  std::vector<std::int8_t> value_;
  std::vector<std::size_t> trail_;
  std::vector<std::pair<std::size_t, int>> queue_;
  std::size_t open_ = 0;
  std::uint64_t nodes_ = 0;
  bool stop_ = false;
  bool aborted_ = false;
  Clock::time_point start_;
  std::optional<std::vector<std::uint8_t>> best_;
  std::int64_t best_value_ = 0;
};

class Annealer {
 public:
  Annealer(const LinearModel& model, const SolveRequest& req, const AnnealParams& params)
      : model_(model), req_(req), params_(params), objective_(scaled_objective(model, req.target)) {
    const std::size_t n = model.variables().size();
    occurs_.resize(n);
    for (const auto& c : model.constraints()) {
      std::int64_t f = lcm_of_denominators(c.terms, c.rhs);
      Row r;
      for (const auto& t : c.terms) r.entries.emplace_back(*model.index_of(t.variable), scaled(t.coefficient, f));
      r.rhs = scaled(c.rhs, f);
      for (const auto& [k, a] : r.entries) occurs_[k].emplace_back(rows_.size(), a);
      rows_.push_back(std::move(r));
      senses_.push_back(c.sense);
    }
    lambda_ = 1;
    for (auto g : objective_.gain) lambda_ += std::abs(g);
  }

  SolveResult run() {
    auto start = Clock::now();
    SolveResult result;
    std::mt19937_64 rng(req_.seed);
    const std::size_t n = model_.variables().size();
    std::vector<std::uint8_t> x(n);
    std::optional<std::int64_t> best_gain;
    std::optional<std::int64_t> least_penalty;
    bool out_of_time = false;

    for (std::size_t restart = 0; restart < params_.restarts && !out_of_time; ++restart) {
      for (auto& v : x) v = static_cast<std::uint8_t>(rng() & 1);
      reset(x);
      const double t0 = params_.start_temperature * static_cast<double>(lambda_);
      const double t1 = params_.end_temperature;
      const double ratio = params_.sweeps > 1 ? std::pow(t1 / t0, 1.0 / static_cast<double>(params_.sweeps - 1)) : 1.0;
      double temperature = t0;
      for (std::size_t s = 0; s < params_.sweeps; ++s, temperature *= ratio) {
        for (std::size_t k = 0; k < n; ++k) {
          std::int64_t delta = flip_delta(x, k);
          if (delta <= 0 || unit(rng) < std::exp(-static_cast<double>(delta) / temperature)) apply(x, k);
        }
        ++result.stats.sweeps;
        if (result.stats.sweeps % 1024 == 0 && Clock::now() - start > req_.time_limit) {
          out_of_time = true;
          break;
        }
      }
      // Quench: accept only improving flips until none is left.
      for (bool improved = true; improved;) {
        improved = false;
        for (std::size_t k = 0; k < n; ++k)
          if (flip_delta(x, k) < 0) {
            apply(x, k);
            improved = true;
          }
      }
      ++result.stats.restarts;
      if (penalty_ == 0) {
        ++result.stats.feasible_restarts;
        if (!best_gain || gain_ > *best_gain) {
          best_gain = gain_;
          result.assignment = x;
        }
      } else if (!least_penalty || penalty_ < *least_penalty) {
        least_penalty = penalty_;
        result.best_infeasible = x;
      }
      if (req_.target == SolveTarget::FindFeasible && result.assignment) break;
    }

    result.stats.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start);
    if (result.assignment) {
      result.status = SolveStatus::Feasible;
      result.objective = objective_value(model_, *result.assignment);
      result.best_infeasible.reset();
    } else {
      result.status = SolveStatus::TimeoutNoSolution;
      if (result.best_infeasible) result.violations = check_assignment(model_, *result.best_infeasible).violations;
    }
    return result;
  }

 private:
  static double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

  std::int64_t row_penalty(std::size_t r, std::int64_t lhs) const {
    std::int64_t excess = lhs - rows_[r].rhs;
    if (senses_[r] == Sense::Le) excess = std::max<std::int64_t>(excess, 0);
    else if (senses_[r] == Sense::Ge) excess = std::min<std::int64_t>(excess, 0);
    return excess * excess;
  }

  void reset(const std::vector<std::uint8_t>& x) {
    lhs_.assign(rows_.size(), 0);
    for (std::size_t r = 0; r < rows_.size(); ++r)
      for (const auto& [k, a] : rows_[r].entries)
        if (x[k]) lhs_[r] += a;
    penalty_ = 0;
    for (std::size_t r = 0; r < rows_.size(); ++r) penalty_ += row_penalty(r, lhs_[r]);
    gain_ = 0;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (x[k]) gain_ += objective_.gain[k];
  }

  // Energy = lambda * penalty - gain.
  std::int64_t flip_delta(const std::vector<std::uint8_t>& x, std::size_t k) const {
    std::int64_t sign = x[k] ? -1 : 1;
    std::int64_t dp = 0;
    for (const auto& [r, a] : occurs_[k]) dp += row_penalty(r, lhs_[r] + sign * a) - row_penalty(r, lhs_[r]);
    return lambda_ * dp - sign * objective_.gain[k];
  }

  void apply(std::vector<std::uint8_t>& x, std::size_t k) {
    std::int64_t sign = x[k] ? -1 : 1;
    for (const auto& [r, a] : occurs_[k]) {
      penalty_ -= row_penalty(r, lhs_[r]);
      lhs_[r] += sign * a;
      penalty_ += row_penalty(r, lhs_[r]);
    }
    gain_ += sign * objective_.gain[k];
    x[k] = static_cast<std::uint8_t>(1 - x[k]);
  }

  const LinearModel& model_;
  const SolveRequest& req_;
  AnnealParams params_;
  ScaledObjective objective_;
  std::vector<Row> rows_;
  std::vector<Sense> senses_;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> occurs_;
  std::vector<std::int64_t> lhs_;
  std::int64_t penalty_ = 0;
  std::int64_t gain_ = 0;
  std::int64_t lambda_ = 1;
};

void require_model(const SolveRequest& req) {
  if (!req.model) throw std::invalid_argument("solve request without a model");
  if (req.time_limit.count() <= 0) throw std::invalid_argument("time limit must be positive");
}

}  // namespace

SolveResult solve_exact(const SolveRequest& req) {
  require_model(req);
  return BranchAndBound(*req.model, req).run();
}

SolveResult solve_anneal(const SolveRequest& req, const AnnealParams& params) {
  require_model(req);
  return Annealer(*req.model, req, params).run();
}

}  // namespace fleetopt
