#include "fleetopt/simplify.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace fleetopt {

namespace {

enum class Status { Free, AlwaysTrue, AlwaysFalse };

Literal complement(Literal l) { return {l.feature, !l.negated}; }

bool contains(const std::vector<Literal>& v, Literal l) { return std::find(v.begin(), v.end(), l) != v.end(); }

void sort_unique(std::vector<Literal>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

bool has_complementary_pair(const std::vector<Literal>& sorted) {
  for (std::size_t k = 0; k + 1 < sorted.size(); ++k)
    if (sorted[k].feature == sorted[k + 1].feature) return true;
  return false;
}

class Pass {
 public:
  Pass(const Dataset& d, SimplifyReport& rep) : d_(d), rep_(rep) {
    const std::size_t f = d.feature_count();
    mask_.assign(d.type_count(), std::vector<bool>(f, false));
    for (std::size_t t = 0; t < d.type_count(); ++t)
      for (FeatureId k : d.forbidden_per_type[t]) mask_[t][k.value] = true;
    all_.assign(f, d.type_count() > 0);
    for (std::size_t k = 0; k < f; ++k)
      for (std::size_t t = 0; t < d.type_count(); ++t) all_[k] = all_[k] && mask_[t][k];
  }

  Dataset run() {
    Dataset out = d_;
    std::vector<ImplicationRule> reduced;
    for (const auto& r : d_.rules)
      for (auto& x : reduce(r)) reduced.push_back(std::move(x));
    out.rules = collapse(std::move(reduced));
    for (FeatureId k : newly_forbidden_) {
      for (auto& set : out.forbidden_per_type) set.push_back(k);
    }
    for (auto& set : out.forbidden_per_type) {
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
    }
    if (!out.schedule) merge_tests(out);
    return out;
  }

 private:
  bool forbidden(const ImplicationRule& r, FeatureId k) const {
    return r.rule_type ? mask_[r.rule_type->value][k.value] : all_[k.value];
  }

  bool vacuous_for(const ImplicationRule& r, std::size_t type) const {
    const auto& lhs = r.lhs_literals;
    if (r.lhs_connective == Connective::Or)
      return std::all_of(lhs.begin(), lhs.end(), [&](const Literal& l) { return mask_[type][l.feature.value]; });
    return std::any_of(lhs.begin(), lhs.end(),
                       [&](const Literal& l) { return !l.negated && mask_[type][l.feature.value]; });
  }

  // Status of a right-side literal given that the left side holds.
  Status rhs_status(const ImplicationRule& r, const std::vector<Literal>& conj_lhs, Literal l, bool& repeat) const {
    if (forbidden(r, l.feature)) return l.negated ? Status::AlwaysTrue : Status::AlwaysFalse;
    if (contains(conj_lhs, l)) {
      repeat = true;
      return Status::AlwaysTrue;
    }
    if (contains(conj_lhs, complement(l))) {
      repeat = true;
      return Status::AlwaysFalse;
    }
    return Status::Free;
  }

  std::vector<ImplicationRule> reduce(const ImplicationRule& r) {
    if (r.lhs_connective == Connective::Or) return reduce_disjunctive(r);

    std::vector<Literal> lhs;
    for (const Literal& l : r.lhs_literals) {
      if (forbidden(r, l.feature)) {
        if (!l.negated) {
          ++rep_.dropped_unsatisfiable;
          return {};
        }
        ++rep_.removed_literals;
        continue;
      }
      lhs.push_back(l);
    }
    // An untyped rule keeps at least one left literal.
    if (lhs.empty() && !r.rule_type) {
      --rep_.removed_literals;
      lhs.push_back(r.lhs_literals.back());
    }
    sort_unique(lhs);
    if (has_complementary_pair(lhs)) {
      ++rep_.dropped_unsatisfiable;
      return {};
    }

    std::vector<Literal> rhs = r.rhs_literals;
    sort_unique(rhs);
    const bool conj = r.rhs_connective != Connective::Or;
    bool repeat = false;
    bool rhs_false = false;
    std::vector<Literal> kept;
    if (has_complementary_pair(rhs)) {
      if (!conj) {
        ++rep_.dropped_tautologies;
        return {};
      }
      rhs_false = true;
    }
    for (Literal l : rhs) {
      if (rhs_false) break;
      Status s = rhs_status(r, lhs, l, repeat);
      if (conj) {
        if (s == Status::AlwaysFalse) rhs_false = true;
        else if (s == Status::Free) kept.push_back(l);
      } else {
        if (s == Status::AlwaysTrue) {
          if (repeat) ++rep_.reduced_repeats;
          ++rep_.dropped_tautologies;
          return {};
        }
        if (s == Status::Free) kept.push_back(l);
      }
    }
    if (repeat) ++rep_.reduced_repeats;
    if (!rhs_false && kept.empty()) {
      if (!conj) {
        rhs_false = true;
      } else {
        ++rep_.dropped_tautologies;
        return {};
      }
    }
    if (rhs_false) return left_side_forbidden(r, std::move(lhs));
    if (kept.size() < rhs.size() && !repeat) rep_.removed_literals += rhs.size() - kept.size();
    return {ImplicationRule::make(r.rule_type, std::move(lhs), Connective::And, std::move(kept), r.rhs_connective)};
  }

  // lhs => false, i.e. the conjunction must never hold.
  std::vector<ImplicationRule> left_side_forbidden(const ImplicationRule& r, std::vector<Literal> lhs) {
    if (!lhs.empty() && (r.rule_type || lhs.size() >= 2)) {
      Literal last = lhs.back();
      lhs.pop_back();
      return {ImplicationRule::make(r.rule_type, std::move(lhs), Connective::And, {complement(last)},
                                    Connective::Single)};
    }
    if (lhs.size() == 1 && !lhs[0].negated) {
      newly_forbidden_.push_back(lhs[0].feature);
      return {};
    }
    // Not expressible in rule form (type-wide contradiction or a mandatory feature).
    return {r};
  }

  std::vector<ImplicationRule> reduce_disjunctive(const ImplicationRule& r) {
    std::vector<Literal> lhs;
    for (const Literal& l : r.lhs_literals) {
      if (forbidden(r, l.feature)) {
        ++rep_.removed_literals;
        continue;
      }
      lhs.push_back(l);
    }
    sort_unique(lhs);
    if (lhs.empty()) {
      ++rep_.dropped_unsatisfiable;
      return {};
    }
    std::vector<Literal> rhs = r.rhs_literals;
    sort_unique(rhs);
    bool needs_split = rhs.size() != r.rhs_literals.size() || has_complementary_pair(rhs);
    for (Literal l : rhs) {
      needs_split = needs_split || forbidden(r, l.feature) ||
                    std::any_of(lhs.begin(), lhs.end(), [&](const Literal& x) { return x.feature == l.feature; });
    }
    if (needs_split && lhs.size() > 1) {
      ++rep_.split_rules;
      std::vector<ImplicationRule> out;
      for (Literal l : lhs)
        out.push_back(ImplicationRule::make(r.rule_type, {l}, Connective::Single, r.rhs_literals, r.rhs_connective));
      return out;
    }
    if (needs_split)
      return reduce(ImplicationRule::make(r.rule_type, std::move(lhs), Connective::Single, std::move(rhs),
                                          r.rhs_connective));
    return {ImplicationRule::make(r.rule_type, std::move(lhs), Connective::Or, std::move(rhs), r.rhs_connective)};
  }

  std::vector<ImplicationRule> collapse(std::vector<ImplicationRule> rules) {
    using Key = std::tuple<std::vector<Literal>, Connective, std::vector<Literal>, Connective>;
    std::map<Key, std::vector<const ImplicationRule*>> groups;
    for (const auto& r : rules)
      groups[Key{r.lhs_literals, r.lhs_connective, r.rhs_literals, r.rhs_connective}].push_back(&r);

    std::vector<ImplicationRule> out;
    for (auto& [key, members] : groups) {
      const bool untyped = std::any_of(members.begin(), members.end(), [](auto* r) { return !r->rule_type; });
      std::set<std::size_t> types;
      for (auto* r : members)
        if (r->rule_type) types.insert(r->rule_type->value);
      const ImplicationRule& first = *members.front();
      bool fold = untyped;
      if (!fold && !first.lhs_literals.empty() && d_.type_count() > 0) {
        fold = true;
        for (std::size_t t = 0; t < d_.type_count() && fold; ++t)
          if (!types.count(t)) fold = vacuous_for(first, t);
      }
      if (fold) {
        std::size_t extra = members.size() - 1;
        if (!untyped) rep_.collapsed_rules += types.size();
        else rep_.duplicate_rules += extra;
        ImplicationRule u = first;
        u.rule_type.reset();
        out.push_back(std::move(u));
      } else {
        rep_.duplicate_rules += members.size() - types.size();
        for (std::size_t t : types) {
          ImplicationRule typed = first;
          typed.rule_type = TypeId(t);
          out.push_back(std::move(typed));
        }
      }
    }
    std::sort(out.begin(), out.end(), [](const ImplicationRule& a, const ImplicationRule& b) {
      auto key = [](const ImplicationRule& r) {
        return std::tuple<bool, TypeId, const std::vector<Literal>&, Connective, const std::vector<Literal>&,
                          Connective>(r.rule_type.has_value(), r.rule_type.value_or(TypeId(0)), r.lhs_literals,
                                      r.lhs_connective, r.rhs_literals, r.rhs_connective);
      };
      return key(a) < key(b);
    });
    return out;
  }

  void merge_tests(Dataset& out) {
    using Signature = std::tuple<std::vector<FeatureId>, std::vector<FeatureId>, std::vector<FeatureId>>;
    std::map<Signature, std::size_t> index;
    std::vector<TestRequirement> merged;
    for (const auto& t : out.tests) {
      Signature sig{t.required_present, t.required_absent, t.required_any_of};
      auto [it, inserted] = index.emplace(sig, merged.size());
      if (inserted) {
        merged.push_back(t);
        merged.back().id = it->second;
      } else {
        auto& m = merged[it->second];
        m.cars_needed += t.cars_needed;
        m.weight = std::max(m.weight, t.weight);
        ++rep_.merged_tests;
      }
    }
    out.tests = std::move(merged);
  }

  const Dataset& d_;
  SimplifyReport& rep_;
  std::vector<std::vector<bool>> mask_;
  std::vector<bool> all_;
  std::vector<FeatureId> newly_forbidden_;
};

}  // namespace

Dataset simplify(const Dataset& d, SimplifyReport* report) {
  SimplifyReport local;
  SimplifyReport& rep = report ? *report : local;
  Dataset current = d;
  for (int pass = 0; pass < 64; ++pass) {
    Dataset next = Pass(current, rep).run();
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace fleetopt
