#include "fleetopt/synthetic.hpp"

#include <algorithm>
#include <numeric>

namespace fleetopt {

namespace {

using detail::chance;
using detail::draw;

struct RuleShape {
  std::string lhs;  // "m&", "0&", "1&", "01", "11", "0|"
  std::string rhs;  // "0&", "1&", "0|", "1|", "01", "11"
};

const std::vector<std::string> kLhsKinds = {"m&", "0&", "1&", "01", "11", "0|"};
const std::vector<std::string> kRhsKinds = {"0&", "1&", "0|", "1|", "01", "11"};

class Generator {
 public:
  explicit Generator(const SyntheticParams& p) : p_(p), rng_(p.seed) {}

  Dataset run() {
    Dataset d;
    for (std::size_t k = 0; k < p_.features; ++k) d.feature_names.push_back("F" + std::to_string(k));
    for (std::size_t k = 0; k < p_.types; ++k) d.type_names.push_back("T" + std::to_string(k));
    make_forbidden(d);
    make_groups(d);
    make_anchors(d);
    make_rules(d);
    make_tests(d);
    return d;
  }

 private:
  void make_forbidden(Dataset& d) {
    d.forbidden_per_type.assign(p_.types, {});
    for (std::size_t t = 0; t < p_.types; ++t) {
      for (std::size_t k = 0; k < p_.features; ++k) {
        if (d.forbidden_per_type[t].size() * 4 < p_.features && chance(rng_, 0.15))
          d.forbidden_per_type[t].push_back(FeatureId(k));
      }
    }
  }

  void make_groups(Dataset& d) {
    std::vector<std::size_t> order(p_.features);
    std::iota(order.begin(), order.end(), 0);
    detail::shuffle(order, rng_);
    std::size_t pos = 0;
    for (std::size_t g = 0; g < p_.groups; ++g) {
      std::size_t size = 2 + draw(rng_, 3);
      if (pos + size > order.size()) size = order.size() - pos;
      if (size < 2) break;
      FeatureGroup group;
      for (std::size_t k = 0; k < size; ++k) group.members.push_back(FeatureId(order[pos + k]));
      pos += size;
      std::sort(group.members.begin(), group.members.end());
      d.groups.push_back(std::move(group));
    }
  }

  void make_anchors(const Dataset& d) {
    std::size_t count = p_.anchors ? p_.anchors : std::clamp<std::size_t>(p_.tests / 3 + 2, 3, 24);
    if (p_.types == 0) return;
    for (std::size_t a = 0; a < count; ++a) {
      VehicleConfig v{TypeId(draw(rng_, p_.types)), std::vector<bool>(p_.features, false)};
      for (std::size_t k = 0; k < p_.features; ++k) v.features[k] = chance(rng_, 0.35);
      for (FeatureId k : d.forbidden_per_type[v.type.value]) v.features[k.value] = false;
      for (const auto& g : d.groups) {
        std::vector<FeatureId> on;
        for (FeatureId k : g.members)
          if (v.features[k.value]) on.push_back(k);
        if (on.size() > 1) {
          FeatureId keep = on[draw(rng_, on.size())];
          for (FeatureId k : on) v.features[k.value] = k == keep;
        }
      }
      anchors_.push_back(std::move(v));
    }
  }

  std::optional<ImplicationRule> sample_rule(const RuleShape& shape) {
    std::size_t lhs_size = (shape.lhs[1] == '1') ? 1 : 2 + draw(rng_, 2);
    std::size_t rhs_size = (shape.rhs[1] == '1') ? 1 : 2 + draw(rng_, 2);
    if (lhs_size + rhs_size > p_.features) {
      if (shape.lhs[1] != '1') lhs_size = 2;
      if (shape.rhs[1] != '1') rhs_size = 2;
      if (lhs_size + rhs_size > p_.features) return std::nullopt;
    }
    std::vector<std::size_t> order(p_.features);
    std::iota(order.begin(), order.end(), 0);
    detail::shuffle(order, rng_);

    std::vector<Literal> lhs;
    for (std::size_t k = 0; k < lhs_size; ++k) {
      bool neg = shape.lhs[0] == '1';
      if (shape.lhs[0] == 'm') neg = k == 0 ? false : (k == 1 ? true : chance(rng_, 0.5));
      lhs.push_back({FeatureId(order[k]), neg});
    }
    std::vector<Literal> rhs;
    for (std::size_t k = 0; k < rhs_size; ++k) rhs.push_back({FeatureId(order[lhs_size + k]), shape.rhs[0] == '1'});

    auto connective = [](char c) {
      return c == '&' ? Connective::And : (c == '|' ? Connective::Or : Connective::Single);
    };
    std::optional<TypeId> type;
    if (p_.types > 0 && chance(rng_, 0.7)) type = TypeId(draw(rng_, p_.types));
    return ImplicationRule::make(type, std::move(lhs), connective(shape.lhs[1]), std::move(rhs),
                                 connective(shape.rhs[1]));
  }

  void make_rules(Dataset& d) {
    if (p_.features < 2) return;
    for (std::size_t r = 0; r < p_.rules; ++r) {
      RuleShape shape{kLhsKinds[draw(rng_, kLhsKinds.size())], kRhsKinds[draw(rng_, kRhsKinds.size())]};
      for (int attempt = 0; attempt < 40; ++attempt) {
        auto rule = sample_rule(shape);
        if (!rule) break;
        bool ok = std::all_of(anchors_.begin(), anchors_.end(),
                              [&](const VehicleConfig& v) { return rule_holds(*rule, v); });
        if (ok) {
          d.rules.push_back(std::move(*rule));
          break;
        }
      }
    }
  }

  void make_tests(Dataset& d) {
    if (anchors_.empty()) return;
    for (std::size_t j = 0; j < p_.tests; ++j) {
      const VehicleConfig& a = anchors_[draw(rng_, anchors_.size())];
      std::vector<std::size_t> on, off;
      for (std::size_t k = 0; k < p_.features; ++k) (a.features[k] ? on : off).push_back(k);
      detail::shuffle(on, rng_);
      detail::shuffle(off, rng_);

      TestRequirement t;
      t.id = j;
      std::size_t n_present = std::min(on.size(), 1 + draw(rng_, 2));
      std::size_t n_absent = std::min(off.size(), draw(rng_, 3));
      for (std::size_t k = 0; k < n_present; ++k) t.required_present.push_back(FeatureId(on[k]));
      for (std::size_t k = 0; k < n_absent; ++k) t.required_absent.push_back(FeatureId(off[k]));
      if (on.size() > n_present && chance(rng_, 0.3)) {
        t.required_any_of.push_back(FeatureId(on[n_present]));
        std::size_t extra = std::min(off.size() - n_absent, draw(rng_, 3));
        for (std::size_t k = 0; k < extra; ++k) t.required_any_of.push_back(FeatureId(off[n_absent + k]));
      }
      std::sort(t.required_present.begin(), t.required_present.end());
      std::sort(t.required_absent.begin(), t.required_absent.end());
      std::sort(t.required_any_of.begin(), t.required_any_of.end());
      t.cars_needed = chance(rng_, p_.two_car_probability) ? 2 : 1;
      d.tests.push_back(std::move(t));
    }
  }

  SyntheticParams p_;
  std::mt19937_64 rng_;
  std::vector<VehicleConfig> anchors_;
};

}  // namespace

Dataset generate_synthetic(const SyntheticParams& params) { return Generator(params).run(); }

const std::vector<std::string>& supported_rule_classes() {
  static const std::vector<std::string> classes = [] {
    std::vector<std::string> out;
    for (const auto& l : kLhsKinds)
      for (const auto& r : kRhsKinds) out.push_back(l + r);
    return out;
  }();
  return classes;
}

}  // namespace fleetopt
