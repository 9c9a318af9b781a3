#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fleetopt/rational.hpp"

namespace fleetopt {

/// Dense index with a tag so feature and type indices cannot be mixed up.
template <class Tag>
struct Index {
  std::size_t value = 0;

  constexpr Index() = default;
  constexpr explicit Index(std::size_t v) : value(v) {}

  friend constexpr auto operator<=>(Index, Index) = default;
};

using FeatureId = Index<struct FeatureTag>;
using TypeId = Index<struct TypeTag>;

struct Literal {
  FeatureId feature;
  bool negated = false;

  friend constexpr auto operator<=>(const Literal&, const Literal&) = default;
};

enum class Connective { And, Or, Single };

/// Four-character rule class: negation pattern (0/1/m) and connective (&/|/1)
/// of the left side followed by the same for the right side.
std::string classify_rule(std::span<const Literal> lhs, Connective lhs_connective,
                          std::span<const Literal> rhs, Connective rhs_connective);

/// "lhs => rhs", optionally restricted to vehicles of one type.
struct ImplicationRule {
  std::optional<TypeId> rule_type;
  std::vector<Literal> lhs_literals;
  Connective lhs_connective = Connective::And;
  std::vector<Literal> rhs_literals;
  Connective rhs_connective = Connective::Single;
  std::string class_label;

  /// Builds a rule and derives its class label. The connective of a side
  /// with exactly one literal is normalized to Single; an empty left side
  /// is a vacuous conjunction.
  static ImplicationRule make(std::optional<TypeId> type, std::vector<Literal> lhs,
                              Connective lhs_connective, std::vector<Literal> rhs,
                              Connective rhs_connective);

  friend bool operator==(const ImplicationRule&, const ImplicationRule&) = default;
};

struct FeatureGroup {
  std::vector<FeatureId> members;  // sorted, unique

  friend bool operator==(const FeatureGroup&, const FeatureGroup&) = default;
};

struct TestRequirement {
  std::size_t id = 0;
  std::vector<FeatureId> required_present;
  std::vector<FeatureId> required_absent;
  std::vector<FeatureId> required_any_of;
  std::int64_t cars_needed = 1;
  Rational weight{1};

  friend bool operator==(const TestRequirement&, const TestRequirement&) = default;
};

/// One expanded (single-car) copy of a test with its scheduling data.
struct ExpandedTest {
  std::size_t origin = 0;
  std::size_t copy = 0;
  int window_start = 1;
  int window_end = 1;
  int group = 1;

  friend bool operator==(const ExpandedTest&, const ExpandedTest&) = default;
};

struct ScheduleSpec {
  int horizon_days = 1;
  int daily_capacity = 1;
  std::vector<ExpandedTest> expanded_tests;
  /// Each set lists indices into expanded_tests.
  std::vector<std::vector<std::size_t>> distinct_vehicle_sets;
  /// false: every vehicle is used exactly once per set; true: at most once.
  bool distinct_vehicle_relaxed = false;

  friend bool operator==(const ScheduleSpec&, const ScheduleSpec&) = default;
};

struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<std::string> type_names;
  /// Indexed by type; the features a vehicle of that type may not have.
  std::vector<std::vector<FeatureId>> forbidden_per_type;
  std::vector<FeatureGroup> groups;
  std::vector<ImplicationRule> rules;
  std::vector<TestRequirement> tests;
  std::optional<ScheduleSpec> schedule;

  std::size_t feature_count() const { return feature_names.size(); }
  std::size_t type_count() const { return type_names.size(); }
  std::size_t test_count() const { return tests.size(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws ValidationError on the first broken invariant.
void validate(const Dataset& d);

/// Checks copy counts, windows, group ids and set references of a schedule.
void validate_schedule(const Dataset& d, const ScheduleSpec& s);

/// A single vehicle: its type and the features it carries.
struct VehicleConfig {
  TypeId type;
  std::vector<bool> features;

  friend bool operator==(const VehicleConfig&, const VehicleConfig&) = default;
};

// Direct Boolean evaluation of the buildability rules and test requirements.
bool rule_holds(const ImplicationRule& rule, const VehicleConfig& v);
bool is_buildable(const Dataset& d, const VehicleConfig& v);
bool meets_test(const TestRequirement& t, const std::vector<bool>& features);

/// Short human-readable rendering, e.g. "T1: F2 & !F4 -> F1 | F3".
std::string describe_rule(const Dataset& d, const ImplicationRule& rule);

}  // namespace fleetopt
