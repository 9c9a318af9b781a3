#pragma once

#include <cstddef>

#include "fleetopt/dataset.hpp"

namespace fleetopt {

/// Counts of what a simplify() call changed, summed over all passes.
struct SimplifyReport {
  std::size_t collapsed_rules = 0;        // typed copies folded into one untyped rule
  std::size_t removed_literals = 0;       // literals fixed by a type's forbidden set
  std::size_t dropped_unsatisfiable = 0;  // rules whose left side can never hold
  std::size_t dropped_tautologies = 0;    // rules whose right side always holds
  std::size_t reduced_repeats = 0;        // rules with a feature on both sides
  std::size_t split_rules = 0;            // disjunctive left sides split per disjunct
  std::size_t duplicate_rules = 0;
  std::size_t merged_tests = 0;
};

/// Returns an equivalent dataset with redundant rule structure removed and
/// duplicate tests merged (cars summed, weight = max). The result is
/// canonical: simplify(simplify(d)) == simplify(d). Test merging is skipped
/// when the dataset carries a schedule, since the schedule refers to tests
/// by index.
Dataset simplify(const Dataset& d, SimplifyReport* report = nullptr);

}  // namespace fleetopt
