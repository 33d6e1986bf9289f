#pragma once

#include <random>
#include <string>

#include "hflz/lts.hpp"

namespace hflz::test {

/// Up to `max_states` states over the labels a, b, c.
Lts random_lts(std::mt19937_64& rng, std::size_t max_states = 4);

/// Closed pure formula text of type prop, with order-0 and order-1 fixpoints.
std::string random_pure_formula(std::mt19937_64& rng, int depth = 3);

struct FirstOrderInstance {
  std::string formula;
  /// Predicate-set text covering every integer binder.
  std::string predicates;
};

/// Closed first-order formula text with int -> prop fixpoints whose recursive
/// calls are guarded by lo < y < hi for |lo|, |hi| <= 8, so every integer
/// reached stays within [-10, 10].
FirstOrderInstance random_first_order(std::mt19937_64& rng, int depth = 2);

}  // namespace hflz::test
