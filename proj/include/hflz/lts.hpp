#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hflz {

/// Finite labeled transition system. States and labels are indexed in
/// declaration (or first-use) order.
struct Lts {
  struct Transition {
    std::size_t source = 0;
    std::size_t label = 0;
    std::size_t target = 0;

    friend bool operator==(const Transition&, const Transition&) = default;
  };

  std::vector<std::string> states;
  std::vector<std::string> labels;
  std::vector<Transition> transitions;
  std::size_t initial = 0;

  std::optional<std::size_t> state_index(std::string_view name) const;
  std::optional<std::size_t> label_index(std::string_view name) const;

  friend bool operator==(const Lts&, const Lts&) = default;
};

/// Text format:
///   states: q0 q1 q2
///   labels: read close end      (optional; enables strict label checking)
///   initial: q0
///   trans:
///     q0 read q0
Lts parse_lts(std::string_view text);

/// Inverse of parse_lts; always writes an explicit labels line when there are
/// labels, so the round trip is exact.
std::string print_lts(const Lts& lts);

/// One state, no labels, no transitions.
Lts trivial_model();

}  // namespace hflz
