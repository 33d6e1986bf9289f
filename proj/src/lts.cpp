#include "hflz/lts.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "hflz/error.hpp"

namespace hflz {

namespace {

std::vector<std::string> words(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<std::size_t> Lts::state_index(std::string_view name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

std::optional<std::size_t> Lts::label_index(std::string_view name) const {
  auto it = std::find(labels.begin(), labels.end(), name);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

Lts parse_lts(std::string_view text) {
  Lts lts;
  bool have_states = false;
  bool strict_labels = false;
  std::optional<std::string> initial;
  int initial_line = 0;
  bool in_trans = false;
  struct Pending {
    std::string src, label, dst;
    int line;
  };
  std::vector<Pending> pending;

  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = trim(raw);
    if (line.empty()) continue;

    auto colon = line.find(':');
    std::string key = colon == std::string_view::npos ? "" : std::string(trim(line.substr(0, colon)));
    if (key == "states" || key == "labels" || key == "initial" || key == "trans") {
      auto rest = words(line.substr(colon + 1));
      in_trans = false;
      if (key == "states") {
        if (have_states) throw ParseError("duplicate 'states:' line", lineno, 1);
        have_states = true;
        for (auto& s : rest) {
          if (lts.state_index(s)) throw ParseError("duplicate state '" + s + "'", lineno, 1);
          lts.states.push_back(s);
        }
      } else if (key == "labels") {
        strict_labels = true;
        for (auto& l : rest)
          if (!lts.label_index(l)) lts.labels.push_back(l);
      } else if (key == "initial") {
        if (rest.size() != 1) throw ParseError("'initial:' takes exactly one state", lineno, 1);
        initial = rest[0];
        initial_line = lineno;
      } else {
        in_trans = true;
        if (!rest.empty()) throw ParseError("transitions go on the lines after 'trans:'", lineno, 1);
      }
      continue;
    }
    if (!in_trans) throw ParseError("unexpected line: " + std::string(line), lineno, 1);
    auto w = words(line);
    if (w.size() != 3) throw ParseError("transition must be 'source label target'", lineno, 1);
    pending.push_back({w[0], w[1], w[2], lineno});
  }

  if (!have_states || lts.states.empty()) throw ParseError("missing 'states:' declaration", 1, 1);
  if (!initial) throw ParseError("missing 'initial:' declaration", lineno, 1);
  auto init = lts.state_index(*initial);
  if (!init) throw ParseError("initial state '" + *initial + "' is not declared", initial_line, 1);
  lts.initial = *init;

  for (const auto& p : pending) {
    auto s = lts.state_index(p.src);
    if (!s) throw ParseError("undeclared state '" + p.src + "'", p.line, 1);
    auto t = lts.state_index(p.dst);
    if (!t) throw ParseError("undeclared state '" + p.dst + "'", p.line, 1);
    auto l = lts.label_index(p.label);
    if (!l) {
      if (strict_labels) throw ParseError("undeclared label '" + p.label + "'", p.line, 1);
      lts.labels.push_back(p.label);
      l = lts.labels.size() - 1;
    }
    Lts::Transition tr{*s, *l, *t};
    if (std::find(lts.transitions.begin(), lts.transitions.end(), tr) == lts.transitions.end())
      lts.transitions.push_back(tr);
  }
  return lts;
}

std::string print_lts(const Lts& lts) {
  std::string out = "states:";
  for (const auto& s : lts.states) out += " " + s;
  out += "\n";
  if (!lts.labels.empty()) {
    out += "labels:";
    for (const auto& l : lts.labels) out += " " + l;
    out += "\n";
  }
  out += "initial: " + lts.states.at(lts.initial) + "\n";
  out += "trans:\n";
  for (const auto& t : lts.transitions)
    out += "  " + lts.states[t.source] + " " + lts.labels[t.label] + " " + lts.states[t.target] + "\n";
  return out;
}

Lts trivial_model() {
  Lts lts;
  lts.states = {"s0"};
  lts.initial = 0;
  return lts;
}

}  // namespace hflz
