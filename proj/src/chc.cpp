#include <algorithm>
#include <cctype>
#include <set>

#include "hflz/chc.hpp"
#include "hflz/entailment.hpp"
#include "hflz/error.hpp"

namespace hflz {

namespace {

void check_ids(const IntExprPtr& e, const std::set<std::uint64_t>& bound, const std::string& where) {
  for (auto id : e->free_ids())
    if (!bound.count(id)) throw Error("unbound variable in clause " + where);
}

void check_app(const ChcSystem& s, const PredApp& app, const std::set<std::uint64_t>& bound, const std::string& where) {
  auto it = s.predicates.find(app.predicate);
  if (it == s.predicates.end()) throw Error("undeclared predicate '" + app.predicate + "' in clause " + where);
  if (it->second != app.args.size())
    throw Error("predicate '" + app.predicate + "' expects " + std::to_string(it->second) + " arguments, got " +
                std::to_string(app.args.size()) + " in clause " + where);
  for (const auto& a : app.args) check_ids(a, bound, where);
}

}  // namespace

void ChcSystem::validate() const {
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const Clause& c = clauses[i];
    std::string where = std::to_string(i + 1);
    std::set<std::uint64_t> bound;
    for (const auto& v : c.vars) bound.insert(v.id);
    for (const auto& lit : c.body) {
      if (const auto* f = std::get_if<FormulaPtr>(&lit)) {
        if (!(*f)->is(Formula::Kind::Atom)) throw Error("clause " + where + " has a non-atomic constraint");
        check_ids((*f)->int_lhs(), bound, where);
        check_ids((*f)->int_rhs(), bound, where);
      } else {
        check_app(*this, std::get<PredApp>(lit), bound, where);
      }
    }
    if (c.head) check_app(*this, *c.head, bound, where);
  }
}

std::size_t ChcSystem::goal_count() const {
  return static_cast<std::size_t>(std::count_if(clauses.begin(), clauses.end(), [](const Clause& c) { return c.is_goal(); }));
}

bool same_system(const ChcSystem& a, const ChcSystem& b) { return emit_smtlib_horn(a) == emit_smtlib_horn(b); }

// ---- emission ---------------------------------------------------------------

namespace {

std::string emit_app(const PredApp& app, const std::map<std::uint64_t, std::string>& names) {
  if (app.args.empty()) return smtlib_symbol(app.predicate);
  std::string out = "(" + smtlib_symbol(app.predicate);
  for (const auto& a : app.args) out += " " + smtlib_term(a, names);
  return out + ")";
}

}  // namespace

std::string emit_smtlib_horn(const ChcSystem& system) {
  std::string out = "(set-logic HORN)\n";
  for (const auto& [name, arity] : system.predicates) {
    out += "(declare-fun " + smtlib_symbol(name) + " (";
    for (std::size_t i = 0; i < arity; ++i) out += i ? " Int" : "Int";
    out += ") Bool)\n";
  }
  for (const auto& c : system.clauses) {
    std::map<std::uint64_t, std::string> names;
    std::set<std::string> used;
    std::string binders;
    for (const auto& v : c.vars) {
      std::string n = v.name.empty() ? "v" : v.name;
      for (int k = 1; used.count(n); ++k) n = v.name + "_" + std::to_string(k);
      used.insert(n);
      names[v.id] = n;
      binders += (binders.empty() ? "(" : " (") + smtlib_symbol(n) + " Int)";
    }
    std::vector<std::string> lits;
    for (const auto& lit : c.body) {
      if (const auto* f = std::get_if<FormulaPtr>(&lit)) lits.push_back(smtlib_atom(*f, names));
      else lits.push_back(emit_app(std::get<PredApp>(lit), names));
    }
    std::string body;
    if (lits.empty()) body = "true";
    else if (lits.size() == 1) body = lits[0];
    else {
      body = "(and";
      for (const auto& l : lits) body += " " + l;
      body += ")";
    }
    std::string head = c.head ? emit_app(*c.head, names) : "false";
    std::string clause = "(=> " + body + " " + head + ")";
    if (!c.vars.empty()) clause = "(forall (" + binders + ") " + clause + ")";
    out += "(assert " + clause + ")\n";
  }
  return out + "(check-sat)\n";
}

// ---- reading ----------------------------------------------------------------

namespace {

struct Sexp {
  bool atom = true;
  std::string text;
  bool quoted = false;
  std::vector<Sexp> items;
  int line = 1;
  int column = 1;

  bool is(std::string_view s) const { return atom && !quoted && text == s; }
};

class SexpReader {
 public:
  explicit SexpReader(std::string_view text) : text_(text) {}

  std::vector<Sexp> all() {
    std::vector<Sexp> out;
    skip();
    while (pos_ < text_.size()) {
      out.push_back(read());
      skip();
    }
    return out;
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Sexp read() {
    Sexp s;
    s.line = line_;
    s.column = col_;
    char c = text_[pos_];
    if (c == '(') {
      s.atom = false;
      advance();
      skip();
      while (pos_ < text_.size() && text_[pos_] != ')') {
        s.items.push_back(read());
        skip();
      }
      if (pos_ >= text_.size()) throw ParseError("unbalanced '('", s.line, s.column);
      advance();
      return s;
    }
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '|') {
      advance();
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != '|') advance();
      if (pos_ >= text_.size()) throw ParseError("unterminated quoted symbol", s.line, s.column);
      s.text = std::string(text_.substr(start, pos_ - start));
      s.quoted = true;
      advance();
      return s;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != ';')
      advance();
    s.text = std::string(text_.substr(start, pos_ - start));
    return s;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

[[noreturn]] void fail(const Sexp& s, const std::string& msg) { throw ParseError(msg, s.line, s.column); }

bool is_numeral(const Sexp& s) {
  return s.atom && !s.quoted && !s.text.empty() &&
         std::all_of(s.text.begin(), s.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

std::int64_t numeral(const Sexp& s) {
  try {
    return std::stoll(s.text);
  } catch (const std::exception&) {
    fail(s, "integer literal out of range");
  }
}

class HornReader {
 public:
  ChcSystem read(std::string_view text) {
    for (const auto& cmd : SexpReader(text).all()) {
      if (cmd.atom || cmd.items.empty() || !cmd.items[0].atom) fail(cmd, "expected a command");
      const std::string& head = cmd.items[0].text;
      if (head == "set-logic" || head == "set-info" || head == "set-option" || head == "check-sat" ||
          head == "exit" || head == "get-model")
        continue;
      if (head == "declare-fun") declare(cmd);
      else if (head == "assert") system_.clauses.push_back(clause(cmd.items.at(1)));
      else fail(cmd, "unsupported command '" + head + "'");
    }
    system_.validate();
    return system_;
  }

 private:
  void declare(const Sexp& cmd) {
    if (cmd.items.size() != 4 || !cmd.items[1].atom || cmd.items[2].atom || !cmd.items[3].is("Bool"))
      fail(cmd, "expected (declare-fun name (Int ...) Bool)");
    for (const auto& s : cmd.items[2].items)
      if (!s.is("Int")) fail(s, "predicate arguments must be Int");
    system_.predicates[cmd.items[1].text] = cmd.items[2].items.size();
  }

  Clause clause(const Sexp& s) {
    Clause c;
    scope_.clear();
    const Sexp* body = &s;
    if (!s.atom && !s.items.empty() && s.items[0].is("forall")) {
      if (s.items.size() != 3 || s.items[1].atom) fail(s, "malformed forall");
      for (const auto& b : s.items[1].items) {
        if (b.atom || b.items.size() != 2 || !b.items[0].atom || !b.items[1].is("Int"))
          fail(b, "expected (name Int)");
        Symbol v = fresh_symbol(b.items[0].text);
        c.vars.push_back(v);
        scope_[v.name] = v;
      }
      body = &s.items[2];
    }
    if (!body->atom && !body->items.empty() && body->items[0].is("=>")) {
      if (body->items.size() != 3) fail(*body, "=> takes two arguments");
      conjuncts(body->items[1], c.body);
      head(body->items[2], c);
    } else if (!body->atom && !body->items.empty() && body->items[0].is("not")) {
      conjuncts(body->items.at(1), c.body);
    } else {
      head(*body, c);
    }
    return c;
  }

  void head(const Sexp& s, Clause& c) {
    if (s.is("false")) return;
    if (auto app = pred_app(s)) {
      c.head = std::move(*app);
      return;
    }
    FormulaPtr a = atom(s);
    if (!a) fail(s, "unsupported clause head");
    c.body.push_back(Formula::atom(complement(a->op()), a->int_lhs(), a->int_rhs()));
  }

  void conjuncts(const Sexp& s, std::vector<Literal>& out) {
    if (s.is("true")) return;
    if (!s.atom && !s.items.empty() && s.items[0].is("and")) {
      for (std::size_t i = 1; i < s.items.size(); ++i) conjuncts(s.items[i], out);
      return;
    }
    if (!s.atom && s.items.size() == 2 && s.items[0].is("not")) {
      FormulaPtr a = atom(s.items[1]);
      if (!a) fail(s, "only atoms may be negated");
      out.push_back(Formula::atom(complement(a->op()), a->int_lhs(), a->int_rhs()));
      return;
    }
    if (auto app = pred_app(s)) {
      out.push_back(std::move(*app));
      return;
    }
    FormulaPtr a = atom(s);
    if (!a) fail(s, "unsupported body literal");
    out.push_back(a);
  }

  std::optional<PredApp> pred_app(const Sexp& s) {
    const Sexp& name = s.atom ? s : (s.items.empty() ? s : s.items[0]);
    if (!name.atom || !system_.predicates.count(name.text)) return std::nullopt;
    PredApp app{name.text, {}};
    if (!s.atom)
      for (std::size_t i = 1; i < s.items.size(); ++i) app.args.push_back(term(s.items[i]));
    std::size_t arity = system_.predicates.at(name.text);
    if (app.args.size() != arity)
      fail(s, "predicate '" + name.text + "' expects " + std::to_string(arity) + " arguments, got " +
                  std::to_string(app.args.size()));
    return app;
  }

  FormulaPtr atom(const Sexp& s) {
    if (s.atom || s.items.size() != 3 || !s.items[0].atom) return nullptr;
    static const std::map<std::string, CmpOp> ops = {{"<=", CmpOp::Le}, {"<", CmpOp::Lt}, {"=", CmpOp::Eq},
                                                     {"distinct", CmpOp::Ne}, {">=", CmpOp::Ge}, {">", CmpOp::Gt}};
    auto it = ops.find(s.items[0].text);
    if (it == ops.end()) return nullptr;
    return Formula::atom(it->second, term(s.items[1]), term(s.items[2]));
  }

  IntExprPtr term(const Sexp& s) {
    if (s.atom) {
      if (is_numeral(s)) return IntExpr::constant(numeral(s));
      auto it = scope_.find(s.text);
      if (it == scope_.end()) fail(s, "unknown variable '" + s.text + "'");
      return IntExpr::var(it->second);
    }
    if (s.items.empty() || !s.items[0].atom) fail(s, "expected an integer term");
    const std::string& op = s.items[0].text;
    std::size_t n = s.items.size() - 1;
    if (op == "-" && n == 1) {
      if (is_numeral(s.items[1])) return IntExpr::constant(-numeral(s.items[1]));
      return IntExpr::neg(term(s.items[1]));
    }
    if ((op == "+" || op == "-") && n >= 2) {
      IntExprPtr acc = term(s.items[1]);
      for (std::size_t i = 2; i <= n; ++i)
        acc = op == "+" ? IntExpr::add(acc, term(s.items[i])) : IntExpr::sub(acc, term(s.items[i]));
      return acc;
    }
    if (op == "*" && n == 2) {
      const Sexp* k = &s.items[1];
      const Sexp* t = &s.items[2];
      if (!is_numeral(*k) && !(k->items.size() == 2 && k->items[0].is("-") && is_numeral(k->items[1]))) std::swap(k, t);
      IntExprPtr kv = term(*k);
      if (kv->kind() != IntExpr::Kind::Const) fail(s, "non-linear multiplication");
      std::int64_t c = kv->value();
      if (c > 64 || c < -64) fail(s, "multiplication constant too large");
      IntExprPtr x = term(*t);
      IntExprPtr acc = IntExpr::constant(0);
      for (std::int64_t i = 0; i < (c < 0 ? -c : c); ++i) acc = i == 0 ? x : IntExpr::add(acc, x);
      return c < 0 ? IntExpr::neg(acc) : acc;
    }
    fail(s, "unsupported term operator '" + op + "'");
  }

  ChcSystem system_;
  std::map<std::string, Symbol> scope_;
};

}  // namespace

ChcSystem parse_smtlib_horn(std::string_view text) { return HornReader().read(text); }

}  // namespace hflz
