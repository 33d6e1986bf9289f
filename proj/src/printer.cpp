#include "hflz/printer.hpp"

#include <unordered_map>

#include "lexer.hpp"

namespace hflz {

namespace {

class Printer {
 public:
  explicit Printer(const IdSet& free) : free_(free) {}

  void name_free(const FormulaPtr& f) { visit_free(f); }
  void name_free(const IntExprPtr& e) { visit_free(e); }

  std::string formula(const FormulaPtr& f, int level, bool tail);
  std::string int_expr(const IntExprPtr& e, int level);

 private:
  std::string bind(const Symbol& s);
  void unbind(const Symbol& s);
  const std::string& name_of(const Symbol& s);
  void visit_free(const FormulaPtr& f);
  void visit_free(const IntExprPtr& e);
  void claim_free(const Symbol& s);
  std::string arg(const Arg& a);
  std::string binder(const FormulaPtr& f);

  const IdSet& free_;
  std::unordered_map<std::uint64_t, std::string> names_;
  std::unordered_map<std::string, int> in_use_;
};

void Printer::claim_free(const Symbol& s) {
  if (!contains(free_, s.id) || names_.count(s.id)) return;
  bind(s);
}

void Printer::visit_free(const IntExprPtr& e) {
  switch (e->kind()) {
    case IntExpr::Kind::Var: claim_free(e->symbol()); break;
    case IntExpr::Kind::Add:
    case IntExpr::Kind::Sub:
      visit_free(e->lhs());
      visit_free(e->rhs());
      break;
    case IntExpr::Kind::Neg: visit_free(e->lhs()); break;
    default: break;
  }
}

void Printer::visit_free(const FormulaPtr& f) {
  if (f->free_ids().empty()) return;
  switch (f->kind()) {
    case Formula::Kind::Var: claim_free(f->symbol()); break;
    case Formula::Kind::Or:
    case Formula::Kind::And:
      visit_free(f->lhs());
      visit_free(f->rhs());
      break;
    case Formula::Kind::App:
      visit_free(f->fun());
      if (is_int_arg(f->arg())) visit_free(std::get<IntExprPtr>(f->arg()));
      else visit_free(std::get<FormulaPtr>(f->arg()));
      break;
    case Formula::Kind::Atom:
      visit_free(f->int_lhs());
      visit_free(f->int_rhs());
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      for (const auto& b : f->bounds()) visit_free(b);
      visit_free(f->body());
      break;
    case Formula::Kind::True:
    case Formula::Kind::False: break;
    default: visit_free(f->body()); break;
  }
}

std::string Printer::bind(const Symbol& s) {
  std::string base = s.name.empty() ? "v" : s.name;
  std::size_t primes = base.size();
  while (primes > 0 && base[primes - 1] == '\'') --primes;
  std::string stem = base.substr(0, primes);
  std::string tick = base.substr(primes);
  if (stem.empty()) stem = "v";
  std::string candidate = stem + tick;
  for (int k = 1; in_use_[candidate] > 0 || detail::is_keyword(candidate) || candidate == "max"; ++k)
    candidate = stem + std::to_string(k) + tick;
  ++in_use_[candidate];
  names_[s.id] = candidate;
  return candidate;
}

void Printer::unbind(const Symbol& s) {
  auto it = names_.find(s.id);
  if (it == names_.end()) return;
  --in_use_[it->second];
  names_.erase(it);
}

const std::string& Printer::name_of(const Symbol& s) {
  auto it = names_.find(s.id);
  if (it != names_.end()) return it->second;
  // Should not happen for well-scoped input; keep output readable anyway.
  bind(s);
  return names_[s.id];
}

std::string Printer::int_expr(const IntExprPtr& e, int level) {
  switch (e->kind()) {
    case IntExpr::Kind::Const: return std::to_string(e->value());
    case IntExpr::Kind::Var: return name_of(e->symbol());
    case IntExpr::Kind::Add:
    case IntExpr::Kind::Sub: {
      std::string s = int_expr(e->lhs(), 4) + (e->kind() == IntExpr::Kind::Add ? " + " : " - ") + int_expr(e->rhs(), 5);
      return level > 4 ? "(" + s + ")" : s;
    }
    case IntExpr::Kind::Neg: return "-" + int_expr(e->lhs(), 5);
  }
  return "?";
}

std::string Printer::arg(const Arg& a) {
  if (is_int_arg(a)) return int_expr(std::get<IntExprPtr>(a), 0);
  return formula(std::get<FormulaPtr>(a), 0, true);
}

std::string Printer::binder(const FormulaPtr& f) {
  std::string out;
  std::vector<Symbol> bound;
  switch (f->kind()) {
    case Formula::Kind::Mu:
    case Formula::Kind::Nu: {
      std::string name = bind(f->symbol());
      bound.push_back(f->symbol());
      out = (f->is(Formula::Kind::Mu) ? "mu " : "nu ") + name + ": " + f->binder_type()->str() + ". " +
            formula(f->body(), 0, true);
      break;
    }
    case Formula::Kind::Lambda: {
      FormulaPtr cur = f;
      std::vector<std::string> params;
      while (cur->is(Formula::Kind::Lambda)) {
        params.push_back(bind(cur->symbol()) + ": " + cur->binder_type()->str());
        bound.push_back(cur->symbol());
        cur = cur->body();
      }
      if (params.size() == 1) {
        out = "\\" + params[0];
      } else {
        out = "\\(";
        for (std::size_t i = 0; i < params.size(); ++i) out += (i ? ", " : "") + params[i];
        out += ")";
      }
      out += ". " + formula(cur, 0, true);
      break;
    }
    default: {
      // Quantifiers; consecutive unbounded ones of the same kind are merged.
      Formula::Kind kind = f->kind();
      out = kind == Formula::Kind::Exists ? "exists " : "forall ";
      FormulaPtr cur = f;
      std::vector<std::string> vars;
      std::string bound_text;
      while (cur->is(kind)) {
        if (!cur->bounds().empty()) {
          if (!vars.empty()) break;
          std::vector<std::string> pieces;
          for (const auto& b : cur->bounds()) pieces.push_back(int_expr(b, 0));
          vars.push_back(bind(cur->symbol()));
          bound.push_back(cur->symbol());
          if (pieces.size() == 1) {
            bound_text = " >= " + pieces[0];
          } else {
            bound_text = " >= max(";
            for (std::size_t i = 0; i < pieces.size(); ++i) bound_text += (i ? ", " : "") + pieces[i];
            bound_text += ")";
          }
          cur = cur->body();
          break;
        }
        vars.push_back(bind(cur->symbol()));
        bound.push_back(cur->symbol());
        cur = cur->body();
      }
      for (std::size_t i = 0; i < vars.size(); ++i) out += (i ? ", " : "") + vars[i];
      out += bound_text + ". " + formula(cur, 0, true);
      break;
    }
  }
  for (const auto& s : bound) unbind(s);
  return out;
}

std::string Printer::formula(const FormulaPtr& f, int level, bool tail) {
  auto wrap = [](bool paren, const std::string& s) { return paren ? "(" + s + ")" : s; };
  switch (f->kind()) {
    case Formula::Kind::True: return "true";
    case Formula::Kind::False: return "false";
    case Formula::Kind::Var: return name_of(f->symbol());
    case Formula::Kind::Or:
    case Formula::Kind::And: {
      int own = f->is(Formula::Kind::Or) ? 1 : 2;
      bool paren = level > own;
      auto side = [&](const FormulaPtr& c, int lvl, bool t) {
        // A conjunction directly under a disjunction is parenthesized for readability.
        if (own == 1 && c->is(Formula::Kind::And)) return "(" + formula(c, 0, true) + ")";
        return formula(c, lvl, t);
      };
      std::string s = side(f->lhs(), own, false) + (own == 1 ? " \\/ " : " /\\ ") + side(f->rhs(), own + 1, paren || tail);
      return wrap(paren, s);
    }
    case Formula::Kind::Atom: {
      std::string s = int_expr(f->int_lhs(), 4) + " " + std::string(cmp_text(f->op())) + " " + int_expr(f->int_rhs(), 4);
      return wrap(level > 3, s);
    }
    case Formula::Kind::Diamond:
    case Formula::Kind::Box: {
      bool paren = level > 5;
      std::string open = f->is(Formula::Kind::Diamond) ? "<" : "[";
      std::string close = f->is(Formula::Kind::Diamond) ? "> " : "] ";
      return wrap(paren, open + f->label() + close + formula(f->body(), 5, paren || tail));
    }
    case Formula::Kind::App: {
      Spine sp = spine_of(f);
      std::string head = sp.head->is(Formula::Kind::Var) ? name_of(sp.head->symbol()) : "(" + formula(sp.head, 0, true) + ")";
      std::string s = head + "(";
      for (std::size_t i = 0; i < sp.args.size(); ++i) s += (i ? ", " : "") + arg(sp.args[i]);
      return s + ")";
    }
    default:
      return wrap(level > 0 && !tail, binder(f));
  }
}

}  // namespace

std::string print(const FormulaPtr& formula) {
  Printer p(formula->free_ids());
  p.name_free(formula);
  return p.formula(formula, 0, true);
}

std::string print(const IntExprPtr& expr) {
  Printer p(expr->free_ids());
  p.name_free(expr);
  return p.int_expr(expr, 0);
}

std::string print(const Arg& arg) {
  if (is_int_arg(arg)) return print(std::get<IntExprPtr>(arg));
  return print(std::get<FormulaPtr>(arg));
}

}  // namespace hflz
