#include "hflz/type.hpp"

#include <algorithm>

#include "hflz/error.hpp"

namespace hflz {

TypePtr Type::prop() {
  static const TypePtr instance(new Type(Kind::Prop, nullptr, nullptr));
  return instance;
}

TypePtr Type::integer() {
  static const TypePtr instance(new Type(Kind::Int, nullptr, nullptr));
  return instance;
}

TypePtr Type::arrow(TypePtr argument, TypePtr result) {
  if (!argument || !result) throw TypeError("incomplete arrow type");
  if (result->is_int()) throw TypeError("arrow type cannot return int: " + argument->str() + " -> int");
  return TypePtr(new Type(Kind::Arrow, std::move(argument), std::move(result)));
}

TypePtr Type::arrows(const std::vector<TypePtr>& arguments, TypePtr result) {
  for (auto it = arguments.rbegin(); it != arguments.rend(); ++it) result = arrow(*it, result);
  return result;
}

std::vector<TypePtr> Type::arguments() const {
  std::vector<TypePtr> out;
  const Type* t = this;
  while (t->is_arrow()) {
    out.push_back(t->argument_);
    t = t->result_.get();
  }
  return out;
}

std::size_t Type::arity() const {
  std::size_t n = 0;
  for (const Type* t = this; t->is_arrow(); t = t->result_.get()) ++n;
  return n;
}

std::string Type::str() const {
  switch (kind_) {
    case Kind::Prop:
      return "prop";
    case Kind::Int:
      return "int";
    case Kind::Arrow: {
      std::string lhs = argument_->str();
      if (argument_->is_arrow()) lhs = "(" + lhs + ")";
      return lhs + " -> " + result_->str();
    }
  }
  return "?";
}

bool operator==(const Type& a, const Type& b) {
  if (&a == &b) return true;
  if (a.kind() != b.kind()) return false;
  if (!a.is_arrow()) return true;
  return *a.argument() == *b.argument() && *a.result() == *b.result();
}

bool same_type(const TypePtr& a, const TypePtr& b) {
  if (!a || !b) return a == b;
  return *a == *b;
}

unsigned order_of(const Type& type) {
  if (!type.is_arrow()) return 0;
  return std::max(order_of(*type.argument()) + 1, order_of(*type.result()));
}

bool is_first_order_int_predicate(const Type& type) {
  const Type* t = &type;
  while (t->is_arrow()) {
    if (!t->argument()->is_int()) return false;
    t = t->result().get();
  }
  return t->is_prop();
}

}  // namespace hflz
