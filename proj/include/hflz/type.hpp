#pragma once

#include <memory>
#include <string>
#include <vector>

namespace hflz {

class Type;
using TypePtr = std::shared_ptr<const Type>;

/// Simple types `prop | int | sigma -> tau`. Every arrow chain ends in prop.
class Type {
 public:
  enum class Kind { Prop, Int, Arrow };

  static TypePtr prop();
  static TypePtr integer();
  /// Throws TypeError if `result` is int.
  static TypePtr arrow(TypePtr argument, TypePtr result);
  static TypePtr arrows(const std::vector<TypePtr>& arguments, TypePtr result);

  Kind kind() const { return kind_; }
  bool is_prop() const { return kind_ == Kind::Prop; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_arrow() const { return kind_ == Kind::Arrow; }

  const TypePtr& argument() const { return argument_; }
  const TypePtr& result() const { return result_; }

  /// Argument types along the arrow chain, outermost first.
  std::vector<TypePtr> arguments() const;
  std::size_t arity() const;

  std::string str() const;

 private:
  Type(Kind kind, TypePtr argument, TypePtr result)
      : kind_(kind), argument_(std::move(argument)), result_(std::move(result)) {}

  Kind kind_;
  TypePtr argument_;
  TypePtr result_;
};

bool operator==(const Type& a, const Type& b);
bool same_type(const TypePtr& a, const TypePtr& b);

/// order(prop) = order(int) = 0; order(s -> t) = max(order(s) + 1, order(t)).
unsigned order_of(const Type& type);

/// True for int -> ... -> int -> prop (including plain prop).
bool is_first_order_int_predicate(const Type& type);

}  // namespace hflz
