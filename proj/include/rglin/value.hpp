#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace rglin {

/// An element of the finite value alphabet (single letters), or the
/// distinguished null. Null is distinct from every element.
class Value {
 public:
  constexpr Value() = default;

  static Value elem(char symbol) {
    if (symbol < 'A' || symbol > 'Z')
      throw std::invalid_argument("Value::elem: symbol must be A..Z");
    return Value(symbol);
  }

  static constexpr Value null() { return Value(); }

  constexpr bool is_null() const { return sym_ == 0; }

  char symbol() const {
    if (is_null()) throw std::logic_error("Value: null has no symbol");
    return sym_;
  }

  std::string str() const { return is_null() ? "null" : std::string(1, sym_); }

  friend constexpr auto operator<=>(const Value&, const Value&) = default;

 private:
  constexpr explicit Value(char s) : sym_(s) {}
  char sym_ = 0;
};

using NodeId = std::uint32_t;

/// A pointer-typed local: a node identifier or the null pointer.
struct NodeRef {
  std::optional<NodeId> id;
  friend constexpr auto operator<=>(const NodeRef&, const NodeRef&) = default;
};

/// What a process-local variable can hold: nil (unset), a data value,
/// a natural, or a node reference.
using LocalValue = std::variant<std::monostate, Value, std::uint32_t, NodeRef>;

enum class OpKind { push, pop, enq, deq };

std::string to_string(OpKind op);
OpKind op_kind_from_string(const std::string& s);

/// True for operations that return a value (pop, deq).
bool op_returns_value(OpKind op);
/// True for operations that take a value argument (push, enq).
bool op_takes_arg(OpKind op);

enum class Phase { idle, invoked, returned };

/// One operation a scenario process will run, e.g. push(D).
struct OpSpec {
  OpKind op;
  std::optional<Value> arg;
  friend bool operator==(const OpSpec&, const OpSpec&) = default;
};

std::string to_string(const OpSpec& spec);

}  // namespace rglin
