#include "rglin/value.hpp"

namespace rglin {

std::string to_string(OpKind op) {
  switch (op) {
    case OpKind::push: return "push";
    case OpKind::pop: return "pop";
    case OpKind::enq: return "enq";
    case OpKind::deq: return "deq";
  }
  throw std::logic_error("unreachable OpKind");
}

OpKind op_kind_from_string(const std::string& s) {
  if (s == "push") return OpKind::push;
  if (s == "pop") return OpKind::pop;
  if (s == "enq") return OpKind::enq;
  if (s == "deq") return OpKind::deq;
  throw std::invalid_argument("unknown operation '" + s + "'");
}

bool op_returns_value(OpKind op) { return op == OpKind::pop || op == OpKind::deq; }

bool op_takes_arg(OpKind op) { return op == OpKind::push || op == OpKind::enq; }

std::string to_string(const OpSpec& spec) {
  std::string s = to_string(spec.op) + "(";
  if (spec.arg) s += spec.arg->str();
  return s + ")";
}

}  // namespace rglin
