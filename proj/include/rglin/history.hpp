#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rglin/program.hpp"

namespace rglin {

struct Event {
  enum class Kind { invocation, response };
  Kind kind;
  Pid pid;
  std::size_t op_index;
  OpKind op;
  std::optional<Value> arg;     // invocation of push/enq
  std::optional<Value> result;  // response of pop/deq
  friend bool operator==(const Event&, const Event&) = default;
};

/// One operation occurrence reconstructed from a history. res_pos is
/// nullopt while the invocation is pending.
struct OpRecord {
  Pid pid;
  std::size_t op_index;
  OpKind op;
  std::optional<Value> arg;
  std::optional<Value> result;
  std::size_t inv_pos = 0;
  std::optional<std::size_t> res_pos;
  friend bool operator==(const OpRecord&, const OpRecord&) = default;

  bool completed() const { return res_pos.has_value(); }
};

struct History {
  std::vector<Event> events;
  std::vector<Value> initial;  // abstract initial state
  std::optional<std::vector<Value>> final_abstraction;
  SpecKind spec = SpecKind::stack;
  std::vector<Value> alphabet;

  std::vector<OpRecord> operations() const;  // validates well-formedness
};

/// Derives the invocation/response events from the process status changes
/// along the trace, plus the initial and final abstractions.
History project_history(const Trace& t, const Model& m);

/// All histories obtained by, for each pending invocation, either dropping
/// it or completing it with a response from the value domain (pop: the
/// alphabet plus null; deq: the alphabet; push/enq: a void response).
std::vector<History> completions(const History& h);

}  // namespace rglin
