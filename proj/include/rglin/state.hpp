#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rglin/value.hpp"

namespace rglin {

struct Node {
  Value val;
  std::optional<NodeId> next;
  friend bool operator==(const Node&, const Node&) = default;
};

enum class AllocMode { fresh_ids, reuse };

std::string to_string(AllocMode mode);

/// Explicit heap for the stack. Nodes are never erased, so stale pointers
/// held by paused processes stay readable; in reuse mode freed ids are
/// recycled LIFO, which is the precondition for the ABA behaviour.
struct NodeStore {
  std::map<NodeId, Node> nodes;
  std::optional<NodeId> head;
  std::vector<NodeId> freelist;
  AllocMode mode = AllocMode::fresh_ids;
  NodeId next_id = 0;

  NodeId allocate(Value v);
  void release(NodeId id);  // successful pop CAS hands the id back (reuse mode)

  friend bool operator==(const NodeStore&, const NodeStore&) = default;
};

/// Fixed-capacity array queue; null marks an empty slot.
struct QueueState {
  std::vector<Value> q;
  std::uint32_t last = 0;

  std::uint32_t capacity() const { return static_cast<std::uint32_t>(q.size()); }

  friend bool operator==(const QueueState&, const QueueState&) = default;
};

using SharedState = std::variant<NodeStore, QueueState>;

struct ProcessState {
  int pc = 0;
  std::size_t op_index = 0;
  Phase phase = Phase::idle;
  OpKind op = OpKind::push;
  std::optional<Value> arg;
  std::optional<Value> result;
  std::map<std::string, LocalValue> locals;
  bool flag = false;     // ghost: the operation's effect has landed
  bool set_ind = false;  // ghost: enq has reserved its slot

  const LocalValue* local(const std::string& name) const;
  std::optional<std::uint32_t> nat_local(const std::string& name) const;
  std::optional<NodeRef> node_local(const std::string& name) const;
  std::optional<Value> value_local(const std::string& name) const;

  friend bool operator==(const ProcessState&, const ProcessState&) = default;
};

struct SystemState {
  SharedState shared;
  std::vector<ProcessState> procs;
  friend bool operator==(const SystemState&, const SystemState&) = default;
};

bool is_stack_state(const SystemState& s);
const NodeStore& stack_of(const SystemState& s);
NodeStore& stack_of(SystemState& s);
const QueueState& queue_of(const SystemState& s);
QueueState& queue_of(SystemState& s);

/// Byte key used for duplicate-state detection. In fresh-ids mode node ids
/// are renamed by discovery order (head chain first, then process locals)
/// and the allocation counter is dropped; in reuse mode ids are kept as-is.
std::string canonical_key(const SystemState& s);

}  // namespace rglin
