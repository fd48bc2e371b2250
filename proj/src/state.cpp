#include "rglin/state.hpp"

#include <set>

namespace rglin {

std::string to_string(AllocMode mode) {
  return mode == AllocMode::fresh_ids ? "fresh-ids" : "reuse";
}

NodeId NodeStore::allocate(Value v) {
  if (mode == AllocMode::reuse && !freelist.empty()) {
    NodeId id = freelist.back();
    freelist.pop_back();
    nodes[id] = Node{v, std::nullopt};
    return id;
  }
  NodeId id = next_id++;
  nodes.emplace(id, Node{v, std::nullopt});
  return id;
}

void NodeStore::release(NodeId id) {
  if (mode == AllocMode::reuse) freelist.push_back(id);
}

const LocalValue* ProcessState::local(const std::string& name) const {
  auto it = locals.find(name);
  return it == locals.end() ? nullptr : &it->second;
}

std::optional<std::uint32_t> ProcessState::nat_local(const std::string& name) const {
  const LocalValue* v = local(name);
  if (!v) return std::nullopt;
  if (const auto* n = std::get_if<std::uint32_t>(v)) return *n;
  return std::nullopt;
}

std::optional<NodeRef> ProcessState::node_local(const std::string& name) const {
  const LocalValue* v = local(name);
  if (!v) return std::nullopt;
  if (const auto* n = std::get_if<NodeRef>(v)) return *n;
  return std::nullopt;
}

std::optional<Value> ProcessState::value_local(const std::string& name) const {
  const LocalValue* v = local(name);
  if (!v) return std::nullopt;
  if (const auto* x = std::get_if<Value>(v)) return *x;
  return std::nullopt;
}

bool is_stack_state(const SystemState& s) { return std::holds_alternative<NodeStore>(s.shared); }

const NodeStore& stack_of(const SystemState& s) { return std::get<NodeStore>(s.shared); }
NodeStore& stack_of(SystemState& s) { return std::get<NodeStore>(s.shared); }
const QueueState& queue_of(const SystemState& s) { return std::get<QueueState>(s.shared); }
QueueState& queue_of(SystemState& s) { return std::get<QueueState>(s.shared); }

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_opt_id(std::string& out, const std::optional<NodeId>& id) {
  if (id) {
    out.push_back('#');
    put_u32(out, *id);
  } else {
    out.push_back('0');
  }
}

void put_value(std::string& out, const Value& v) {
  out.push_back(v.is_null() ? '\0' : v.symbol());
}

// Renames node ids by discovery order: the head chain first, then node-typed
// locals in (pid, name) order, following next pointers transitively.
std::map<NodeId, NodeId> canonical_renaming(const SystemState& s) {
  const NodeStore& st = stack_of(s);
  std::map<NodeId, NodeId> canon;
  auto discover_chain = [&](std::optional<NodeId> id) {
    std::set<NodeId> seen;
    while (id && !seen.count(*id)) {
      seen.insert(*id);
      canon.try_emplace(*id, static_cast<NodeId>(canon.size()));
      auto it = st.nodes.find(*id);
      if (it == st.nodes.end()) break;
      id = it->second.next;
    }
  };
  discover_chain(st.head);
  for (const ProcessState& p : s.procs)
    for (const auto& [name, lv] : p.locals)
      if (const auto* nr = std::get_if<NodeRef>(&lv)) discover_chain(nr->id);
  return canon;
}

void put_proc(std::string& out, const ProcessState& p, const std::map<NodeId, NodeId>* canon) {
  auto rename = [&](const std::optional<NodeId>& id) -> std::optional<NodeId> {
    if (!id || !canon) return id;
    auto it = canon->find(*id);
    return it == canon->end() ? id : std::make_optional(it->second);
  };
  put_u32(out, static_cast<std::uint32_t>(p.pc));
  put_u32(out, static_cast<std::uint32_t>(p.op_index));
  out.push_back(static_cast<char>(p.phase));
  out.push_back(static_cast<char>(p.op));
  put_value(out, p.arg.value_or(Value::null()));
  out.push_back(p.result ? 'r' : '-');
  if (p.result) put_value(out, *p.result);
  out.push_back(p.flag ? 'F' : 'f');
  out.push_back(p.set_ind ? 'S' : 's');
  put_u32(out, static_cast<std::uint32_t>(p.locals.size()));
  for (const auto& [name, lv] : p.locals) {
    out += name;
    out.push_back('=');
    switch (lv.index()) {
      case 0: out.push_back('n'); break;
      case 1:
        out.push_back('v');
        put_value(out, std::get<Value>(lv));
        break;
      case 2:
        out.push_back('u');
        put_u32(out, std::get<std::uint32_t>(lv));
        break;
      case 3:
        out.push_back('p');
        put_opt_id(out, rename(std::get<NodeRef>(lv).id));
        break;
    }
    out.push_back(';');
  }
}

}  // namespace

std::string canonical_key(const SystemState& s) {
  std::string out;
  if (!is_stack_state(s)) {
    const QueueState& q = queue_of(s);
    out.push_back('Q');
    put_u32(out, q.last);
    put_u32(out, q.capacity());
    for (const Value& v : q.q) put_value(out, v);
    for (const ProcessState& p : s.procs) put_proc(out, p, nullptr);
    return out;
  }
  const NodeStore& st = stack_of(s);
  if (st.mode == AllocMode::reuse) {
    out.push_back('S');
    put_opt_id(out, st.head);
    put_u32(out, static_cast<std::uint32_t>(st.nodes.size()));
    for (const auto& [id, node] : st.nodes) {
      put_u32(out, id);
      put_value(out, node.val);
      put_opt_id(out, node.next);
    }
    put_u32(out, static_cast<std::uint32_t>(st.freelist.size()));
    for (NodeId id : st.freelist) put_u32(out, id);
    put_u32(out, st.next_id);
    for (const ProcessState& p : s.procs) put_proc(out, p, nullptr);
    return out;
  }
  // fresh-ids: node identity is symmetric, so hash modulo renaming and drop
  // the allocation counter; unreferenced nodes are invisible forever.
  std::map<NodeId, NodeId> canon = canonical_renaming(s);
  out.push_back('s');
  if (st.head) {
    out.push_back('#');
    put_u32(out, canon.at(*st.head));
  } else {
    out.push_back('0');
  }
  std::map<NodeId, std::pair<Value, std::optional<NodeId>>> renamed;
  for (const auto& [id, cid] : canon) {
    const Node& node = st.nodes.at(id);
    std::optional<NodeId> next;
    if (node.next) {
      auto it = canon.find(*node.next);
      next = it == canon.end() ? std::nullopt : std::make_optional(it->second);
    }
    renamed[cid] = {node.val, next};
  }
  put_u32(out, static_cast<std::uint32_t>(renamed.size()));
  for (const auto& [cid, vn] : renamed) {
    put_u32(out, cid);
    put_value(out, vn.first);
    put_opt_id(out, vn.second);
  }
  for (const ProcessState& p : s.procs) put_proc(out, p, &canon);
  return out;
}

}  // namespace rglin
