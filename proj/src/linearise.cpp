#include "rglin/linearise.hpp"

#include <algorithm>
#include <unordered_set>

#include "rglin/hwqueue.hpp"
#include "rglin/treiber.hpp"

namespace rglin {

namespace {

// Sequential-spec replay of one operation. Returns false when the op is not
// legal in `state` with the recorded result; on success updates the state.
bool replay_op(SpecKind spec, const OpRecord& op, std::vector<Value>& state) {
  switch (op.op) {
    case OpKind::push: {
      if (!op.arg) return false;
      state = treiber::push0(state, *op.arg);
      return true;
    }
    case OpKind::pop: {
      auto [rest, res] = treiber::pop0(state);
      if (op.result != std::optional<Value>(res.x)) return false;
      state = rest;
      return true;
    }
    case OpKind::enq: {
      if (!op.arg) return false;
      state = hwq::enq0(state, *op.arg);
      return true;
    }
    case OpKind::deq: {
      if (state.empty()) return false;  // deq has no empty return
      auto [rest, front] = hwq::deq0(state);
      if (op.result != std::optional<Value>(front)) return false;
      state = rest;
      return true;
    }
  }
  (void)spec;
  return false;
}

std::string state_key(std::size_t mask, const std::vector<Value>& state) {
  std::string key;
  key.reserve(8 + state.size());
  for (int i = 0; i < 8; ++i) key.push_back(static_cast<char>((mask >> (8 * i)) & 0xff));
  for (const Value& v : state) key.push_back(v.is_null() ? '\0' : v.symbol());
  return key;
}

struct Searcher {
  SpecKind spec;
  const std::vector<OpRecord>& ops;
  const std::vector<std::vector<std::size_t>>& preds;  // real-time predecessors
  const std::optional<std::vector<Value>>& final_state;
  std::unordered_set<std::string> failed;

  bool dfs(std::size_t mask, std::vector<Value>& state, LinWitness& w) {
    if (mask == (std::size_t(1) << ops.size()) - 1) {
      if (final_state && state != *final_state) return false;
      return true;
    }
    std::string key = state_key(mask, state);
    if (failed.count(key)) return false;
    for (std::size_t i = 0; i < ops.size(); ++i) {  // ops pre-sorted lexicographically
      if (mask & (std::size_t(1) << i)) continue;
      bool ready = true;
      for (std::size_t p : preds[i])
        if (!(mask & (std::size_t(1) << p))) {
          ready = false;
          break;
        }
      if (!ready) continue;
      std::vector<Value> next = state;
      if (!replay_op(spec, ops[i], next)) continue;
      w.order.push_back(ops[i]);
      w.states.push_back(next);
      if (dfs(mask | (std::size_t(1) << i), next, w)) return true;
      w.order.pop_back();
      w.states.pop_back();
    }
    failed.insert(std::move(key));
    return false;
  }
};

std::vector<std::vector<std::size_t>> realtime_predecessors(const std::vector<OpRecord>& ops) {
  std::vector<std::vector<std::size_t>> preds(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i)
    for (std::size_t j = 0; j < ops.size(); ++j)
      if (i != j && ops[j].completed() && *ops[j].res_pos < ops[i].inv_pos)
        preds[i].push_back(j);
  return preds;
}

std::vector<OpRecord> sorted_ops(const History& completion) {
  std::vector<OpRecord> ops = completion.operations();
  std::sort(ops.begin(), ops.end(), [](const OpRecord& a, const OpRecord& b) {
    return std::tie(a.pid, a.op_index) < std::tie(b.pid, b.op_index);
  });
  return ops;
}

}  // namespace

LinResult is_linearisable(const History& h) {
  for (const History& completion : completions(h)) {
    std::vector<OpRecord> ops = sorted_ops(completion);
    if (ops.size() > 62) throw std::invalid_argument("is_linearisable: history too large");
    auto preds = realtime_predecessors(ops);
    LinWitness w;
    w.states.push_back(h.initial);
    std::vector<Value> state = h.initial;
    Searcher searcher{h.spec, ops, preds, h.final_abstraction, {}};
    if (searcher.dfs(0, state, w)) {
      LinResult res{true, std::move(w)};
      if (!validate_witness(h, *res.witness))
        throw std::logic_error("is_linearisable: produced an unsound witness");
      return res;
    }
  }
  return LinResult{false, std::nullopt};
}

std::vector<Value> final_state_of(const LinWitness& w) { return w.states.back(); }

bool validate_witness(const History& h, const LinWitness& w) {
  // replay reproduces every recorded result and state
  if (w.states.empty() || w.states.front() != h.initial) return false;
  std::vector<Value> state = h.initial;
  for (std::size_t i = 0; i < w.order.size(); ++i) {
    if (!replay_op(h.spec, w.order[i], state)) return false;
    if (w.states.size() <= i + 1 || w.states[i + 1] != state) return false;
  }
  if (h.final_abstraction && state != *h.final_abstraction) return false;
  // real-time precedence of the original history is respected
  for (std::size_t i = 0; i < w.order.size(); ++i)
    for (std::size_t j = i + 1; j < w.order.size(); ++j) {
      const OpRecord& earlier = w.order[i];
      const OpRecord& later = w.order[j];
      if (later.completed() && later.res_pos < earlier.inv_pos) return false;
    }
  // every completed operation of the original history appears exactly once
  for (const OpRecord& op : h.operations()) {
    if (!op.completed()) continue;
    auto count = std::count_if(w.order.begin(), w.order.end(), [&](const OpRecord& o) {
      return o.pid == op.pid && o.op_index == op.op_index;
    });
    if (count != 1) return false;
  }
  return true;
}

namespace {

std::size_t count_orders(const std::vector<OpRecord>& ops,
                         const std::vector<std::vector<std::size_t>>& preds, std::size_t mask) {
  if (mask == (std::size_t(1) << ops.size()) - 1) return 1;
  std::size_t total = 0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (mask & (std::size_t(1) << i)) continue;
    bool ready = true;
    for (std::size_t p : preds[i])
      if (!(mask & (std::size_t(1) << p))) {
        ready = false;
        break;
      }
    if (ready) total += count_orders(ops, preds, mask | (std::size_t(1) << i));
  }
  return total;
}

}  // namespace

std::size_t count_order_candidates(const History& h) {
  std::vector<OpRecord> ops = sorted_ops(h);
  for (const OpRecord& op : ops)
    if (!op.completed())
      throw std::invalid_argument("count_order_candidates: history has pending operations");
  return count_orders(ops, realtime_predecessors(ops), 0);
}

}  // namespace rglin
