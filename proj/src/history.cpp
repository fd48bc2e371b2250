#include "rglin/history.hpp"

#include <algorithm>
#include <map>

#include "rglin/hwqueue.hpp"
#include "rglin/treiber.hpp"

namespace rglin {

std::vector<OpRecord> History::operations() const {
  std::vector<OpRecord> out;
  std::map<Pid, std::size_t> pending;  // pid -> index into out
  for (std::size_t pos = 0; pos < events.size(); ++pos) {
    const Event& e = events[pos];
    if (e.kind == Event::Kind::invocation) {
      if (pending.count(e.pid))
        throw std::invalid_argument("history: two pending invocations for one process");
      OpRecord rec;
      rec.pid = e.pid;
      rec.op_index = e.op_index;
      rec.op = e.op;
      rec.arg = e.arg;
      rec.inv_pos = pos;
      pending[e.pid] = out.size();
      out.push_back(rec);
    } else {
      auto it = pending.find(e.pid);
      if (it == pending.end())
        throw std::invalid_argument("history: response without matching invocation");
      OpRecord& rec = out[it->second];
      if (rec.op != e.op) throw std::invalid_argument("history: response op mismatch");
      rec.result = e.result;
      rec.res_pos = pos;
      pending.erase(it);
    }
  }
  return out;
}

History project_history(const Trace& t, const Model& m) {
  History h;
  h.spec = m.spec;
  h.alphabet = m.alphabet;
  const SystemState& init = t.init();
  if (m.spec == SpecKind::stack) {
    h.initial = treiber::abstraction(stack_of(init));
    auto fin = treiber::try_abstraction(stack_of(t.final_state()));
    if (fin) h.final_abstraction = *fin;  // corrupt store: no final state to match
  } else {
    h.initial = hwq::array_abstraction(queue_of(init));
    h.final_abstraction = hwq::array_abstraction(queue_of(t.final_state()));
  }
  for (Pid pid = 0; pid < init.procs.size(); ++pid) {
    const ProcessState& p = init.procs[pid];
    if (p.phase == Phase::invoked)
      h.events.push_back({Event::Kind::invocation, pid, p.op_index, p.op, p.arg, std::nullopt});
  }
  for (std::size_t i = 0; i < t.step_count(); ++i) {
    const Pid pid = t.pid(i);
    const ProcessState& a = t.pre(i).procs[pid];
    const ProcessState& b = t.post(i).procs[pid];
    if (b.phase == Phase::invoked && (a.phase != Phase::invoked || a.op_index != b.op_index))
      h.events.push_back({Event::Kind::invocation, pid, b.op_index, b.op, b.arg, std::nullopt});
    if (b.phase == Phase::returned && a.phase == Phase::invoked)
      h.events.push_back({Event::Kind::response, pid, b.op_index, b.op, std::nullopt, b.result});
  }
  return h;
}

namespace {

std::vector<std::optional<Value>> completion_results(OpKind op, const std::vector<Value>& alphabet) {
  std::vector<std::optional<Value>> out;
  if (!op_returns_value(op)) {
    out.push_back(std::nullopt);  // void response
    return out;
  }
  if (op == OpKind::pop) out.push_back(Value::null());  // pop may legally return null
  for (const Value& v : alphabet) out.push_back(v);
  return out;
}

}  // namespace

std::vector<History> completions(const History& h) {
  std::vector<OpRecord> ops = h.operations();
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (!ops[i].completed()) pending.push_back(i);

  std::vector<History> out;
  // one branch per choice vector: drop the invocation or append a response
  std::vector<std::size_t> choice(pending.size(), 0);
  for (;;) {
    History c = h;
    std::size_t appended = 0;
    bool ok = true;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      const OpRecord& rec = ops[pending[k]];
      auto results = completion_results(rec.op, h.alphabet);
      if (choice[k] == 0) {
        // drop: remove the invocation event
        auto it = std::find_if(c.events.begin(), c.events.end(), [&](const Event& e) {
          return e.kind == Event::Kind::invocation && e.pid == rec.pid &&
                 e.op_index == rec.op_index;
        });
        if (it == c.events.end()) ok = false;
        else c.events.erase(it);
      } else {
        c.events.push_back({Event::Kind::response, rec.pid, rec.op_index, rec.op, std::nullopt,
                            results.at(choice[k] - 1)});
        ++appended;
      }
    }
    (void)appended;
    if (ok) out.push_back(std::move(c));
    // advance the mixed-radix choice vector
    std::size_t k = 0;
    for (; k < pending.size(); ++k) {
      const OpRecord& rec = ops[pending[k]];
      std::size_t radix = 1 + completion_results(rec.op, h.alphabet).size();
      if (++choice[k] < radix) break;
      choice[k] = 0;
    }
    if (k == pending.size()) break;
    if (pending.empty()) break;
  }
  return out;
}

}  // namespace rglin
