#include "rglin/render.hpp"

#include <sstream>

#include "rglin/hwqueue.hpp"
#include "rglin/treiber.hpp"

namespace rglin {

std::string render_values(const std::vector<Value>& vs) {
  std::string out = "[";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out += ",";
    out += vs[i].is_null() ? "-" : vs[i].str();
  }
  return out + "]";
}

std::string render_queue_array(const QueueState& s) { return render_values(s.q); }

std::string render_shared(const SystemState& s) {
  if (is_stack_state(s)) {
    auto list = treiber::try_abstraction(stack_of(s));
    return list ? render_values(*list) : "<corrupt>";
  }
  return render_queue_array(queue_of(s));
}

namespace {

std::string op_display(const ProcessState& p) {
  std::string s = to_string(p.op);
  if (p.arg) s += "(" + p.arg->str() + ")";
  return s;
}

}  // namespace

std::string narrative_line(const Trace& t, std::size_t i) {
  const Pid pid = t.pid(i);
  const std::string& label = t.label(i);
  const ProcessState& post = t.post(i).procs[pid];
  const ProcessState& pre = t.pre(i).procs[pid];
  if (label == "deq/swap") {
    std::uint32_t slot = post.nat_local("index").value_or(0);
    Value x = post.value_local("x").value_or(Value::null());
    if (!x.is_null())
      return "deq (checks slot " + std::to_string(slot) + " - returns " + x.str() + ")";
    return "deq (checks slot " + std::to_string(slot) + ")";
  }
  if (label == "enq/write") {
    std::uint32_t slot = pre.nat_local("index").value_or(0);
    return op_display(post) + " (inserts into slot " + std::to_string(slot) + ")";
  }
  if (label == "enq/reserve") {
    std::uint32_t slot = post.nat_local("index").value_or(0);
    return op_display(post) + " (reserves slot " + std::to_string(slot) + ")";
  }
  if (label == "enq/full-halt") return op_display(post) + " (array full, stops)";
  if (label == "deq/read-last")
    return "deq (reads last = " + std::to_string(*post.nat_local("range")) + ")";
  if (label == "pop/return" || label == "deq/return-test") {
    if (post.phase == Phase::returned && post.result)
      return to_string(post.op) + " returns " + post.result->str();
  }
  if (label == "pop/null-test" && post.phase == Phase::returned)
    return "pop returns null (empty stack)";
  if (label == "pop/cas" || label == "push/cas") {
    bool ok = post.nat_local("cas") == std::uint32_t{1};
    return op_display(post) + (ok ? " (CAS succeeds)" : " (CAS fails, retries)");
  }
  if (label == "pop/write-head") return "pop (sets head unconditionally)";
  return "";
}

std::string render_step_line(const Trace& t, std::size_t i) {
  std::ostringstream os;
  os << i << ". P" << t.pid(i) << " " << t.label(i) << "  " << render_shared(t.pre(i)) << " -> "
     << render_shared(t.post(i));
  std::string n = narrative_line(t, i);
  if (!n.empty()) os << "   " << n;
  return os.str();
}

std::string render_op(const OpRecord& op) {
  std::string s = to_string(op.op);
  if (op_takes_arg(op.op)) {
    s += "(";
    if (op.arg) s += op.arg->str();
    s += ")";
  } else if (op.result) {
    s += "->" + op.result->str();
  } else if (op_returns_value(op.op)) {
    s += "->?";
  }
  return s;
}

std::string render_witness(const LinWitness& w) {
  std::string out;
  for (std::size_t i = 0; i < w.order.size(); ++i) {
    if (i) out += ";";
    out += render_op(w.order[i]);
  }
  return out;
}

std::string render_history(const History& h) {
  std::string out;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    const Event& e = h.events[i];
    if (i) out += " ";
    if (e.kind == Event::Kind::invocation) {
      out += "inv:P" + std::to_string(e.pid) + ":" + to_string(e.op);
      if (e.arg) out += "(" + e.arg->str() + ")";
    } else {
      out += "res:P" + std::to_string(e.pid) + ":" + to_string(e.op);
      if (e.result) out += "->" + e.result->str();
    }
  }
  return out;
}

}  // namespace rglin
