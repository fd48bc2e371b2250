#include "rglin/treiber.hpp"

#include <set>

namespace rglin::treiber {

AbstractStack push0(const AbstractStack& list, Value v) {
  if (v.is_null()) throw std::invalid_argument("push0: null value");
  AbstractStack out;
  out.reserve(list.size() + 1);
  out.push_back(v);
  out.insert(out.end(), list.begin(), list.end());
  return out;
}

std::pair<AbstractStack, PopResult> pop0(const AbstractStack& list) {
  if (list.empty()) return {list, PopResult{Value::null()}};
  return {AbstractStack(list.begin() + 1, list.end()), PopResult{list.front()}};
}

AbstractStack abstraction(const NodeStore& ns) {
  AbstractStack out;
  std::set<NodeId> seen;
  std::optional<NodeId> id = ns.head;
  while (id) {
    if (seen.count(*id))
      throw StoreCorruption("abstraction: cycle through node " + std::to_string(*id));
    seen.insert(*id);
    const Node& n = ns.nodes.at(*id);
    out.push_back(n.val);
    id = n.next;
  }
  return out;
}

std::optional<AbstractStack> try_abstraction(const NodeStore& ns) {
  try {
    return abstraction(ns);
  } catch (const StoreCorruption&) {
    return std::nullopt;
  }
}

namespace {

bool is_tail_of(const AbstractStack& post, const AbstractStack& pre) {
  if (pre.empty()) return false;
  return std::equal(post.begin(), post.end(), pre.begin() + 1, pre.end());
}

}  // namespace

std::optional<std::string> guar_pop1_failing(const StackSigma1& pre, const StackSigma1& post) {
  if (pre.list != post.list) {
    if (!is_tail_of(post.list, pre.list)) return "list' = tl list";
    if (!(post.flag && !pre.flag)) return "flag' = true and flag = false on change";
  } else {
    if (post.flag != pre.flag) return "flag' = flag on stutter";
  }
  return std::nullopt;
}

bool guar_pop1(const StackSigma1& pre, const StackSigma1& post) {
  return !guar_pop1_failing(pre, post).has_value();
}

std::optional<std::string> guar_push1_failing(const StackSigma1& pre, const StackSigma1& post,
                                              Value v) {
  if (pre.list != post.list) {
    if (post.list != push0(pre.list, v)) return "list' = [v] ^ list";
    if (!(post.flag && !pre.flag)) return "flag' = true and flag = false on change";
  } else {
    if (post.flag != pre.flag) return "flag' = flag on stutter";
  }
  return std::nullopt;
}

bool guar_push1(const StackSigma1& pre, const StackSigma1& post, Value v) {
  return !guar_push1_failing(pre, post, v).has_value();
}

namespace {

constexpr int kPushAlloc = 0, kPushRead = 1, kPushSetNext = 2, kPushCas = 3;
constexpr int kPopRead = 0, kPopNullTest = 1, kPopReadNext = 2, kPopReadVal = 3, kPopCas = 4,
              kPopReturn = 5;

SystemState with_proc(const SystemState& s, Pid pid,
                      const std::function<void(SystemState&, ProcessState&)>& f) {
  SystemState r = s;
  f(r, r.procs[pid]);
  return r;
}

}  // namespace

Program push_program(Value v) {
  if (v.is_null()) throw std::invalid_argument("push: null value");
  Program p{OpKind::push, v, {}, -1};
  p.at.resize(4);
  p.at[kPushAlloc].push_back(
      {"push/alloc", nullptr, [v](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           NodeId id = stack_of(r).allocate(v);
           me.locals["n"] = NodeRef{id};
           me.pc = kPushRead;
         });
       }});
  p.at[kPushRead].push_back(
      {"push/read-head", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           me.locals["x"] = NodeRef{stack_of(r).head};
           me.pc = kPushSetNext;
         });
       }});
  p.at[kPushSetNext].push_back(
      {"push/set-next", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           NodeRef n = *me.node_local("n");
           NodeRef x = *me.node_local("x");
           stack_of(r).nodes.at(*n.id).next = x.id;
           me.pc = kPushCas;
         });
       }});
  p.at[kPushCas].push_back(
      {"push/cas", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           NodeStore& st = stack_of(r);
           NodeRef n = *me.node_local("n");
           NodeRef x = *me.node_local("x");
           bool ok = st.head == x.id;
           me.locals["cas"] = std::uint32_t(ok);
           if (ok) {
             st.head = n.id;
             me.phase = Phase::returned;
             me.pc = kDonePc;
           } else {
             me.pc = kPushRead;
           }
         });
       }});
  return p;
}

namespace {

// pop's shared prefix: read head, null test, read next, read val.
void fill_pop_prefix(Program& p, int after_read_val) {
  p.at[kPopRead].push_back(
      {"pop/read-head", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           me.locals["x"] = NodeRef{stack_of(r).head};
           me.pc = kPopNullTest;
         });
       }});
  p.at[kPopNullTest].push_back(
      {"pop/null-test", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           (void)r;
           NodeRef x = *me.node_local("x");
           if (!x.id) {
             me.result = Value::null();
             me.phase = Phase::returned;
             me.pc = kDonePc;
           } else {
             me.pc = kPopReadNext;
           }
         });
       }});
  p.at[kPopReadNext].push_back(
      {"pop/read-next", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           NodeRef x = *me.node_local("x");
           me.locals["y"] = NodeRef{stack_of(r).nodes.at(*x.id).next};
           me.pc = kPopReadVal;
         });
       }});
  p.at[kPopReadVal].push_back(
      {"pop/read-val", nullptr, [after_read_val](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           NodeRef x = *me.node_local("x");
           me.locals["v"] = stack_of(r).nodes.at(*x.id).val;
           me.pc = after_read_val;
         });
       }});
  p.at[kPopReturn].push_back(
      {"pop/return", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           (void)r;
           me.result = *me.value_local("v");
           me.phase = Phase::returned;
           me.pc = kDonePc;
         });
       }});
}

}  // namespace

Program pop_program() {
  // the retry loop needs no spin bound: a CAS only fails after an
  // interfering commit, so retries are finite in any bounded scenario
  Program p{OpKind::pop, std::nullopt, {}, -1};
  p.at.resize(6);
  fill_pop_prefix(p, kPopCas);
  p.at[kPopCas].push_back(
      {"pop/cas", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           NodeStore& st = stack_of(r);
           NodeRef x = *me.node_local("x");
           NodeRef y = *me.node_local("y");
           bool ok = st.head == x.id;
           me.locals["cas"] = std::uint32_t(ok);
           if (ok) {
             st.head = y.id;
             st.release(*x.id);
             me.pc = kPopReturn;
           } else {
             me.pc = kPopRead;
           }
         });
       }});
  return p;
}

Program unguarded_pop_program() {
  Program p{OpKind::pop, std::nullopt, {}, -1};
  p.at.resize(6);
  fill_pop_prefix(p, kPopCas);
  // the faulty final write the CAS exists to prevent: unconditional
  p.at[kPopCas].push_back(
      {"pop/write-head", nullptr, [](const SystemState& s, Pid pid) {
         return with_proc(s, pid, [&](SystemState& r, ProcessState& me) {
           NodeStore& st = stack_of(r);
           NodeRef x = *me.node_local("x");
           NodeRef y = *me.node_local("y");
           st.head = y.id;
           st.release(*x.id);
           me.pc = kPopReturn;
         });
       }});
  return p;
}

NodeStore make_store(const AbstractStack& list, AllocMode mode) {
  NodeStore ns;
  ns.mode = mode;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (list[i].is_null()) throw std::invalid_argument("make_store: null element");
    std::optional<NodeId> next;
    if (i + 1 < list.size()) next = static_cast<NodeId>(i + 1);
    ns.nodes.emplace(static_cast<NodeId>(i), Node{list[i], next});
  }
  if (!list.empty()) ns.head = 0;
  ns.next_id = static_cast<NodeId>(list.size());
  return ns;
}

SystemState make_sigma1_state(const AbstractStack& list, bool flag) {
  SystemState s;
  s.shared = make_store(list, AllocMode::fresh_ids);
  ProcessState p;
  p.phase = Phase::invoked;
  p.op = OpKind::pop;
  p.flag = flag;
  s.procs.push_back(std::move(p));
  return s;
}

std::vector<FlagStepReport> flag_step_reports(const Trace& t) {
  std::vector<FlagStepReport> out;
  for (std::size_t i = 0; i < t.step_count(); ++i) {
    const Pid pid = t.pid(i);
    if (t.pre(i).procs[pid].flag || !t.post(i).procs[pid].flag) continue;
    auto list = try_abstraction(stack_of(t.pre(i)));
    Value head = list && !list->empty() ? list->front() : Value::null();
    out.push_back({pid, i, head});
  }
  return out;
}

std::set<AbstractStack> possible_values(const Trace& t, Pid pid, const std::string& var,
                                        std::size_t op_index) {
  if (var != "list")
    throw std::invalid_argument("possible_values: unsupported variable '" + var + "'");
  for (const InstanceSpan& span : instance_spans(t, pid)) {
    if (span.op_index != op_index) continue;
    std::set<AbstractStack> out;
    for (std::size_t i = span.state_begin; i <= span.state_end; ++i)
      out.insert(abstraction(stack_of(t.states[i])));
    return out;
  }
  throw std::invalid_argument("possible_values: process " + std::to_string(pid) +
                              " never invoked operation " + std::to_string(op_index));
}

}  // namespace rglin::treiber
