#include "rglin/program.hpp"

#include <algorithm>

#include "rglin/treiber.hpp"

namespace rglin {

void Trace::push_step(Step&& s) {
  states.push_back(std::move(s.post));
  infos.push_back({s.pid, std::move(s.label)});
}

std::vector<Pid> Trace::schedule() const {
  std::vector<Pid> out;
  out.reserve(infos.size());
  for (const StepInfo& i : infos) out.push_back(i.pid);
  return out;
}

Trace make_trace(const SystemState& init) {
  Trace t;
  t.states.push_back(init);
  return t;
}

namespace {

Transition make_invoke_transition(const Program& prog, std::size_t next_index) {
  std::string label = "invoke " + to_string(OpSpec{prog.op, prog.arg});
  OpKind op = prog.op;
  std::optional<Value> arg = prog.arg;
  return Transition{
      label, nullptr,
      [op, arg, next_index](const SystemState& s, Pid pid) {
        SystemState r = s;
        ProcessState& me = r.procs[pid];
        me.op_index = next_index;
        me.phase = Phase::invoked;
        me.op = op;
        me.arg = arg;
        me.result.reset();
        me.locals.clear();
        me.flag = false;
        me.set_ind = false;
        me.pc = 0;
        return r;
      }};
}

}  // namespace

void finalize_model(Model& m) {
  m.invokes.clear();
  m.invokes.resize(m.procs.size());
  m.initial.procs.resize(m.procs.size());
  for (std::size_t pid = 0; pid < m.procs.size(); ++pid) {
    const auto& ops = m.procs[pid];
    ProcessState& p = m.initial.procs[pid];
    if (ops.empty()) {
      p.phase = Phase::idle;
      p.pc = kDonePc;
    } else {
      p.phase = Phase::invoked;
      p.op = ops[0].op;
      p.arg = ops[0].arg;
      p.op_index = 0;
      p.pc = 0;
    }
    m.invokes[pid].reserve(ops.size());
    for (std::size_t k = 0; k < ops.size(); ++k)
      m.invokes[pid].push_back(make_invoke_transition(ops[k], k));
  }
}

std::vector<EnabledTransition> enabled_transitions(const Model& m, const SystemState& s) {
  std::vector<EnabledTransition> out;
  for (Pid pid = 0; pid < s.procs.size(); ++pid) {
    const ProcessState& p = s.procs[pid];
    if (p.phase == Phase::invoked) {
      if (p.pc < 0) continue;  // halted
      const Program& prog = m.procs.at(pid).at(p.op_index);
      const Transition* enabled = nullptr;
      for (const Transition& t : prog.at.at(static_cast<std::size_t>(p.pc))) {
        if (t.guard && !t.guard(s, pid)) continue;
        if (enabled)
          throw std::logic_error("enabled_transitions: nondeterministic location in " + t.label);
        enabled = &t;
      }
      if (enabled) out.push_back({pid, enabled});
    } else if (p.phase == Phase::returned && p.op_index + 1 < m.procs.at(pid).size()) {
      out.push_back({pid, &m.invokes.at(pid).at(p.op_index + 1)});
    }
  }
  return out;  // built in increasing pid order, one location per pid
}

namespace {

// Ghost updates are computed here by instrumentation, not by the modeled
// code: the stack flag flips on any step whose abstraction changes, the
// queue flag on a successful swap or a slot write, setInd on the reserve.
void instrument_ghosts(const SystemState& pre, SystemState& post, Pid pid,
                       const std::string& label) {
  ProcessState& me = post.procs[pid];
  if (is_stack_state(post)) {
    auto a = treiber::try_abstraction(stack_of(pre));
    auto b = treiber::try_abstraction(stack_of(post));
    if (a != b) me.flag = true;
    return;
  }
  if (label == "enq/reserve") me.set_ind = true;
  if (label == "enq/write") me.flag = true;
  if (label == "deq/swap") {
    auto x = me.value_local("x");
    if (x && !x->is_null()) me.flag = true;
  }
}

}  // namespace

Step apply(const Model& m, const SystemState& s, Pid pid, const Transition& t) {
  (void)m;
  if (pid >= s.procs.size()) throw std::logic_error("apply: no such process");
  if (t.guard && !t.guard(s, pid))
    throw std::logic_error("apply: transition '" + t.label + "' not enabled for process " +
                           std::to_string(pid));
  SystemState post = t.effect(s, pid);
  instrument_ghosts(s, post, pid, t.label);
  return Step{s, std::move(post), pid, t.label};
}

std::vector<ProgramStepRun> runs_of(const Trace& t, Pid pid) {
  std::vector<ProgramStepRun> out;
  for (std::size_t i = 0; i < t.step_count(); ++i) {
    RunKind kind = t.pid(i) == pid ? RunKind::program : RunKind::environment;
    if (!out.empty() && out.back().kind == kind && out.back().last + 1 == i) {
      out.back().last = i;
    } else {
      out.push_back({pid, i, i, kind});
    }
  }
  return out;
}

std::vector<InstanceSpan> instance_spans(const Trace& t, Pid pid) {
  if (t.states.empty() || pid >= t.init().procs.size())
    throw std::invalid_argument("instance_spans: process " + std::to_string(pid) +
                                " absent from trace");
  std::vector<InstanceSpan> out;
  const std::size_t nstates = t.states.size();
  std::size_t i = 0;
  while (i < nstates) {
    const ProcessState& p = t.states[i].procs[pid];
    if (p.phase != Phase::invoked) {
      ++i;
      continue;
    }
    InstanceSpan span;
    span.pid = pid;
    span.op_index = p.op_index;
    span.op = p.op;
    span.arg = p.arg;
    span.state_begin = i;
    std::size_t j = i;
    while (j + 1 < nstates) {
      const ProcessState& q = t.states[j + 1].procs[pid];
      if (q.phase != Phase::invoked || q.op_index != span.op_index) break;
      ++j;
    }
    span.state_end = j;
    span.completed = j + 1 < nstates && t.states[j + 1].procs[pid].phase == Phase::returned &&
                     t.states[j + 1].procs[pid].op_index == span.op_index;
    if (span.completed) span.state_end = j + 1;
    // steps whose pre-state lies in the active window
    span.step_begin = span.state_begin;
    std::size_t last_active_pre = span.completed ? span.state_end - 1 : span.state_end;
    if (t.step_count() == 0 || span.step_begin >= t.step_count()) {
      span.step_begin = 1;  // empty range
      span.step_end = 0;
    } else {
      span.step_end = std::min(last_active_pre, t.step_count() - 1);
    }
    out.push_back(span);
    i = span.state_end + 1;
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> instance_program_runs(const Trace& t,
                                                                       const InstanceSpan& span) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (span.step_begin > span.step_end) return out;
  for (std::size_t i = span.step_begin; i <= span.step_end && i < t.step_count(); ++i) {
    if (t.pid(i) != span.pid) continue;
    if (!out.empty() && out.back().second + 1 == i) {
      out.back().second = i;
    } else {
      out.emplace_back(i, i);
    }
  }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> instance_environment_runs(
    const Trace& t, const InstanceSpan& span) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (span.step_begin > span.step_end) return out;
  for (std::size_t i = span.step_begin; i <= span.step_end && i < t.step_count(); ++i) {
    if (t.pid(i) == span.pid) continue;
    if (!out.empty() && out.back().second + 1 == i) {
      out.back().second = i;
    } else {
      out.emplace_back(i, i);
    }
  }
  return out;
}

bool is_spin_back_edge(const Model& m, const SystemState& pre, const SystemState& post, Pid pid) {
  const ProcessState& a = pre.procs.at(pid);
  const ProcessState& b = post.procs.at(pid);
  if (a.phase != Phase::invoked || b.phase != Phase::invoked) return false;
  if (a.op_index != b.op_index) return false;
  const Program& prog = m.procs.at(pid).at(a.op_index);
  if (prog.loop_head_pc < 0) return false;
  return b.pc == prog.loop_head_pc && a.pc != prog.loop_head_pc;
}

}  // namespace rglin
