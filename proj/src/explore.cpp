#include "rglin/explore.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "rglin/hwqueue.hpp"
#include "rglin/rgcheck.hpp"
#include "rglin/treiber.hpp"

namespace rglin {

std::string to_string(Structure s) {
  switch (s) {
    case Structure::treiber: return "treiber";
    case Structure::treiber_unguarded: return "treiber-unguarded";
    case Structure::treiber_aba: return "treiber-aba";
    case Structure::hwq: return "hwq";
  }
  throw std::logic_error("unreachable Structure");
}

Structure structure_from_string(const std::string& s) {
  if (s == "treiber") return Structure::treiber;
  if (s == "treiber-unguarded") return Structure::treiber_unguarded;
  if (s == "treiber-aba") return Structure::treiber_aba;
  if (s == "hwq") return Structure::hwq;
  throw std::invalid_argument("unknown structure '" + s + "'");
}

AllocMode Scenario::effective_mode() const {
  if (mode) return *mode;
  return structure == Structure::treiber_aba ? AllocMode::reuse : AllocMode::fresh_ids;
}

std::vector<Value> Scenario::alphabet() const {
  std::set<Value> vals(initial.begin(), initial.end());
  for (const auto& ops : processes)
    for (const OpSpec& op : ops)
      if (op.arg) vals.insert(*op.arg);
  return {vals.begin(), vals.end()};
}

Model build_model(const Scenario& sc) {
  Model m;
  m.alphabet = sc.alphabet();
  const bool is_queue = sc.structure == Structure::hwq;
  m.spec = is_queue ? SpecKind::queue : SpecKind::stack;
  if (is_queue) {
    m.initial.shared = hwq::make_queue(sc.initial, sc.capacity);
  } else {
    m.initial.shared = treiber::make_store(sc.initial, sc.effective_mode());
  }
  for (const auto& ops : sc.processes) {
    std::vector<Program> progs;
    for (const OpSpec& op : ops) {
      switch (op.op) {
        case OpKind::push:
          if (is_queue) throw std::invalid_argument("push on a queue scenario");
          progs.push_back(treiber::push_program(*op.arg));
          break;
        case OpKind::pop:
          if (is_queue) throw std::invalid_argument("pop on a queue scenario");
          progs.push_back(sc.structure == Structure::treiber_unguarded
                              ? treiber::unguarded_pop_program()
                              : treiber::pop_program());
          break;
        case OpKind::enq:
          if (!is_queue) throw std::invalid_argument("enq on a stack scenario");
          progs.push_back(hwq::enq_program(*op.arg));
          break;
        case OpKind::deq:
          if (!is_queue) throw std::invalid_argument("deq on a stack scenario");
          progs.push_back(hwq::deq_program());
          break;
      }
    }
    m.procs.push_back(std::move(progs));
  }
  finalize_model(m);
  return m;
}

TraceCapExceeded::TraceCapExceeded(std::size_t cap_)
    : std::runtime_error("trace cap exceeded: " + std::to_string(cap_)), cap(cap_) {}

std::size_t default_trace_cap() {
  if (const char* env = std::getenv("RGLIN_TRACE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 200000;
}

namespace {

struct Explorer {
  const Model& model;
  const Bounds& bounds;
  std::size_t cap;
  const std::function<void(const Trace&, std::size_t)>& sink;
  std::size_t emitted = 0;

  Trace trace;
  std::vector<std::size_t> spin_counts;     // back edges taken, per process
  std::vector<std::string> path_keys;       // canonical keys along the path
  bool spin_suppressed = false;             // some process hit the spin bound
  bool detect_revisits = false;             // only programs with spin loops can cycle

  void emit(const char* reason) {
    if (emitted >= cap) throw TraceCapExceeded(cap);
    if (reason[0] != '\0') {
      trace.truncated = true;
      trace.truncation_reason = reason;
    } else if (spin_suppressed && anyone_pending()) {
      trace.truncated = true;
      trace.truncation_reason = "spin-bound";
    }
    sink(trace, emitted);
    trace.truncated = false;
    trace.truncation_reason.clear();
    ++emitted;
  }

  bool anyone_pending() const {
    for (const ProcessState& p : trace.final_state().procs)
      if (p.phase == Phase::invoked) return true;
    return false;
  }

  void dfs() {
    const SystemState s = trace.final_state();  // copy: push_step may reallocate
    if (trace.step_count() >= bounds.max_steps) {
      emit("max-steps");
      return;
    }
    std::vector<EnabledTransition> enabled = enabled_transitions(model, s);
    // spin policy: a process may not begin scan round spin_rounds + 1,
    // i.e. it may take at most spin_rounds - 1 outer-loop back edges
    std::vector<EnabledTransition> usable;
    bool suppressed_here = false;
    for (const EnabledTransition& et : enabled) {
      if (spin_counts[et.pid] + 1 >= bounds.spin_rounds) {
        // only the back edge is frozen; anything else would not spin
        SystemState probe = et.transition->effect(s, et.pid);
        if (is_spin_back_edge(model, s, probe, et.pid)) {
          suppressed_here = true;
          continue;
        }
        usable.push_back(et);
      } else {
        usable.push_back(et);
      }
    }
    if (suppressed_here) spin_suppressed = true;
    if (usable.empty()) {
      emit("");
      return;
    }
    for (const EnabledTransition& et : usable) {
      Step step = apply(model, s, et.pid, *et.transition);
      bool back_edge = is_spin_back_edge(model, step.pre, step.post, et.pid);
      bool revisit = false;
      if (detect_revisits) {
        std::string key = canonical_key(step.post);
        revisit = std::find(path_keys.begin(), path_keys.end(), key) != path_keys.end();
        path_keys.push_back(std::move(key));
      }
      trace.push_step(std::move(step));
      if (back_edge) ++spin_counts[et.pid];
      bool saved_suppressed = spin_suppressed;
      if (revisit) {
        emit("state-revisit");
      } else {
        dfs();
      }
      spin_suppressed = saved_suppressed;
      if (detect_revisits) path_keys.pop_back();
      if (back_edge) --spin_counts[et.pid];
      trace.states.pop_back();
      trace.infos.pop_back();
    }
  }
};

}  // namespace

void explore_each(const Scenario& sc, const std::function<void(const Trace&, std::size_t)>& sink,
                  std::size_t trace_cap) {
  if (sc.bounds.max_steps == 0 || sc.bounds.spin_rounds == 0)
    throw std::invalid_argument("explore: bounds must be positive");
  Model model = build_model(sc);
  Explorer ex{model, sc.bounds, trace_cap, sink, 0, {}, {}, {}, false, false};
  ex.trace = make_trace(model.initial);
  ex.spin_counts.assign(model.procs.size(), 0);
  // a state cycle needs a step that changes nothing, which only the deq's
  // empty rescan can do; every stack retry follows a commit that moved a
  // monotone ghost, so stack paths cannot revisit a state
  for (const auto& progs : model.procs)
    for (const Program& prog : progs)
      if (prog.loop_head_pc >= 0) ex.detect_revisits = true;
  if (ex.detect_revisits) ex.path_keys.push_back(canonical_key(model.initial));
  ex.dfs();
}

std::vector<Trace> explore(const Scenario& sc, std::size_t trace_cap) {
  std::vector<Trace> out;
  explore_each(sc, [&](const Trace& t, std::size_t) { out.push_back(t); }, trace_cap);
  return out;
}

Trace replay(const Scenario& sc, const Schedule& schedule) {
  Model model = build_model(sc);
  Trace t = make_trace(model.initial);
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const Pid pid = schedule[k];
    std::vector<EnabledTransition> enabled = enabled_transitions(model, t.final_state());
    const Transition* chosen = nullptr;
    for (const EnabledTransition& et : enabled)
      if (et.pid == pid) chosen = et.transition;
    if (!chosen)
      throw std::invalid_argument("schedule: disabled choice at position " + std::to_string(k) +
                                  " (process " + std::to_string(pid) + ")");
    t.push_step(apply(model, t.final_state(), pid, *chosen));
  }
  return t;
}

namespace {

// only these steps touch the node store; anything else cannot move the
// abstraction, so the scan below may skip stretches without them
bool mutates_store(const Trace& t, std::size_t i) {
  const std::string& label = t.label(i);
  if (label == "push/alloc" || label == "push/set-next" || label == "pop/write-head") return true;
  if (label == "push/cas" || label == "pop/cas")
    return t.post(i).procs[t.pid(i)].nat_local("cas") == std::uint32_t{1};
  return false;
}

}  // namespace

std::optional<std::size_t> find_aba_cas(const Trace& t) {
  if (t.states.empty() || !is_stack_state(t.init())) return std::nullopt;
  auto abstraction_at = [&](std::size_t state_idx) {
    return treiber::try_abstraction(stack_of(t.states[state_idx]));
  };
  for (std::size_t i = 0; i < t.step_count(); ++i) {
    if (t.label(i) != "pop/cas" && t.label(i) != "push/cas") continue;
    const Pid pid = t.pid(i);
    if (t.post(i).procs[pid].nat_local("cas") != std::uint32_t{1}) continue;
    // most recent head read by this process, same operation instance
    std::optional<std::size_t> read_step;
    for (std::size_t j = i; j-- > 0;) {
      if (t.pid(j) != pid) continue;
      const ProcessState& a = t.pre(j).procs[pid];
      const ProcessState& b = t.pre(i).procs[pid];
      if (a.op_index != b.op_index) break;
      if (t.label(j) == "pop/read-head" || t.label(j) == "push/read-head") {
        read_step = j;
        break;
      }
    }
    if (!read_step) continue;
    bool any_mutation = false;
    for (std::size_t j = *read_step + 1; j < i && !any_mutation; ++j)
      any_mutation = mutates_store(t, j);
    if (!any_mutation) continue;
    auto seen = abstraction_at(*read_step + 1);  // what the read observed
    for (std::size_t s = *read_step + 1; s <= i; ++s) {
      if (abstraction_at(s) != seen) return i;  // changed underneath a succeeding CAS
    }
  }
  return std::nullopt;
}

std::optional<Trace> aba_search(const Scenario& sc, std::size_t trace_cap) {
  std::optional<Trace> found;
  try {
    explore_each(sc, [&](const Trace& t, std::size_t) {
      if (!found && find_aba_cas(t)) {
        found = t;
        throw TraceCapExceeded(0);  // stop the enumeration early
      }
    }, trace_cap);
  } catch (const TraceCapExceeded&) {
    if (!found) throw;
  }
  return found;
}

std::vector<Trace> aba_find_all(const Scenario& sc, std::size_t limit, std::size_t trace_cap) {
  std::vector<Trace> out;
  bool hit_limit = false;
  try {
    explore_each(sc, [&](const Trace& t, std::size_t) {
      if (find_aba_cas(t)) {
        out.push_back(t);
        if (out.size() >= limit) {
          hit_limit = true;
          throw TraceCapExceeded(0);
        }
      }
    }, trace_cap);
  } catch (const TraceCapExceeded&) {
    if (!hit_limit) throw;
  }
  return out;
}

std::vector<const RelationSpec*> default_guarantees(Structure s) {
  if (s == Structure::hwq)
    return {&relation_by_name("guar-enq1"), &relation_by_name("guar-deq1")};
  return {&relation_by_name("guar-push1"), &relation_by_name("guar-pop1")};
}

std::vector<const RelationSpec*> default_relies(Structure s) {
  if (s == Structure::hwq) return {&relation_by_name("rely1")};
  return {&relation_by_name("true")};
}

namespace {

TraceRow evaluate_trace(const Trace& t, std::size_t id, const Model& model,
                        const std::vector<const RelationSpec*>& guarantees,
                        const std::vector<const RelationSpec*>& relies) {
  TraceRow row;
  row.id = id;
  row.schedule = t.schedule();
  row.truncated = t.truncated;
  row.linearisable = is_linearisable(project_history(t, model)).linearisable;
  const std::size_t nprocs = t.init().procs.size();
  for (const RelationSpec* g : guarantees) {
    for (Pid pid = 0; pid < nprocs; ++pid) {
      bool applicable = false;
      for (const InstanceSpan& span : instance_spans(t, pid))
        applicable = applicable || g->applicable(span.op);
      if (!applicable) continue;
      Verdict v = check_guarantee(t, pid, *g, id);
      RelOutcome o{g->name, pid, v.holds, "", false, 0, 0};
      if (!v.holds) {
        o.clause = v.witness->clause;
        o.is_run = v.witness->is_run;
        o.first = v.witness->first;
        o.last = v.witness->last;
        row.all_guarantees_hold = false;
      }
      row.guarantees.push_back(std::move(o));
    }
  }
  for (const RelationSpec* r : relies) {
    for (Pid pid = 0; pid < nprocs; ++pid) {
      bool applicable = false;
      for (const InstanceSpan& span : instance_spans(t, pid))
        applicable = applicable || r->applicable(span.op);
      if (!applicable) continue;
      Verdict v = check_rely(t, pid, *r, id);
      RelOutcome o{r->name, pid, v.holds, "", false, 0, 0};
      if (!v.holds) {
        o.clause = v.witness->clause;
        o.is_run = v.witness->is_run;
        o.first = v.witness->first;
        o.last = v.witness->last;
        row.all_relies_hold = false;
      }
      row.relies.push_back(std::move(o));
    }
  }
  return row;
}

void tally(CorrelationReport& report, TraceRow&& row, bool aba) {
  if (row.linearisable) {
    row.all_guarantees_hold ? ++report.lin_guar_hold : ++report.lin_guar_viol;
  } else {
    row.all_guarantees_hold ? ++report.nonlin_guar_hold : ++report.nonlin_guar_viol;
    if (row.all_guarantees_hold) report.conjecture_counterexamples.push_back(row.id);
  }
  if (!row.all_relies_hold) ++report.rely_violated_traces;
  if (row.truncated) ++report.truncated_traces;
  if (aba) ++report.aba_traces;
  report.rows.push_back(std::move(row));
}

}  // namespace

CorrelationReport correlate(const Scenario& sc,
                            const std::vector<const RelationSpec*>& guarantees,
                            const std::vector<const RelationSpec*>& relies,
                            std::size_t trace_cap) {
  Model model = build_model(sc);
  CorrelationReport report;
  const bool track_aba = sc.structure == Structure::treiber_aba;
  explore_each(
      sc,
      [&](const Trace& t, std::size_t id) {
        TraceRow row = evaluate_trace(t, id, model, guarantees, relies);
        tally(report, std::move(row), track_aba && find_aba_cas(t).has_value());
      },
      trace_cap);
  return report;
}

CorrelationReport correlate_traces(const Scenario& sc, const std::vector<Trace>& traces,
                                   const std::vector<const RelationSpec*>& guarantees,
                                   const std::vector<const RelationSpec*>& relies) {
  Model model = build_model(sc);
  CorrelationReport report;
  const bool track_aba = sc.structure == Structure::treiber_aba;
  for (std::size_t id = 0; id < traces.size(); ++id) {
    TraceRow row = evaluate_trace(traces[id], id, model, guarantees, relies);
    tally(report, std::move(row), track_aba && find_aba_cas(traces[id]).has_value());
  }
  return report;
}

}  // namespace rglin
