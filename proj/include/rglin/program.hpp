#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rglin/state.hpp"

namespace rglin {

using Pid = std::uint32_t;

inline constexpr int kDonePc = -1;
inline constexpr int kHaltedPc = -2;

/// One atomic transition of a process program. The guard decides
/// enabledness; the effect returns the successor state (including the new
/// pc, which may encode a branch decision taken atomically with the step).
struct Transition {
  std::string label;
  std::function<bool(const SystemState&, Pid)> guard;  // empty = always enabled
  std::function<SystemState(const SystemState&, Pid)> effect;
};

/// A process program as an explicit transition system, one operation deep.
struct Program {
  OpKind op;
  std::optional<Value> arg;
  std::vector<std::vector<Transition>> at;  // transitions by pc
  int loop_head_pc = -1;  // head of the outer retry/scan loop, if any
};

enum class SpecKind { stack, queue };

/// Immutable world a scenario compiles to: the per-process operation
/// sequences, the initial state and the value alphabet.
struct Model {
  std::vector<std::vector<Program>> procs;
  std::vector<std::vector<Transition>> invokes;  // invoke steps for ops 1..
  SystemState initial;
  SpecKind spec = SpecKind::stack;
  std::vector<Value> alphabet;
};

/// Builds the invoke transitions and initial process states for a model
/// whose procs and shared initial state are already filled in.
void finalize_model(Model& m);

struct EnabledTransition {
  Pid pid;
  const Transition* transition;
};

/// All transitions whose guard holds at s, ordered by (pid, location).
/// Empty when every process has returned (or halted).
std::vector<EnabledTransition> enabled_transitions(const Model& m, const SystemState& s);

struct Step {
  SystemState pre;
  SystemState post;
  Pid pid;
  std::string label;
};

/// Applies one enabled transition; rejects disabled ones (checker bug).
/// Ghost variables (flag, setInd) are updated here by instrumentation,
/// not by the modeled code.
Step apply(const Model& m, const SystemState& s, Pid pid, const Transition& t);

struct StepInfo {
  Pid pid;
  std::string label;
};

/// A finite execution: chained states plus per-step actor and label.
/// states.size() == step_count() + 1 and states[i], states[i+1] are the
/// pre/post of step i, so chaining holds by construction.
struct Trace {
  std::vector<SystemState> states;
  std::vector<StepInfo> infos;
  bool truncated = false;
  std::string truncation_reason;

  std::size_t step_count() const { return infos.size(); }
  const SystemState& init() const { return states.front(); }
  const SystemState& final_state() const { return states.back(); }
  const SystemState& pre(std::size_t i) const { return states.at(i); }
  const SystemState& post(std::size_t i) const { return states.at(i + 1); }
  Pid pid(std::size_t i) const { return infos.at(i).pid; }
  const std::string& label(std::size_t i) const { return infos.at(i).label; }
  std::vector<Pid> schedule() const;

  void push_step(Step&& s);
};

Trace make_trace(const SystemState& init);

enum class RunKind { program, environment };

/// A maximal contiguous run of steps by pid (program) or by others
/// (environment), from pid's viewpoint. Indices are inclusive.
struct ProgramStepRun {
  Pid pid;
  std::size_t first;
  std::size_t last;
  RunKind kind;
};

/// Partitions the trace's step indices into maximal alternating
/// program/environment runs from pid's viewpoint.
std::vector<ProgramStepRun> runs_of(const Trace& t, Pid pid);

/// The lifetime of one operation instance inside a trace. Step indices are
/// inclusive; step_begin > step_end encodes an instance with no steps.
/// State indices bound the states in which the instance is active.
struct InstanceSpan {
  Pid pid;
  std::size_t op_index;
  OpKind op;
  std::optional<Value> arg;
  std::size_t step_begin, step_end;
  std::size_t state_begin, state_end;
  bool completed;
};

std::vector<InstanceSpan> instance_spans(const Trace& t, Pid pid);

/// Maximal contiguous groups of pid's own steps inside the span.
std::vector<std::pair<std::size_t, std::size_t>> instance_program_runs(
    const Trace& t, const InstanceSpan& span);

/// Maximal contiguous groups of other processes' steps inside the span.
std::vector<std::pair<std::size_t, std::size_t>> instance_environment_runs(
    const Trace& t, const InstanceSpan& span);

/// True when the step re-enters the outer loop head of the acting
/// process's current program (a full retry/scan round is starting).
bool is_spin_back_edge(const Model& m, const SystemState& pre, const SystemState& post, Pid pid);

}  // namespace rglin
