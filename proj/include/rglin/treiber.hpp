#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rglin/program.hpp"
#include "rglin/state.hpp"

namespace rglin::treiber {

using AbstractStack = std::vector<Value>;

struct PopResult {
  Value x;  // null only when the observed stack was empty
  friend bool operator==(const PopResult&, const PopResult&) = default;
};

/// Head-chain corruption (a cycle), reachable only in reuse mode.
struct StoreCorruption : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Atomic-level push: prepend v. Rejects null.
AbstractStack push0(const AbstractStack& list, Value v);

/// Atomic-level pop: (tail, head); on the empty stack returns (list, null).
std::pair<AbstractStack, PopResult> pop0(const AbstractStack& list);

/// Values along the head chain. Throws StoreCorruption on a cycle.
AbstractStack abstraction(const NodeStore& ns);
std::optional<AbstractStack> try_abstraction(const NodeStore& ns);

/// Sigma-1 view of a state from one process's perspective.
struct StackSigma1 {
  AbstractStack list;
  bool flag = false;
};

/// pop-1 guarantee: (list' != list => list' = tl list /\ flag' /\ !flag)
/// /\ (list' = list => flag' = flag). Returns the first failing clause.
std::optional<std::string> guar_pop1_failing(const StackSigma1& pre, const StackSigma1& post);
bool guar_pop1(const StackSigma1& pre, const StackSigma1& post);

/// push-1 guarantee, with prepend of v instead of tail.
std::optional<std::string> guar_push1_failing(const StackSigma1& pre, const StackSigma1& post,
                                              Value v);
bool guar_push1(const StackSigma1& pre, const StackSigma1& post, Value v);

/// The CAS-retry push/pop over the node store, one source line per step,
/// CAS as a single step including its branch decision.
Program push_program(Value v);
Program pop_program();

/// pop variant whose final head write is unconditional; generates the
/// lost-update races the CAS exists to prevent.
Program unguarded_pop_program();

/// Builds a store whose head chain reads top-first from `list`.
NodeStore make_store(const AbstractStack& list, AllocMode mode);

/// Single-process state wrapping a Sigma-1 view (for relation-level tests).
SystemState make_sigma1_state(const AbstractStack& list, bool flag);

/// posvals(list): every value the abstraction held in the states between
/// the instance's invocation and response, both boundaries included.
/// Throws if the pid never invoked that instance or var is unknown.
std::set<AbstractStack> possible_values(const Trace& t, Pid pid, const std::string& var,
                                        std::size_t op_index = 0);

/// The head value observed at each step that set a process's flag (the
/// value a pop logically removed there). The guarantee's list clause does
/// not pin it, so reports carry it for inspection. Null for an empty list.
struct FlagStepReport {
  Pid pid;
  std::size_t step;
  Value head;
};
std::vector<FlagStepReport> flag_step_reports(const Trace& t);

}  // namespace rglin::treiber
