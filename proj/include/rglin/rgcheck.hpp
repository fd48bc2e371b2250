#pragma once

#include <span>
#include <vector>

#include "rglin/relations.hpp"

namespace rglin {

/// Evaluates g on every program step of pid and on the endpoints of every
/// maximal program-step run, per operation instance whose kind g applies
/// to. The first failure (chronological) becomes the witness. Throws when
/// pid is absent from the trace.
Verdict check_guarantee(const Trace& t, Pid pid, const RelationSpec& g, std::size_t trace_id = 0);

/// Symmetric to check_guarantee over the environment steps/runs observed
/// by pid during its instances, with pid as the relation's subject.
Verdict check_rely(const Trace& t, Pid pid, const RelationSpec& r, std::size_t trace_id = 0);

/// A chain of states a relation should compose over, with the subject
/// whose ghost context the relation reads.
struct StateChain {
  std::vector<SystemState> states;
  Pid subject = 0;
};

/// For every ordered triple (a, b, c) along one chain with g(a,b) and
/// g(b,c), checks g(a,c). Exhaustive over the supplied chains.
Verdict check_transitive(const RelationSpec& g, std::span<const StateChain> chains);

/// Convenience: chains are the per-run state sequences of every applicable
/// operation instance in the supplied traces.
Verdict check_transitive(const RelationSpec& g, std::span<const Trace> traces);

std::vector<StateChain> run_state_chains(const Trace& t, const RelationSpec& g);

/// "The guarantee of each must satisfy the rely of the other": for every
/// executed step whose actor satisfies g, every other process with an
/// active instance r applies to must find its rely satisfied (evaluated
/// with that process's ghost context).
Verdict check_compatibility(const RelationSpec& g_of_p, const RelationSpec& r_of_q,
                            std::span<const Trace> traces);

}  // namespace rglin
