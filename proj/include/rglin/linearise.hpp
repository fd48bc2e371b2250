#pragma once

#include <optional>
#include <vector>

#include "rglin/history.hpp"

namespace rglin {

/// A sequential order the history linearises to: the operations in
/// linearisation order and the abstract states of the replay (states[0] is
/// the initial state, states.back() the final one).
struct LinWitness {
  std::vector<OpRecord> order;
  std::vector<std::vector<Value>> states;
};

struct LinResult {
  bool linearisable = false;
  std::optional<LinWitness> witness;
};

/// Brute-force decision: some completion admits a permutation of its
/// operations that respects real-time order, replays correctly through the
/// sequential spec, and (when the history carries one) ends at the final
/// abstraction. Enumeration is lexicographic by (pid, invocation index)
/// with real-time pruning, memoised on (consumed multiset, state).
LinResult is_linearisable(const History& h);

/// Last state of the witness replay (the initial state for an empty witness).
std::vector<Value> final_state_of(const LinWitness& w);

/// Re-replays the witness and re-checks real-time order against h;
/// used to assert soundness of every positive answer.
bool validate_witness(const History& h, const LinWitness& w);

/// Number of complete real-time-respecting orders the enumerator would
/// consider with result pruning and memoisation disabled (k! for k fully
/// overlapping operations).
std::size_t count_order_candidates(const History& h);

}  // namespace rglin
