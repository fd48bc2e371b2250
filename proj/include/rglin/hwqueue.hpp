#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rglin/program.hpp"
#include "rglin/state.hpp"

namespace rglin::hwq {

using AbstractQueue = std::vector<Value>;

/// Atomic-level enqueue: append v. Rejects null.
AbstractQueue enq0(const AbstractQueue& list, Value v);

/// Atomic-level dequeue: (tail, head). Rejects the empty queue (the
/// concrete deq spins instead of returning empty).
std::pair<AbstractQueue, Value> deq0(const AbstractQueue& list);

/// No element of q and not last changed between the two states.
bool no_change(const QueueState& s, const QueueState& s2);

/// Index of the first non-null slot at or after x; n if none.
std::uint32_t first_nonnull(const std::vector<Value>& q, std::uint32_t x, std::uint32_t n);

/// Retrieve function: element at index first, then non-null elements before
/// it (from the first non-null slot), then non-null elements after it.
/// Null slots never appear in the result. Rejects index > capacity.
AbstractQueue retr_deq(const QueueState& s, std::uint32_t index);

/// 0 <= last <= n and every slot at position >= last is null.
bool inv_sigma1(const QueueState& s);

/// Sigma-1 view of a state from one process's perspective.
struct QueueSigma1 {
  QueueState s;
  std::optional<std::uint32_t> index;
  bool flag = false;
  bool set_ind = false;
};

/// The five deq-1 guarantee clauses; returns the first failing one.
std::optional<std::string> guar_deq1_failing(const QueueSigma1& pre, const QueueSigma1& post);
bool guar_deq1(const QueueSigma1& pre, const QueueSigma1& post);

/// The five enq-1 guarantee clauses; returns the first failing one.
std::optional<std::string> guar_enq1_failing(const QueueSigma1& pre, const QueueSigma1& post,
                                             Value v);
bool guar_enq1(const QueueSigma1& pre, const QueueSigma1& post, Value v);

/// rely-1 over one environment step, with the observing process's ghost
/// context: flag = false /\ index != nil ==> q'(index) = q(index).
bool rely1_step_holds(const QueueState& pre, const QueueState& post,
                      std::optional<std::uint32_t> index, bool flag);

/// Array enqueue: the index reservation is one atomic step; an enq that
/// finds the array full halts benignly without responding.
Program enq_program(Value v);

/// Scanning dequeue: swap is one atomic step; the scan restarts after a
/// full pass over the reserved slots.
Program deq_program();

QueueState make_queue(const AbstractQueue& initial, std::uint32_t capacity);

/// Non-null slots in array order: the order a future sequential observer
/// would dequeue them in.
AbstractQueue array_abstraction(const QueueState& s);

/// Single-process state wrapping a Sigma-1 view (for relation-level tests).
SystemState make_sigma1_state(const QueueSigma1& v, OpKind op = OpKind::deq,
                              std::optional<Value> arg = std::nullopt);

}  // namespace rglin::hwq
