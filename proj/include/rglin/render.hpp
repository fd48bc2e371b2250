#pragma once

#include <string>
#include <vector>

#include "rglin/history.hpp"
#include "rglin/linearise.hpp"
#include "rglin/program.hpp"

namespace rglin {

/// Bracket list notation: "[D,A,B,C]" / "[]".
std::string render_values(const std::vector<Value>& vs);

/// Concrete queue array with '-' for null slots: "[A,-,-,-]".
std::string render_queue_array(const QueueState& s);

/// Shared-state rendering: stack abstraction (or "<corrupt>") / queue array.
std::string render_shared(const SystemState& s);

/// Plain-words narration of one step, e.g. "deq (checks slot 1 - returns B)".
std::string narrative_line(const Trace& t, std::size_t i);

/// One printable line per step: index, actor, label, states, narration.
std::string render_step_line(const Trace& t, std::size_t i);

std::string render_op(const OpRecord& op);          // "push(D)", "pop->A"
std::string render_witness(const LinWitness& w);    // "enq(B);enq(A);deq->B"
std::string render_history(const History& h);

}  // namespace rglin
