#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rglin/linearise.hpp"
#include "rglin/relations.hpp"

namespace rglin {

enum class Structure { treiber, treiber_unguarded, treiber_aba, hwq };

std::string to_string(Structure s);
Structure structure_from_string(const std::string& s);

struct Bounds {
  std::size_t max_steps = 200;
  std::size_t spin_rounds = 2;
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct Scenario {
  Structure structure = Structure::treiber;
  std::vector<Value> initial;
  std::uint32_t capacity = 4;  // hwq only
  std::optional<AllocMode> mode;  // treiber family; defaults per structure
  std::vector<std::vector<OpSpec>> processes;
  Bounds bounds;
  friend bool operator==(const Scenario&, const Scenario&) = default;

  AllocMode effective_mode() const;
  std::vector<Value> alphabet() const;  // initial values plus op arguments
};

Model build_model(const Scenario& sc);

struct TraceCapExceeded : std::runtime_error {
  explicit TraceCapExceeded(std::size_t cap_);
  std::size_t cap;
};

std::size_t default_trace_cap();  // 200000, RGLIN_TRACE_CAP overrides

/// Depth-first enumeration of all maximal traces (every process returned
/// or halted, or the branch truncated by the bounds). Deterministic order;
/// trace ids follow emission order. Throws TraceCapExceeded beyond cap.
/// The trace reference is valid only during the callback.
void explore_each(const Scenario& sc,
                  const std::function<void(const Trace&, std::size_t id)>& sink,
                  std::size_t trace_cap = default_trace_cap());

std::vector<Trace> explore(const Scenario& sc, std::size_t trace_cap = default_trace_cap());

using Schedule = std::vector<Pid>;

/// The unique trace following the pid choices. Throws std::invalid_argument
/// naming the first position whose process has no enabled transition.
Trace replay(const Scenario& sc, const Schedule& schedule);

/// Step index of the first CAS in the trace that succeeded although the
/// abstraction changed between the acting process's read of head and the
/// CAS itself (node-id equality vs abstraction equality).
std::optional<std::size_t> find_aba_cas(const Trace& t);

/// First explored trace containing such a CAS, if any exists within bounds.
std::optional<Trace> aba_search(const Scenario& sc, std::size_t trace_cap = default_trace_cap());

/// Every explored trace containing such a CAS (up to limit).
std::vector<Trace> aba_find_all(const Scenario& sc, std::size_t limit = SIZE_MAX,
                                std::size_t trace_cap = default_trace_cap());

struct RelOutcome {
  std::string relation;
  Pid pid = 0;
  bool holds = true;
  std::string clause;  // first failing clause when violated
  bool is_run = false;
  std::size_t first = 0, last = 0;
};

struct TraceRow {
  std::size_t id = 0;
  Schedule schedule;
  bool truncated = false;
  bool linearisable = false;
  bool all_guarantees_hold = true;
  bool all_relies_hold = true;
  std::vector<RelOutcome> guarantees;
  std::vector<RelOutcome> relies;
};

/// The lin x guarantees contingency plus the conjecture counterexamples
/// (non-linearisable traces on which every guarantee holds). Measures,
/// never asserts, the conjecture that non-linearisable behaviour always
/// shows up as a guarantee violation.
struct CorrelationReport {
  std::vector<TraceRow> rows;
  std::size_t lin_guar_hold = 0;
  std::size_t lin_guar_viol = 0;
  std::size_t nonlin_guar_hold = 0;
  std::size_t nonlin_guar_viol = 0;
  std::size_t rely_violated_traces = 0;
  std::size_t truncated_traces = 0;
  std::vector<std::size_t> conjecture_counterexamples;
  std::size_t aba_traces = 0;  // treiber-aba scenarios only

  std::size_t total() const { return rows.size(); }
};

/// Runs the lin oracle and the rely/guarantee checker on every trace.
CorrelationReport correlate(const Scenario& sc,
                            const std::vector<const RelationSpec*>& guarantees,
                            const std::vector<const RelationSpec*>& relies,
                            std::size_t trace_cap = default_trace_cap());

/// Same, over an explicit trace set (empty set => empty report).
CorrelationReport correlate_traces(const Scenario& sc, const std::vector<Trace>& traces,
                                   const std::vector<const RelationSpec*>& guarantees,
                                   const std::vector<const RelationSpec*>& relies);

/// The structure's own guarantees/relies (treiber: guar-push1/guar-pop1
/// with rely true; hwq: guar-enq1/guar-deq1 with rely1).
std::vector<const RelationSpec*> default_guarantees(Structure s);
std::vector<const RelationSpec*> default_relies(Structure s);

}  // namespace rglin
