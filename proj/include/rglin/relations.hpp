#pragma once

#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rglin/program.hpp"

namespace rglin {

/// A rely or guarantee relation over (pre, post) state pairs, evaluated
/// with an acting/observing process context. Stored as named clauses so a
/// violation can name the clause that failed. Total on well-formed pairs.
struct RelationSpec {
  std::string name;
  std::set<OpKind> applies_to;  // empty = applies to every operation
  // nullopt when the relation holds, else the first failing clause label
  std::function<std::optional<std::string>(const SystemState& pre, const SystemState& post,
                                           Pid subject)>
      eval;

  bool holds(const SystemState& pre, const SystemState& post, Pid subject) const {
    return !eval(pre, post, subject).has_value();
  }
  bool applicable(OpKind op) const { return applies_to.empty() || applies_to.count(op) > 0; }
};

/// Built-in relations addressable by name: guar-pop1, guar-push1,
/// guar-deq1, guar-enq1, rely1, true. Throws on unknown names.
const RelationSpec& relation_by_name(const std::string& name);
std::vector<std::string> relation_names();

struct Witness {
  std::size_t trace_id = 0;
  Pid pid = 0;
  bool is_run = false;  // false: single step; true: run endpoints
  std::size_t first = 0, last = 0;
  SystemState pre, post;
  std::string clause;
};

struct Verdict {
  bool holds = true;
  std::optional<Witness> witness;
};

}  // namespace rglin
