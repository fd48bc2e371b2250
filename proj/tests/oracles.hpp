#pragma once

// Test-only oracles, kept independent of the explorer's enumeration
// machinery: plain recursion, no trace bookkeeping, duplicate detection by
// linear path scan instead of a hash set. Truncation policy (spin rounds,
// path revisits) deliberately mirrors the explorer's so counts compare.

#include <string>
#include <vector>

#include "rglin/explore.hpp"

namespace rglin::test {

struct NaiveCounter {
  const Model& model;
  const Bounds& bounds;
  bool detect_revisits = false;
  std::size_t leaves = 0;

  void recurse(const SystemState& s, std::vector<std::string>& path,
               std::vector<std::size_t>& spins, std::size_t depth) {
    if (depth >= bounds.max_steps) {
      ++leaves;
      return;
    }
    std::size_t moves = 0;
    for (const EnabledTransition& et : enabled_transitions(model, s)) {
      Step step = apply(model, s, et.pid, *et.transition);
      bool back = is_spin_back_edge(model, step.pre, step.post, et.pid);
      if (back && spins[et.pid] + 1 >= bounds.spin_rounds) continue;  // frozen spinner
      ++moves;
      bool revisit = false;
      std::string key;
      if (detect_revisits) {
        key = canonical_key(step.post);
        for (const std::string& k : path)
          if (k == key) revisit = true;
      }
      if (revisit) {
        ++leaves;
        continue;
      }
      if (back) ++spins[et.pid];
      if (detect_revisits) path.push_back(key);
      recurse(step.post, path, spins, depth + 1);
      if (detect_revisits) path.pop_back();
      if (back) --spins[et.pid];
    }
    if (moves == 0) ++leaves;
  }
};

inline std::size_t naive_trace_count(const Scenario& sc) {
  Model model = build_model(sc);
  NaiveCounter counter{model, sc.bounds};
  for (const auto& progs : model.procs)
    for (const Program& prog : progs)
      if (prog.loop_head_pc >= 0) counter.detect_revisits = true;
  std::vector<std::string> path;
  if (counter.detect_revisits) path.push_back(canonical_key(model.initial));
  std::vector<std::size_t> spins(model.procs.size(), 0);
  counter.recurse(model.initial, path, spins, 0);
  return counter.leaves;
}

inline std::vector<Value> vals(const char* s) {
  std::vector<Value> out;
  for (const char* p = s; *p; ++p) out.push_back(Value::elem(*p));
  return out;
}

}  // namespace rglin::test
