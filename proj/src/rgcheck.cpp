#include "rglin/rgcheck.hpp"

namespace rglin {

namespace {

Verdict violated(std::size_t trace_id, Pid pid, bool is_run, std::size_t first, std::size_t last,
                 const SystemState& pre, const SystemState& post, std::string clause) {
  Verdict v;
  v.holds = false;
  v.witness = Witness{trace_id, pid, is_run, first, last, pre, post, std::move(clause)};
  return v;
}

void require_pid(const Trace& t, Pid pid, const char* who) {
  if (t.states.empty() || pid >= t.init().procs.size())
    throw std::invalid_argument(std::string(who) + ": process " + std::to_string(pid) +
                                " absent from trace");
}

}  // namespace

Verdict check_guarantee(const Trace& t, Pid pid, const RelationSpec& g, std::size_t trace_id) {
  require_pid(t, pid, "check_guarantee");
  for (const InstanceSpan& span : instance_spans(t, pid)) {
    if (!g.applicable(span.op)) continue;
    for (auto [first, last] : instance_program_runs(t, span)) {
      for (std::size_t i = first; i <= last; ++i)
        if (auto clause = g.eval(t.pre(i), t.post(i), pid))
          return violated(trace_id, pid, false, i, i, t.pre(i), t.post(i), *clause);
      if (auto clause = g.eval(t.pre(first), t.post(last), pid))
        return violated(trace_id, pid, true, first, last, t.pre(first), t.post(last), *clause);
    }
  }
  return Verdict{};
}

Verdict check_rely(const Trace& t, Pid pid, const RelationSpec& r, std::size_t trace_id) {
  require_pid(t, pid, "check_rely");
  for (const InstanceSpan& span : instance_spans(t, pid)) {
    if (!r.applicable(span.op)) continue;
    for (auto [first, last] : instance_environment_runs(t, span)) {
      for (std::size_t i = first; i <= last; ++i)
        if (auto clause = r.eval(t.pre(i), t.post(i), pid))
          return violated(trace_id, pid, false, i, i, t.pre(i), t.post(i), *clause);
      if (auto clause = r.eval(t.pre(first), t.post(last), pid))
        return violated(trace_id, pid, true, first, last, t.pre(first), t.post(last), *clause);
    }
  }
  return Verdict{};
}

std::vector<StateChain> run_state_chains(const Trace& t, const RelationSpec& g) {
  std::vector<StateChain> chains;
  for (Pid pid = 0; pid < t.init().procs.size(); ++pid) {
    for (const InstanceSpan& span : instance_spans(t, pid)) {
      if (!g.applicable(span.op)) continue;
      for (auto [first, last] : instance_program_runs(t, span)) {
        StateChain chain;
        chain.subject = pid;
        chain.states.push_back(t.pre(first));
        for (std::size_t i = first; i <= last; ++i) chain.states.push_back(t.post(i));
        chains.push_back(std::move(chain));
      }
    }
  }
  return chains;
}

Verdict check_transitive(const RelationSpec& g, std::span<const StateChain> chains) {
  std::size_t chain_id = 0;
  for (const StateChain& chain : chains) {
    const auto& s = chain.states;
    const std::size_t n = s.size();
    // cache pairwise results along the chain
    std::vector<std::vector<char>> holds(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        holds[i][j] = g.holds(s[i], s[j], chain.subject) ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!holds[i][j]) continue;
        for (std::size_t k = j + 1; k < n; ++k) {
          if (!holds[j][k] || holds[i][k]) continue;
          auto clause = g.eval(s[i], s[k], chain.subject);
          return violated(chain_id, chain.subject, true, i, k, s[i], s[k],
                          clause.value_or("transitivity"));
        }
      }
    ++chain_id;
  }
  return Verdict{};
}

Verdict check_transitive(const RelationSpec& g, std::span<const Trace> traces) {
  std::vector<StateChain> chains;
  for (const Trace& t : traces)
    for (StateChain& c : run_state_chains(t, g)) chains.push_back(std::move(c));
  return check_transitive(g, chains);
}

Verdict check_compatibility(const RelationSpec& g_of_p, const RelationSpec& r_of_q,
                            std::span<const Trace> traces) {
  std::size_t trace_id = 0;
  for (const Trace& t : traces) {
    for (std::size_t i = 0; i < t.step_count(); ++i) {
      const Pid actor = t.pid(i);
      const ProcessState& ap = t.pre(i).procs[actor];
      if (ap.phase != Phase::invoked || !g_of_p.applicable(ap.op)) continue;
      if (!g_of_p.holds(t.pre(i), t.post(i), actor)) continue;
      for (Pid other = 0; other < t.pre(i).procs.size(); ++other) {
        if (other == actor) continue;
        const ProcessState& op = t.pre(i).procs[other];
        if (op.phase != Phase::invoked || !r_of_q.applicable(op.op)) continue;
        if (auto clause = r_of_q.eval(t.pre(i), t.post(i), other))
          return violated(trace_id, other, false, i, i, t.pre(i), t.post(i), *clause);
      }
    }
    ++trace_id;
  }
  return Verdict{};
}

}  // namespace rglin
