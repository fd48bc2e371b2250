#include "rglin/relations.hpp"

#include <map>

#include "rglin/hwqueue.hpp"
#include "rglin/treiber.hpp"

namespace rglin {

namespace {

treiber::StackSigma1 stack_view(const SystemState& s, Pid subject) {
  auto list = treiber::try_abstraction(stack_of(s));
  if (!list) throw treiber::StoreCorruption("relation: corrupt store");
  return {*list, s.procs.at(subject).flag};
}

std::optional<std::string> eval_stack(
    const SystemState& pre, const SystemState& post, Pid subject,
    const std::function<std::optional<std::string>(const treiber::StackSigma1&,
                                                   const treiber::StackSigma1&, Pid)>& f) {
  if (!is_stack_state(pre)) throw std::invalid_argument("relation: stack relation on queue state");
  try {
    return f(stack_view(pre, subject), stack_view(post, subject), subject);
  } catch (const treiber::StoreCorruption&) {
    return "store corrupted (cycle in head chain)";
  }
}

hwq::QueueSigma1 queue_view(const SystemState& s, Pid subject) {
  const ProcessState& p = s.procs.at(subject);
  return {queue_of(s), p.nat_local("index"), p.flag, p.set_ind};
}

Value subject_arg(const SystemState& s, Pid subject, const char* rel) {
  const auto& arg = s.procs.at(subject).arg;
  if (!arg) throw std::invalid_argument(std::string(rel) + ": subject has no argument value");
  return *arg;
}

std::map<std::string, RelationSpec> build_registry() {
  std::map<std::string, RelationSpec> reg;

  reg["guar-pop1"] = RelationSpec{
      "guar-pop1",
      {OpKind::pop},
      [](const SystemState& pre, const SystemState& post, Pid subject) {
        return eval_stack(pre, post, subject,
                          [](const treiber::StackSigma1& a, const treiber::StackSigma1& b, Pid) {
                            return treiber::guar_pop1_failing(a, b);
                          });
      }};

  reg["guar-push1"] = RelationSpec{
      "guar-push1",
      {OpKind::push},
      [](const SystemState& pre, const SystemState& post, Pid subject) {
        Value v = subject_arg(pre, subject, "guar-push1");
        return eval_stack(pre, post, subject,
                          [v](const treiber::StackSigma1& a, const treiber::StackSigma1& b, Pid) {
                            return treiber::guar_push1_failing(a, b, v);
                          });
      }};

  reg["guar-deq1"] = RelationSpec{
      "guar-deq1",
      {OpKind::deq},
      [](const SystemState& pre, const SystemState& post, Pid subject) {
        return hwq::guar_deq1_failing(queue_view(pre, subject), queue_view(post, subject));
      }};

  reg["guar-enq1"] = RelationSpec{
      "guar-enq1",
      {OpKind::enq},
      [](const SystemState& pre, const SystemState& post, Pid subject) {
        Value v = subject_arg(pre, subject, "guar-enq1");
        return hwq::guar_enq1_failing(queue_view(pre, subject), queue_view(post, subject), v);
      }};

  reg["rely1"] = RelationSpec{
      "rely1",
      {OpKind::enq, OpKind::deq},
      [](const SystemState& pre, const SystemState& post, Pid subject)
          -> std::optional<std::string> {
        const ProcessState& p = pre.procs.at(subject);
        if (hwq::rely1_step_holds(queue_of(pre), queue_of(post), p.nat_local("index"), p.flag))
          return std::nullopt;
        return "q'(index) = q(index)";
      }};

  reg["true"] = RelationSpec{
      "true", {}, [](const SystemState&, const SystemState&, Pid) { return std::nullopt; }};

  return reg;
}

const std::map<std::string, RelationSpec>& registry() {
  static const std::map<std::string, RelationSpec> reg = build_registry();
  return reg;
}

}  // namespace

const RelationSpec& relation_by_name(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw std::invalid_argument("unknown relation '" + name + "'");
  return it->second;
}

std::vector<std::string> relation_names() {
  std::vector<std::string> out;
  for (const auto& [name, _] : registry()) out.push_back(name);
  return out;
}

}  // namespace rglin
