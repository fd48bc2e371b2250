#include "rglin/scenario_io.hpp"

#include <fstream>

#include "rglin/hwqueue.hpp"
#include "rglin/render.hpp"
#include "rglin/treiber.hpp"

namespace rglin {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw SchemaError("unknown field '" + key + "' in " + where);
  }
}

Value value_from_json(const json& j, const std::string& where) {
  if (!j.is_string() || j.get<std::string>().size() != 1)
    throw SchemaError(where + ": expected a single-letter value");
  char c = j.get<std::string>()[0];
  if (c < 'A' || c > 'Z') throw SchemaError(where + ": values are letters A..Z");
  return Value::elem(c);
}

OpSpec op_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  reject_unknown(j, {"op", "arg"}, where);
  if (!j.contains("op") || !j.at("op").is_string())
    throw SchemaError(where + ": missing operation name");
  OpSpec spec;
  try {
    spec.op = op_kind_from_string(j.at("op").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
  if (op_takes_arg(spec.op)) {
    if (!j.contains("arg")) throw SchemaError(where + ": '" + to_string(spec.op) + "' needs arg");
    spec.arg = value_from_json(j.at("arg"), where + ".arg");
  } else if (j.contains("arg")) {
    throw SchemaError(where + ": '" + to_string(spec.op) + "' takes no arg");
  }
  return spec;
}

}  // namespace

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("scenario: expected a JSON object");
  reject_unknown(j, {"format", "structure", "initial", "processes", "bounds", "mode", "n"},
                 "scenario");
  if (!j.contains("format") || j.at("format") != kFormatVersion)
    throw SchemaError("scenario: missing or unsupported 'format' (expected 1)");
  if (!j.contains("structure") || !j.at("structure").is_string())
    throw SchemaError("scenario: missing 'structure'");
  Scenario sc;
  try {
    sc.structure = structure_from_string(j.at("structure").get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("scenario: ") + e.what());
  }
  if (!j.contains("initial") || !j.at("initial").is_array())
    throw SchemaError("scenario: missing 'initial' array");
  for (const json& v : j.at("initial")) sc.initial.push_back(value_from_json(v, "initial"));
  if (!j.contains("processes") || !j.at("processes").is_array())
    throw SchemaError("scenario: missing 'processes' array");
  std::size_t pidx = 0;
  for (const json& p : j.at("processes")) {
    std::string where = "processes[" + std::to_string(pidx++) + "]";
    if (!p.is_object()) throw SchemaError(where + ": expected an object");
    std::vector<OpSpec> ops;
    if (p.contains("ops")) {
      reject_unknown(p, {"ops"}, where);
      if (!p.at("ops").is_array() || p.at("ops").empty())
        throw SchemaError(where + ".ops: expected a non-empty array");
      std::size_t oidx = 0;
      for (const json& o : p.at("ops"))
        ops.push_back(op_from_json(o, where + ".ops[" + std::to_string(oidx++) + "]"));
    } else {
      ops.push_back(op_from_json(p, where));
    }
    sc.processes.push_back(std::move(ops));
  }
  if (j.contains("bounds")) {
    const json& b = j.at("bounds");
    if (!b.is_object()) throw SchemaError("bounds: expected an object");
    reject_unknown(b, {"max_steps", "spin_rounds"}, "bounds");
    if (b.contains("max_steps")) {
      if (!b.at("max_steps").is_number_unsigned() || b.at("max_steps") == 0)
        throw SchemaError("bounds.max_steps: expected a positive integer");
      sc.bounds.max_steps = b.at("max_steps").get<std::size_t>();
    }
    if (b.contains("spin_rounds")) {
      if (!b.at("spin_rounds").is_number_unsigned() || b.at("spin_rounds") == 0)
        throw SchemaError("bounds.spin_rounds: expected a positive integer");
      sc.bounds.spin_rounds = b.at("spin_rounds").get<std::size_t>();
    }
  }
  const bool is_queue = sc.structure == Structure::hwq;
  if (j.contains("mode")) {
    if (is_queue) throw SchemaError("scenario: 'mode' does not apply to hwq");
    std::string m = j.at("mode").is_string() ? j.at("mode").get<std::string>() : "";
    if (m == "fresh-ids") sc.mode = AllocMode::fresh_ids;
    else if (m == "reuse") sc.mode = AllocMode::reuse;
    else throw SchemaError("scenario: mode must be \"fresh-ids\" or \"reuse\"");
  }
  if (j.contains("n")) {
    if (!is_queue) throw SchemaError("scenario: 'n' applies to hwq only");
    if (!j.at("n").is_number_unsigned() || j.at("n") == 0)
      throw SchemaError("scenario: n must be a positive integer");
    sc.capacity = j.at("n").get<std::uint32_t>();
  }
  if (is_queue && sc.initial.size() > sc.capacity)
    throw SchemaError("scenario: initial queue longer than capacity n");
  for (const auto& ops : sc.processes)
    for (const OpSpec& op : ops) {
      bool queue_op = op.op == OpKind::enq || op.op == OpKind::deq;
      if (queue_op != is_queue)
        throw SchemaError("scenario: operation '" + to_string(op.op) +
                          "' does not fit structure '" + to_string(sc.structure) + "'");
    }
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json j;
  j["format"] = kFormatVersion;
  j["structure"] = to_string(sc.structure);
  json init = json::array();
  for (const Value& v : sc.initial) init.push_back(v.str());
  j["initial"] = init;
  json procs = json::array();
  for (const auto& ops : sc.processes) {
    auto op_json = [](const OpSpec& op) {
      json o;
      o["op"] = to_string(op.op);
      if (op.arg) o["arg"] = op.arg->str();
      return o;
    };
    if (ops.size() == 1) {
      procs.push_back(op_json(ops[0]));
    } else {
      json seq = json::array();
      for (const OpSpec& op : ops) seq.push_back(op_json(op));
      procs.push_back(json{{"ops", seq}});
    }
  }
  j["processes"] = procs;
  j["bounds"] = {{"max_steps", sc.bounds.max_steps}, {"spin_rounds", sc.bounds.spin_rounds}};
  if (sc.structure == Structure::hwq) j["n"] = sc.capacity;
  else if (sc.mode) j["mode"] = to_string(*sc.mode);
  return j;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("malformed JSON in '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

namespace {

std::vector<Value> vals(const char* s) {
  std::vector<Value> out;
  for (const char* p = s; *p; ++p) out.push_back(Value::elem(*p));
  return out;
}

Scenario fig2_scenario(Structure structure) {
  Scenario sc;
  sc.structure = structure;
  sc.initial = vals("ABC");
  sc.processes = {{OpSpec{OpKind::pop, std::nullopt}}, {OpSpec{OpKind::push, Value::elem('D')}}};
  return sc;
}

}  // namespace

std::optional<Canned> canned_scenario(const std::string& name) {
  if (name == "fig2a") {
    Canned c{fig2_scenario(Structure::treiber_unguarded),
             Schedule{0, 0, 0, 0, 1, 1, 1, 1, 0, 0}};
    return c;
  }
  if (name == "fig2b") {
    Canned c{fig2_scenario(Structure::treiber),
             Schedule{0, 0, 0, 0, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0}};
    return c;
  }
  if (name == "treiber-unguarded") return Canned{fig2_scenario(Structure::treiber_unguarded), {}};
  if (name == "treiber") {
    Scenario sc;
    sc.structure = Structure::treiber;
    sc.initial = vals("ABC");
    sc.processes = {{OpSpec{OpKind::push, Value::elem('D')}}, {OpSpec{OpKind::pop, std::nullopt}}};
    return Canned{sc, {}};
  }
  if (name == "treiber-aba") {
    Scenario sc;
    sc.structure = Structure::treiber_aba;
    sc.initial = vals("AB");
    sc.processes = {{OpSpec{OpKind::pop, std::nullopt}},
                    {OpSpec{OpKind::pop, std::nullopt}, OpSpec{OpKind::push, Value::elem('C')}}};
    // P0 reads head, P1 pops A and re-pushes its node as C, P0's CAS still succeeds
    return Canned{sc, Schedule{0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 1, 1, 1, 0, 0}};
  }
  if (name == "hwq" || name == "hwq-paper") {
    Scenario sc;
    sc.structure = Structure::hwq;
    sc.capacity = 4;
    sc.processes = {{OpSpec{OpKind::enq, Value::elem('A')}},
                    {OpSpec{OpKind::enq, Value::elem('B')}},
                    {OpSpec{OpKind::deq, std::nullopt}}};
    Canned c{sc, {}};
    if (name == "hwq-paper") c.schedule = Schedule{0, 1, 2, 2, 2, 2, 2, 0, 1, 2, 2, 2, 2};
    return c;
  }
  return std::nullopt;
}

std::vector<std::string> canned_names() {
  return {"fig2a", "fig2b", "hwq", "hwq-paper", "treiber", "treiber-aba", "treiber-unguarded"};
}

Canned resolve_scenario(const std::string& name_or_path) {
  if (auto c = canned_scenario(name_or_path)) return *c;
  return Canned{load_scenario_file(name_or_path), {}};
}

namespace {

json local_to_json(const LocalValue& lv) {
  switch (lv.index()) {
    case 0: return nullptr;
    case 1: {
      const Value& v = std::get<Value>(lv);
      return v.is_null() ? json(nullptr) : json(v.str());
    }
    case 2: return std::get<std::uint32_t>(lv);
    case 3: {
      const NodeRef& n = std::get<NodeRef>(lv);
      json o;
      o["node"] = n.id ? json(*n.id) : json(nullptr);
      return o;
    }
  }
  return nullptr;
}

std::string phase_name(Phase p) {
  switch (p) {
    case Phase::idle: return "idle";
    case Phase::invoked: return "invoked";
    case Phase::returned: return "returned";
  }
  return "?";
}

}  // namespace

json state_to_json(const SystemState& s) {
  json j;
  if (is_stack_state(s)) {
    const NodeStore& st = stack_of(s);
    json stack;
    stack["head"] = st.head ? json(*st.head) : json(nullptr);
    json nodes = json::object();
    for (const auto& [id, node] : st.nodes) {
      json n;
      n["val"] = node.val.str();
      n["next"] = node.next ? json(*node.next) : json(nullptr);
      nodes[std::to_string(id)] = n;
    }
    stack["nodes"] = nodes;
    json freelist = json::array();
    for (NodeId id : st.freelist) freelist.push_back(id);
    stack["freelist"] = freelist;
    stack["mode"] = to_string(st.mode);
    auto abs = treiber::try_abstraction(st);
    stack["abstraction"] = abs ? render_values(*abs) : "<corrupt>";
    j["stack"] = stack;
  } else {
    const QueueState& q = queue_of(s);
    json queue;
    json slots = json::array();
    for (const Value& v : q.q) slots.push_back(v.is_null() ? json(nullptr) : json(v.str()));
    queue["q"] = slots;
    queue["last"] = q.last;
    j["queue"] = queue;
  }
  json procs = json::array();
  for (const ProcessState& p : s.procs) {
    json pj;
    pj["pc"] = p.pc;
    pj["phase"] = phase_name(p.phase);
    pj["op"] = to_string(p.op);
    pj["op_index"] = p.op_index;
    if (p.arg) pj["arg"] = p.arg->str();
    if (p.result) pj["result"] = p.result->is_null() ? json(nullptr) : json(p.result->str());
    json locals = json::object();
    for (const auto& [name, lv] : p.locals) locals[name] = local_to_json(lv);
    pj["locals"] = locals;
    pj["flag"] = p.flag;
    pj["setInd"] = p.set_ind;
    procs.push_back(pj);
  }
  j["procs"] = procs;
  return j;
}

json history_to_json(const History& h) {
  json events = json::array();
  for (const Event& e : h.events) {
    json ej;
    ej["kind"] = e.kind == Event::Kind::invocation ? "inv" : "res";
    ej["pid"] = e.pid;
    ej["op"] = to_string(e.op);
    ej["op_index"] = e.op_index;
    if (e.arg) ej["arg"] = e.arg->str();
    if (e.kind == Event::Kind::response && op_returns_value(e.op))
      ej["result"] = e.result && !e.result->is_null() ? json(e.result->str()) : json(nullptr);
    events.push_back(ej);
  }
  return events;
}

json trace_to_json(const Trace& t, std::size_t id) {
  json j;
  j["id"] = id;
  json sched = json::array();
  for (Pid p : t.schedule()) sched.push_back(p);
  j["schedule"] = sched;
  j["truncated"] = t.truncated;
  if (t.truncated) j["truncation_reason"] = t.truncation_reason;
  json steps = json::array();
  for (std::size_t i = 0; i < t.step_count(); ++i) {
    json sj;
    sj["pid"] = t.pid(i);
    sj["label"] = t.label(i);
    sj["pre"] = state_to_json(t.pre(i));
    sj["post"] = state_to_json(t.post(i));
    steps.push_back(sj);
  }
  j["steps"] = steps;
  if (!t.states.empty() && is_stack_state(t.init())) {
    // the head observed where each flag flipped; the guarantee's list
    // clause leaves this value unconstrained, so surface it for inspection
    json flags = json::array();
    for (const treiber::FlagStepReport& r : treiber::flag_step_reports(t)) {
      json fj;
      fj["pid"] = r.pid;
      fj["step"] = r.step;
      fj["head"] = r.head.is_null() ? json(nullptr) : json(r.head.str());
      flags.push_back(fj);
    }
    j["flag_steps"] = flags;
  }
  return j;
}

json report_to_json(const Scenario& sc, const std::vector<Trace>& traces,
                    const CorrelationReport& report) {
  json j;
  j["format"] = kFormatVersion;
  j["scenario"] = scenario_to_json(sc);
  Model model = build_model(sc);
  json traces_json = json::array();
  for (std::size_t i = 0; i < traces.size(); ++i) {
    json tj = trace_to_json(traces[i], i);
    tj["history"] = history_to_json(project_history(traces[i], model));
    if (i < report.rows.size()) {
      const TraceRow& row = report.rows[i];
      json verdicts;
      verdicts["linearisable"] = row.linearisable;
      json guars = json::array();
      for (const RelOutcome& o : row.guarantees) {
        json oj;
        oj["relation"] = o.relation;
        oj["pid"] = o.pid;
        oj["holds"] = o.holds;
        if (!o.holds) {
          oj["clause"] = o.clause;
          oj["at"] = o.is_run ? json::array({o.first, o.last}) : json::array({o.first});
        }
        guars.push_back(oj);
      }
      verdicts["guarantees"] = guars;
      json relies = json::array();
      for (const RelOutcome& o : row.relies) {
        json oj;
        oj["relation"] = o.relation;
        oj["pid"] = o.pid;
        oj["holds"] = o.holds;
        if (!o.holds) oj["clause"] = o.clause;
        relies.push_back(oj);
      }
      verdicts["relies"] = relies;
      tj["verdicts"] = verdicts;
    }
    traces_json.push_back(tj);
  }
  j["traces"] = traces_json;
  json summary;
  summary["traces"] = traces.size();
  summary["truncated"] = report.truncated_traces;
  summary["lin_guar_hold"] = report.lin_guar_hold;
  summary["lin_guar_viol"] = report.lin_guar_viol;
  summary["nonlin_guar_hold"] = report.nonlin_guar_hold;
  summary["nonlin_guar_viol"] = report.nonlin_guar_viol;
  summary["rely_violated_traces"] = report.rely_violated_traces;
  j["summary"] = summary;
  json cex = json::array();
  for (std::size_t id : report.conjecture_counterexamples) cex.push_back(id);
  j["counterexamples"] = cex;
  return j;
}

std::string canonical_dump(const json& j) { return j.dump(2); }

}  // namespace rglin
