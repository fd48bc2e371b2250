#include "rglin/cli.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rglin/explore.hpp"
#include "rglin/render.hpp"
#include "rglin/rgcheck.hpp"
#include "rglin/scenario_io.hpp"

namespace rglin {

namespace {

struct CommonOpts {
  std::string scenario;
  std::string mode;
};

void apply_mode(Scenario& sc, const std::string& mode) {
  if (mode.empty()) return;
  if (sc.structure == Structure::hwq) throw SchemaError("--mode does not apply to hwq");
  if (mode == "fresh-ids") sc.mode = AllocMode::fresh_ids;
  else if (mode == "reuse") sc.mode = AllocMode::reuse;
  else throw SchemaError("--mode must be fresh-ids or reuse");
}

Schedule parse_schedule(const std::string& text) {
  Schedule out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(static_cast<Pid>(std::stoul(tok)));
  }
  return out;
}

std::string schedule_str(const Schedule& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out;
}

int cmd_explore(const CommonOpts& opts, const std::string& out_path, std::ostream& out) {
  Canned c = resolve_scenario(opts.scenario);
  apply_mode(c.scenario, opts.mode);
  std::vector<Trace> traces = explore(c.scenario);
  CorrelationReport report = correlate_traces(c.scenario, traces,
                                              default_guarantees(c.scenario.structure),
                                              default_relies(c.scenario.structure));
  nlohmann::json j = report_to_json(c.scenario, traces, report);
  std::ofstream f(out_path);
  if (!f) throw SchemaError("cannot write report to '" + out_path + "'");
  f << canonical_dump(j) << "\n";
  out << "explored " << traces.size() << " trace(s) (" << report.truncated_traces
      << " truncated) -> " << out_path << "\n";
  return 0;
}

void print_verdict_line(std::ostream& out, std::size_t trace_id, const RelOutcome& o,
                        const Trace& t, bool relies) {
  out << "trace " << trace_id << ": " << o.relation << " P" << o.pid << ": ";
  if (o.holds) {
    out << "holds\n";
    return;
  }
  out << "VIOLATED at " << (o.is_run ? "run " : "step ");
  if (o.is_run)
    out << o.first << ".." << o.last;
  else
    out << o.first << " (" << t.label(o.first) << ")";
  out << " clause: " << o.clause << "  " << render_shared(t.pre(o.first)) << " -> "
      << render_shared(t.post(o.last)) << (relies ? "  [environment]" : "") << "\n";
}

int cmd_check(const CommonOpts& opts, std::vector<std::string> guar_ids,
              std::vector<std::string> rely_ids, bool lin, std::ostream& out) {
  Scenario sc;
  std::vector<Trace> traces;
  bool is_report = false;
  if (!canned_scenario(opts.scenario)) {
    // a report file may be passed instead of a scenario
    std::ifstream in(opts.scenario);
    if (in) {
      nlohmann::json j;
      try {
        in >> j;
      } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("malformed JSON in '" + opts.scenario + "': " + e.what());
      }
      if (j.is_object() && j.contains("traces")) {
        sc = scenario_from_json(j.at("scenario"));
        apply_mode(sc, opts.mode);
        for (const auto& tj : j.at("traces")) {
          Schedule sch;
          for (const auto& p : tj.at("schedule")) sch.push_back(p.get<Pid>());
          traces.push_back(replay(sc, sch));
        }
        is_report = true;
      }
    }
  }
  if (!is_report) {
    Canned c = resolve_scenario(opts.scenario);
    sc = c.scenario;
    apply_mode(sc, opts.mode);
    if (c.schedule) {
      traces.push_back(replay(sc, *c.schedule));
    } else {
      traces = explore(sc);
    }
  }
  if (guar_ids.empty() && rely_ids.empty() && !lin) {
    for (const RelationSpec* g : default_guarantees(sc.structure)) guar_ids.push_back(g->name);
    for (const RelationSpec* r : default_relies(sc.structure)) rely_ids.push_back(r->name);
    lin = true;
  }
  Model model = build_model(sc);
  std::size_t violations = 0;
  for (std::size_t id = 0; id < traces.size(); ++id) {
    const Trace& t = traces[id];
    const std::size_t nprocs = t.init().procs.size();
    auto run_side = [&](const std::vector<std::string>& ids, bool relies) {
      for (const std::string& name : ids) {
        const RelationSpec& rel = relation_by_name(name);
        for (Pid pid = 0; pid < nprocs; ++pid) {
          bool applicable = false;
          for (const InstanceSpan& span : instance_spans(t, pid))
            applicable = applicable || rel.applicable(span.op);
          if (!applicable) continue;
          Verdict v = relies ? check_rely(t, pid, rel, id) : check_guarantee(t, pid, rel, id);
          RelOutcome o{name, pid, v.holds, "", false, 0, 0};
          if (!v.holds) {
            o.clause = v.witness->clause;
            o.is_run = v.witness->is_run;
            o.first = v.witness->first;
            o.last = v.witness->last;
            ++violations;
          }
          if (!v.holds || traces.size() == 1) print_verdict_line(out, id, o, t, relies);
        }
      }
    };
    run_side(guar_ids, false);
    run_side(rely_ids, true);
    if (lin) {
      LinResult lr = is_linearisable(project_history(t, model));
      if (!lr.linearisable) ++violations;
      if (!lr.linearisable || traces.size() == 1) {
        out << "trace " << id << ": lin: " << (lr.linearisable ? "YES" : "NO");
        if (lr.witness) out << "  witness: " << render_witness(*lr.witness);
        out << "\n";
      }
    }
  }
  out << "checked " << traces.size() << " trace(s): " << violations << " violation(s)\n";
  return violations == 0 ? 0 : 1;
}

int cmd_replay(const CommonOpts& opts, const std::string& schedule_text, std::ostream& out) {
  Canned c = resolve_scenario(opts.scenario);
  apply_mode(c.scenario, opts.mode);
  Schedule sch;
  if (!schedule_text.empty()) {
    sch = parse_schedule(schedule_text);
  } else if (c.schedule) {
    sch = *c.schedule;
  } else {
    throw std::invalid_argument("no schedule: pass --schedule or use a canned scenario");
  }
  Trace t = replay(c.scenario, sch);
  out << "scenario: " << opts.scenario << "  schedule: " << schedule_str(sch) << "\n";
  for (std::size_t i = 0; i < t.step_count(); ++i) out << render_step_line(t, i) << "\n";
  out << "final: " << render_shared(t.final_state()) << "\n";
  Model model = build_model(c.scenario);
  out << "history: " << render_history(project_history(t, model)) << "\n";
  for (Pid pid = 0; pid < t.final_state().procs.size(); ++pid) {
    const ProcessState& p = t.final_state().procs[pid];
    out << "P" << pid << ": " << to_string(p.op);
    if (p.arg) out << "(" << p.arg->str() << ")";
    if (p.phase == Phase::returned) {
      if (p.result) out << " -> " << p.result->str();
      out << " (returned)";
    } else {
      out << " (pending)";
    }
    out << "\n";
  }
  return 0;
}

int cmd_correlate(const CommonOpts& opts, std::ostream& out) {
  Canned c = resolve_scenario(opts.scenario);
  apply_mode(c.scenario, opts.mode);
  const Scenario& sc = c.scenario;
  CorrelationReport r =
      correlate(sc, default_guarantees(sc.structure), default_relies(sc.structure));
  out << "scenario: " << opts.scenario << " (" << r.total() << " traces, "
      << r.truncated_traces << " truncated)\n";
  out << "lin \\ guarantees |  hold  | violated\n";
  out << "linearisable     | " << r.lin_guar_hold << " | " << r.lin_guar_viol << "\n";
  out << "non-linearisable | " << r.nonlin_guar_hold << " | " << r.nonlin_guar_viol << "\n";
  out << "rely violated in " << r.rely_violated_traces << "/" << r.total() << " traces\n";
  if (sc.structure == Structure::treiber_aba)
    out << "aba traces (CAS succeeded across an abstraction change): " << r.aba_traces << "\n";
  if (r.conjecture_counterexamples.empty()) {
    out << "conjecture counterexamples (non-lin, all guarantees hold): none\n";
  } else {
    out << "conjecture counterexamples (non-lin, all guarantees hold): ";
    for (std::size_t i = 0; i < r.conjecture_counterexamples.size(); ++i) {
      if (i) out << ",";
      out << r.conjecture_counterexamples[i];
      if (i > 20) {
        out << ",...";
        break;
      }
    }
    out << "\n";
    for (std::size_t id : r.conjecture_counterexamples) {
      if (id >= r.rows.size()) continue;
      out << "counterexample trace " << id << ": schedule " << schedule_str(r.rows[id].schedule)
          << "\n";
      if (r.conjecture_counterexamples.size() > 5 && id == r.conjecture_counterexamples[4]) break;
    }
  }
  return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"bounded-exhaustive rely/guarantee and linearisability checker"};
  app.require_subcommand(1);

  CommonOpts explore_opts, check_opts, replay_opts, correlate_opts;
  std::string out_path = "report.json";
  std::vector<std::string> guar_ids, rely_ids;
  bool lin = false;
  std::string schedule_text;

  CLI::App* explore_cmd = app.add_subcommand("explore", "enumerate all interleavings");
  explore_cmd->add_option("scenario", explore_opts.scenario, "scenario file or canned name")
      ->required();
  explore_cmd->add_option("-o,--out", out_path, "report file path");
  explore_cmd->add_option("--mode", explore_opts.mode, "fresh-ids|reuse");

  CLI::App* check_cmd = app.add_subcommand("check", "check relations and linearisability");
  check_cmd->add_option("scenario", check_opts.scenario, "scenario/report file or canned name")
      ->required();
  check_cmd->add_option("--guar", guar_ids, "guarantee relation ids");
  check_cmd->add_option("--rely", rely_ids, "rely relation ids");
  check_cmd->add_flag("--lin", lin, "decide linearisability");
  check_cmd->add_option("--mode", check_opts.mode, "fresh-ids|reuse");

  CLI::App* replay_cmd = app.add_subcommand("replay", "replay one schedule");
  replay_cmd->add_option("scenario", replay_opts.scenario, "scenario file or canned name")
      ->required();
  replay_cmd->add_option("--schedule", schedule_text, "comma-separated pids");
  replay_cmd->add_option("--mode", replay_opts.mode, "fresh-ids|reuse");

  CLI::App* correlate_cmd =
      app.add_subcommand("correlate", "lin x guarantee contingency over all interleavings");
  correlate_cmd->add_option("scenario", correlate_opts.scenario, "scenario file or canned name")
      ->required();
  correlate_cmd->add_option("--mode", correlate_opts.mode, "fresh-ids|reuse");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (explore_cmd->parsed()) return cmd_explore(explore_opts, out_path, out);
    if (check_cmd->parsed()) return cmd_check(check_opts, guar_ids, rely_ids, lin, out);
    if (replay_cmd->parsed()) return cmd_replay(replay_opts, schedule_text, out);
    if (correlate_cmd->parsed()) return cmd_correlate(correlate_opts, out);
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const TraceCapExceeded& e) {
    err << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace rglin
