#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rglin/rgcheck.hpp"
#include "rglin/scenario_io.hpp"
#include "rglin/treiber.hpp"

using namespace rglin;
using namespace rglin::treiber;
using test::vals;

TEST_CASE("push0 prepends") {
  CHECK(push0({}, Value::elem('A')) == vals("A"));
  CHECK(push0(vals("ABC"), Value::elem('D')) == vals("DABC"));
  CHECK(push0(vals("DABC"), Value::elem('E')) == vals("EDABC"));
  CHECK_THROWS_AS((void)push0(vals("A"), Value::null()), std::invalid_argument);
}

TEST_CASE("pop0 takes the head, null on empty") {
  auto [rest, res] = pop0(vals("DABC"));
  CHECK(rest == vals("ABC"));
  CHECK(res.x == Value::elem('D'));

  auto [rest_empty, res_empty] = pop0({});
  CHECK(rest_empty.empty());
  CHECK(res_empty.x.is_null());

  auto [rest_one, res_one] = pop0(vals("A"));
  CHECK(rest_one.empty());
  CHECK(res_one.x == Value::elem('A'));
}

TEST_CASE("guar-pop1 accepts exactly tail-or-stutter with the flag flip") {
  // a double removal in one step must be rejected
  CHECK_FALSE(guar_pop1({vals("DABC"), false}, {vals("BC"), true}));
  CHECK(*guar_pop1_failing({vals("DABC"), false}, {vals("BC"), true}) == "list' = tl list");
  CHECK(guar_pop1({vals("ABC"), false}, {vals("BC"), true}));
  CHECK(guar_pop1({vals("ABC"), true}, {vals("ABC"), true}));
  // flag must flip on a change and stay on a stutter
  CHECK_FALSE(guar_pop1({vals("ABC"), true}, {vals("BC"), true}));
  CHECK_FALSE(guar_pop1({vals("ABC"), false}, {vals("ABC"), true}));
}

TEST_CASE("guar-push1 accepts exactly prepend-of-v or stutter") {
  CHECK(guar_push1({vals("ABC"), false}, {vals("DABC"), true}, Value::elem('D')));
  CHECK_FALSE(guar_push1({vals("ABC"), false}, {vals("DEABC"), true}, Value::elem('D')));
  CHECK(guar_push1({vals("A"), true}, {vals("A"), true}, Value::elem('D')));
  CHECK_FALSE(guar_push1({vals("ABC"), false}, {vals("EABC"), true}, Value::elem('D')));
}

TEST_CASE("guarantees are transitive and reflexive on stutters") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> len(0, 4);
  std::uniform_int_distribution<int> sym(0, 3);
  std::uniform_int_distribution<int> flagd(0, 1);
  auto random_state = [&] {
    StackSigma1 s;
    int n = len(rng);
    for (int i = 0; i < n; ++i) s.list.push_back(Value::elem(static_cast<char>('A' + sym(rng))));
    s.flag = flagd(rng) == 1;
    return s;
  };
  // successor biased towards states the relations can actually chain to
  auto step_from = [&](const StackSigma1& s) {
    int kind = sym(rng);
    if (kind == 0 || s.list.empty() || s.flag) return s;  // stutter
    StackSigma1 nxt;
    nxt.list.assign(s.list.begin() + 1, s.list.end());
    nxt.flag = true;
    return nxt;
  };
  int chained = 0;
  for (int it = 0; it < 20000; ++it) {
    StackSigma1 a = random_state();
    StackSigma1 b = it % 2 ? random_state() : step_from(a);
    StackSigma1 c = it % 2 ? random_state() : step_from(b);
    if (guar_pop1(a, b) && guar_pop1(b, c)) {
      ++chained;
      CHECK(guar_pop1(a, c));
    }
    Value v = Value::elem(static_cast<char>('A' + sym(rng)));
    if (guar_push1(a, b, v) && guar_push1(b, c, v)) CHECK(guar_push1(a, c, v));
    CHECK(guar_pop1(a, a));  // reflexive on unchanged flag
    CHECK(guar_push1(a, a, v));
  }
  CHECK(chained > 1000);  // the sample actually exercised composition
}

TEST_CASE("abstraction walks the head chain and reports corruption") {
  CHECK(abstraction(make_store({}, AllocMode::fresh_ids)).empty());
  CHECK(abstraction(make_store(vals("DABC"), AllocMode::fresh_ids)) == vals("DABC"));

  NodeStore cyclic = make_store(vals("AB"), AllocMode::reuse);
  cyclic.nodes.at(1).next = 0;  // B points back at A
  CHECK_THROWS_AS((void)abstraction(cyclic), StoreCorruption);
  CHECK_FALSE(try_abstraction(cyclic).has_value());
}

TEST_CASE("solo push(D) drives the store from [A,B,C] to [D,A,B,C]") {
  Scenario sc;
  sc.structure = Structure::treiber;
  sc.initial = vals("ABC");
  sc.processes = {{OpSpec{OpKind::push, Value::elem('D')}}};
  std::vector<Trace> traces = explore(sc);
  REQUIRE(traces.size() == 1);
  CHECK(abstraction(stack_of(traces[0].final_state())) == vals("DABC"));
  CHECK(traces[0].final_state().procs[0].phase == Phase::returned);
}

TEST_CASE("solo pop from the empty stack returns null without reaching a CAS") {
  Scenario sc;
  sc.structure = Structure::treiber;
  sc.processes = {{OpSpec{OpKind::pop, std::nullopt}}};
  std::vector<Trace> traces = explore(sc);
  REQUIRE(traces.size() == 1);
  const Trace& t = traces[0];
  CHECK(t.final_state().procs[0].result == Value::null());
  for (std::size_t i = 0; i < t.step_count(); ++i) CHECK(t.label(i) != "pop/cas");
}

TEST_CASE("a failed pop CAS re-reads the head and retries") {
  Canned c = *canned_scenario("fig2b");
  Trace t = replay(c.scenario, *c.schedule);
  CHECK(t.label(8) == "pop/cas");
  CHECK(t.post(8).procs[0].nat_local("cas") == std::uint32_t{0});
  CHECK(t.label(9) == "pop/read-head");
  CHECK(t.final_state().procs[0].result == Value::elem('D'));
  CHECK(abstraction(stack_of(t.final_state())) == vals("ABC"));
}

TEST_CASE("unguarded pop loses a concurrent push yet is correct when solo") {
  Canned c = *canned_scenario("fig2a");
  Trace t = replay(c.scenario, *c.schedule);
  CHECK(abstraction(stack_of(t.final_state())) == vals("BC"));
  CHECK(t.final_state().procs[0].result == Value::elem('A'));
  Verdict v = check_guarantee(t, 0, relation_by_name("guar-pop1"));
  REQUIRE_FALSE(v.holds);
  CHECK(t.label(v.witness->first) == "pop/write-head");

  Scenario solo;
  solo.structure = Structure::treiber_unguarded;
  solo.initial = vals("ABC");
  solo.processes = {{OpSpec{OpKind::pop, std::nullopt}}};
  std::vector<Trace> traces = explore(solo);
  REQUIRE(traces.size() == 1);
  CHECK(abstraction(stack_of(traces[0].final_state())) == vals("BC"));
  CHECK(traces[0].final_state().procs[0].result == Value::elem('A'));
}

TEST_CASE("possible values of list over an operation's span") {
  Scenario solo;
  solo.structure = Structure::treiber;
  solo.initial = vals("A");
  solo.processes = {{OpSpec{OpKind::push, Value::elem('B')}}};
  Trace one_step = replay(solo, Schedule{0});  // allocation only: list stays [A]
  auto pv = possible_values(one_step, 0, "list");
  CHECK(pv == std::set<AbstractStack>{vals("A")});

  Canned c = *canned_scenario("fig2b");
  Trace t = replay(c.scenario, *c.schedule);
  auto push_span = possible_values(t, 1, "list");
  CHECK(push_span.count(vals("DABC")) == 1);
  // post-push1: some value of list during the push had v at its head
  bool head_is_v = false;
  for (const auto& l : push_span) head_is_v = head_is_v || (!l.empty() && l[0] == Value::elem('D'));
  CHECK(head_is_v);

  CHECK_THROWS_AS((void)possible_values(t, 9, "list"), std::invalid_argument);
  CHECK_THROWS_AS((void)possible_values(t, 0, "head"), std::invalid_argument);
}

TEST_CASE("fresh-ids exhaustive push||pop: guarantees hold on every run, abstraction total") {
  Canned c = *canned_scenario("treiber");
  const RelationSpec& gpush = relation_by_name("guar-push1");
  const RelationSpec& gpop = relation_by_name("guar-pop1");
  std::vector<Trace> traces = explore(c.scenario);
  CHECK(traces.size() > 100);
  for (const Trace& t : traces) {
    for (const SystemState& s : t.states) CHECK(try_abstraction(stack_of(s)).has_value());
    for (Pid pid = 0; pid < 2; ++pid) {
      CHECK(check_guarantee(t, pid, gpush).holds);
      CHECK(check_guarantee(t, pid, gpop).holds);
    }
  }
}

TEST_CASE("solo concrete executions match the atomic operations") {
  for (const char* init : {"", "A", "BA", "CAB"}) {
    Scenario sc;
    sc.structure = Structure::treiber;
    sc.initial = vals(init);

    sc.processes = {{OpSpec{OpKind::push, Value::elem('D')}}};
    std::vector<Trace> pushed = explore(sc);
    REQUIRE(pushed.size() == 1);
    CHECK(abstraction(stack_of(pushed[0].final_state())) == push0(vals(init), Value::elem('D')));

    sc.processes = {{OpSpec{OpKind::pop, std::nullopt}}};
    std::vector<Trace> popped = explore(sc);
    REQUIRE(popped.size() == 1);
    auto [expect_rest, expect_res] = pop0(vals(init));
    CHECK(abstraction(stack_of(popped[0].final_state())) == expect_rest);
    CHECK(popped[0].final_state().procs[0].result == expect_res.x);
  }
}

TEST_CASE("flag steps record the head each effect landed on") {
  Canned b = *canned_scenario("fig2b");
  Trace tb = replay(b.scenario, *b.schedule);
  auto reports = flag_step_reports(tb);
  REQUIRE(reports.size() == 2);
  CHECK(reports[0].pid == 1);  // the push commits first
  CHECK(reports[0].head == Value::elem('A'));
  CHECK(reports[1].pid == 0);
  CHECK(reports[1].head == Value::elem('D'));  // the pop removed D

  // the unguarded race: the write-head step removed D's stack position
  // while the pop went on to return the stale A
  Canned a = *canned_scenario("fig2a");
  Trace ta = replay(a.scenario, *a.schedule);
  auto race = flag_step_reports(ta);
  REQUIRE(race.size() == 2);
  CHECK(race[1].pid == 0);
  CHECK(race[1].head == Value::elem('D'));
  CHECK(ta.final_state().procs[0].result == Value::elem('A'));
}

TEST_CASE("reuse mode recycles ids LIFO; fresh mode never does") {
  NodeStore reuse = make_store(vals("AB"), AllocMode::reuse);
  reuse.release(0);
  reuse.release(1);
  CHECK(reuse.allocate(Value::elem('C')) == 1);
  CHECK(reuse.allocate(Value::elem('D')) == 0);
  CHECK(reuse.allocate(Value::elem('E')) == 2);  // freelist exhausted

  NodeStore fresh = make_store(vals("AB"), AllocMode::fresh_ids);
  fresh.release(0);
  CHECK(fresh.allocate(Value::elem('C')) == 2);
}
