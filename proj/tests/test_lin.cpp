#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "oracles.hpp"
#include "rglin/linearise.hpp"
#include "rglin/render.hpp"
#include "rglin/scenario_io.hpp"

using namespace rglin;
using test::vals;

namespace {

History history_of(const Canned& c, const Schedule& sch) {
  Model m = build_model(c.scenario);
  return project_history(replay(c.scenario, sch), m);
}

// a fully overlapping complete history of k pushes (all invoked up front,
// all responses at the end)
History overlapping_pushes(std::size_t k) {
  History h;
  h.spec = SpecKind::stack;
  for (std::size_t i = 0; i < k; ++i)
    h.events.push_back({Event::Kind::invocation, static_cast<Pid>(i), 0, OpKind::push,
                        Value::elem(static_cast<char>('A' + i)), std::nullopt});
  for (std::size_t i = 0; i < k; ++i)
    h.events.push_back(
        {Event::Kind::response, static_cast<Pid>(i), 0, OpKind::push, std::nullopt, std::nullopt});
  h.alphabet = vals("ABCD");
  return h;
}

}  // namespace

TEST_CASE("project-history: a solo push yields invocation then response") {
  Scenario sc;
  sc.structure = Structure::treiber;
  sc.processes = {{OpSpec{OpKind::push, Value::elem('D')}}};
  Model m = build_model(sc);
  History h = project_history(explore(sc)[0], m);
  REQUIRE(h.events.size() == 2);
  CHECK(h.events[0].kind == Event::Kind::invocation);
  CHECK(h.events[0].arg == Value::elem('D'));
  CHECK(h.events[1].kind == Event::Kind::response);
  CHECK(h.final_abstraction == vals("D"));
}

TEST_CASE("project-history: fig2b orders the push response before the pop's") {
  Canned c = *canned_scenario("fig2b");
  History h = history_of(c, *c.schedule);
  std::size_t push_res = 99, pop_res = 99;
  for (std::size_t i = 0; i < h.events.size(); ++i) {
    if (h.events[i].kind != Event::Kind::response) continue;
    (h.events[i].op == OpKind::push ? push_res : pop_res) = i;
  }
  CHECK(push_res < pop_res);
}

TEST_CASE("project-history: a spinning deq stays a pending invocation") {
  Scenario sc;
  sc.structure = Structure::hwq;
  sc.capacity = 2;
  sc.processes = {{OpSpec{OpKind::deq, std::nullopt}}};
  Model m = build_model(sc);
  std::vector<Trace> traces = explore(sc);
  History h = project_history(traces[0], m);
  auto ops = h.operations();
  REQUIRE(ops.size() == 1);
  CHECK_FALSE(ops[0].completed());
}

TEST_CASE("completions: complete history maps to itself") {
  Canned c = *canned_scenario("fig2b");
  History h = history_of(c, *c.schedule);
  auto cs = completions(h);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].events == h.events);
}

TEST_CASE("completions: one pending deq with alphabet {A} branches twice") {
  History h;
  h.spec = SpecKind::queue;
  h.initial = vals("A");
  h.alphabet = vals("A");
  h.events.push_back({Event::Kind::invocation, 0, 0, OpKind::deq, std::nullopt, std::nullopt});
  auto cs = completions(h);
  REQUIRE(cs.size() == 2);  // dropped, completed with A
  CHECK(cs[0].events.empty());
  REQUIRE(cs[1].events.size() == 2);
  CHECK(cs[1].events[1].result == Value::elem('A'));
}

TEST_CASE("completions: two pending operations branch as a cross product") {
  History h;
  h.spec = SpecKind::queue;
  h.alphabet = vals("AB");
  h.events.push_back({Event::Kind::invocation, 0, 0, OpKind::deq, std::nullopt, std::nullopt});
  h.events.push_back(
      {Event::Kind::invocation, 1, 0, OpKind::enq, Value::elem('A'), std::nullopt});
  // deq: drop | A | B  (3), enq: drop | void response (2)
  CHECK(completions(h).size() == 6);
}

TEST_CASE("is-linearisable: the fig2a race is not linearisable") {
  Canned c = *canned_scenario("fig2a");
  History h = history_of(c, *c.schedule);
  LinResult r = is_linearisable(h);
  CHECK_FALSE(r.linearisable);
}

TEST_CASE("is-linearisable: the hwq-paper trace linearises as enq(B);enq(A);deq->B") {
  Canned c = *canned_scenario("hwq-paper");
  History h = history_of(c, *c.schedule);
  LinResult r = is_linearisable(h);
  REQUIRE(r.linearisable);
  REQUIRE(r.witness.has_value());
  CHECK(render_witness(*r.witness) == "enq(B);enq(A);deq->B");
  CHECK(final_state_of(*r.witness) == vals("A"));
  CHECK(validate_witness(h, *r.witness));
}

TEST_CASE("is-linearisable: the empty history is linearisable") {
  History h;
  h.spec = SpecKind::stack;
  h.initial = vals("AB");
  h.final_abstraction = vals("AB");
  LinResult r = is_linearisable(h);
  REQUIRE(r.linearisable);
  CHECK(r.witness->order.empty());
  CHECK(final_state_of(*r.witness) == vals("AB"));
}

TEST_CASE("witnesses are sound on every linearisable explored trace") {
  for (const char* name : {"fig2b", "treiber", "hwq"}) {
    Canned c = *canned_scenario(name);
    Model m = build_model(c.scenario);
    std::size_t positives = 0;
    explore_each(c.scenario, [&](const Trace& t, std::size_t) {
      History h = project_history(t, m);
      LinResult r = is_linearisable(h);
      if (r.linearisable) {
        ++positives;
        CHECK(validate_witness(h, *r.witness));
      }
    });
    CHECK(positives > 0);
  }
}

TEST_CASE("sequential traces are always linearisable") {
  Scenario sc;
  sc.structure = Structure::hwq;
  sc.capacity = 4;
  sc.processes = {{OpSpec{OpKind::enq, Value::elem('A')}, OpSpec{OpKind::enq, Value::elem('B')},
                   OpSpec{OpKind::deq, std::nullopt}}};
  Model m = build_model(sc);
  CHECK(is_linearisable(project_history(explore(sc)[0], m)).linearisable);

  Scenario st;
  st.structure = Structure::treiber;
  st.initial = vals("C");
  st.processes = {{OpSpec{OpKind::push, Value::elem('A')}, OpSpec{OpKind::pop, std::nullopt},
                   OpSpec{OpKind::pop, std::nullopt}}};
  Model mt = build_model(st);
  CHECK(is_linearisable(project_history(explore(st)[0], mt)).linearisable);
}

TEST_CASE("final-state-of replays the witness to its last abstract state") {
  Scenario sc;
  sc.structure = Structure::treiber;
  sc.initial = vals("ABC");
  sc.processes = {{OpSpec{OpKind::push, Value::elem('D')}}};
  Model m = build_model(sc);
  LinResult r = is_linearisable(project_history(explore(sc)[0], m));
  REQUIRE(r.linearisable);
  CHECK(final_state_of(*r.witness) == vals("DABC"));
}

TEST_CASE("the enumerator considers k! orders for k overlapping operations") {
  CHECK(count_order_candidates(overlapping_pushes(1)) == 1);
  CHECK(count_order_candidates(overlapping_pushes(2)) == 2);
  CHECK(count_order_candidates(overlapping_pushes(3)) == 6);
  CHECK(count_order_candidates(overlapping_pushes(4)) == 24);
}

TEST_CASE("real-time order prunes the candidate count") {
  History h = overlapping_pushes(2);
  // make P0's push precede P1's entirely: inv0 res0 inv1 res1
  h.events = {h.events[0], h.events[2], h.events[1], h.events[3]};
  // events: inv P0, res P0, inv P1, res P1
  h.events[1].kind = Event::Kind::response;
  CHECK(count_order_candidates(h) == 1);
}

TEST_CASE("the decision is deterministic across repeated and concurrent runs") {
  Canned c = *canned_scenario("hwq-paper");
  History h = history_of(c, *c.schedule);
  LinResult first = is_linearisable(h);
  std::vector<int> answers(4, -1);
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w)
    workers.emplace_back([&, w] { answers[w] = is_linearisable(h).linearisable ? 1 : 0; });
  for (auto& th : workers) th.join();
  for (int a : answers) CHECK(a == (first.linearisable ? 1 : 0));
}
