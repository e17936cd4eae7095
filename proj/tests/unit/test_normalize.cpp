// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "generators.hpp"
#include "tmkit/dsl.hpp"
#include "tmkit/normalize.hpp"
#include "tmkit/sim.hpp"
#include "tmkit/validate.hpp"

using namespace tmkit;
using testing::corpus_path;
using testing::read_text;

namespace {

std::size_t elided_count(const StaticModel& m) {
  ModelIndex index(m);
  std::size_t n = 0;
  for (const auto& e : m.edges) n += is_elided_boundary_flow(e, index) ? 1 : 0;
  return n;
}

}  // namespace

TEST_CASE("normalizing a strict-valid model changes nothing") {
  for (const char* name : {"underpants.tm", "order.tm", "carservice.tm", "letter.tm", "brutus.tm"}) {
    CAPTURE(name);
    const StaticModel m = parse(read_text(corpus_path(name))).model;
    CHECK(normalize(m) == m);
  }
}

TEST_CASE("one process-to-process boundary flow gains four nodes and a net four edges") {
  ModelBuilder b("M", Mode::Simplified);
  const ThimacId s = b.add_thimac("S");
  const ThimacId t = b.add_thimac("T");
  const ActionId c = b.add_action(s, ActionKind::Create, "c");
  const ActionId p = b.add_action(s, ActionKind::Process, "p", "order");
  const ActionId q = b.add_action(t, ActionKind::Process, "q");
  b.add_edge(c, p, EdgeKind::Flow);
  b.add_edge(p, q, EdgeKind::Flow, 4);
  const StaticModel m = std::move(b).build();
  const StaticModel n = normalize(m);

  CHECK(n.mode == Mode::Strict);
  CHECK(n.actions.size() == m.actions.size() + 4);
  CHECK(n.edges.size() == m.edges.size() + 4);
  CHECK(validate_static(n).empty());

  ModelIndex index(n);
  const ActionNode* rel = index.action(ActionId{"S.p_release"});
  const ActionNode* out = index.action(ActionId{"S.p_out"});
  const ActionNode* in = index.action(ActionId{"T.p_in"});
  const ActionNode* rcv = index.action(ActionId{"T.p_receive"});
  REQUIRE(rel);
  REQUIRE(out);
  REQUIRE(in);
  REQUIRE(rcv);
  CHECK(rel->kind == ActionKind::Release);
  CHECK(rel->label == "order (release)");
  CHECK(in->kind == ActionKind::Transfer);
  CHECK(rcv->kind == ActionKind::Receive);

  // the numbering marker moves to the boundary pair
  bool marked = false;
  for (const auto& e : n.edges) {
    if (e.src == out->id && e.dst == in->id) marked = e.marker == 4;
  }
  CHECK(marked);
}

TEST_CASE("generated names avoid collisions") {
  ModelBuilder b("M", Mode::Simplified);
  const ThimacId s = b.add_thimac("S");
  const ThimacId t = b.add_thimac("T");
  const ActionId p = b.add_action(s, ActionKind::Process, "p");
  b.add_action(s, ActionKind::Release, "p_release");
  const ActionId q = b.add_action(t, ActionKind::Process, "q");
  const ActionId r = b.add_action(t, ActionKind::Process, "r");
  b.add_edge(p, q, EdgeKind::Flow);
  b.add_edge(p, r, EdgeKind::Flow);
  const StaticModel n = normalize(std::move(b).build());
  ModelIndex index(n);
  CHECK(index.action(ActionId{"S.p_release_2"}) != nullptr);
  CHECK(index.action(ActionId{"S.p_release_3"}) != nullptr);
  CHECK(index.action(ActionId{"T.p_in_2"}) != nullptr);
  CHECK(validate_static(n).error_count() == 0);
}

TEST_CASE("simplified customer-service subdiagram normalizes to a clean strict model") {
  const StaticModel m = parse(read_text(corpus_path("customer_service_simplified.tm"))).model;
  REQUIRE(m.mode == Mode::Simplified);
  CHECK(validate_static(m).error_count() == 0);
  CHECK(validate_static(m, RuleTable::strict()).error_count() == 5);

  // Five elided flows: 11 actions + 4*5, 10 edges + 4*5.
  CHECK(m.actions.size() == 11);
  CHECK(m.edges.size() == 10);
  const StaticModel n = normalize(m);
  CHECK(n.actions.size() == 31);
  CHECK(n.edges.size() == 30);
  CHECK(validate_static(n).empty());
  CHECK(normalize(n) == n);
}

TEST_CASE("inputs failing simplified validation are refused") {
  ModelBuilder b("M", Mode::Simplified);
  const ThimacId s = b.add_thimac("S");
  const ThimacId t = b.add_thimac("T");
  const ActionId rel = b.add_action(s, ActionKind::Release, "rel");
  const ActionId q = b.add_action(t, ActionKind::Process, "q");
  b.add_edge(rel, q, EdgeKind::Flow);  // release cannot cross directly
  try {
    normalize(std::move(b).build());
    FAIL("expected INVALID_INPUT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
  }

  ModelBuilder tb("M", Mode::Simplified);
  const ThimacId u = tb.add_thimac("U");
  const ActionId p1 = tb.add_action(u, ActionKind::Process, "p1");
  const ActionId p2 = tb.add_action(u, ActionKind::Process, "p2");
  tb.add_edge(p1, p2, EdgeKind::Trigger);
  CHECK_THROWS_AS(normalize(std::move(tb).build()), Error);
}

TEST_CASE("normalize is sound, idempotent and count-exact on random simplified models") {
  testing::Rng rng(20240611);
  for (int i = 0; i < 300; ++i) {
    const StaticModel m = testing::random_model(rng);
    REQUIRE(validate_static(m, RuleTable::simplified()).error_count() == 0);
    const std::size_t k = elided_count(m);
    const StaticModel n = normalize(m);
    CHECK(validate_static(n, RuleTable::strict()).error_count() == 0);
    CHECK(normalize(n) == n);
    CHECK(n.actions.size() == m.actions.size() + 4 * k);
    CHECK(n.edges.size() == m.edges.size() + 4 * k);
    CHECK(check_integrity(n).empty());
  }
}

TEST_CASE("flow paths from the left hole walk all numbered stations") {
  const StaticModel m = parse(read_text(corpus_path("underpants.tm"))).model;
  const auto paths = flow_paths(m, ActionId{"Underpants.LeftHole.hole"});
  REQUIRE(paths.size() == 1);
  const auto& path = paths.front();
  CHECK(path.size() == 28);
  CHECK(path.front().str() == "Underpants.LeftHole.hole");
  CHECK(path.back().str() == "Trousers.RightLeg.tout");

  // Every marked edge lies on the path, in marker order.
  std::vector<int> seen;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    for (const auto& e : m.edges) {
      if (e.src == path[i] && e.dst == path[i + 1] && e.marker) seen.push_back(*e.marker);
    }
  }
  CHECK(seen == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("flow paths edge cases") {
  const StaticModel m = parse(read_text(corpus_path("underpants.tm"))).model;
  const ActionId last{"Trousers.RightLeg.tout"};
  CHECK(flow_paths(m, last) == std::vector<std::vector<ActionId>>{{last}});
  try {
    flow_paths(m, ActionId{"No.such"});
    FAIL("expected DANGLING");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Dangling);
  }

  // two release branches from one process: V3 makes the model invalid
  ModelBuilder b("M");
  const ThimacId t = b.add_thimac("T");
  const ActionId p = b.add_action(t, ActionKind::Process, "p");
  const ActionId r = b.add_action(t, ActionKind::Release, "r");
  const ActionId o1 = b.add_action(t, ActionKind::Transfer, "o1");
  const ActionId o2 = b.add_action(t, ActionKind::Transfer, "o2");
  b.add_edge(p, r, EdgeKind::Flow);
  b.add_edge(r, o1, EdgeKind::Flow);
  b.add_edge(r, o2, EdgeKind::Flow);
  try {
    flow_paths(std::move(b).build(), p);
    FAIL("expected INVALID_INPUT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInput);
  }
}

TEST_CASE("flow paths enumerate branches in lexicographic order") {
  ModelBuilder b("M");
  const ThimacId t = b.add_thimac("T");
  const ActionId c = b.add_action(t, ActionKind::Create, "c");
  const ActionId p = b.add_action(t, ActionKind::Process, "p");
  const ActionId r = b.add_action(t, ActionKind::Release, "r");
  b.add_edge(c, r, EdgeKind::Flow);
  b.add_edge(c, p, EdgeKind::Flow);
  const auto paths = flow_paths(std::move(b).build(), c);
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == std::vector<ActionId>{c, p});
  CHECK(paths[1] == std::vector<ActionId>{c, r});
}

TEST_CASE("normalizing a bundle keeps its regions connected") {
  const ModelBundle b = parse(read_text(corpus_path("customer_service_simplified.tm")));
  const ModelBundle n = normalize(b);
  CHECK(n.model == normalize(b.model));
  REQUIRE(n.events.size() == b.events.size());
  for (std::size_t i = 0; i < n.events.size(); ++i) {
    CAPTURE(n.events[i].id.str());
    CHECK(region_components(n.model, n.events[i].region).size() == 1);
    CHECK(n.events[i].region.actions.size() >= b.events[i].region.actions.size());
  }
  // E1 held both ends of the order flow, so it gains the four gates.
  CHECK(n.events[0].region.actions.size() == b.events[0].region.actions.size() + 4);
  CHECK(n.behavior == b.behavior);
  CHECK(parse(print(n)) == n);
  const Trace t = simulate(n);
  CHECK(t.steps.size() == 7);
  CHECK(t.steps.back().event.str() == "E7");
}
