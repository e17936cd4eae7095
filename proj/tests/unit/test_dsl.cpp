// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "generators.hpp"
#include "tmkit/dsl.hpp"
#include "tmkit/validate.hpp"

using namespace tmkit;
using testing::corpus_path;
using testing::read_text;

namespace {

Error parse_error(std::string_view text) {
  try {
    parse(text, {.file = "t.tm"});
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected a parse failure");
  return Error(ErrorCode::Io, "unreachable");
}

}  // namespace

TEST_CASE("minimal model parses") {
  const ModelBundle b = parse("model M { thimac T { create c; } }");
  CHECK(b.model.name == "M");
  CHECK(b.model.mode == Mode::Strict);
  REQUIRE(b.model.actions.size() == 1);
  CHECK(b.model.actions[0].id.str() == "T.c");
  CHECK(b.events.empty());
  CHECK(b.behavior.edges.empty());
}

TEST_CASE("labels, markers, mode keyword and nested thimacs") {
  const ModelBundle b = parse(R"(model M simplified {
  thimac A { process p "say \"hi\""; thimac B { create c; } }
  thimac C { process q; }
  flow A.B.c -> A.p @3;
  flow A.p -> C.q;
})");
  CHECK(b.model.mode == Mode::Simplified);
  CHECK(b.model.actions[0].label == std::optional<std::string>("say \"hi\""));
  CHECK(b.model.edges[0].marker == 3);
  CHECK(b.model.thimacs[1].id.str() == "A.B");
  CHECK(validate_static(b.model).error_count() == 0);
}

TEST_CASE("missing edge target reports the expected token and its column") {
  const Error e = parse_error("model M {\n  thimac a { create x; }\n  flow a.x -> ;\n}");
  CHECK(e.code() == ErrorCode::Parse);
  REQUIRE(e.span());
  CHECK(e.span()->file == "t.tm");
  CHECK(e.span()->line == 3);
  CHECK(e.span()->column == 15);
  CHECK(e.detail().find("expected") != std::string::npos);
  CHECK(std::string(e.what()).starts_with("t.tm:3:15: PARSE:"));
}

TEST_CASE("duplicates and undefined references carry spans") {
  Error dup = parse_error("model M {\n thimac T { create c; process c; }\n}");
  CHECK(dup.code() == ErrorCode::DupId);
  REQUIRE(dup.span());
  CHECK(dup.span()->line == 2);
  CHECK(dup.span()->column == 31);
  CHECK(dup.detail().find("2:20") != std::string::npos);

  Error undef = parse_error("model M {\n thimac T { create c; }\n flow T.c -> T.d;\n}");
  CHECK(undef.code() == ErrorCode::Undef);
  CHECK(undef.span()->line == 3);
  CHECK(undef.span()->column == 14);

  Error region = parse_error(
      "model M { thimac T { create c; } }\nevents { event E1 { region: T.zz; } }");
  CHECK(region.code() == ErrorCode::Undef);
  CHECK(region.span()->line == 2);

  Error beh = parse_error(
      "model M { thimac T { create c; } }\nevents { event E1 { region: T.c; } }\n"
      "behavior { E1 -> E9; }");
  CHECK(beh.code() == ErrorCode::Undef);
  CHECK(beh.span()->line == 3);
  CHECK(beh.span()->column == 18);

  Error dupev = parse_error(
      "model M { thimac T { create c; } }\n"
      "events { event E1 { region: T.c; } event E1 { region: T.c; } }");
  CHECK(dupev.code() == ErrorCode::DupId);
}

TEST_CASE("disconnected regions are refused unless allowed") {
  const std::string text =
      "model M { thimac T { create a; create b; } }\n"
      "events { event E1 { region: T.a, T.b; } }";
  try {
    parse(text);
    FAIL("expected REGION_DISCONNECTED");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RegionDisconnected);
    CHECK(e.span()->line == 2);
  }
  const ModelBundle b = parse(text, {.allow_disconnected_regions = true});
  CHECK(b.events[0].region.actions.size() == 2);
}

TEST_CASE("repeat bounds must be positive") {
  const std::string head =
      "model M { thimac T { create a; } }\nevents { event E1 { region: T.a; } }\n";
  CHECK(parse(head + "behavior { E1 -> E1 [repeat <= 2]; }").behavior.edges[0].repeat == 2);
  CHECK(parse_error(head + "behavior { E1 -> E1 [repeat <= 0]; }").code() == ErrorCode::Parse);
}

TEST_CASE("columns count code points and comments are skipped") {
  const Error e = parse_error("// é comment\nmodel M { thimac \"é\" }");
  CHECK(e.span()->line == 2);
  CHECK(e.span()->column == 18);
  const Error e2 = parse_error("model M { thimac T { create c \"é\" ; } } }");
  CHECK(e2.span()->column == 41);
}

TEST_CASE("lexer errors are parse errors") {
  CHECK(parse_error("model M { thimac T { create c \"open").code() == ErrorCode::Parse);
  CHECK(parse_error("model M { thimac T { create c; } } $").code() == ErrorCode::Parse);
  CHECK(parse_error("").code() == ErrorCode::Parse);
  CHECK(parse_error("model M { thimac T { explode c; } }").code() == ErrorCode::Parse);
  CHECK(parse_error("model M { flow T.c -> T.d @x; }").code() == ErrorCode::Parse);
}

TEST_CASE("brutus built programmatically matches the text") {
  ModelBuilder b("Brutus");
  const ThimacId brutus = b.add_thimac("Brutus");
  const ThimacId stabbing = b.add_thimac("stabbing");
  const ThimacId caesar = b.add_thimac("Caesar");
  const ActionId who = b.add_action(brutus, ActionKind::Create, "brutus", "Brutus");
  const ActionId act = b.add_action(brutus, ActionKind::Process, "act");
  const ActionId stab = b.add_action(stabbing, ActionKind::Create, "stab");
  const ActionId violent = b.add_action(stabbing, ActionKind::Process, "violent", "violently");
  const ActionId rel = b.add_action(stabbing, ActionKind::Release, "rel");
  const ActionId out = b.add_action(stabbing, ActionKind::Transfer, "out");
  const ActionId in = b.add_action(caesar, ActionKind::Transfer, "in");
  const ActionId rcv = b.add_action(caesar, ActionKind::Receive, "rcv");
  const ActionId stabbed = b.add_action(caesar, ActionKind::Process, "stabbed");
  b.add_edge(who, act, EdgeKind::Flow);
  b.add_edge(act, stab, EdgeKind::Trigger);
  b.add_edge(stab, violent, EdgeKind::Flow);
  b.add_edge(violent, rel, EdgeKind::Flow);
  b.add_edge(rel, out, EdgeKind::Flow);
  b.add_edge(out, in, EdgeKind::Flow);
  b.add_edge(in, rcv, EdgeKind::Flow);
  b.add_edge(rcv, stabbed, EdgeKind::Flow);
  const StaticModel built = std::move(b).build();

  const ModelBundle parsed = parse(read_text(corpus_path("brutus.tm")));
  CHECK(parsed.model == built);
  CHECK(validate_static(built).empty());
  REQUIRE(parsed.events.size() == 2);
  CHECK(parsed.events[0].time == std::optional<std::string>("t1"));
  CHECK(parsed.events[1].region.actions.size() == 5);
}

TEST_CASE("corpus files round-trip through the printer") {
  for (const char* name : {"underpants.tm", "order.tm", "carservice.tm", "letter.tm",
                           "brutus.tm", "customer_service_simplified.tm"}) {
    CAPTURE(name);
    const ModelBundle a = parse(read_text(corpus_path(name)));
    const std::string text = print(a);
    const ModelBundle b = parse(text);
    CHECK(a == b);
    CHECK(print(b) == text);
  }
}

TEST_CASE("random bundles round-trip through the printer") {
  testing::Rng rng(99);
  for (int i = 0; i < 300; ++i) {
    const ModelBundle a = testing::random_bundle(rng);
    const std::string text = print(a);
    ModelBundle b;
    try {
      b = parse(text);
    } catch (const Error& e) {
      FAIL_CHECK(e.what() << "\n" << text);
      continue;
    }
    CHECK(a == b);
    CHECK(print(b) == text);
  }
}

TEST_CASE("mutated sources fail with a located error or parse") {
  testing::Rng rng(5);
  const std::vector<std::string> seeds = {read_text(corpus_path("order.tm")),
                                          read_text(corpus_path("brutus.tm")),
                                          read_text(corpus_path("letter.tm"))};
  static const std::string junk = "{};.->@[]:\"x1 \n";
  for (int i = 0; i < 500; ++i) {
    std::string text = rng.pick(seeds);
    const int edits = rng.between(1, 4);
    for (int k = 0; k < edits; ++k) {
      const auto at = static_cast<std::size_t>(rng.between(0, static_cast<int>(text.size()) - 1));
      if (rng.chance(0.5)) {
        text.erase(at, static_cast<std::size_t>(rng.between(1, 6)));
      } else {
        text.insert(at, 1, junk[static_cast<std::size_t>(rng.between(0, static_cast<int>(junk.size()) - 1))]);
      }
    }
    try {
      parse(text, {.allow_disconnected_regions = rng.chance(0.5)});
    } catch (const Error& e) {
      REQUIRE(e.span());
      int lines = 1;
      for (char c : text) lines += c == '\n' ? 1 : 0;
      CHECK(e.span()->line >= 1);
      CHECK(e.span()->line <= lines);
      CHECK(e.span()->column >= 1);
    }
  }
}
