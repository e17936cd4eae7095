// SPDX-License-Identifier: Apache-2.0
//
// End-to-end tests of the tmkit executable: exit codes and output streams.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string corpus(const std::string& name) { return std::string(TMKIT_CORPUS_DIR) + "/" + name; }

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("tmkit_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

Run tmkit(const std::string& args) {
  const fs::path err = scratch() / "stderr.txt";
  const std::string cmd = std::string("\"") + TMKIT_CLI_PATH + "\" " + args + " 2>\"" +
                          err.string() + "\"";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string q(const std::string& s) { return "\"" + s + "\""; }

}  // namespace

TEST_CASE("validate a well-formed model") {
  const Run r = tmkit("validate " + q(corpus("underpants.tm")));
  CHECK(r.code == 0);
  CHECK(r.out == "0 errors, 0 warnings\n");
  CHECK(r.err.empty());
}

TEST_CASE("validate with json output parses") {
  const Run r = tmkit("validate --json " + q(corpus("order.tm")));
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["errors"] == 0);
  CHECK(doc["violations"].is_array());
}

TEST_CASE("validation errors exit 1") {
  const Run r = tmkit("validate --mode strict " + q(corpus("customer_service_simplified.tm")));
  CHECK(r.code == 1);
  CHECK(r.out.find("5 errors") != std::string::npos);
  CHECK(tmkit("validate " + q(corpus("customer_service_simplified.tm"))).code == 0);
  CHECK(tmkit("validate --mode simplified " + q(corpus("customer_service_simplified.tm"))).code ==
        0);
}

TEST_CASE("relaxed triggers turn trigger errors into warnings") {
  const fs::path f = scratch() / "trig.tm";
  write(f, "model M { thimac T { process p; process q; } trigger T.p -> T.q; }");
  CHECK(tmkit("validate " + q(f.string())).code == 1);
  const Run r = tmkit("validate --relaxed-triggers " + q(f.string()));
  CHECK(r.code == 0);
  CHECK(r.out.find("warning V4") != std::string::npos);
}

TEST_CASE("loops get the default bound and unknown events exit 2") {
  CHECK(tmkit("validate " + q(corpus("carservice.tm"))).code == 0);
  CHECK(tmkit("validate --loop-bound 4 " + q(corpus("letter.tm"))).code == 0);
  const fs::path f = scratch() / "loop.tm";
  write(f, "model M { thimac T { create c; } }\nevents { event E1 { region: T.c; } }\n"
           "behavior { E1 -> E2; }");
  CHECK(tmkit("validate " + q(f.string())).code == 2);
}

TEST_CASE("missing input exits 3") {
  const Run r = tmkit("validate /nonexistent");
  CHECK(r.code == 3);
  CHECK(r.out.empty());
  CHECK(r.err.find("IO") != std::string::npos);
}

TEST_CASE("parse errors exit 2 with a located diagnostic") {
  const fs::path f = scratch() / "bad.tm";
  write(f, "model M {\n  thimac a { create x; }\n  flow a.x -> ;\n}");
  const Run r = tmkit("validate " + q(f.string()));
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK(r.err.find(":3:15: PARSE:") != std::string::npos);

  write(f, "model M { thimac a { create x; create x; } }");
  CHECK(tmkit("validate " + q(f.string())).code == 2);
  write(f, "model M { thimac a { create x; } flow a.x -> a.y; }");
  CHECK(tmkit("events " + q(f.string())).code == 2);
}

TEST_CASE("usage errors exit 2") {
  CHECK(tmkit("").code == 2);
  CHECK(tmkit("frobnicate x").code == 2);
  CHECK(tmkit("validate").code == 2);
  CHECK(tmkit("export " + q(corpus("order.tm"))).code == 2);
  CHECK(tmkit("export --format png " + q(corpus("order.tm"))).code == 2);
  CHECK(tmkit("--help").code == 0);
}

TEST_CASE("disconnected regions are an input error unless allowed") {
  const fs::path f = scratch() / "disc.tm";
  write(f, "model M { thimac T { create a; create b; } }\n"
           "events { event E1 { region: T.a, T.b; } }");
  const Run r = tmkit("events " + q(f.string()));
  CHECK(r.code == 1);
  CHECK(r.err.find("REGION_DISCONNECTED") != std::string::npos);
  CHECK(tmkit("events --allow-disconnected-regions " + q(f.string())).code == 0);
}

TEST_CASE("events lists regions and coverage") {
  const Run r = tmkit("events " + q(corpus("brutus.tm")));
  CHECK(r.code == 0);
  CHECK(r.out.starts_with("E1\t4 actions\tBrutus violently stabs\n"));

  const fs::path f = scratch() / "cover.tm";
  write(f, "model M { thimac T { create a; create b; } }\nevents { event E1 { region: T.a; } }");
  const Run c = tmkit("events --json " + q(f.string()));
  CHECK(c.code == 0);
  const auto doc = nlohmann::json::parse(c.out);
  CHECK(doc["events"].size() == 1);
  CHECK(doc["events"][0]["region_size"] == 1);
  CHECK(doc["coverage"] == nlohmann::json::array({"T.b"}));
}

TEST_CASE("simulate prints one line per step") {
  const Run r = tmkit("simulate " + q(corpus("letter.tm")) + " --loop-bound 5");
  CHECK(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::string last;
  int count = 0;
  while (std::getline(lines, line)) {
    ++count;
    last = line;
  }
  CHECK(count == 11);
  CHECK(last.find("\tE3\t") != std::string::npos);
}

TEST_CASE("simulate json and trace file") {
  const fs::path out = scratch() / "trace.json";
  const Run r = tmkit("simulate --json --trace-out " + q(out.string()) + " " +
                      q(corpus("order.tm")));
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["complete"] == true);
  CHECK(doc["steps"].size() == 9);
  CHECK(slurp(out) == r.out);
}

TEST_CASE("step budget exits 4 with the partial trace") {
  const Run r = tmkit("simulate --max-steps 3 " + q(corpus("order.tm")));
  CHECK(r.code == 4);
  CHECK(r.err.find("BUDGET") != std::string::npos);
  int lines = 0;
  for (char ch : r.out) lines += ch == '\n' ? 1 : 0;
  CHECK(lines == 3);
}

TEST_CASE("simulate refuses simplified models") {
  const Run r = tmkit("simulate " + q(corpus("customer_service_simplified.tm")));
  CHECK(r.code == 1);
  CHECK(r.err.find("INVALID_INPUT") != std::string::npos);
}

TEST_CASE("export dot and json") {
  const Run dot = tmkit("export --format dot --show-events " + q(corpus("order.tm")));
  CHECK(dot.code == 0);
  CHECK(dot.out.starts_with("digraph \"Order\" {"));

  const fs::path out = scratch() / "order.json";
  CHECK(tmkit("export --format json -o " + q(out.string()) + " " + q(corpus("order.tm"))).code == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["version"] == 1);
  CHECK(doc["events"].size() == 9);
  // the exported file is itself a valid input
  CHECK(tmkit("validate " + q(out.string())).code == 0);
}

TEST_CASE("json schema problems exit 3") {
  const fs::path f = scratch() / "v2.json";
  write(f, R"({"version": 2})");
  const Run r = tmkit("validate " + q(f.string()));
  CHECK(r.code == 3);
  CHECK(r.err.find("VERSION") != std::string::npos);
  write(f, R"({"version": 1, "thimacs": 4})");
  CHECK(tmkit("validate " + q(f.string())).code == 3);
  CHECK(tmkit("export --format dot -o /nonexistent/dir/x.dot " + q(corpus("order.tm"))).code == 3);
}

TEST_CASE("import-ad emits parseable DSL") {
  const fs::path out = scratch() / "car.tm";
  const Run r = tmkit("import-ad " + q(corpus("carservice_ad.json")) + " -o " + q(out.string()));
  CHECK(r.code == 0);
  CHECK(slurp(out).starts_with("model Activity {"));
  const Run v = tmkit("validate " + q(out.string()));
  CHECK(v.code == 0);
  const Run s = tmkit("simulate " + q(out.string()));
  CHECK(s.code == 0);
  CHECK(s.out.find("\tE7\t") != std::string::npos);
}

TEST_CASE("import-ad failures exit 3 or 2") {
  const fs::path f = scratch() / "ad.json";
  write(f, R"({"nodes": [{"id": "a", "kind": "initial"}, {"id": "b", "kind": "initial"}]})");
  const Run r = tmkit("import-ad " + q(f.string()));
  CHECK(r.code == 3);
  CHECK(r.err.find("MULTI_INITIAL") != std::string::npos);
  write(f, R"({"nodes": [{"id": "a", "kind": "fork"}]})");
  CHECK(tmkit("import-ad " + q(f.string())).code == 3);
  write(f, R"({"nodes": [{"id": "a", "kind": "action"}, {"id": "a", "kind": "action"}]})");
  CHECK(tmkit("import-ad " + q(f.string())).code == 2);
}

TEST_CASE("validation accepts many unordered events") {
  const fs::path f = scratch() / "big.tm";
  std::string text = "model M { thimac T { create c; } }\nevents {\n";
  for (int i = 1; i <= 13; ++i) text += "  event E" + std::to_string(i) + " { region: T.c; }\n";
  text += "}\n";
  write(f, text);
  CHECK(tmkit("validate " + q(f.string())).code == 0);
}
