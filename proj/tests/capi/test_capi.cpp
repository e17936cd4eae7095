// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>

#include "tmkit/tmkit.h"

namespace {

std::string corpus(const std::string& name) { return std::string(TMKIT_CORPUS_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string take(char* s) {
  std::string out = s ? s : "";
  tmk_string_free(s);
  return out;
}

tmk_bundle* load(const std::string& name) {
  tmk_bundle* b = nullptr;
  REQUIRE(tmk_bundle_load_file(corpus(name).c_str(), &b) == TMK_OK);
  return b;
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::string(tmk_version()) == "1.0.0");
  CHECK(std::string(tmk_status_name(TMK_OK)) == "OK");
  CHECK(std::string(tmk_status_name(TMK_E_REGION_DISCONNECTED)) == "REGION_DISCONNECTED");
  CHECK(std::string(tmk_status_name(TMK_E_NULL_ARGUMENT)) == "NULL_ARGUMENT");
}

TEST_CASE("parse errors report status, message and location") {
  const char* text = "model M {\n  thimac a { create x; }\n  flow a.x -> ;\n}";
  tmk_bundle* b = nullptr;
  CHECK(tmk_bundle_parse(text, std::strlen(text), "t.tm", 0, &b) == TMK_E_PARSE);
  CHECK(b == nullptr);
  CHECK(std::string(tmk_last_error()).starts_with("t.tm:3:15: PARSE:"));
  CHECK(tmk_last_error_line() == 3);
  CHECK(tmk_last_error_column() == 15);
}

TEST_CASE("null arguments are refused") {
  tmk_bundle* b = nullptr;
  CHECK(tmk_bundle_parse(nullptr, 0, nullptr, 0, &b) == TMK_E_NULL_ARGUMENT);
  CHECK(tmk_bundle_parse("model M {}", 10, nullptr, 0, nullptr) == TMK_E_NULL_ARGUMENT);
  CHECK(tmk_validate(nullptr, nullptr, nullptr) == TMK_E_NULL_ARGUMENT);
  CHECK(tmk_bundle_event_count(nullptr) == 0);
  CHECK(tmk_bundle_event_id(nullptr, 0) == nullptr);
  tmk_bundle_free(nullptr);
  tmk_report_free(nullptr);
  tmk_trace_free(nullptr);
  tmk_string_free(nullptr);
}

TEST_CASE("missing file is an I/O error") {
  tmk_bundle* b = nullptr;
  CHECK(tmk_bundle_load_file("/nonexistent/x.tm", &b) == TMK_E_IO);
}

TEST_CASE("validation of the underpants model") {
  tmk_bundle* b = load("underpants.tm");
  CHECK(tmk_bundle_action_count(b) == 28);
  CHECK(tmk_bundle_edge_count(b) == 27);
  CHECK(tmk_bundle_mode(b) == 0);
  CHECK(tmk_bundle_event_count(b) == 6);

  tmk_validate_options opts;
  tmk_validate_options_init(&opts);
  opts.check_behavior = 1;
  tmk_report* r = nullptr;
  REQUIRE(tmk_validate(b, &opts, &r) == TMK_OK);
  CHECK(tmk_report_error_count(r) == 0);
  CHECK(tmk_report_warning_count(r) == 0);
  CHECK(take([&] { char* s = nullptr; tmk_report_to_text(r, &s); return s; }()) ==
        "0 errors, 0 warnings\n");
  tmk_report_free(r);
  tmk_bundle_free(b);
}

TEST_CASE("simplified model: strict errors, normalization, counts") {
  tmk_bundle* b = load("customer_service_simplified.tm");
  CHECK(tmk_bundle_mode(b) == 1);
  tmk_validate_options opts;
  tmk_validate_options_init(&opts);
  opts.mode = 0;
  tmk_report* r = nullptr;
  REQUIRE(tmk_validate(b, &opts, &r) == TMK_OK);
  CHECK(tmk_report_error_count(r) == 5);
  CHECK(std::string(tmk_report_rule(r, 0)) == "V1");
  CHECK(tmk_report_severity(r, 0) == TMK_SEVERITY_ERROR);
  CHECK(tmk_report_rule(r, 999) == nullptr);
  tmk_report_free(r);

  tmk_bundle* n = nullptr;
  REQUIRE(tmk_bundle_normalize(b, &n) == TMK_OK);
  CHECK(tmk_bundle_mode(n) == 0);
  CHECK(tmk_bundle_action_count(n) == tmk_bundle_action_count(b) + 20);
  REQUIRE(tmk_validate(n, nullptr, &r) == TMK_OK);
  CHECK(tmk_report_error_count(r) == 0);
  tmk_report_free(r);

  tmk_trace* t = nullptr;
  CHECK(tmk_simulate(b, nullptr, &t) == TMK_E_INVALID_INPUT);
  CHECK(t == nullptr);
  REQUIRE(tmk_simulate(n, nullptr, &t) == TMK_OK);
  CHECK(tmk_trace_step_count(t) == 7);
  tmk_trace_free(t);
  tmk_bundle_free(n);
  tmk_bundle_free(b);
}

TEST_CASE("events and regions are exposed") {
  tmk_bundle* b = load("brutus.tm");
  REQUIRE(tmk_bundle_event_count(b) == 2);
  CHECK(std::string(tmk_bundle_event_id(b, 0)) == "E1");
  CHECK(std::string(tmk_bundle_event_label(b, 0)) == "Brutus violently stabs");
  CHECK(tmk_bundle_event_region_size(b, 1) == 5);
  CHECK(std::string(tmk_bundle_event_region_action(b, 0, 0)) == "Brutus.brutus");
  CHECK(tmk_bundle_event_region_action(b, 0, 99) == nullptr);
  CHECK(tmk_bundle_event_id(b, 7) == nullptr);
  tmk_bundle_free(b);
}

TEST_CASE("simulation, budget and orderings") {
  tmk_bundle* b = load("order.tm");
  size_t n = 0;
  REQUIRE(tmk_count_orderings(b, 1, 0, &n) == TMK_OK);
  CHECK(n == 140);
  REQUIRE(tmk_count_orderings(b, 1, 10, &n) == TMK_OK);
  CHECK(n == 10);

  tmk_sim_options opts;
  tmk_sim_options_init(&opts);
  tmk_trace* t = nullptr;
  REQUIRE(tmk_simulate(b, &opts, &t) == TMK_OK);
  CHECK(tmk_trace_complete(t) == 1);
  CHECK(tmk_trace_step_count(t) == 9);
  CHECK(std::string(tmk_trace_step_event(t, 8)) == "E9");
  CHECK(tmk_trace_step_action_count(t, 0) == 6);
  CHECK(std::string(tmk_trace_step_action(t, 0, 0)) == "Customer.order");
  CHECK(take([&] { char* s = nullptr; tmk_trace_to_json(t, &s); return s; }()).find("\"E9\"") !=
        std::string::npos);
  tmk_trace_free(t);

  opts.max_steps = 3;
  CHECK(tmk_simulate(b, &opts, &t) == TMK_E_BUDGET);
  REQUIRE(t != nullptr);
  CHECK(tmk_trace_step_count(t) == 3);
  CHECK(tmk_trace_complete(t) == 0);
  tmk_trace_free(t);
  tmk_bundle_free(b);

  tmk_bundle* car = load("carservice.tm");
  tmk_sim_options_init(&opts);
  opts.default_loop_bound = 3;
  REQUIRE(tmk_simulate(car, &opts, &t) == TMK_OK);
  CHECK(tmk_trace_step_count(t) == 11);
  tmk_trace_free(t);
  tmk_bundle_free(car);
}

TEST_CASE("json and activity diagram entry points") {
  tmk_bundle* b = load("letter.tm");
  char* json = nullptr;
  REQUIRE(tmk_bundle_to_json(b, &json) == TMK_OK);
  const std::string text = take(json);
  tmk_bundle* back = nullptr;
  REQUIRE(tmk_bundle_from_json(text.data(), text.size(), &back) == TMK_OK);
  char* p1 = nullptr;
  char* p2 = nullptr;
  tmk_bundle_print(b, &p1);
  tmk_bundle_print(back, &p2);
  CHECK(take(p1) == take(p2));
  tmk_bundle_free(back);

  char* dot = nullptr;
  REQUIRE(tmk_bundle_to_dot(b, 1, &dot) == TMK_OK);
  CHECK(take(dot).starts_with("digraph"));
  tmk_bundle_free(b);

  const char* v2 = "{\"version\": 2}";
  CHECK(tmk_bundle_from_json(v2, std::strlen(v2), &back) == TMK_E_VERSION);

  const std::string ad = slurp(corpus("order_ad.json"));
  tmk_bundle* imported = nullptr;
  REQUIRE(tmk_bundle_from_activity_json(ad.data(), ad.size(), &imported) == TMK_OK);
  CHECK(tmk_bundle_event_count(imported) == 9);
  tmk_bundle_free(imported);

  const char* multi = R"({"nodes": [{"id": "a", "kind": "initial"}, {"id": "b", "kind": "initial"}]})";
  CHECK(tmk_bundle_from_activity_json(multi, std::strlen(multi), &imported) ==
        TMK_E_MULTI_INITIAL);
}

TEST_CASE("last error is per thread") {
  const char* bad = "model";
  tmk_bundle* b = nullptr;
  CHECK(tmk_bundle_parse(bad, std::strlen(bad), nullptr, 0, &b) == TMK_E_PARSE);
  std::string other;
  std::thread([&] { other = tmk_last_error(); }).join();
  CHECK(other.empty());
  CHECK_FALSE(std::string(tmk_last_error()).empty());
}
