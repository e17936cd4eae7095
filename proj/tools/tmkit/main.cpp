// SPDX-License-Identifier: Apache-2.0
//
// tmkit command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 validation errors, 2 parse errors,
// 3 I/O or schema errors, 4 simulation budget exhausted.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "tmkit/tmkit.h"

namespace {

enum Exit { kOk = 0, kInvalid = 1, kParse = 2, kIo = 3, kBudget = 4 };

int exit_code(tmk_status status) {
  switch (status) {
    case TMK_OK: return kOk;
    case TMK_E_PARSE:
    case TMK_E_DUPID:
    case TMK_E_UNDEF: return kParse;
    case TMK_E_IO:
    case TMK_E_SCHEMA:
    case TMK_E_VERSION:
    case TMK_E_MULTI_INITIAL:
    case TMK_E_UNSUPPORTED: return kIo;
    case TMK_E_BUDGET: return kBudget;
    default: return kInvalid;
  }
}

struct BundleDeleter {
  void operator()(tmk_bundle* b) const { tmk_bundle_free(b); }
};
struct ReportDeleter {
  void operator()(tmk_report* r) const { tmk_report_free(r); }
};
struct TraceDeleter {
  void operator()(tmk_trace* t) const { tmk_trace_free(t); }
};
struct StringDeleter {
  void operator()(char* s) const { tmk_string_free(s); }
};
using Bundle = std::unique_ptr<tmk_bundle, BundleDeleter>;
using Report = std::unique_ptr<tmk_report, ReportDeleter>;
using Trace = std::unique_ptr<tmk_trace, TraceDeleter>;
using CString = std::unique_ptr<char, StringDeleter>;

/// Carries an exit code out of a subcommand.
struct Failure {
  int code;
};

[[noreturn]] void die(tmk_status status) {
  std::cerr << "tmkit: " << tmk_last_error() << '\n';
  throw Failure{exit_code(status)};
}

void check(tmk_status status) {
  if (status != TMK_OK) die(status);
}

std::string take(char* raw) {
  CString owned(raw);
  return owned ? std::string(owned.get()) : std::string();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string read_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "tmkit: IO: cannot open '" << path << "'\n";
    throw Failure{kIo};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "tmkit: IO: cannot write '" << path << "'\n";
    throw Failure{kIo};
  }
}

Bundle load(const std::string& path, bool allow_disconnected) {
  const std::string text = read_input(path);
  tmk_bundle* raw = nullptr;
  tmk_status status = ends_with(path, ".json")
                          ? tmk_bundle_from_json(text.data(), text.size(), &raw)
                          : tmk_bundle_parse(text.data(), text.size(), path.c_str(),
                                             allow_disconnected ? 1 : 0, &raw);
  check(status);
  return Bundle(raw);
}

// ---------------------------------------------------------------------------

struct Common {
  std::string input;
  bool allow_disconnected = false;
};

int run_validate(const Common& common, const std::string& mode, bool relaxed,
                 int loop_bound, bool json) {
  Bundle bundle = load(common.input, common.allow_disconnected);
  tmk_validate_options options;
  tmk_validate_options_init(&options);
  if (mode == "strict") options.mode = 0;
  if (mode == "simplified") options.mode = 1;
  options.relaxed_triggers = relaxed ? 1 : 0;
  options.check_behavior = 1;
  options.loop_bound = loop_bound;
  options.allow_disconnected_regions = common.allow_disconnected ? 1 : 0;

  tmk_report* raw = nullptr;
  check(tmk_validate(bundle.get(), &options, &raw));
  Report report(raw);
  char* text = nullptr;
  check(json ? tmk_report_to_json(report.get(), &text) : tmk_report_to_text(report.get(), &text));
  std::cout << take(text);
  return tmk_report_error_count(report.get()) == 0 ? kOk : kInvalid;
}

int run_events(const Common& common, bool json) {
  Bundle bundle = load(common.input, common.allow_disconnected);
  tmk_validate_options options;
  tmk_validate_options_init(&options);
  options.check_behavior = 1;
  options.loop_bound = 1;
  options.allow_disconnected_regions = common.allow_disconnected ? 1 : 0;
  tmk_report* raw = nullptr;
  check(tmk_validate(bundle.get(), &options, &raw));
  Report report(raw);

  const size_t n = tmk_bundle_event_count(bundle.get());
  std::ostringstream os;
  if (json) {
    nlohmann::ordered_json doc;
    doc["events"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < n; ++i) {
      nlohmann::ordered_json ev;
      ev["id"] = tmk_bundle_event_id(bundle.get(), i);
      const char* label = tmk_bundle_event_label(bundle.get(), i);
      ev["label"] = label ? nlohmann::ordered_json(label) : nlohmann::ordered_json(nullptr);
      ev["region_size"] = tmk_bundle_event_region_size(bundle.get(), i);
      doc["events"].push_back(std::move(ev));
    }
    doc["coverage"] = nlohmann::ordered_json::array();
    for (size_t i = 0; i < tmk_report_size(report.get()); ++i) {
      if (std::string(tmk_report_rule(report.get(), i)) != "COVERAGE") continue;
      doc["coverage"].push_back(tmk_report_location(report.get(), i));
    }
    os << doc.dump(2) << '\n';
  } else {
    for (size_t i = 0; i < n; ++i) {
      const size_t size = tmk_bundle_event_region_size(bundle.get(), i);
      os << tmk_bundle_event_id(bundle.get(), i) << '\t' << size
         << (size == 1 ? " action" : " actions");
      if (const char* label = tmk_bundle_event_label(bundle.get(), i)) os << '\t' << label;
      os << '\n';
    }
    for (size_t i = 0; i < tmk_report_size(report.get()); ++i) {
      if (std::string(tmk_report_rule(report.get(), i)) != "COVERAGE") continue;
      os << "warning: COVERAGE " << tmk_report_location(report.get(), i) << ": "
         << tmk_report_message(report.get(), i) << '\n';
    }
  }
  std::cout << os.str();
  return kOk;
}

int run_simulate(const Common& common, int max_steps, int loop_bound,
                 const std::string& trace_out, bool json) {
  Bundle bundle = load(common.input, common.allow_disconnected);
  tmk_sim_options options;
  tmk_sim_options_init(&options);
  options.max_steps = max_steps;
  options.default_loop_bound = loop_bound;
  options.allow_disconnected_regions = common.allow_disconnected ? 1 : 0;

  tmk_trace* raw = nullptr;
  const tmk_status status = tmk_simulate(bundle.get(), &options, &raw);
  Trace trace(raw);
  const std::string message = tmk_last_error();
  if (trace) {
    char* text = nullptr;
    check(json ? tmk_trace_to_json(trace.get(), &text) : tmk_trace_to_text(trace.get(), &text));
    const std::string rendered = take(text);
    std::cout << rendered;
    if (!trace_out.empty()) write_output(trace_out, rendered);
  }
  if (status != TMK_OK) {
    std::cerr << "tmkit: " << message << '\n';
    return exit_code(status);
  }
  return kOk;
}

int run_export(const Common& common, const std::string& format, bool show_events,
               const std::string& output) {
  Bundle bundle = load(common.input, common.allow_disconnected);
  char* text = nullptr;
  check(format == "dot" ? tmk_bundle_to_dot(bundle.get(), show_events ? 1 : 0, &text)
                        : tmk_bundle_to_json(bundle.get(), &text));
  write_output(output, take(text));
  return kOk;
}

int run_import_ad(const std::string& input, const std::string& output) {
  const std::string text = read_input(input);
  tmk_bundle* raw = nullptr;
  check(tmk_bundle_from_activity_json(text.data(), text.size(), &raw));
  Bundle bundle(raw);
  char* printed = nullptr;
  check(tmk_bundle_print(bundle.get(), &printed));
  write_output(output, take(printed));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thinging-machine model toolkit"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(tmk_version()));

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("input", common.input, "Model file (.tm or .json)")->required();
    sub->add_flag("--allow-disconnected-regions", common.allow_disconnected,
                  "Accept event regions that are not weakly connected");
  };

  std::string mode;
  bool relaxed = false;
  bool json = false;
  int loop_bound = 1;
  auto* validate = app.add_subcommand("validate", "Check the model and its behavior");
  add_common(validate);
  validate->add_option("--mode", mode, "Rule set (default: the model's declared mode)")
      ->check(CLI::IsMember({"strict", "simplified"}));
  validate->add_flag("--relaxed-triggers", relaxed, "Report trigger-rule breaches as warnings");
  validate->add_option("--loop-bound", loop_bound, "Bound for loops declared without one")
      ->check(CLI::PositiveNumber);
  validate->add_flag("--json", json, "Machine-readable report");

  auto* events = app.add_subcommand("events", "List events, region sizes and coverage gaps");
  add_common(events);
  events->add_flag("--json", json, "Machine-readable listing");

  int max_steps = 10000;
  std::string trace_out;
  auto* simulate = app.add_subcommand("simulate", "Run the behavior model");
  add_common(simulate);
  simulate->add_option("--max-steps", max_steps, "Step budget")->check(CLI::PositiveNumber);
  simulate->add_option("--loop-bound", loop_bound, "Bound for loops declared without one")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--trace-out", trace_out, "Also write the trace to this file");
  simulate->add_flag("--json", json, "JSON trace");

  std::string format;
  bool show_events = false;
  std::string output;
  auto* exporter = app.add_subcommand("export", "Write the model as DOT or JSON");
  add_common(exporter);
  exporter->add_option("--format", format, "Output format")
      ->required()
      ->check(CLI::IsMember({"dot", "json"}));
  exporter->add_flag("--show-events", show_events, "Overlay event regions (DOT)");
  exporter->add_option("-o,--output", output, "Output path (default: stdout)");

  std::string ad_input;
  auto* import_ad = app.add_subcommand("import-ad", "Translate an activity diagram to DSL text");
  import_ad->add_option("input", ad_input, "Activity-diagram JSON")->required();
  import_ad->add_option("-o,--output", output, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (validate->parsed()) return run_validate(common, mode, relaxed, loop_bound, json);
    if (events->parsed()) return run_events(common, json);
    if (simulate->parsed()) return run_simulate(common, max_steps, loop_bound, trace_out, json);
    if (exporter->parsed()) return run_export(common, format, show_events, output);
    if (import_ad->parsed()) return run_import_ad(ad_input, output);
  } catch (const Failure& f) {
    return f.code;
  }
  return kOk;
}
