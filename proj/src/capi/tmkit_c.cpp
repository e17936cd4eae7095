// SPDX-License-Identifier: Apache-2.0
#include "tmkit/tmkit.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>
#include <string>

#include "tmkit/dsl.hpp"
#include "tmkit/dynamics.hpp"
#include "tmkit/interop.hpp"
#include "tmkit/normalize.hpp"
#include "tmkit/sim.hpp"
#include "tmkit/validate.hpp"

struct tmk_bundle {
  tmkit::ModelBundle value;
  std::vector<std::string> event_labels;  // "" when absent
};

struct tmk_report {
  tmkit::ValidationReport value;
};

struct tmk_trace {
  tmkit::Trace value;
  std::vector<std::string> events;
  std::vector<std::vector<std::string>> actions;
};

namespace {

struct LastError {
  std::string message;
  int line = 0;
  int column = 0;
};

thread_local LastError g_last_error;

tmk_status status_of(tmkit::ErrorCode code) {
  using tmkit::ErrorCode;
  switch (code) {
    case ErrorCode::Parse: return TMK_E_PARSE;
    case ErrorCode::DupId: return TMK_E_DUPID;
    case ErrorCode::Undef: return TMK_E_UNDEF;
    case ErrorCode::Dangling: return TMK_E_DANGLING;
    case ErrorCode::RegionDisconnected: return TMK_E_REGION_DISCONNECTED;
    case ErrorCode::UnboundedLoop: return TMK_E_UNBOUNDED_LOOP;
    case ErrorCode::Budget: return TMK_E_BUDGET;
    case ErrorCode::InvalidInput: return TMK_E_INVALID_INPUT;
    case ErrorCode::TooLarge: return TMK_E_TOO_LARGE;
    case ErrorCode::Version: return TMK_E_VERSION;
    case ErrorCode::Schema: return TMK_E_SCHEMA;
    case ErrorCode::MultiInitial: return TMK_E_MULTI_INITIAL;
    case ErrorCode::Unsupported: return TMK_E_UNSUPPORTED;
    case ErrorCode::Io: return TMK_E_IO;
  }
  return TMK_E_INTERNAL;
}

tmk_status fail(tmk_status status, std::string message, int line = 0, int column = 0) {
  g_last_error = {std::move(message), line, column};
  return status;
}

tmk_status fail(const tmkit::Error& e) {
  const auto& span = e.span();
  return fail(status_of(e.code()), e.what(), span ? span->line : 0,
              span ? span->column : 0);
}

/// Runs `body`, translating exceptions into status codes.
template <class F>
tmk_status guarded(F&& body) {
  try {
    body();
    return TMK_OK;
  } catch (const tmkit::Error& e) {
    return fail(e);
  } catch (const std::bad_alloc&) {
    return fail(TMK_E_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TMK_E_INTERNAL, e.what());
  } catch (...) {
    return fail(TMK_E_INTERNAL, "unknown failure");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tmk_bundle* wrap(tmkit::ModelBundle b) {
  auto* out = new tmk_bundle{std::move(b), {}};
  for (const auto& ev : out->value.events) out->event_labels.push_back(ev.label.value_or(""));
  return out;
}

tmk_trace* wrap(tmkit::Trace t) {
  auto* out = new tmk_trace{std::move(t), {}, {}};
  for (const auto& s : out->value.steps) {
    out->events.push_back(s.event.str());
    std::vector<std::string> actions;
    for (const auto& a : s.actions) actions.push_back(a.str());
    out->actions.push_back(std::move(actions));
  }
  return out;
}

#define TMK_REQUIRE(ptr)                                              \
  do {                                                                \
    if ((ptr) == nullptr) return fail(TMK_E_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tmkit::Error(tmkit::ErrorCode::Io, std::string("cannot open '") + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw tmkit::Error(tmkit::ErrorCode::Io, std::string("cannot read '") + path + "'");
  return ss.str();
}

}  // namespace

extern "C" {

const char* tmk_version(void) { return "1.0.0"; }

const char* tmk_status_name(tmk_status status) {
  switch (status) {
    case TMK_OK: return "OK";
    case TMK_E_PARSE: return "PARSE";
    case TMK_E_DUPID: return "DUPID";
    case TMK_E_UNDEF: return "UNDEF";
    case TMK_E_DANGLING: return "DANGLING";
    case TMK_E_REGION_DISCONNECTED: return "REGION_DISCONNECTED";
    case TMK_E_UNBOUNDED_LOOP: return "UNBOUNDED_LOOP";
    case TMK_E_BUDGET: return "BUDGET";
    case TMK_E_INVALID_INPUT: return "INVALID_INPUT";
    case TMK_E_TOO_LARGE: return "TOO_LARGE";
    case TMK_E_VERSION: return "VERSION";
    case TMK_E_SCHEMA: return "SCHEMA";
    case TMK_E_MULTI_INITIAL: return "MULTI_INITIAL";
    case TMK_E_UNSUPPORTED: return "UNSUPPORTED";
    case TMK_E_IO: return "IO";
    case TMK_E_NULL_ARGUMENT: return "NULL_ARGUMENT";
    case TMK_E_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

const char* tmk_last_error(void) { return g_last_error.message.c_str(); }
int tmk_last_error_line(void) { return g_last_error.line; }
int tmk_last_error_column(void) { return g_last_error.column; }

void tmk_string_free(char* s) { std::free(s); }

// ---- bundles ---------------------------------------------------------------

tmk_status tmk_bundle_parse(const char* text, size_t len, const char* file,
                            int allow_disconnected_regions, tmk_bundle** out) {
  TMK_REQUIRE(text);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    tmkit::ParseOptions options;
    if (file != nullptr) options.file = file;
    options.allow_disconnected_regions = allow_disconnected_regions != 0;
    *out = wrap(tmkit::parse(std::string_view(text, len), options));
  });
}

tmk_status tmk_bundle_load_file(const char* path, tmk_bundle** out) {
  TMK_REQUIRE(path);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const std::string text = read_file(path);
    const std::string_view p(path);
    if (p.size() >= 5 && p.substr(p.size() - 5) == ".json") {
      *out = wrap(tmkit::import_json(text));
    } else {
      *out = wrap(tmkit::parse(text, {.file = std::string(p)}));
    }
  });
}

tmk_status tmk_bundle_from_json(const char* text, size_t len, tmk_bundle** out) {
  TMK_REQUIRE(text);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = wrap(tmkit::import_json(std::string_view(text, len))); });
}

tmk_status tmk_bundle_from_activity_json(const char* text, size_t len, tmk_bundle** out) {
  TMK_REQUIRE(text);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = wrap(tmkit::import_activity(tmkit::parse_activity_json(std::string_view(text, len))));
  });
}

void tmk_bundle_free(tmk_bundle* bundle) { delete bundle; }

tmk_status tmk_bundle_print(const tmk_bundle* bundle, char** out) {
  TMK_REQUIRE(bundle);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(tmkit::print(bundle->value)); });
}

tmk_status tmk_bundle_to_json(const tmk_bundle* bundle, char** out) {
  TMK_REQUIRE(bundle);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(tmkit::export_json(bundle->value)); });
}

tmk_status tmk_bundle_to_dot(const tmk_bundle* bundle, int show_events, char** out) {
  TMK_REQUIRE(bundle);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = dup_string(tmkit::export_dot(bundle->value, {.show_events = show_events != 0}));
  });
}

tmk_status tmk_bundle_normalize(const tmk_bundle* bundle, tmk_bundle** out) {
  TMK_REQUIRE(bundle);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    tmkit::ModelBundle b =
        tmkit::normalize(bundle->value, {.allow_disconnected_regions = true});
    *out = wrap(std::move(b));
  });
}

size_t tmk_bundle_thimac_count(const tmk_bundle* bundle) {
  return bundle ? bundle->value.model.thimacs.size() : 0;
}
size_t tmk_bundle_action_count(const tmk_bundle* bundle) {
  return bundle ? bundle->value.model.actions.size() : 0;
}
size_t tmk_bundle_edge_count(const tmk_bundle* bundle) {
  return bundle ? bundle->value.model.edges.size() : 0;
}
int tmk_bundle_mode(const tmk_bundle* bundle) {
  return bundle && bundle->value.model.mode == tmkit::Mode::Simplified ? 1 : 0;
}

size_t tmk_bundle_event_count(const tmk_bundle* bundle) {
  return bundle ? bundle->value.events.size() : 0;
}

const char* tmk_bundle_event_id(const tmk_bundle* bundle, size_t index) {
  if (!bundle || index >= bundle->value.events.size()) return nullptr;
  return bundle->value.events[index].id.str().c_str();
}

const char* tmk_bundle_event_label(const tmk_bundle* bundle, size_t index) {
  if (!bundle || index >= bundle->value.events.size()) return nullptr;
  if (!bundle->value.events[index].label) return nullptr;
  return bundle->event_labels[index].c_str();
}

size_t tmk_bundle_event_region_size(const tmk_bundle* bundle, size_t index) {
  if (!bundle || index >= bundle->value.events.size()) return 0;
  return bundle->value.events[index].region.actions.size();
}

const char* tmk_bundle_event_region_action(const tmk_bundle* bundle, size_t index,
                                           size_t member) {
  if (!bundle || index >= bundle->value.events.size()) return nullptr;
  const auto& actions = bundle->value.events[index].region.actions;
  if (member >= actions.size()) return nullptr;
  return actions[member].str().c_str();
}

// ---- validation ------------------------------------------------------------

void tmk_validate_options_init(tmk_validate_options* options) {
  if (options == nullptr) return;
  options->mode = -1;
  options->relaxed_triggers = 0;
  options->check_behavior = 0;
  options->loop_bound = 0;
  options->allow_disconnected_regions = 0;
}

tmk_status tmk_validate(const tmk_bundle* bundle, const tmk_validate_options* options,
                        tmk_report** out) {
  TMK_REQUIRE(bundle);
  TMK_REQUIRE(out);
  *out = nullptr;
  tmk_validate_options opts;
  tmk_validate_options_init(&opts);
  if (options != nullptr) opts = *options;
  if (opts.mode < -1 || opts.mode > 1) {
    return fail(TMK_E_INVALID_INPUT, "mode must be -1, 0 or 1");
  }
  if (opts.loop_bound < 0) return fail(TMK_E_INVALID_INPUT, "loop bound must not be negative");
  return guarded([&] {
    const tmkit::StaticModel& model = bundle->value.model;
    const tmkit::Mode mode = opts.mode < 0 ? model.mode
                             : opts.mode == 0 ? tmkit::Mode::Strict
                                              : tmkit::Mode::Simplified;
    tmkit::RuleTable rules = tmkit::RuleTable::for_mode(mode);
    if (opts.relaxed_triggers) rules = rules.with_relaxed_triggers();
    tmkit::ValidationReport report = tmkit::validate_static(model, rules);
    if (opts.check_behavior) {
      tmkit::BehaviorModel behavior = bundle->value.behavior;
      if (opts.loop_bound > 0) {
        behavior = tmkit::with_default_loop_bound(behavior, opts.loop_bound);
      }
      report.append(tmkit::validate_behavior(
          behavior, bundle->value.events, model,
          {.allow_disconnected_regions = opts.allow_disconnected_regions != 0}));
      report.sort();
    }
    *out = new tmk_report{std::move(report)};
  });
}

void tmk_report_free(tmk_report* report) { delete report; }

size_t tmk_report_error_count(const tmk_report* report) {
  return report ? report->value.error_count() : 0;
}
size_t tmk_report_warning_count(const tmk_report* report) {
  return report ? report->value.warning_count() : 0;
}
size_t tmk_report_size(const tmk_report* report) {
  return report ? report->value.violations().size() : 0;
}

const char* tmk_report_rule(const tmk_report* report, size_t index) {
  if (!report || index >= report->value.violations().size()) return nullptr;
  return report->value.violations()[index].rule.c_str();
}

tmk_severity tmk_report_severity(const tmk_report* report, size_t index) {
  if (!report || index >= report->value.violations().size()) return TMK_SEVERITY_ERROR;
  return report->value.violations()[index].severity == tmkit::Severity::Error
             ? TMK_SEVERITY_ERROR
             : TMK_SEVERITY_WARNING;
}

const char* tmk_report_location(const tmk_report* report, size_t index) {
  if (!report || index >= report->value.violations().size()) return nullptr;
  return report->value.violations()[index].location.c_str();
}

const char* tmk_report_message(const tmk_report* report, size_t index) {
  if (!report || index >= report->value.violations().size()) return nullptr;
  return report->value.violations()[index].message.c_str();
}

tmk_status tmk_report_to_text(const tmk_report* report, char** out) {
  TMK_REQUIRE(report);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(report->value.to_text()); });
}

tmk_status tmk_report_to_json(const tmk_report* report, char** out) {
  TMK_REQUIRE(report);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(report->value.to_json()); });
}

// ---- simulation ------------------------------------------------------------

void tmk_sim_options_init(tmk_sim_options* options) {
  if (options == nullptr) return;
  const tmkit::SimConfig defaults;
  options->max_steps = defaults.max_steps;
  options->default_loop_bound = defaults.default_loop_bound;
  options->allow_disconnected_regions = 0;
}

tmk_status tmk_simulate(const tmk_bundle* bundle, const tmk_sim_options* options,
                        tmk_trace** out) {
  TMK_REQUIRE(bundle);
  TMK_REQUIRE(out);
  *out = nullptr;
  tmk_sim_options opts;
  tmk_sim_options_init(&opts);
  if (options != nullptr) opts = *options;
  try {
    tmkit::SimConfig config;
    config.max_steps = opts.max_steps;
    config.default_loop_bound = opts.default_loop_bound;
    config.allow_disconnected_regions = opts.allow_disconnected_regions != 0;
    *out = wrap(tmkit::simulate(bundle->value, config));
    return TMK_OK;
  } catch (const tmkit::BudgetExceeded& e) {
    *out = wrap(e.trace());
    return fail(e);
  } catch (const tmkit::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(TMK_E_INTERNAL, e.what());
  }
}

void tmk_trace_free(tmk_trace* trace) { delete trace; }

size_t tmk_trace_step_count(const tmk_trace* trace) {
  return trace ? trace->value.steps.size() : 0;
}
int tmk_trace_complete(const tmk_trace* trace) {
  return trace && trace->value.complete ? 1 : 0;
}

const char* tmk_trace_step_event(const tmk_trace* trace, size_t step) {
  if (!trace || step >= trace->events.size()) return nullptr;
  return trace->events[step].c_str();
}

size_t tmk_trace_step_action_count(const tmk_trace* trace, size_t step) {
  if (!trace || step >= trace->actions.size()) return 0;
  return trace->actions[step].size();
}

const char* tmk_trace_step_action(const tmk_trace* trace, size_t step, size_t action) {
  if (!trace || step >= trace->actions.size()) return nullptr;
  if (action >= trace->actions[step].size()) return nullptr;
  return trace->actions[step][action].c_str();
}

tmk_status tmk_trace_to_text(const tmk_trace* trace, char** out) {
  TMK_REQUIRE(trace);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(trace->value.to_text()); });
}

tmk_status tmk_trace_to_json(const tmk_trace* trace, char** out) {
  TMK_REQUIRE(trace);
  TMK_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(trace->value.to_json()); });
}

tmk_status tmk_count_orderings(const tmk_bundle* bundle, int default_loop_bound,
                               size_t limit, size_t* out) {
  TMK_REQUIRE(bundle);
  TMK_REQUIRE(out);
  *out = 0;
  if (default_loop_bound < 1) return fail(TMK_E_INVALID_INPUT, "loop bound must be at least 1");
  return guarded([&] {
    const auto behavior =
        tmkit::with_default_loop_bound(bundle->value.behavior, default_loop_bound);
    *out = tmkit::count_orderings(behavior, limit == 0 ? tmkit::kUnlimited : limit);
  });
}

}  // extern "C"
