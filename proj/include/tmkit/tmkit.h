/* SPDX-License-Identifier: Apache-2.0 */
/*
 * C interface to tmkit. Every handle is opaque and owned by the caller, who
 * releases it with the matching *_free function. Strings returned through
 * `char **` are heap-allocated and released with tmk_string_free. Functions
 * returning tmk_status leave a message for tmk_last_error on failure; the
 * message is per thread and stays valid until the next failing call on that
 * thread.
 */
#ifndef TMKIT_TMKIT_H
#define TMKIT_TMKIT_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(TMKIT_BUILDING)
#define TMK_API __declspec(dllexport)
#else
#define TMK_API __declspec(dllimport)
#endif
#else
#define TMK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tmk_status {
  TMK_OK = 0,
  TMK_E_PARSE = 1,
  TMK_E_DUPID = 2,
  TMK_E_UNDEF = 3,
  TMK_E_DANGLING = 4,
  TMK_E_REGION_DISCONNECTED = 5,
  TMK_E_UNBOUNDED_LOOP = 6,
  TMK_E_BUDGET = 7,
  TMK_E_INVALID_INPUT = 8,
  TMK_E_TOO_LARGE = 9,
  TMK_E_VERSION = 10,
  TMK_E_SCHEMA = 11,
  TMK_E_MULTI_INITIAL = 12,
  TMK_E_UNSUPPORTED = 13,
  TMK_E_IO = 14,
  TMK_E_NULL_ARGUMENT = 15,
  TMK_E_INTERNAL = 16
} tmk_status;

typedef enum tmk_severity { TMK_SEVERITY_ERROR = 0, TMK_SEVERITY_WARNING = 1 } tmk_severity;

typedef struct tmk_bundle tmk_bundle;
typedef struct tmk_report tmk_report;
typedef struct tmk_trace tmk_trace;

/* Library version string, e.g. "1.0.0". */
TMK_API const char *tmk_version(void);

/* Upper-case name of a status, e.g. "PARSE". */
TMK_API const char *tmk_status_name(tmk_status status);

/* Message of the last failure on this thread, or "" when there is none. */
TMK_API const char *tmk_last_error(void);

/* Location of the last failure, when it carried one; 0 otherwise. */
TMK_API int tmk_last_error_line(void);
TMK_API int tmk_last_error_column(void);

TMK_API void tmk_string_free(char *s);

/* ---- bundles ---------------------------------------------------------- */

/* `file` names the source in diagnostics and may be NULL. */
TMK_API tmk_status tmk_bundle_parse(const char *text, size_t len, const char *file,
                                    int allow_disconnected_regions, tmk_bundle **out);
/* Reads a .tm file, or a JSON model when the path ends in ".json". */
TMK_API tmk_status tmk_bundle_load_file(const char *path, tmk_bundle **out);
TMK_API tmk_status tmk_bundle_from_json(const char *text, size_t len, tmk_bundle **out);
TMK_API tmk_status tmk_bundle_from_activity_json(const char *text, size_t len,
                                                 tmk_bundle **out);
TMK_API void tmk_bundle_free(tmk_bundle *bundle);

TMK_API tmk_status tmk_bundle_print(const tmk_bundle *bundle, char **out);
TMK_API tmk_status tmk_bundle_to_json(const tmk_bundle *bundle, char **out);
TMK_API tmk_status tmk_bundle_to_dot(const tmk_bundle *bundle, int show_events, char **out);
/* Replaces the static model with its strict normal form. */
TMK_API tmk_status tmk_bundle_normalize(const tmk_bundle *bundle, tmk_bundle **out);

TMK_API size_t tmk_bundle_thimac_count(const tmk_bundle *bundle);
TMK_API size_t tmk_bundle_action_count(const tmk_bundle *bundle);
TMK_API size_t tmk_bundle_edge_count(const tmk_bundle *bundle);
/* 0 for strict, 1 for simplified. */
TMK_API int tmk_bundle_mode(const tmk_bundle *bundle);

/* Events, in declaration order. Returned strings live as long as the bundle.
 * Out-of-range indices yield NULL or 0. */
TMK_API size_t tmk_bundle_event_count(const tmk_bundle *bundle);
TMK_API const char *tmk_bundle_event_id(const tmk_bundle *bundle, size_t index);
TMK_API const char *tmk_bundle_event_label(const tmk_bundle *bundle, size_t index);
TMK_API size_t tmk_bundle_event_region_size(const tmk_bundle *bundle, size_t index);
TMK_API const char *tmk_bundle_event_region_action(const tmk_bundle *bundle, size_t index,
                                                   size_t member);

/* ---- validation ------------------------------------------------------- */

typedef struct tmk_validate_options {
  int mode;              /* -1 declared mode, 0 strict, 1 simplified */
  int relaxed_triggers;  /* nonzero downgrades trigger-rule errors */
  int check_behavior;    /* nonzero also validates events and behavior */
  int loop_bound;        /* bound for unbounded loops when checking behavior, 0 none */
  int allow_disconnected_regions;
} tmk_validate_options;

/* Fills `options` with the defaults: declared mode, behavior unchecked. */
TMK_API void tmk_validate_options_init(tmk_validate_options *options);

/* `options` may be NULL for the defaults. */
TMK_API tmk_status tmk_validate(const tmk_bundle *bundle, const tmk_validate_options *options,
                                tmk_report **out);
TMK_API void tmk_report_free(tmk_report *report);

TMK_API size_t tmk_report_error_count(const tmk_report *report);
TMK_API size_t tmk_report_warning_count(const tmk_report *report);
TMK_API size_t tmk_report_size(const tmk_report *report);
TMK_API const char *tmk_report_rule(const tmk_report *report, size_t index);
TMK_API tmk_severity tmk_report_severity(const tmk_report *report, size_t index);
TMK_API const char *tmk_report_location(const tmk_report *report, size_t index);
TMK_API const char *tmk_report_message(const tmk_report *report, size_t index);
TMK_API tmk_status tmk_report_to_text(const tmk_report *report, char **out);
TMK_API tmk_status tmk_report_to_json(const tmk_report *report, char **out);

/* ---- simulation ------------------------------------------------------- */

typedef struct tmk_sim_options {
  int max_steps;           /* >= 1 */
  int default_loop_bound;  /* >= 1 */
  int allow_disconnected_regions;
} tmk_sim_options;

TMK_API void tmk_sim_options_init(tmk_sim_options *options);

/* On TMK_E_BUDGET `*out` still receives the partial trace. */
TMK_API tmk_status tmk_simulate(const tmk_bundle *bundle, const tmk_sim_options *options,
                                tmk_trace **out);
TMK_API void tmk_trace_free(tmk_trace *trace);

TMK_API size_t tmk_trace_step_count(const tmk_trace *trace);
TMK_API int tmk_trace_complete(const tmk_trace *trace);
TMK_API const char *tmk_trace_step_event(const tmk_trace *trace, size_t step);
TMK_API size_t tmk_trace_step_action_count(const tmk_trace *trace, size_t step);
TMK_API const char *tmk_trace_step_action(const tmk_trace *trace, size_t step, size_t action);
TMK_API tmk_status tmk_trace_to_text(const tmk_trace *trace, char **out);
TMK_API tmk_status tmk_trace_to_json(const tmk_trace *trace, char **out);

/* Number of admissible event orderings, with unbounded loops given
 * `default_loop_bound`, stopping at `limit` (0 for no limit). */
TMK_API tmk_status tmk_count_orderings(const tmk_bundle *bundle, int default_loop_bound,
                                       size_t limit, size_t *out);

#ifdef __cplusplus
}
#endif

#endif /* TMKIT_TMKIT_H */
