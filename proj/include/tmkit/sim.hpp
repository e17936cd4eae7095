// SPDX-License-Identifier: Apache-2.0
//
// Deterministic execution of behavior models, plus a brute-force enumerator
// of admissible event orderings that serves as the simulator's oracle.
#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tmkit/bundle.hpp"
#include "tmkit/error.hpp"

namespace tmkit {

enum class TieBreak { DeclarationOrder };

struct SimConfig {
  int max_steps = 10000;
  /// Bound given to loop back edges that carry no explicit repeat bound.
  int default_loop_bound = 1;
  TieBreak tie_break = TieBreak::DeclarationOrder;
  bool allow_disconnected_regions = false;
};

struct TraceStep {
  int index = 0;
  EventId event;
  std::vector<ActionId> actions;  // firing order within the event
  std::optional<std::string> time;

  bool operator==(const TraceStep&) const = default;
};

struct Trace {
  std::vector<TraceStep> steps;
  /// False when the step budget ran out with events still enabled.
  bool complete = true;

  [[nodiscard]] std::vector<EventId> event_sequence() const;

  /// Lines of `step<TAB>event<TAB>action,action,...`.
  [[nodiscard]] std::string to_text() const;
  [[nodiscard]] std::string to_json() const;

  bool operator==(const Trace&) const = default;
};

/// Thrown by simulate when the budget is exhausted; carries the partial trace.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(Trace partial, int max_steps);
  [[nodiscard]] const Trace& trace() const noexcept { return trace_; }

 private:
  Trace trace_;
};

/// Fires events under strict precedence: an event runs only after every
/// predecessor has finished. A loop (back edge u -> v with bound k) runs its
/// body k times in sequence before anything downstream of it starts. Ties
/// among enabled events go to the earliest declared one, one event per step.
///
/// Throws INVALID_INPUT when the static model is not strict-valid, the
/// behavior has errors, loops overlap or nest, or a region's flow/trigger
/// subgraph is cyclic. Throws BudgetExceeded when `max_steps` is reached
/// with events still enabled.
Trace simulate(const ModelBundle& bundle, const SimConfig& config = {});

/// Topological order of a region over its flow and trigger edges, ties by
/// model declaration order. Throws INVALID_INPUT on a cycle.
std::vector<ActionId> region_firing_order(const StaticModel& model,
                                          const Region& region);

using Ordering = std::vector<EventId>;

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();
inline constexpr std::size_t kMaxUnrolledEvents = 12;

/// Calls `visit` for each linear extension of the behavior's precedence
/// order with loops unrolled to their bounds, in lexicographic order of
/// (declaration index, iteration). Stops early when `visit` returns false or
/// `limit` orderings have been produced; returns the number produced.
///
/// Throws UNBOUNDED_LOOP when a cycle has no bound and TOO_LARGE when the
/// unrolled graph exceeds kMaxUnrolledEvents.
std::size_t for_each_ordering(const BehaviorModel& behavior,
                              const std::function<bool(const Ordering&)>& visit,
                              std::size_t limit = kUnlimited);

std::vector<Ordering> enumerate_orderings(const BehaviorModel& behavior,
                                          std::size_t limit = kUnlimited);

std::size_t count_orderings(const BehaviorModel& behavior,
                            std::size_t limit = kUnlimited);

}  // namespace tmkit
