// SPDX-License-Identifier: Apache-2.0
//
// Events (regions of the static model plus time) and behavior models
// (chronologies of events with bounded repetition).
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tmkit/bundle.hpp"
#include "tmkit/report.hpp"

namespace tmkit {

struct EventOptions {
  /// Skip the weak-connectivity requirement on regions.
  bool allow_disconnected_regions = false;
};

/// Resolves region paths (thimac paths mean every action inside the thimac,
/// sub-thimacs included) and checks weak connectivity of the induced
/// subgraph. Throws UNDEF for unresolved paths and REGION_DISCONNECTED,
/// naming the components, for a disconnected region.
Event define_event(const StaticModel& model, const std::string& name,
                   const std::vector<std::string>& paths,
                   const EventOptions& options = {});

/// Weakly connected components of the region over its induced edges.
std::vector<std::vector<ActionId>> region_components(const StaticModel& model,
                                                     const Region& region);

struct BehaviorOptions {
  bool allow_disconnected_regions = false;
};

/// Errors: UNDEF for edges naming unknown events, UNBOUNDED_LOOP for every
/// cycle carrying no repeat bound, REGION_DISCONNECTED for disconnected
/// regions. Warnings: UNREACHABLE events, COVERAGE for static actions in no
/// region, REPEAT_NOT_LOOP for a bound on an edge that closes no cycle.
/// Sorted canonically, so edge declaration order does not matter.
ValidationReport validate_behavior(const BehaviorModel& behavior,
                                   const std::vector<Event>& events,
                                   const StaticModel& model,
                                   const BehaviorOptions& options = {});

/// Returns a copy where every unbounded edge that closes a cycle gets
/// `bound`. Back edges are found by depth-first search from events in
/// declaration order, ignoring edges that already carry a bound.
BehaviorModel with_default_loop_bound(const BehaviorModel& behavior, int bound);

}  // namespace tmkit
