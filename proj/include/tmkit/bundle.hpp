// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tmkit/error.hpp"
#include "tmkit/ids.hpp"
#include "tmkit/model.hpp"

namespace tmkit {

/// Actions of an event plus the static edges with both ends inside it.
struct Region {
  std::vector<ActionId> actions;  // model declaration order
  std::vector<Edge> induced;      // model edge order

  bool operator==(const Region&) const = default;
};

struct Event {
  EventId id;
  std::optional<std::string> label;
  std::vector<std::string> paths;  // region paths as written
  Region region;
  std::optional<std::string> time;  // opaque annotation

  bool operator==(const Event&) const = default;
};

struct BehaviorEdge {
  EventId from;
  EventId to;
  std::optional<int> repeat;  // loop bound, >= 1

  bool operator==(const BehaviorEdge&) const = default;
};

/// Chronology of events. `events` lists every declared event in declaration
/// order, including ones no edge mentions.
struct BehaviorModel {
  std::vector<EventId> events;
  std::vector<BehaviorEdge> edges;

  bool operator==(const BehaviorModel&) const = default;
};

struct ModelBundle {
  StaticModel model;
  std::vector<Event> events;
  BehaviorModel behavior;
  /// Source positions keyed by action or event id. Not part of equality.
  std::map<std::string, SourceSpan> spans;

  [[nodiscard]] const Event* find_event(const EventId& id) const;

  bool operator==(const ModelBundle& other) const {
    return model == other.model && events == other.events &&
           behavior == other.behavior;
  }
};

}  // namespace tmkit
