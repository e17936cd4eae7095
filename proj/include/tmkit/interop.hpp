// SPDX-License-Identifier: Apache-2.0
//
// Exchange formats: Graphviz DOT output, versioned JSON model interchange and
// the activity-diagram importer.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tmkit/bundle.hpp"

namespace tmkit {

// ---------------------------------------------------------------------------
// DOT

struct DotOptions {
  /// Draw each event as a note node tied to its region members.
  bool show_events = false;
};

/// One nested `cluster_<path>` subgraph per thimac, one node per action
/// labeled `kind: label`, trigger edges dashed.
std::string export_dot(const ModelBundle& bundle, const DotOptions& options = {});

/// Recursive-descent check of the DOT subset (graph, subgraph, node, edge and
/// attribute statements). Returns an error message, or nullopt when valid.
std::optional<std::string> check_dot_syntax(std::string_view text);

// ---------------------------------------------------------------------------
// JSON

inline constexpr int kJsonSchemaVersion = 1;

std::string export_json(const ModelBundle& bundle);

/// Throws VERSION for a schema version other than 1 and SCHEMA, naming the
/// offending JSON pointer, for any structural problem.
ModelBundle import_json(std::string_view text);

// ---------------------------------------------------------------------------
// Activity diagrams

enum class AdNodeKind { Action, Initial, Final };
enum class AdEdgeKind { Control, Object };

struct AdPartition {
  std::string id;
  std::string name;
};

struct AdNode {
  std::string id;
  std::string name;
  AdNodeKind kind = AdNodeKind::Action;
  std::optional<std::string> partition;
};

struct AdEdge {
  std::string from;
  std::string to;
  AdEdgeKind kind = AdEdgeKind::Control;
  std::optional<std::string> object_name;
};

struct AdDocument {
  std::vector<AdPartition> partitions;
  std::vector<AdNode> nodes;
  std::vector<AdEdge> edges;
};

/// Reads the interchange JSON (`partitions`, `nodes`, `edges`). Throws SCHEMA
/// for malformed documents and UNSUPPORTED for node kinds other than
/// action, initial and final.
AdDocument parse_activity_json(std::string_view text);

/// Mechanical translation: partitions become top-level thimacs, actions
/// become processes with one event each, object edges become gate chains
/// and control edges become behavior edges. Throws UNDEF for unresolved
/// references, MULTI_INITIAL for more than one initial node and UNSUPPORTED
/// for object edges that do not join two actions.
ModelBundle import_activity(const AdDocument& doc);

}  // namespace tmkit
