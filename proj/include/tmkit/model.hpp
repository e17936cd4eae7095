// SPDX-License-Identifier: Apache-2.0
//
// Static thinging-machine model: a forest of thimacs whose members are
// action nodes of the five generic kinds, linked by flow and trigger edges.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tmkit/ids.hpp"

namespace tmkit {

enum class ActionKind : std::uint8_t { Create, Process, Release, Transfer, Receive };

inline constexpr std::array<ActionKind, 5> kActionKinds = {
    ActionKind::Create, ActionKind::Process, ActionKind::Release,
    ActionKind::Transfer, ActionKind::Receive};

/// Lower-case keyword ("create", "process", ...).
std::string_view to_string(ActionKind kind) noexcept;
std::optional<ActionKind> parse_action_kind(std::string_view text) noexcept;

enum class EdgeKind : std::uint8_t { Flow, Trigger };
std::string_view to_string(EdgeKind kind) noexcept;

/// Strict models spell out every gate; simplified models may elide the
/// release/transfer/receive chain on flows that cross a thimac boundary.
enum class Mode : std::uint8_t { Strict, Simplified };
std::string_view to_string(Mode mode) noexcept;

struct Thimac {
  ThimacId id;  // dotted containment path
  std::string name;
  std::optional<ThimacId> parent;
  std::vector<ThimacId> children;
  std::vector<ActionId> actions;

  bool operator==(const Thimac&) const = default;
};

struct ActionNode {
  ActionId id;  // owner path + "." + name
  ActionKind kind = ActionKind::Create;
  ThimacId owner;
  std::optional<std::string> label;

  /// Last path segment.
  [[nodiscard]] std::string_view name() const noexcept;

  bool operator==(const ActionNode&) const = default;
};

struct Edge {
  ActionId src;
  ActionId dst;
  EdgeKind kind = EdgeKind::Flow;
  std::optional<int> marker;  // diagram numbering, metadata only

  bool operator==(const Edge&) const = default;
};

struct StaticModel {
  std::string name;
  Mode mode = Mode::Strict;
  std::vector<Thimac> thimacs;
  std::vector<ActionNode> actions;
  std::vector<Edge> edges;

  bool operator==(const StaticModel&) const = default;
};

/// Hash lookup over a model. Holds pointers into the model, so it must not
/// outlive it or survive mutation of its vectors. First occurrence wins on
/// duplicate ids.
class ModelIndex {
 public:
  explicit ModelIndex(const StaticModel& model);

  [[nodiscard]] const ActionNode* action(const ActionId& id) const;
  [[nodiscard]] const Thimac* thimac(const ThimacId& id) const;
  /// Declaration position of an action, used for deterministic tie-breaks.
  [[nodiscard]] std::optional<std::size_t> position(const ActionId& id) const;

  /// Actions owned by the thimac or any of its descendants, declaration order.
  [[nodiscard]] std::vector<ActionId> actions_within(const ThimacId& id) const;

 private:
  const StaticModel* model_;
  std::unordered_map<ActionId, std::size_t> actions_;
  std::unordered_map<ThimacId, std::size_t> thimacs_;
};

/// Reorders thimacs into containment pre-order and actions into
/// (owner pre-order, per-thimac order). Edges keep their order. Requires
/// referential integrity.
StaticModel canonicalize(StaticModel model);

/// Incremental construction with path-derived ids. Throws DUPID on sibling
/// name clashes and UNDEF on unknown owners or edge endpoints.
class ModelBuilder {
 public:
  explicit ModelBuilder(std::string name, Mode mode = Mode::Strict);

  ThimacId add_thimac(const std::string& name,
                      const std::optional<ThimacId>& parent = std::nullopt);
  ActionId add_action(const ThimacId& owner, ActionKind kind,
                      const std::string& name,
                      std::optional<std::string> label = std::nullopt);
  void add_edge(const ActionId& src, const ActionId& dst, EdgeKind kind,
                std::optional<int> marker = std::nullopt);

  [[nodiscard]] bool has_thimac(const ThimacId& id) const;
  [[nodiscard]] bool has_action(const ActionId& id) const;
  /// True when `name` is free among the children and actions of `scope`.
  [[nodiscard]] bool name_free(const std::optional<ThimacId>& scope,
                               const std::string& name) const;

  [[nodiscard]] StaticModel build() &&;

 private:
  StaticModel model_;
  std::unordered_map<ThimacId, std::size_t> thimacs_;
  std::unordered_map<ActionId, std::size_t> actions_;
};

/// Joins a scope and a name into a dotted path.
std::string join_path(const std::optional<ThimacId>& scope,
                      const std::string& name);

}  // namespace tmkit
