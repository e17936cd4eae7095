// SPDX-License-Identifier: Apache-2.0
//
// Flow-grammar validation of static models.
//
// Rules, checked after referential integrity holds:
//   V1  a flow between different thimacs must be a permitted boundary pair
//       (strict: transfer -> transfer only)
//   V2  a flow inside one thimac must be a permitted adjacency:
//       transfer->receive, receive->{process, release},
//       create->{process, release}, process->release, release->transfer
//   V3  a release has at most one outgoing flow, a receive at most one
//       incoming flow
//   V4  triggers go from process/create to create
//   V5  every non-create action is flow-reachable from a create or from an
//       entry transfer (warning)
#pragma once

#include <array>
#include <optional>

#include "tmkit/model.hpp"
#include "tmkit/report.hpp"

namespace tmkit {

/// The rule set as data. Relaxations are table edits, not code paths.
struct RuleTable {
  using KindMatrix = std::array<std::array<bool, 5>, 5>;
  using KindSet = std::array<bool, 5>;

  int version = 1;
  Mode mode = Mode::Strict;
  KindMatrix cross_flow{};  // V1
  KindMatrix intra_flow{};  // V2
  bool single_release_out = true;  // V3
  bool single_receive_in = true;   // V3
  KindSet trigger_sources{};       // V4
  KindSet trigger_targets{};       // V4
  /// Severity of V1..V5; nullopt disables the rule.
  std::array<std::optional<Severity>, 5> severity{};

  static RuleTable strict();
  /// Strict adjacency inside thimacs, but boundary flows may elide the gate
  /// chain: {create, process, receive} -> {process, release} is accepted
  /// across thimacs. V4 and V5 are warnings.
  static RuleTable simplified();
  static RuleTable for_mode(Mode mode);

  /// Same table with V4 downgraded to a warning.
  [[nodiscard]] RuleTable with_relaxed_triggers() const;

  [[nodiscard]] bool cross_allowed(ActionKind from, ActionKind to) const;
  [[nodiscard]] bool intra_allowed(ActionKind from, ActionKind to) const;
};

struct ValidateOptions {
  bool relaxed_triggers = false;
};

/// Validates against the table for the model's declared mode.
ValidationReport validate_static(const StaticModel& model,
                                 const ValidateOptions& options = {});
ValidationReport validate_static(const StaticModel& model,
                                 const RuleTable& rules);

/// Only the referential-integrity stage (DANGLING, DUPID, SELF_EDGE,
/// CONTAINMENT). Empty means the model is safe to index.
ValidationReport check_integrity(const StaticModel& model);

/// A boundary flow that is not already transfer -> transfer, i.e. one whose
/// gate chain has been elided.
bool is_elided_boundary_flow(const Edge& edge, const ModelIndex& index);

}  // namespace tmkit
