// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "tmkit/bundle.hpp"
#include "tmkit/dynamics.hpp"
#include "tmkit/model.hpp"

namespace tmkit {

/// Re-inserts elided gate chains. Every boundary flow A -> B that is not
/// transfer -> transfer becomes
///
///   A -> release -> transfer(out) || transfer(in) -> receive -> B
///
/// with the release/out-transfer owned by A's thimac and the in-transfer and
/// receive owned by B's thimac (four new actions, five new edges, the
/// original edge removed). The result is in strict mode. A model that is
/// already strict-valid comes back unchanged apart from its mode.
///
/// Throws INVALID_INPUT when the model fails simplified validation or has a
/// trigger that breaks V4, since no gate insertion can repair that.
StaticModel normalize(const StaticModel& model);

/// Normalizes the static model of a bundle. Every event whose region held
/// both ends of a rewritten flow also gains that flow's four gate actions,
/// so regions stay connected. Region connectivity is then rechecked under
/// `options`.
ModelBundle normalize(const ModelBundle& bundle, const EventOptions& options = {});

/// All maximal simple paths along flow edges from `start`, sorted
/// lexicographically. Throws DANGLING for an unknown start and INVALID_INPUT
/// when the model is not strict-valid.
std::vector<std::vector<ActionId>> flow_paths(const StaticModel& model,
                                              const ActionId& start);

}  // namespace tmkit
