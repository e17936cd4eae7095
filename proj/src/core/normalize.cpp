// SPDX-License-Identifier: Apache-2.0
#include "tmkit/normalize.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "tmkit/error.hpp"
#include "tmkit/validate.hpp"

namespace tmkit {

namespace {

class FreshNames {
 public:
  explicit FreshNames(const StaticModel& model) {
    for (const auto& t : model.thimacs) used_.insert(t.id.str());
    for (const auto& a : model.actions) used_.insert(a.id.str());
  }

  ActionId take(const ThimacId& owner, const std::string& base) {
    std::string path = owner.str() + "." + base;
    for (int n = 2; used_.contains(path); ++n) {
      path = owner.str() + "." + base + "_" + std::to_string(n);
    }
    used_.insert(path);
    return ActionId{path};
  }

 private:
  std::unordered_set<std::string> used_;
};

struct GateChain {
  ActionId src;
  ActionId dst;
  std::array<ActionId, 4> gates;
};

StaticModel normalize_model(const StaticModel& model, std::vector<GateChain>* chains) {
  const ValidationReport pre = validate_static(model, RuleTable::simplified());
  for (const auto& v : pre.violations()) {
    if (v.severity == Severity::Error || v.rule == "V4") {
      throw Error(ErrorCode::InvalidInput,
                  "model is not normalizable: " + v.rule + " at " + v.location +
                      ": " + v.message);
    }
  }

  StaticModel out = model;
  out.mode = Mode::Strict;

  ModelIndex index(model);
  FreshNames names(model);
  std::unordered_map<ThimacId, std::size_t> thimac_pos;
  for (std::size_t i = 0; i < out.thimacs.size(); ++i) {
    thimac_pos.emplace(out.thimacs[i].id, i);
  }

  auto add = [&](const ThimacId& owner, ActionKind kind, const std::string& base,
                 const std::string& label) {
    ActionId id = names.take(owner, base);
    out.actions.push_back(ActionNode{id, kind, owner, label});
    out.thimacs[thimac_pos.at(owner)].actions.push_back(id);
    return id;
  };

  std::vector<Edge> edges;
  edges.reserve(model.edges.size());
  for (const auto& e : model.edges) {
    if (!is_elided_boundary_flow(e, index)) {
      edges.push_back(e);
      continue;
    }
    const ActionNode& src = *index.action(e.src);
    const ActionNode& dst = *index.action(e.dst);
    const std::string base(src.name());
    const std::string label = src.label.value_or(base);

    ActionId release = add(src.owner, ActionKind::Release, base + "_release",
                           label + " (release)");
    ActionId out_gate = add(src.owner, ActionKind::Transfer, base + "_out",
                            label + " (out)");
    ActionId in_gate = add(dst.owner, ActionKind::Transfer, base + "_in",
                           label + " (in)");
    ActionId receive = add(dst.owner, ActionKind::Receive, base + "_receive",
                           label + " (receive)");

    edges.push_back(Edge{e.src, release, EdgeKind::Flow, std::nullopt});
    edges.push_back(Edge{release, out_gate, EdgeKind::Flow, std::nullopt});
    edges.push_back(Edge{out_gate, in_gate, EdgeKind::Flow, e.marker});
    edges.push_back(Edge{in_gate, receive, EdgeKind::Flow, std::nullopt});
    edges.push_back(Edge{receive, e.dst, EdgeKind::Flow, std::nullopt});
    if (chains) chains->push_back({e.src, e.dst, {release, out_gate, in_gate, receive}});
  }
  out.edges = std::move(edges);
  return canonicalize(std::move(out));
}

}  // namespace

StaticModel normalize(const StaticModel& model) { return normalize_model(model, nullptr); }

ModelBundle normalize(const ModelBundle& bundle, const EventOptions& options) {
  std::vector<GateChain> chains;
  ModelBundle out = bundle;
  out.model = normalize_model(bundle.model, &chains);
  for (auto& ev : out.events) {
    const std::unordered_set<ActionId> before(ev.region.actions.begin(),
                                              ev.region.actions.end());
    // Paths naming whole thimacs already pick up gates owned there.
    const Event widened = define_event(out.model, ev.id.str(), ev.paths,
                                       {.allow_disconnected_regions = true});
    const std::unordered_set<ActionId> covered(widened.region.actions.begin(),
                                               widened.region.actions.end());
    for (const auto& chain : chains) {
      if (!before.contains(chain.src) || !before.contains(chain.dst)) continue;
      for (const auto& gate : chain.gates) {
        if (!covered.contains(gate)) ev.paths.push_back(gate.str());
      }
    }
    ev.region = define_event(out.model, ev.id.str(), ev.paths, options).region;
  }
  return out;
}

std::vector<std::vector<ActionId>> flow_paths(const StaticModel& model,
                                              const ActionId& start) {
  ModelIndex index(model);
  if (index.action(start) == nullptr) {
    throw Error(ErrorCode::Dangling, "unknown action '" + start.str() + "'");
  }
  const ValidationReport report = validate_static(model, RuleTable::strict());
  if (report.has_errors()) {
    const auto& v = report.violations().front();
    throw Error(ErrorCode::InvalidInput, "model is not strict-valid: " + v.rule +
                                             " at " + v.location);
  }

  std::unordered_map<ActionId, std::vector<ActionId>> succ;
  for (const auto& e : model.edges) {
    if (e.kind == EdgeKind::Flow) succ[e.src].push_back(e.dst);
  }

  std::vector<std::vector<ActionId>> paths;
  std::vector<ActionId> path{start};
  std::unordered_set<ActionId> on_path{start};

  std::function<void()> extend = [&] {
    bool extended = false;
    for (const auto& next : succ[path.back()]) {
      if (on_path.contains(next)) continue;
      extended = true;
      path.push_back(next);
      on_path.insert(next);
      extend();
      on_path.erase(next);
      path.pop_back();
    }
    if (!extended) paths.push_back(path);
  };
  extend();

  std::sort(paths.begin(), paths.end());
  paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
  return paths;
}

}  // namespace tmkit
