// SPDX-License-Identifier: Apache-2.0
#include "tmkit/validate.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace tmkit {

namespace {

constexpr std::size_t idx(ActionKind k) { return static_cast<std::size_t>(k); }

using K = ActionKind;

std::string edge_location(const Edge& e) {
  return e.src.str() + " -> " + e.dst.str();
}

std::string kind_pair(ActionKind from, ActionKind to) {
  return std::string(to_string(from)) + " -> " + std::string(to_string(to));
}

}  // namespace

RuleTable RuleTable::strict() {
  RuleTable t;
  t.mode = Mode::Strict;
  t.cross_flow[idx(K::Transfer)][idx(K::Transfer)] = true;
  t.intra_flow[idx(K::Transfer)][idx(K::Receive)] = true;
  t.intra_flow[idx(K::Receive)][idx(K::Process)] = true;
  t.intra_flow[idx(K::Receive)][idx(K::Release)] = true;
  t.intra_flow[idx(K::Create)][idx(K::Process)] = true;
  t.intra_flow[idx(K::Create)][idx(K::Release)] = true;
  t.intra_flow[idx(K::Process)][idx(K::Release)] = true;
  t.intra_flow[idx(K::Release)][idx(K::Transfer)] = true;
  t.trigger_sources[idx(K::Process)] = true;
  t.trigger_sources[idx(K::Create)] = true;
  t.trigger_targets[idx(K::Create)] = true;
  t.severity = {Severity::Error, Severity::Error, Severity::Error,
                Severity::Error, Severity::Warning};
  return t;
}

RuleTable RuleTable::simplified() {
  RuleTable t = strict();
  t.mode = Mode::Simplified;
  for (K from : {K::Create, K::Process, K::Receive}) {
    for (K to : {K::Process, K::Release}) {
      t.cross_flow[idx(from)][idx(to)] = true;
    }
  }
  t.severity[3] = Severity::Warning;
  return t;
}

RuleTable RuleTable::for_mode(Mode mode) {
  return mode == Mode::Strict ? strict() : simplified();
}

RuleTable RuleTable::with_relaxed_triggers() const {
  RuleTable t = *this;
  if (t.severity[3]) t.severity[3] = Severity::Warning;
  return t;
}

bool RuleTable::cross_allowed(ActionKind from, ActionKind to) const {
  return cross_flow[idx(from)][idx(to)];
}

bool RuleTable::intra_allowed(ActionKind from, ActionKind to) const {
  return intra_flow[idx(from)][idx(to)];
}

bool is_elided_boundary_flow(const Edge& edge, const ModelIndex& index) {
  if (edge.kind != EdgeKind::Flow) return false;
  const ActionNode* s = index.action(edge.src);
  const ActionNode* d = index.action(edge.dst);
  if (s == nullptr || d == nullptr || s->owner == d->owner) return false;
  return !(s->kind == K::Transfer && d->kind == K::Transfer);
}

// ---------------------------------------------------------------------------

ValidationReport check_integrity(const StaticModel& model) {
  ValidationReport report;

  std::unordered_map<std::string, int> seen;
  for (const auto& t : model.thimacs) {
    if (++seen[t.id.str()] == 2) {
      report.add("DUPID", Severity::Error, t.id.str(), "duplicate identifier");
    }
  }
  for (const auto& a : model.actions) {
    if (++seen[a.id.str()] == 2) {
      report.add("DUPID", Severity::Error, a.id.str(), "duplicate identifier");
    }
  }

  ModelIndex index(model);

  for (const auto& t : model.thimacs) {
    if (t.parent) {
      const Thimac* p = index.thimac(*t.parent);
      if (p == nullptr) {
        report.add("DANGLING", Severity::Error, t.id.str(),
                   "parent '" + t.parent->str() + "' does not exist");
      } else if (std::find(p->children.begin(), p->children.end(), t.id) ==
                 p->children.end()) {
        report.add("CONTAINMENT", Severity::Error, t.id.str(),
                   "parent does not list this thimac as a child");
      }
    }
    if (t.id.str() != join_path(t.parent, t.name)) {
      report.add("CONTAINMENT", Severity::Error, t.id.str(),
                 "identifier does not match containment path");
    }
    for (const auto& c : t.children) {
      const Thimac* child = index.thimac(c);
      if (child == nullptr) {
        report.add("DANGLING", Severity::Error, t.id.str(),
                   "child '" + c.str() + "' does not exist");
      } else if (child->parent != t.id) {
        report.add("CONTAINMENT", Severity::Error, c.str(),
                   "listed under '" + t.id.str() + "' but has another parent");
      }
    }
    for (const auto& a : t.actions) {
      const ActionNode* node = index.action(a);
      if (node == nullptr) {
        report.add("DANGLING", Severity::Error, t.id.str(),
                   "action '" + a.str() + "' does not exist");
      } else if (node->owner != t.id) {
        report.add("CONTAINMENT", Severity::Error, a.str(),
                   "listed under '" + t.id.str() + "' but owned elsewhere");
      }
    }
  }

  for (const auto& a : model.actions) {
    const Thimac* owner = index.thimac(a.owner);
    if (owner == nullptr) {
      report.add("DANGLING", Severity::Error, a.id.str(),
                 "owner '" + a.owner.str() + "' does not exist");
    } else if (std::find(owner->actions.begin(), owner->actions.end(), a.id) ==
               owner->actions.end()) {
      report.add("CONTAINMENT", Severity::Error, a.id.str(),
                 "owner does not list this action");
    }
    if (!a.id.str().starts_with(a.owner.str() + ".") ||
        a.name().empty()) {
      report.add("CONTAINMENT", Severity::Error, a.id.str(),
                 "identifier does not match owner path");
    }
  }

  for (const auto& e : model.edges) {
    for (const ActionId* end : {&e.src, &e.dst}) {
      if (index.action(*end) == nullptr) {
        report.add("DANGLING", Severity::Error, edge_location(e),
                   "endpoint '" + end->str() + "' does not exist");
      }
    }
    if (e.src == e.dst) {
      report.add("SELF_EDGE", Severity::Error, edge_location(e),
                 "self-edges are not allowed in the static model");
    }
  }

  // Containment must be a forest: walking parents from any thimac terminates.
  for (const auto& t : model.thimacs) {
    std::unordered_set<ThimacId> path{t.id};
    const Thimac* cur = &t;
    while (cur->parent) {
      const Thimac* p = index.thimac(*cur->parent);
      if (p == nullptr) break;
      if (!path.insert(p->id).second) {
        report.add("CONTAINMENT", Severity::Error, t.id.str(),
                   "containment cycle");
        break;
      }
      cur = p;
    }
  }

  report.sort();
  return report;
}

ValidationReport validate_static(const StaticModel& model,
                                 const ValidateOptions& options) {
  RuleTable rules = RuleTable::for_mode(model.mode);
  if (options.relaxed_triggers) rules = rules.with_relaxed_triggers();
  return validate_static(model, rules);
}

ValidationReport validate_static(const StaticModel& model,
                                 const RuleTable& rules) {
  ValidationReport report = check_integrity(model);
  if (report.has_errors()) return report;

  ModelIndex index(model);
  const auto& sev = rules.severity;

  std::unordered_map<ActionId, int> release_out;
  std::unordered_map<ActionId, int> receive_in;

  for (const auto& e : model.edges) {
    const ActionNode& s = *index.action(e.src);
    const ActionNode& d = *index.action(e.dst);

    if (e.kind == EdgeKind::Trigger) {
      if (sev[3] && (!rules.trigger_sources[idx(s.kind)] ||
                     !rules.trigger_targets[idx(d.kind)])) {
        report.add("V4", *sev[3], edge_location(e),
                   "trigger " + kind_pair(s.kind, d.kind) +
                       " must run from process/create to create");
      }
      continue;
    }

    if (s.owner != d.owner) {
      if (sev[0] && !rules.cross_allowed(s.kind, d.kind)) {
        report.add("V1", *sev[0], edge_location(e),
                   "flow " + kind_pair(s.kind, d.kind) +
                       " crosses a thimac boundary outside a transfer pair");
      }
    } else if (sev[1] && !rules.intra_allowed(s.kind, d.kind)) {
      report.add("V2", *sev[1], edge_location(e),
                 "flow " + kind_pair(s.kind, d.kind) +
                     " is not a permitted adjacency inside a thimac");
    }
    if (s.kind == K::Release) ++release_out[s.id];
    if (d.kind == K::Receive) ++receive_in[d.id];
  }

  if (sev[2]) {
    for (const auto& a : model.actions) {
      if (rules.single_release_out && a.kind == K::Release) {
        auto it = release_out.find(a.id);
        if (it != release_out.end() && it->second > 1) {
          report.add("V3", *sev[2], a.id.str(),
                     "release has " + std::to_string(it->second) +
                         " outgoing flows");
        }
      }
      if (rules.single_receive_in && a.kind == K::Receive) {
        auto it = receive_in.find(a.id);
        if (it != receive_in.end() && it->second > 1) {
          report.add("V3", *sev[2], a.id.str(),
                     "receive has " + std::to_string(it->second) +
                         " incoming flows");
        }
      }
    }
  }

  if (sev[4]) {
    std::unordered_map<ActionId, std::vector<ActionId>> succ;
    std::unordered_set<ActionId> has_incoming;
    for (const auto& e : model.edges) {
      if (e.kind != EdgeKind::Flow) continue;
      succ[e.src].push_back(e.dst);
      has_incoming.insert(e.dst);
    }
    std::unordered_set<ActionId> reached;
    std::deque<ActionId> queue;
    for (const auto& a : model.actions) {
      const bool entry_gate =
          a.kind == K::Transfer && !has_incoming.contains(a.id);
      if (a.kind == K::Create || entry_gate) {
        reached.insert(a.id);
        queue.push_back(a.id);
      }
    }
    while (!queue.empty()) {
      ActionId cur = std::move(queue.front());
      queue.pop_front();
      for (const auto& n : succ[cur]) {
        if (reached.insert(n).second) queue.push_back(n);
      }
    }
    for (const auto& a : model.actions) {
      if (a.kind != K::Create && !reached.contains(a.id)) {
        report.add("V5", *sev[4], a.id.str(),
                   "not flow-reachable from any create or entry transfer");
      }
    }
  }

  report.sort();
  return report;
}

}  // namespace tmkit
