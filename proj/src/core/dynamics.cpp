// SPDX-License-Identifier: Apache-2.0
#include "tmkit/dynamics.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "tmkit/error.hpp"

namespace tmkit {

const Event* ModelBundle::find_event(const EventId& id) const {
  for (const auto& e : events) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

std::vector<std::vector<ActionId>> region_components(const StaticModel& model,
                                                     const Region& region) {
  std::unordered_map<ActionId, std::size_t> pos;
  for (std::size_t i = 0; i < region.actions.size(); ++i) {
    pos.emplace(region.actions[i], i);
  }
  std::vector<std::size_t> parent(region.actions.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : model.edges) {
    auto a = pos.find(e.src);
    auto b = pos.find(e.dst);
    if (a == pos.end() || b == pos.end()) continue;
    parent[find(a->second)] = find(b->second);
  }
  std::vector<std::vector<ActionId>> comps;
  std::unordered_map<std::size_t, std::size_t> comp_of_root;
  for (std::size_t i = 0; i < region.actions.size(); ++i) {
    auto [it, fresh] = comp_of_root.try_emplace(find(i), comps.size());
    if (fresh) comps.emplace_back();
    comps[it->second].push_back(region.actions[i]);
  }
  return comps;
}

Event define_event(const StaticModel& model, const std::string& name,
                   const std::vector<std::string>& paths,
                   const EventOptions& options) {
  ModelIndex index(model);
  std::unordered_set<ActionId> members;
  for (const auto& p : paths) {
    if (index.action(ActionId{p}) != nullptr) {
      members.insert(ActionId{p});
    } else if (index.thimac(ThimacId{p}) != nullptr) {
      for (auto& a : index.actions_within(ThimacId{p})) members.insert(std::move(a));
    } else {
      throw Error(ErrorCode::Undef, "event " + name + ": unknown path '" + p + "'");
    }
  }
  if (members.empty()) {
    throw Error(ErrorCode::InvalidInput, "event " + name + ": region is empty");
  }

  Event event;
  event.id = EventId{name};
  event.paths = paths;
  for (const auto& a : model.actions) {
    if (members.contains(a.id)) event.region.actions.push_back(a.id);
  }
  for (const auto& e : model.edges) {
    if (members.contains(e.src) && members.contains(e.dst)) {
      event.region.induced.push_back(e);
    }
  }

  if (!options.allow_disconnected_regions) {
    auto comps = region_components(model, event.region);
    if (comps.size() > 1) {
      std::vector<std::string> listed;
      for (const auto& c : comps) {
        std::vector<std::string> ids;
        for (const auto& a : c) ids.push_back(a.str());
        listed.push_back("{" + join(ids, ", ") + "}");
      }
      throw Error(ErrorCode::RegionDisconnected,
                  "event " + name + ": region splits into " +
                      std::to_string(comps.size()) + " components " +
                      join(listed, " "));
    }
  }
  return event;
}

// ---------------------------------------------------------------------------

namespace {

/// Strongly connected components (Tarjan) that contain a cycle: size > 1 or
/// a self-loop. Members sorted, components sorted.
std::vector<std::vector<std::size_t>> cyclic_components(
    std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<bool> self(n, false);
  for (auto [a, b] : edges) {
    adj[a].push_back(b);
    if (a == b) self[a] = true;
  }
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  std::vector<std::vector<std::size_t>> out;

  std::function<void(std::size_t)> strong = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : adj[v]) {
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> comp;
      std::size_t w = 0;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      if (comp.size() > 1 || self[v]) {
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) strong(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool reaches(const std::vector<std::vector<std::size_t>>& adj, std::size_t from,
             std::size_t to) {
  std::vector<bool> seen(adj.size(), false);
  std::deque<std::size_t> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    if (v == to) return true;
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace

ValidationReport validate_behavior(const BehaviorModel& behavior,
                                   const std::vector<Event>& events,
                                   const StaticModel& model,
                                   const BehaviorOptions& options) {
  ValidationReport report;
  ModelIndex index(model);

  std::unordered_map<EventId, const Event*> defined;
  for (const auto& e : events) {
    if (!defined.emplace(e.id, &e).second) {
      report.add("DUPID", Severity::Error, e.id.str(), "duplicate event");
    }
  }

  std::unordered_map<EventId, std::size_t> pos;
  for (const auto& id : behavior.events) {
    if (!defined.contains(id)) {
      report.add("UNDEF", Severity::Error, id.str(), "event is not defined");
    }
    pos.try_emplace(id, pos.size());
  }
  const std::size_t n = pos.size();
  std::vector<EventId> names(n);
  for (const auto& [id, i] : pos) names[i] = id;

  std::vector<std::pair<std::size_t, std::size_t>> all_edges;
  std::vector<std::pair<std::size_t, std::size_t>> unbounded;
  std::vector<std::pair<std::size_t, std::size_t>> bounded;
  for (const auto& e : behavior.edges) {
    const std::string loc = e.from.str() + " -> " + e.to.str();
    auto a = pos.find(e.from);
    auto b = pos.find(e.to);
    if (a == pos.end() || b == pos.end()) {
      const EventId& missing = a == pos.end() ? e.from : e.to;
      report.add("UNDEF", Severity::Error, loc,
                 "unknown event '" + missing.str() + "'");
      continue;
    }
    if (e.repeat && *e.repeat < 1) {
      report.add("BAD_BOUND", Severity::Error, loc,
                 "repeat bound must be at least 1");
    }
    all_edges.emplace_back(a->second, b->second);
    (e.repeat ? bounded : unbounded).emplace_back(a->second, b->second);
  }

  for (const auto& comp : cyclic_components(n, unbounded)) {
    std::vector<std::string> ids;
    for (std::size_t i : comp) ids.push_back(names[i].str());
    report.add("UNBOUNDED_LOOP", Severity::Error, join(ids, ", "),
               "cycle through " + join(ids, " ") + " carries no repeat bound");
  }

  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<bool> has_forward_in(n, false);
  for (auto [a, b] : all_edges) adj[a].push_back(b);
  for (auto [a, b] : unbounded) has_forward_in[b] = true;

  for (std::size_t k = 0; k < bounded.size(); ++k) {
    auto [a, b] = bounded[k];
    if (a != b && !reaches(adj, b, a)) {
      report.add("REPEAT_NOT_LOOP", Severity::Warning,
                 names[a].str() + " -> " + names[b].str(),
                 "repeat bound on an edge that closes no cycle is ignored");
    }
  }

  std::vector<bool> reached(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v) {
    if (!has_forward_in[v]) {
      reached[v] = true;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v]) {
      if (!reached[w]) {
        reached[w] = true;
        queue.push_back(w);
      }
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!reached[v]) {
      report.add("UNREACHABLE", Severity::Warning, names[v].str(),
                 "event is not reachable from any source event");
    }
  }

  std::unordered_set<ActionId> covered;
  for (const auto& e : events) {
    for (const auto& a : e.region.actions) {
      if (index.action(a) == nullptr) {
        report.add("UNDEF", Severity::Error, e.id.str(),
                   "region names unknown action '" + a.str() + "'");
      }
      covered.insert(a);
    }
    if (!options.allow_disconnected_regions && !e.region.actions.empty()) {
      const auto comps = region_components(model, e.region);
      if (comps.size() > 1) {
        report.add("REGION_DISCONNECTED", Severity::Error, e.id.str(),
                   "region splits into " + std::to_string(comps.size()) +
                       " components");
      }
    }
  }
  for (const auto& a : model.actions) {
    if (!covered.contains(a.id)) {
      report.add("COVERAGE", Severity::Warning, a.id.str(),
                 "action is covered by no event region");
    }
  }

  report.sort();
  return report;
}

BehaviorModel with_default_loop_bound(const BehaviorModel& behavior, int bound) {
  BehaviorModel out = behavior;
  std::unordered_map<EventId, std::size_t> pos;
  for (const auto& id : out.events) pos.try_emplace(id, pos.size());

  // Outgoing unbounded edges per event, by edge declaration order.
  std::vector<std::vector<std::size_t>> out_edges(pos.size());
  for (std::size_t k = 0; k < out.edges.size(); ++k) {
    const auto& e = out.edges[k];
    if (e.repeat || !pos.contains(e.from) || !pos.contains(e.to)) continue;
    out_edges[pos.at(e.from)].push_back(k);
  }

  enum class Color { White, Gray, Black };
  std::vector<Color> color(pos.size(), Color::White);
  std::function<void(std::size_t)> dfs = [&](std::size_t v) {
    color[v] = Color::Gray;
    for (std::size_t k : out_edges[v]) {
      const std::size_t w = pos.at(out.edges[k].to);
      if (color[w] == Color::Gray) {
        out.edges[k].repeat = bound;
      } else if (color[w] == Color::White) {
        dfs(w);
      }
    }
    color[v] = Color::Black;
  };
  for (std::size_t v = 0; v < pos.size(); ++v) {
    if (color[v] == Color::White) dfs(v);
  }
  return out;
}

}  // namespace tmkit
