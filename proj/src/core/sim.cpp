// SPDX-License-Identifier: Apache-2.0
#include "tmkit/sim.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tmkit/dynamics.hpp"
#include "tmkit/validate.hpp"

namespace tmkit {

std::vector<EventId> Trace::event_sequence() const {
  std::vector<EventId> out;
  out.reserve(steps.size());
  for (const auto& s : steps) out.push_back(s.event);
  return out;
}

std::string Trace::to_text() const {
  std::ostringstream os;
  for (const auto& s : steps) {
    os << s.index << '\t' << s.event.str() << '\t';
    for (std::size_t i = 0; i < s.actions.size(); ++i) {
      if (i) os << ',';
      os << s.actions[i].str();
    }
    os << '\n';
  }
  return os.str();
}

std::string Trace::to_json() const {
  nlohmann::ordered_json doc;
  doc["version"] = 1;
  doc["complete"] = complete;
  auto list = nlohmann::ordered_json::array();
  for (const auto& s : steps) {
    nlohmann::ordered_json step;
    step["step"] = s.index;
    step["event"] = s.event.str();
    auto actions = nlohmann::ordered_json::array();
    for (const auto& a : s.actions) actions.push_back(a.str());
    step["actions"] = std::move(actions);
    if (s.time) step["time"] = *s.time;
    list.push_back(std::move(step));
  }
  doc["steps"] = std::move(list);
  return doc.dump(2) + "\n";
}

BudgetExceeded::BudgetExceeded(Trace partial, int max_steps)
    : Error(ErrorCode::Budget,
            "step budget of " + std::to_string(max_steps) +
                " exhausted with events still enabled"),
      trace_(std::move(partial)) {}

std::vector<ActionId> region_firing_order(const StaticModel& model,
                                          const Region& region) {
  ModelIndex index(model);
  const std::size_t n = region.actions.size();
  std::unordered_map<ActionId, std::size_t> local;
  for (std::size_t i = 0; i < n; ++i) local.emplace(region.actions[i], i);

  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<int> indegree(n, 0);
  for (const auto& e : region.induced) {
    auto a = local.find(e.src);
    auto b = local.find(e.dst);
    if (a == local.end() || b == local.end()) continue;
    succ[a->second].push_back(b->second);
    ++indegree[b->second];
  }

  auto rank = [&](std::size_t i) {
    return index.position(region.actions[i]).value_or(model.actions.size() + i);
  };
  auto later = [&](std::size_t a, std::size_t b) { return rank(a) > rank(b); };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(later)>
      ready(later);
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<ActionId> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t v = ready.top();
    ready.pop();
    order.push_back(region.actions[v]);
    for (std::size_t w : succ[v]) {
      if (--indegree[w] == 0) ready.push(w);
    }
  }
  if (order.size() != n) {
    throw Error(ErrorCode::InvalidInput,
                "region contains a flow/trigger cycle; no firing order exists");
  }
  return order;
}

namespace {

constexpr std::size_t kNoLoop = static_cast<std::size_t>(-1);

/// Precedence structure the scheduler runs on: forward edges, and one
/// bounded back edge per loop with a disjoint body.
struct Schedule {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> preds;  // forward predecessors
  std::vector<std::size_t> loop_of;             // loop index or kNoLoop
  std::vector<int> bound;                       // firings owed per event
  struct Loop {
    std::size_t head;
    std::size_t tail;
    int bound;
  };
  std::vector<Loop> loops;
};

Schedule build_schedule(const BehaviorModel& behavior) {
  Schedule s;
  std::unordered_map<EventId, std::size_t> pos;
  for (const auto& id : behavior.events) pos.try_emplace(id, pos.size());
  s.n = pos.size();

  std::vector<std::vector<std::size_t>> fwd(s.n);
  for (const auto& e : behavior.edges) {
    if (!e.repeat) fwd[pos.at(e.from)].push_back(pos.at(e.to));
  }
  auto reachable_from = [&](std::size_t start) {
    std::vector<bool> seen(s.n, false);
    std::deque<std::size_t> q{start};
    seen[start] = true;
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop_front();
      for (std::size_t w : fwd[v]) {
        if (!seen[w]) {
          seen[w] = true;
          q.push_back(w);
        }
      }
    }
    return seen;
  };

  s.preds.assign(s.n, {});
  s.loop_of.assign(s.n, kNoLoop);
  s.bound.assign(s.n, 1);
  for (const auto& e : behavior.edges) {
    const std::size_t u = pos.at(e.from);
    const std::size_t v = pos.at(e.to);
    if (!e.repeat) {
      s.preds[v].push_back(u);
      continue;
    }
    const auto from_head = reachable_from(v);
    if (u != v && !from_head[u]) {
      s.preds[v].push_back(u);  // bound on a non-loop edge is ignored
      continue;
    }
    const std::size_t loop = s.loops.size();
    s.loops.push_back({v, u, *e.repeat});
    for (std::size_t x = 0; x < s.n; ++x) {
      if (!from_head[x]) continue;
      if (x != u && !reachable_from(x)[u]) continue;
      if (s.loop_of[x] != kNoLoop) {
        throw Error(ErrorCode::InvalidInput,
                    "nested or overlapping loops are not supported (event " +
                        behavior.events[x].str() + ")");
      }
      s.loop_of[x] = loop;
      s.bound[x] = *e.repeat;
    }
  }

  // Forward edges must be acyclic once back edges are set aside.
  std::vector<int> indeg(s.n, 0);
  for (std::size_t v = 0; v < s.n; ++v) indeg[v] = static_cast<int>(s.preds[v].size());
  std::vector<std::vector<std::size_t>> succ(s.n);
  for (std::size_t v = 0; v < s.n; ++v) {
    for (std::size_t p : s.preds[v]) succ[p].push_back(v);
  }
  std::deque<std::size_t> q;
  for (std::size_t v = 0; v < s.n; ++v) {
    if (indeg[v] == 0) q.push_back(v);
  }
  std::size_t seen = 0;
  while (!q.empty()) {
    std::size_t v = q.front();
    q.pop_front();
    ++seen;
    for (std::size_t w : succ[v]) {
      if (--indeg[w] == 0) q.push_back(w);
    }
  }
  if (seen != s.n) {
    throw Error(ErrorCode::InvalidInput, "behavior has a cycle that is not a loop");
  }
  return s;
}

bool enabled(const Schedule& s, const std::vector<int>& fired, std::size_t x) {
  const int i = fired[x];
  if (i >= s.bound[x]) return false;
  const std::size_t loop = s.loop_of[x];
  for (std::size_t p : s.preds[x]) {
    const bool same_loop = loop != kNoLoop && s.loop_of[p] == loop;
    if (same_loop ? fired[p] < i + 1 : fired[p] < s.bound[p]) return false;
  }
  if (loop != kNoLoop && s.loops[loop].head == x && i >= 1 &&
      fired[s.loops[loop].tail] < i) {
    return false;
  }
  return true;
}

}  // namespace

Trace simulate(const ModelBundle& bundle, const SimConfig& config) {
  if (config.max_steps < 1) {
    throw Error(ErrorCode::InvalidInput, "max_steps must be at least 1");
  }
  if (config.default_loop_bound < 1) {
    throw Error(ErrorCode::InvalidInput, "loop bound must be at least 1");
  }
  const ValidationReport statics =
      validate_static(bundle.model, RuleTable::strict());
  if (statics.has_errors()) {
    const auto& v = statics.violations().front();
    throw Error(ErrorCode::InvalidInput, "static model is not strict-valid: " +
                                             v.rule + " at " + v.location + ": " +
                                             v.message);
  }
  const BehaviorModel behavior =
      with_default_loop_bound(bundle.behavior, config.default_loop_bound);
  const ValidationReport dyn =
      validate_behavior(behavior, bundle.events, bundle.model,
                        {.allow_disconnected_regions = config.allow_disconnected_regions});
  if (dyn.has_errors()) {
    const auto& v = dyn.violations().front();
    throw Error(ErrorCode::InvalidInput, "behavior is invalid: " + v.rule +
                                             " at " + v.location + ": " + v.message);
  }

  const Schedule schedule = build_schedule(behavior);

  std::vector<std::vector<ActionId>> firing(schedule.n);
  std::vector<const Event*> events(schedule.n, nullptr);
  for (std::size_t i = 0; i < schedule.n; ++i) {
    events[i] = bundle.find_event(behavior.events[i]);
    firing[i] = region_firing_order(bundle.model, events[i]->region);
  }

  Trace trace;
  std::vector<int> fired(schedule.n, 0);
  for (;;) {
    std::optional<std::size_t> next;
    for (std::size_t x = 0; x < schedule.n && !next; ++x) {
      if (enabled(schedule, fired, x)) next = x;
    }
    if (!next) break;
    if (static_cast<int>(trace.steps.size()) == config.max_steps) {
      trace.complete = false;
      throw BudgetExceeded(std::move(trace), config.max_steps);
    }
    ++fired[*next];
    trace.steps.push_back(TraceStep{static_cast<int>(trace.steps.size()),
                                    behavior.events[*next], firing[*next],
                                    events[*next]->time});
  }
  return trace;
}

}  // namespace tmkit
