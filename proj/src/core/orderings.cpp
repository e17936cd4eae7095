// SPDX-License-Identifier: Apache-2.0
//
// Brute-force linear-extension enumeration over the explicitly unrolled
// behavior graph. Kept independent of the simulator's counter-based
// scheduling so the two can check each other.
#include <algorithm>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tmkit/sim.hpp"

namespace tmkit {

namespace {

struct Unrolled {
  std::vector<std::size_t> event_of;  // instance -> event index
  std::vector<std::vector<std::size_t>> succ;
  std::vector<int> indegree;
};

/// Transitive closure over unbounded edges, by repeated relaxation.
std::vector<std::vector<bool>> closure(std::size_t n,
                                       const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) r[i][i] = true;
  for (auto [a, b] : edges) r[a][b] = true;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!r[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (r[k][j]) r[i][j] = true;
      }
    }
  }
  return r;
}

Unrolled unroll(const BehaviorModel& behavior) {
  std::unordered_map<EventId, std::size_t> pos;
  for (const auto& id : behavior.events) pos.try_emplace(id, pos.size());
  const std::size_t n = pos.size();
  for (const auto& e : behavior.edges) {
    for (const EventId* end : {&e.from, &e.to}) {
      if (!pos.contains(*end)) {
        throw Error(ErrorCode::Undef, "behavior edge names unknown event '" +
                                          end->str() + "'");
      }
    }
  }

  std::vector<std::pair<std::size_t, std::size_t>> plain;
  for (const auto& e : behavior.edges) {
    if (!e.repeat) plain.emplace_back(pos.at(e.from), pos.at(e.to));
  }
  const auto reach = closure(n, plain);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && reach[i][j] && reach[j][i]) {
        throw Error(ErrorCode::UnboundedLoop,
                    "cycle through " + behavior.events[i].str() + " and " +
                        behavior.events[j].str() + " carries no repeat bound");
      }
    }
  }
  for (auto [a, b] : plain) {
    if (a == b) {
      throw Error(ErrorCode::UnboundedLoop,
                  "self-loop on " + behavior.events[a].str() +
                      " carries no repeat bound");
    }
  }

  // Loop bodies: for back edge tail -> head, every x with head ~> x ~> tail.
  std::vector<int> copies(n, 1);
  std::vector<int> body(n, -1);
  struct Back { std::size_t tail, head; int bound; };
  std::vector<Back> backs;
  std::vector<std::pair<std::size_t, std::size_t>> forward = plain;
  for (const auto& e : behavior.edges) {
    if (!e.repeat) continue;
    const std::size_t tail = pos.at(e.from);
    const std::size_t head = pos.at(e.to);
    if (!reach[head][tail]) {
      forward.emplace_back(tail, head);
      continue;
    }
    const int id = static_cast<int>(backs.size());
    backs.push_back({tail, head, *e.repeat});
    for (std::size_t x = 0; x < n; ++x) {
      if (reach[head][x] && reach[x][tail]) {
        if (body[x] >= 0) {
          throw Error(ErrorCode::InvalidInput, "nested or overlapping loops");
        }
        body[x] = id;
        copies[x] = *e.repeat;
      }
    }
  }

  std::vector<std::size_t> first(n);
  Unrolled u;
  for (std::size_t x = 0; x < n; ++x) {
    first[x] = u.event_of.size();
    for (int c = 0; c < copies[x]; ++c) u.event_of.push_back(x);
  }
  if (u.event_of.size() > kMaxUnrolledEvents) {
    throw Error(ErrorCode::TooLarge,
                "unrolled behavior has " + std::to_string(u.event_of.size()) +
                    " event instances; the limit is " +
                    std::to_string(kMaxUnrolledEvents));
  }
  const std::size_t m = u.event_of.size();
  u.succ.assign(m, {});
  u.indegree.assign(m, 0);
  auto link = [&](std::size_t a, std::size_t b) {
    u.succ[a].push_back(b);
    ++u.indegree[b];
  };

  for (auto [a, b] : forward) {
    if (body[a] >= 0 && body[a] == body[b]) {
      for (int c = 0; c < copies[a]; ++c) link(first[a] + c, first[b] + c);
    } else {
      link(first[a] + copies[a] - 1, first[b]);
    }
  }
  for (const auto& bk : backs) {
    for (int c = 0; c + 1 < bk.bound; ++c) {
      link(first[bk.tail] + c, first[bk.head] + c + 1);
    }
  }
  return u;
}

}  // namespace

std::size_t for_each_ordering(const BehaviorModel& behavior,
                              const std::function<bool(const Ordering&)>& visit,
                              std::size_t limit) {
  Unrolled u = unroll(behavior);
  const std::size_t m = u.event_of.size();
  std::vector<bool> placed(m, false);
  std::vector<int> indegree = u.indegree;
  Ordering current;
  current.reserve(m);
  std::size_t produced = 0;
  bool stop = false;

  std::function<void()> step = [&] {
    if (current.size() == m) {
      ++produced;
      if (!visit(current) || produced >= limit) stop = true;
      return;
    }
    for (std::size_t i = 0; i < m && !stop; ++i) {
      if (placed[i] || indegree[i] != 0) continue;
      placed[i] = true;
      for (std::size_t w : u.succ[i]) --indegree[w];
      current.push_back(behavior.events[u.event_of[i]]);
      step();
      current.pop_back();
      for (std::size_t w : u.succ[i]) ++indegree[w];
      placed[i] = false;
    }
  };
  if (limit > 0) step();
  return produced;
}

std::vector<Ordering> enumerate_orderings(const BehaviorModel& behavior,
                                          std::size_t limit) {
  std::vector<Ordering> out;
  for_each_ordering(
      behavior,
      [&](const Ordering& o) {
        out.push_back(o);
        return true;
      },
      limit);
  return out;
}

std::size_t count_orderings(const BehaviorModel& behavior, std::size_t limit) {
  return for_each_ordering(behavior, [](const Ordering&) { return true; }, limit);
}

}  // namespace tmkit
