// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "tmkit/dynamics.hpp"
#include "tmkit/interop.hpp"

namespace tmkit {

namespace {

using json = nlohmann::json;

[[noreturn]] void schema(const std::string& pointer, const std::string& message) {
  throw Error(ErrorCode::Schema, pointer + ": " + message);
}

std::string field(const json& obj, const std::string& ptr, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(ptr, std::string("missing key '") + key + "'");
  if (!it->is_string()) schema(ptr + "/" + key, "expected a string");
  return it->get<std::string>();
}

std::optional<std::string> opt_field(const json& obj, const std::string& ptr,
                                     const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) schema(ptr + "/" + key, "expected a string or null");
  return it->get<std::string>();
}

/// Identifier-safe form of a display name.
std::string sanitize(std::string_view name) {
  std::string out;
  for (char c : name) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '_';
    if (ok) {
      out += c;
    } else if (out.empty() || out.back() != '_') {
      out += '_';
    }
  }
  while (out.size() > 1 && out.back() == '_') out.pop_back();
  if (out.empty()) out = "_";
  if (out[0] >= '0' && out[0] <= '9') out.insert(out.begin(), '_');
  return out;
}

std::string fresh(const ModelBuilder& builder, const std::optional<ThimacId>& scope,
                  const std::string& base) {
  if (builder.name_free(scope, base)) return base;
  for (int i = 2;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (builder.name_free(scope, candidate)) return candidate;
  }
}

}  // namespace

AdDocument parse_activity_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) schema("/", "expected an object");
  for (const char* key : {"partitions", "nodes", "edges"}) {
    if (doc.contains(key) && !doc[key].is_array()) {
      schema(std::string("/") + key, "expected an array");
    }
  }

  AdDocument out;
  if (doc.contains("partitions")) {
    const json& parts = doc["partitions"];
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const std::string ptr = "/partitions/" + std::to_string(i);
      if (!parts[i].is_object()) schema(ptr, "expected an object");
      out.partitions.push_back({field(parts[i], ptr, "id"), field(parts[i], ptr, "name")});
    }
  }
  if (doc.contains("nodes")) {
    const json& nodes = doc["nodes"];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string ptr = "/nodes/" + std::to_string(i);
      if (!nodes[i].is_object()) schema(ptr, "expected an object");
      AdNode n;
      n.id = field(nodes[i], ptr, "id");
      n.name = opt_field(nodes[i], ptr, "name").value_or(n.id);
      const std::string kind = field(nodes[i], ptr, "kind");
      if (kind == "action") {
        n.kind = AdNodeKind::Action;
      } else if (kind == "initial") {
        n.kind = AdNodeKind::Initial;
      } else if (kind == "final") {
        n.kind = AdNodeKind::Final;
      } else {
        throw Error(ErrorCode::Unsupported,
                    ptr + "/kind: node kind '" + kind + "' is not supported");
      }
      n.partition = opt_field(nodes[i], ptr, "partition");
      out.nodes.push_back(std::move(n));
    }
  }
  if (doc.contains("edges")) {
    const json& edges = doc["edges"];
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string ptr = "/edges/" + std::to_string(i);
      if (!edges[i].is_object()) schema(ptr, "expected an object");
      AdEdge e;
      e.from = field(edges[i], ptr, "from");
      e.to = field(edges[i], ptr, "to");
      const std::string kind = field(edges[i], ptr, "kind");
      if (kind == "control") {
        e.kind = AdEdgeKind::Control;
      } else if (kind == "object") {
        e.kind = AdEdgeKind::Object;
      } else {
        throw Error(ErrorCode::Unsupported,
                    ptr + "/kind: edge kind '" + kind + "' is not supported");
      }
      e.object_name = opt_field(edges[i], ptr, "objectName");
      if (e.kind == AdEdgeKind::Object && !e.object_name) {
        schema(ptr, "object edges need an 'objectName'");
      }
      out.edges.push_back(std::move(e));
    }
  }
  return out;
}

ModelBundle import_activity(const AdDocument& doc) {
  std::unordered_map<std::string, const AdPartition*> partitions;
  for (const auto& p : doc.partitions) {
    if (!partitions.emplace(p.id, &p).second) {
      throw Error(ErrorCode::DupId, "duplicate partition '" + p.id + "'");
    }
  }
  std::unordered_map<std::string, const AdNode*> nodes;
  int initials = 0;
  for (const auto& n : doc.nodes) {
    if (!nodes.emplace(n.id, &n).second) {
      throw Error(ErrorCode::DupId, "duplicate node '" + n.id + "'");
    }
    if (n.partition && !partitions.contains(*n.partition)) {
      throw Error(ErrorCode::Undef, "node '" + n.id + "' names unknown partition '" +
                                        *n.partition + "'");
    }
    if (n.kind == AdNodeKind::Initial && ++initials > 1) {
      throw Error(ErrorCode::MultiInitial, "more than one initial node ('" + n.id + "')");
    }
  }
  for (const auto& e : doc.edges) {
    for (const std::string* end : {&e.from, &e.to}) {
      if (!nodes.contains(*end)) {
        throw Error(ErrorCode::Undef, "edge " + e.from + " -> " + e.to +
                                          " names unknown node '" + *end + "'");
      }
    }
    if (e.kind == AdEdgeKind::Object &&
        (nodes.at(e.from)->kind != AdNodeKind::Action ||
         nodes.at(e.to)->kind != AdNodeKind::Action)) {
      throw Error(ErrorCode::Unsupported, "object edge " + e.from + " -> " + e.to +
                                              " must join two actions");
    }
  }

  ModelBuilder builder("Activity", Mode::Strict);
  std::unordered_map<std::string, ThimacId> thimac_of_partition;
  std::optional<ThimacId> unassigned;
  for (const auto& p : doc.partitions) {
    const std::string name = fresh(builder, std::nullopt, sanitize(p.name));
    thimac_of_partition.emplace(p.id, builder.add_thimac(name));
  }
  auto thimac_for = [&](const AdNode& n) {
    if (n.partition) return thimac_of_partition.at(*n.partition);
    if (!unassigned) {
      unassigned = builder.add_thimac(fresh(builder, std::nullopt, "Unassigned"));
    }
    return *unassigned;
  };

  // One process and one event per action node.
  struct Slot {
    ActionId process;
    ThimacId owner;
    EventId event;
    std::vector<std::string> region;
  };
  std::unordered_map<std::string, std::size_t> slot_of;
  std::vector<Slot> slots;
  for (const auto& n : doc.nodes) {
    if (n.kind != AdNodeKind::Action) continue;
    const ThimacId owner = thimac_for(n);
    const ActionId process = builder.add_action(
        owner, ActionKind::Process, fresh(builder, owner, sanitize(n.name)), n.name);
    slot_of.emplace(n.id, slots.size());
    slots.push_back({process, owner,
                     EventId{"E" + std::to_string(slots.size() + 1)},
                     {process.str()}});
  }

  auto add = [&](Slot& slot, const ThimacId& owner, ActionKind kind,
                 const std::string& base, const std::string& label) {
    const ActionId id = builder.add_action(owner, kind, fresh(builder, owner, base), label);
    slot.region.push_back(id.str());
    return id;
  };

  for (const auto& e : doc.edges) {
    if (e.kind != AdEdgeKind::Object) continue;
    Slot& src = slots[slot_of.at(e.from)];
    Slot& dst = slots[slot_of.at(e.to)];
    const std::string& object = *e.object_name;
    const std::string base = sanitize(object);

    if (src.owner == dst.owner) {
      const ActionId create = add(src, src.owner, ActionKind::Create, base, object);
      builder.add_edge(src.process, create, EdgeKind::Trigger);
      builder.add_edge(create, dst.process, EdgeKind::Flow);
      continue;
    }

    // The object originates at the source unless it also arrives there.
    const bool originates = std::none_of(
        doc.edges.begin(), doc.edges.end(), [&](const AdEdge& other) {
          return other.kind == AdEdgeKind::Object && other.to == e.from &&
                 other.object_name == e.object_name;
        });
    ActionId head = src.process;
    if (originates) {
      const ActionId create = add(src, src.owner, ActionKind::Create, base, object);
      builder.add_edge(src.process, create, EdgeKind::Trigger);
      head = create;
    }
    const ActionId release =
        add(src, src.owner, ActionKind::Release, base + "_release", object + " (release)");
    const ActionId out =
        add(src, src.owner, ActionKind::Transfer, base + "_out", object + " (out)");
    const ActionId in =
        add(dst, dst.owner, ActionKind::Transfer, base + "_in", object + " (in)");
    const ActionId receive =
        add(dst, dst.owner, ActionKind::Receive, base + "_receive", object + " (receive)");
    builder.add_edge(head, release, EdgeKind::Flow);
    builder.add_edge(release, out, EdgeKind::Flow);
    builder.add_edge(out, in, EdgeKind::Flow);
    builder.add_edge(in, receive, EdgeKind::Flow);
    builder.add_edge(receive, dst.process, EdgeKind::Flow);
  }

  ModelBundle bundle;
  bundle.model = std::move(builder).build();
  for (const auto& n : doc.nodes) {
    if (n.kind != AdNodeKind::Action) continue;
    const Slot& slot = slots[slot_of.at(n.id)];
    Event ev = define_event(bundle.model, slot.event.str(), slot.region);
    ev.label = n.name;
    bundle.behavior.events.push_back(ev.id);
    bundle.events.push_back(std::move(ev));
  }
  for (const auto& e : doc.edges) {
    if (e.kind != AdEdgeKind::Control) continue;
    auto a = slot_of.find(e.from);
    auto b = slot_of.find(e.to);
    if (a == slot_of.end() || b == slot_of.end()) continue;  // initial/final
    bundle.behavior.edges.push_back(
        BehaviorEdge{slots[a->second].event, slots[b->second].event, std::nullopt});
  }
  return bundle;
}

}  // namespace tmkit
