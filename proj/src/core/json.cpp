// SPDX-License-Identifier: Apache-2.0
#include <unordered_set>

#include <json.hpp>

#include "tmkit/dynamics.hpp"
#include "tmkit/interop.hpp"
#include "tmkit/validate.hpp"

namespace tmkit {

using ojson = nlohmann::ordered_json;

std::string export_json(const ModelBundle& bundle) {
  const StaticModel& m = bundle.model;
  ojson doc;
  doc["version"] = kJsonSchemaVersion;
  doc["name"] = m.name;
  doc["mode"] = std::string(to_string(m.mode));

  auto thimacs = ojson::array();
  for (const auto& t : m.thimacs) {
    ojson j;
    j["id"] = t.id.str();
    j["name"] = t.name;
    j["parent"] = t.parent ? ojson(t.parent->str()) : ojson(nullptr);
    thimacs.push_back(std::move(j));
  }
  doc["thimacs"] = std::move(thimacs);

  auto actions = ojson::array();
  for (const auto& a : m.actions) {
    ojson j;
    j["id"] = a.id.str();
    j["kind"] = std::string(to_string(a.kind));
    j["owner"] = a.owner.str();
    j["label"] = a.label ? ojson(*a.label) : ojson(nullptr);
    actions.push_back(std::move(j));
  }
  doc["actions"] = std::move(actions);

  auto edges = ojson::array();
  for (const auto& e : m.edges) {
    ojson j;
    j["src"] = e.src.str();
    j["dst"] = e.dst.str();
    j["kind"] = std::string(to_string(e.kind));
    j["marker"] = e.marker ? ojson(*e.marker) : ojson(nullptr);
    edges.push_back(std::move(j));
  }
  doc["edges"] = std::move(edges);

  auto events = ojson::array();
  for (const auto& ev : bundle.events) {
    ojson j;
    j["id"] = ev.id.str();
    j["label"] = ev.label ? ojson(*ev.label) : ojson(nullptr);
    j["region"] = ev.paths;
    j["time"] = ev.time ? ojson(*ev.time) : ojson(nullptr);
    events.push_back(std::move(j));
  }
  doc["events"] = std::move(events);

  auto behavior = ojson::array();
  for (const auto& b : bundle.behavior.edges) {
    ojson j;
    j["from"] = b.from.str();
    j["to"] = b.to.str();
    j["repeat"] = b.repeat ? ojson(*b.repeat) : ojson(nullptr);
    behavior.push_back(std::move(j));
  }
  doc["behavior"] = std::move(behavior);
  return doc.dump(2) + "\n";
}

namespace {

[[noreturn]] void schema(const std::string& pointer, const std::string& message) {
  throw Error(ErrorCode::Schema, (pointer.empty() ? "/" : pointer) + ": " + message);
}

const ojson& member(const ojson& obj, const std::string& ptr, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(ptr, std::string("missing key '") + key + "'");
  return *it;
}

std::string str(const ojson& obj, const std::string& ptr, const char* key) {
  const ojson& v = member(obj, ptr, key);
  if (!v.is_string()) schema(ptr + "/" + key, "expected a string");
  return v.get<std::string>();
}

std::optional<std::string> opt_str(const ojson& obj, const std::string& ptr,
                                   const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) schema(ptr + "/" + key, "expected a string or null");
  return it->get<std::string>();
}

std::optional<int> opt_int(const ojson& obj, const std::string& ptr, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number_integer()) schema(ptr + "/" + key, "expected an integer or null");
  const auto v = it->get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    schema(ptr + "/" + key, "integer out of range");
  }
  return static_cast<int>(v);
}

const ojson& array(const ojson& doc, const char* key) {
  const ojson& v = member(doc, "", key);
  if (!v.is_array()) schema(std::string("/") + key, "expected an array");
  return v;
}

void require_object(const ojson& v, const std::string& ptr) {
  if (!v.is_object()) schema(ptr, "expected an object");
}

}  // namespace

ModelBundle import_json(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Schema, std::string("malformed JSON: ") + e.what());
  }
  require_object(doc, "");
  const ojson& version = member(doc, "", "version");
  if (!version.is_number_integer()) schema("/version", "expected an integer");
  if (version.get<std::int64_t>() != kJsonSchemaVersion) {
    throw Error(ErrorCode::Version, "unsupported schema version " + version.dump() +
                                        "; this build reads version " +
                                        std::to_string(kJsonSchemaVersion));
  }

  ModelBundle bundle;
  StaticModel& m = bundle.model;
  m.name = doc.contains("name") ? str(doc, "", "name") : "Model";
  if (auto mode = opt_str(doc, "", "mode")) {
    if (*mode == "strict") {
      m.mode = Mode::Strict;
    } else if (*mode == "simplified") {
      m.mode = Mode::Simplified;
    } else {
      schema("/mode", "expected 'strict' or 'simplified'");
    }
  }

  std::unordered_map<std::string, std::size_t> thimac_at;
  const ojson& thimacs = array(doc, "thimacs");
  for (std::size_t i = 0; i < thimacs.size(); ++i) {
    const std::string ptr = "/thimacs/" + std::to_string(i);
    require_object(thimacs[i], ptr);
    Thimac t;
    t.id = ThimacId{str(thimacs[i], ptr, "id")};
    t.name = str(thimacs[i], ptr, "name");
    if (auto p = opt_str(thimacs[i], ptr, "parent")) t.parent = ThimacId{*p};
    if (t.id.str() != join_path(t.parent, t.name) ||
        t.name.find('.') != std::string::npos || t.name.empty()) {
      schema(ptr + "/id", "identifier must be the parent path joined with the name");
    }
    if (!thimac_at.emplace(t.id.str(), m.thimacs.size()).second) {
      schema(ptr + "/id", "duplicate thimac '" + t.id.str() + "'");
    }
    m.thimacs.push_back(std::move(t));
  }
  for (std::size_t i = 0; i < m.thimacs.size(); ++i) {
    if (!m.thimacs[i].parent) continue;
    auto it = thimac_at.find(m.thimacs[i].parent->str());
    if (it == thimac_at.end()) {
      schema("/thimacs/" + std::to_string(i) + "/parent",
             "unknown thimac '" + m.thimacs[i].parent->str() + "'");
    }
    m.thimacs[it->second].children.push_back(m.thimacs[i].id);
  }

  std::unordered_set<std::string> action_ids;
  const ojson& actions = array(doc, "actions");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string ptr = "/actions/" + std::to_string(i);
    require_object(actions[i], ptr);
    ActionNode a;
    a.id = ActionId{str(actions[i], ptr, "id")};
    const auto kind = parse_action_kind(str(actions[i], ptr, "kind"));
    if (!kind) schema(ptr + "/kind", "unknown action kind");
    a.kind = *kind;
    a.owner = ThimacId{str(actions[i], ptr, "owner")};
    a.label = opt_str(actions[i], ptr, "label");
    auto owner = thimac_at.find(a.owner.str());
    if (owner == thimac_at.end()) {
      schema(ptr + "/owner", "unknown thimac '" + a.owner.str() + "'");
    }
    const std::string prefix = a.owner.str() + ".";
    if (!a.id.str().starts_with(prefix) || a.id.str().size() == prefix.size() ||
        a.id.str().find('.', prefix.size()) != std::string::npos) {
      schema(ptr + "/id", "identifier must be the owner path joined with a name");
    }
    if (thimac_at.contains(a.id.str()) || !action_ids.insert(a.id.str()).second) {
      schema(ptr + "/id", "duplicate identifier '" + a.id.str() + "'");
    }
    m.thimacs[owner->second].actions.push_back(a.id);
    m.actions.push_back(std::move(a));
  }

  const ojson& edges = array(doc, "edges");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string ptr = "/edges/" + std::to_string(i);
    require_object(edges[i], ptr);
    Edge e;
    e.src = ActionId{str(edges[i], ptr, "src")};
    e.dst = ActionId{str(edges[i], ptr, "dst")};
    const std::string kind = str(edges[i], ptr, "kind");
    if (kind == "flow") {
      e.kind = EdgeKind::Flow;
    } else if (kind == "trigger") {
      e.kind = EdgeKind::Trigger;
    } else {
      schema(ptr + "/kind", "expected 'flow' or 'trigger'");
    }
    e.marker = opt_int(edges[i], ptr, "marker");
    if (!action_ids.contains(e.src.str())) schema(ptr + "/src", "unknown action");
    if (!action_ids.contains(e.dst.str())) schema(ptr + "/dst", "unknown action");
    if (e.src == e.dst) schema(ptr, "self-edge");
    m.edges.push_back(std::move(e));
  }

  const ValidationReport integrity = check_integrity(m);
  if (integrity.has_errors()) {
    const auto& v = integrity.violations().front();
    schema("", v.rule + " at " + v.location + ": " + v.message);
  }
  m = canonicalize(std::move(m));

  std::unordered_set<std::string> event_ids;
  const ojson& events = array(doc, "events");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string ptr = "/events/" + std::to_string(i);
    require_object(events[i], ptr);
    const std::string id = str(events[i], ptr, "id");
    if (!event_ids.insert(id).second) schema(ptr + "/id", "duplicate event '" + id + "'");
    const ojson& region = member(events[i], ptr, "region");
    if (!region.is_array() || region.empty()) {
      schema(ptr + "/region", "expected a non-empty array of paths");
    }
    std::vector<std::string> paths;
    ModelIndex index(m);
    for (std::size_t k = 0; k < region.size(); ++k) {
      if (!region[k].is_string()) {
        schema(ptr + "/region/" + std::to_string(k), "expected a string");
      }
      const std::string p = region[k].get<std::string>();
      if (index.action(ActionId{p}) == nullptr && index.thimac(ThimacId{p}) == nullptr) {
        schema(ptr + "/region/" + std::to_string(k), "unknown path '" + p + "'");
      }
      paths.push_back(p);
    }
    Event ev = define_event(m, id, paths);
    ev.label = opt_str(events[i], ptr, "label");
    ev.time = opt_str(events[i], ptr, "time");
    bundle.behavior.events.push_back(ev.id);
    bundle.events.push_back(std::move(ev));
  }

  const ojson& behavior = array(doc, "behavior");
  for (std::size_t i = 0; i < behavior.size(); ++i) {
    const std::string ptr = "/behavior/" + std::to_string(i);
    require_object(behavior[i], ptr);
    BehaviorEdge b;
    b.from = EventId{str(behavior[i], ptr, "from")};
    b.to = EventId{str(behavior[i], ptr, "to")};
    b.repeat = opt_int(behavior[i], ptr, "repeat");
    if (!event_ids.contains(b.from.str())) schema(ptr + "/from", "unknown event");
    if (!event_ids.contains(b.to.str())) schema(ptr + "/to", "unknown event");
    if (b.repeat && *b.repeat < 1) schema(ptr + "/repeat", "bound must be at least 1");
    bundle.behavior.edges.push_back(std::move(b));
  }
  return bundle;
}

}  // namespace tmkit
