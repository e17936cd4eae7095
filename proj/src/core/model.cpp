// SPDX-License-Identifier: Apache-2.0
#include "tmkit/model.hpp"

#include <algorithm>
#include <functional>

#include "tmkit/error.hpp"

namespace tmkit {

std::string_view to_string(ActionKind kind) noexcept {
  switch (kind) {
    case ActionKind::Create: return "create";
    case ActionKind::Process: return "process";
    case ActionKind::Release: return "release";
    case ActionKind::Transfer: return "transfer";
    case ActionKind::Receive: return "receive";
  }
  return "?";
}

std::optional<ActionKind> parse_action_kind(std::string_view text) noexcept {
  for (ActionKind k : kActionKinds) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::string_view to_string(EdgeKind kind) noexcept {
  return kind == EdgeKind::Flow ? "flow" : "trigger";
}

std::string_view to_string(Mode mode) noexcept {
  return mode == Mode::Strict ? "strict" : "simplified";
}

std::string_view ActionNode::name() const noexcept {
  std::string_view s = id.str();
  auto dot = s.rfind('.');
  return dot == std::string_view::npos ? s : s.substr(dot + 1);
}

std::string join_path(const std::optional<ThimacId>& scope,
                      const std::string& name) {
  return scope ? scope->str() + "." + name : name;
}

// ---------------------------------------------------------------------------

ModelIndex::ModelIndex(const StaticModel& model) : model_(&model) {
  for (std::size_t i = 0; i < model.actions.size(); ++i) {
    actions_.try_emplace(model.actions[i].id, i);
  }
  for (std::size_t i = 0; i < model.thimacs.size(); ++i) {
    thimacs_.try_emplace(model.thimacs[i].id, i);
  }
}

const ActionNode* ModelIndex::action(const ActionId& id) const {
  auto it = actions_.find(id);
  return it == actions_.end() ? nullptr : &model_->actions[it->second];
}

const Thimac* ModelIndex::thimac(const ThimacId& id) const {
  auto it = thimacs_.find(id);
  return it == thimacs_.end() ? nullptr : &model_->thimacs[it->second];
}

std::optional<std::size_t> ModelIndex::position(const ActionId& id) const {
  auto it = actions_.find(id);
  if (it == actions_.end()) return std::nullopt;
  return it->second;
}

std::vector<ActionId> ModelIndex::actions_within(const ThimacId& id) const {
  std::vector<ActionId> out;
  const std::string prefix = id.str() + ".";
  for (const auto& a : model_->actions) {
    if (a.owner == id || a.owner.str().starts_with(prefix)) {
      out.push_back(a.id);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

StaticModel canonicalize(StaticModel model) {
  std::unordered_map<ThimacId, std::size_t> pos;
  for (std::size_t i = 0; i < model.thimacs.size(); ++i) {
    pos.emplace(model.thimacs[i].id, i);
  }
  std::unordered_map<ActionId, std::size_t> apos;
  for (std::size_t i = 0; i < model.actions.size(); ++i) {
    apos.emplace(model.actions[i].id, i);
  }

  std::vector<Thimac> thimacs;
  std::vector<ActionNode> actions;
  thimacs.reserve(model.thimacs.size());
  actions.reserve(model.actions.size());

  std::function<void(std::size_t)> visit = [&](std::size_t i) {
    const Thimac& t = model.thimacs[i];
    thimacs.push_back(t);
    for (const auto& a : t.actions) actions.push_back(model.actions[apos.at(a)]);
    for (const auto& c : t.children) visit(pos.at(c));
  };
  for (std::size_t i = 0; i < model.thimacs.size(); ++i) {
    if (!model.thimacs[i].parent) visit(i);
  }
  model.thimacs = std::move(thimacs);
  model.actions = std::move(actions);
  return model;
}

// ---------------------------------------------------------------------------

ModelBuilder::ModelBuilder(std::string name, Mode mode) {
  model_.name = std::move(name);
  model_.mode = mode;
}

bool ModelBuilder::has_thimac(const ThimacId& id) const {
  return thimacs_.contains(id);
}

bool ModelBuilder::has_action(const ActionId& id) const {
  return actions_.contains(id);
}

bool ModelBuilder::name_free(const std::optional<ThimacId>& scope,
                             const std::string& name) const {
  const std::string path = join_path(scope, name);
  return !thimacs_.contains(ThimacId{path}) && !actions_.contains(ActionId{path});
}

ThimacId ModelBuilder::add_thimac(const std::string& name,
                                  const std::optional<ThimacId>& parent) {
  if (parent && !has_thimac(*parent)) {
    throw Error(ErrorCode::Undef, "unknown thimac '" + parent->str() + "'");
  }
  if (!name_free(parent, name)) {
    throw Error(ErrorCode::DupId,
                "duplicate identifier '" + join_path(parent, name) + "'");
  }
  ThimacId id{join_path(parent, name)};
  thimacs_.emplace(id, model_.thimacs.size());
  model_.thimacs.push_back(Thimac{id, name, parent, {}, {}});
  if (parent) model_.thimacs[thimacs_.at(*parent)].children.push_back(id);
  return id;
}

ActionId ModelBuilder::add_action(const ThimacId& owner, ActionKind kind,
                                  const std::string& name,
                                  std::optional<std::string> label) {
  auto it = thimacs_.find(owner);
  if (it == thimacs_.end()) {
    throw Error(ErrorCode::Undef, "unknown thimac '" + owner.str() + "'");
  }
  if (!name_free(owner, name)) {
    throw Error(ErrorCode::DupId,
                "duplicate identifier '" + join_path(owner, name) + "'");
  }
  ActionId id{join_path(owner, name)};
  actions_.emplace(id, model_.actions.size());
  model_.actions.push_back(ActionNode{id, kind, owner, std::move(label)});
  model_.thimacs[it->second].actions.push_back(id);
  return id;
}

void ModelBuilder::add_edge(const ActionId& src, const ActionId& dst,
                            EdgeKind kind, std::optional<int> marker) {
  for (const auto* end : {&src, &dst}) {
    if (!has_action(*end)) {
      throw Error(ErrorCode::Undef, "unknown action '" + end->str() + "'");
    }
  }
  model_.edges.push_back(Edge{src, dst, kind, marker});
}

StaticModel ModelBuilder::build() && { return canonicalize(std::move(model_)); }

}  // namespace tmkit
