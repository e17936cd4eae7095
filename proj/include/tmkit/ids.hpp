// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <utility>

namespace tmkit {

/// String identifier tagged by the kind of entity it names, so a thimac path
/// cannot be passed where an action path is expected.
template <class Tag>
class Id {
 public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  [[nodiscard]] const std::string& str() const noexcept { return value_; }
  [[nodiscard]] bool empty() const noexcept { return value_.empty(); }

  auto operator<=>(const Id&) const = default;
  bool operator==(const Id&) const = default;

  friend std::ostream& operator<<(std::ostream& os, const Id& id) {
    return os << id.value_;
  }

 private:
  std::string value_;
};

using ThimacId = Id<struct ThimacTag>;
using ActionId = Id<struct ActionTag>;
using EventId = Id<struct EventTag>;

}  // namespace tmkit

template <class Tag>
struct std::hash<tmkit::Id<Tag>> {
  std::size_t operator()(const tmkit::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
