// SPDX-License-Identifier: Apache-2.0
#include "tmkit/report.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace tmkit {

std::string_view to_string(Severity severity) noexcept {
  return severity == Severity::Error ? "error" : "warning";
}

void ValidationReport::add(std::string rule, Severity severity,
                           std::string location, std::string message) {
  violations_.push_back(Violation{std::move(rule), severity,
                                  std::move(location), std::move(message)});
}

void ValidationReport::append(const ValidationReport& other) {
  violations_.insert(violations_.end(), other.violations_.begin(),
                     other.violations_.end());
}

void ValidationReport::sort() {
  std::stable_sort(violations_.begin(), violations_.end(),
                   [](const Violation& a, const Violation& b) {
                     return std::tie(a.severity, a.rule, a.location, a.message) <
                            std::tie(b.severity, b.rule, b.location, b.message);
                   });
}

std::size_t ValidationReport::error_count() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(violations_.begin(), violations_.end(),
                    [](const Violation& v) { return v.severity == Severity::Error; }));
}

std::size_t ValidationReport::warning_count() const noexcept {
  return violations_.size() - error_count();
}

bool ValidationReport::contains(std::string_view rule) const noexcept {
  return std::any_of(violations_.begin(), violations_.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  for (const auto& v : violations_) {
    os << to_string(v.severity) << ' ' << v.rule << ' ' << v.location << ": "
       << v.message << '\n';
  }
  const auto errors = error_count();
  const auto warnings = warning_count();
  os << errors << (errors == 1 ? " error, " : " errors, ") << warnings
     << (warnings == 1 ? " warning" : " warnings") << '\n';
  return os.str();
}

std::string ValidationReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["errors"] = error_count();
  doc["warnings"] = warning_count();
  auto list = nlohmann::ordered_json::array();
  for (const auto& v : violations_) {
    list.push_back({{"rule", v.rule},
                    {"severity", to_string(v.severity)},
                    {"location", v.location},
                    {"message", v.message}});
  }
  doc["violations"] = std::move(list);
  return doc.dump(2) + "\n";
}

}  // namespace tmkit
