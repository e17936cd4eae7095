// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace tmkit {

enum class Severity { Error, Warning };
std::string_view to_string(Severity severity) noexcept;

struct Violation {
  std::string rule;  // "V1".."V5", "DANGLING", "COVERAGE", ...
  Severity severity = Severity::Error;
  std::string location;  // dotted path, "a -> b" for edges
  std::string message;

  bool operator==(const Violation&) const = default;
};

class ValidationReport {
 public:
  void add(std::string rule, Severity severity, std::string location,
           std::string message);
  void append(const ValidationReport& other);

  /// Errors first, then by rule, location and message.
  void sort();

  [[nodiscard]] std::size_t error_count() const noexcept;
  [[nodiscard]] std::size_t warning_count() const noexcept;
  [[nodiscard]] bool has_errors() const noexcept { return error_count() > 0; }
  [[nodiscard]] bool empty() const noexcept { return violations_.empty(); }
  [[nodiscard]] bool contains(std::string_view rule) const noexcept;
  [[nodiscard]] const std::vector<Violation>& violations() const noexcept {
    return violations_;
  }

  /// One line per violation followed by "N errors, M warnings".
  [[nodiscard]] std::string to_text() const;
  [[nodiscard]] std::string to_json() const;

  bool operator==(const ValidationReport&) const = default;

 private:
  std::vector<Violation> violations_;
};

}  // namespace tmkit
