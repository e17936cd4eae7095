// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tmkit {

enum class ErrorCode {
  Parse,
  DupId,
  Undef,
  Dangling,
  RegionDisconnected,
  UnboundedLoop,
  Budget,
  InvalidInput,
  TooLarge,
  Version,
  Schema,
  MultiInitial,
  Unsupported,
  Io,
};

/// Upper-case wire name of an error code, e.g. "REGION_DISCONNECTED".
std::string_view to_string(ErrorCode code) noexcept;

struct SourceSpan {
  std::string file;
  int line = 1;    // 1-based
  int column = 1;  // 1-based

  bool operator==(const SourceSpan&) const = default;
};

std::string to_string(const SourceSpan& span);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourceSpan> span = std::nullopt);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const std::optional<SourceSpan>& span() const noexcept {
    return span_;
  }
  /// Message without the code prefix or span.
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<SourceSpan> span_;
  std::string detail_;
};

}  // namespace tmkit
