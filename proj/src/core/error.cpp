// SPDX-License-Identifier: Apache-2.0
#include "tmkit/error.hpp"

namespace tmkit {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::DupId: return "DUPID";
    case ErrorCode::Undef: return "UNDEF";
    case ErrorCode::Dangling: return "DANGLING";
    case ErrorCode::RegionDisconnected: return "REGION_DISCONNECTED";
    case ErrorCode::UnboundedLoop: return "UNBOUNDED_LOOP";
    case ErrorCode::Budget: return "BUDGET";
    case ErrorCode::InvalidInput: return "INVALID_INPUT";
    case ErrorCode::TooLarge: return "TOO_LARGE";
    case ErrorCode::Version: return "VERSION";
    case ErrorCode::Schema: return "SCHEMA";
    case ErrorCode::MultiInitial: return "MULTI_INITIAL";
    case ErrorCode::Unsupported: return "UNSUPPORTED";
    case ErrorCode::Io: return "IO";
  }
  return "UNKNOWN";
}

std::string to_string(const SourceSpan& span) {
  return span.file + ":" + std::to_string(span.line) + ":" +
         std::to_string(span.column);
}

namespace {

std::string compose(ErrorCode code, const std::string& message,
                    const std::optional<SourceSpan>& span) {
  std::string out;
  if (span) out += to_string(*span) + ": ";
  out += to_string(code);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<SourceSpan> span)
    : std::runtime_error(compose(code, message, span)),
      code_(code),
      span_(std::move(span)),
      detail_(message) {}

}  // namespace tmkit
