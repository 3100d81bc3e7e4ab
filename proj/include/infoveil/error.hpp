// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace infoveil {

enum class ErrorCode {
  malformed_page,
  adapter_mismatch,
  unknown_section,
  unknown_forum,
  never_seen,
  degenerate_sample,
  too_few_tail_points,
  unknown_adapter,
  io_failure,
  empty_store,
  duplicate_snapshot,
  fetch_failure,
  host_unreachable,
  stale_index,
  validation,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_page: return "MalformedPage";
    case ErrorCode::adapter_mismatch: return "AdapterMismatch";
    case ErrorCode::unknown_section: return "UnknownSection";
    case ErrorCode::unknown_forum: return "UnknownForum";
    case ErrorCode::never_seen: return "NeverSeen";
    case ErrorCode::degenerate_sample: return "DegenerateSample";
    case ErrorCode::too_few_tail_points: return "TooFewTailPoints";
    case ErrorCode::unknown_adapter: return "UnknownAdapter";
    case ErrorCode::io_failure: return "IoFailure";
    case ErrorCode::empty_store: return "EmptyStore";
    case ErrorCode::duplicate_snapshot: return "DuplicateSnapshot";
    case ErrorCode::fetch_failure: return "FetchFailure";
    case ErrorCode::host_unreachable: return "HostUnreachable";
    case ErrorCode::stale_index: return "StaleIndex";
    case ErrorCode::validation: return "ValidationError";
  }
  return "Unknown";
}

/// Every failure the library reports carries a machine-readable code.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace infoveil
