#include "postedit/error.hpp"

namespace postedit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBounds: return "bounds";
    case ErrorCode::kOverlap: return "overlap";
    case ErrorCode::kNotFound: return "not_found";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kSchema: return "schema";
    case ErrorCode::kValidation: return "validation";
    case ErrorCode::kConflict: return "conflict";
    case ErrorCode::kBadRequest: return "bad_request";
    case ErrorCode::kUnauthorized: return "unauthorized";
    case ErrorCode::kForbidden: return "forbidden";
    case ErrorCode::kPreconditionRequired: return "precondition_required";
    case ErrorCode::kEngineUnavailable: return "engine_unavailable";
    case ErrorCode::kEngineError: return "engine_error";
    case ErrorCode::kDetectionFormat: return "detection_format";
    case ErrorCode::kVersion: return "version";
    case ErrorCode::kDegenerateInput: return "degenerate_input";
    case ErrorCode::kIncompleteDesign: return "incomplete_design";
    case ErrorCode::kInsufficientData: return "insufficient_data";
    case ErrorCode::kRow: return "row";
    case ErrorCode::kConfig: return "config";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

BoundsError::BoundsError(std::size_t index, std::size_t length, const std::string& what)
    : Error(ErrorCode::kBounds, what + ": index " + std::to_string(index) + " (length " +
                                    std::to_string(length) + ")"),
      index_(index),
      length_(length) {}

namespace {

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}

}  // namespace

OverlapError::OverlapError(std::vector<std::string> span_ids)
    : Error(ErrorCode::kOverlap, "span overlaps existing span(s): " + join_ids(span_ids)),
      span_ids_(std::move(span_ids)) {}

}  // namespace postedit
