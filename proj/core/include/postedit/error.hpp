#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace postedit {

/// Machine-readable error class. The service maps these onto HTTP statuses.
enum class ErrorCode {
  kBounds,
  kOverlap,
  kNotFound,
  kParse,
  kSchema,
  kValidation,
  kConflict,
  kBadRequest,
  kUnauthorized,
  kForbidden,
  kPreconditionRequired,
  kEngineUnavailable,
  kEngineError,
  kDetectionFormat,
  kVersion,
  kDegenerateInput,
  kIncompleteDesign,
  kInsufficientData,
  kRow,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// An index fell outside the code-point length of the text it refers to.
class BoundsError : public Error {
 public:
  BoundsError(std::size_t index, std::size_t length, const std::string& what);

  std::size_t index() const noexcept { return index_; }
  std::size_t length() const noexcept { return length_; }

 private:
  std::size_t index_;
  std::size_t length_;
};

class OverlapError : public Error {
 public:
  explicit OverlapError(std::vector<std::string> span_ids);

  const std::vector<std::string>& span_ids() const noexcept { return span_ids_; }

 private:
  std::vector<std::string> span_ids_;
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& what) : Error(ErrorCode::kNotFound, what) {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t byte_offset, const std::string& what)
      : Error(ErrorCode::kParse, what), byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

/// A JSON document parsed but did not match the expected shape.
class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& what)
      : Error(ErrorCode::kSchema, what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class BadRequestError : public Error {
 public:
  explicit BadRequestError(const std::string& what) : Error(ErrorCode::kBadRequest, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::kConfig, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

}  // namespace postedit
