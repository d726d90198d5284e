#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace argrel {

enum class ErrorCode {
  MalformedJson,
  SchemaViolation,
  NetworkError,
  CacheCorrupt,
  IoError,
  InsufficientPool,
  EmptyCorpus,
  FormatError,
  EmptyClass,
  DegenerateData,
  LengthMismatch,
  UnknownLabel,
  ProbabilityError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code);

/// Base of every error thrown by the library. The CLI maps any Error to
/// exit status 1.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// JSON syntax failure. `source` is a map id or a file name.
class MalformedJson : public Error {
 public:
  MalformedJson(std::string source, std::size_t byte_offset, const std::string& detail);

  const std::string& source() const noexcept { return source_; }
  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::string source_;
  std::size_t byte_offset_;
};

class SchemaViolation : public Error {
 public:
  SchemaViolation(std::string map_id, std::string location, const std::string& detail);

  const std::string& map_id() const noexcept { return map_id_; }
  /// JSON-pointer-ish location, e.g. "/edges/3/toID".
  const std::string& location() const noexcept { return location_; }

 private:
  std::string map_id_;
  std::string location_;
};

class NetworkError : public Error {
 public:
  /// `http_status` is 0 when no response was received.
  NetworkError(std::string url, int http_status, const std::string& detail);

  const std::string& url() const noexcept { return url_; }
  int http_status() const noexcept { return http_status_; }
  bool retryable() const noexcept;

 private:
  std::string url_;
  int http_status_;
};

class FormatError : public Error {
 public:
  FormatError(std::string source, std::size_t line, const std::string& detail);

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

class InsufficientPool : public Error {
 public:
  InsufficientPool(std::uint64_t available, std::uint64_t requested);

  std::uint64_t available() const noexcept { return available_; }
  std::uint64_t requested() const noexcept { return requested_; }

 private:
  std::uint64_t available_;
  std::uint64_t requested_;
};

}  // namespace argrel
