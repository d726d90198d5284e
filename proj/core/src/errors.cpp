#include "argrel/errors.hpp"

namespace argrel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::CacheCorrupt: return "CacheCorrupt";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InsufficientPool: return "InsufficientPool";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::ProbabilityError: return "ProbabilityError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

MalformedJson::MalformedJson(std::string source, std::size_t byte_offset,
                             const std::string& detail)
    : Error(ErrorCode::MalformedJson,
            source + " (byte " + std::to_string(byte_offset) + "): " + detail),
      source_(std::move(source)),
      byte_offset_(byte_offset) {}

SchemaViolation::SchemaViolation(std::string map_id, std::string location,
                                 const std::string& detail)
    : Error(ErrorCode::SchemaViolation, map_id + " at " + location + ": " + detail),
      map_id_(std::move(map_id)),
      location_(std::move(location)) {}

NetworkError::NetworkError(std::string url, int http_status, const std::string& detail)
    : Error(ErrorCode::NetworkError,
            url + " (status " + std::to_string(http_status) + "): " + detail),
      url_(std::move(url)),
      http_status_(http_status) {}

bool NetworkError::retryable() const noexcept {
  return http_status_ == 0 || http_status_ == 408 || http_status_ == 429 || http_status_ >= 500;
}

FormatError::FormatError(std::string source, std::size_t line, const std::string& detail)
    : Error(ErrorCode::FormatError, source + ":" + std::to_string(line) + ": " + detail),
      source_(std::move(source)),
      line_(line) {}

InsufficientPool::InsufficientPool(std::uint64_t available, std::uint64_t requested)
    : Error(ErrorCode::InsufficientPool,
            "only " + std::to_string(available) + " distinct candidate pairs available, " +
                std::to_string(requested) + " requested"),
      available_(available),
      requested_(requested) {}

}  // namespace argrel
