#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace reconeval {

/// Malformed input data. Carries the byte offset (binary payloads) or the
/// 1-based line number (text payloads) where parsing stopped.
class ParseError : public std::runtime_error {
 public:
  enum class Kind { MalformedHeader, TruncatedBody, IndexOutOfRange, InvalidValue, UnsupportedFormat };
  enum class Location { Byte, Line };

  ParseError(Kind kind, Location where, std::size_t offset, const std::string& what)
      : std::runtime_error(describe(kind, where, offset, what)), kind_(kind), where_(where), offset_(offset) {}

  Kind kind() const noexcept { return kind_; }
  Location location() const noexcept { return where_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  static std::string describe(Kind kind, Location where, std::size_t offset, const std::string& what) {
    const char* label = "parse error";
    switch (kind) {
      case Kind::MalformedHeader: label = "malformed header"; break;
      case Kind::TruncatedBody: label = "truncated body"; break;
      case Kind::IndexOutOfRange: label = "face index out of range"; break;
      case Kind::InvalidValue: label = "invalid value"; break;
      case Kind::UnsupportedFormat: label = "unsupported format"; break;
    }
    return std::string(label) + (where == Location::Byte ? " at byte " : " at line ") + std::to_string(offset) +
           ": " + what;
  }

  Kind kind_;
  Location where_;
  std::size_t offset_;
};

/// Numerical failure: the data does not determine a unique answer.
class DegenerateError : public std::runtime_error {
 public:
  enum class Kind {
    UnderConstrained,       // rank-deficient normal equations / symmetric geometry
    TooFewCorrespondences,  // not enough data survived filtering
    DegenerateSample,       // collinear or coincident point sets
    NoIntersection,         // geometric query missed everything
    EmptyInput,
  };

  DegenerateError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace reconeval
