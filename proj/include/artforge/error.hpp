#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace artforge {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input document. `offset` is the byte position where parsing stopped.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Well-formed document that lacks a required field or has a field of the wrong type.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& what)
      : Error("schema error at '" + field + "': " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Values that parse but violate a domain invariant. `indices` lists the offending elements.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::vector<std::size_t> indices = {})
      : Error(what), indices_(std::move(indices)) {}

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace artforge
