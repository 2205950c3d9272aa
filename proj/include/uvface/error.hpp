#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uvface {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Truncated or malformed binary file; carries the byte offset where reading failed.
class CorruptFileError : public Error {
 public:
  CorruptFileError(const std::string& what, std::size_t offset)
      : Error("byte " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Mismatched array dimensions or an otherwise invalid argument.
class ShapeError : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Topological or numerical failure (non-manifold mesh, solver divergence, degenerate input).
class GeometryError : public Error {
 public:
  using Error::Error;
};

}  // namespace uvface
