// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace morrey {

enum class ErrorKind {
  BadGeometry,
  UnderResolved,
  EmptyDomain,
  NonFiniteSample,
  BadParams,
  Infeasible,
  Syntax,
  UnknownIdentifier,
  Io,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` selects the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure with the byte offset of the offending token.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t offset, const std::string& what)
      : Error(kind, what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BadGeometry: return "BadGeometry";
    case ErrorKind::UnderResolved: return "UnderResolved";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::NonFiniteSample: return "NonFiniteSample";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace morrey
