#pragma once

#include <stdexcept>
#include <string>

namespace ldp {

// Input text could not be understood: malformed JSON, wrong value types,
// unknown or missing fields, unsupported schema versions.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally well-formed input whose values violate a domain invariant
// (negative lane width, duplicate ids, unknown references, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ldp
