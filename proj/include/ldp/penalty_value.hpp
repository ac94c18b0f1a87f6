#pragma once

// Extended-nonnegative-real severity score with a symbolic Infinite value.
// Infinite marks forbidden states (curb strikes, fully closed adjacent
// lanes) that no finite cap should ever be confused with.

#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <system_error>

#include "ldp/errors.hpp"

namespace ldp {
namespace detail {

// Shortest decimal string that parses back to the identical double.
inline std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view text, const std::string& where) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(where + ": not a decimal number: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

class PenaltyValue {
 public:
  PenaltyValue() = default;

  explicit PenaltyValue(double value) : value_(value) {
    if (std::isnan(value) || value < 0.0) {
      throw ValidationError("penalty must be a nonnegative real, got " +
                            std::to_string(value));
    }
  }

  static PenaltyValue infinite() {
    PenaltyValue v;
    v.value_ = std::numeric_limits<double>::infinity();
    return v;
  }

  bool is_infinite() const { return std::isinf(value_); }

  // +inf when infinite.
  double value() const { return value_; }

  // Multiplicative composition with inf * 0 = 0: zero encroachment carries
  // zero penalty no matter how hostile the multiplicative factor is.
  friend PenaltyValue operator*(const PenaltyValue& a, const PenaltyValue& b) {
    PenaltyValue r;
    r.value_ = (a.value_ == 0.0 || b.value_ == 0.0) ? 0.0 : a.value_ * b.value_;
    return r;
  }

  friend PenaltyValue operator*(double factor, const PenaltyValue& p) {
    return PenaltyValue(factor) * p;
  }

  friend bool operator==(const PenaltyValue& a, const PenaltyValue& b) {
    return a.value_ == b.value_;
  }
  friend auto operator<=>(const PenaltyValue& a, const PenaltyValue& b) {
    return a.value_ <=> b.value_;
  }

  // Serialized form: shortest round-trip decimal, or the string "inf".
  std::string to_string() const {
    return is_infinite() ? "inf" : detail::format_double(value_);
  }

  static PenaltyValue parse(std::string_view text) {
    if (text == "inf") return infinite();
    double v = detail::parse_double(text, "penalty value");
    if (std::isnan(v) || std::isinf(v) || v < 0.0) {
      throw ParseError("penalty value out of range: '" + std::string(text) + "'");
    }
    return PenaltyValue(v);
  }

 private:
  double value_ = 0.0;
};

}  // namespace ldp
