#ifndef SLOWRATE_EXTENDED_REAL_HPP
#define SLOWRATE_EXTENDED_REAL_HPP

#include <cmath>
#include <compare>
#include <cstdio>
#include <string>

#include "slowrate/errors.hpp"

namespace slowrate {

/// A value in [-inf, +inf] where the infinities are tagged explicitly instead
/// of being carried as IEEE overflow. Finite payloads are always finite doubles.
class ExtendedReal {
 public:
  enum class Kind { kMinusInfinity, kFinite, kPlusInfinity };

  constexpr ExtendedReal() = default;
  ExtendedReal(double v) : value_(v) {  // NOLINT(google-explicit-constructor)
    if (!std::isfinite(v)) {
      throw InputError("ExtendedReal: finite payload required");
    }
  }

  static constexpr ExtendedReal plus_infinity() { return ExtendedReal(Kind::kPlusInfinity); }
  static constexpr ExtendedReal minus_infinity() { return ExtendedReal(Kind::kMinusInfinity); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::kFinite; }
  constexpr bool is_plus_infinity() const { return kind_ == Kind::kPlusInfinity; }
  constexpr bool is_minus_infinity() const { return kind_ == Kind::kMinusInfinity; }

  double finite_value() const {
    if (!is_finite()) throw InputError("ExtendedReal: value is infinite");
    return value_;
  }

  // Lossy bridge to IEEE doubles, for arithmetic that is meant to saturate.
  double to_double() const {
    switch (kind_) {
      case Kind::kPlusInfinity: return HUGE_VAL;
      case Kind::kMinusInfinity: return -HUGE_VAL;
      case Kind::kFinite: break;
    }
    return value_;
  }

  constexpr std::partial_ordering operator<=>(const ExtendedReal& o) const {
    if (kind_ != o.kind_) return static_cast<int>(kind_) <=> static_cast<int>(o.kind_);
    if (kind_ != Kind::kFinite) return std::partial_ordering::equivalent;
    return value_ <=> o.value_;
  }
  constexpr bool operator==(const ExtendedReal& o) const {
    return kind_ == o.kind_ && (kind_ != Kind::kFinite || value_ == o.value_);
  }

  std::string to_string() const {
    if (is_plus_infinity()) return "+inf";
    if (is_minus_infinity()) return "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value_);
    return buf;
  }

 private:
  constexpr explicit ExtendedReal(Kind k) : kind_(k) {}

  Kind kind_ = Kind::kFinite;
  double value_ = 0.0;
};

}  // namespace slowrate

#endif  // SLOWRATE_EXTENDED_REAL_HPP
