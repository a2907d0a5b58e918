#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>

namespace powerdist {

/// A real number extended with the two infinities. The one state a plain
/// double can hold that this type cannot is NaN: any attempt to store one
/// throws instead, so downstream comparisons stay totally ordered.
class ExtendedReal {
 public:
  ExtendedReal() = default;

  ExtendedReal(double v) : v_(v) {  // NOLINT: implicit by design
    if (std::isnan(v)) throw std::domain_error("ExtendedReal: NaN is not representable");
  }

  static ExtendedReal infinity() { return ExtendedReal(std::numeric_limits<double>::infinity()); }
  static ExtendedReal neg_infinity() { return ExtendedReal(-std::numeric_limits<double>::infinity()); }

  double value() const { return v_; }
  bool is_finite() const { return std::isfinite(v_); }
  bool is_pos_infinity() const { return std::isinf(v_) && v_ > 0; }
  bool is_neg_infinity() const { return std::isinf(v_) && v_ < 0; }

  friend bool operator==(ExtendedReal a, ExtendedReal b) { return a.v_ == b.v_; }
  friend auto operator<=>(ExtendedReal a, ExtendedReal b) { return a.v_ <=> b.v_; }

 private:
  double v_ = 0.0;
};

/// Exponent of a power mean; lives in the extended reals.
using PowerExponent = ExtendedReal;

}  // namespace powerdist
