#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "powerdist/extended_real.hpp"

namespace powerdist {

inline constexpr double kWeightSumTolerance = 1e-12;
/// Below this |p| the closed (.)^{1/p} form is catastrophically
/// ill-conditioned; we route to the geometric-mean limit instead.
inline constexpr double kGeometricSwitch = 1e-8;
/// Default slack for inequality checks, scaled by max(1, lhs).
inline constexpr double kCheckTolerance = 1e-12;

/// Nonnegative weights summing to 1 (within 1e-12). Callers get an error
/// rather than silent renormalization.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
    if (w_.empty()) throw std::invalid_argument("WeightVector: need at least one weight");
    double sum = 0.0;
    for (double w : w_) {
      if (!(w >= 0.0) || !std::isfinite(w))
        throw std::invalid_argument("WeightVector: weights must be finite and nonnegative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance)
      throw std::invalid_argument("WeightVector: weights must sum to 1 within 1e-12");
  }

  static WeightVector equal(std::size_t n) {
    if (n == 0) throw std::invalid_argument("WeightVector: need at least one weight");
    return WeightVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  std::span<const double> values() const { return w_; }

 private:
  std::vector<double> w_;
};

namespace detail {

inline void require_nonnegative_finite(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": values must be finite and >= 0");
}

// pow(x, 1/2) routed through sqrt so perfect squares stay exact.
inline double pow_weight(double x, double lambda) {
  if (lambda == 0.5) return std::sqrt(x);
  if (lambda == 1.0) return x;
  return std::pow(x, lambda);
}

}  // namespace detail

/// Equal-weight power mean of two nonnegative values, with the limit cases:
/// max at p = +inf, min at p = -inf, geometric at p -> 0. A zero value
/// forces the result to 0 for p <= 0. Exact closed forms are used at
/// p in {1, 2, -1, 0, +-inf}; other finite p factor out the dominant value
/// before exponentiation so no intermediate overflows or underflows.
inline double power_mean_pair(double a, double b, PowerExponent p) {
  detail::require_nonnegative_finite(a, "power_mean");
  detail::require_nonnegative_finite(b, "power_mean");
  if (p.is_pos_infinity()) return std::max(a, b);
  if (p.is_neg_infinity()) return std::min(a, b);
  if (a == b) return a;
  const double pv = p.value();
  const bool has_zero = a == 0.0 || b == 0.0;
  if (std::abs(pv) < kGeometricSwitch) {
    if (has_zero) return 0.0;
    return std::sqrt(a) * std::sqrt(b);
  }
  if (pv < 0.0 && has_zero) return 0.0;
  if (pv == 1.0) return 0.5 * a + 0.5 * b;
  if (pv == 2.0) return std::sqrt(0.5 * a * a + 0.5 * b * b);
  if (pv == -1.0) return 1.0 / (0.5 / a + 0.5 / b);
  if (pv > 0.0) {
    const double m = std::max(a, b);
    if (m == 0.0) return 0.0;
    const double s = 0.5 * std::pow(a / m, pv) + 0.5 * std::pow(b / m, pv);
    return m * std::pow(s, 1.0 / pv);
  }
  const double m = std::min(a, b);
  const double s = 0.5 * std::pow(a / m, pv) + 0.5 * std::pow(b / m, pv);
  return m * std::pow(s, 1.0 / pv);
}

/// Weighted power mean of a nonnegative tuple. Zero-weight entries do not
/// participate in the max/min/geometric limits or the zero-value convention.
inline double power_mean(std::span<const double> values, const WeightVector& weights, PowerExponent p) {
  if (values.size() != weights.size())
    throw std::invalid_argument("power_mean: values and weights must have equal length");
  for (double v : values) detail::require_nonnegative_finite(v, "power_mean");

  bool has_zero = false, all_equal = true;
  double vmax = -1.0, vmin = std::numeric_limits<double>::infinity(), first = -1.0;
  bool seen = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const double v = values[i];
    if (!seen) { first = v; seen = true; }
    if (v != first) all_equal = false;
    if (v == 0.0) has_zero = true;
    vmax = std::max(vmax, v);
    vmin = std::min(vmin, v);
  }
  if (!seen) throw std::invalid_argument("power_mean: all weights are zero");
  if (all_equal) return first;
  if (p.is_pos_infinity()) return vmax;
  if (p.is_neg_infinity()) return vmin;

  const double pv = p.value();
  if (std::abs(pv) < kGeometricSwitch) {
    if (has_zero) return 0.0;
    double prod = 1.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (weights[i] != 0.0) prod *= detail::pow_weight(values[i], weights[i]);
    return prod;
  }
  if (pv < 0.0 && has_zero) return 0.0;
  if (pv == 1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i];
    return s;
  }
  if (pv == -1.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i)
      if (weights[i] != 0.0) s += weights[i] / values[i];
    return 1.0 / s;
  }
  if (pv == 2.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) s += weights[i] * values[i] * values[i];
    return std::sqrt(s);
  }
  const double m = pv > 0.0 ? vmax : vmin;
  if (m == 0.0) return 0.0;  // only reachable for p > 0 with all-zero support
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (weights[i] != 0.0) s += weights[i] * std::pow(values[i] / m, pv);
  return m * std::pow(s, 1.0 / pv);
}

struct MeanChain {
  double min = 0.0;
  double harmonic = 0.0;
  double geometric = 0.0;
  double arithmetic = 0.0;
  double max = 0.0;
};

/// The five classical means of a positive tuple; nondecreasing by
/// the power-mean ordering.
inline MeanChain mean_chain(std::span<const double> values, const WeightVector& weights) {
  if (values.size() != weights.size())
    throw std::invalid_argument("mean_chain: values and weights must have equal length");
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("mean_chain: values must be finite and > 0");
  MeanChain c;
  c.min = power_mean(values, weights, ExtendedReal::neg_infinity());
  c.harmonic = power_mean(values, weights, ExtendedReal(-1.0));
  c.geometric = power_mean(values, weights, ExtendedReal(0.0));
  c.arithmetic = power_mean(values, weights, ExtendedReal(1.0));
  c.max = power_mean(values, weights, ExtendedReal::infinity());
  return c;
}

struct InequalityCheck {
  bool holds = false;
  double slack = 0.0;  // rhs - lhs
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Minkowski's inequality for nonnegative tuples, 1 < p < inf. Used as a
/// self-test oracle: slack should never be meaningfully negative.
inline InequalityCheck minkowski_check(std::span<const double> xs, std::span<const double> ys, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("minkowski_check: requires 1 < p < inf");
  if (xs.size() != ys.size()) throw std::invalid_argument("minkowski_check: length mismatch");
  for (double v : xs) detail::require_nonnegative_finite(v, "minkowski_check");
  for (double v : ys) detail::require_nonnegative_finite(v, "minkowski_check");
  InequalityCheck r;
  double ssum = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    ssum += std::pow(xs[i] + ys[i], p);
    sx += std::pow(xs[i], p);
    sy += std::pow(ys[i], p);
  }
  r.lhs = std::pow(ssum, 1.0 / p);
  r.rhs = std::pow(sx, 1.0 / p) + std::pow(sy, 1.0 / p);
  r.slack = r.rhs - r.lhs;
  r.holds = r.slack >= -kCheckTolerance;
  return r;
}

struct YoungCheck {
  bool holds = false;
  bool equality = false;  // the y = x^{p-1} case
  double slack = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double q = 0.0;  // conjugate exponent p/(p-1)
};

/// Young's inequality x*y <= x^p/p + y^q/q with 1/p + 1/q = 1.
inline YoungCheck young_check(double x, double y, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("young_check: requires 1 < p < inf");
  detail::require_nonnegative_finite(x, "young_check");
  detail::require_nonnegative_finite(y, "young_check");
  YoungCheck r;
  r.q = p / (p - 1.0);
  r.lhs = x * y;
  r.rhs = std::pow(x, p) / p + std::pow(y, r.q) / r.q;
  r.slack = r.rhs - r.lhs;
  r.holds = r.slack >= -kCheckTolerance;
  r.equality = std::abs(y - std::pow(x, p - 1.0)) <= 1e-12;
  return r;
}

}  // namespace powerdist
