#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "powerdist/distance_matrix.hpp"
#include "powerdist/format.hpp"

namespace powerdist {

/// A nonnegative-to-nonnegative map applied entrywise to a matrix. The
/// built-ins are the classic metric-preserving transforms; custom tables
/// are piecewise linear through caller points and make no preservation
/// promise beyond what the condition checks observe.
class Transform {
 public:
  enum class Kind { scale, snowflake, truncate, bounded, discrete_step, piecewise_c9, custom_table };

  static Transform scale(double alpha) {
    require_positive(alpha, "scale");
    return Transform(Kind::scale, alpha);
  }

  /// x^alpha with alpha in (0, 1].
  static Transform snowflake(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw std::invalid_argument("snowflake: alpha must be in (0, 1]");
    return Transform(Kind::snowflake, alpha);
  }

  /// min(alpha, x) — the radar screen transform.
  static Transform truncate(double alpha) {
    require_positive(alpha, "truncate");
    return Transform(Kind::truncate, alpha);
  }

  /// x / (1 + x).
  static Transform bounded() { return Transform(Kind::bounded, 0.0); }

  /// 0 at x <= 0, 1 otherwise.
  static Transform discrete_step() { return Transform(Kind::discrete_step, 0.0); }

  /// The staircase map: x on [0,1), 1 on [1,2], x-1 on (2,3), 2 on [3,inf).
  /// The source definition skips x = 2; phi(2) = 1 is the left-continuous
  /// repair, which keeps the map isotone and subadditive.
  static Transform piecewise_c9() { return Transform(Kind::piecewise_c9, 0.0); }

  /// Piecewise linear through (x, phi(x)) points; must start at (0, 0) and
  /// be nondecreasing in both coordinates. Constant beyond the last point.
  static Transform custom_table(std::vector<std::pair<double, double>> points) {
    if (points.empty() || points.front().first != 0.0 || points.front().second != 0.0)
      throw std::invalid_argument("custom table must start at (0, 0)");
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (!(points[i].first > points[i - 1].first))
        throw std::invalid_argument("custom table x-coordinates must be strictly increasing");
      if (points[i].second < points[i - 1].second)
        throw std::invalid_argument("custom table values must be nondecreasing");
    }
    Transform t(Kind::custom_table, 0.0);
    t.table_ = std::make_shared<std::vector<std::pair<double, double>>>(std::move(points));
    return t;
  }

  Kind kind() const { return kind_; }
  double parameter() const { return alpha_; }

  double operator()(double x) const {
    if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("transform input must be finite and >= 0");
    switch (kind_) {
      case Kind::scale: return alpha_ * x;
      case Kind::snowflake: return std::pow(x, alpha_);
      case Kind::truncate: return std::min(alpha_, x);
      case Kind::bounded: return x / (1.0 + x);
      case Kind::discrete_step: return x <= 0.0 ? 0.0 : 1.0;
      case Kind::piecewise_c9:
        if (x < 1.0) return x;
        if (x <= 2.0) return 1.0;
        if (x < 3.0) return x - 1.0;
        return 2.0;
      case Kind::custom_table: {
        const auto& pts = *table_;
        if (x >= pts.back().first) return pts.back().second;
        auto it = std::upper_bound(pts.begin(), pts.end(), x,
                                   [](double v, const auto& p) { return v < p.first; });
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        const double t = (x - lo.first) / (hi.first - lo.first);
        return lo.second + t * (hi.second - lo.second);
      }
    }
    throw std::logic_error("unreachable");
  }

  /// Hard-coded verdict for the built-ins (all metric preserving); absent
  /// for custom tables, where only sampled evidence is available.
  std::optional<bool> analytic_metric_preserving() const {
    if (kind_ == Kind::custom_table) return std::nullopt;
    return true;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::scale: return "scale:" + format_number(alpha_);
      case Kind::snowflake: return "snowflake:" + format_number(alpha_);
      case Kind::truncate: return "truncate:" + format_number(alpha_);
      case Kind::bounded: return "bounded";
      case Kind::discrete_step: return "discrete-step";
      case Kind::piecewise_c9: return "piecewise-c9";
      case Kind::custom_table: return "custom-table[" + std::to_string(table_->size()) + "]";
    }
    return "?";
  }

 private:
  Transform(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}

  static void require_positive(double a, const char* what) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::invalid_argument(std::string(what) + ": alpha must be finite and > 0");
  }

  Kind kind_;
  double alpha_;
  std::shared_ptr<const std::vector<std::pair<double, double>>> table_;
};

/// Parses "name" or "name:param", e.g. "snowflake:0.5".
inline Transform parse_transform(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::optional<double> param;
  if (colon != std::string::npos) param = parse_real(text.substr(colon + 1));
  auto need = [&]() {
    if (!param) throw std::invalid_argument("transform '" + name + "' needs a parameter, e.g. " + name + ":0.5");
    return *param;
  };
  if (name == "scale") return Transform::scale(need());
  if (name == "snowflake") return Transform::snowflake(need());
  if (name == "truncate") return Transform::truncate(need());
  if (name == "bounded") return Transform::bounded();
  if (name == "discrete-step") return Transform::discrete_step();
  if (name == "piecewise-c9") return Transform::piecewise_c9();
  throw std::invalid_argument("unknown transform '" + name + "'");
}

/// Entry-wise application. The zero diagonal survives because every spec
/// maps 0 to 0 (custom tables are validated to). Output symmetry is
/// structural; degeneracy can appear if the map crushes positive entries.
inline DissimilarityMatrix apply_transform(const DissimilarityMatrix& m, const Transform& t) {
  if (t(0.0) != 0.0) throw std::invalid_argument("transform must map 0 to 0");
  const std::size_t n = m.size();
  std::vector<double> out(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = t(m(i, j));
      if (!(v >= 0.0) || !std::isfinite(v))
        throw std::invalid_argument("transform produced an invalid entry at (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
  return DissimilarityMatrix::from_entries(n, std::move(out), m.labels());
}

struct SampledPairWitness {
  double x = 0.0;
  double y = 0.0;
  double lhs = 0.0;  // phi(x + y)
  double rhs = 0.0;  // phi(x) + phi(y)
};

struct NecessaryConditionsReport {
  bool zero_preimage = true;   // phi(x) = 0 only at x = 0, and phi(0) = 0
  bool range_nonnegative = true;
  bool subadditive = true;
  std::optional<double> zero_preimage_witness;
  std::optional<double> range_witness;
  std::optional<SampledPairWitness> subadditivity_witness;  // worst excess

  bool all_pass() const { return zero_preimage && range_nonnegative && subadditive; }
};

/// Sample-based check of the conditions any metric-preserving map must
/// satisfy. Evidence only: subadditivity is probed on all pairs from the
/// sample, with the worst offender reported.
inline NecessaryConditionsReport necessary_conditions_check(const Transform& t,
                                                            std::span<const double> sample_xs) {
  if (sample_xs.empty()) throw std::invalid_argument("necessary_conditions_check: empty sample");
  NecessaryConditionsReport r;
  if (t(0.0) != 0.0) {
    r.zero_preimage = false;
    r.zero_preimage_witness = 0.0;
  }
  for (double x : sample_xs) {
    const double fx = t(x);
    if (x > 0.0 && fx == 0.0 && r.zero_preimage) {
      r.zero_preimage = false;
      r.zero_preimage_witness = x;
    }
    if (fx < 0.0 && r.range_nonnegative) {
      r.range_nonnegative = false;
      r.range_witness = x;
    }
  }
  double worst_excess = 0.0;
  for (double x : sample_xs)
    for (double y : sample_xs) {
      if (y < x) continue;  // unordered pairs
      const double lhs = t(x + y);
      const double rhs = t(x) + t(y);
      const double excess = lhs - rhs;
      if (excess > 1e-12 && excess > worst_excess) {
        worst_excess = excess;
        r.subadditive = false;
        r.subadditivity_witness = SampledPairWitness{x, y, lhs, rhs};
      }
    }
  return r;
}

struct SufficientConditionsReport {
  bool isotone = true;
  bool zero_at_zero = true;
  bool subadditive = true;
  std::optional<std::pair<double, double>> isotone_witness;
  std::optional<SampledPairWitness> subadditivity_witness;

  /// All three conditions observed on the sample: metric preserving on
  /// this evidence.
  bool all_pass() const { return isotone && zero_at_zero && subadditive; }
};

inline SufficientConditionsReport sufficient_conditions_check(const Transform& t,
                                                              std::span<const double> sample_xs) {
  if (sample_xs.empty()) throw std::invalid_argument("sufficient_conditions_check: empty sample");
  SufficientConditionsReport r;
  r.zero_at_zero = t(0.0) == 0.0;
  std::vector<double> xs(sample_xs.begin(), sample_xs.end());
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (t(xs[i]) < t(xs[i - 1]) - 1e-12) {
      r.isotone = false;
      r.isotone_witness = {xs[i - 1], xs[i]};
      break;
    }
  }
  const NecessaryConditionsReport nec = necessary_conditions_check(t, sample_xs);
  r.subadditive = nec.subadditive;
  r.subadditivity_witness = nec.subadditivity_witness;
  return r;
}

}  // namespace powerdist
