#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "powerdist/fixtures.hpp"
#include "powerdist/power_triangle.hpp"

namespace powerdist {

/// Real-valued sequence evaluable at any index in 1..max_index (unbounded
/// for the closed-form kinds). Subsequences compose by index reindexing.
class Sequence {
 public:
  static Sequence reciprocal() {
    return Sequence([](std::int64_t n) { return 1.0 / static_cast<double>(n); }, std::nullopt, "1/n");
  }

  /// x_n = a + b/n.
  static Sequence affine_reciprocal(double a, double b) {
    return Sequence([a, b](std::int64_t n) { return a + b / static_cast<double>(n); }, std::nullopt,
                    format_number(a) + " + " + format_number(b) + "/n");
  }

  static Sequence constant(double c) {
    return Sequence([c](std::int64_t) { return c; }, std::nullopt, "constant " + format_number(c));
  }

  /// Explicit prefix x_1..x_K.
  static Sequence table(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("Sequence::table: need at least one value");
    auto data = std::make_shared<std::vector<double>>(std::move(values));
    const std::int64_t k = static_cast<std::int64_t>(data->size());
    return Sequence([data](std::int64_t n) { return (*data)[static_cast<std::size_t>(n - 1)]; }, k,
                    "table[" + std::to_string(k) + "]");
  }

  /// Subsequence x_{k n}.
  Sequence with_stride(std::int64_t k) const {
    if (k < 1) throw std::invalid_argument("Sequence::with_stride: stride must be >= 1");
    Sequence base = *this;
    std::optional<std::int64_t> mi;
    if (base.max_index_) mi = *base.max_index_ / k;
    return Sequence([base, k](std::int64_t n) { return base.value(k * n); }, mi,
                    base.describe() + " (stride " + std::to_string(k) + ")");
  }

  /// Subsequence through an explicit strictly increasing index map.
  Sequence with_selector(std::vector<std::int64_t> indices) const {
    if (indices.empty()) throw std::invalid_argument("Sequence::with_selector: empty selector");
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] < 1 || (i > 0 && indices[i] <= indices[i - 1]))
        throw std::invalid_argument("Sequence::with_selector: selector must be strictly increasing");
    }
    Sequence base = *this;
    auto sel = std::make_shared<std::vector<std::int64_t>>(std::move(indices));
    std::int64_t k = static_cast<std::int64_t>(sel->size());
    if (base.max_index_) {
      std::int64_t usable = 0;
      for (std::int64_t idx : *sel)
        if (idx <= *base.max_index_) ++usable;
      k = usable;
    }
    return Sequence([base, sel](std::int64_t n) { return base.value((*sel)[static_cast<std::size_t>(n - 1)]); },
                    k, base.describe() + " (selector)");
  }

  double value(std::int64_t n) const {
    if (n < 1) throw std::out_of_range("sequence index must be >= 1");
    if (max_index_ && n > *max_index_)
      throw std::out_of_range("sequence index " + std::to_string(n) + " beyond table of size " +
                              std::to_string(*max_index_));
    return eval_(n);
  }

  std::optional<std::int64_t> max_index() const { return max_index_; }
  const std::string& describe() const { return desc_; }

 private:
  Sequence(std::function<double(std::int64_t)> eval, std::optional<std::int64_t> max_index, std::string desc)
      : eval_(std::move(eval)), max_index_(max_index), desc_(std::move(desc)) {}

  std::function<double(std::int64_t)> eval_;
  std::optional<std::int64_t> max_index_;
  std::string desc_;
};

enum class Verdict { certified, refuted, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::certified: return "certified";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

/// Per-epsilon outcome of a finite-horizon tail check. `tail_from` is the
/// least N whose tail (N, N_max] was verified clean.
struct EpsilonEntry {
  double eps = 0.0;
  bool verified = false;
  std::int64_t tail_from = 0;        // meaningful when verified
  std::int64_t last_violation = 0;   // 0 when no violation seen
  std::int64_t deep_violations = 0;  // violations with index (or pair min) above horizon/2
};

/// Persistent violations in the deep half of the horizon are treated as a
/// refutation; fewer are inconclusive. Finite evidence either way.
inline constexpr std::int64_t kRefuteThreshold = 10;

struct ConvergenceCertificate {
  double candidate = 0.0;
  std::int64_t horizon = 0;
  std::vector<EpsilonEntry> entries;
  Verdict verdict = Verdict::inconclusive;
  std::optional<std::int64_t> witness_n;  // a deep violating index, on refutation
  std::optional<double> witness_distance;
};

namespace detail {

inline void require_schedule(std::span<const double> eps, std::int64_t n_max) {
  if (eps.empty()) throw std::invalid_argument("epsilon schedule must be nonempty");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !std::isfinite(eps[i]))
      throw std::invalid_argument("epsilon schedule must be positive and finite");
    if (i > 0 && !(eps[i] < eps[i - 1]))
      throw std::invalid_argument("epsilon schedule must be strictly decreasing");
  }
  const double needed = 10.0 / eps.back();
  if (static_cast<double>(n_max) < needed)
    throw std::invalid_argument("horizon too small: need N_max >= 10/min(eps) = " + format_number(needed));
}

}  // namespace detail

/// Default schedule 1e-1 .. 1e-6, clipped to what a horizon can support.
inline std::vector<double> default_epsilon_schedule(std::int64_t n_max = 10'000'000) {
  std::vector<double> eps;
  for (int k = 1; k <= 6; ++k) {
    const double e = std::pow(10.0, -k);
    if (10.0 / e <= static_cast<double>(n_max)) eps.push_back(e);
  }
  if (eps.empty()) throw std::invalid_argument("horizon too small for any default epsilon");
  return eps;
}

/// Finite-horizon convergence check of d(x_n, candidate) < eps. For each
/// epsilon the least clean-tail N is found by a single pass recording the
/// last violating index. "certified" is evidence up to the horizon, not a
/// proof; a refutation requires persistent deep-half violations.
inline ConvergenceCertificate limit_check(AnalyticSpace space, const Sequence& seq, double candidate,
                                          std::span<const double> eps_schedule, std::int64_t n_max) {
  detail::require_schedule(eps_schedule, n_max);
  if (seq.max_index() && *seq.max_index() < n_max)
    throw std::invalid_argument("sequence table shorter than horizon");

  ConvergenceCertificate cert;
  cert.candidate = candidate;
  cert.horizon = n_max;
  cert.entries.resize(eps_schedule.size());
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) cert.entries[k].eps = eps_schedule[k];

  const std::int64_t half = n_max / 2;
  std::vector<double> last_violation_d(eps_schedule.size(), 0.0);
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const double d = eval_distance(space, seq.value(n), candidate);
    // d violates exactly the schedule suffix of epsilons <= d.
    for (std::size_t k = eps_schedule.size(); k-- > 0;) {
      if (d < eps_schedule[k]) break;
      cert.entries[k].last_violation = n;
      last_violation_d[k] = d;
      if (n > half) ++cert.entries[k].deep_violations;
    }
  }

  bool any_refuted = false, all_verified = true;
  for (std::size_t k = 0; k < cert.entries.size(); ++k) {
    EpsilonEntry& e = cert.entries[k];
    if (e.last_violation < n_max) {
      e.verified = true;
      e.tail_from = e.last_violation;
    } else if (e.deep_violations >= kRefuteThreshold) {
      any_refuted = true;
      if (!cert.witness_n) {
        cert.witness_n = e.last_violation;
        cert.witness_distance = last_violation_d[k];
      }
    }
    all_verified = all_verified && e.verified;
  }
  cert.verdict = any_refuted ? Verdict::refuted : (all_verified ? Verdict::certified : Verdict::inconclusive);
  return cert;
}

struct PairWitness {
  std::int64_t n = 0;
  std::int64_t m = 0;
  double distance = 0.0;
};

struct CauchyReport {
  std::int64_t horizon = 0;
  std::vector<EpsilonEntry> entries;
  Verdict verdict = Verdict::inconclusive;
  std::optional<PairWitness> witness;  // deepest violating pair, on refutation
  double horizon_diameter = 0.0;       // max pairwise distance seen (boundedness)
  bool derived_from_limit = false;     // schedule obtained via the 2*sigma*eps bound
};

/// Exhaustive pairwise tail check of d(x_n, x_m) < eps. Quadratic in the
/// horizon, so callers pick N_max accordingly (the closed-form fixtures are
/// cheap up to ~2e4). Verification logic mirrors limit_check with pairs
/// ranked by min(n, m).
inline CauchyReport cauchy_check(AnalyticSpace space, const Sequence& seq,
                                 std::span<const double> eps_schedule, std::int64_t n_max) {
  detail::require_schedule(eps_schedule, n_max);
  if (seq.max_index() && *seq.max_index() < n_max)
    throw std::invalid_argument("sequence table shorter than horizon");

  CauchyReport report;
  report.horizon = n_max;
  report.entries.resize(eps_schedule.size());
  for (std::size_t k = 0; k < eps_schedule.size(); ++k) report.entries[k].eps = eps_schedule[k];
  std::vector<PairWitness> deepest(eps_schedule.size());

  std::vector<double> values(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) values[static_cast<std::size_t>(n - 1)] = seq.value(n);

  const std::int64_t half = n_max / 2;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    for (std::int64_t m = n + 1; m <= n_max; ++m) {
      const double d = eval_distance(space, values[static_cast<std::size_t>(n - 1)],
                                     values[static_cast<std::size_t>(m - 1)]);
      report.horizon_diameter = std::max(report.horizon_diameter, d);
      for (std::size_t k = 0; k < eps_schedule.size(); ++k) {
        if (d < eps_schedule[k]) continue;
        EpsilonEntry& e = report.entries[k];
        if (n > e.last_violation) {
          e.last_violation = n;  // min of the pair
          deepest[k] = {n, m, d};
        }
        if (n > half) ++e.deep_violations;
      }
    }
  }

  bool any_refuted = false, all_verified = true;
  for (std::size_t k = 0; k < report.entries.size(); ++k) {
    EpsilonEntry& e = report.entries[k];
    if (e.last_violation <= n_max - 2) {
      e.verified = true;
      e.tail_from = e.last_violation;
    } else if (e.deep_violations >= kRefuteThreshold) {
      any_refuted = true;
      if (!report.witness) report.witness = deepest[k];
    }
    all_verified = all_verified && e.verified;
  }
  report.verdict = any_refuted ? Verdict::refuted : (all_verified ? Verdict::certified : Verdict::inconclusive);
  return report;
}

/// In a space satisfying the relation at (p, sigma), a limit certificate at
/// eps yields d(x_n, x_m) <= 2*sigma*eps for the same tail, with no pair
/// scan: both legs of tau sit below eps past N. The derived report reuses
/// the convergence Ns against the scaled schedule.
inline CauchyReport derive_cauchy_from_limit(const ConvergenceCertificate& cert, const PowerParams& params) {
  if (cert.verdict != Verdict::certified)
    throw std::invalid_argument("cannot derive a Cauchy schedule from an uncertified limit");
  CauchyReport report;
  report.horizon = cert.horizon;
  report.derived_from_limit = true;
  for (const EpsilonEntry& e : cert.entries) {
    EpsilonEntry d = e;
    d.eps = 2.0 * params.sigma * e.eps;
    d.tail_from = e.tail_from;
    d.verified = e.verified;
    d.last_violation = e.last_violation;
    d.deep_violations = e.deep_violations;
    report.entries.push_back(d);
  }
  report.verdict = cert.verdict;
  return report;
}

enum class LimitHandling {
  certify_first,  // refuse to compare against uncertified candidate limits
  as_given        // compare against the candidates as stated, report their certification status
};

enum class ContinuityVerdict { continuous_evidence, discontinuous };

struct ContinuityReport {
  double tail_value = 0.0;        // d(x_N, y_N) at the horizon
  double limit_distance = 0.0;    // d(limX, limY)
  double discrepancy = 0.0;       // |tail_value - limit_distance|
  double tail_oscillation = 0.0;  // spread of d(x_n, y_n) over the deep half
  ContinuityVerdict verdict = ContinuityVerdict::continuous_evidence;
  ConvergenceCertificate cert_x;
  ConvergenceCertificate cert_y;
};

/// Compares the tail of d(x_n, y_n) against d(limX, limY). A discontinuous
/// verdict requires the discrepancy to dominate the deep-half oscillation
/// tenfold, so a slowly settling tail is not mistaken for a refutation.
/// Under certify_first the candidate limits must certify or the call
/// throws; as_given evaluates the comparison anyway and reports the
/// certification outcomes alongside.
inline ContinuityReport distance_continuity_check(AnalyticSpace space, const Sequence& seq_x,
                                                  const Sequence& seq_y, double lim_x, double lim_y,
                                                  std::int64_t n_max,
                                                  LimitHandling handling = LimitHandling::certify_first) {
  if (n_max < 100) throw std::invalid_argument("continuity check needs a horizon of at least 100");
  const std::vector<double> eps = default_epsilon_schedule(n_max);

  ContinuityReport report;
  report.cert_x = limit_check(space, seq_x, lim_x, eps, n_max);
  report.cert_y = limit_check(space, seq_y, lim_y, eps, n_max);
  if (handling == LimitHandling::certify_first) {
    if (report.cert_x.verdict != Verdict::certified)
      throw std::invalid_argument("uncertified limit " + format_number(lim_x) + " for sequence x");
    if (report.cert_y.verdict != Verdict::certified)
      throw std::invalid_argument("uncertified limit " + format_number(lim_y) + " for sequence y");
  }

  report.tail_value = eval_distance(space, seq_x.value(n_max), seq_y.value(n_max));
  report.limit_distance = eval_distance(space, lim_x, lim_y);
  report.discrepancy = std::abs(report.tail_value - report.limit_distance);

  const std::int64_t half = std::max<std::int64_t>(1, n_max / 2);
  double lo = report.tail_value, hi = report.tail_value;
  const std::int64_t samples = 4096;
  for (std::int64_t j = 0; j <= samples; ++j) {
    const std::int64_t n = half + ((n_max - half) * j) / samples;
    const double d = eval_distance(space, seq_x.value(n), seq_y.value(n));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  report.tail_oscillation = hi - lo;

  const double floor = 1e-9 * std::max(1.0, std::abs(report.limit_distance));
  report.verdict = report.discrepancy > std::max(10.0 * report.tail_oscillation, floor)
                       ? ContinuityVerdict::discontinuous
                       : ContinuityVerdict::continuous_evidence;
  return report;
}

struct BallEpsilonProbe {
  double eps = 0.0;
  bool escaped = false;   // found a probe inside B(interior, eps) but outside the ball
  double probe = 0.0;
  double d_interior = 0.0;
  double d_center = 0.0;
};

struct BallOpennessReport {
  bool open_evidence = true;  // some epsilon had no escaping probe
  std::vector<BallEpsilonProbe> per_eps;
  std::optional<BallEpsilonProbe> witness;  // smallest-epsilon escape, when every eps escapes
};

/// Probes whether B(interior, eps) stays inside B(center, radius) for some
/// eps in the grid. A single escaping eps proves nothing about openness, so
/// the non-open verdict requires an escape at every eps; one clean eps is
/// open evidence (restricted to the probe set).
inline BallOpennessReport ball_openness_check(AnalyticSpace space, double center, double radius,
                                              double interior, std::span<const double> eps_grid,
                                              std::span<const double> probes) {
  if (!(radius > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (eps_grid.empty()) throw std::invalid_argument("epsilon grid must be nonempty");
  for (std::size_t i = 1; i < eps_grid.size(); ++i)
    if (!(eps_grid[i] < eps_grid[i - 1]))
      throw std::invalid_argument("epsilon grid must be strictly decreasing");
  if (!(eval_distance(space, center, interior) < radius))
    throw std::invalid_argument("interior point is not inside the ball");

  BallOpennessReport report;
  bool all_escaped = true;
  for (double eps : eps_grid) {
    BallEpsilonProbe entry;
    entry.eps = eps;
    for (double q : probes) {
      const double di = eval_distance(space, interior, q);
      if (di >= eps) continue;
      const double dc = eval_distance(space, center, q);
      if (dc >= radius) {
        entry.escaped = true;
        entry.probe = q;
        entry.d_interior = di;
        entry.d_center = dc;
        break;
      }
    }
    all_escaped = all_escaped && entry.escaped;
    report.per_eps.push_back(entry);
  }
  report.open_evidence = !all_escaped;
  if (all_escaped) report.witness = report.per_eps.back();
  return report;
}

/// 1000-point grid over the ball's Euclidean hull plus the fixtures'
/// special points and near-zero offsets at each epsilon scale, where the
/// counterexample branches live.
inline std::vector<double> default_ball_probes(AnalyticSpace space, double center, double radius,
                                               double interior, std::span<const double> eps_grid) {
  (void)space;
  std::vector<double> probes;
  probes.reserve(1100);
  const double lo = center - radius;
  const double hi = center + radius;
  for (int i = 0; i < 1000; ++i) probes.push_back(lo + (hi - lo) * i / 999.0);
  for (double s : {0.0, 0.25, 0.5, 1.0, 2.0, 4.0}) probes.push_back(s);
  for (double eps : eps_grid) {
    for (double f : {0.4, 0.5, 0.8}) {
      probes.push_back(f * eps);
      probes.push_back(-f * eps);
      probes.push_back(4.0 - f * eps);
      probes.push_back(4.0 + f * eps);
      probes.push_back(interior + f * eps);
      probes.push_back(interior - f * eps);
    }
  }
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  return probes;
}

}  // namespace powerdist
