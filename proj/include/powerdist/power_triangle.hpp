#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "powerdist/distance_matrix.hpp"
#include "powerdist/numerics.hpp"
#include "powerdist/parallel.hpp"

namespace powerdist {

/// The (p, sigma) pair parameterizing the relation d(x,y) <= tau(p,sigma).
struct PowerParams {
  PowerExponent p;
  double sigma = 1.0;

  PowerParams(PowerExponent p_, double sigma_) : p(p_), sigma(sigma_) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw std::invalid_argument("PowerParams: sigma must be finite and > 0");
  }
};

/// Which triples (x, y, z) the relation quantifies over. Under all-triples,
/// z may coincide with x or y, which makes every relation with p <= 0
/// unsatisfiable on nondegenerate data (a zero leg forces tau = 0).
enum class TriplePolicy { exclude_degenerate, all_triples };

inline const char* to_string(TriplePolicy p) {
  return p == TriplePolicy::exclude_degenerate ? "exclude-degenerate" : "all-triples";
}

/// A triple with the two sides of the relation at it. deficit > 0 certifies
/// a violation; deficit <= 0 is the tightest slack seen on a passing scan.
struct TripleWitness {
  std::size_t x = 0;
  std::size_t y = 0;
  std::size_t z = 0;
  double lhs = 0.0;      // d(x, y)
  double rhs = 0.0;      // tau(p, sigma; x, y, z)
  double deficit = 0.0;  // lhs - rhs
};

/// Raised when the relation is vacuously unsatisfiable: degenerate matrix,
/// p <= 0, and the all-triples policy.
class DegenerateRelationError : public std::domain_error {
 public:
  DegenerateRelationError()
      : std::domain_error("relation vacuously fails at degenerate triples "
                          "(degenerate matrix, p <= 0, all-triples policy)") {}
};

/// Power triangle function: 2*sigma times the equal-weight power mean of the
/// two legs. Matches the closed forms max / quadratic / arithmetic /
/// geometric / harmonic / min at p = inf, 2, 1, 0, -1, -inf.
inline double tau(const PowerParams& params, double a, double b) {
  return 2.0 * params.sigma * power_mean_pair(a, b, params.p);
}

struct RelationCheck {
  bool holds = true;
  std::optional<TripleWitness> worst;  // max deficit; ties broken lexicographically
  TriplePolicy policy = TriplePolicy::exclude_degenerate;
};

namespace detail {

inline bool witness_improves(const TripleWitness& cand, const std::optional<TripleWitness>& best) {
  if (!best) return true;
  if (cand.deficit != best->deficit) return cand.deficit > best->deficit;
  if (cand.x != best->x) return cand.x < best->x;
  if (cand.y != best->y) return cand.y < best->y;
  return cand.z < best->z;
}

inline double violation_tolerance(double lhs) { return kCheckTolerance * std::max(1.0, lhs); }

inline void require_policy_satisfiable(const DissimilarityMatrix& m, const PowerParams& params,
                                       TriplePolicy policy) {
  if (policy == TriplePolicy::all_triples && !m.nondegenerate() &&
      !(params.p.value() > 0.0))
    throw DegenerateRelationError();
}

}  // namespace detail

/// Exhaustive scan of d(x,y) <= tau(p,sigma;x,y,z) over policy-admissible
/// triples. The worst witness maximizes the deficit (so on a pass it carries
/// the minimum slack). Scans are partitioned over x across workers with a
/// deterministic merge; results are identical to a sequential run.
inline RelationCheck check_relation(const DissimilarityMatrix& m, const PowerParams& params,
                                    TriplePolicy policy = TriplePolicy::exclude_degenerate) {
  detail::require_policy_satisfiable(m, params, policy);
  const std::size_t n = m.size();
  RelationCheck result;
  result.policy = policy;

  struct Slot {
    std::optional<TripleWitness> worst;
    bool violated = false;
  };
  parallel_chunks<Slot>(
      n, /*min_parallel_range=*/64,
      [&](std::size_t first, std::size_t stride, Slot& slot) {
        for (std::size_t x = first; x < n; x += stride) {
          for (std::size_t y = x + 1; y < n; ++y) {
            const double lhs = m(x, y);
            for (std::size_t z = 0; z < n; ++z) {
              if (policy == TriplePolicy::exclude_degenerate && (z == x || z == y)) continue;
              const double rhs = tau(params, m(x, z), m(z, y));
              TripleWitness w{x, y, z, lhs, rhs, lhs - rhs};
              if (w.deficit > detail::violation_tolerance(lhs)) slot.violated = true;
              if (detail::witness_improves(w, slot.worst)) slot.worst = w;
            }
          }
        }
      },
      [&](const Slot& slot) {
        if (slot.violated) result.holds = false;
        if (slot.worst && detail::witness_improves(*slot.worst, result.worst)) result.worst = *slot.worst;
      });
  return result;
}

/// Flag-only variant with early exit on the first violation.
inline bool relation_holds(const DissimilarityMatrix& m, const PowerParams& params,
                           TriplePolicy policy = TriplePolicy::exclude_degenerate) {
  detail::require_policy_satisfiable(m, params, policy);
  const std::size_t n = m.size();
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x + 1; y < n; ++y) {
      const double lhs = m(x, y);
      for (std::size_t z = 0; z < n; ++z) {
        if (policy == TriplePolicy::exclude_degenerate && (z == x || z == y)) continue;
        if (lhs - tau(params, m(x, z), m(z, y)) > detail::violation_tolerance(lhs)) return false;
      }
    }
  return true;
}

struct SigmaMinResult {
  ExtendedReal sigma = 0.0;                // +inf when no finite sigma works
  std::optional<TripleWitness> witness;    // realizes the max ratio (at sigma = 1)
};

/// Tightest sigma making the relation hold at exponent p: the max over
/// admissible triples of d(x,y) / (2 * mean(legs)). Pairs with d(x,y) = 0
/// are skipped; a zero mean against a positive d(x,y) yields +inf with that
/// triple as witness. With no admissible triple at all (n = 2 under
/// exclude-degenerate) the result is 0 with no witness: every sigma works.
inline SigmaMinResult sigma_min(const DissimilarityMatrix& m, PowerExponent p,
                                TriplePolicy policy = TriplePolicy::exclude_degenerate) {
  const std::size_t n = m.size();
  if (n < 2) throw std::invalid_argument("sigma_min: need at least two points");

  struct Slot {
    double best_ratio = -1.0;
    std::optional<TripleWitness> witness;
    std::optional<TripleWitness> infinite;  // lex-smallest triple with mean 0, lhs > 0
  };
  // Total order on candidates: larger ratio wins, ties go to the
  // lexicographically smaller triple. Partition-independent.
  auto lex_less = [](const TripleWitness& a, const TripleWitness& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  };
  auto ratio_improves = [&](double ratio, const TripleWitness& w, double best,
                            const std::optional<TripleWitness>& best_w) {
    if (ratio != best) return ratio > best;
    return best_w && lex_less(w, *best_w);
  };

  SigmaMinResult result;
  double best_ratio = -1.0;
  std::optional<TripleWitness> infinite;

  parallel_chunks<Slot>(
      n, /*min_parallel_range=*/64,
      [&](std::size_t first, std::size_t stride, Slot& slot) {
        for (std::size_t x = first; x < n; x += stride) {
          for (std::size_t y = x + 1; y < n; ++y) {
            const double lhs = m(x, y);
            if (lhs == 0.0) continue;
            for (std::size_t z = 0; z < n; ++z) {
              if (policy == TriplePolicy::exclude_degenerate && (z == x || z == y)) continue;
              const double mean = power_mean_pair(m(x, z), m(z, y), p);
              if (mean == 0.0) {
                if (!slot.infinite) slot.infinite = TripleWitness{x, y, z, lhs, 0.0, lhs};
                continue;
              }
              const double ratio = lhs / (2.0 * mean);
              TripleWitness w{x, y, z, lhs, 2.0 * mean, lhs - 2.0 * mean};
              if (ratio_improves(ratio, w, slot.best_ratio, slot.witness)) {
                slot.best_ratio = ratio;
                slot.witness = w;
              }
            }
          }
        }
      },
      [&](const Slot& slot) {
        if (slot.infinite && (!infinite || lex_less(*slot.infinite, *infinite))) infinite = slot.infinite;
        if (slot.witness && ratio_improves(slot.best_ratio, *slot.witness, best_ratio, result.witness)) {
          best_ratio = slot.best_ratio;
          result.witness = slot.witness;
        }
      });

  if (infinite) {
    result.sigma = ExtendedReal::infinity();
    result.witness = infinite;
  } else if (best_ratio >= 0.0) {
    result.sigma = best_ratio;
  } else {
    result.sigma = 0.0;  // no admissible triple
    result.witness.reset();
  }
  return result;
}

struct SigmaSample {
  PowerExponent p;
  ExtendedReal sigma_min;
  std::optional<TripleWitness> witness;
  std::optional<double> boundary;  // 2^{1/p - 1}; absent at p = 0
};

struct SigmaProfile {
  std::vector<SigmaSample> samples;
  TriplePolicy policy = TriplePolicy::exclude_degenerate;
};

/// Feasibility boundary sigma = 2^{1/p - 1} (one half at p = +-inf).
/// Undefined at p = 0.
inline double boundary_sigma(PowerExponent p) {
  if (p.is_pos_infinity() || p.is_neg_infinity()) return 0.5;
  if (p.value() == 0.0) throw std::invalid_argument("boundary_sigma: undefined at p = 0");
  return std::exp2(1.0 / p.value() - 1.0);
}

/// Inverse of boundary_sigma: p = ln 2 / ln(2 sigma), +inf at sigma = 1/2.
inline ExtendedReal boundary_exponent(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("boundary_exponent: sigma must be finite and > 0");
  if (sigma == 0.5) return ExtendedReal::infinity();
  return std::log(2.0) / std::log(2.0 * sigma);
}

/// sigma_min swept over a strictly increasing exponent grid, with the
/// Figure-style boundary value alongside each sample. The antitone
/// invariant (sigma_min nonincreasing in p within 1e-10) is asserted after
/// the sweep; a violation means a kernel bug, not bad data.
inline SigmaProfile sigma_profile(const DissimilarityMatrix& m, std::span<const PowerExponent> grid,
                                  TriplePolicy policy = TriplePolicy::exclude_degenerate) {
  if (grid.empty()) throw std::invalid_argument("sigma_profile: empty exponent grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i])) throw std::invalid_argument("sigma_profile: grid must be strictly increasing");

  SigmaProfile profile;
  profile.policy = policy;
  profile.samples.reserve(grid.size());
  for (PowerExponent p : grid) {
    SigmaMinResult r = sigma_min(m, p, policy);
    SigmaSample s{p, r.sigma, r.witness, std::nullopt};
    if (p.is_pos_infinity() || p.is_neg_infinity() || p.value() != 0.0) s.boundary = boundary_sigma(p);
    profile.samples.push_back(std::move(s));
  }
  for (std::size_t i = 1; i < profile.samples.size(); ++i) {
    const ExtendedReal prev = profile.samples[i - 1].sigma_min;
    const ExtendedReal cur = profile.samples[i].sigma_min;
    if (prev.is_pos_infinity()) continue;
    if (cur.is_pos_infinity() || !(prev.value() >= cur.value() - 1e-10))
      throw std::logic_error("sigma_profile: antitone invariant violated (kernel bug)");
  }
  return profile;
}

struct LowerBoundReport {
  bool relation_ok = false;       // precondition, checked and reported
  bool item1_ok = true;           // exponent-domain bound over distinct triples
  std::optional<TripleWitness> item1_worst;
  std::optional<bool> reverse_ok; // |d(x,z) - d(z,y)| <= d(x,y); set when 2*sigma = 2^{1/p}
  std::optional<TripleWitness> reverse_worst;
};

/// Complementary lower bound induced by the relation. For p > 0 the bound is
/// d^p(x,y) >= (2/(2s)^p) d^p(x,z) - d^p(z,y) (and the mirrored term); for
/// p < 0 raising to the p-th power reverses the inequality, so the same
/// derivation bounds d^p(x,y) from above instead, and that is what gets
/// verified. Scanned over pairwise-distinct triples, where the relation
/// instances the derivation relies on are admissible under either policy.
/// When 2*sigma = 2^{1/p} the reverse triangle inequality form
/// |d(x,z) - d(z,y)| <= d(x,y) is additionally verified over all triples.
inline LowerBoundReport lower_bound_check(const DissimilarityMatrix& m, const PowerParams& params,
                                          TriplePolicy policy = TriplePolicy::exclude_degenerate) {
  if (!params.p.is_finite() || params.p.value() == 0.0)
    throw std::invalid_argument("lower_bound_check: unsupported at p = 0 or p = +-inf (exponent form undefined)");
  const double pv = params.p.value();
  const std::size_t n = m.size();

  LowerBoundReport report;
  report.relation_ok = relation_holds(m, params, policy);

  const double coeff = 2.0 / std::pow(2.0 * params.sigma, pv);
  auto dpow = [&](double d) { return std::pow(d, pv); };  // d > 0 on distinct triples of nondegenerate data

  std::optional<TripleWitness> worst;
  bool ok = true;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      const double dxy = m(x, y);
      if (dxy == 0.0) continue;  // degenerate pair: lemma vacuous at p > 0, undefined at p < 0
      const double lhs = dpow(dxy);
      for (std::size_t z = 0; z < n; ++z) {
        if (z == x || z == y) continue;
        if (m(x, z) == 0.0 || m(z, y) == 0.0) continue;
        const double t1 = coeff * dpow(m(x, z)) - dpow(m(z, y));
        const double t2 = coeff * dpow(m(y, z)) - dpow(m(z, x));
        const double tol = kCheckTolerance * std::max({1.0, std::abs(lhs), std::abs(t1), std::abs(t2)});
        // p > 0: lhs dominates both terms; p < 0: raising to p reversed the
        // inequality, so both terms must dominate lhs instead.
        const double bound = pv > 0.0 ? std::max({0.0, t1, t2}) : std::min(t1, t2);
        const double excess = pv > 0.0 ? bound - lhs : lhs - bound;
        if (excess > tol) {
          ok = false;
          TripleWitness w{x, y, z, lhs, bound, excess};
          if (detail::witness_improves(w, worst)) worst = w;
        }
      }
    }
  }
  report.item1_ok = ok;
  report.item1_worst = worst;

  const double boundary = boundary_sigma(params.p);
  if (std::abs(params.sigma - boundary) <= 1e-12 * std::max(1.0, boundary)) {
    bool rev_ok = true;
    std::optional<TripleWitness> rev_worst;
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
          const double lhs = m(x, y);
          const double rhs = std::abs(m(x, z) - m(z, y));
          if (rhs - lhs > detail::violation_tolerance(lhs)) {
            rev_ok = false;
            TripleWitness w{x, y, z, lhs, rhs, rhs - lhs};
            if (detail::witness_improves(w, rev_worst)) rev_worst = w;
          }
        }
    report.reverse_ok = rev_ok;
    report.reverse_worst = rev_worst;
  }
  return report;
}

}  // namespace powerdist
