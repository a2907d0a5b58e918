#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "powerdist/distance_matrix.hpp"
#include "powerdist/format.hpp"
#include "powerdist/power_triangle.hpp"

namespace powerdist {

/// Closed-form distance functions on the real line. None of them is a
/// metric; each breaks the triangle inequality in its own documented way.
enum class AnalyticSpace {
  ex321,  // Euclidean, except d(x, 4) = x for x in (0:2] (both orientations)
  ex322,  // Euclidean through 0 or on the diagonal, discrete (= 1) otherwise
  ex323,  // Euclidean with the single pair {0, 1} dilated by 2
  ex324   // squared Euclidean
};

inline const char* to_string(AnalyticSpace s) {
  switch (s) {
    case AnalyticSpace::ex321: return "ex321";
    case AnalyticSpace::ex322: return "ex322";
    case AnalyticSpace::ex323: return "ex323";
    case AnalyticSpace::ex324: return "ex324";
  }
  return "?";
}

inline AnalyticSpace parse_analytic_space(const std::string& name) {
  if (name == "ex321") return AnalyticSpace::ex321;
  if (name == "ex322") return AnalyticSpace::ex322;
  if (name == "ex323") return AnalyticSpace::ex323;
  if (name == "ex324") return AnalyticSpace::ex324;
  throw std::invalid_argument("unknown fixture '" + name + "' (expected ex321..ex324)");
}

/// Piecewise-exact evaluation. The special branches take priority over the
/// Euclidean fallback, so d(1, 4) = 1 in ex321. The half-open interval
/// (0:2] is strict at 0 and closed at 2. Every branch pair is mirrored, so
/// symmetry holds structurally.
inline double eval_distance(AnalyticSpace space, double x, double y) {
  switch (space) {
    case AnalyticSpace::ex321: {
      if (x == 4.0 && y > 0.0 && y <= 2.0) return y;
      if (y == 4.0 && x > 0.0 && x <= 2.0) return x;
      return std::abs(x - y);
    }
    case AnalyticSpace::ex322:
      return (x == 0.0 || y == 0.0 || x == y) ? std::abs(x - y) : 1.0;
    case AnalyticSpace::ex323:
      return ((x == 0.0 && y == 1.0) || (x == 1.0 && y == 0.0)) ? 2.0 * std::abs(x - y) : std::abs(x - y);
    case AnalyticSpace::ex324: {
      const double t = x - y;
      return t * t;
    }
  }
  throw std::logic_error("unreachable");
}

/// Finite restriction of an analytic space to the given sample points.
/// Labels carry the point values, so witnesses print as points.
inline DissimilarityMatrix sample_matrix(AnalyticSpace space, std::span<const double> points) {
  if (points.empty()) throw std::invalid_argument("sample_matrix: need at least one point");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i - 1] < points[i]))
      throw std::invalid_argument("sample_matrix: points must be strictly increasing");
  const std::size_t n = points.size();
  std::vector<double> entries(n * n, 0.0);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = format_number(points[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = eval_distance(space, points[i], points[j]);
      entries[i * n + j] = d;
      entries[j * n + i] = d;
    }
  }
  return DissimilarityMatrix::from_entries(n, std::move(entries), std::move(labels));
}

/// Inscribed-polygon length of [0:1] in the squared-Euclidean space using
/// 2^N equal segments: 2^N * (2^-N)^2 = 2^-N, which vanishes as N grows.
inline double curve_length_324(int n) {
  if (n < 1 || n > 62) throw std::invalid_argument("curve_length_324: N must be in [1, 62]");
  return std::ldexp(1.0, -n);
}

/// A documented fact about a fixture, re-derivable exactly from
/// eval_distance and the analysis kernels.
struct KnownWitness {
  std::string description;
  double x = 0.0, y = 0.0, z = 0.0;  // points, not indices
  double lhs = 0.0;                  // expected d(x, y)
  double rhs = 0.0;                  // expected tau(1, 1; x, y, z)
};

/// The triangle-inequality violations each space is known for.
inline std::vector<KnownWitness> known_witnesses(AnalyticSpace space) {
  switch (space) {
    case AnalyticSpace::ex321:
      return {{"triangle violation through 1", 0.0, 4.0, 1.0, 4.0, 2.0}};
    case AnalyticSpace::ex322:
      return {{"triangle violation through 0", 0.25, 0.5, 0.0, 1.0, 0.75}};
    case AnalyticSpace::ex323:
      return {{"triangle violation at the dilated pair", 0.0, 1.0, 0.5, 2.0, 1.0}};
    case AnalyticSpace::ex324:
      return {{"triangle violation through the midpoint", 0.0, 2.0, 1.0, 4.0, 2.0}};
  }
  throw std::logic_error("unreachable");
}

/// Recomputes a known witness from scratch; true only when both sides come
/// out bit-exact and the violation is real.
inline bool verify_witness(AnalyticSpace space, const KnownWitness& w) {
  const double lhs = eval_distance(space, w.x, w.y);
  const double rhs = tau(PowerParams{1.0, 1.0}, eval_distance(space, w.x, w.z), eval_distance(space, w.z, w.y));
  return lhs == w.lhs && rhs == w.rhs && lhs > rhs;
}

struct FixtureFact {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  bool exact = false;
};

/// The per-fixture reproduction suite run by the CLI `fixture` command:
/// every documented value must come back exactly.
inline std::vector<FixtureFact> fact_suite(AnalyticSpace space) {
  std::vector<FixtureFact> facts;
  auto add = [&](const std::string& name, double expected, double actual) {
    facts.push_back({name, expected, actual, expected == actual});
  };
  for (const KnownWitness& w : known_witnesses(space)) {
    add(w.description + ": lhs d(" + format_number(w.x) + "," + format_number(w.y) + ")", w.lhs,
        eval_distance(space, w.x, w.y));
    add(w.description + ": rhs tau(1,1;" + format_number(w.z) + ")",
        w.rhs, tau(PowerParams{1.0, 1.0}, eval_distance(space, w.x, w.z), eval_distance(space, w.z, w.y)));
  }
  switch (space) {
    case AnalyticSpace::ex321: {
      add("special branch d(4, 1.5)", 1.5, eval_distance(space, 4.0, 1.5));
      add("special branch d(1, 4)", 1.0, eval_distance(space, 1.0, 4.0));
      add("euclidean d(0, 4)", 4.0, eval_distance(space, 0.0, 4.0));
      const double points[] = {0.0, 0.01, 4.0};
      add("sigma_min(1) on {0, 0.01, 4}", 200.0,
          sigma_min(sample_matrix(space, points), 1.0).sigma.value());
      break;
    }
    case AnalyticSpace::ex322: {
      add("discrete branch d(1/4, 1/2)", 1.0, eval_distance(space, 0.25, 0.5));
      add("euclidean branch d(0, 1/2)", 0.5, eval_distance(space, 0.0, 0.5));
      break;
    }
    case AnalyticSpace::ex323: {
      add("dilated pair d(0, 1)", 2.0, eval_distance(space, 0.0, 1.0));
      const double points[] = {0.0, 0.5, 1.0};
      add("sigma_min(1) on {0, 1/2, 1}", 2.0, sigma_min(sample_matrix(space, points), 1.0).sigma.value());
      break;
    }
    case AnalyticSpace::ex324: {
      add("squared euclidean d(1, 3)", 4.0, eval_distance(space, 1.0, 3.0));
      std::vector<double> points(33);
      for (int k = 0; k <= 32; ++k) points[k] = k / 32.0;
      add("sigma_min(1) on 33 uniform points", 2.0, sigma_min(sample_matrix(space, points), 1.0).sigma.value());
      add("curve length, N = 10", 0.0009765625, curve_length_324(10));
      break;
    }
  }
  return facts;
}

}  // namespace powerdist
