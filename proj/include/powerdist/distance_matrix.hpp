#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "powerdist/format.hpp"

namespace powerdist {

/// Absolute tolerance for repairing rounding noise at ingestion (diagonal
/// forced to 0, off-diagonal pairs averaged). Beyond it is a hard error.
inline constexpr double kIngestTolerance = 1e-12;

struct AxiomWitness {
  std::size_t i = 0;
  std::size_t j = 0;
  double value_ij = 0.0;
  double value_ji = 0.0;  // meaningful for symmetry witnesses only
};

/// Outcome of checking the three distance axioms on a raw square array.
/// A flag is true exactly when its witness list is empty.
struct DistanceValidation {
  bool non_negative = true;
  bool nondegenerate = true;
  bool symmetric = true;
  std::vector<AxiomWitness> negativity_witnesses;
  std::vector<AxiomWitness> degeneracy_witnesses;
  std::vector<AxiomWitness> asymmetry_witnesses;

  bool all_pass() const { return non_negative && nondegenerate && symmetric; }
};

/// Finite symmetric nonnegative matrix with zero diagonal: the computational
/// stand-in for a distance space on n points. Immutable once built.
class DissimilarityMatrix {
 public:
  static constexpr std::size_t kWitnessCap = 100;  // per axiom

  /// Exact axiom check on a raw candidate. Witness lists are capped at 100
  /// entries per axiom. Throws on non-square or non-finite input.
  static DistanceValidation validate(const std::vector<std::vector<double>>& candidate) {
    const std::size_t n = require_square(candidate);
    DistanceValidation v;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double d = candidate[i][j];
        if (d < 0.0 && v.negativity_witnesses.size() < kWitnessCap)
          v.negativity_witnesses.push_back({i, j, d, candidate[j][i]});
        if (i == j && d != 0.0 && v.degeneracy_witnesses.size() < kWitnessCap)
          v.degeneracy_witnesses.push_back({i, j, d, d});
        if (i < j) {
          if (d == 0.0 && v.degeneracy_witnesses.size() < kWitnessCap)
            v.degeneracy_witnesses.push_back({i, j, d, candidate[j][i]});
          if (d != candidate[j][i] && v.asymmetry_witnesses.size() < kWitnessCap)
            v.asymmetry_witnesses.push_back({i, j, d, candidate[j][i]});
        }
      }
    }
    v.non_negative = v.negativity_witnesses.empty();
    v.nondegenerate = v.degeneracy_witnesses.empty();
    v.symmetric = v.asymmetry_witnesses.empty();
    return v;
  }

  /// Accepts a candidate matrix, repairing sub-tolerance noise: diagonal
  /// entries within 1e-12 of 0 become exactly 0, near-symmetric pairs are
  /// averaged. Anything beyond tolerance is a hard error naming the cell.
  static DissimilarityMatrix ingest(const std::vector<std::vector<double>>& candidate,
                                    std::vector<std::string> labels = {}) {
    const std::size_t n = require_square(candidate);
    if (!labels.empty() && labels.size() != n)
      throw std::invalid_argument("label count does not match matrix size");
    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double diag = candidate[i][i];
      if (std::abs(diag) > kIngestTolerance)
        throw std::invalid_argument("nonzero diagonal at (" + std::to_string(i) + "," + std::to_string(i) +
                                    "): " + format_number(diag));
      entries[i * n + i] = 0.0;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double a = candidate[i][j];
        const double b = candidate[j][i];
        if (std::abs(a - b) > kIngestTolerance)
          throw std::invalid_argument("symmetry violated at (" + std::to_string(i) + "," + std::to_string(j) +
                                      "): " + format_number(a) + " vs " + format_number(b));
        const double d = a == b ? a : 0.5 * (a + b);
        if (d < 0.0)
          throw std::invalid_argument("negative entry at (" + std::to_string(i) + "," + std::to_string(j) +
                                      "): " + format_number(d));
        entries[i * n + j] = d;
        entries[j * n + i] = d;
      }
    }
    return DissimilarityMatrix(n, std::move(entries), std::move(labels));
  }

  /// Wraps entries that are already exactly valid (zero diagonal, symmetric,
  /// nonnegative); used by fixtures and transforms.
  static DissimilarityMatrix from_entries(std::size_t n, std::vector<double> entries,
                                          std::vector<std::string> labels = {}) {
    if (entries.size() != n * n) throw std::invalid_argument("entry count does not match matrix size");
    for (std::size_t i = 0; i < n; ++i) {
      if (entries[i * n + i] != 0.0) throw std::invalid_argument("from_entries: nonzero diagonal");
      for (std::size_t j = i + 1; j < n; ++j) {
        if (entries[i * n + j] != entries[j * n + i]) throw std::invalid_argument("from_entries: asymmetric");
        if (!(entries[i * n + j] >= 0.0) || !std::isfinite(entries[i * n + j]))
          throw std::invalid_argument("from_entries: entries must be finite and >= 0");
      }
    }
    return DissimilarityMatrix(n, std::move(entries), std::move(labels));
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  std::span<const double> entries() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_labels() const { return !labels_.empty(); }

  /// True when every off-diagonal entry is strictly positive.
  bool nondegenerate() const { return nondegenerate_; }

  std::string point_name(std::size_t i) const {
    return has_labels() ? labels_[i] : std::to_string(i);
  }

  /// Max distance over a subset; 0 for the empty or singleton subset.
  double diameter(std::span<const std::size_t> subset) const {
    double best = 0.0;
    for (std::size_t a = 0; a < subset.size(); ++a) {
      require_index(subset[a]);
      for (std::size_t b = a + 1; b < subset.size(); ++b) {
        require_index(subset[b]);
        best = std::max(best, (*this)(subset[a], subset[b]));
      }
    }
    return best;
  }

  /// Always true for a validated matrix (entries are finite); present for
  /// API completeness alongside diameter.
  bool is_bounded(std::span<const std::size_t> subset) const {
    for (std::size_t idx : subset) require_index(idx);
    return true;
  }

 private:
  DissimilarityMatrix(std::size_t n, std::vector<double> entries, std::vector<std::string> labels)
      : n_(n), entries_(std::move(entries)), labels_(std::move(labels)) {
    nondegenerate_ = true;
    for (std::size_t i = 0; i < n_ && nondegenerate_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        if (entries_[i * n_ + j] == 0.0) {
          nondegenerate_ = false;
          break;
        }
  }

  static std::size_t require_square(const std::vector<std::vector<double>>& candidate) {
    const std::size_t n = candidate.size();
    if (n == 0) throw std::invalid_argument("matrix must have at least one row");
    for (const auto& row : candidate) {
      if (row.size() != n) throw std::invalid_argument("matrix must be square");
      for (double v : row)
        if (!std::isfinite(v)) throw std::invalid_argument("matrix entries must be finite");
    }
    return n;
  }

  void require_index(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("point index " + std::to_string(i) + " out of range");
  }

  std::size_t n_ = 0;
  std::vector<double> entries_;
  std::vector<std::string> labels_;
  bool nondegenerate_ = true;
};

}  // namespace powerdist
