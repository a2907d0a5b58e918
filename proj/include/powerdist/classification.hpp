#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "powerdist/power_triangle.hpp"

namespace powerdist {

/// The named inequalities, each a fixed (p, sigma) point or one-parameter
/// family in the relation. The quadratic family stores (2, sqrt(2)*sigma)
/// literally; note the sigma scaling convention differs across rows.
enum class NamedInequalityKind {
  sigma_inframetric,  // (inf, sigma/2)
  inframetric,        // (inf, 1/2)
  quadratic,          // (2, sqrt(2)*sigma)
  relaxed_triangle,   // (1, sigma)
  triangle,           // (1, 1)
  square_mean_root,   // (1/2, 2)
  geometric,          // (0, 1/2)
  harmonic,           // (-1, 1/4)
  minimal             // (-inf, 1/2)
};

struct NamedInequality {
  NamedInequalityKind kind;
  std::optional<double> sigma;  // required for the parameterized families

  PowerParams to_params() const {
    switch (kind) {
      case NamedInequalityKind::sigma_inframetric: return {ExtendedReal::infinity(), require_sigma() / 2.0};
      case NamedInequalityKind::inframetric: return {ExtendedReal::infinity(), 0.5};
      case NamedInequalityKind::quadratic: return {2.0, std::sqrt(2.0) * require_sigma()};
      case NamedInequalityKind::relaxed_triangle: return {1.0, require_sigma()};
      case NamedInequalityKind::triangle: return {1.0, 1.0};
      case NamedInequalityKind::square_mean_root: return {0.5, 2.0};
      case NamedInequalityKind::geometric: return {0.0, 0.5};
      case NamedInequalityKind::harmonic: return {-1.0, 0.25};
      case NamedInequalityKind::minimal: return {ExtendedReal::neg_infinity(), 0.5};
    }
    throw std::logic_error("unreachable");
  }

  bool parameterized() const {
    return kind == NamedInequalityKind::sigma_inframetric || kind == NamedInequalityKind::quadratic ||
           kind == NamedInequalityKind::relaxed_triangle;
  }

  std::string name() const {
    switch (kind) {
      case NamedInequalityKind::sigma_inframetric: return "sigma-inframetric";
      case NamedInequalityKind::inframetric: return "inframetric";
      case NamedInequalityKind::quadratic: return "quadratic";
      case NamedInequalityKind::relaxed_triangle: return "relaxed-triangle";
      case NamedInequalityKind::triangle: return "triangle";
      case NamedInequalityKind::square_mean_root: return "square-mean-root";
      case NamedInequalityKind::geometric: return "geometric";
      case NamedInequalityKind::harmonic: return "harmonic";
      case NamedInequalityKind::minimal: return "minimal";
    }
    return "?";
  }

 private:
  double require_sigma() const {
    if (!sigma) throw std::invalid_argument("named inequality '" + name() + "' needs a sigma parameter");
    if (!(*sigma > 0.0) || !std::isfinite(*sigma))
      throw std::invalid_argument("named inequality sigma must be finite and > 0");
    return *sigma;
  }
};

inline NamedInequality parse_named_inequality(const std::string& text) {
  auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  std::optional<double> sigma;
  if (colon != std::string::npos) sigma = parse_real(text.substr(colon + 1));
  NamedInequalityKind kind;
  if (name == "sigma-inframetric") kind = NamedInequalityKind::sigma_inframetric;
  else if (name == "inframetric") kind = NamedInequalityKind::inframetric;
  else if (name == "quadratic") kind = NamedInequalityKind::quadratic;
  else if (name == "relaxed-triangle") kind = NamedInequalityKind::relaxed_triangle;
  else if (name == "triangle") kind = NamedInequalityKind::triangle;
  else if (name == "square-mean-root") kind = NamedInequalityKind::square_mean_root;
  else if (name == "geometric") kind = NamedInequalityKind::geometric;
  else if (name == "harmonic") kind = NamedInequalityKind::harmonic;
  else if (name == "minimal") kind = NamedInequalityKind::minimal;
  else throw std::invalid_argument("unknown named inequality '" + name + "'");
  return NamedInequality{kind, sigma};
}

/// Delegates to check_relation with the mapped parameters, so witnesses are
/// identical to a direct check.
inline RelationCheck named_check(const DissimilarityMatrix& m, const NamedInequality& which,
                                 TriplePolicy policy = TriplePolicy::exclude_degenerate) {
  return check_relation(m, which.to_params(), policy);
}

struct NamedResult {
  NamedInequality inequality;
  PowerParams params;
  // For the parameter-free presets: does the relation hold, and with what
  // worst witness. For the parameterized families: the tightest parameter
  // (in the family's own sigma convention) that makes the relation hold.
  std::optional<bool> holds;
  std::optional<TripleWitness> worst;
  std::optional<ExtendedReal> sigma_star;
};

struct ClassificationReport {
  bool is_metric = false;
  ExtendedReal near_metric_sigma = 0.0;      // sigma_min at p = 1
  ExtendedReal sigma_min_at_inf = 0.0;       // sigma_min at p = +inf
  ExtendedReal inframetric_constant = 0.0;   // 2 * sigma_min(inf): smallest C with d <= C*max
  bool is_inframetric = false;               // C <= 1
  std::optional<TripleWitness> near_metric_witness;
  std::optional<TripleWitness> inframetric_witness;
  std::vector<NamedResult> named;
  TriplePolicy policy = TriplePolicy::exclude_degenerate;
};

/// Names the space: metric (sigma_min(1) <= 1), near metric constant,
/// inframetric constant C = 2*sigma_min(inf), plus every named preset.
/// Degenerate matrices are refused: nondegeneracy is axiomatic for these
/// classes and the p <= 0 presets would be vacuously unsatisfiable.
inline ClassificationReport classify(const DissimilarityMatrix& m,
                                     TriplePolicy policy = TriplePolicy::exclude_degenerate) {
  if (m.size() < 2) throw std::invalid_argument("classify: need at least two points");
  if (!m.nondegenerate())
    throw std::invalid_argument("classify: matrix is degenerate (zero distance between distinct points); "
                                "classification is defined for nondegenerate data only");

  ClassificationReport report;
  report.policy = policy;

  const SigmaMinResult at_one = sigma_min(m, 1.0, policy);
  const SigmaMinResult at_inf = sigma_min(m, ExtendedReal::infinity(), policy);
  report.near_metric_sigma = at_one.sigma;
  report.near_metric_witness = at_one.witness;
  report.sigma_min_at_inf = at_inf.sigma;
  report.inframetric_witness = at_inf.witness;
  report.inframetric_constant =
      at_inf.sigma.is_pos_infinity() ? ExtendedReal::infinity() : ExtendedReal(2.0 * at_inf.sigma.value());
  report.is_metric = at_one.sigma.is_finite() && at_one.sigma.value() <= 1.0 + 1e-12;
  report.is_inframetric =
      report.inframetric_constant.is_finite() && report.inframetric_constant.value() <= 1.0 + 1e-12;

  // Profile antitone sanity: sigma_min(inf) <= sigma_min(1).
  if (at_one.sigma.is_finite() && at_inf.sigma.is_finite() &&
      !(at_inf.sigma.value() <= at_one.sigma.value() + 1e-10))
    throw std::logic_error("classify: sigma_min(inf) > sigma_min(1) (kernel bug)");

  auto add_fixed = [&](NamedInequalityKind kind) {
    NamedInequality ineq{kind, std::nullopt};
    NamedResult r{ineq, ineq.to_params(), std::nullopt, std::nullopt, std::nullopt};
    RelationCheck c = check_relation(m, r.params, policy);
    r.holds = c.holds;
    r.worst = c.worst;
    report.named.push_back(std::move(r));
  };
  // Tightest family parameter, translated from sigma_min at the family's
  // exponent back into the family's own sigma convention.
  auto add_family = [&](NamedInequalityKind kind, PowerExponent p, double scale) {
    const SigmaMinResult s = sigma_min(m, p, policy);
    NamedInequality ineq{kind, std::nullopt};
    PowerParams raw{p, 1.0};
    NamedResult r{ineq, raw, std::nullopt, s.witness, std::nullopt};
    r.sigma_star = s.sigma.is_pos_infinity() ? ExtendedReal::infinity() : ExtendedReal(scale * s.sigma.value());
    report.named.push_back(std::move(r));
  };

  add_family(NamedInequalityKind::sigma_inframetric, ExtendedReal::infinity(), 2.0);  // Theta(inf, sigma/2)
  add_fixed(NamedInequalityKind::inframetric);
  add_family(NamedInequalityKind::quadratic, 2.0, 1.0 / std::sqrt(2.0));              // Theta(2, sqrt(2)*sigma)
  add_family(NamedInequalityKind::relaxed_triangle, 1.0, 1.0);                        // Theta(1, sigma)
  add_fixed(NamedInequalityKind::triangle);
  add_fixed(NamedInequalityKind::square_mean_root);
  add_fixed(NamedInequalityKind::geometric);
  add_fixed(NamedInequalityKind::harmonic);
  add_fixed(NamedInequalityKind::minimal);
  return report;
}

}  // namespace powerdist
