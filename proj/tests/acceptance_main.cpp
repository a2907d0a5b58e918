// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exit status is nonzero when
// any criterion fails. Detail lines under a FAIL show the offending values.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "powerdist/cli.hpp"
#include "powerdist/powerdist.hpp"
#include "test_helpers.hpp"

using namespace powerdist;

namespace {

int g_failures = 0;
std::vector<std::string> g_details;

void detail(const std::string& line) { g_details.push_back(line); }

void criterion(int number, const std::string& name, const std::function<bool()>& body) {
  g_details.clear();
  bool ok = false;
  std::string error;
  try {
    ok = body();
  } catch (const std::exception& e) {
    error = e.what();
  }
  std::printf("%s criterion %2d: %s\n", ok ? "PASS" : "FAIL", number, name.c_str());
  if (!ok) {
    ++g_failures;
    if (!error.empty()) std::printf("      exception: %s\n", error.c_str());
    for (const std::string& line : g_details) std::printf("      %s\n", line.c_str());
  }
}

bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }
bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::vector<double> uniform_grid_33() {
  std::vector<double> pts(33);
  for (int k = 0; k <= 32; ++k) pts[k] = k / 32.0;
  return pts;
}

// ---- criterion 1 --------------------------------------------------------
bool counterexample_suite() {
  struct Case {
    AnalyticSpace space;
    std::vector<double> points;
    std::size_t x, y, z;
    double lhs, rhs;
  };
  const std::vector<Case> cases = {
      {AnalyticSpace::ex321, {0.0, 1.0, 4.0}, 0, 2, 1, 4.0, 2.0},
      {AnalyticSpace::ex322, {0.0, 0.25, 0.5}, 1, 2, 0, 1.0, 0.75},
      {AnalyticSpace::ex323, {0.0, 0.5, 1.0}, 0, 2, 1, 2.0, 1.0},
      {AnalyticSpace::ex324, {0.0, 1.0, 2.0}, 0, 2, 1, 4.0, 2.0},
  };
  bool ok = true;
  for (const Case& c : cases) {
    const auto m = sample_matrix(c.space, c.points);
    const RelationCheck r = check_relation(m, {1.0, 1.0});
    const bool this_ok = !r.holds && r.worst && r.worst->x == c.x && r.worst->y == c.y && r.worst->z == c.z &&
                         r.worst->lhs == c.lhs && r.worst->rhs == c.rhs;
    if (!this_ok) {
      ok = false;
      detail(std::string(to_string(c.space)) + ": expected witness (" + std::to_string(c.x) + "," +
             std::to_string(c.y) + "," + std::to_string(c.z) + ") lhs " + format_number(c.lhs) + " rhs " +
             format_number(c.rhs));
    }
  }
  return ok;
}

// ---- criterion 2 --------------------------------------------------------
bool sigma_min_reproduction() {
  bool ok = true;
  {
    const double pts[] = {0.0, 0.5, 1.0};
    const double got = sigma_min(sample_matrix(AnalyticSpace::ex323, pts), 1.0).sigma.value();
    if (!close_abs(got, 2.0, 1e-9)) {
      ok = false;
      detail("ex323 {0,1/2,1}: sigma_min(1) = " + format_number(got) + ", expected 2 +- 1e-9");
    }
  }
  {
    const auto m = sample_matrix(AnalyticSpace::ex324, uniform_grid_33());
    std::vector<PowerExponent> grid;
    grid.push_back(ExtendedReal::neg_infinity());
    for (int p = -8; p <= 8; ++p) grid.push_back(static_cast<double>(p));
    grid.push_back(ExtendedReal::infinity());
    bool noted = false;
    for (const PowerExponent p : grid) {
      const SigmaMinResult r = sigma_min(m, p);
      if (!r.sigma.is_finite() || !close_abs(r.sigma.value(), 2.0, 1e-9)) {
        ok = false;
        std::string line = "ex324 33 points: sigma_min(" + format_number(p) + ") = " + format_number(r.sigma) +
                           ", expected 2 +- 1e-9";
        if (r.witness)
          line += "; witness points (" + m.labels()[r.witness->x] + "," + m.labels()[r.witness->y] + "," +
                  m.labels()[r.witness->z] + ")";
        detail(line);
        if (!noted) {
          noted = true;
          detail("(for p < 1/2 the halfway point is not the worst third point: a near-endpoint z "
                 "shrinks one leg toward 0 and the sub-geometric leg means with it)");
        }
      }
    }
  }
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const double pts[] = {0.0, eps, 4.0};
    const double got = sigma_min(sample_matrix(AnalyticSpace::ex321, pts), 1.0).sigma.value();
    if (!close_rel(got, 2.0 / eps, 1e-9)) {
      ok = false;
      detail("ex321 {0," + format_number(eps) + ",4}: sigma_min(1) = " + format_number(got) + ", expected " +
             format_number(2.0 / eps));
    }
  }
  return ok;
}

// ---- criterion 3 --------------------------------------------------------
bool power_mean_properties() {
  std::mt19937_64 rng(20260808);
  std::uniform_int_distribution<int> len(2, 8);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  bool ok = true;
  int mono_bad = 0, limit_bad = 0, geo_bad = 0, chain_bad = 0;
  double worst_limit_dev = 0.0;
  for (int it = 0; it < 1000; ++it) {
    const int n = len(rng);
    std::vector<double> v(n);
    for (double& x : v) {
      do { x = val(rng); } while (x == 0.0);
    }
    bool all_equal = true;
    for (double x : v) all_equal = all_equal && x == v[0];
    if (all_equal) v[0] += 1.0;
    const WeightVector w = WeightVector::equal(n);

    double prev = power_mean(v, w, -32.0);
    for (int k = 1; k < 25; ++k) {
      const double p = -32.0 + 64.0 * k / 24.0;
      const double cur = power_mean(v, w, p);
      if (cur - prev < -1e-12 * std::max(prev, cur)) ++mono_bad;
      prev = cur;
    }

    const double mx = *std::max_element(v.begin(), v.end());
    const double mn = *std::min_element(v.begin(), v.end());
    const double dev_hi = std::abs(power_mean(v, w, 1000.0) - mx) / mx;
    const double dev_lo = std::abs(power_mean(v, w, -1000.0) - mn) / mn;
    worst_limit_dev = std::max({worst_limit_dev, dev_hi, dev_lo});
    if (dev_hi > 0.002 || dev_lo > 0.002) ++limit_bad;

    const double geo = power_mean(v, w, 0.0);
    for (double p : {1e-8, -1e-8, 1e-9, 1e-10}) {
      if (!close_rel(power_mean(v, w, p), geo, 1e-6)) ++geo_bad;
    }

    const MeanChain c = mean_chain(v, w);
    const double tol = 1e-12;
    if (c.harmonic - c.min < -tol * std::max(1.0, c.min) ||
        c.geometric - c.harmonic < -tol * std::max(1.0, c.harmonic) ||
        c.arithmetic - c.geometric < -tol * std::max(1.0, c.geometric) ||
        c.max - c.arithmetic < -tol * std::max(1.0, c.arithmetic))
      ++chain_bad;
  }
  if (mono_bad > 0) { ok = false; detail("strict monotonicity violations: " + std::to_string(mono_bad)); }
  if (limit_bad > 0) {
    ok = false;
    detail("|M_{+-1000} - max/min| > 0.2% on " + std::to_string(limit_bad) +
           "/1000 tuples; worst relative deviation " + format_number(worst_limit_dev) +
           " (mathematical bound for N = 8 is 1 - 8^(-1/1000) = " + format_number(1.0 - std::pow(8.0, -0.001)) +
           ", which exceeds 0.2%)");
  }
  if (geo_bad > 0) { ok = false; detail("geometric-limit disagreements: " + std::to_string(geo_bad)); }
  if (chain_bad > 0) { ok = false; detail("mean chain slack violations: " + std::to_string(chain_bad)); }
  return ok;
}

// ---- criterion 4 --------------------------------------------------------
bool oracle_equivalence() {
  std::mt19937_64 rng(424242);
  std::uniform_int_distribution<std::size_t> size(2, 10);
  int disagreements = 0;
  for (int it = 0; it < 500; ++it) {
    const auto m = it % 2 == 0 ? testhelp::random_distance_matrix(rng, size(rng))
                               : testhelp::random_metric_matrix(rng, size(rng));
    const bool kernel = check_relation(m, {1.0, 1.0}).holds;
    const bool oracle = testhelp::oracle_triangle_holds(m);
    if (kernel != oracle) ++disagreements;
  }
  if (disagreements > 0) detail("disagreements: " + std::to_string(disagreements));
  return disagreements == 0;
}

// ---- criterion 5 --------------------------------------------------------
bool sigma_min_antitone() {
  std::mt19937_64 rng(555);
  std::uniform_int_distribution<std::size_t> size(3, 12);
  const std::vector<PowerExponent> grid{ExtendedReal::neg_infinity(), -8.0, -4.0, -2.0, -1.0, 0.0,
                                        1.0, 2.0, 4.0, 8.0, ExtendedReal::infinity()};
  int violations = 0;
  for (int it = 0; it < 200; ++it) {
    const auto m = testhelp::random_distance_matrix(rng, size(rng));
    double prev = std::numeric_limits<double>::infinity();
    for (const PowerExponent p : grid) {
      const ExtendedReal s = sigma_min(m, p).sigma;
      const double cur = s.value();
      if (!(prev >= cur - 1e-10)) ++violations;
      prev = cur;
    }
  }
  if (violations > 0) detail("antitone violations: " + std::to_string(violations));
  return violations == 0;
}

// ---- criterion 6 --------------------------------------------------------
bool reverse_triangle() {
  std::mt19937_64 rng(666);
  std::uniform_int_distribution<std::size_t> size(3, 10);
  int violations = 0;
  for (int it = 0; it < 200; ++it) {
    const auto m = testhelp::random_metric_matrix(rng, size(rng));
    const LowerBoundReport r = lower_bound_check(m, {1.0, 1.0});
    if (!r.relation_ok || !r.item1_ok) ++violations;
    if (!r.reverse_ok || !*r.reverse_ok) ++violations;
    // direct sweep of |d(x,z) - d(z,y)| <= d(x,y) over all index triples
    const std::size_t n = m.size();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y)
        for (std::size_t z = 0; z < n; ++z) {
          const double lhs = m(x, y);
          if (std::abs(m(x, z) - m(z, y)) - lhs > 1e-12 * std::max(1.0, lhs)) ++violations;
        }
  }
  if (violations > 0) detail("violations: " + std::to_string(violations));
  return violations == 0;
}

// ---- criterion 7 --------------------------------------------------------
bool boundary_curve() {
  bool ok = true;
  if (boundary_sigma(1.0) != 1.0) { ok = false; detail("boundary(1) != 1"); }
  if (boundary_sigma(0.5) != 2.0) { ok = false; detail("boundary(1/2) != 2"); }
  if (!close_abs(boundary_sigma(2.0), 0.7071067811865476, 1e-15)) {
    ok = false;
    detail("boundary(2) = " + format_number(boundary_sigma(2.0)));
  }
  for (double p : {-8.0, -1.0, 0.25, 0.5, 1.0, 2.0, 8.0}) {
    const double sigma = boundary_sigma(p);
    const double back = std::log(2.0) / std::log(2.0 * sigma);
    if (!close_rel(back, p, 1e-12)) {
      ok = false;
      detail("round-trip p = " + format_number(p) + " -> " + format_number(back));
    }
  }
  return ok;
}

// ---- criterion 8 --------------------------------------------------------
bool sequence_suite() {
  bool ok = true;
  const std::int64_t horizon = std::int64_t(1) << 24;  // >= 1e7 and a power of two: exact 1/n tails
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  const Sequence rec = Sequence::reciprocal();

  for (double candidate : {0.0, 4.0}) {
    const ConvergenceCertificate c = limit_check(AnalyticSpace::ex321, rec, candidate, eps, horizon);
    if (c.verdict != Verdict::certified) {
      ok = false;
      detail("ex321 dual limit " + format_number(candidate) + ": " + to_string(c.verdict));
    } else {
      std::string ns;
      for (const EpsilonEntry& e : c.entries) ns += " N(" + format_number(e.eps) + ")=" + std::to_string(e.tail_from);
      std::printf("      ex321 limit %s certified:%s\n", format_number(candidate).c_str(), ns.c_str());
    }
  }

  {
    const CauchyReport r = cauchy_check(AnalyticSpace::ex322, rec, std::vector<double>{1e-1, 1e-2, 1e-3}, 10000);
    if (r.verdict != Verdict::refuted || !r.witness || r.witness->distance != 1.0) {
      ok = false;
      detail("ex322 cauchy: expected refutation with pairwise distance exactly 1");
    }
  }

  {
    const ConvergenceCertificate conv = limit_check(AnalyticSpace::ex323, rec, 0.0, eps, horizon);
    const CauchyReport derived = derive_cauchy_from_limit(conv, PowerParams{1.0, 2.0});
    bool derived_ok = conv.verdict == Verdict::certified && derived.verdict == Verdict::certified;
    for (std::size_t k = 0; k < derived.entries.size(); ++k)
      derived_ok = derived_ok && derived.entries[k].eps == 4.0 * eps[k] && derived.entries[k].verified;
    const CauchyReport scanned = cauchy_check(AnalyticSpace::ex323, rec, std::vector<double>{4e-1, 4e-2, 4e-3}, 10000);
    derived_ok = derived_ok && scanned.verdict == Verdict::certified;
    if (!derived_ok) {
      ok = false;
      detail("ex323 convergence => Cauchy at the derived 4*eps bound failed");
    }
  }

  struct ContinuityCase {
    AnalyticSpace space;
    Sequence x, y;
    double lim_x, lim_y;
    LimitHandling handling;
    double expect_tail, expect_limit;
    ContinuityVerdict expect_verdict;
  };
  const std::vector<ContinuityCase> cases = {
      {AnalyticSpace::ex321, Sequence::affine_reciprocal(1.0, -1.0), Sequence::affine_reciprocal(4.0, -1.0),
       0.0, 4.0, LimitHandling::as_given, 3.0, 4.0, ContinuityVerdict::discontinuous},
      {AnalyticSpace::ex322, rec, Sequence::affine_reciprocal(2.0, -1.0), 0.0, 2.0, LimitHandling::as_given,
       1.0, 2.0, ContinuityVerdict::discontinuous},
      {AnalyticSpace::ex324, rec, Sequence::affine_reciprocal(2.0, -1.0), 0.0, 2.0,
       LimitHandling::certify_first, 4.0, 4.0, ContinuityVerdict::continuous_evidence},
  };
  for (const ContinuityCase& c : cases) {
    const ContinuityReport r =
        distance_continuity_check(c.space, c.x, c.y, c.lim_x, c.lim_y, horizon, c.handling);
    const bool tail_ok = c.space == AnalyticSpace::ex324
                             ? r.verdict == c.expect_verdict && r.limit_distance == c.expect_limit
                             : r.verdict == c.expect_verdict && r.tail_value == c.expect_tail &&
                                   r.limit_distance == c.expect_limit;
    if (!tail_ok) {
      ok = false;
      detail(std::string(to_string(c.space)) + " continuity: tail " + format_number(r.tail_value) + " vs " +
             format_number(r.limit_distance) + " (" +
             (r.verdict == ContinuityVerdict::discontinuous ? "discontinuous" : "continuous-evidence") + ")");
    }
  }
  return ok;
}

// ---- criterion 9 --------------------------------------------------------
bool ball_openness() {
  const std::vector<double> eps{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  bool ok = true;
  {
    const auto probes = default_ball_probes(AnalyticSpace::ex321, 3.0, 2.0, 4.0, eps);
    if (ball_openness_check(AnalyticSpace::ex321, 3.0, 2.0, 4.0, eps, probes).open_evidence) {
      ok = false;
      detail("ex321 B(3,2): expected a non-open witness");
    }
  }
  {
    const auto probes = default_ball_probes(AnalyticSpace::ex322, 0.25, 0.5, 0.0, eps);
    if (ball_openness_check(AnalyticSpace::ex322, 0.25, 0.5, 0.0, eps, probes).open_evidence) {
      ok = false;
      detail("ex322 B(1/4,1/2): expected a non-open witness");
    }
  }
  for (double interior : {-2.5, -1.0, 0.0, 0.5, 0.9}) {
    const auto probes = default_ball_probes(AnalyticSpace::ex323, -1.0, 2.0, interior, eps);
    if (!ball_openness_check(AnalyticSpace::ex323, -1.0, 2.0, interior, eps, probes).open_evidence) {
      ok = false;
      detail("ex323 B(-1,2) interior " + format_number(interior) + ": expected all probes to pass");
    }
  }
  return ok;
}

// ---- criterion 10 -------------------------------------------------------
bool transform_preservation() {
  std::mt19937_64 rng(1010);
  std::uniform_int_distribution<std::size_t> size(3, 10);
  const std::vector<Transform> specs{Transform::scale(2.0),      Transform::snowflake(0.5),
                                     Transform::truncate(3.0),   Transform::bounded(),
                                     Transform::discrete_step(), Transform::piecewise_c9()};
  int violations = 0;
  for (int it = 0; it < 200; ++it) {
    const auto m = testhelp::random_metric_matrix(rng, size(rng));
    for (const Transform& t : specs)
      if (!testhelp::oracle_triangle_holds(apply_transform(m, t))) ++violations;
  }
  bool ok = violations == 0;
  if (!ok) detail("triangle violations after transform: " + std::to_string(violations));

  const Transform square = Transform::custom_table({{0.0, 0.0}, {1.0, 1.0}, {2.0, 4.0}});
  const NecessaryConditionsReport r = necessary_conditions_check(square, std::vector<double>{0.0, 0.5, 1.0});
  if (r.subadditive || !r.subadditivity_witness || r.subadditivity_witness->x != 1.0 ||
      r.subadditivity_witness->y != 1.0) {
    ok = false;
    detail("x^2 negative control: expected subadditivity failure with witness (1,1)");
  }
  return ok;
}

// ---- criterion 11 -------------------------------------------------------
bool curve_length_paradox() {
  bool ok = true;
  for (int n = 1; n <= 20; ++n) {
    const double seg = std::ldexp(1.0, -n);
    double total = 0.0;
    for (std::int64_t k = 0; k < (std::int64_t(1) << n); ++k) total += seg * seg;
    if (curve_length_324(n) != std::ldexp(1.0, -n) || curve_length_324(n) != total) {
      ok = false;
      detail("N = " + std::to_string(n) + ": " + format_number(curve_length_324(n)));
    }
  }
  return ok;
}

// ---- criterion 12 -------------------------------------------------------
bool determinism() {
  const std::string csv = "0,1,2\n1,0,1\n2,1,0\n";
  const std::string path = "acceptance_determinism.csv";
  {
    std::ofstream out(path, std::ios::binary);
    out << csv;
  }
  cli::RunConfig cfg;
  cfg.command = cli::RunConfig::Command::classify;
  cfg.input_path = path;
  std::string first, second;
  {
    std::ostringstream out, err;
    cli::run(cfg, out, err);
    first = out.str();
  }
  {
    std::ostringstream out, err;
    cli::run(cfg, out, err);
    second = out.str();
  }
  std::remove(path.c_str());
  if (first != second) {
    detail("classify emitted different bytes across runs");
    return false;
  }
  if (first.empty()) {
    detail("classify emitted nothing");
    return false;
  }
  return true;
}

}  // namespace

int main() {
  criterion(1, "counterexample suite reproduced exactly", counterexample_suite);
  criterion(2, "sigma_min reproduction on the example spaces", sigma_min_reproduction);
  criterion(3, "power-mean property suite", power_mean_properties);
  criterion(4, "relation check agrees with the brute-force triangle oracle", oracle_equivalence);
  criterion(5, "sigma_min is antitone in p", sigma_min_antitone);
  criterion(6, "reverse triangle bound on metric matrices", reverse_triangle);
  criterion(7, "feasibility boundary curve and round-trip", boundary_curve);
  criterion(8, "sequence suite: dual limits, Cauchy refutation, derived bound, continuity", sequence_suite);
  criterion(9, "ball openness probes", ball_openness);
  criterion(10, "metric-preserving transforms and the negative control", transform_preservation);
  criterion(11, "curve-length paradox values", curve_length_paradox);
  criterion(12, "byte-identical classify reports", determinism);

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
