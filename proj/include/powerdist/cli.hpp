#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "powerdist/io.hpp"
#include "powerdist/transforms.hpp"

namespace powerdist::cli {

inline constexpr int kExitOk = 0;          // success / relation holds
inline constexpr int kExitInputError = 2;  // bad input or usage
inline constexpr int kExitViolation = 3;   // relation/classification violations found

/// Grid syntax "lo:hi:count" with an optional ",inf" / ",-inf" suffix in
/// either order; -inf is prepended, +inf appended.
inline std::vector<PowerExponent> parse_p_grid(const std::string& text) {
  bool want_pos_inf = false, want_neg_inf = false;
  std::string core;
  {
    std::istringstream in(text);
    std::string piece;
    while (std::getline(in, piece, ',')) {
      auto t = std::string(detail::trim(piece));
      if (t == "inf" || t == "+inf") want_pos_inf = true;
      else if (t == "-inf") want_neg_inf = true;
      else if (core.empty()) core = t;
      else throw std::invalid_argument("bad grid syntax '" + text + "' (expected lo:hi:count[,inf][,-inf])");
    }
  }
  std::vector<PowerExponent> grid;
  if (want_neg_inf) grid.push_back(ExtendedReal::neg_infinity());
  if (!core.empty()) {
    std::istringstream in(core);
    std::string lo_s, hi_s, count_s;
    if (!std::getline(in, lo_s, ':') || !std::getline(in, hi_s, ':') || !std::getline(in, count_s))
      throw std::invalid_argument("bad grid syntax '" + core + "' (expected lo:hi:count)");
    const double lo = parse_real(lo_s);
    const double hi = parse_real(hi_s);
    long count = 0;
    try {
      count = std::stol(count_s);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad grid count '" + count_s + "'");
    }
    if (count < 1 || count > 1'000'000) throw std::invalid_argument("grid count must be in [1, 1e6]");
    if (count == 1) {
      if (lo != hi) throw std::invalid_argument("grid with count 1 needs lo == hi");
      grid.push_back(lo);
    } else {
      if (!(lo < hi)) throw std::invalid_argument("grid needs lo < hi");
      for (long k = 0; k < count; ++k)
        grid.push_back(lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1));
    }
  }
  if (want_pos_inf) grid.push_back(ExtendedReal::infinity());
  if (grid.empty()) throw std::invalid_argument("empty exponent grid");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i - 1] < grid[i])) throw std::invalid_argument("grid must be strictly increasing");
  return grid;
}

inline std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> eps;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) eps.push_back(parse_real(piece));
  return eps;
}

inline std::vector<double> parse_point_list(const std::string& text) {
  std::vector<double> pts;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) pts.push_back(parse_real(piece));
  return pts;
}

/// "reciprocal" | "affine:a:b" (a + b/n) | "constant:c" | "table:v1;v2;..."
inline Sequence parse_sequence(const std::string& text, std::optional<std::int64_t> stride) {
  Sequence seq = [&]() {
    if (text == "reciprocal") return Sequence::reciprocal();
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (name == "affine") {
      const auto mid = rest.find(':');
      if (mid == std::string::npos) throw std::invalid_argument("affine sequence needs a:b");
      return Sequence::affine_reciprocal(parse_real(rest.substr(0, mid)), parse_real(rest.substr(mid + 1)));
    }
    if (name == "constant") return Sequence::constant(parse_real(rest));
    if (name == "table") {
      std::vector<double> vals;
      std::istringstream in(rest);
      std::string piece;
      while (std::getline(in, piece, ';')) vals.push_back(parse_real(piece));
      return Sequence::table(std::move(vals));
    }
    throw std::invalid_argument("unknown sequence '" + text + "'");
  }();
  if (stride) seq = seq.with_stride(*stride);
  return seq;
}

struct RunConfig {
  enum class Command { validate, classify, check, sigma_profile, boundary, fixture, sequence, transform };
  Command command = Command::validate;

  std::string input_path;                     // matrix commands
  std::string output_path;                    // empty = stdout
  std::string format;                         // "json" | "csv" | "text" (per-command default)
  TriplePolicy policy = TriplePolicy::exclude_degenerate;

  std::optional<ExtendedReal> p;
  std::optional<double> sigma;
  std::string grid_spec;
  std::optional<std::string> named;           // named inequality for `check`

  std::string fixture_name;
  std::optional<int> curve_n;
  std::optional<std::string> emit_sample;     // point list

  std::string seq_check;                      // limit | cauchy | continuity | ball
  std::string seq_spec = "reciprocal";
  std::string seq2_spec;
  std::optional<std::int64_t> stride;
  std::optional<double> candidate;
  std::optional<double> candidate2;
  std::optional<std::string> eps_list;
  std::int64_t n_max = 10'000'000;
  std::int64_t cauchy_n_max = 5'000;
  bool as_given = false;
  std::optional<double> center, radius, interior;

  std::string transform_spec;
  std::optional<std::string> condition_sample;  // point list for condition checks
};

namespace detail_cli {

inline DissimilarityMatrix load_matrix(const RunConfig& cfg) {
  if (cfg.input_path.empty()) throw std::invalid_argument("missing --input");
  std::ifstream in(cfg.input_path);
  if (!in) throw std::invalid_argument("cannot open input file '" + cfg.input_path + "'");
  return parse_matrix_csv(in);
}

inline ordered_json input_json(const RunConfig& cfg, const DissimilarityMatrix* m) {
  ordered_json j;
  j["path"] = cfg.input_path.empty() ? ordered_json(nullptr) : ordered_json(cfg.input_path);
  if (m) {
    j["n"] = std::to_string(m->size());
    j["nondegenerate"] = m->nondegenerate();
  }
  return j;
}

struct Emitter {
  std::ofstream file;  // must outlive (and be constructed before) `out`
  std::ostream& out;

  explicit Emitter(const RunConfig& cfg, std::ostream& fallback) : out(open(cfg, fallback)) {}

 private:
  std::ostream& open(const RunConfig& cfg, std::ostream& fallback) {
    if (cfg.output_path.empty()) return fallback;
    file.open(cfg.output_path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file '" + cfg.output_path + "'");
    return file;
  }
};

}  // namespace detail_cli

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) try {
  using Command = RunConfig::Command;
  detail_cli::Emitter emit(cfg, out);

  switch (cfg.command) {
    case Command::validate: {
      if (cfg.input_path.empty()) throw std::invalid_argument("missing --input");
      std::ifstream in(cfg.input_path);
      if (!in) throw std::invalid_argument("cannot open input file '" + cfg.input_path + "'");
      // Axiom check on the raw parsed numbers, before any ingestion repair,
      // so every violation surfaces as a witness instead of a hard error.
      const RawCsvMatrix raw = parse_csv_rows(in);
      const DistanceValidation v = DissimilarityMatrix::validate(raw.rows);
      ordered_json input = detail_cli::input_json(cfg, nullptr);
      input["n"] = std::to_string(raw.rows.size());
      ordered_json report = assemble_report(std::move(input), to_string(cfg.policy), nullptr, nullptr,
                                            validation_json(v), nullptr);
      emit.out << dump_report(report);
      return v.all_pass() ? kExitOk : kExitViolation;
    }

    case Command::classify: {
      DissimilarityMatrix m = detail_cli::load_matrix(cfg);
      ClassificationReport r = classify(m, cfg.policy);
      if (cfg.format == "text") {
        emit.out << (r.is_metric ? "metric" : "not metric") << "; near-metric sigma "
                 << format_number(r.near_metric_sigma) << "; inframetric constant "
                 << format_number(r.inframetric_constant) << "\n";
      } else {
        ordered_json report = assemble_report(detail_cli::input_json(cfg, &m), to_string(cfg.policy),
                                              classification_json(r, &m), nullptr, nullptr, nullptr);
        emit.out << dump_report(report);
      }
      return r.is_metric ? kExitOk : kExitViolation;
    }

    case Command::check: {
      DissimilarityMatrix m = detail_cli::load_matrix(cfg);
      PowerParams params = [&]() {
        if (cfg.named) return parse_named_inequality(*cfg.named).to_params();
        if (!cfg.p || !cfg.sigma) throw std::invalid_argument("check needs --p and --sigma (or --named)");
        return PowerParams(*cfg.p, *cfg.sigma);
      }();
      RelationCheck c = check_relation(m, params, cfg.policy);
      if (cfg.format == "text") {
        emit.out << (c.holds ? "holds" : "fails");
        if (c.worst) {
          emit.out << " worst (" << m.point_name(c.worst->x) << "," << m.point_name(c.worst->y) << ","
                   << m.point_name(c.worst->z) << ") lhs " << format_number(c.worst->lhs) << " rhs "
                   << format_number(c.worst->rhs);
        }
        emit.out << "\n";
      } else {
        ordered_json report = assemble_report(detail_cli::input_json(cfg, &m), to_string(cfg.policy),
                                              nullptr, nullptr, relation_json(c, params, &m), nullptr);
        emit.out << dump_report(report);
      }
      return c.holds ? kExitOk : kExitViolation;
    }

    case Command::sigma_profile: {
      DissimilarityMatrix m = detail_cli::load_matrix(cfg);
      if (cfg.grid_spec.empty()) throw std::invalid_argument("missing --grid");
      const std::vector<PowerExponent> grid = parse_p_grid(cfg.grid_spec);
      SigmaProfile profile = sigma_profile(m, grid, cfg.policy);
      if (cfg.format == "json") {
        ordered_json report = assemble_report(detail_cli::input_json(cfg, &m), to_string(cfg.policy),
                                              nullptr, profile_json(profile, &m), nullptr, nullptr);
        emit.out << dump_report(report);
      } else {
        emit.out << emit_profile_csv(profile);
      }
      return kExitOk;
    }

    case Command::boundary: {
      if (!cfg.p) throw std::invalid_argument("missing --p");
      emit.out << format_number(boundary_sigma(*cfg.p)) << "\n";
      return kExitOk;
    }

    case Command::fixture: {
      const AnalyticSpace space = parse_analytic_space(cfg.fixture_name);
      if (cfg.emit_sample) {
        const std::vector<double> pts = parse_point_list(*cfg.emit_sample);
        emit.out << emit_matrix_csv(sample_matrix(space, pts));
        return kExitOk;
      }
      bool all_exact = true;
      for (const FixtureFact& f : fact_suite(space)) {
        emit.out << (f.exact ? "ok   " : "FAIL ") << f.name << ": expected " << format_number(f.expected)
                 << " actual " << format_number(f.actual) << "\n";
        all_exact = all_exact && f.exact;
      }
      if (cfg.curve_n) {
        if (space != AnalyticSpace::ex324)
          throw std::invalid_argument("--curve-n applies to ex324 only");
        emit.out << "curve length N=" << *cfg.curve_n << ": " << format_number(curve_length_324(*cfg.curve_n))
                 << "\n";
      }
      return all_exact ? kExitOk : kExitViolation;
    }

    case Command::sequence: {
      if (cfg.fixture_name.empty()) throw std::invalid_argument("missing --space (ex321..ex324)");
      const AnalyticSpace space = parse_analytic_space(cfg.fixture_name);
      const Sequence seq = parse_sequence(cfg.seq_spec, cfg.stride);
      ordered_json certs = ordered_json::array();
      int exit_code = kExitOk;

      if (cfg.seq_check == "limit") {
        if (!cfg.candidate) throw std::invalid_argument("limit check needs --candidate");
        const std::vector<double> eps =
            cfg.eps_list ? parse_eps_list(*cfg.eps_list) : default_epsilon_schedule(cfg.n_max);
        ConvergenceCertificate c = limit_check(space, seq, *cfg.candidate, eps, cfg.n_max);
        certs.push_back(convergence_json(c));
        if (c.verdict == Verdict::refuted) exit_code = kExitViolation;
      } else if (cfg.seq_check == "cauchy") {
        const std::vector<double> eps =
            cfg.eps_list ? parse_eps_list(*cfg.eps_list) : default_epsilon_schedule(cfg.cauchy_n_max);
        CauchyReport c = cauchy_check(space, seq, eps, cfg.cauchy_n_max);
        certs.push_back(cauchy_json(c));
        if (c.verdict == Verdict::refuted) exit_code = kExitViolation;
      } else if (cfg.seq_check == "continuity") {
        if (cfg.seq2_spec.empty() || !cfg.candidate || !cfg.candidate2)
          throw std::invalid_argument("continuity check needs --seq2, --candidate and --candidate2");
        const Sequence seq2 = parse_sequence(cfg.seq2_spec, cfg.stride);
        ContinuityReport r = distance_continuity_check(
            space, seq, seq2, *cfg.candidate, *cfg.candidate2, cfg.n_max,
            cfg.as_given ? LimitHandling::as_given : LimitHandling::certify_first);
        certs.push_back(continuity_json(r));
        if (r.verdict == ContinuityVerdict::discontinuous) exit_code = kExitViolation;
      } else if (cfg.seq_check == "ball") {
        if (!cfg.center || !cfg.radius || !cfg.interior)
          throw std::invalid_argument("ball check needs --center, --radius and --interior");
        std::vector<double> eps = cfg.eps_list ? parse_eps_list(*cfg.eps_list)
                                               : std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
        const std::vector<double> probes = default_ball_probes(space, *cfg.center, *cfg.radius, *cfg.interior, eps);
        BallOpennessReport r = ball_openness_check(space, *cfg.center, *cfg.radius, *cfg.interior, eps, probes);
        certs.push_back(ball_json(r));
        if (!r.open_evidence) exit_code = kExitViolation;
      } else {
        throw std::invalid_argument("unknown sequence check '" + cfg.seq_check +
                                    "' (expected limit|cauchy|continuity|ball)");
      }

      ordered_json report = assemble_report(detail_cli::input_json(cfg, nullptr), to_string(cfg.policy),
                                            nullptr, nullptr, nullptr, certs);
      emit.out << dump_report(report);
      return exit_code;
    }

    case Command::transform: {
      DissimilarityMatrix m = detail_cli::load_matrix(cfg);
      if (cfg.transform_spec.empty()) throw std::invalid_argument("missing --transform name[:param]");
      const Transform t = parse_transform(cfg.transform_spec);
      if (cfg.condition_sample) {
        const std::vector<double> xs = parse_point_list(*cfg.condition_sample);
        const NecessaryConditionsReport nec = necessary_conditions_check(t, xs);
        const SufficientConditionsReport suf = sufficient_conditions_check(t, xs);
        ordered_json w;
        w["transform"] = t.describe();
        w["necessary"] = ordered_json{{"zero_preimage", nec.zero_preimage},
                                      {"range_nonnegative", nec.range_nonnegative},
                                      {"subadditive", nec.subadditive}};
        if (nec.subadditivity_witness) {
          w["necessary"]["witness"] =
              ordered_json{{"x", format_number(nec.subadditivity_witness->x)},
                           {"y", format_number(nec.subadditivity_witness->y)},
                           {"lhs", format_number(nec.subadditivity_witness->lhs)},
                           {"rhs", format_number(nec.subadditivity_witness->rhs)}};
        }
        w["sufficient"] = ordered_json{{"isotone", suf.isotone},
                                       {"zero_at_zero", suf.zero_at_zero},
                                       {"subadditive", suf.subadditive}};
        ordered_json report = assemble_report(detail_cli::input_json(cfg, &m), to_string(cfg.policy),
                                              nullptr, nullptr, std::move(w), nullptr);
        emit.out << dump_report(report);
        return nec.all_pass() && suf.all_pass() ? kExitOk : kExitViolation;
      }
      emit.out << emit_matrix_csv(apply_transform(m, t));
      return kExitOk;
    }
  }
  throw std::logic_error("unreachable command");
} catch (const std::invalid_argument& e) {
  err << "error: " << e.what() << "\n";
  return kExitInputError;
} catch (const std::domain_error& e) {
  err << "error: " << e.what() << "\n";
  return kExitInputError;
}

}  // namespace powerdist::cli
