#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "powerdist/cli.hpp"

namespace {

using powerdist::cli::RunConfig;

void add_common(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--output,-o", cfg.output_path, "write output to a file instead of stdout");
  cmd->add_option("--format", cfg.format, "output format (json, csv, text)");
}

void add_policy(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option_function<std::string>(
         "--policy",
         [&cfg](const std::string& v) {
           if (v == "exclude-degenerate") cfg.policy = powerdist::TriplePolicy::exclude_degenerate;
           else if (v == "all-triples") cfg.policy = powerdist::TriplePolicy::all_triples;
           else throw CLI::ValidationError("--policy", "expected exclude-degenerate or all-triples");
         },
         "triple policy: exclude-degenerate (default) or all-triples");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"powerdist: dissimilarity matrix analysis under power triangle inequalities"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string p_text, grid, named, transform, emit_sample, eps, seq2, cond_sample;
  double sigma = 0.0, candidate = 0.0, candidate2 = 0.0, center = 0.0, radius = 0.0, interior = 0.0;
  int curve_n = 0;
  long long stride = 0;

  auto* validate = app.add_subcommand("validate", "check the distance axioms on a CSV matrix");
  validate->add_option("--input,-i", cfg.input_path, "matrix CSV")->required();
  add_common(validate, cfg);

  auto* classify = app.add_subcommand("classify", "metric / near-metric / inframetric classification");
  classify->add_option("--input,-i", cfg.input_path, "matrix CSV")->required();
  add_policy(classify, cfg);
  add_common(classify, cfg);

  auto* check = app.add_subcommand("check", "check one power triangle relation");
  check->add_option("--input,-i", cfg.input_path, "matrix CSV")->required();
  check->add_option("--p", p_text, "exponent p (number, inf, -inf)");
  check->add_option("--sigma", sigma, "sigma > 0");
  check->add_option("--named", named, "named inequality, e.g. triangle, inframetric, relaxed-triangle:1.5");
  add_policy(check, cfg);
  add_common(check, cfg);

  auto* profile = app.add_subcommand("sigma-profile", "sweep sigma_min over an exponent grid");
  profile->add_option("--input,-i", cfg.input_path, "matrix CSV")->required();
  profile->add_option("--grid", grid, "exponent grid lo:hi:count[,inf][,-inf]")->required();
  add_policy(profile, cfg);
  add_common(profile, cfg);

  auto* boundary = app.add_subcommand("boundary", "feasibility boundary sigma = 2^(1/p - 1)");
  boundary->add_option("--p", p_text, "exponent p (nonzero; inf allowed)")->required();
  add_common(boundary, cfg);

  auto* fixture = app.add_subcommand("fixture", "reproduce a documented example space exactly");
  fixture->add_option("name", cfg.fixture_name, "ex321 | ex322 | ex323 | ex324")->required();
  fixture->add_option("--curve-n", curve_n, "also print the inscribed curve length at N (ex324)");
  fixture->add_option("--emit-sample", emit_sample, "emit the sampled matrix CSV at these points");
  add_common(fixture, cfg);

  auto* sequence = app.add_subcommand("sequence", "finite-horizon convergence / Cauchy / continuity / ball checks");
  sequence->add_option("--space", cfg.fixture_name, "ex321 | ex322 | ex323 | ex324")->required();
  sequence->add_option("--check", cfg.seq_check, "limit | cauchy | continuity | ball")->required();
  sequence->add_option("--seq", cfg.seq_spec, "sequence: reciprocal | affine:a:b | constant:c | table:v1;v2");
  sequence->add_option("--seq2", seq2, "second sequence (continuity)");
  sequence->add_option("--stride", stride, "subsequence stride");
  sequence->add_option("--candidate", candidate, "candidate limit");
  sequence->add_option("--candidate2", candidate2, "candidate limit of --seq2");
  sequence->add_option("--eps", eps, "comma-separated decreasing epsilon schedule");
  sequence->add_option("--nmax", cfg.n_max, "horizon for limit/continuity checks");
  sequence->add_option("--cauchy-nmax", cfg.cauchy_n_max, "horizon for the pairwise Cauchy scan");
  sequence->add_flag("--as-given", cfg.as_given, "compare continuity against the candidates as given");
  sequence->add_option("--center", center, "ball center");
  sequence->add_option("--radius", radius, "ball radius");
  sequence->add_option("--interior", interior, "interior point to probe");
  add_common(sequence, cfg);

  auto* transform_cmd = app.add_subcommand("transform", "apply a metric-preserving transform entrywise");
  transform_cmd->add_option("--input,-i", cfg.input_path, "matrix CSV")->required();
  transform_cmd->add_option("--transform", transform, "name[:param], e.g. snowflake:0.5")->required();
  transform_cmd->add_option("--check-conditions", cond_sample,
                            "run necessary/sufficient condition checks on this comma-separated sample");
  add_common(transform_cmd, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) cfg.command = RunConfig::Command::validate;
    if (classify->parsed()) cfg.command = RunConfig::Command::classify;
    if (check->parsed()) {
      cfg.command = RunConfig::Command::check;
      if (!p_text.empty()) cfg.p = powerdist::parse_extended_real(p_text);
      if (check->count("--sigma")) cfg.sigma = sigma;
      if (!named.empty()) cfg.named = named;
    }
    if (profile->parsed()) {
      cfg.command = RunConfig::Command::sigma_profile;
      cfg.grid_spec = grid;
    }
    if (boundary->parsed()) {
      cfg.command = RunConfig::Command::boundary;
      cfg.p = powerdist::parse_extended_real(p_text);
    }
    if (fixture->parsed()) {
      cfg.command = RunConfig::Command::fixture;
      if (fixture->count("--curve-n")) cfg.curve_n = curve_n;
      if (!emit_sample.empty()) cfg.emit_sample = emit_sample;
    }
    if (sequence->parsed()) {
      cfg.command = RunConfig::Command::sequence;
      cfg.seq2_spec = seq2;
      if (sequence->count("--stride")) cfg.stride = stride;
      if (sequence->count("--candidate")) cfg.candidate = candidate;
      if (sequence->count("--candidate2")) cfg.candidate2 = candidate2;
      if (!eps.empty()) cfg.eps_list = eps;
      if (sequence->count("--center")) cfg.center = center;
      if (sequence->count("--radius")) cfg.radius = radius;
      if (sequence->count("--interior")) cfg.interior = interior;
    }
    if (transform_cmd->parsed()) {
      cfg.command = RunConfig::Command::transform;
      cfg.transform_spec = transform;
      if (!cond_sample.empty()) cfg.condition_sample = cond_sample;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return powerdist::cli::kExitInputError;
  }

  return powerdist::cli::run(cfg, std::cout, std::cerr);
}
