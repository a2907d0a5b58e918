#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "powerdist/classification.hpp"
#include "powerdist/distance_matrix.hpp"
#include "powerdist/format.hpp"
#include "powerdist/power_triangle.hpp"
#include "powerdist/sequences.hpp"

namespace powerdist {

using ordered_json = nlohmann::ordered_json;

namespace detail {
inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}
}  // namespace detail

struct RawCsvMatrix {
  std::vector<std::string> labels;           // empty when no header row
  std::vector<std::vector<double>> rows;     // square
};

/// Parses the raw numbers of an n x n comma-separated matrix. A header row
/// of labels is detected when the first field of the first row is
/// non-numeric. Parsing is locale-independent (period radix only). No axiom
/// checking or repair happens here.
inline RawCsvMatrix parse_csv_rows(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  if (lines.empty()) throw std::invalid_argument("empty matrix input");

  RawCsvMatrix raw;
  std::size_t first_data_row = 0;
  {
    const auto fields = detail::split_fields(lines[0]);
    if (!looks_numeric(fields[0])) {
      raw.labels.assign(fields.begin(), fields.end());
      first_data_row = 1;
      if (lines.size() == 1) throw std::invalid_argument("header row without matrix rows");
    }
  }

  const std::size_t expected = detail::split_fields(lines[first_data_row]).size();
  for (std::size_t r = first_data_row; r < lines.size(); ++r) {
    const auto fields = detail::split_fields(lines[r]);
    if (fields.size() != expected)
      throw std::invalid_argument("ragged row " + std::to_string(r + 1) + ": expected " +
                                  std::to_string(expected) + " fields, got " + std::to_string(fields.size()));
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      try {
        row.push_back(parse_real(fields[c]));
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument("non-numeric cell at row " + std::to_string(r + 1) + " col " +
                                    std::to_string(c + 1) + ": '" + fields[c] + "'");
      }
    }
    raw.rows.push_back(std::move(row));
  }
  if (raw.rows.size() != expected)
    throw std::invalid_argument("matrix is not square: " + std::to_string(raw.rows.size()) + " rows of " +
                                std::to_string(expected) + " fields");
  if (!raw.labels.empty() && raw.labels.size() != expected)
    throw std::invalid_argument("header has " + std::to_string(raw.labels.size()) + " labels for " +
                                std::to_string(expected) + " columns");
  return raw;
}

/// Parse plus ingestion: sub-tolerance noise is repaired, anything beyond
/// is an error naming the offending cell.
inline DissimilarityMatrix parse_matrix_csv(std::istream& in) {
  RawCsvMatrix raw = parse_csv_rows(in);
  return DissimilarityMatrix::ingest(raw.rows, std::move(raw.labels));
}

inline DissimilarityMatrix parse_matrix_csv(const std::string& text) {
  std::istringstream in(text);
  return parse_matrix_csv(in);
}

/// Emits a matrix that re-parses to bit-identical entries. A label header
/// is written only when it would be recognized as one on the way back in,
/// i.e. when the first label is not a bare number.
inline std::string emit_matrix_csv(const DissimilarityMatrix& m) {
  std::string out;
  if (m.has_labels() && !looks_numeric(m.labels()[0])) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out += ',';
      out += m.labels()[j];
    }
    out += '\n';
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j) out += ',';
      out += format_number(m(i, j));
    }
    out += '\n';
  }
  return out;
}

/// Profile CSV, one row per grid exponent. The boundary column is empty at
/// p = 0 where the curve is undefined; witness columns are empty when no
/// admissible triple exists.
inline std::string emit_profile_csv(const SigmaProfile& profile) {
  std::string out = "p,sigma_min,boundary_sigma,witness_x,witness_y,witness_z\n";
  for (const SigmaSample& s : profile.samples) {
    out += format_number(s.p) + ',' + format_number(s.sigma_min) + ',';
    if (s.boundary) out += format_number(*s.boundary);
    out += ',';
    if (s.witness) {
      out += std::to_string(s.witness->x) + ',' + std::to_string(s.witness->y) + ',' +
             std::to_string(s.witness->z);
    } else {
      out += ",,";
    }
    out += '\n';
  }
  return out;
}

// ---- JSON report assembly ---------------------------------------------
// All numeric leaves are decimal strings so the bytes do not depend on the
// platform's float-to-text rounding of the JSON writer.

inline ordered_json witness_json(const TripleWitness& w, const DissimilarityMatrix* m = nullptr) {
  ordered_json j;
  j["x"] = std::to_string(w.x);
  j["y"] = std::to_string(w.y);
  j["z"] = std::to_string(w.z);
  if (m && m->has_labels()) {
    j["points"] = ordered_json::array({m->labels()[w.x], m->labels()[w.y], m->labels()[w.z]});
  }
  j["lhs"] = format_number(w.lhs);
  j["rhs"] = format_number(w.rhs);
  j["deficit"] = format_number(w.deficit);
  return j;
}

inline ordered_json validation_json(const DistanceValidation& v) {
  ordered_json j;
  j["non_negative"] = v.non_negative;
  j["nondegenerate"] = v.nondegenerate;
  j["symmetric"] = v.symmetric;
  auto dump = [](const std::vector<AxiomWitness>& ws, bool with_pair) {
    ordered_json arr = ordered_json::array();
    for (const AxiomWitness& w : ws) {
      ordered_json e;
      e["i"] = std::to_string(w.i);
      e["j"] = std::to_string(w.j);
      e["value"] = format_number(w.value_ij);
      if (with_pair) e["mirror"] = format_number(w.value_ji);
      arr.push_back(e);
    }
    return arr;
  };
  j["negativity_witnesses"] = dump(v.negativity_witnesses, false);
  j["degeneracy_witnesses"] = dump(v.degeneracy_witnesses, false);
  j["asymmetry_witnesses"] = dump(v.asymmetry_witnesses, true);
  return j;
}

inline ordered_json relation_json(const RelationCheck& c, const PowerParams& params,
                                  const DissimilarityMatrix* m = nullptr) {
  ordered_json j;
  j["p"] = format_number(params.p);
  j["sigma"] = format_number(params.sigma);
  j["holds"] = c.holds;
  j["worst"] = c.worst ? witness_json(*c.worst, m) : ordered_json(nullptr);
  return j;
}

inline ordered_json classification_json(const ClassificationReport& r, const DissimilarityMatrix* m = nullptr) {
  ordered_json j;
  j["is_metric"] = r.is_metric;
  j["near_metric_sigma"] = format_number(r.near_metric_sigma);
  j["sigma_min_at_inf"] = format_number(r.sigma_min_at_inf);
  j["inframetric_constant"] = format_number(r.inframetric_constant);
  j["is_inframetric"] = r.is_inframetric;
  j["near_metric_witness"] = r.near_metric_witness ? witness_json(*r.near_metric_witness, m) : ordered_json(nullptr);
  j["inframetric_witness"] = r.inframetric_witness ? witness_json(*r.inframetric_witness, m) : ordered_json(nullptr);
  ordered_json named = ordered_json::array();
  for (const NamedResult& nr : r.named) {
    ordered_json e;
    e["name"] = nr.inequality.name();
    if (nr.holds) {
      e["p"] = format_number(nr.params.p);
      e["sigma"] = format_number(nr.params.sigma);
      e["holds"] = *nr.holds;
      e["worst"] = nr.worst ? witness_json(*nr.worst, m) : ordered_json(nullptr);
    } else {
      e["sigma_star"] = nr.sigma_star ? ordered_json(format_number(*nr.sigma_star)) : ordered_json(nullptr);
      e["witness"] = nr.worst ? witness_json(*nr.worst, m) : ordered_json(nullptr);
    }
    named.push_back(e);
  }
  j["named"] = named;
  return j;
}

inline ordered_json profile_json(const SigmaProfile& p, const DissimilarityMatrix* m = nullptr) {
  ordered_json arr = ordered_json::array();
  for (const SigmaSample& s : p.samples) {
    ordered_json e;
    e["p"] = format_number(s.p);
    e["sigma_min"] = format_number(s.sigma_min);
    e["boundary_sigma"] = s.boundary ? ordered_json(format_number(*s.boundary)) : ordered_json(nullptr);
    e["witness"] = s.witness ? witness_json(*s.witness, m) : ordered_json(nullptr);
    arr.push_back(e);
  }
  return arr;
}

inline ordered_json epsilon_entries_json(const std::vector<EpsilonEntry>& entries) {
  ordered_json arr = ordered_json::array();
  for (const EpsilonEntry& e : entries) {
    ordered_json je;
    je["eps"] = format_number(e.eps);
    je["verified"] = e.verified;
    je["tail_from"] = std::to_string(e.tail_from);
    je["last_violation"] = std::to_string(e.last_violation);
    je["deep_violations"] = std::to_string(e.deep_violations);
    arr.push_back(je);
  }
  return arr;
}

inline ordered_json convergence_json(const ConvergenceCertificate& c) {
  ordered_json j;
  j["kind"] = "convergence";
  j["candidate"] = format_number(c.candidate);
  j["horizon"] = std::to_string(c.horizon);
  j["verdict"] = to_string(c.verdict);
  j["witness_n"] = c.witness_n ? ordered_json(std::to_string(*c.witness_n)) : ordered_json(nullptr);
  j["witness_distance"] = c.witness_distance ? ordered_json(format_number(*c.witness_distance)) : ordered_json(nullptr);
  j["schedule"] = epsilon_entries_json(c.entries);
  return j;
}

inline ordered_json cauchy_json(const CauchyReport& c) {
  ordered_json j;
  j["kind"] = "cauchy";
  j["horizon"] = std::to_string(c.horizon);
  j["verdict"] = to_string(c.verdict);
  j["derived_from_limit"] = c.derived_from_limit;
  if (c.witness) {
    ordered_json w;
    w["n"] = std::to_string(c.witness->n);
    w["m"] = std::to_string(c.witness->m);
    w["distance"] = format_number(c.witness->distance);
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  j["horizon_diameter"] = format_number(c.horizon_diameter);
  j["schedule"] = epsilon_entries_json(c.entries);
  return j;
}

inline ordered_json continuity_json(const ContinuityReport& r) {
  ordered_json j;
  j["kind"] = "continuity";
  j["tail_value"] = format_number(r.tail_value);
  j["limit_distance"] = format_number(r.limit_distance);
  j["discrepancy"] = format_number(r.discrepancy);
  j["tail_oscillation"] = format_number(r.tail_oscillation);
  j["verdict"] = r.verdict == ContinuityVerdict::discontinuous ? "discontinuous" : "continuous-evidence";
  j["limit_x"] = convergence_json(r.cert_x);
  j["limit_y"] = convergence_json(r.cert_y);
  return j;
}

inline ordered_json ball_json(const BallOpennessReport& r) {
  ordered_json j;
  j["kind"] = "ball-openness";
  j["open_evidence"] = r.open_evidence;
  ordered_json arr = ordered_json::array();
  for (const BallEpsilonProbe& e : r.per_eps) {
    ordered_json je;
    je["eps"] = format_number(e.eps);
    je["escaped"] = e.escaped;
    if (e.escaped) {
      je["probe"] = format_number(e.probe);
      je["d_interior"] = format_number(e.d_interior);
      je["d_center"] = format_number(e.d_center);
    }
    arr.push_back(je);
  }
  j["per_eps"] = arr;
  j["witness"] = r.witness ? ordered_json(format_number(r.witness->probe)) : ordered_json(nullptr);
  return j;
}

/// The pinned report skeleton: every top-level key is always present, in
/// this order, with null for sections a command does not produce.
inline ordered_json assemble_report(ordered_json input, const std::string& policy, ordered_json classification,
                                    ordered_json profile, ordered_json witnesses, ordered_json certificates) {
  ordered_json j;
  j["input"] = std::move(input);
  j["policy"] = policy;
  j["classification"] = std::move(classification);
  j["profile"] = std::move(profile);
  j["witnesses"] = std::move(witnesses);
  j["certificates"] = std::move(certificates);
  return j;
}

inline std::string dump_report(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace powerdist
