#pragma once

#include "framelift/coorbit.hpp"
#include "framelift/frames.hpp"
#include "framelift/matalg.hpp"
#include "framelift/multipliers.hpp"
#include "framelift/series.hpp"
#include "framelift/weights.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace framelift {

using json = nlohmann::json;

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed serialized input.
class FormatError : public std::invalid_argument {
 public:
  explicit FormatError(const std::string& what) : std::invalid_argument(what) {}
};

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

/// Write to a sibling temporary, then rename over the target.
inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot rename onto " + path.string());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

/// Non-finite doubles become null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const Exponent& p) { return p.is_infinite() ? json("inf") : json(p.value()); }

inline Exponent exponent_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return Exponent::infinity();
    throw FormatError("exponent: unknown string '" + s + "'");
  }
  if (!j.is_number()) throw FormatError("exponent: expected a number >= 1 or \"inf\"");
  const double p = j.get<double>();
  if (!(p >= 1.0) || !std::isfinite(p)) throw FormatError("exponent: p must be >= 1");
  return Exponent(p);
}

// ---------------------------------------------------------------------------
// Index sets and weights
// ---------------------------------------------------------------------------

namespace detail {

inline json points_json(const RMat& pts) {
  json out = json::array();
  for (Index k = 0; k < pts.rows(); ++k) {
    json row = json::array();
    for (Index j = 0; j < pts.cols(); ++j) row.push_back(pts(k, j));
    out.push_back(row);
  }
  return out;
}

inline RMat points_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw FormatError("points: expected a nonempty array of coordinate arrays");
  const Index n = static_cast<Index>(j.size());
  const Index dim = j[0].is_array() ? static_cast<Index>(j[0].size()) : 1;
  if (dim < 1) throw FormatError("points: empty coordinate");
  RMat pts(n, dim);
  for (Index k = 0; k < n; ++k) {
    const json& row = j[k];
    if (row.is_number()) {
      if (dim != 1) throw FormatError("points: mixed coordinate dimensions");
      pts(k, 0) = row.get<double>();
      continue;
    }
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) throw FormatError("points: mixed coordinate dimensions");
    for (Index i = 0; i < dim; ++i) {
      if (!row[i].is_number()) throw FormatError("points: coordinates must be numbers");
      pts(k, i) = row[i].get<double>();
    }
  }
  return pts;
}

}  // namespace detail

inline json to_json(const IndexSet& idx) {
  json j;
  j["points"] = detail::points_json(idx.points());
  j["metric"] = idx.metric() == MetricKind::torus ? "torus" : "euclidean";
  if (idx.metric() == MetricKind::torus) {
    json per = json::array();
    for (Index i = 0; i < idx.period().size(); ++i) per.push_back(idx.period()(i));
    j["period"] = per;
  }
  j["scale"] = idx.scale();
  return j;
}

inline IndexSet index_set_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("index set: expected an object");
  if (!j.contains("points")) throw FormatError("index set: missing 'points'");
  RMat pts = detail::points_from_json(j.at("points"));
  const std::string metric = j.value("metric", std::string("euclidean"));
  const double scale = j.value("scale", 1.0);
  if (metric == "euclidean") return IndexSet::euclidean(std::move(pts), scale);
  if (metric != "torus") throw FormatError("index set: metric must be 'torus' or 'euclidean'");
  if (!j.contains("period")) throw FormatError("index set: torus metric needs 'period'");
  const json& per = j.at("period");
  RVec period(pts.cols());
  if (per.is_number()) {
    period.setConstant(per.get<double>());
  } else if (per.is_array() && static_cast<Index>(per.size()) == pts.cols()) {
    for (Index i = 0; i < pts.cols(); ++i) period(i) = per[i].get<double>();
  } else {
    throw FormatError("index set: 'period' must be a number or one value per axis");
  }
  return IndexSet::torus(std::move(pts), std::move(period), scale);
}

inline json to_json(const Weight& w) {
  json j = w.index_set() ? to_json(*w.index_set()) : json::object();
  json vals = json::array();
  for (Index k = 0; k < w.size(); ++k) vals.push_back(w[k]);
  j["values"] = vals;
  return j;
}

/// { "points": [[..]], "metric": "torus"|"euclidean", "values": [..], "period": .., "scale": .. }
inline Weight weight_from_json(const json& j) {
  if (!j.is_object() || !j.contains("values") || !j.at("values").is_array())
    throw FormatError("weight: expected an object with a 'values' array");
  const json& v = j.at("values");
  RVec vals(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) throw FormatError("weight: values must be numbers");
    vals(static_cast<Index>(k)) = v[k].get<double>();
  }
  std::shared_ptr<const IndexSet> idx;
  if (j.contains("points")) idx = std::make_shared<const IndexSet>(index_set_from_json(j));
  return Weight(vals, idx);
}

// ---------------------------------------------------------------------------
// Matrices and frames
// ---------------------------------------------------------------------------

/// { "rows", "cols", "real": [...], "imag": [...] }, row-major.
inline json to_json(const Mat& a) {
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) {
      re.push_back(a(i, k).real());
      im.push_back(a(i, k).imag());
    }
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"real", re}, {"imag", im}};
}

inline Mat matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("real"))
    throw FormatError("matrix: expected rows, cols, real (and optionally imag)");
  const Index r = j.at("rows").get<Index>();
  const Index c = j.at("cols").get<Index>();
  if (r < 0 || c < 0) throw FormatError("matrix: negative dimensions");
  const json& re = j.at("real");
  const json im = j.value("imag", json::array());
  if (static_cast<Index>(re.size()) != r * c || (!im.empty() && static_cast<Index>(im.size()) != r * c))
    throw FormatError("matrix: entry count differs from rows * cols");
  Mat a(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index k = 0; k < c; ++k) {
      const std::size_t at = static_cast<std::size_t>(i * c + k);
      a(i, k) = cplx(re[at].get<double>(), im.empty() ? 0.0 : im[at].get<double>());
    }
  return a;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_part(const Mat& a, bool imag) {
  std::string out;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index k = 0; k < a.cols(); ++k) {
      if (k) out += ',';
      out += format_double(imag ? a(i, k).imag() : a(i, k).real());
    }
    out += '\n';
  }
  return out;
}

inline RMat parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw FormatError("csv: not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw FormatError("csv: ragged rows");
    rows.push_back(std::move(row));
  }
  RMat m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) m(i, k) = rows[i][k];
  return m;
}

}  // namespace detail

/// Writes <prefix>_real.csv and <prefix>_imag.csv.
inline void write_matrix_csv(const std::filesystem::path& prefix, const Mat& a) {
  atomic_write(prefix.string() + "_real.csv", detail::csv_part(a, false));
  atomic_write(prefix.string() + "_imag.csv", detail::csv_part(a, true));
}

inline Mat read_matrix_csv(const std::filesystem::path& prefix) {
  const RMat re = detail::parse_csv(read_file(prefix.string() + "_real.csv"));
  const RMat im = detail::parse_csv(read_file(prefix.string() + "_imag.csv"));
  if (re.rows() != im.rows() || re.cols() != im.cols()) throw FormatError("csv: real and imaginary shapes differ");
  Mat a(re.rows(), re.cols());
  for (Index i = 0; i < re.rows(); ++i)
    for (Index k = 0; k < re.cols(); ++k) a(i, k) = cplx(re(i, k), im(i, k));
  return a;
}

/// { "dim", "count", "vectors": [[re0, im0, re1, im1, ...], ...], "index_set": {...} }
inline json to_json(const Frame& f) {
  json vecs = json::array();
  for (Index k = 0; k < f.count(); ++k) {
    json v = json::array();
    for (Index i = 0; i < f.dim(); ++i) {
      v.push_back(f.vectors()(i, k).real());
      v.push_back(f.vectors()(i, k).imag());
    }
    vecs.push_back(v);
  }
  return {{"dim", f.dim()}, {"count", f.count()}, {"vectors", vecs}, {"index_set", to_json(f.index_set())}};
}

inline Mat frame_vectors_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("vectors")) throw FormatError("frame: expected dim and vectors");
  const Index d = j.at("dim").get<Index>();
  const json& vecs = j.at("vectors");
  if (d < 1 || !vecs.is_array() || vecs.empty()) throw FormatError("frame: empty frame");
  if (j.contains("count") && j.at("count").get<Index>() != static_cast<Index>(vecs.size()))
    throw FormatError("frame: count differs from number of vectors");
  Mat v(d, vecs.size());
  for (std::size_t k = 0; k < vecs.size(); ++k) {
    if (!vecs[k].is_array() || static_cast<Index>(vecs[k].size()) != 2 * d)
      throw FormatError("frame: each vector needs 2*dim interleaved entries");
    for (Index i = 0; i < d; ++i)
      v(i, static_cast<Index>(k)) = cplx(vecs[k][2 * i].get<double>(), vecs[k][2 * i + 1].get<double>());
  }
  return v;
}

inline Frame frame_from_json(const json& j, double frame_tol = Tolerances{}.frame) {
  Mat v = frame_vectors_from_json(j);
  std::shared_ptr<const IndexSet> idx;
  if (j.contains("index_set")) idx = std::make_shared<const IndexSet>(index_set_from_json(j.at("index_set")));
  return Frame(std::move(v), idx, frame_tol);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json to_json(const DecayProfile& d) {
  return {{"s", d.s}, {"constant", number(d.constant)}, {"rows", d.rows}, {"cols", d.cols},
          {"argmax", {d.argmax_row, d.argmax_col}}};
}

inline json to_json(const NormBracket& b) {
  return {{"lower", number(b.lower)}, {"upper", number(b.upper)}, {"exact", b.exact}, {"width", number(b.width())}};
}

inline json to_json(const TwoSidedConstants& c) {
  return {{"lower", number(c.lower)},
          {"upper", number(c.upper)},
          {"lower_sampled", number(c.lower_sampled)},
          {"upper_sampled", number(c.upper_sampled)},
          {"lower_bracket_width", number(c.lower_width())},
          {"upper_bracket_width", number(c.upper_width())},
          {"condition", number(c.condition())},
          {"exact", c.exact}};
}

inline json to_json(const WeightedInvertibilityReport& r) {
  json norms = json::array();
  for (const auto& e : r.norms)
    norms.push_back({{"weight", e.weight_label}, {"p", to_json(e.p)}, {"norm", to_json(e.norm_b)},
                     {"inverse_norm", to_json(e.norm_inverse)}});
  return {{"precondition_ok", r.precondition_ok},
          {"precondition_message", r.precondition_message},
          {"sigma_ratio", number(r.sigma_ratio)},
          {"conjugated_decay", to_json(r.conjugated_decay)},
          {"residual_left", number(r.residual_cb)},
          {"residual_right", number(r.residual_bc)},
          {"norms", norms}};
}

inline json to_json(const FrameBounds& b) { return {{"lower", number(b.lower)}, {"upper", number(b.upper)}}; }

inline json to_json(const LiftingReport& r) {
  json hyp_mod = json::array();
  for (const auto& m : r.moderateness)
    hyp_mod.push_back({{"weight", m.name}, {"constant", number(m.constant)}, {"flagged", m.flagged}});
  json decay = json::array();
  for (const auto& d : r.decay) decay.push_back({{"matrix", d.name}, {"profile", to_json(d.profile)}});
  json per_p = json::array();
  for (const auto& e : r.per_p)
    per_p.push_back({{"p", to_json(e.p)}, {"weight", e.weight_label}, {"constants", to_json(e.constants)}});
  return {{"passed", r.passed},
          {"failed_step", r.failed_step},
          {"failure_message", r.failure_message},
          {"dim", r.dim},
          {"count", r.count},
          {"frame_bounds", to_json(r.frame_bounds)},
          {"s", r.s},
          {"seed", r.seed},
          {"samples", r.samples},
          {"hypotheses",
           {{"moderateness_profile", r.moderateness_profile}, {"moderateness", hyp_mod}, {"decay", decay}}},
          {"steps",
           {{"composition_residual", number(r.composition_residual)},
            {"b_sigma_ratio_l2_sqrt_mu", number(r.b_sigma_ratio)},
            {"b_invertible", r.b_invertible},
            {"conjugation_residual", number(r.conjugation_residual)},
            {"forward", to_json(r.forward)},
            {"backward", to_json(r.backward)}}},
          {"verdicts",
           {{"inverse_mu_after_mu_invertible", r.forward_composition_invertible},
            {"mu_after_inverse_mu_invertible", r.backward_composition_invertible},
            {"agree", r.composition_verdicts_agree}}},
          {"per_p", per_p},
          {"lower", number(r.lower)},
          {"upper", number(r.upper)},
          {"condition", number(r.condition)},
          {"notes", r.notes}};
}

inline json to_json(const SeriesEntry& e) {
  json meta = json::object();
  for (const auto& kv : e.metadata) meta[kv.first] = number(kv.second);
  json j = {{"size", e.size}, {"label", e.size_label}, {"ok", e.ok}, {"failure", e.failure}, {"metadata", meta}};
  j["report"] = e.report ? to_json(*e.report) : json(nullptr);
  return j;
}

inline json to_json(const ExperimentSeries& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back(to_json(e));
  json growth = json::array();
  for (double g : s.growth) growth.push_back(number(g));
  return {{"kind", s.kind},       {"mu", s.mu_label},   {"m", s.m_label},           {"max_growth", s.max_growth},
          {"entries", entries},  {"growth", growth},   {"uniform", s.uniform()}};
}

inline json to_json(const GramIdentityReport& r) {
  json res = json::object();
  for (const auto& x : r.residuals) res[x.name] = number(x.value);
  return {{"residuals", res}, {"max_residual", number(r.max())}, {"projection_trace", r.projection_trace}};
}

inline json to_json(const Extremes& e) { return {{"min", number(e.min)}, {"max", number(e.max)}}; }

inline json to_json(const CoercivityReport& r) {
  return {{"draws", r.draws},
          {"identity_residual", number(r.identity_residual)},
          {"imaginary_part", number(r.imaginary_part)},
          {"ambient_constants", to_json(r.ambient)},
          {"coorbit_constants", to_json(r.coorbit)},
          {"sampled_coorbit", to_json(r.sampled_coorbit)},
          {"mapping_lower", number(r.mapping_lower)},
          {"mapping_upper", number(r.mapping_upper)},
          {"injective", r.injective},
          {"surjective", r.surjective}};
}

inline json to_json(const SpectralInvarianceReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"p", to_json(e.p)}, {"weight", e.weight_label}, {"constants", to_json(e.constants)},
                       {"invertible", e.invertible}});
  return {{"operator_sigma_ratio", number(r.operator_sigma_ratio)},
          {"galerkin_decay", to_json(r.galerkin_decay)},
          {"entries", entries},
          {"verdicts_agree", r.verdicts_agree}};
}

// ---------------------------------------------------------------------------
// Scaling tables
// ---------------------------------------------------------------------------

/// size,p,weight,lower,upper,condition,verdict; one row per (size, p).
inline std::string scaling_csv(const ExperimentSeries& s, const std::vector<Exponent>& ps) {
  std::string out = "size,p,weight,lower,upper,condition,verdict\n";
  auto num = [](double v) { return std::isfinite(v) ? detail::format_double(v) : std::string(); };
  for (const auto& e : s.entries) {
    if (e.report && !e.report->per_p.empty()) {
      for (const auto& r : e.report->per_p) {
        const bool ok = e.ok && r.constants.isomorphism();
        out += detail::format_double(e.size) + "," + r.p.label() + "," + r.weight_label + "," + num(r.constants.lower) +
               "," + num(r.constants.upper) + "," + num(r.constants.condition()) + "," + (ok ? "pass" : "fail") + "\n";
      }
    } else {
      for (const auto& p : ps) out += detail::format_double(e.size) + "," + p.label() + ",m,,,,fail\n";
    }
  }
  return out;
}

/// Whitespace-separated columns for gnuplot; failed sizes carry NaN.
inline std::string scaling_dat(const ExperimentSeries& s) {
  std::string out = "# " + s.kind + " scaling: size lower upper condition (p = 2 when available)\n";
  for (const auto& e : s.entries) {
    const bool have = e.ok && e.report;
    out += detail::format_double(e.size) + " " + (have ? detail::format_double(e.report->lower) : "NaN") + " " +
           (have ? detail::format_double(e.report->upper) : "NaN") + " " +
           (have ? detail::format_double(e.report->condition) : "NaN") + "\n";
  }
  return out;
}

}  // namespace framelift
