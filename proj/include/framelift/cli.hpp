#pragma once

#include "framelift/coorbit.hpp"
#include "framelift/fock.hpp"
#include "framelift/frames.hpp"
#include "framelift/gabor.hpp"
#include "framelift/io.hpp"
#include "framelift/multipliers.hpp"
#include "framelift/series.hpp"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace framelift::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Schema violation; maps to exit code 2.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

enum class Kind { gabor, fock, custom_frame };

struct FrameSource {
  enum class Type { onb, random, tight, file, inline_json };
  Type type = Type::onb;
  Index dim = 0;
  Index count = 0;
  double bound = 1.0;
  std::string path;
  json inline_frame;
};

struct ExperimentConfig {
  Kind kind = Kind::gabor;
  std::uint64_t seed = 1;
  std::string output;
  Tolerances tol;
  std::vector<Exponent> ps{Exponent(2.0)};
  double s = 4.0;
  int samples = 256;
  double max_growth = 1.5;
  int threads = 1;
  WeightSpec mu = WeightSpec::polynomial_of(2.0);
  WeightSpec m = WeightSpec::constant_of(1.0);
  // gabor
  std::vector<Index> ns{16, 32, 64};
  GaborLatticeRule lattice;
  TFScale scale = TFScale::natural;
  // fock
  double delta = 0.8;
  std::vector<double> radii{1.5, 2.0, 2.5};
  double jitter = 0.0;
  std::uint64_t lattice_seed = 1;
  double frame_space_factor = 0.75;
  // custom-frame
  FrameSource frame;
  std::filesystem::path base_dir;  // for relative frame paths
};

inline const char* kind_name(Kind k) {
  switch (k) {
    case Kind::gabor: return "gabor";
    case Kind::fock: return "fock";
    case Kind::custom_frame: return "custom-frame";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

inline const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return j.at(key);
}

inline double get_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
  return v;
}

inline double positive(const json& j, const std::string& what) {
  const double v = get_number(j, what);
  if (!(v > 0)) throw ConfigError(what + " must be positive");
  return v;
}

inline Index positive_int(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ConfigError(what + " must be an integer");
  const auto v = j.get<std::int64_t>();
  if (v < 1) throw ConfigError(what + " must be a positive integer");
  return static_cast<Index>(v);
}

inline WeightSpec weight_spec(const json& j, const std::string& what) {
  if (j.is_number()) return WeightSpec::constant_of(positive(j, what));
  if (!j.is_object()) throw ConfigError(what + " must be an object or a positive number");
  const std::string type = j.contains("type") && j.at("type").is_string() ? j.at("type").get<std::string>() : "";
  WeightSpec w;
  if (type == "constant") {
    w.kind = WeightSpec::Kind::constant;
    w.c = j.contains("value") ? positive(j.at("value"), what + ".value") : 1.0;
  } else if (type == "polynomial") {
    w.kind = WeightSpec::Kind::polynomial;
    w.t = get_number(need(j, "t", what), what + ".t");
  } else if (type == "subexponential") {
    w.kind = WeightSpec::Kind::subexponential;
    w.alpha = get_number(need(j, "alpha", what), what + ".alpha");
    w.beta = get_number(need(j, "beta", what), what + ".beta");
    if (!(w.beta > 0 && w.beta <= 1)) throw ConfigError(what + ".beta must lie in (0, 1]");
  } else if (type == "values") {
    w.kind = WeightSpec::Kind::values;
    const json& v = need(j, "values", what);
    if (!v.is_array() || v.empty()) throw ConfigError(what + ".values must be a nonempty array");
    w.values.resize(v.size());
    // Nonpositive values are accepted here; the pipeline reports them.
    for (std::size_t k = 0; k < v.size(); ++k) w.values(k) = get_number(v[k], what + ".values[]");
  } else {
    throw ConfigError(what + ".type must be constant, polynomial, subexponential or values");
  }
  return w;
}

inline std::vector<Exponent> exponents(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("ps must be a nonempty array");
  std::vector<Exponent> out;
  for (const auto& x : j) {
    try {
      out.push_back(exponent_from_json(x));
    } catch (const std::exception& e) {
      throw ConfigError(std::string("ps: ") + e.what());
    }
  }
  return out;
}

inline FrameSource frame_source(const json& j) {
  if (!j.is_object()) throw ConfigError("frame must be an object");
  const std::string type = j.contains("type") && j.at("type").is_string() ? j.at("type").get<std::string>() : "";
  FrameSource f;
  if (type == "onb") {
    f.type = FrameSource::Type::onb;
    f.dim = positive_int(need(j, "dim", "frame"), "frame.dim");
    f.count = f.dim;
  } else if (type == "random" || type == "tight") {
    f.type = type == "random" ? FrameSource::Type::random : FrameSource::Type::tight;
    f.dim = positive_int(need(j, "dim", "frame"), "frame.dim");
    f.count = positive_int(need(j, "count", "frame"), "frame.count");
    if (f.count < f.dim) throw ConfigError("frame.count must be at least frame.dim");
    if (j.contains("bound")) f.bound = positive(j.at("bound"), "frame.bound");
  } else if (type == "file") {
    f.type = FrameSource::Type::file;
    const json& p = need(j, "path", "frame");
    if (!p.is_string()) throw ConfigError("frame.path must be a string");
    f.path = p.get<std::string>();
  } else if (type == "inline") {
    f.type = FrameSource::Type::inline_json;
    f.inline_frame = j;
  } else {
    throw ConfigError("frame.type must be onb, random, tight, file or inline");
  }
  return f;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig c;
  c.base_dir = base_dir;
  if (j.contains("schema_version")) {
    if (!j.at("schema_version").is_number_integer() || j.at("schema_version").get<int>() != kSchemaVersion)
      throw ConfigError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
  }
  const json& kind = need(j, "kind", "config");
  const std::string k = kind.is_string() ? kind.get<std::string>() : "";
  if (k == "gabor") c.kind = Kind::gabor;
  else if (k == "fock") c.kind = Kind::fock;
  else if (k == "custom-frame") c.kind = Kind::custom_frame;
  else throw ConfigError("kind must be gabor, fock or custom-frame");

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer() || j.at("seed").get<std::int64_t>() < 0)
      throw ConfigError("seed must be a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) throw ConfigError("output must be a string");
    c.output = j.at("output").get<std::string>();
  }
  if (j.contains("tolerances")) {
    const json& t = j.at("tolerances");
    if (!t.is_object()) throw ConfigError("tolerances must be an object");
    if (t.contains("frame")) c.tol.frame = positive(t.at("frame"), "tolerances.frame");
    if (t.contains("rank")) c.tol.rank = positive(t.at("rank"), "tolerances.rank");
    if (t.contains("invertible")) c.tol.invertible = positive(t.at("invertible"), "tolerances.invertible");
    if (t.contains("identity")) c.tol.identity = positive(t.at("identity"), "tolerances.identity");
  }
  if (j.contains("ps")) c.ps = exponents(j.at("ps"));
  if (j.contains("s")) c.s = positive(j.at("s"), "s");
  if (j.contains("samples")) c.samples = static_cast<int>(positive_int(j.at("samples"), "samples"));
  if (j.contains("max_growth")) c.max_growth = positive(j.at("max_growth"), "max_growth");
  if (j.contains("threads")) c.threads = static_cast<int>(positive_int(j.at("threads"), "threads"));
  if (j.contains("mu")) c.mu = weight_spec(j.at("mu"), "mu");
  if (j.contains("m")) c.m = weight_spec(j.at("m"), "m");
  if (c.m.kind == WeightSpec::Kind::values)
    for (Index i = 0; i < c.m.values.size(); ++i)
      if (!(c.m.values(i) > 0)) throw ConfigError("m.values must be positive");

  switch (c.kind) {
    case Kind::gabor: {
      if (j.contains("Ns")) {
        const json& ns = j.at("Ns");
        if (!ns.is_array() || ns.empty()) throw ConfigError("Ns must be a nonempty array");
        c.ns.clear();
        for (const auto& n : ns) {
          const Index v = positive_int(n, "Ns[]");
          if (v < 4) throw ConfigError("Ns entries must be at least 4");
          c.ns.push_back(v);
        }
      }
      const bool steps = j.contains("a") || j.contains("b");
      const bool ratios = j.contains("a_ratio") || j.contains("b_ratio");
      if (steps + ratios + j.contains("redundancy") > 1)
        throw ConfigError("give only one of (a, b), (a_ratio, b_ratio) or redundancy");
      if (steps) {
        c.lattice.mode = GaborLatticeRule::Mode::steps;
        c.lattice.a = positive_int(need(j, "a", "config"), "a");
        c.lattice.b = positive_int(need(j, "b", "config"), "b");
      } else if (ratios) {
        c.lattice.mode = GaborLatticeRule::Mode::ratios;
        c.lattice.a_ratio = positive_int(need(j, "a_ratio", "config"), "a_ratio");
        c.lattice.b_ratio = positive_int(need(j, "b_ratio", "config"), "b_ratio");
      } else if (j.contains("redundancy")) {
        c.lattice.redundancy = positive_int(j.at("redundancy"), "redundancy");
      }
      for (Index n : c.ns) {
        try {
          const auto ab = c.lattice.steps_for(n);
          if (n % ab.first != 0 || n % ab.second != 0) throw std::invalid_argument("steps must divide N");
        } catch (const std::invalid_argument& e) {
          throw ConfigError("lattice for N=" + std::to_string(n) + ": " + e.what());
        }
      }
      if (j.contains("metric_scale")) {
        const std::string sc = j.at("metric_scale").is_string() ? j.at("metric_scale").get<std::string>() : "";
        if (sc == "natural") c.scale = TFScale::natural;
        else if (sc == "raw") c.scale = TFScale::raw;
        else throw ConfigError("metric_scale must be natural or raw");
      }
      break;
    }
    case Kind::fock: {
      if (j.contains("delta")) c.delta = positive(j.at("delta"), "delta");
      if (j.contains("R")) {
        const json& r = j.at("R");
        c.radii.clear();
        if (r.is_array()) {
          if (r.empty()) throw ConfigError("R must be nonempty");
          for (const auto& x : r) c.radii.push_back(positive(x, "R[]"));
        } else {
          c.radii.push_back(positive(r, "R"));
        }
      }
      if (j.contains("jitter")) {
        c.jitter = get_number(j.at("jitter"), "jitter");
        if (!(c.jitter >= 0 && c.jitter < 1)) throw ConfigError("jitter must lie in [0, 1)");
      }
      if (j.contains("lattice_seed")) {
        if (!j.at("lattice_seed").is_number_integer()) throw ConfigError("lattice_seed must be an integer");
        c.lattice_seed = j.at("lattice_seed").get<std::uint64_t>();
      }
      if (j.contains("frame_space_factor")) c.frame_space_factor = positive(j.at("frame_space_factor"), "frame_space_factor");
      break;
    }
    case Kind::custom_frame: c.frame = frame_source(need(j, "frame", "config")); break;
  }
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    return parse_config(j, path.parent_path());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config has a wrong value type: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Frames from a config
// ---------------------------------------------------------------------------

struct LabeledFrame {
  std::string label;
  double size = 0.0;
  std::optional<Frame> frame;  // empty when the system is not a frame
  std::string failure;
  FrameBounds bounds;
};

inline Frame custom_frame(const ExperimentConfig& c) {
  Rng rng(c.seed);
  const FrameSource& f = c.frame;
  try {
    switch (f.type) {
      case FrameSource::Type::onb: return Frame::orthonormal_basis(f.dim);
      case FrameSource::Type::random: return Frame(rng.complex_matrix(f.dim, f.count), nullptr, c.tol.frame);
      case FrameSource::Type::tight: return tight_frame(f.dim, f.count, f.bound, rng);
      case FrameSource::Type::file: {
        std::filesystem::path p = f.path;
        if (p.is_relative() && !c.base_dir.empty()) p = c.base_dir / p;
        return frame_from_json(json::parse(read_file(p)), c.tol.frame);
      }
      case FrameSource::Type::inline_json: return frame_from_json(f.inline_frame, c.tol.frame);
    }
  } catch (const NotAFrameError&) {
    throw;
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("frame: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("frame: ") + e.what());
  }
  throw ConfigError("frame: unknown source");
}

inline std::vector<LabeledFrame> config_frames(const ExperimentConfig& c) {
  std::vector<LabeledFrame> out;
  auto attempt = [&](LabeledFrame lf, const Mat& v, std::shared_ptr<const IndexSet> idx) {
    lf.bounds = frame_bounds(v);
    if (lf.bounds.is_frame(c.tol.frame)) lf.frame.emplace(v, std::move(idx), c.tol.frame);
    else lf.failure = "not a frame: lower frame bound " + framelift::detail::format_double(lf.bounds.lower);
    out.push_back(std::move(lf));
  };
  switch (c.kind) {
    case Kind::gabor:
      for (Index n : c.ns) {
        const auto [a, b] = c.lattice.steps_for(n);
        const TFLattice lat(n, a, b, c.scale);
        attempt({"N" + std::to_string(n), double(n)}, gabor_vectors(gaussian_window(n), lat), lat.index_set());
      }
      break;
    case Kind::fock:
      for (double r : c.radii) {
        const FockLattice lat = square_lattice(c.delta, r, c.jitter, c.lattice_seed);
        const TruncatedFock t = embed_truncated(lat, frame_space_dimension(r, c.frame_space_factor) - 1);
        attempt({"R" + framelift::detail::format_double(r), r}, t.coefficients, t.index);
      }
      break;
    case Kind::custom_frame: {
      LabeledFrame lf{"frame", 0.0};
      try {
        Frame f = custom_frame(c);
        lf.size = static_cast<double>(f.count());
        lf.bounds = f.bounds();
        lf.frame.emplace(std::move(f));
      } catch (const NotAFrameError& e) {
        lf.failure = e.what();
        lf.bounds = {e.lower(), e.upper()};
      }
      out.push_back(std::move(lf));
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline json config_echo(const ExperimentConfig& c) {
  json ps = json::array();
  for (const auto& p : c.ps) ps.push_back(to_json(p));
  return {{"schema_version", kSchemaVersion},
          {"kind", kind_name(c.kind)},
          {"seed", c.seed},
          {"tolerances",
           {{"frame", c.tol.frame}, {"rank", c.tol.rank}, {"invertible", c.tol.invertible}, {"identity", c.tol.identity}}},
          {"ps", ps},
          {"s", c.s},
          {"samples", c.samples},
          {"mu", c.mu.label()},
          {"m", c.m.label()}};
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// identities.json; exit 0 iff every residual is below tolerance.
inline int cmd_verify(const ExperimentConfig& c, const std::filesystem::path& out_dir, std::ostream& log = std::cerr) {
  ensure_directory(out_dir);
  const auto frames = config_frames(c);
  json cases = json::array();
  bool all_ok = true;
  for (const auto& lf : frames) {
    json cj = {{"label", lf.label}, {"frame_bounds", to_json(lf.bounds)}};
    if (!lf.frame) {
      cj["ok"] = false;
      cj["failure"] = lf.failure;
      all_ok = false;
      cases.push_back(cj);
      log << lf.label << ": " << lf.failure << "\n";
      continue;
    }
    const Frame& psi = *lf.frame;
    Rng rng(c.seed);
    bool ok = true;
    const GramIdentityReport gi = gram_identities_check(psi, rng, c.tol);
    ok = ok && gi.ok(c.tol.identity);
    cj["gram_identities"] = to_json(gi);

    const Mat id = Mat::Identity(psi.count(), psi.count());
    const double left_inverse =
        relative_residual(op_from_matrix(galerkin_matrix(psi.frame_operator(), psi.dual_vectors(), psi.dual_vectors()), psi, psi),
                          psi.frame_operator());
    cj["galerkin_left_inverse"] = number(left_inverse);
    ok = ok && left_inverse < c.tol.identity;

    const RVec mu_vals = c.mu.resolve_values(psi.index_ptr());
    bool mu_positive = (mu_vals.array() > 0).all();
    if (mu_positive) {
      const Weight mu(mu_vals, psi.index_ptr());
      const CoercivityReport co = coercivity_check(psi, mu, rng, 100, c.tol);
      cj["coercivity"] = to_json(co);
      ok = ok && co.identity_residual < c.tol.identity && co.injective;
      const Mat b = galerkin_matrix(multiplier(mu.reciprocal(), psi).matrix * multiplier(mu, psi).matrix, psi.vectors(),
                                    psi.vectors());
      const double comp = relative_residual(b, psi.gram() * conjugate(psi.gram(), mu.reciprocal()) * psi.gram());
      const Mat p = coefficient_projection(psi);
      const Mat bb = b + id - p;
      const double conj_res = relative_residual(
          conjugate(bb, mu), conjugate(psi.gram(), mu) * psi.gram() * conjugate(psi.gram(), mu) + id - conjugate(p, mu));
      cj["composition_residual"] = number(comp);
      cj["conjugation_residual"] = number(conj_res);
      ok = ok && comp < c.tol.identity && conj_res < c.tol.identity;
    } else {
      cj["coercivity"] = {{"failure", "mu > 0 violated"}};
      ok = false;
    }

    const Weight m = c.m.resolve(psi.index_ptr());
    const SpectralInvarianceReport si =
        spectral_invariance_suite(psi.frame_operator(), psi, {{"m", m}}, c.ps, c.s, rng, c.samples, c.tol);
    cj["spectral_invariance"] = to_json(si);
    ok = ok && si.verdicts_agree && si.invertible_everywhere();

    json inv0 = json::object();
    for (SlotConvention sc : kAllSlotConventions) {
      const InvertibilityVerdict v = compare_invertibility(psi.frame_operator(), psi, sc, c.tol);
      inv0[to_string(sc)] = {{"operator_invertible", v.operator_invertible},
                             {"matrix_invertible", v.matrix_invertible},
                             {"matrix_sigma_ratio", number(v.matrix_sigma_ratio)}};
      ok = ok && v.agree();
    }
    cj["augmented_invertibility"] = inv0;
    cj["ok"] = ok;
    all_ok = all_ok && ok;
    cases.push_back(cj);
    log << lf.label << ": " << (ok ? "ok" : "FAILED") << " (max gram residual " << gi.max() << ")\n";
  }
  json report = {{"config", config_echo(c)}, {"cases", cases}, {"ok", all_ok}};
  atomic_write(out_dir / "identities.json", dump(report));
  return all_ok ? kOk : kFailure;
}

inline LiftingOptions lifting_options(const ExperimentConfig& c) {
  LiftingOptions o;
  o.ps = c.ps;
  o.s = c.s;
  o.samples = c.samples;
  o.seed = c.seed;
  o.tol = c.tol;
  return o;
}

inline ExperimentSeries run_series(const ExperimentConfig& c) {
  switch (c.kind) {
    case Kind::gabor: {
      GaborExperiment g;
      g.ns = c.ns;
      g.lattice = c.lattice;
      g.scale = c.scale;
      g.mu = c.mu;
      g.m = c.m;
      g.options = lifting_options(c);
      g.max_growth = c.max_growth;
      g.threads = c.threads;
      return gabor_lifting_experiment(g);
    }
    case Kind::fock: {
      FockExperiment f;
      f.delta = c.delta;
      f.radii = c.radii;
      f.jitter = c.jitter;
      f.lattice_seed = c.lattice_seed;
      f.frame_space_factor = c.frame_space_factor;
      f.mu = c.mu;
      f.m = c.m;
      f.options = lifting_options(c);
      f.max_growth = c.max_growth;
      f.threads = c.threads;
      return fock_lifting_experiment(f);
    }
    case Kind::custom_frame: {
      ExperimentSeries s;
      s.kind = "custom-frame";
      s.mu_label = c.mu.label();
      s.m_label = c.m.label();
      s.max_growth = c.max_growth;
      SeriesEntry e;
      e.size_label = "frame";
      try {
        const Frame psi = custom_frame(c);
        e.size = static_cast<double>(psi.count());
        e.metadata = {{"dim", double(psi.dim())}, {"count", double(psi.count())}};
        e.report = lifting_theorem_pipeline(psi, c.mu.resolve_values(psi.index_ptr()), c.m.resolve(psi.index_ptr()),
                                            lifting_options(c));
        e.ok = e.report->passed;
        if (!e.ok) e.failure = "step " + e.report->failed_step + ": " + e.report->failure_message;
      } catch (const NotAFrameError& ex) {
        e.failure = ex.what();
      }
      s.entries.push_back(std::move(e));
      s.compute_growth();
      return s;
    }
  }
  throw std::logic_error("run_series: unknown kind");
}

inline std::string file_label(const SeriesEntry& e) {
  std::string s;
  for (char ch : e.size_label)
    if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.') s += ch;
  return s;
}

/// lift_<size>.json per size, lift_series.json, scaling.csv, scaling.dat.
/// Exit 1 only when every size fails.
inline int cmd_lift(const ExperimentConfig& c, const std::filesystem::path& out_dir, std::ostream& log = std::cerr) {
  ensure_directory(out_dir);
  const ExperimentSeries s = run_series(c);
  for (const auto& e : s.entries) {
    json j = {{"config", config_echo(c)}, {"entry", to_json(e)}};
    atomic_write(out_dir / ("lift_" + file_label(e) + ".json"), dump(j));
    log << e.size_label << ": " << (e.ok ? "pass" : "fail");
    if (e.ok) log << " lower " << e.report->lower << " upper " << e.report->upper << " condition " << e.report->condition;
    else log << " (" << e.failure << ")";
    log << "\n";
  }
  atomic_write(out_dir / "lift_series.json", dump({{"config", config_echo(c)}, {"series", to_json(s)}}));
  atomic_write(out_dir / "scaling.csv", scaling_csv(s, c.ps));
  atomic_write(out_dir / "scaling.dat", scaling_dat(s));
  if (!s.growth.empty()) {
    log << "condition growth per step:";
    for (double g : s.growth) log << " " << g;
    log << (s.uniform() ? " (uniform)" : " (not uniform)") << "\n";
  }
  return s.any_ok() ? kOk : kFailure;
}

/// frame_<size>.json, gram_<size>.json and gram_<size>_{real,imag}.csv.
inline int cmd_export(const ExperimentConfig& c, const std::filesystem::path& out_dir, std::ostream& log = std::cerr) {
  ensure_directory(out_dir);
  const auto frames = config_frames(c);
  bool any = false;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const LabeledFrame& lf = frames[i];
    if (lf.frame) atomic_write(out_dir / ("frame_" + lf.label + ".json"), dump(to_json(*lf.frame)));
    Mat gram_m;
    if (c.kind == Kind::fock) {
      // Closed-form kernel Gram; defined even when the kernels are not a frame.
      gram_m = fock_gram_exact(square_lattice(c.delta, c.radii[i], c.jitter, c.lattice_seed));
    } else if (lf.frame) {
      gram_m = lf.frame->gram();
    } else {
      log << lf.label << ": " << lf.failure << "\n";
      continue;
    }
    atomic_write(out_dir / ("gram_" + lf.label + ".json"), dump(to_json(gram_m)));
    write_matrix_csv(out_dir / ("gram_" + lf.label), gram_m);
    any = true;
    log << lf.label << ": exported\n";
  }
  return any ? kOk : kFailure;
}

}  // namespace framelift::cli
