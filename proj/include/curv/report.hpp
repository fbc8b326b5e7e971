#pragma once

// Suite runner: seeded sampling, identity residuals, structure
// classification, and deterministic JSON / text rendering.

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curv/corpus.hpp"
#include "curv/identities.hpp"
#include "curv/metric_dsl.hpp"
#include "curv/structures.hpp"

namespace curv {

/// SplitMix64; doubles use the top 53 bits.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// `count` points uniform in the domain box, coordinate by coordinate.
inline std::vector<std::vector<double>> sample_points(const MetricSpec& spec, int count, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<double> p(spec.dim);
    for (int k = 0; k < spec.dim; ++k) p[k] = spec.domain[k].lo + rng.uniform() * (spec.domain[k].hi - spec.domain[k].lo);
    pts.push_back(std::move(p));
  }
  return pts;
}

/// Builtin name first, otherwise a file path.
inline MetricSpec load_metric(const std::string& source) {
  if (is_builtin(source)) return builtin(source);
  return load_metric_file(source);
}

enum class OutputFormat { Text, Json };

struct RunConfig {
  std::string metric;
  int points = 10;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::vector<KKind> k_kinds = KKind::all();
  std::vector<IdentityId> identities;  // empty: all
  bool run_identities = true;
  bool run_structures = true;
  OutputFormat format = OutputFormat::Text;
  std::string output_path;  // empty: stdout

  void validate() const {
    if (points < 1) throw ArgumentError("points must be at least 1");
    if (!(tol > 0.0)) throw ArgumentError("tol must be positive");
    if (k_kinds.empty()) throw ArgumentError("at least one K tensor kind is required");
  }
};

struct PointRecord {
  int index = 0;
  std::vector<double> coords;
  std::vector<Residual> residuals;
};

struct IdentitySummary {
  IdentityId id;
  bool asserted = false;
  bool applicable = false;  // at some point
  double max_relative = 0.0;
  double max_abs = 0.0;
  std::string note;
  bool pass = true;
};

struct Report {
  std::string metric;
  int dim = 0;
  std::vector<std::string> coords;
  RunConfig config;
  std::vector<PointRecord> points;
  std::optional<StructureReport> structures;
  std::vector<IdentitySummary> summary;
  bool pass = true;

  int exit_code() const { return pass ? 0 : 1; }
};

namespace detail {

inline bool is_universal(const IdentityId& id) {
  switch (id.kind) {
    case IdentityKind::Veblen1:
    case IdentityKind::Walker2:
    case IdentityKind::Main4:
    case IdentityKind::Lovelock6:
    case IdentityKind::KLovelock7:
    case IdentityKind::DivVeblen8:
    case IdentityKind::DivDiv9:
      return true;
    default:
      return false;
  }
}

// Equations (10)-(12) hold on semisymmetric spaces only.
inline bool is_semisymmetric_consequence(const IdentityId& id) {
  return id.kind == IdentityKind::AlgRRR10 || id.kind == IdentityKind::AlgRR11 || id.kind == IdentityKind::AlgRRRR12;
}

}  // namespace detail

inline Report run_suite(const RunConfig& cfg) {
  cfg.validate();
  const MetricSpec spec = load_metric(cfg.metric);
  Report r;
  r.metric = spec.name;
  r.dim = spec.dim;
  r.coords = spec.coords;
  r.config = cfg;
  const auto pts = sample_points(spec, cfg.points, cfg.seed);

  if (cfg.run_structures) {
    StructureOptions opt;
    opt.tol = cfg.tol;
    opt.kinds = cfg.k_kinds;
    r.structures = classify(spec, pts, opt);
  }

  const std::vector<IdentityId> ids =
      !cfg.run_identities ? std::vector<IdentityId>{}
      : cfg.identities.empty() ? all_identities(cfg.k_kinds)
                               : cfg.identities;
  for (const auto& id : ids) {
    IdentitySummary s;
    s.id = id;
    s.asserted = detail::is_universal(id) || id.kind == IdentityKind::CorollaryU ||
                 id.kind == IdentityKind::Lichnerowicz3 ||
                 (detail::is_semisymmetric_consequence(id) && r.structures && r.structures->semisymmetric.value);
    r.summary.push_back(s);
  }

  for (std::size_t i = 0; i < pts.size(); ++i) {
    PointRecord rec;
    rec.index = static_cast<int>(i);
    rec.coords = pts[i];
    if (!ids.empty()) {
      const CurvaturePoint cp = riemann_at(spec, pts[i]);
      for (std::size_t j = 0; j < ids.size(); ++j) {
        Residual res = residual(cp, ids[j]);
        IdentitySummary& s = r.summary[j];
        if (res.applicable) {
          s.applicable = true;
          s.max_relative = std::max(s.max_relative, res.relative);
          s.max_abs = std::max(s.max_abs, res.max_abs);
        } else if (s.note.empty()) {
          s.note = res.note;
        }
        rec.residuals.push_back(std::move(res));
      }
    }
    r.points.push_back(std::move(rec));
  }

  for (auto& s : r.summary) {
    s.pass = !s.asserted || !s.applicable || s.max_relative <= cfg.tol;
    r.pass = r.pass && s.pass;
  }
  return r;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

using nlohmann::json;

// Non-finite values become null.
inline json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json vec(const TensorValue& t) {
  json a = json::array();
  for (double x : t.data()) a.push_back(num(x));
  return a;
}

inline json flag(const StructureFlag& f) { return {{"value", f.value}, {"residual", num(f.residual)}}; }

inline json recurrence_json(const RecurrenceResult& rr) {
  json j{{"target", rr.target.name()}, {"unfit", rr.unfit}, {"fit_residual", num(rr.fit_residual)}};
  j["closedness"] = rr.closedness_available ? num(rr.closedness) : json(nullptr);
  return j;
}

inline json structures_summary(const StructureReport& s) {
  json j;
  j["locally_symmetric"] = flag(s.locally_symmetric);
  j["harmonic"] = flag(s.harmonic);
  j["nearly_conformally_symmetric"] = flag(s.nearly_conformally_symmetric);
  j["semisymmetric"] = flag(s.semisymmetric);
  j["constant_curvature"] = flag(s.constant_curvature);
  j["pseudosymmetric"] = flag(s.pseudosymmetric);
  j["pseudosymmetric"]["degenerate_q"] = s.pseudosymmetry.degenerate_q;
  j["recurrent"] = flag(s.recurrent);
  j["recurrent"].update(recurrence_json(s.recurrence));
  const auto& g = s.generalized_recurrence;
  j["generalized_recurrent"] = flag(s.generalized_recurrent);
  j["generalized_recurrent"].update({{"unfit", g.unfit},
                                     {"rank_deficient", g.rank_deficient},
                                     {"collinearity", num(g.collinearity)},
                                     {"closedness", g.closedness_available ? num(g.closedness) : json(nullptr)},
                                     {"constant_curvature_residual", num(g.constant_curvature_residual)},
                                     {"lemma_holds", g.lemma_holds}});
  json k = json::object();
  for (const auto& rr : s.k_recurrence) {
    json e = recurrence_json(rr);
    e["value"] = !rr.unfit && rr.fit_residual <= s.tol;
    k[rr.target.name()] = e;
  }
  j["k_recurrent"] = k;
  const auto& w = s.wrs;
  j["wrs"] = flag(s.weakly_ricci_symmetric);
  j["wrs"].update({{"unfit", w.unfit},
                   {"rank_deficient", w.rank_deficient},
                   {"min_abs_det_mixed_ricci", num(w.min_abs_det_mixed_ricci)},
                   {"B_minus_D_norm", num(w.b_minus_d_norm)},
                   {"A_minus_B_closedness", w.alpha_closedness_available ? num(w.alpha_closedness) : json(nullptr)},
                   {"A_minus_B_lemma_residual", num(w.lemma_residual)},
                   {"wrs_rr_residual", num(w.wrs_rr_residual)},
                   {"beta_checked", w.beta_checked}});
  if (w.beta_checked) {
    j["wrs"].update({{"beta_eigen_residual", num(w.beta_eigen_residual)},
                     {"beta_ricci_identity_residual", num(w.beta_ricci_identity_residual)},
                     {"beta_identity_residual", num(w.beta_identity_residual)}});
  }
  return j;
}

inline json structures_at(const StructureReport& s, std::size_t i) {
  json j;
  j["L_R"] = s.pseudosymmetry.l_r.size() > i ? num(s.pseudosymmetry.l_r[i]) : json(nullptr);
  if (i < s.recurrence.points.size() && !s.recurrence.points[i].unfit) {
    j["recurrent"] = {{"lambda", vec(s.recurrence.points[i].lambda)},
                      {"fit_residual", num(s.recurrence.points[i].fit_residual)}};
  }
  if (i < s.generalized_recurrence.points.size() && !s.generalized_recurrence.points[i].unfit) {
    const auto& g = s.generalized_recurrence.points[i];
    j["generalized_recurrent"] = {{"lambda", vec(g.lambda)}, {"mu", vec(g.mu)}, {"fit_residual", num(g.fit_residual)}};
  }
  json k = json::object();
  for (const auto& rr : s.k_recurrence) {
    if (i < rr.points.size() && !rr.points[i].unfit) {
      k[rr.target.name()] = {{"lambda", vec(rr.points[i].lambda)}, {"fit_residual", num(rr.points[i].fit_residual)}};
    }
  }
  j["k_recurrent"] = k;
  if (i < s.wrs.points.size() && !s.wrs.points[i].unfit) {
    const WrsFit& w = s.wrs.points[i];
    j["wrs"] = {{"A", vec(w.A)},
                {"B", vec(w.B)},
                {"D", vec(w.D)},
                {"fit_residual", num(w.fit_residual)},
                {"det_mixed_ricci", num(w.det_mixed_ricci)},
                {"rank_deficient", w.rank_deficient}};
  }
  return j;
}

inline json residual_json(const Residual& r) {
  json j{{"applicable", r.applicable}};
  if (!r.note.empty()) j["note"] = r.note;
  if (r.applicable) {
    j["max_abs"] = num(r.max_abs);
    j["scale"] = num(r.scale);
    j["relative"] = num(r.relative);
    j["worst_index"] = r.worst_index;
  }
  return j;
}

}  // namespace detail

inline nlohmann::json to_json(const Report& r) {
  using detail::json;
  using detail::num;
  json j;
  j["metric"] = {{"name", r.metric}, {"dim", r.dim}, {"coords", r.coords}};
  json kinds = json::array();
  for (const auto& k : r.config.k_kinds) kinds.push_back(k.name());
  json ids = json::array();
  for (const auto& s : r.summary) ids.push_back(s.id.name());
  j["config"] = {{"points", r.config.points},
                 {"seed", r.config.seed},
                 {"tol", num(r.config.tol)},
                 {"k_tensors", kinds},
                 {"identities", ids},
                 {"structures", r.config.run_structures}};
  json pts = json::array();
  for (const auto& p : r.points) {
    json e{{"index", p.index}, {"coords", json::array()}};
    for (double x : p.coords) e["coords"].push_back(num(x));
    json res = json::object();
    for (const auto& x : p.residuals) res[x.id.name()] = detail::residual_json(x);
    e["residuals"] = res;
    if (r.structures) e["structures"] = detail::structures_at(*r.structures, static_cast<std::size_t>(p.index));
    pts.push_back(e);
  }
  j["points"] = pts;
  json idsum = json::object();
  for (const auto& s : r.summary) {
    json e{{"asserted", s.asserted}, {"applicable", s.applicable}, {"pass", s.pass}};
    if (s.applicable) {
      e["max_relative"] = num(s.max_relative);
      e["max_abs"] = num(s.max_abs);
    }
    if (!s.note.empty()) e["note"] = s.note;
    idsum[s.id.name()] = e;
  }
  j["summary"] = {{"identities", idsum}, {"pass", r.pass}};
  if (r.structures) j["summary"]["structures"] = detail::structures_summary(*r.structures);
  return j;
}

/// Keys are sorted by nlohmann's std::map objects; doubles print shortest round-trip.
inline std::string to_json_text(const Report& r) { return to_json(r).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// text

namespace detail {

inline std::string sci(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << x;
  return s.str();
}

inline std::string pad(const std::string& s, std::size_t w) { return s.size() >= w ? s : s + std::string(w - s.size(), ' '); }

}  // namespace detail

inline std::string to_text(const Report& r) {
  using detail::pad;
  using detail::sci;
  std::ostringstream out;
  out << "metric " << r.metric << " (dim " << r.dim << "), " << r.config.points << " points, seed " << r.config.seed
      << ", tol " << sci(r.config.tol) << "\n";
  if (!r.summary.empty()) {
    std::size_t w = 8;
    for (const auto& s : r.summary) w = std::max(w, s.id.name().size());
    out << "\n" << pad("identity", w + 2) << pad("asserted", 10) << pad("max relative", 14) << pad("max abs", 12)
        << "status\n";
    for (const auto& s : r.summary) {
      out << pad(s.id.name(), w + 2) << pad(s.asserted ? "yes" : "no", 10);
      if (s.applicable) {
        out << pad(sci(s.max_relative), 14) << pad(sci(s.max_abs), 12);
        out << (!s.asserted ? "reported" : s.pass ? "pass" : "FAIL");
      } else {
        out << pad("-", 14) << pad("-", 12) << "n/a (" << s.note << ")";
      }
      out << "\n";
    }
  }
  if (r.structures) {
    const StructureReport& s = *r.structures;
    auto row = [&](const std::string& name, const StructureFlag& f, const std::string& marker = "") {
      out << pad(name, 32) << pad(f.value ? "yes" : "no", 6) << pad(sci(f.residual), 12) << marker << "\n";
    };
    out << "\n" << pad("structure", 32) << pad("flag", 6) << pad("residual", 12) << "marker\n";
    row("locally_symmetric", s.locally_symmetric);
    row("harmonic", s.harmonic);
    row("nearly_conformally_symmetric", s.nearly_conformally_symmetric);
    row("semisymmetric", s.semisymmetric);
    row("constant_curvature", s.constant_curvature);
    row("pseudosymmetric", s.pseudosymmetric, s.pseudosymmetry.degenerate_q ? "degenerate Q" : "");
    row("recurrent", s.recurrent, s.recurrence.unfit ? "unfit" : "");
    row("generalized_recurrent", s.generalized_recurrent,
        s.generalized_recurrence.unfit ? "unfit" : s.generalized_recurrence.rank_deficient ? "rank deficient" : "");
    for (const auto& k : s.k_recurrence) {
      row("k_recurrent:" + k.target.name(), {!k.unfit && k.fit_residual <= s.tol, k.fit_residual},
          k.unfit ? "unfit" : "");
    }
    row("wrs", s.weakly_ricci_symmetric, s.wrs.unfit ? "unfit" : s.wrs.rank_deficient ? "rank deficient" : "");
  }
  if (!r.summary.empty()) out << "\n" << (r.pass ? "PASS" : "FAIL") << "\n";
  return out.str();
}

inline std::string emit(const Report& r, OutputFormat f) {
  return f == OutputFormat::Json ? to_json_text(r) : to_text(r);
}

}  // namespace curv
