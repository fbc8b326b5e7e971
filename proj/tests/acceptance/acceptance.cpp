// Acceptance checks. One line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "curv/curv.hpp"
#include "oracle.hpp"

using namespace curv;

namespace {

constexpr int kPoints = 10;
constexpr std::uint64_t kSeed = 42;

constexpr double kUniversalTol = 1e-8;
constexpr double kUniversalSeconds = 60.0;
constexpr double kFlatTol = 1e-14;
constexpr double kScalarTol = 1e-10;
constexpr double kConstantCurvatureTol = 1e-10;
constexpr double kRicciFlatTol = 1e-9;
constexpr double kLichnerowiczTol = 1e-7;
constexpr double kAppendixTol = 1e-8;
constexpr double kLocallySymmetricTol = 1e-10;
constexpr double kAlgebraicTol = 1e-8;
constexpr double kRecurrenceFitTol = 1e-8;
constexpr double kLambdaTol = 1e-6;
constexpr double kClosednessTol = 1e-5;
constexpr double kWeylTol = 1e-9;
constexpr double kMutantFloor = 1e-3;
constexpr double kOracleTol = 1e-5;
constexpr double kOracleStep = 1e-4;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

std::vector<std::vector<double>> seeded(const MetricSpec& s) { return sample_points(s, kPoints, kSeed); }

// identities of criteria 1 and 7
std::vector<IdentityId> universal_ids(int dim) {
  std::vector<IdentityId> out;
  for (const auto& id : universal_identities())
    if (!id.k || dim >= id.k->min_dim()) out.push_back(id);
  return out;
}

Outcome universal_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string where;
  for (const auto& name : builtin_names()) {
    const MetricSpec s = builtin(name);
    for (const auto& p : seeded(s)) {
      const CurvaturePoint cp = riemann_at(s, p);
      for (const auto& id : universal_ids(s.dim)) {
        const double r = residual(cp, id).relative;
        if (r > worst) {
          worst = r;
          where = name + " " + id.name();
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = worst <= kUniversalTol && secs < kUniversalSeconds;
  return {ok, "max relative " + sci(worst) + " (" + where + "), limit " + sci(kUniversalTol) + "; " + sci(secs) +
                  " s, limit " + sci(kUniversalSeconds) + " s"};
}

Outcome flat_exactness() {
  double worst = 0.0;
  for (const char* name : {"flat_r4", "flat_minkowski"}) {
    const MetricSpec s = builtin(name);
    for (const auto& p : seeded(s)) {
      const CurvaturePoint cp = riemann_at(s, p);
      for (const TensorValue* t : {&cp.riemann, &cp.riemann_low, &cp.ricci, &cp.nabla_riemann, &cp.nabla2_riemann})
        worst = std::max(worst, t->max_abs());
      worst = std::max(worst, std::abs(cp.scalar));
      for (const auto& id : all_identities()) worst = std::max(worst, residual(cp, id).max_abs);
    }
  }
  return {worst <= kFlatTol, "max abs " + sci(worst) + ", limit " + sci(kFlatTol)};
}

// Expected scalar curvature +2 and +6 for the unit spheres.
Outcome constant_curvature() {
  bool ok = true;
  std::string detail;
  double cc = 0.0;
  for (const auto& [name, expected] : {std::pair<const char*, double>{"sphere_s2", 2.0}, {"sphere_s3", 6.0}}) {
    const MetricSpec s = builtin(name);
    double worst = 0.0, seen = 0.0;
    for (const auto& p : seeded(s)) {
      const CurvaturePoint cp = riemann_at(s, p);
      if (std::abs(cp.scalar - expected) >= worst) {
        worst = std::abs(cp.scalar - expected);
        seen = cp.scalar;
      }
      cc = std::max(cc, constant_curvature_residual(cp));
    }
    ok = ok && worst <= kScalarTol;
    detail += std::string(name) + " R = " + sci(seen) + " (want " + sci(expected) + "); ";
  }
  ok = ok && cc <= kConstantCurvatureTol;
  return {ok, detail + "constant-curvature form " + sci(cc) + ", limit " + sci(kConstantCurvatureTol)};
}

Outcome ricci_flat_chain() {
  const MetricSpec s = builtin("schwarzschild");
  double ric = 0.0, lich = 0.0;
  bool applicable = true;
  for (const auto& p : seeded(s)) {
    const CurvaturePoint cp = riemann_at(s, p);
    ric = std::max(ric, cp.ricci.max_abs());
    const Residual r = residual(cp, IdentityKind::Lichnerowicz3);
    applicable = applicable && r.applicable;
    lich = std::max(lich, r.relative);
  }
  return {applicable && ric <= kRicciFlatTol && lich <= kLichnerowiczTol,
          "max |Ricci| " + sci(ric) + ", Lichnerowicz relative " + sci(lich) + (applicable ? "" : " (not applicable)")};
}

Outcome appendix_cross_check() {
  double div = 0.0, bian = 0.0, divb = 0.0;
  for (const char* name : {"schwarzschild", "flrw_dust", "ppwave_rec", "product_s2xr", "sphere_s3"}) {
    const MetricSpec s = builtin(name);
    for (const auto& p : sample_points(s, 3, kSeed)) {
      const CurvaturePoint cp = riemann_at(s, p);
      for (const auto& k : KKind::all()) {
        if (cp.dim() < k.min_dim()) continue;
        const TensorValue direct = k_divergence(cp, k, DivergenceMode::Direct);
        const TensorValue closed = k_divergence(cp, k, DivergenceMode::ClosedForm);
        div = std::max(div, max_abs_diff(direct, closed) / std::max(1.0, closed.max_abs()));
        bian = std::max(bian, k_bianchi_B(cp, k).relative);
        divb = std::max(divb, k_div_B(cp, k).relative);
      }
      if (k_div_B(cp, KKind::concircular()).formula.max_abs() != 0.0) divb = std::max(divb, 1.0);
    }
  }
  const bool ok = div <= kAppendixTol && bian <= kAppendixTol && divb <= kAppendixTol;
  return {ok, "divergence " + sci(div) + ", cyclic B " + sci(bian) + ", div B " + sci(divb) + ", limit " +
                  sci(kAppendixTol)};
}

Outcome structure_witnesses() {
  double locsym = 0.0, alg = 0.0;
  const MetricSpec sym = builtin("ppwave_sym");
  for (const auto& p : seeded(sym)) {
    const CurvaturePoint cp = riemann_at(sym, p);
    locsym = std::max(locsym, cp.nabla_riemann.max_abs());
    for (IdentityKind k : {IdentityKind::AlgRRR10, IdentityKind::AlgRR11, IdentityKind::AlgRRRR12})
      alg = std::max(alg, residual(cp, k).relative);
  }
  const MetricSpec rec = builtin("ppwave_rec");
  const RecurrenceResult r = fit_recurrence(rec, seeded(rec), RecurrenceTarget::riemann());
  double lambda_err = r.unfit ? 1.0 : 0.0;
  for (const auto& f : r.points)
    if (!f.unfit) lambda_err = std::max(lambda_err, std::abs(f.lambda(0) - 1.0));
  const MetricSpec fl = builtin("flrw_dust");
  double weyl = 0.0;
  for (const auto& p : seeded(fl)) weyl = std::max(weyl, k_tensor(riemann_at(fl, p), KKind::conformal()).max_abs());
  const bool ok = locsym <= kLocallySymmetricTol && alg <= kAlgebraicTol && !r.unfit &&
                  r.fit_residual <= kRecurrenceFitTol && lambda_err <= kLambdaTol && r.closedness_available &&
                  r.closedness <= kClosednessTol && weyl <= kWeylTol;
  return {ok, "ppwave_sym |∇R| " + sci(locsym) + ", algebraic " + sci(alg) + "; ppwave_rec fit " +
                  sci(r.fit_residual) + ", |λ_u − 1| " + sci(lambda_err) + ", closedness " + sci(r.closedness) +
                  "; flrw_dust Weyl " + sci(weyl)};
}

Outcome mutation_sensitivity() {
  const MetricSpec s = builtin("sphere_s3");
  const auto pts = seeded(s);
  std::string missed;
  for (const auto& id : universal_ids(s.dim)) {
    double best = 0.0;
    for (const auto& p : pts) {
      const CurvaturePoint cp = riemann_at(s, p);
      const int terms = static_cast<int>(identity_terms(cp, id).terms.size());
      for (int m = 0; m < terms; ++m) best = std::max(best, mutated_residual(cp, id, m).relative);
    }
    if (best < kMutantFloor) missed += " " + id.name() + "(" + sci(best) + ")";
  }
  if (missed.empty()) return {true, "every identity has a mutant >= " + sci(kMutantFloor)};
  return {false, "no mutant >= " + sci(kMutantFloor) + " for" + missed};
}

Outcome oracle_agreement() {
  double worst = 0.0;
  std::string where;
  for (const auto& name : builtin_names()) {
    const MetricSpec s = builtin(name);
    for (const auto& p : seeded(s)) {
      const JetMatrix g = eval_metric(s, p, 2);
      for (int a = 0; a < s.dim; ++a)
        for (int b = a; b < s.dim; ++b) {
          const oracle::Scalar f = [&](const oracle::Point& y) { return oracle::component(s, a, b, y); };
          auto check = [&](double jet, double fd) {
            const double e = std::abs(jet - fd) / std::max(1.0, std::abs(fd));
            if (e > worst) {
              worst = e;
              where = name;
            }
          };
          for (int i = 0; i < s.dim; ++i) {
            MultiIndex m{};
            m[i] = 1;
            check(extract_partial(g(a, b), m), oracle::d1(f, p, i, kOracleStep));
            for (int j = i; j < s.dim; ++j) {
              MultiIndex mm{};
              ++mm[i];
              ++mm[j];
              check(extract_partial(g(a, b), mm), oracle::d2(f, p, i, j, kOracleStep));
            }
          }
        }
    }
  }
  return {worst <= kOracleTol, "max relative " + sci(worst) + (where.empty() ? "" : " (" + where + ")") + ", limit " +
                                   sci(kOracleTol)};
}

Outcome determinism() {
  int differing = 0;
  for (const auto& name : builtin_names()) {
    RunConfig c;
    c.metric = name;
    if (to_json_text(run_suite(c)) != to_json_text(run_suite(c))) ++differing;
  }
  return {differing == 0, std::to_string(differing) + " of " + std::to_string(builtin_names().size()) +
                              " metrics differ between runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"universal identity suite", universal_suite},
      {"flat-space exactness", flat_exactness},
      {"constant curvature", constant_curvature},
      {"Ricci-flat chain", ricci_flat_chain},
      {"appendix cross-check", appendix_cross_check},
      {"structure witnesses", structure_witnesses},
      {"mutation sensitivity", mutation_sensitivity},
      {"oracle agreement", oracle_agreement},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const Outcome o = criteria[i].second();
    if (!o.pass) ++failed;
    std::printf("%s criterion %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
