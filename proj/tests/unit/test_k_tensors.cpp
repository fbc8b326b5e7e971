#include <gtest/gtest.h>

#include "curv/corpus.hpp"
#include "curv/k_tensors.hpp"
#include "curv/report.hpp"
#include "helpers.hpp"

using namespace curv;
using testing_support::generic_metric;
using testing_support::generic_point;

namespace {

std::vector<KKind> kinds_with_custom_quasi() {
  auto k = KKind::all();
  k.push_back(KKind::quasi_conformal(0.7, -1.3));
  return k;
}

double rel(double x, double scale) { return x / std::max(1.0, scale); }

}  // namespace

TEST(KKind, NamesRoundTrip) {
  for (const auto& k : kinds_with_custom_quasi()) EXPECT_EQ(KKind::parse(k.name()), k) << k.name();
  EXPECT_EQ(KKind::parse("quasi:2").a, 2.0);
  EXPECT_FALSE(KKind::parse("quasi:2").b.has_value());
  EXPECT_THROW(KKind::parse("weyl"), ArgumentError);
  EXPECT_THROW(KKind::parse("quasi:x"), ArgumentError);
  EXPECT_THROW(KKind::quasi_conformal(0.0, 0.0), ArgumentError);
}

TEST(KTensor, DimensionConstraints) {
  const CurvaturePoint s2 = riemann_at(builtin("sphere_s2"), std::vector<double>{1.0, 1.0});
  EXPECT_THROW(k_tensor(s2, KKind::conformal()), ArgumentError);
  EXPECT_THROW(k_tensor(s2, KKind::conharmonic()), ArgumentError);
  EXPECT_NO_THROW(k_tensor(s2, KKind::projective()));
  EXPECT_LE(k_tensor(s2, KKind::concircular()).max_abs(), 1e-12);
}

TEST(KTensor, FlrwIsConformallyFlat) {
  const MetricSpec s = builtin("flrw_dust");
  for (const auto& p : sample_points(s, 10, 42)) EXPECT_LE(k_tensor(riemann_at(s, p), KKind::conformal()).max_abs(), 1e-9);
}

TEST(KTensor, ConstantCurvatureKillsConcircular) {
  const MetricSpec s = builtin("sphere_s3");
  for (const auto& p : sample_points(s, 10, 42))
    EXPECT_LE(k_tensor(riemann_at(s, p), KKind::concircular()).max_abs(), 1e-10);
}

TEST(KTensor, QuasiConformalWithZeroBIsConcircular) {
  const CurvaturePoint cp = riemann_at(generic_metric(), generic_point());
  EXPECT_LE(max_abs_diff(k_tensor(cp, KKind::quasi_conformal(1.0, 0.0)), k_tensor(cp, KKind::concircular())), 1e-14);
}

TEST(KTensor, WeylIsTraceFree) {
  std::vector<MetricSpec> specs{generic_metric()};
  for (const auto& name : builtin_names()) specs.push_back(builtin(name));
  for (const auto& s : specs) {
    if (s.dim < 3) continue;
    for (const auto& p : sample_points(s, 3, 42)) {
      EXPECT_LE(contract(k_tensor(riemann_at(s, p), KKind::conformal()), 1, 3).max_abs(), 1e-9) << s.name;
    }
  }
}

TEST(KDivergence, DirectMatchesClosedFormOnGenericMetric) {
  const CurvaturePoint cp = riemann_at(generic_metric(), generic_point());
  for (const auto& k : kinds_with_custom_quasi()) {
    const TensorValue d = k_divergence(cp, k, DivergenceMode::Direct);
    const TensorValue c = k_divergence(cp, k, DivergenceMode::ClosedForm);
    EXPECT_LE(rel(max_abs_diff(d, c), c.max_abs()), 1e-8) << k.name();
    EXPECT_GT(c.max_abs(), 1e-3) << k.name();
  }
}

TEST(KDivergence, DirectMatchesClosedFormOnSchwarzschild) {
  const MetricSpec s = builtin("schwarzschild");
  for (const auto& p : sample_points(s, 5, 42)) {
    const CurvaturePoint cp = riemann_at(s, p);
    for (const auto& k : KKind::all()) {
      const TensorValue d = k_divergence(cp, k, DivergenceMode::Direct);
      const TensorValue c = k_divergence(cp, k, DivergenceMode::ClosedForm);
      EXPECT_LE(rel(max_abs_diff(d, c), c.max_abs()), 1e-8) << k.name();
    }
  }
}

TEST(KDivergence, FlatSpaceAndSphere) {
  const CurvaturePoint flat = riemann_at(builtin("flat_r4"), std::vector<double>{0.1, 0.2, 0.3, 0.4});
  for (const auto& k : KKind::all()) {
    EXPECT_EQ(k_divergence(flat, k, DivergenceMode::Direct).max_abs(), 0.0);
    EXPECT_EQ(k_divergence(flat, k, DivergenceMode::ClosedForm).max_abs(), 0.0);
  }
  const CurvaturePoint s3 = riemann_at(builtin("sphere_s3"), std::vector<double>{1.0, 1.0, 1.0});
  EXPECT_LE(k_divergence(s3, KKind::projective(), DivergenceMode::ClosedForm).max_abs(), 1e-10);
}

TEST(KDivergenceForm, Coefficients) {
  EXPECT_DOUBLE_EQ(k_divergence_form(KKind::conformal(), 4).A, 0.5);
  const KDivergenceForm c = k_divergence_form(KKind::concircular(), 4);
  EXPECT_DOUBLE_EQ(c.A, 1.0);
  // sign fixed by the appendix (b) formula; magnitude 1/(n(n-1))
  EXPECT_DOUBLE_EQ(c.B, -1.0 / 12.0);
  EXPECT_DOUBLE_EQ(k_divergence_form(KKind::projective(), 4).A, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(k_divergence_form(KKind::projective(), 4).B, 0.0);
  EXPECT_THROW(k_divergence_form(KKind::conformal(), 2), ArgumentError);
}

TEST(KDivergenceForm, ReconstructionMatchesClosedForm) {
  for (const auto& s : {builtin("schwarzschild"), generic_metric(), builtin("flrw_dust")}) {
    const CurvaturePoint cp = riemann_at(s, sample_points(s, 1, 4)[0]);
    for (const auto& k : kinds_with_custom_quasi()) {
      const TensorValue c = k_divergence(cp, k, DivergenceMode::ClosedForm);
      const TensorValue r = reconstruct_divergence(cp, k_divergence_form(cp, k));
      EXPECT_LE(rel(max_abs_diff(c, r), c.max_abs()), 1e-12) << s.name << " " << k.name();
    }
  }
}

TEST(KBianchi, DirectMatchesFormula) {
  for (const auto& s : {builtin("flrw_dust"), generic_metric()}) {
    for (const auto& p : sample_points(s, 5, 42)) {
      const CurvaturePoint cp = riemann_at(s, p);
      for (const auto& k : kinds_with_custom_quasi()) EXPECT_LE(k_bianchi_B(cp, k).relative, 1e-8) << s.name << k.name();
    }
  }
}

TEST(KBianchi, GenericMetricIsNotTrivial) {
  const CurvaturePoint cp = riemann_at(generic_metric(), generic_point());
  for (const auto& k : KKind::all()) EXPECT_GT(k_bianchi_B(cp, k).formula.max_abs(), 1e-3) << k.name();
}

TEST(KBianchi, FlatAndSphere) {
  const CurvaturePoint flat = riemann_at(builtin("flat_r4"), std::vector<double>{0.1, 0.2, 0.3, 0.4});
  for (const auto& k : KKind::all()) EXPECT_EQ(k_bianchi_B(flat, k).direct.max_abs(), 0.0);
  const CurvaturePoint s3 = riemann_at(builtin("sphere_s3"), std::vector<double>{1.0, 1.0, 1.0});
  EXPECT_LE(k_bianchi_B(s3, KKind::concircular()).formula.max_abs(), 1e-12);
  EXPECT_LE(k_bianchi_B(s3, KKind::concircular()).direct.max_abs(), 1e-10);
}

TEST(KDivB, DirectMatchesFormula) {
  const CurvaturePoint cp = riemann_at(generic_metric(), generic_point());
  for (const auto& k : kinds_with_custom_quasi()) EXPECT_LE(k_div_B(cp, k).relative, 1e-8) << k.name();
  const MetricSpec s = builtin("schwarzschild");
  for (const auto& p : sample_points(s, 3, 42)) {
    const CurvaturePoint c = riemann_at(s, p);
    for (const auto& k : KKind::all()) EXPECT_LE(k_div_B(c, k).relative, 1e-8) << k.name();
  }
}

TEST(KDivB, ConcircularVanishesAndConformalProjectiveRatio) {
  const CurvaturePoint cp = riemann_at(generic_metric(), generic_point());
  EXPECT_EQ(k_div_B(cp, KKind::concircular()).formula.max_abs(), 0.0);
  const TensorValue c = k_div_B(cp, KKind::conformal()).formula;
  const TensorValue p = k_div_B(cp, KKind::projective()).formula;
  ASSERT_GT(p.max_abs(), 1e-3);
  EXPECT_LE(max_abs_diff(c, p * (3.0 / 2.0)), 1e-12 * c.max_abs());
  const CurvaturePoint flat = riemann_at(builtin("flat_r4"), std::vector<double>{0, 0, 0, 0});
  for (const auto& k : KKind::all()) EXPECT_EQ(k_div_B(flat, k).direct.max_abs(), 0.0);
}
