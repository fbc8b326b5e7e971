#include <gtest/gtest.h>

#include <cmath>

#include "curv/corpus.hpp"
#include "curv/curvature.hpp"
#include "curv/report.hpp"
#include "helpers.hpp"
#include "oracle.hpp"

using namespace curv;
using testing_support::generic_metric;
using testing_support::generic_point;

namespace {

double rel(double x, double scale) { return x / std::max(1.0, scale); }

// ∇_f T from 4th-order differences of point values of T plus connection terms.
TensorValue fd_covariant_derivative(const MetricSpec& s, const std::vector<double>& p,
                                    const std::function<TensorValue(const CurvaturePoint&)>& field, double h = 1e-3) {
  const CurvaturePoint c0 = riemann_at(s, p, DomainCheck::Skip);
  const TensorValue t0 = field(c0);
  const int n = s.dim;
  std::vector<TensorValue> partials;
  for (int f = 0; f < n; ++f) {
    std::vector<TensorValue> v;
    for (double st : {2.0, 1.0, -1.0, -2.0}) {
      std::vector<double> q = p;
      q[f] += st * h;
      v.push_back(field(riemann_at(s, q, DomainCheck::Skip)));
    }
    partials.push_back((v[1] * 8.0 - v[2] * 8.0 - v[0] + v[3]) * (1.0 / (12 * h)));
  }
  Valence val = t0.valence();
  val.insert(val.begin(), Variance::Covariant);
  const TensorValue& G = c0.connection.gamma;
  return TensorValue::generate(n, val, [&](const Index& j) {
    const int f = j[0];
    Index src{};
    for (int k = 0; k < t0.rank(); ++k) src[k] = j[k + 1];
    double acc = partials[f].at(src);
    for (int k = 0; k < t0.rank(); ++k) {
      const int orig = src[k];
      const bool up = t0.valence()[k] == Variance::Contravariant;
      for (int m = 0; m < n; ++m) {
        src[k] = m;
        acc += up ? G(f, m, orig) * t0.at(src) : -G(f, orig, m) * t0.at(src);
      }
      src[k] = orig;
    }
    return acc;
  });
}

}  // namespace

TEST(Christoffel, FlatSpaceVanishes) {
  const ConnectionJet c = christoffel(builtin("flat_r4"), std::vector<double>{0.1, 0.2, -0.3, 0.4});
  EXPECT_EQ(c.gamma.max_abs(), 0.0);
  EXPECT_EQ(c.d_gamma.max_abs(), 0.0);
}

TEST(Christoffel, RoundSphere) {
  const MetricSpec s = builtin("sphere_s2");
  const ConnectionJet eq = christoffel(s, std::vector<double>{M_PI / 2, 1.0});
  EXPECT_NEAR(eq.gamma(1, 1, 0), 0.0, 1e-15);
  EXPECT_NEAR(eq.gamma(0, 1, 1), 0.0, 1e-15);
  const ConnectionJet c = christoffel(s, std::vector<double>{M_PI / 3, 1.0});
  EXPECT_NEAR(c.gamma(1, 1, 0), -0.4330127018922193, 1e-12);
  EXPECT_NEAR(c.gamma(0, 1, 1), 1.0 / std::tan(M_PI / 3), 1e-12);
}

TEST(Christoffel, SchwarzschildTimeRadial) {
  const ConnectionJet c = christoffel(builtin("schwarzschild"), std::vector<double>{0.5, 4.0, 1.0, 1.0});
  EXPECT_NEAR(c.gamma(0, 1, 0), 0.125, 1e-14);
  EXPECT_NEAR(c.gamma(1, 0, 0), 0.125, 1e-14);
}

TEST(Christoffel, SymmetricLowerPair) {
  const ConnectionJet c = christoffel(generic_metric(), generic_point());
  const int n = 4;
  for (int b = 0; b < n; ++b)
    for (int cc = 0; cc < n; ++cc)
      for (int d = 0; d < n; ++d) {
        EXPECT_EQ(c.gamma(b, cc, d), c.gamma(cc, b, d));
        for (int e = 0; e < n; ++e) EXPECT_EQ(c.d_gamma(e, b, cc, d), c.d_gamma(e, cc, b, d));
      }
}

TEST(Christoffel, MatchesOracle) {
  for (const auto& s : {generic_metric(), builtin("schwarzschild"), builtin("flrw_dust")}) {
    const auto p = sample_points(s, 1, 3)[0];
    const ConnectionJet c = christoffel(s, p);
    const auto ref = oracle::christoffel(s, p);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_TRUE(oracle::close(c.gamma.data()[i], ref[i], 1e-6)) << s.name;
  }
}

TEST(Riemann, MatchesOracleOnEveryCorpusMetric) {
  std::vector<MetricSpec> specs{generic_metric()};
  for (const auto& name : builtin_names()) specs.push_back(builtin(name));
  for (const auto& s : specs) {
    for (const auto& p : sample_points(s, 2, 5)) {
      const CurvaturePoint cp = riemann_at(s, p);
      const auto ref = oracle::riemann(s, p);
      double worst = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(cp.riemann.data()[i] - ref[i]));
      EXPECT_LE(rel(worst, cp.riemann.max_abs()), 1e-6) << s.name;
    }
  }
}

TEST(Riemann, FlatMinkowskiIsExactlyFlat) {
  const CurvaturePoint cp = riemann_at(builtin("flat_minkowski"), std::vector<double>{0.5, 0.1, 0.2, 0.3});
  EXPECT_LE(cp.riemann.max_abs(), 1e-15);
  EXPECT_LE(cp.ricci.max_abs(), 1e-15);
  EXPECT_LE(std::abs(cp.scalar), 1e-15);
  EXPECT_EQ(cp.metric.signature, "(-+++)");
}

// Sign convention pin: R_ac = R_abc^b makes the round sphere's scalar negative.
TEST(Riemann, UnitSpheresScalarCurvatureConvention) {
  for (const auto& [name, expected] : {std::pair{"sphere_s2", -2.0}, std::pair{"sphere_s3", -6.0}}) {
    const MetricSpec s = builtin(name);
    for (const auto& p : sample_points(s, 10, 42)) EXPECT_NEAR(riemann_at(s, p).scalar, expected, 1e-10) << name;
  }
}

TEST(Riemann, SchwarzschildIsRicciFlat) {
  const MetricSpec s = builtin("schwarzschild");
  for (const auto& p : sample_points(s, 10, 42)) {
    const CurvaturePoint cp = riemann_at(s, p);
    EXPECT_LE(cp.ricci.max_abs(), 1e-9);
    EXPECT_GT(cp.riemann.max_abs(), 1e-3);
  }
}

TEST(Riemann, AlgebraicSymmetries) {
  const CurvaturePoint cp = riemann_at(generic_metric(), generic_point());
  const double scale = cp.riemann_low.max_abs();
  EXPECT_LE(max_abs_diff(permute(cp.riemann, {1, 0, 2, 3}), cp.riemann * -1.0), 1e-12 * scale);
  EXPECT_LE(max_abs_diff(permute(cp.riemann_low, {2, 3, 0, 1}), cp.riemann_low), 1e-10 * scale);
  EXPECT_LE(cyclic_sum(cp.riemann, {0, 1, 2}).max_abs(), 1e-10 * scale);
  EXPECT_LE(max_abs_diff(permute(cp.ricci, {1, 0}), cp.ricci), 1e-12 * std::max(1.0, cp.ricci.max_abs()));
}

TEST(CovariantDerivative, MetricIsParallel) {
  for (const auto& name : builtin_names()) {
    const MetricSpec s = builtin(name);
    const auto p = sample_points(s, 1, 9)[0];
    const TensorField g = [](const MetricJets& mj) { return mj.g; };
    EXPECT_LE(covariant_derivative(s, p, g, 1).max_abs(), 1e-11) << name;
    EXPECT_LE(covariant_derivative(s, p, g, 2).max_abs(), 1e-11) << name;
  }
  const TensorField g = [](const MetricJets& mj) { return mj.g; };
  EXPECT_LE(covariant_derivative(generic_metric(), generic_point(), g, 2).max_abs(), 1e-11);
}

TEST(CovariantDerivative, ScalarFieldGivesItsGradient) {
  const MetricSpec s = generic_metric();
  const TensorField f = [](const MetricJets& mj) {
    return JetTensor::generate(mj.dim, {}, mj.order, [&](const Index&) { return mj.g(0, 0) * mj.coords[3]; });
  };
  const TensorValue d = covariant_derivative(s, generic_point(), f, 1);
  const oracle::Scalar ref = [&](const oracle::Point& y) { return oracle::component(s, 0, 0, y) * y[3]; };
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(oracle::close(d(i), oracle::d1(ref, generic_point(), i, 1e-4), 1e-8));
}

TEST(CovariantDerivative, RejectsBadOrders) {
  const TensorField g = [](const MetricJets& mj) { return mj.g; };
  EXPECT_THROW(covariant_derivative(generic_metric(), generic_point(), g, 3), ArgumentError);
}

TEST(CovariantDerivative, CahenWallachIsLocallySymmetric) {
  const MetricSpec s = builtin("ppwave_sym");
  for (const auto& p : sample_points(s, 10, 42)) {
    const CurvaturePoint cp = riemann_at(s, p);
    EXPECT_LE(cp.nabla_riemann.max_abs(), 1e-10);
    EXPECT_GT(cp.riemann.max_abs(), 0.5);
  }
}

TEST(CovariantDerivative, NablaRiemannMatchesDifferencedRiemann) {
  for (const auto& s : {generic_metric(), builtin("schwarzschild"), builtin("ppwave_rec")}) {
    const auto p = sample_points(s, 1, 13)[0];
    const CurvaturePoint cp = riemann_at(s, p);
    const TensorValue fd = fd_covariant_derivative(s, p, [](const CurvaturePoint& c) { return c.riemann; });
    EXPECT_LE(rel(max_abs_diff(fd, cp.nabla_riemann), cp.nabla_riemann.max_abs()), 1e-5) << s.name;
  }
}

TEST(CovariantDerivative, SecondDerivativeMatchesDifferencedFirst) {
  for (const auto& s : {generic_metric(), builtin("schwarzschild"), builtin("flrw_dust")}) {
    const auto p = sample_points(s, 1, 17)[0];
    const CurvaturePoint cp = riemann_at(s, p);
    const TensorValue fd = fd_covariant_derivative(s, p, [](const CurvaturePoint& c) { return c.nabla_riemann; });
    EXPECT_LE(rel(max_abs_diff(fd, cp.nabla2_riemann), cp.nabla2_riemann.max_abs()), 1e-5) << s.name;
  }
}

TEST(CommutatorAction, ScalarsAndFlatSpace) {
  const CurvaturePoint cp = riemann_at(generic_metric(), generic_point());
  EXPECT_EQ(commutator_action(cp, TensorValue::scalar(4, 3.0)).max_abs(), 0.0);
  const CurvaturePoint flat = riemann_at(builtin("flat_r4"), std::vector<double>{0, 0, 0, 0});
  EXPECT_EQ(commutator_action(flat, flat.riemann_low + flat.riemann_low).max_abs(), 0.0);
}

TEST(CommutatorAction, AgreesWithAntisymmetrizedSecondDerivative) {
  std::vector<MetricSpec> specs{generic_metric()};
  for (const auto& name : builtin_names()) specs.push_back(builtin(name));
  for (const auto& s : specs) {
    const CurvaturePoint cp = riemann_at(s, sample_points(s, 1, 21)[0]);
    const TensorValue lhs = commutator_action(cp, cp.riemann);
    const TensorValue rhs = antisymmetrize(cp.nabla2_riemann, {0, 1}) * 2.0;
    EXPECT_LE(rel(max_abs_diff(lhs, rhs), std::max(lhs.max_abs(), rhs.max_abs())), 1e-9) << s.name;
  }
}

TEST(RiemannDivergence, ContractedBianchiOnSchwarzschild) {
  const MetricSpec s = builtin("schwarzschild");
  for (const auto& p : sample_points(s, 10, 42)) {
    const RiemannDivergence d = riemann_divergence(riemann_at(s, p));
    EXPECT_LE(max_abs_diff(d.divergence, d.bianchi), 1e-10);
  }
  const RiemannDivergence g = riemann_divergence(riemann_at(generic_metric(), generic_point()));
  EXPECT_LE(rel(max_abs_diff(g.divergence, g.bianchi), g.divergence.max_abs()), 1e-10);
  EXPECT_GT(g.divergence.max_abs(), 1e-3);
}

TEST(RiemannDivergence, VanishesOnFlatSpaceAndSpheres) {
  EXPECT_EQ(riemann_divergence(riemann_at(builtin("flat_r4"), std::vector<double>{0, 0, 0, 0})).divergence.max_abs(),
            0.0);
  const MetricSpec s3 = builtin("sphere_s3");
  for (const auto& p : sample_points(s3, 5, 42)) EXPECT_LE(riemann_divergence(riemann_at(s3, p)).divergence.max_abs(), 1e-10);
}

TEST(Bianchi, SecondIdentityOnTheCorpus) {
  for (const auto& name : builtin_names()) {
    const MetricSpec s = builtin(name);
    for (const auto& p : sample_points(s, 10, 42)) {
      const CurvaturePoint cp = riemann_at(s, p);
      const double r = cyclic_sum(cp.nabla_riemann, {0, 1, 2}).max_abs();
      EXPECT_LE(rel(r, cp.nabla_riemann.max_abs()), 1e-10) << name;
      EXPECT_LE(max_abs_diff(permute(cp.ricci, {1, 0}), cp.ricci), 1e-12 * std::max(1.0, cp.ricci.max_abs()));
    }
  }
}
