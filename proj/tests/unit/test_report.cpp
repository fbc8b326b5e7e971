#include <gtest/gtest.h>

#include <json.hpp>

#include "curv/report.hpp"
#include "helpers.hpp"

using namespace curv;

namespace {

RunConfig config(const std::string& metric, int points = 3) {
  RunConfig c;
  c.metric = metric;
  c.points = points;
  return c;
}

}  // namespace

TEST(SplitMix64, ReferenceSequence) {
  SplitMix64 r(1234567);
  const std::uint64_t want[] = {6457827717110365317ULL, 3203168211198807973ULL, 9817491932198370423ULL,
                                4593380528125082431ULL, 16408922859458223821ULL};
  for (std::uint64_t w : want) EXPECT_EQ(r.next(), w);
}

TEST(SplitMix64, UniformRange) {
  SplitMix64 r(0);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(SamplePoints, InsideDomainAndSeeded) {
  const MetricSpec s = builtin("schwarzschild");
  const auto a = sample_points(s, 10, 42);
  ASSERT_EQ(a.size(), 10u);
  for (const auto& p : a) EXPECT_TRUE(s.contains(p));
  EXPECT_EQ(a, sample_points(s, 10, 42));
  EXPECT_NE(a, sample_points(s, 10, 43));
}

TEST(RunConfig, DefaultsAndValidation) {
  RunConfig c;
  EXPECT_EQ(c.points, 10);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.tol, 1e-8);
  EXPECT_EQ(c.k_kinds.size(), 5u);
  EXPECT_NO_THROW(c.validate());
  c.points = 0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c.points = 1;
  c.tol = -1.0;
  EXPECT_THROW(c.validate(), ArgumentError);
  c.tol = 1e-8;
  c.k_kinds.clear();
  EXPECT_THROW(c.validate(), ArgumentError);
}

TEST(LoadMetric, BuiltinFileAndErrors) {
  EXPECT_EQ(load_metric("sphere_s2").dim, 2);
  const MetricSpec f = load_metric(std::string(CURV_METRICS_DIR) + "/schwarzschild.metric");
  EXPECT_TRUE(same_spec(f, builtin("schwarzschild")));
  EXPECT_THROW(load_metric("no_such_metric"), Error);
  EXPECT_THROW(load_metric(testing_support::fixture("syntax_trailing_operator.metric")), MetricParseError);
}

TEST(RunSuite, FlatSpacePasses) {
  const Report r = run_suite(config("flat_r4"));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.exit_code(), 0);
  for (const auto& s : r.summary) {
    if (s.applicable) {
      EXPECT_EQ(s.max_abs, 0.0) << s.id.name();
    }
  }
}

TEST(RunSuite, ThreeSphereMainIdentity) {
  RunConfig c = config("sphere_s3", 10);
  c.identities = {IdentityKind::Main4};
  const Report r = run_suite(c);
  ASSERT_EQ(r.summary.size(), 1u);
  EXPECT_TRUE(r.summary[0].asserted);
  EXPECT_LE(r.summary[0].max_relative, 1e-9);
  EXPECT_EQ(r.points.size(), 10u);
  EXPECT_TRUE(r.pass);
}

TEST(RunSuite, TightToleranceFails) {
  RunConfig c = config("sphere_s3");
  c.tol = 1e-30;
  c.run_structures = false;
  const Report r = run_suite(c);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(RunSuite, AssertionPolicy) {
  const Report r = run_suite(config("schwarzschild"));
  for (const auto& s : r.summary) {
    const IdentityKind k = s.id.kind;
    if (k == IdentityKind::Tachibana || k == IdentityKind::RicciPseudo) {
      EXPECT_FALSE(s.asserted) << s.id.name();
    }
    if (k == IdentityKind::Main4 || k == IdentityKind::Lichnerowicz3 || k == IdentityKind::CorollaryU) {
      EXPECT_TRUE(s.asserted) << s.id.name();
    }
    // Schwarzschild is not semisymmetric, so the algebraic RR identities are reported only
    if (k == IdentityKind::AlgRRR10) {
      EXPECT_FALSE(s.asserted);
    }
  }
  EXPECT_TRUE(r.pass);

  const Report f = run_suite(config("flrw_dust", 2));
  for (const auto& s : f.summary) {
    if (s.id.kind == IdentityKind::Lichnerowicz3) {
      EXPECT_FALSE(s.applicable);
      EXPECT_FALSE(s.note.empty());
    }
  }
}

TEST(RunSuite, SummaryIsMaxOverPoints) {
  const Report r = run_suite(config("product_s2xr", 4));
  for (std::size_t i = 0; i < r.summary.size(); ++i) {
    double m = 0.0;
    for (const auto& p : r.points) {
      ASSERT_EQ(p.residuals[i].id, r.summary[i].id);
      if (p.residuals[i].applicable) m = std::max(m, p.residuals[i].relative);
    }
    EXPECT_EQ(m, r.summary[i].max_relative) << r.summary[i].id.name();
  }
}

TEST(RunSuite, MissingFileIsAnError) {
  EXPECT_THROW(run_suite(config("/nonexistent/file.metric")), Error);
  EXPECT_THROW(run_suite(config(testing_support::fixture("unknown_identifier.metric"))), MetricParseError);
}

TEST(Json, DeterministicAndWellFormed) {
  const RunConfig c = config("ppwave_rec");
  const std::string a = to_json_text(run_suite(c));
  const std::string b = to_json_text(run_suite(c));
  EXPECT_EQ(a, b);
  const nlohmann::json j = nlohmann::json::parse(a);
  EXPECT_EQ(j["metric"]["name"], "ppwave_rec");
  EXPECT_EQ(j["metric"]["dim"], 4);
  EXPECT_EQ(j["config"]["seed"], 42);
  EXPECT_EQ(j["points"].size(), 3u);
  EXPECT_TRUE(j["summary"]["pass"].get<bool>());
  EXPECT_TRUE(j["summary"]["identities"].contains("Main4"));
  EXPECT_TRUE(j["summary"]["structures"].is_object());
  EXPECT_TRUE(j["points"][0]["residuals"].contains("KLovelock7:conformal"));
  EXPECT_EQ(j.dump(2) + "\n", a);
}

TEST(Json, IdentitiesOnlyOmitsStructures) {
  RunConfig c = config("sphere_s2", 1);
  c.run_structures = false;
  const nlohmann::json j = to_json(run_suite(c));
  EXPECT_FALSE(j["summary"].contains("structures"));
  EXPECT_FALSE(j["points"][0].contains("structures"));
}

TEST(Text, RowsFollowIdentityOrder) {
  const Report r = run_suite(config("sphere_s3", 2));
  const std::string t = to_text(r);
  std::size_t last = 0;
  for (const auto& s : r.summary) {
    const std::size_t at = t.find("\n" + s.id.name() + " ");
    ASSERT_NE(at, std::string::npos) << s.id.name();
    EXPECT_GT(at, last);
    last = at;
  }
  EXPECT_NE(t.find("constant_curvature"), std::string::npos);
  EXPECT_NE(t.find("PASS"), std::string::npos);
  EXPECT_EQ(emit(r, OutputFormat::Text), t);
}

TEST(Text, ClassifyOnlyHasNoVerdict) {
  RunConfig c = config("ppwave_sym", 2);
  c.run_identities = false;
  const Report r = run_suite(c);
  EXPECT_TRUE(r.summary.empty());
  EXPECT_EQ(r.exit_code(), 0);
  const std::string t = to_text(r);
  EXPECT_NE(t.find("locally_symmetric"), std::string::npos);
  EXPECT_EQ(t.find("PASS"), std::string::npos);
}
