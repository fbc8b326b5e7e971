// Parse a metric from text, evaluate curvature at a point and check two identities.

#include <cstdio>

#include "curv/curv.hpp"

int main() {
  const curv::MetricSpec s2 = curv::parse_metric(R"(name round_sphere
dim 2
coords th ph
domain th 0.2 2.9
domain ph 0 6.2
g 0 0 1
g 1 1 sin(th)^2
)");
  const double x[] = {1.1, 0.4};
  const curv::CurvaturePoint cp = curv::riemann_at(s2, x);
  std::printf("scalar curvature %.12f\n", cp.scalar);
  std::printf("R_0101 %.12f\n", cp.riemann_low(0, 1, 0, 1));
  for (auto kind : {curv::IdentityKind::Lovelock6, curv::IdentityKind::Main4}) {
    const curv::Residual r = curv::residual(cp, kind);
    std::printf("%-10s relative residual %.3e\n", r.id.name().c_str(), r.relative);
  }
}
