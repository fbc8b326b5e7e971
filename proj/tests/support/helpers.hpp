#pragma once

#include <string>
#include <vector>

#include "curv/metric_dsl.hpp"
#include "curv/report.hpp"

namespace testing_support {

// Non-diagonal Lorentzian metric with no symmetries, used where corpus
// metrics are too special (e.g. to exercise mutants that vanish on spheres).
inline curv::MetricSpec generic_metric() {
  return curv::parse_metric(R"(name generic
dim 4
coords x y z w
domain x 0 1
domain y 0 1
domain z 0 1
domain w 0 1
g 0 0 1+x^2*y
g 0 1 0.3*sin(z)
g 1 1 2+cos(x*w)
g 1 2 0.1*x*y
g 2 2 exp(0.2*y)+z^2
g 3 3 -(1+0.5*x*z)
g 0 3 0.2*w
)");
}

inline const std::vector<double>& generic_point() {
  static const std::vector<double> p{0.3, 0.6, 0.2, 0.7};
  return p;
}

inline std::vector<std::vector<double>> seeded_points(const curv::MetricSpec& s, int count = 10,
                                                      std::uint64_t seed = 42) {
  return curv::sample_points(s, count, seed);
}

inline std::string fixture(const std::string& name) { return std::string(CURV_FIXTURE_DIR) + "/" + name; }

}  // namespace testing_support
