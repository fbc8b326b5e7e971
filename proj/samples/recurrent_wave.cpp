// Fit the recurrence covector of a plane wave whose profile grows like e^u.

#include <cstdio>

#include "curv/curv.hpp"

int main() {
  const curv::MetricSpec wave = curv::builtin("ppwave_rec");
  const auto points = curv::sample_points(wave, 5, 7);
  const curv::RecurrenceResult r = curv::fit_recurrence(wave, points, curv::RecurrenceTarget::riemann());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& l = r.points[i].lambda;
    std::printf("point %zu  lambda = (%.6f, %.6f, %.6f, %.6f)\n", i, l(0), l(1), l(2), l(3));
  }
  std::printf("fit residual %.3e, closedness %.3e\n", r.fit_residual, r.closedness);

  const curv::StructureReport s = curv::classify(wave, points);
  std::printf("recurrent %s, locally symmetric %s\n", s.recurrent.value ? "yes" : "no",
              s.locally_symmetric.value ? "yes" : "no");
}
