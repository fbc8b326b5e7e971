#pragma once

// Built-in witness metrics. Every domain box keeps clear of coordinate
// singularities (sphere poles, the Schwarzschild horizon, y = 0 on H2).

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "curv/errors.hpp"
#include "curv/metric_dsl.hpp"

namespace curv {

namespace detail {

struct CorpusEntry {
  std::string_view name;
  std::string_view text;
};

inline constexpr std::array<CorpusEntry, 10> kCorpus{{
    {"flat_r4", R"(name flat_r4
dim 4
coords x y z w
domain x -1 1
domain y -1 1
domain z -1 1
domain w -1 1
g 0 0 1
g 1 1 1
g 2 2 1
g 3 3 1
)"},
    {"flat_minkowski", R"(name flat_minkowski
dim 4
coords t x y z
domain t 0 1
domain x -1 1
domain y -1 1
domain z -1 1
g 0 0 -1
g 1 1 1
g 2 2 1
g 3 3 1
)"},
    {"sphere_s2", R"(name sphere_s2
dim 2
coords θ φ
domain θ 0.4 2.7
domain φ 0 6
g 0 0 1
g 1 1 sin(θ)^2
)"},
    {"sphere_s3", R"(name sphere_s3
dim 3
coords χ θ φ
domain χ 0.4 2.7
domain θ 0.4 2.7
domain φ 0 6
g 0 0 1
g 1 1 sin(χ)^2
g 2 2 sin(χ)^2*sin(θ)^2
)"},
    {"hyperbolic_h2", R"(name hyperbolic_h2
# upper half-plane model
dim 2
coords x y
domain x -1 1
domain y 0.5 2
g 0 0 1/y^2
g 1 1 1/y^2
)"},
    {"schwarzschild", R"(name schwarzschild
dim 4
coords t r th ph
param M 1.0
domain t 0 1
domain r 3 10
domain th 0.5 2.6
domain ph 0 3
g 0 0 -(1-2*M/r)
g 1 1 1/(1-2*M/r)
g 2 2 r^2
g 3 3 r^2*sin(th)^2
)"},
    {"flrw_dust", R"(name flrw_dust
# spatially flat, scale factor a(t) = t^(2/3)
dim 4
coords t x y z
domain t 1 2
domain x -1 1
domain y -1 1
domain z -1 1
g 0 0 -1
g 1 1 t^(4/3)
g 2 2 t^(4/3)
g 3 3 t^(4/3)
)"},
    {"ppwave_sym", R"(name ppwave_sym
# Brinkmann form, H = x^2 - y^2
dim 4
coords u v x y
domain u 0 1
domain v 0 1
domain x -1 1
domain y -1 1
g 0 0 x^2-y^2
g 0 1 1
g 2 2 1
g 3 3 1
)"},
    {"ppwave_rec", R"(name ppwave_rec
# Brinkmann form, H = exp(u) (x^2 - y^2)
dim 4
coords u v x y
domain u 0 1
domain v 0 1
domain x -1 1
domain y -1 1
g 0 0 exp(u)*(x^2-y^2)
g 0 1 1
g 2 2 1
g 3 3 1
)"},
    {"product_s2xr", R"(name product_s2xr
dim 3
coords θ φ z
domain θ 0.4 2.7
domain φ 0 6
domain z -1 1
g 0 0 1
g 1 1 sin(θ)^2
g 2 2 1
)"},
}};

}  // namespace detail

class UnknownMetricError : public Error {
 public:
  using Error::Error;
};

inline std::vector<std::string> builtin_names() {
  std::vector<std::string> out;
  for (const auto& e : detail::kCorpus) out.emplace_back(e.name);
  return out;
}

inline bool is_builtin(std::string_view name) {
  for (const auto& e : detail::kCorpus) {
    if (e.name == name) return true;
  }
  return false;
}

/// Source text of a corpus entry, as it would appear in a metric file.
inline std::string builtin_text(std::string_view name) {
  for (const auto& e : detail::kCorpus) {
    if (e.name == name) return std::string(e.text);
  }
  std::string msg = "unknown metric '" + std::string(name) + "'; available:";
  for (const auto& e : detail::kCorpus) msg += " " + std::string(e.name);
  throw UnknownMetricError(msg);
}

inline MetricSpec builtin(std::string_view name) { return parse_metric(builtin_text(name)); }

}  // namespace curv
