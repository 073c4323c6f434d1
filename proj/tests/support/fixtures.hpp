#pragma once

#include <cmath>

#include "kswall/scene.hpp"

namespace fixtures {

// Single singularity at the origin, slope 1, thimble (1,0).
inline kswall::Scene ov() {
  kswall::ChartRect chart{-2.5, -2.5, 2.5, 2.5};
  std::vector<kswall::Singularity> sings{
      {{0.0, 0.0}, kswall::Charge(1, 0), {1.0, 0.0}, -M_PI / 2}};
  return kswall::Scene(chart, std::move(sings), 0, {}, {0.5, 0.75});
}

// Two singularities whose phase-zero rays cross at i; the wall of marginal
// stability for the two thimbles is the upper unit semicircle. The
// basepoint chamber (inside) carries no bound state of the combined class.
inline kswall::Scene pentagon() {
  kswall::ChartRect chart{-3.0, -3.0, 3.0, 3.0};
  const double r = std::sqrt(0.5);
  std::vector<kswall::Singularity> sings{
      {{-1.0, 0.0}, kswall::Charge(1, 0), {r, r}, -M_PI / 2},
      {{1.0, 0.0}, kswall::Charge(0, 1), {r, -r}, -M_PI / 2}};
  return kswall::Scene(chart, std::move(sings), 0, {}, {0.0, 0.0});
}

// Equal slopes at -1 and +1: the wall is the real axis beyond the
// singularities.
inline kswall::Scene collinear() {
  kswall::ChartRect chart{-2.5, -2.5, 2.5, 2.5};
  std::vector<kswall::Singularity> sings{
      {{-1.0, 0.0}, kswall::Charge(1, 0), {1.0, 0.0}, -M_PI / 2},
      {{1.0, 0.0}, kswall::Charge(0, 1), {1.0, 0.0}, -M_PI / 2}};
  return kswall::Scene(chart, std::move(sings), 0, {}, {0.0, 0.5});
}

// One flux direction with a constant central charge.
inline kswall::Scene with_flux() {
  kswall::ChartRect chart{-2.5, -2.5, 2.5, 2.5};
  std::vector<kswall::Singularity> sings{
      {{0.0, 0.0}, kswall::Charge(1, 0), {1.0, 0.0}, -M_PI / 2}};
  return kswall::Scene(chart, std::move(sings), 1, {{0.25, 0.5}}, {0.5, 0.75});
}

}  // namespace fixtures
