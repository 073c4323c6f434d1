#pragma once

#include <optional>
#include <vector>

#include "kswall/central_charge.hpp"
#include "kswall/scene.hpp"

namespace kswall {

class InvariantTable;

using Polyline = std::vector<Complex>;

// Locus {Re(e^{-i theta} Z_gamma) = 0} clipped to the chart. For the
// affine-linear model this is a straight line; a model-degenerate charge
// whose constant satisfies the equation covers the whole chart.
struct SpecialLine {
  enum class Kind { kSegment, kWholeChart, kEmpty } kind = Kind::kEmpty;
  Complex from{0, 0}, to{0, 0};  // valid for kSegment
};
SpecialLine special_line(const Charge& g, PhaseAngle theta, const Scene& scene);

// Half-line supporting the thimble disc of singularity i at phase theta,
// clipped to the chart.
struct InitialRay {
  Complex origin;
  Complex direction;  // unit
  double length = 0;  // clipped extent, 0 when the ray leaves immediately
};
InitialRay initial_ray(std::size_t sing, PhaseAngle theta, const Scene& scene);

// Wall of marginal stability between two charges: the locus where the two
// central charges share a phase (equal direction, not anti-parallel).
struct WallLocus {
  Charge g1, g2;
  std::vector<Polyline> pieces;
  bool degenerate = false;  // Z_g1 proportional to Z_g2: flagged, covers chart
};

struct WallTraceOptions {
  int grid = 256;       // seeding grid (nodes per axis)
  bool refine = true;   // insert refined midpoints (step ~ diameter / 512)
};
WallLocus marginal_wall(const Charge& g1, const Charge& g2, const Scene& scene,
                        const WallTraceOptions& opts = {});

// Parameters t in (t_min, 1] where the segment p + t (q - p) meets the
// equal-phase locus of the two forms, in increasing order.
std::vector<double> wall_hits_on_segment(const LinearForm& z1, const LinearForm& z2,
                                         Complex p, Complex q, double t_min);

// True when the phases of both forms agree at u (same direction, both
// nonvanishing).
bool on_wall(const LinearForm& z1, const LinearForm& z2, Complex u,
             double eps = kEpsPhase);

// Local affine coordinates (Re e^{-i theta} Z_g1, Re e^{-i theta} Z_g2).
std::pair<double, double> affine_coords(Complex u, PhaseAngle theta,
                                        const Charge& g1, const Charge& g2,
                                        const Scene& scene);

// Differential of Im(e^{-i theta} Z_gamma) in chart coordinates.
std::pair<double, double> boundary_covector(const Charge& g, Complex u,
                                            PhaseAngle theta, const Scene& scene);

// Attractor flow: the straight segment from u toward the zero of Z_gamma,
// stopped at the first active wall from the table (or at the zero itself).
struct AttractorStop {
  enum class Kind { kZero, kWall } kind = Kind::kZero;
  Complex point{0, 0};
  // kZero: the singularity reached, when gamma is a multiple of its thimble
  std::optional<std::size_t> singularity;
  long long thimble_multiple = 0;
  // kWall: the wall identity
  Charge wall_g1, wall_g2;
};
struct AttractorRay {
  Complex from{0, 0};
  AttractorStop stop;
};
AttractorRay attractor_ray(const Charge& g, Complex u, const Scene& scene,
                           const InvariantTable& table);

}  // namespace kswall
