#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "kswall/charge.hpp"

namespace kswall {

using Complex = std::complex<double>;

// Chart-geometry tolerances and defaults.
inline constexpr double kEpsNum = 1e-9;    // |Z| below this counts as zero
inline constexpr double kEpsGeom = 1e-9;   // point-coincidence tolerance
inline constexpr double kEpsPhase = 1e-9;  // phase equality mod 2*pi
inline constexpr int kDefaultOrder = 6;

struct ChartRect {
  double xmin = -1, ymin = -1, xmax = 1, ymax = 1;
  bool contains(Complex u, double pad = 0.0) const {
    return u.real() >= xmin - pad && u.real() <= xmax + pad &&
           u.imag() >= ymin - pad && u.imag() <= ymax + pad;
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double diameter() const;
};

struct Singularity {
  Complex position;
  Charge thimble;       // primitive boundary
  Complex slope{1, 0};  // nonzero; Z_thimble(u) = slope * (u - position)
  double cut_angle = -1.5707963267948966;  // branch cut half-line direction
};

struct Diagnostic {
  enum class Severity { kError, kWarning } severity;
  std::string field;  // e.g. "singularities[2].slope"
  std::string message;
};

// gamma written in the scene basis: thimble coefficients plus flux residual.
struct Decomposition {
  std::vector<long long> thimble;
  std::vector<long long> flux;
};

// Z_gamma(u) = slope * u + offset for the affine-linear model.
struct LinearForm {
  Complex slope{0, 0};
  Complex offset{0, 0};
  Complex value(Complex u) const { return slope * u + offset; }
  bool is_constant(double eps = kEpsNum) const { return std::abs(slope) <= eps; }
  // Unique zero when the slope is nonzero.
  std::optional<Complex> zero(double eps = kEpsNum) const {
    if (is_constant(eps)) return std::nullopt;
    return -offset / slope;
  }
};

class Scene {
 public:
  Scene() = default;
  Scene(ChartRect chart, std::vector<Singularity> sings, int flux_rank,
        std::vector<Complex> flux_z, Complex basepoint)
      : chart_(chart),
        sings_(std::move(sings)),
        flux_rank_(flux_rank),
        flux_z_(std::move(flux_z)),
        basepoint_(basepoint) {}

  const ChartRect& chart() const { return chart_; }
  const std::vector<Singularity>& singularities() const { return sings_; }
  int flux_rank() const { return flux_rank_; }
  const std::vector<Complex>& flux_constants() const { return flux_z_; }
  Complex basepoint() const { return basepoint_; }

  std::size_t size() const { return sings_.size(); }
  const Singularity& singularity(std::size_t i) const { return sings_.at(i); }

  // Structural validation plus model-degeneracy warnings (equal-slope
  // thimble pairs whose difference has constant Z).
  std::vector<Diagnostic> validate() const;
  bool is_valid() const;

  // Integer expression of gamma in the scene basis. Throws BasisError when
  // no integer expression exists or when the expression is ambiguous and
  // the central charge depends on the choice.
  Decomposition decompose(const Charge& g) const;

  // Z_gamma as an affine-linear form in u. Throws BasisError.
  LinearForm linear_form(const Charge& g) const;

  // Thimble charge of singularity i.
  const Charge& thimble(std::size_t i) const { return sings_.at(i).thimble; }

  // Index of the singularity within eps of u, if any.
  std::optional<std::size_t> singularity_near(Complex u,
                                              double eps = kEpsGeom) const;

 private:
  ChartRect chart_;
  std::vector<Singularity> sings_;
  int flux_rank_ = 0;
  std::vector<Complex> flux_z_;
  Complex basepoint_{0, 0};
};

// Gauss-Manin transport along the path: one Picard-Lefschetz twist per
// signed branch-cut crossing, in path order. Throws GeometryError when the
// path meets a singularity.
Charge parallel_transport(const Charge& g, const BasePath& path,
                          const Scene& scene);

// Signed cut crossings of one segment, ordered by the segment parameter.
struct CutCrossing {
  double t;            // position along the segment, in (0,1]
  std::size_t sing;    // singularity index
  int sign;            // +1 = counterclockwise around the singularity
};
std::vector<CutCrossing> cut_crossings(Complex p, Complex q, const Scene& scene);

}  // namespace kswall
