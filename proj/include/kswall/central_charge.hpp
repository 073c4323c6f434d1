#pragma once

#include <complex>

#include "kswall/charge.hpp"
#include "kswall/scene.hpp"

namespace kswall {

// Angle canonicalized to (-pi, pi].
class PhaseAngle {
 public:
  PhaseAngle() = default;
  explicit PhaseAngle(double radians) : value_(canonicalize(radians)) {}
  double value() const { return value_; }
  static double canonicalize(double radians);
  // Equality mod 2*pi within eps.
  bool approx_equal(PhaseAngle other, double eps = kEpsPhase) const;

 private:
  double value_ = 0.0;
};

// Difference of two angles wrapped into (-pi, pi].
double phase_difference(double a, double b);

// Z_gamma(u) in the affine-linear model.
Complex central_charge(const Charge& g, Complex u, const Scene& scene);

// The unique equatorial phase supporting gamma at u: Arg Z_gamma(u) - pi/2.
// Throws DegenerateChargeError when |Z| <= kEpsNum.
PhaseAngle support_phase(const Charge& g, Complex u, const Scene& scene);

// |Z_gamma(u)|.
double disc_area(const Charge& g, Complex u, const Scene& scene);

// Periods after rotating to the equatorial structure at phase theta:
// (omega_theta period, Omega_theta period) of a class with omega-period
// a_omega and Omega-period z.
std::pair<double, Complex> rotated_periods(double a_omega, Complex z,
                                           PhaseAngle theta);

// Finite-difference Cauchy-Riemann residual of Z_gamma at u, step h.
double cr_residual(const Charge& g, Complex u, const Scene& scene, double h);

}  // namespace kswall
