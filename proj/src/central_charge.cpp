#include "kswall/central_charge.hpp"

#include <cmath>

#include "kswall/errors.hpp"

namespace kswall {

double PhaseAngle::canonicalize(double radians) {
  double v = std::remainder(radians, 2.0 * M_PI);  // lands in [-pi, pi]
  if (v <= -M_PI) v = M_PI;
  return v;
}

double phase_difference(double a, double b) {
  return PhaseAngle::canonicalize(a - b);
}

bool PhaseAngle::approx_equal(PhaseAngle other, double eps) const {
  return std::abs(phase_difference(value_, other.value_)) <= eps;
}

Complex central_charge(const Charge& g, Complex u, const Scene& scene) {
  return scene.linear_form(g).value(u);
}

PhaseAngle support_phase(const Charge& g, Complex u, const Scene& scene) {
  Complex z = central_charge(g, u, scene);
  if (std::abs(z) <= kEpsNum)
    throw DegenerateChargeError("support_phase: Z vanishes for " + g.to_string());
  return PhaseAngle(std::arg(z) - M_PI / 2.0);
}

double disc_area(const Charge& g, Complex u, const Scene& scene) {
  return std::abs(central_charge(g, u, scene));
}

std::pair<double, Complex> rotated_periods(double a_omega, Complex z,
                                           PhaseAngle theta) {
  Complex rotated = std::polar(1.0, -theta.value()) * z;
  return {-rotated.imag(), Complex(a_omega, -rotated.real())};
}

double cr_residual(const Charge& g, Complex u, const Scene& scene, double h) {
  auto z = [&](Complex v) { return central_charge(g, v, scene); };
  Complex dx = (z(u + Complex(h, 0)) - z(u - Complex(h, 0))) / (2.0 * h);
  Complex dy = (z(u + Complex(0, h)) - z(u - Complex(0, h))) / (2.0 * h);
  return std::abs(dx + Complex(0, 1) * dy);
}

}  // namespace kswall
