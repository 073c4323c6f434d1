#include "kswall/central_charge.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "kswall/errors.hpp"
#include "support/fixtures.hpp"

using namespace kswall;
using doctest::Approx;

TEST_CASE("central charge of the vanishing cycle") {
  Scene scene = fixtures::ov();
  CHECK(std::abs(central_charge(Charge(1, 0), {0, 0}, scene)) == 0.0);
  Complex z = central_charge(Charge(1, 0), {2, 1}, scene);
  CHECK(z.real() == Approx(2.0));
  CHECK(z.imag() == Approx(1.0));
}

TEST_CASE("central charge additivity and flux constants") {
  Scene scene = fixtures::with_flux();
  std::mt19937 rng(7);
  std::uniform_int_distribution<long long> d(-4, 4);
  std::uniform_real_distribution<double> x(-2, 2);
  for (int i = 0; i < 200; ++i) {
    Charge a(d(rng), 0, {d(rng)});
    Charge b(d(rng), 0, {d(rng)});
    Complex u{x(rng), x(rng)};
    Complex za = central_charge(a, u, scene);
    Complex zb = central_charge(b, u, scene);
    Complex zab = central_charge(a + b, u, scene);
    CHECK(std::abs(zab - za - zb) < 1e-12);
  }
  // flux-only charge has the constant value
  Complex zf = central_charge(Charge(0, 0, {2}), {1.3, -0.4}, scene);
  CHECK(zf.real() == Approx(0.5));
  CHECK(zf.imag() == Approx(1.0));
}

TEST_CASE("charges outside the scene basis are rejected") {
  Scene scene = fixtures::ov();  // boundary lattice spanned by (1,0) only
  CHECK_THROWS_AS(central_charge(Charge(0, 1), {1, 1}, scene), BasisError);
  Scene flux = fixtures::with_flux();
  CHECK_THROWS_AS(central_charge(Charge(1, 0, {0, 3}), {1, 1}, flux), BasisError);
}

TEST_CASE("ambiguous expressions are allowed only when Z is unaffected") {
  // Two singularities with equal thimbles but different slopes: the kernel
  // combination e0 - e1 changes Z, so decomposing the thimble class would be
  // ambiguous in a way Z can see.
  ChartRect chart{-2, -2, 2, 2};
  std::vector<Singularity> sings{
      {{-1.0, 0.0}, Charge(1, 0), {1.0, 0.0}, -M_PI / 2},
      {{1.0, 0.0}, Charge(1, 0), {2.0, 0.0}, -M_PI / 2}};
  Scene scene(chart, sings, 0, {}, {0.0, 1.0});
  CHECK_THROWS_AS(central_charge(Charge(1, 0), {0.5, 0.5}, scene), BasisError);

  // Same slopes and positions mirrored so the kernel combination has
  // constant zero Z: decomposition is ambiguous but harmless.
  std::vector<Singularity> sings2{
      {{0.5, 0.0}, Charge(1, 0), {1.0, 0.0}, -M_PI / 2},
      {{0.5, 0.0}, Charge(1, 0), {1.0, 0.0}, -M_PI / 2}};
  // (coincident positions are a validation error, but Z stays well defined)
  Scene scene2(chart, sings2, 0, {}, {0.0, 1.0});
  Complex z = central_charge(Charge(1, 0), {1.5, 0.0}, scene2);
  CHECK(z.real() == Approx(1.0));
}

TEST_CASE("support phase") {
  Scene scene = fixtures::ov();
  // Z(gamma_e at 2i) = 2i: phase of Z is pi/2, support phase 0
  CHECK(support_phase(Charge(1, 0), {0, 2}, scene).value() == Approx(0.0));
  // Z = 1 at u = 1: support phase -pi/2
  CHECK(support_phase(Charge(1, 0), {1, 0}, scene).value() == Approx(-M_PI / 2));
  CHECK_THROWS_AS(support_phase(Charge(1, 0), {0, 0}, scene), DegenerateChargeError);
}

TEST_CASE("phase canonicalization") {
  CHECK(PhaseAngle(3 * M_PI).value() == Approx(M_PI));
  CHECK(PhaseAngle(-M_PI).value() == Approx(M_PI));
  CHECK(PhaseAngle(0.3).approx_equal(PhaseAngle(0.3 + 4 * M_PI)));
  CHECK_FALSE(PhaseAngle(0.3).approx_equal(PhaseAngle(0.3 + M_PI)));
}

TEST_CASE("disc area") {
  Scene scene = fixtures::ov();
  CHECK(disc_area(Charge(1, 0), {3, 4}, scene) == Approx(5.0));
  CHECK(disc_area(Charge(1, 0), {0, 0}, scene) == Approx(0.0));
  // linear in the multiple
  for (int d = 1; d <= 5; ++d)
    CHECK(disc_area(Charge(d, 0), {1.2, -0.7}, scene) ==
          Approx(d * disc_area(Charge(1, 0), {1.2, -0.7}, scene)));
}

TEST_CASE("rotated periods") {
  auto [w, omega] = rotated_periods(0.0, {0, 1}, PhaseAngle(0.0));
  CHECK(w == Approx(-1.0));
  CHECK(std::abs(omega) == Approx(0.0));

  // aligning theta with the support phase kills the Omega-period up to A
  Scene scene = fixtures::ov();
  Complex z = central_charge(Charge(1, 0), {1.5, 0.8}, scene);
  PhaseAngle theta = support_phase(Charge(1, 0), {1.5, 0.8}, scene);
  auto [w2, om2] = rotated_periods(2.0, z, theta);
  CHECK(om2.real() == Approx(2.0));
  CHECK(om2.imag() == Approx(0.0).epsilon(1e-12));
  CHECK(w2 == Approx(-std::abs(z)));

  auto [w3, om3] = rotated_periods(2.0, {0, 0}, PhaseAngle(1.1));
  CHECK(w3 == Approx(0.0));
  CHECK(om3.real() == Approx(2.0));
}

TEST_CASE("cauchy-riemann residual vanishes for the linear model") {
  Scene scene = fixtures::with_flux();
  std::mt19937 rng(99);
  std::uniform_int_distribution<long long> d(-3, 3);
  std::uniform_real_distribution<double> x(-1.5, 1.5);
  for (int i = 0; i < 50; ++i) {
    Charge g(d(rng), 0, {d(rng)});
    Complex u{x(rng), x(rng)};
    CHECK(cr_residual(g, u, scene, 1e-4) < 1e-6);
  }
  CHECK(cr_residual(Charge(), {0.3, 0.4}, scene, 1e-4) == Approx(0.0));
}
