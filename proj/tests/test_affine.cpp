#include "kswall/affine.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "kswall/errors.hpp"
#include "kswall/invariants.hpp"
#include "support/fixtures.hpp"

using namespace kswall;
using doctest::Approx;

TEST_CASE("special line of the thimble at phase 0 is the imaginary axis") {
  Scene scene = fixtures::ov();
  SpecialLine l = special_line(Charge(1, 0), PhaseAngle(0.0), scene);
  REQUIRE(l.kind == SpecialLine::Kind::kSegment);
  CHECK(l.from.real() == Approx(0.0).epsilon(1e-12));
  CHECK(l.to.real() == Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(l.from.imag() - l.to.imag()) == Approx(5.0));

  SpecialLine l2 = special_line(Charge(1, 0), PhaseAngle(M_PI / 2), scene);
  REQUIRE(l2.kind == SpecialLine::Kind::kSegment);
  CHECK(l2.from.imag() == Approx(0.0).epsilon(1e-12));
  CHECK(l2.to.imag() == Approx(0.0).epsilon(1e-12));

  // doubling the charge keeps the zero set
  SpecialLine l3 = special_line(Charge(2, 0), PhaseAngle(0.0), scene);
  REQUIRE(l3.kind == SpecialLine::Kind::kSegment);
  CHECK(l3.from.real() == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("special line degenerate cases") {
  Scene scene = fixtures::with_flux();
  // flux-only charge: constant Z = 0.25 + 0.5i; Re(e^{-i theta} Z) vanishes
  // exactly when theta aligns Z with the imaginary axis
  Charge fluxonly(0, 0, {1});
  CHECK_THROWS_AS(special_line(fluxonly, PhaseAngle(0.0), scene),
                  DegenerateChargeError);
  double theta = std::arg(Complex(0.25, 0.5)) - M_PI / 2;
  SpecialLine whole = special_line(fluxonly, PhaseAngle(theta), scene);
  CHECK(whole.kind == SpecialLine::Kind::kWholeChart);
}

TEST_CASE("initial ray directions") {
  Scene scene = fixtures::ov();
  InitialRay r = initial_ray(0, PhaseAngle(0.0), scene);
  CHECK(r.direction.real() == Approx(0.0).epsilon(1e-12));
  CHECK(r.direction.imag() == Approx(1.0));
  CHECK(r.length == Approx(2.5));
  InitialRay r2 = initial_ray(0, PhaseAngle(-M_PI / 2), scene);
  CHECK(r2.direction.real() == Approx(1.0));
  CHECK(r2.direction.imag() == Approx(0.0).epsilon(1e-12));
}

TEST_CASE("every chart point lies on the initial ray of its support phase") {
  Scene scene = fixtures::pentagon();
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> x(-2.5, 2.5);
  for (int i = 0; i < 100; ++i) {
    Complex u{x(rng), x(rng)};
    for (std::size_t s = 0; s < scene.size(); ++s) {
      Complex b = scene.singularity(s).position;
      if (std::abs(u - b) < 1e-3) continue;
      PhaseAngle theta = support_phase(scene.thimble(s), u, scene);
      InitialRay ray = initial_ray(s, theta, scene);
      double t = ((u - ray.origin) * std::conj(ray.direction)).real();
      CHECK(t > 0);
      CHECK(std::abs(ray.origin + t * ray.direction - u) < 1e-9);
    }
  }
}

TEST_CASE("marginal wall of the collinear scene is the real axis beyond the sings") {
  Scene scene = fixtures::collinear();
  WallLocus wall = marginal_wall(Charge(1, 0), Charge(0, 1), scene);
  REQUIRE_FALSE(wall.degenerate);
  REQUIRE(wall.pieces.size() >= 2);
  std::size_t checked = 0;
  for (const auto& poly : wall.pieces)
    for (Complex p : poly) {
      CHECK(std::abs(p.imag()) < 1e-7);
      CHECK(std::abs(p.real()) > 1.0 - 1e-9);
      ++checked;
    }
  CHECK(checked > 100);
}

TEST_CASE("wall points satisfy the phase equality") {
  Scene scene = fixtures::pentagon();
  WallLocus wall = marginal_wall(Charge(1, 0), Charge(0, 1), scene);
  LinearForm z1 = scene.linear_form(Charge(1, 0));
  LinearForm z2 = scene.linear_form(Charge(0, 1));
  REQUIRE_FALSE(wall.pieces.empty());
  for (const auto& poly : wall.pieces)
    for (Complex p : poly) {
      if (scene.singularity_near(p, 1e-6)) continue;  // closure endpoints
      Complex prod = z1.value(p) * std::conj(z2.value(p));
      CHECK(prod.real() > 0);
      CHECK(std::abs(std::arg(prod)) < kEpsPhase);
    }
  // the pentagon wall is the upper unit semicircle
  for (const auto& poly : wall.pieces)
    for (Complex p : poly) {
      CHECK(std::abs(p) == Approx(1.0).epsilon(1e-6));
      CHECK(p.imag() > -1e-9);
    }
}

TEST_CASE("degenerate wall pairs are flagged") {
  Scene scene = fixtures::ov();
  WallLocus wall = marginal_wall(Charge(1, 0), Charge(2, 0), scene);
  CHECK(wall.degenerate);
  CHECK(wall.pieces.empty());
  Scene flux = fixtures::with_flux();
  // flux-only charge with Z = 0 identically is rejected
  Scene zero_flux(flux.chart(), {flux.singularity(0)}, 1, {{0.0, 0.0}},
                  flux.basepoint());
  CHECK_THROWS_AS(marginal_wall(Charge(1, 0), Charge(0, 0, {1}), zero_flux),
                  DegenerateChargeError);
}

TEST_CASE("analytic wall hits on a segment match the traced wall") {
  Scene scene = fixtures::pentagon();
  LinearForm z1 = scene.linear_form(Charge(1, 0));
  LinearForm z2 = scene.linear_form(Charge(0, 1));
  // segment from the basepoint through the upper unit circle
  Complex p{0.0, 0.0}, q{0.3, 1.8};
  auto hits = wall_hits_on_segment(z1, z2, p, q, 0.0);
  REQUIRE(hits.size() == 1);
  Complex w = p + hits[0] * (q - p);
  CHECK(std::abs(w) == Approx(1.0).epsilon(1e-9));
  CHECK(on_wall(z1, z2, w));
  // a segment staying inside the disc does not cross
  CHECK(wall_hits_on_segment(z1, z2, {0.0, 0.0}, {0.5, 0.3}, 0.0).empty());
  // anti-parallel locus (lower semicircle) is not a wall
  CHECK(wall_hits_on_segment(z1, z2, {0.0, 0.0}, {0.3, -1.8}, 0.0).empty());
}

TEST_CASE("affine coordinates") {
  Scene flux = fixtures::with_flux();
  Charge g1(1, 0), g2(0, 0, {1});
  auto [f1, f2] = affine_coords({1.25, -0.5}, PhaseAngle(0.0), g1, g2, flux);
  CHECK(f1 == Approx(1.25));
  CHECK(f2 == Approx(0.25));
  // shifting theta by pi negates both coordinates
  auto [g1v, g2v] = affine_coords({1.25, -0.5}, PhaseAngle(M_PI), g1, g2, flux);
  CHECK(g1v == Approx(-f1));
  CHECK(g2v == Approx(-f2));
}

TEST_CASE("boundary covector") {
  Scene scene = fixtures::ov();
  auto [dx, dy] = boundary_covector(Charge(1, 0), {0.3, 0.4}, PhaseAngle(0.0), scene);
  CHECK(dx == Approx(0.0));
  CHECK(dy == Approx(1.0));
  auto [zx, zy] = boundary_covector(Charge(), {0.3, 0.4}, PhaseAngle(0.7), scene);
  CHECK(zx == Approx(0.0));
  CHECK(zy == Approx(0.0));
  // additive in the charge
  Scene pent = fixtures::pentagon();
  auto [ax, ay] = boundary_covector(Charge(1, 0), {0.1, 0.2}, PhaseAngle(0.3), pent);
  auto [bx, by] = boundary_covector(Charge(0, 1), {0.1, 0.2}, PhaseAngle(0.3), pent);
  auto [cx, cy] = boundary_covector(Charge(1, 1), {0.1, 0.2}, PhaseAngle(0.3), pent);
  CHECK(cx == Approx(ax + bx));
  CHECK(cy == Approx(ay + by));
}

TEST_CASE("attractor ray in the one-singularity scene") {
  Scene scene = fixtures::ov();
  InvariantTable table = seed_table(scene, 6);
  AttractorRay ray = attractor_ray(Charge(1, 0), {0, 2}, scene, table);
  CHECK(ray.stop.kind == AttractorStop::Kind::kZero);
  CHECK(std::abs(ray.stop.point) < 1e-12);
  REQUIRE(ray.stop.singularity.has_value());
  CHECK(*ray.stop.singularity == 0);
  CHECK(ray.stop.thimble_multiple == 1);

  AttractorRay ray3 = attractor_ray(Charge(3, 0), {1.5, 1.0}, scene, table);
  CHECK(ray3.stop.thimble_multiple == 3);

  CHECK_THROWS_AS(attractor_ray(Charge(0, 0, {1}), {0, 2}, fixtures::with_flux(),
                                seed_table(fixtures::with_flux(), 6)),
                  UnsupportedClassError);
  CHECK_THROWS_AS(attractor_ray(Charge(1, 0), {0, 0}, scene, table),
                  DegenerateChargeError);
}

TEST_CASE("attractor ray stops at the pentagon wall") {
  Scene scene = fixtures::pentagon();
  InvariantTable table = seed_table(scene, 6);
  // flow of the combined class from past the wall: stops on the unit circle
  AttractorRay ray = attractor_ray(Charge(1, 1), {0.3, 1.8}, scene, table);
  REQUIRE(ray.stop.kind == AttractorStop::Kind::kWall);
  CHECK(std::abs(ray.stop.point) == Approx(1.0).epsilon(1e-9));
  // from inside the disc the flow reaches the zero of Z at -i
  AttractorRay ray2 = attractor_ray(Charge(1, 1), {0.0, 0.5}, scene, table);
  CHECK(ray2.stop.kind == AttractorStop::Kind::kZero);
  CHECK(std::abs(ray2.stop.point - Complex(0, -1)) < 1e-9);
  CHECK_FALSE(ray2.stop.singularity.has_value());
}

TEST_CASE("along the attractor ray the phase is constant and |Z| decreases") {
  Scene scene = fixtures::pentagon();
  InvariantTable table = seed_table(scene, 6);
  Charge g(1, 1);
  Complex u{0.3, 1.8};
  AttractorRay ray = attractor_ray(g, u, scene, table);
  LinearForm f = scene.linear_form(g);
  double phase0 = std::arg(f.value(u));
  double prev = std::abs(f.value(u));
  for (int k = 1; k <= 16; ++k) {
    Complex p = u + (ray.stop.point - u) * (k / 16.0);
    double mag = std::abs(f.value(p));
    CHECK(mag < prev);
    prev = mag;
    CHECK(std::abs(phase_difference(std::arg(f.value(p)), phase0)) < kEpsPhase);
  }
}
