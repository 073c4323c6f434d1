#include "kswall/tropical.hpp"

#include <cmath>

#include "doctest.h"
#include "kswall/errors.hpp"
#include "support/fixtures.hpp"

using namespace kswall;
using doctest::Approx;

namespace {

TropicalDisc single_leg_disc(Complex root, Complex sing, int weight,
                             const Charge& thimble) {
  TropicalDisc d;
  d.vertices = {root, sing};
  d.edges.push_back({0, 1, weight, thimble * weight});
  d.root = 0;
  return d;
}

}  // namespace

TEST_CASE("validate: thimble leg") {
  Scene scene = fixtures::ov();
  TropicalDisc leg = single_leg_disc({0, 2}, {0, 0}, 1, Charge(1, 0));
  CHECK(validate(leg, scene).empty());
  TropicalDisc multi = single_leg_disc({0, 2}, {0, 0}, 3, Charge(1, 0));
  CHECK(validate(multi, scene).empty());
}

TEST_CASE("validate: broken discs are reported by clause") {
  Scene scene = fixtures::ov();
  // leg not along the invariant direction (flow segment check)
  TropicalDisc bent = single_leg_disc({1.0, 2.0}, {0.5, 0.0}, 1, Charge(1, 0));
  bool clause1 = false;
  for (const auto& i : validate(bent, scene)) clause1 |= i.clause == 1;
  CHECK(clause1);

  // leaf away from a singularity
  TropicalDisc floating = single_leg_disc({0, 2}, {0, 1}, 1, Charge(1, 0));
  bool clause3 = false;
  for (const auto& i : validate(floating, scene)) clause3 |= (i.clause == 3 || i.clause == 1);
  CHECK(clause3);

  // root on the singularity
  TropicalDisc rooted = single_leg_disc({0, 0}, {0, 2}, 1, Charge(1, 0));
  bool clause2 = false;
  for (const auto& i : validate(rooted, scene)) clause2 |= i.clause == 2;
  CHECK(clause2);
}

TEST_CASE("validate: balancing at the pentagon vertex") {
  Scene scene = fixtures::pentagon();
  // Y-disc: root past the wall, vertex on the wall, legs to both singularities
  Complex root{0.0, 2.0};
  Complex vertex{0.0, 1.0};  // on the unit circle where the rays cross
  TropicalDisc y;
  y.vertices = {root, vertex, {-1.0, 0.0}, {1.0, 0.0}};
  y.edges.push_back({0, 1, 1, Charge(1, 1)});
  y.edges.push_back({1, 2, 1, Charge(1, 0)});
  y.edges.push_back({1, 3, 1, Charge(0, 1)});
  y.root = 0;
  CHECK(validate(y, scene).empty());

  // wrong weights break conservation
  TropicalDisc bad = y;
  bad.edges[1].charge = Charge(3, 0);
  bad.edges[1].weight = 3;
  bool clause4 = false;
  for (const auto& i : validate(bad, scene)) clause4 |= i.clause == 4;
  CHECK(clause4);
}

TEST_CASE("relative class and affine length of simple discs") {
  Scene scene = fixtures::ov();
  TropicalDisc leg = single_leg_disc({0, 2}, {0, 0}, 1, Charge(1, 0));
  CHECK(relative_class(leg, scene) == Charge(1, 0));
  CHECK(affine_length(leg, scene) == Approx(2.0));
  TropicalDisc twice = single_leg_disc({0, 2}, {0, 0}, 2, Charge(1, 0));
  CHECK(relative_class(twice, scene) == Charge(2, 0));
  CHECK(affine_length(twice, scene) == Approx(4.0));
}

TEST_CASE("tropicalize: the one-singularity flow gives the single leg") {
  Scene scene = fixtures::ov();
  auto discs = tropicalize(Charge(1, 0), {0, 2}, 6, scene);
  REQUIRE(discs.size() == 1);
  CHECK(validate(discs[0], scene).empty());
  CHECK(relative_class(discs[0], scene) == Charge(1, 0));
  CHECK(discs[0].edges.size() == 1);
  CHECK(affine_length(discs[0], scene) ==
        Approx(disc_area(Charge(1, 0), {0, 2}, scene)));

  auto multi = tropicalize(Charge(3, 0), {1.2, 1.4}, 6, scene);
  REQUIRE(multi.size() == 1);
  CHECK(multi[0].edges.size() == 1);
  CHECK(multi[0].edges[0].weight == 3);
  CHECK(relative_class(multi[0], scene) == Charge(3, 0));
}

TEST_CASE("tropicalize: pentagon Y-disc past the wall, nothing before") {
  Scene scene = fixtures::pentagon();
  Charge g(1, 1);
  Complex u{0.3, 1.8};
  auto discs = tropicalize(g, u, 6, scene);
  REQUIRE(discs.size() == 1);
  const TropicalDisc& d = discs[0];
  CHECK(validate(d, scene).empty());
  CHECK(relative_class(d, scene) == g);
  CHECK(affine_length(d, scene) == Approx(disc_area(g, u, scene)).epsilon(1e-9));
  CHECK(d.edges.size() == 3);
  // trivalent vertex on the wall
  bool found_vertex = false;
  for (Complex v : d.vertices)
    if (std::abs(std::abs(v) - 1.0) < 1e-7 && v.imag() > 0) found_vertex = true;
  CHECK(found_vertex);
  // every leafward path ends on a singularity
  for (const auto& e : d.edges) {
    bool has_child = false;
    for (const auto& e2 : d.edges) has_child |= e2.from == e.to;
    if (!has_child) CHECK(scene.singularity_near(d.vertices[e.to]).has_value());
  }

  CHECK(tropicalize(g, {0.0, 0.5}, 6, scene).empty());   // before the wall
  CHECK(tropicalize(g, {0.0, -0.8}, 6, scene).empty());  // below, no wall hit
}

TEST_CASE("tropicalize rejects unsupported inputs") {
  Scene scene = fixtures::pentagon();
  CHECK_THROWS_AS(tropicalize(Charge(0, 0, {1}), {0, 1.5}, 6, fixtures::with_flux()),
                  UnsupportedClassError);
  // root on the wall
  CHECK_THROWS_AS(tropicalize(Charge(1, 1), std::polar(1.0, 1.3), 6, scene),
                  WallAmbiguityError);
}

TEST_CASE("count_tropical: single vertex values") {
  Scene scene = fixtures::pentagon();
  Complex w = std::polar(1.0, 1.42);  // on the wall
  std::vector<Charge> dirs{Charge(1, 0), Charge(0, 1)};
  CHECK(count_tropical({{1}, {1}}, dirs, w, scene) == 1);
  CHECK(count_tropical({{2}, {1}}, dirs, w, scene) == 2);
  CHECK(count_tropical({{2}, {2}}, dirs, w, scene) == 4);
  CHECK(count_tropical({{1}, {}}, dirs, w, scene) == 0);  // empty part
}

TEST_CASE("count_tropical: multi-leg values frozen from the jump identities") {
  Scene scene = fixtures::pentagon();
  Complex w = std::polar(1.0, 1.42);
  std::vector<Charge> dirs{Charge(1, 0), Charge(0, 1)};
  CHECK(count_tropical({{1}, {1, 1}}, dirs, w, scene) == 1);
  CHECK(count_tropical({{1, 1}, {1, 1}}, dirs, w, scene) == 2);
  CHECK(count_tropical({{2}, {1, 1}}, dirs, w, scene) == 4);
  CHECK(count_tropical({{1}, {1, 1, 1}}, dirs, w, scene) == 1);
  CHECK(count_tropical({{1}, {2, 1}}, dirs, w, scene) == 2);
}

TEST_CASE("count_tropical at pairing 2") {
  // realize pairing 2 with thimbles (1,0) and (1,2) at the same point
  ChartRect chart{-3, -3, 3, 3};
  const double r = std::sqrt(0.5);
  std::vector<Singularity> sings{
      {{-1.0, 0.0}, Charge(1, 0), {r, r}, -M_PI / 2},
      {{1.0, 0.0}, Charge(1, 2), {r, -r}, -M_PI / 2}};
  Scene scene(chart, sings, 0, {}, {0.0, 0.0});
  std::vector<Charge> dirs{Charge(1, 0), Charge(1, 2)};
  Complex w = std::polar(1.0, 1.42);
  CHECK(count_tropical({{1}, {1}}, dirs, w, scene) == 2);
}

TEST_CASE("count_tropical is alignment-checked") {
  Scene scene = fixtures::pentagon();
  std::vector<Charge> dirs{Charge(1, 0), Charge(0, 1)};
  CHECK_THROWS_AS(count_tropical({{1}, {1}}, dirs, {0.2, 0.4}, scene),
                  UnsupportedClassError);
}
