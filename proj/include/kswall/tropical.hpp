#pragma once

#include <string>
#include <vector>

#include "kswall/invariants.hpp"
#include "kswall/scene.hpp"

namespace kswall {

// Rooted weighted tree mapped to the base. Edges are stored rootward to
// leafward; each carries the charge of its subtree (weight times the
// primitive class) so charge conservation at a vertex reads
// charge(rootward edge) = sum of charges(leafward edges).
struct DiscEdge {
  int from = 0;  // rootward vertex index
  int to = 0;    // leafward vertex index
  int weight = 1;
  Charge charge;
};

struct TropicalDisc {
  std::vector<Complex> vertices;
  std::vector<DiscEdge> edges;
  int root = 0;
  double phase = 0.0;  // support phase of the class at the root

  std::string to_text() const;
};

// Violations of the defining clauses:
//   1  edges are nondegenerate flow segments of their charges
//   2  root lies in the smooth part of the chart
//   3  non-root leaves sit at singularities, legs along the invariant
//      direction with a positive thimble multiple
//   4  balancing (charge conservation and phase alignment) at vertices
struct ValidationIssue {
  int clause = 0;
  std::string message;
};
std::vector<ValidationIssue> validate(const TropicalDisc& disc, const Scene& scene);

// Sum of leaf charges parallel-transported to the root along the tree.
Charge relative_class(const TropicalDisc& disc, const Scene& scene);

// Sum over edges of |Z_charge(from) - Z_charge(to)|.
double affine_length(const TropicalDisc& disc, const Scene& scene);

// All tropical discs produced by the attractor flow of (gamma, u): flow
// toward the zero of Z, branch over splittings at active walls, terminate
// on thimble multiples at singularities. Requires nonzero boundary.
std::vector<TropicalDisc> tropicalize(const Charge& g, Complex u, int order,
                                      const Scene& scene);

// Weight vector of a splitting: one multiset of positive weights per wall
// charge.
using WeightVector = std::vector<std::vector<int>>;

// Embedded count of trivalent tropical discs with leaves of weights w_ij in
// the given directions, legs on generically displaced parallel lines, each
// tree counted with the product of |pairing| over its vertices. Exact
// rational geometry; requires phase-aligned directions and at most 8 legs.
long long count_tropical(const WeightVector& w, const std::vector<Charge>& directions,
                         Complex point, const Scene& scene);

}  // namespace kswall
