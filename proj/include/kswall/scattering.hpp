#pragma once

#include <complex>
#include <map>
#include <vector>

#include "kswall/series.hpp"

namespace kswall {

// Phase-ordered KS factor: a primitive direction with its wall function
// (constant term 1, supported on positive multiples of the direction).
//
// Ordering/composition conventions used throughout:
//   * wall lists are ordered by descending support phase in the chamber
//     where the product is taken;
//   * compose_action applies the last list element first, so the list
//     [w1, ..., wm] acts as w1 ∘ w2 ∘ ... ∘ wm.
// Crossing a wall preserves the composed product, which pins the outgoing
// factorization uniquely order by order.
struct Wall {
  Charge direction;      // primitive, nonzero boundary
  FormalSeries function; // constant term 1; support on d*direction, d >= 1
  std::complex<double> anchor{0, 0};
  double phase = 0.0;    // Arg Z_direction at the anchor (reporting value)
};

// Checks the Wall invariants; throws InvalidWallError.
void validate_wall(const Wall& w);

// The substitution x^mu -> x^mu * f^{pair(mu, direction)} extended
// linearly, truncated at the series order.
FormalSeries act(const Wall& w, const FormalSeries& s);

// act for w1, then w2, ... applied right-to-left over the list.
FormalSeries compose_action(const std::vector<Wall>& walls, FormalSeries s);

// exp(sum_{d>=1} d * values[d] * x^{d gp}) truncated at order.
FormalSeries wall_function(const std::map<int, Rational>& values,
                           const Charge& gp, int order);

// Coefficient of x^{d gp} in log f, divided by d. Exact inverse of
// wall_function.
std::map<int, Rational> invariants_from_wall_function(const FormalSeries& f,
                                                      const Charge& gp,
                                                      int order);

// Unique minimal phase-ordered outgoing list with
//   compose(outgoing) == compose(incoming)  (mod degree order+1).
// Incoming walls must share an anchor; proportional directions are merged.
// Solved order by order in total degree over the cone spanned by the
// incoming directions.
std::vector<Wall> factorize_scattering(const std::vector<Wall>& incoming,
                                       int order);

}  // namespace kswall
