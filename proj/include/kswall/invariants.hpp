#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kswall/affine.hpp"
#include "kswall/rational.hpp"
#include "kswall/scattering.hpp"

namespace kswall {

// Chamber-anchored map from charges to exact disc-counting invariants.
// Engine-produced tables store only the representative with positive
// leading coordinate; the value of -gamma equals the value of gamma.
class InvariantTable {
 public:
  InvariantTable() = default;
  InvariantTable(Complex anchor, int order) : anchor_(anchor), order_(order) {}

  Complex anchor() const { return anchor_; }
  void set_anchor(Complex a) { anchor_ = a; }
  int order() const { return order_; }
  const std::map<Charge, Rational>& entries() const { return values_; }

  // Looks up gamma or -gamma; zero when absent. The zero charge has no
  // invariant and is rejected.
  Rational value(const Charge& g) const;
  // Canonicalizing insert (used by the engine).
  void set(const Charge& g, const Rational& v);
  void add(const Charge& g, const Rational& v);
  // Verbatim insert (used by the parser; may break canonicality).
  void set_raw(const Charge& g, const Rational& v);

  // Primitive directions carrying at least one nonzero value.
  std::vector<Charge> active_directions() const;

  bool operator==(const InvariantTable& o) const {
    return values_ == o.values_ && order_ == o.order_;
  }

  std::string to_text() const;
  static std::optional<InvariantTable> parse(std::string_view text);

 private:
  Complex anchor_{0, 0};
  int order_ = 0;
  std::map<Charge, Rational> values_;
};

// Omega~(d gamma_e) near a singularity: (-1)^{|d|-1} / d^2.
Rational initial_invariants(int d);

// Reference table in the basepoint chamber: the multiple-cover data of
// every thimble, up to the truncation order.
InvariantTable seed_table(const Scene& scene, int order);

// True when stored values are symmetric under gamma -> -gamma.
bool reality_check(const InvariantTable& table);

struct WallCrossingEvent {
  Charge g1, g2;          // defining pair of the wall
  Complex point;          // crossing point
  Complex incoming_rep;   // chamber representatives on both sides
  Complex outgoing_rep;
  InvariantTable before;
  InvariantTable after;
  std::string to_text() const;
};

// Transports the table along a polyline: Picard-Lefschetz relabeling at
// branch-cut crossings, scattering at wall crossings.
InvariantTable propagate(const InvariantTable& table, const Polyline& path,
                         const Scene& scene,
                         std::vector<WallCrossingEvent>* events = nullptr);

// Invariant of gamma at u, propagated from the basepoint chamber along the
// straight path. Throws WallAmbiguityError when u lies on an active wall.
Rational invariant_at(const Charge& g, Complex u, int order, const Scene& scene);

// One wall crossing applied to a table anchored next to the wall; the
// approach direction is anchor -> point extended through the wall.
WallCrossingEvent cross_wall(const InvariantTable& table, const WallLocus& wall,
                             Complex point, const Scene& scene);

// Wall-crossing jump of Omega~(d gamma) from weighted tropical disc counts,
// evaluated against the incoming-side table at the wall point.
Rational delta_tropical(const Charge& g, int d,
                        const std::vector<Charge>& wall_charges,
                        const InvariantTable& table, Complex point,
                        const Scene& scene);

// Integer invariants from the multiple-cover inversion
//   Omega~(m gamma) = sum_{k | m} (-1)^{k-1} k^{-2} Omega((m/k) gamma).
// sigma = -1 twists the input by sigma^d before inverting (quadratic
// refinement choice for even-pairing rays); non-integral output is
// reported, not thrown.
struct GvResult {
  std::map<int, Rational> omega;
  bool all_integer = true;
};
GvResult gv_invariants(const std::map<int, Rational>& values, int order,
                       int sigma = 1);

}  // namespace kswall
