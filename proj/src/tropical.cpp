#include "kswall/tropical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "kswall/central_charge.hpp"
#include "kswall/errors.hpp"

namespace kswall {

std::string TropicalDisc::to_text() const {
  std::ostringstream os;
  os << "root = " << root << '\n';
  for (std::size_t i = 0; i < vertices.size(); ++i)
    os << "vertex " << i << " = " << vertices[i].real() << ' ' << vertices[i].imag()
       << '\n';
  for (const auto& e : edges)
    os << "edge " << e.from << " -> " << e.to << " weight " << e.weight << " charge "
       << e.charge.to_string() << '\n';
  return os.str();
}

namespace {

// Flow direction of the charge at u: along it |Z| decreases at constant
// phase. Undefined for constant or vanishing Z.
std::optional<Complex> flow_direction(const LinearForm& f, Complex u) {
  Complex z = f.value(u);
  if (std::abs(z) <= kEpsNum || std::abs(f.slope) <= kEpsNum) return std::nullopt;
  Complex d = -z / f.slope;
  return d / std::abs(d);
}

}  // namespace

std::vector<ValidationIssue> validate(const TropicalDisc& disc, const Scene& scene) {
  std::vector<ValidationIssue> issues;
  auto bad = [&](int clause, std::string msg) {
    issues.push_back({clause, std::move(msg)});
  };

  if (disc.root < 0 || disc.root >= static_cast<int>(disc.vertices.size())) {
    bad(2, "root index out of range");
    return issues;
  }
  // clause 2: root in the smooth chart
  Complex rp = disc.vertices[disc.root];
  if (!scene.chart().contains(rp, kEpsGeom)) bad(2, "root outside the chart");
  if (scene.singularity_near(rp)) bad(2, "root sits on a singularity");

  std::vector<int> valence(disc.vertices.size(), 0);
  for (const auto& e : disc.edges) {
    if (e.from < 0 || e.to < 0 || e.from >= static_cast<int>(disc.vertices.size()) ||
        e.to >= static_cast<int>(disc.vertices.size())) {
      bad(1, "edge endpoint out of range");
      continue;
    }
    ++valence[e.from];
    ++valence[e.to];
    Complex a = disc.vertices[e.from], b = disc.vertices[e.to];
    if (std::abs(b - a) <= kEpsGeom) {
      bad(1, "degenerate edge segment");
      continue;
    }
    if (e.weight < 1) bad(1, "edge weight must be positive");
    if (e.charge.content() != 0 && e.charge.content() != e.weight)
      bad(1, "edge weight is not the content of its charge");
    LinearForm f = scene.linear_form(e.charge);
    auto dir = flow_direction(f, a);
    if (!dir) {
      bad(1, "edge charge has no flow direction at its rootward vertex");
      continue;
    }
    Complex seg = (b - a) / std::abs(b - a);
    if (std::abs(seg - *dir) > 1e-7)
      bad(1, "edge is not a flow segment of its charge");
  }

  // leaves: non-root valence-1 vertices
  for (std::size_t v = 0; v < disc.vertices.size(); ++v) {
    if (static_cast<int>(v) == disc.root || valence[v] != 1) continue;
    auto si = scene.singularity_near(disc.vertices[v]);
    // only leafward endpoints of edges count as leaves of the tree
    const DiscEdge* leg = nullptr;
    for (const auto& e : disc.edges)
      if (e.to == static_cast<int>(v)) leg = &e;
    if (!leg) continue;
    if (!si) {
      bad(3, "leaf vertex " + std::to_string(v) + " is not at a singularity");
      continue;
    }
    const Charge& thimble = scene.thimble(*si);
    if (leg->charge != thimble * leg->weight)
      bad(3, "leaf leg carries " + leg->charge.to_string() + ", not a positive multiple of " +
                 thimble.to_string());
    // monodromy invariant direction: the leg must lie on the line where
    // Z_thimble keeps constant phase through the singularity
    LinearForm f = scene.linear_form(thimble);
    Complex za = f.value(disc.vertices[leg->from]);
    if (std::abs((za * std::conj(f.slope * (disc.vertices[leg->from] -
                                            disc.vertices[leg->to])))
                     .imag()) > 1e-7 * std::abs(za))
      bad(3, "leaf leg leaves the invariant direction");
  }

  // clause 4: conservation and phase alignment at interior vertices
  for (std::size_t v = 0; v < disc.vertices.size(); ++v) {
    if (valence[v] < 2) continue;
    Charge in_sum, out_sum;
    bool has_in = false;
    std::vector<const DiscEdge*> adjacent;
    for (const auto& e : disc.edges) {
      if (e.to == static_cast<int>(v)) {
        in_sum = in_sum + e.charge;
        has_in = true;
        adjacent.push_back(&e);
      } else if (e.from == static_cast<int>(v)) {
        out_sum = out_sum + e.charge;
        adjacent.push_back(&e);
      }
    }
    if (static_cast<int>(v) == disc.root) continue;
    if (!has_in) continue;
    if (!(in_sum == out_sum))
      bad(4, "charge conservation fails at vertex " + std::to_string(v));
    // phase alignment of all adjacent charges at the vertex
    std::optional<double> phase;
    for (const auto* e : adjacent) {
      Complex z = scene.linear_form(e->charge).value(disc.vertices[v]);
      if (std::abs(z) <= kEpsNum) continue;
      double ph = std::arg(z);
      if (!phase) {
        phase = ph;
      } else if (std::abs(phase_difference(ph, *phase)) > 1e-7) {
        bad(4, "edges at vertex " + std::to_string(v) + " are not phase aligned");
        break;
      }
    }
  }
  return issues;
}

Charge relative_class(const TropicalDisc& disc, const Scene& scene) {
  // tree adjacency rootward -> leafward
  std::vector<std::vector<const DiscEdge*>> children(disc.vertices.size());
  for (const auto& e : disc.edges) children[e.from].push_back(&e);

  Charge total;
  // walk every root-to-leaf path, transport the leaf charge back up
  std::function<void(int, std::vector<Complex>&)> walk = [&](int v,
                                                             std::vector<Complex>& path) {
    if (children[v].empty()) {
      if (v == disc.root) return;
      // leaf: transport its leg charge back along the reversed path
      const DiscEdge* leg = nullptr;
      for (const auto& e : disc.edges)
        if (e.to == v) leg = &e;
      if (!leg) return;
      // nudge the endpoint off the singularity for the transport
      std::vector<Complex> rev(path.rbegin(), path.rend());
      if (rev.size() >= 2) {
        Complex dir = rev[1] - rev[0];
        rev[0] += 1e-7 * dir / std::abs(dir);
      }
      total = total + parallel_transport(leg->charge, BasePath{rev}, scene);
      return;
    }
    for (const auto* e : children[v]) {
      path.push_back(disc.vertices[e->to]);
      walk(e->to, path);
      path.pop_back();
    }
  };
  std::vector<Complex> path{disc.vertices[disc.root]};
  walk(disc.root, path);
  return total;
}

double affine_length(const TropicalDisc& disc, const Scene& scene) {
  double total = 0;
  for (const auto& e : disc.edges) {
    LinearForm f = scene.linear_form(e.charge);
    total += std::abs(f.value(disc.vertices[e.from]) - f.value(disc.vertices[e.to]));
  }
  return total;
}

namespace {

// ---- attractor-flow recursion -------------------------------------------

struct FlowContext {
  const Scene* scene;
  int order;
};

// A partial disc grown from a point: tree fragments merged into the caller.
struct SubTree {
  std::vector<Complex> vertices;  // [0] is the attachment point
  std::vector<DiscEdge> edges;    // indices into `vertices`
};

// decompositions of `g` into >= 2 parts inside the coordinate box of g,
// as canonically sorted part lists
std::vector<std::vector<Charge>> box_decompositions(const Charge& g,
                                                    const Scene& scene) {
  Decomposition dec = scene.decompose(g);
  std::vector<long long> coords = dec.thimble;
  coords.insert(coords.end(), dec.flux.begin(), dec.flux.end());
  const std::size_t n = coords.size();
  const std::size_t nth = dec.thimble.size();

  // enumerate box parts (componentwise between 0 and coords), nonzero
  std::vector<std::vector<long long>> parts;
  std::vector<long long> cur(n, 0);
  std::function<void(std::size_t)> gen = [&](std::size_t i) {
    if (i == n) {
      for (long long c : cur)
        if (c != 0) {
          parts.push_back(cur);
          return;
        }
      return;
    }
    long long lo = std::min<long long>(0, coords[i]);
    long long hi = std::max<long long>(0, coords[i]);
    for (long long c = lo; c <= hi; ++c) {
      cur[i] = c;
      gen(i + 1);
    }
    cur[i] = 0;
  };
  gen(0);

  auto to_charge = [&](const std::vector<long long>& c) {
    Charge out;
    for (std::size_t i = 0; i < nth; ++i)
      out = out + scene.thimble(i) * c[i];
    std::vector<long long> flux(c.begin() + nth, c.end());
    return out + Charge(0, 0, std::move(flux));
  };

  // multiset decompositions: non-increasing sequences of part indices
  std::sort(parts.begin(), parts.end());
  std::vector<std::vector<Charge>> out;
  std::vector<std::size_t> chosen;
  std::function<void(std::vector<long long>, std::size_t)> rec =
      [&](std::vector<long long> rest, std::size_t max_idx) {
        bool rest_zero = std::all_of(rest.begin(), rest.end(),
                                     [](long long x) { return x == 0; });
        if (rest_zero) {
          if (chosen.size() >= 2) {
            std::vector<Charge> d;
            for (std::size_t idx : chosen) d.push_back(to_charge(parts[idx]));
            out.push_back(std::move(d));
          }
          return;
        }
        for (std::size_t idx = std::min(max_idx, parts.size() - 1) + 1; idx-- > 0;) {
          const auto& p = parts[idx];
          std::vector<long long> next(rest);
          bool fits = true;
          for (std::size_t i = 0; i < n; ++i) {
            next[i] -= p[i];
            // stay inside the box of the remainder
            if (coords[i] >= 0 ? (next[i] < 0) : (next[i] > 0)) fits = false;
          }
          if (!fits) continue;
          chosen.push_back(idx);
          rec(next, idx);
          chosen.pop_back();
        }
      };
  rec(coords, parts.size() - 1);
  return out;
}

std::vector<SubTree> flow(const Charge& g, Complex u, const FlowContext& cx,
                          int depth);

// Discs for one decomposition at a split point: the cartesian product of
// the parts' subtrees merged at the vertex.
void combine_parts(const std::vector<Charge>& parts, Complex at, const FlowContext& cx,
                   int depth, std::vector<SubTree>* out) {
  std::vector<std::vector<SubTree>> options;
  for (const Charge& part : parts) {
    auto subs = flow(part, at, cx, depth + 1);
    if (subs.empty()) return;  // no disc for this part: decomposition dies
    options.push_back(std::move(subs));
  }
  std::vector<std::size_t> pick(options.size(), 0);
  while (true) {
    SubTree merged;
    merged.vertices.push_back(at);
    for (std::size_t i = 0; i < options.size(); ++i) {
      const SubTree& s = options[i][pick[i]];
      int base = static_cast<int>(merged.vertices.size());
      // s.vertices[0] == at: splice vertices 1.. and remap edges
      for (std::size_t v = 1; v < s.vertices.size(); ++v)
        merged.vertices.push_back(s.vertices[v]);
      for (const auto& e : s.edges) {
        DiscEdge me = e;
        me.from = e.from == 0 ? 0 : base + e.from - 1;
        me.to = e.to == 0 ? 0 : base + e.to - 1;
        merged.edges.push_back(me);
      }
    }
    out->push_back(std::move(merged));
    std::size_t i = 0;
    while (i < options.size() && ++pick[i] == options[i].size()) {
      pick[i] = 0;
      ++i;
    }
    if (i == options.size()) break;
  }
}

std::vector<SubTree> flow(const Charge& g, Complex u, const FlowContext& cx,
                          int depth) {
  std::vector<SubTree> result;
  if (depth > 32 || g.degree() > cx.order) return result;
  const Scene& scene = *cx.scene;
  LinearForm f = scene.linear_form(g);
  Complex z = f.value(u);
  if (std::abs(z) <= kEpsNum) return result;
  auto zero = f.zero();
  if (!zero) return result;  // constant Z: no attractor flow, no disc
  Complex target = *zero;
  double phase = std::arg(z);

  // branch cuts crossing the flow would relabel the charge; unsupported
  // (scenes for disc computations keep cuts away from flows)
  Complex shaved = u + 0.999999 * (target - u);
  for (const auto& c : cut_crossings(u, shaved, scene)) {
    (void)c;
    throw GeometryError(
        "tropicalize: attractor flow crosses a branch cut; move the cuts");
  }

  // candidate split events: alignment parameters of box parts
  auto decomps = box_decompositions(g, scene);
  Complex rot = std::polar(1.0, -phase);
  struct Event {
    double t;
    std::vector<const std::vector<Charge>*> decomps;
  };
  std::vector<double> times;
  std::vector<std::vector<Charge>> aligned_decomps;
  const double t_lo = 1e-9, t_hi = 1.0 - 1e-9;
  auto align_t = [&](const Charge& part) -> std::optional<double> {
    LinearForm pf = scene.linear_form(part);
    Complex a = rot * (pf.slope * (target - u));
    Complex b = rot * pf.value(u);
    // proportional to gamma: aligned along the whole segment
    if (std::abs(a.imag()) < 1e-14 && std::abs(b.imag()) < 1e-14)
      return std::nullopt;  // aligned everywhere (or anti-aligned: checked later)
    if (std::abs(a.imag()) < 1e-14) return -2.0;  // never aligned
    return -b.imag() / a.imag();
  };
  auto aligned_at = [&](const Charge& part, double t) {
    LinearForm pf = scene.linear_form(part);
    Complex v = rot * pf.value(u + t * (target - u));
    return v.real() > kEpsNum && std::abs(v.imag()) <= 1e-9 * (1 + v.real());
  };

  for (const auto& dec : decomps) {
    // a split needs at least one non-proportional pair
    bool has_wall_pair = false;
    for (std::size_t i = 0; i < dec.size() && !has_wall_pair; ++i)
      for (std::size_t j = i + 1; j < dec.size(); ++j) {
        Charge pi = dec[i].primitive(), pj = dec[j].primitive();
        if (!(pi == pj) && !(pi == -pj)) {
          has_wall_pair = true;
          break;
        }
      }
    if (!has_wall_pair) continue;
    // common alignment parameter of all non-proportional parts
    std::optional<double> t;
    bool consistent = true;
    for (const Charge& part : dec) {
      auto tp = align_t(part);
      if (!tp) continue;  // aligned everywhere
      if (*tp < t_lo || *tp > t_hi) {
        consistent = false;
        break;
      }
      if (!t) {
        t = tp;
      } else if (std::abs(*t - *tp) > 1e-9) {
        consistent = false;
        break;
      }
    }
    if (!consistent || !t) continue;
    // positive alignment of every part at the split point
    bool ok = true;
    for (const Charge& part : dec)
      if (!aligned_at(part, *t)) {
        ok = false;
        break;
      }
    if (!ok) continue;
    times.push_back(*t);
    aligned_decomps.push_back(dec);
  }

  // split events, sorted along the flow
  std::vector<std::size_t> idx(aligned_decomps.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

  for (std::size_t k : idx) {
    Complex at = u + times[k] * (target - u);
    std::vector<SubTree> branches;
    combine_parts(aligned_decomps[k], at, cx, depth, &branches);
    for (auto& br : branches) {
      SubTree s;
      s.vertices.push_back(u);
      s.vertices.push_back(at);
      DiscEdge root_edge;
      root_edge.from = 0;
      root_edge.to = 1;
      root_edge.weight = static_cast<int>(std::max<long long>(1, g.content()));
      root_edge.charge = g;
      s.edges.push_back(root_edge);
      int base = 1;  // br.vertices[0] == at maps to index 1
      for (std::size_t v = 1; v < br.vertices.size(); ++v)
        s.vertices.push_back(br.vertices[v]);
      for (const auto& e : br.edges) {
        DiscEdge me = e;
        me.from = e.from == 0 ? base : base + e.from;
        me.to = e.to == 0 ? base : base + e.to;
        s.edges.push_back(me);
      }
      result.push_back(std::move(s));
    }
  }

  // terminal event: a thimble multiple ending on its singularity
  if (auto si = scene.singularity_near(target)) {
    Decomposition dec = scene.decompose(g);
    bool pure = true;
    long long mult = 0;
    for (std::size_t i = 0; i < dec.thimble.size(); ++i) {
      if (i == *si)
        mult = dec.thimble[i];
      else if (dec.thimble[i] != 0)
        pure = false;
    }
    for (long long fc : dec.flux)
      if (fc != 0) pure = false;
    if (pure && mult >= 1) {
      SubTree leaf;
      leaf.vertices.push_back(u);
      leaf.vertices.push_back(target);
      DiscEdge e;
      e.from = 0;
      e.to = 1;
      e.weight = static_cast<int>(mult);
      e.charge = g;
      leaf.edges.push_back(e);
      result.push_back(std::move(leaf));
    }
  }
  return result;
}

std::string canonical_key(const TropicalDisc& d) { return d.to_text(); }

}  // namespace

std::vector<TropicalDisc> tropicalize(const Charge& g, Complex u, int order,
                                      const Scene& scene) {
  if (g.boundary_is_zero())
    throw UnsupportedClassError("tropicalize: zero boundary class is unsupported");
  LinearForm f = scene.linear_form(g);
  if (std::abs(f.value(u)) <= kEpsNum)
    throw DegenerateChargeError("tropicalize: Z vanishes at the root");

  // refuse roots on an active wall for some box splitting of gamma
  for (const auto& dec : box_decompositions(g, scene)) {
    bool aligned = true;
    std::optional<double> ph;
    for (const Charge& part : dec) {
      Complex z = scene.linear_form(part).value(u);
      if (std::abs(z) <= kEpsNum) {
        aligned = false;
        break;
      }
      double p = std::arg(z);
      if (!ph) {
        ph = p;
      } else if (std::abs(phase_difference(p, *ph)) > kEpsPhase) {
        aligned = false;
        break;
      }
    }
    bool nonprop = false;
    for (std::size_t i = 0; i < dec.size() && !nonprop; ++i)
      for (std::size_t j = i + 1; j < dec.size(); ++j)
        if (!(dec[i].primitive() == dec[j].primitive())) nonprop = true;
    if (aligned && nonprop)
      throw WallAmbiguityError("tropicalize: root lies on an active wall");
  }

  FlowContext cx{&scene, std::max<int>(order, static_cast<int>(g.degree()))};
  std::vector<TropicalDisc> out;
  for (const SubTree& s : flow(g, u, cx, 0)) {
    TropicalDisc d;
    d.vertices = s.vertices;
    d.edges = s.edges;
    d.root = 0;
    d.phase = support_phase(g, u, scene).value();
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), [](const TropicalDisc& a, const TropicalDisc& b) {
    return canonical_key(a) < canonical_key(b);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const TropicalDisc& a, const TropicalDisc& b) {
                          return canonical_key(a) == canonical_key(b);
                        }),
            out.end());
  return out;
}

// ---- embedded tropical counting -----------------------------------------

namespace {

struct Vec2q {
  Rational x, y;
};

Vec2q operator+(const Vec2q& a, const Vec2q& b) { return {a.x + b.x, a.y + b.y}; }
Vec2q operator-(const Vec2q& a, const Vec2q& b) { return {a.x - b.x, a.y - b.y}; }
Vec2q scale(const Rational& c, const Vec2q& v) { return {c * v.x, c * v.y}; }
Rational cross_q(const Vec2q& a, const Vec2q& b) { return a.x * b.y - a.y * b.x; }

struct Particle {
  Charge charge;   // weighted charge of the subtree
  Vec2q base;      // point on the support line / ray vertex
  Vec2q dir;       // rootward tangent (exact, scale only matters projectively)
  bool is_line;    // leaves are full lines, internal edges forward rays
  long long mult;  // product of vertex multiplicities so far
};

}  // namespace

long long count_tropical(const WeightVector& w, const std::vector<Charge>& directions,
                         Complex point, const Scene& scene) {
  if (w.size() != directions.size())
    throw UnsupportedClassError("count_tropical: one weight multiset per direction");
  for (const auto& part : w)
    if (part.empty()) return 0;

  std::size_t legs = 0;
  for (const auto& part : w) legs += part.size();
  if (legs > 8)
    throw UnsupportedClassError("count_tropical: more than 8 legs is not supported");
  if (legs <= 1) return 0;  // no vertex can form

  // phase alignment precondition at the point
  std::optional<double> ph;
  for (const Charge& dir : directions) {
    Complex z = scene.linear_form(dir).value(point);
    if (std::abs(z) <= kEpsNum)
      throw DegenerateChargeError("count_tropical: a direction has vanishing Z");
    double p = std::arg(z);
    if (!ph) {
      ph = p;
    } else if (std::abs(phase_difference(p, *ph)) > 1e-6) {
      throw UnsupportedClassError("count_tropical: directions are not phase aligned");
    }
  }

  // rational frame: each direction charge gets the integral tangent
  // (b, -a) of its boundary coordinates; weighted legs scale it
  auto tangent = [](const Charge& c) {
    return Vec2q{Rational(c.b()), Rational(-c.a())};
  };

  // generic rational offsets, retried on exact degeneracies
  const long long num[8] = {17, 31, 47, 71, 97, 127, 151, 179};
  const long long den[8] = {7, 13, 23, 31, 41, 53, 61, 71};

  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<Particle> legs_v;
    int k = 0;
    bool degenerate_offsets = false;
    for (std::size_t i = 0; i < w.size(); ++i)
      for (int weight : w[i]) {
        if (weight < 1)
          throw UnsupportedClassError("count_tropical: weights must be positive");
        Charge ch = directions[i] * weight;
        Vec2q t = tangent(ch);
        if (t.x == 0 && t.y == 0)
          throw UnsupportedClassError("count_tropical: direction with zero boundary");
        Vec2q n{-t.y, t.x};
        Rational off(num[k] * (attempt + 1), den[k] + attempt);
        ++k;
        legs_v.push_back({ch, scale(off, n), t, true, 1});
      }

    long long total = 0;

    // full binary trees over the labeled legs; subtree anchored at the
    // smallest remaining leaf index to enumerate each shape once
    std::function<std::vector<Particle>(const std::vector<int>&)> build =
        [&](const std::vector<int>& members) -> std::vector<Particle> {
      if (members.size() == 1) return {legs_v[members[0]]};
      std::vector<Particle> results;
      const int anchor = members[0];
      std::vector<int> rest(members.begin() + 1, members.end());
      const std::size_t m = rest.size();
      for (std::size_t mask = 0; mask + 1 < (1u << m); ++mask) {
        std::vector<int> left{anchor}, right;
        for (std::size_t bit = 0; bit < m; ++bit)
          (mask >> bit & 1 ? left : right).push_back(rest[bit]);
        if (right.empty()) continue;
        auto lefts = build(left);
        if (lefts.empty()) continue;
        auto rights = build(right);
        for (const auto& L : lefts)
          for (const auto& R : rights) {
            long long pv = std::llabs(pair(L.charge, R.charge));
            if (pv == 0) continue;
            // intersect the two supports
            Rational det = cross_q(L.dir, R.dir);
            if (det == 0) continue;
            Vec2q d = R.base - L.base;
            Rational tL = cross_q(d, R.dir) / det;
            Rational tR = cross_q(d, L.dir) / det;
            if (!L.is_line) {
              if (tL == 0) {
                degenerate_offsets = true;
                continue;
              }
              if (tL < 0) continue;
            }
            if (!R.is_line) {
              if (tR == 0) {
                degenerate_offsets = true;
                continue;
              }
              if (tR < 0) continue;
            }
            Particle joined;
            joined.charge = L.charge + R.charge;
            joined.base = L.base + scale(tL, L.dir);
            joined.dir = tangent(joined.charge);
            if (joined.dir.x == 0 && joined.dir.y == 0) continue;
            joined.is_line = false;
            joined.mult = L.mult * R.mult * pv;
            results.push_back(joined);
          }
      }
      return results;
    };

    std::vector<int> all(legs_v.size());
    std::iota(all.begin(), all.end(), 0);
    for (const auto& p : build(all)) total += p.mult;
    if (!degenerate_offsets) return total;
  }
  throw GeometryError("count_tropical: could not find generic offsets");
}

}  // namespace kswall
