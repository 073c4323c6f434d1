#include "kswall/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kswall/errors.hpp"
#include "kswall/tropical.hpp"

namespace kswall {

Rational InvariantTable::value(const Charge& g) const {
  if (g.is_zero())
    throw UnsupportedClassError("invariant of the zero charge is undefined");
  if (auto it = values_.find(g); it != values_.end()) return it->second;
  if (auto it = values_.find(-g); it != values_.end()) return it->second;
  return 0;
}

void InvariantTable::set(const Charge& g, const Rational& v) {
  Charge key = canonical(g);
  if (v == 0)
    values_.erase(key);
  else
    values_[key] = v;
}

void InvariantTable::add(const Charge& g, const Rational& v) {
  set(g, value(g) + v);
}

void InvariantTable::set_raw(const Charge& g, const Rational& v) {
  if (v == 0)
    values_.erase(g);
  else
    values_[g] = v;
}

std::vector<Charge> InvariantTable::active_directions() const {
  std::vector<Charge> out;
  for (const auto& [g, v] : values_) {
    (void)v;
    Charge p = canonical(g.primitive());
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  return out;
}

std::string InvariantTable::to_text() const {
  std::ostringstream os;
  os << "anchor = " << anchor_.real() << ' ' << anchor_.imag() << '\n';
  os << "order = " << order_ << '\n';
  for (const auto& [g, v] : values_)
    os << g.to_string() << " = " << rational_to_string(v) << '\n';
  return os.str();
}

std::optional<InvariantTable> InvariantTable::parse(std::string_view text) {
  InvariantTable t;
  std::istringstream is{std::string(text)};
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto strip = [](std::string s) {
      auto b = s.find_first_not_of(" \t");
      auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = strip(line.substr(0, eq));
    std::string val = strip(line.substr(eq + 1));
    if (key == "anchor") {
      std::istringstream vs(val);
      double x = 0, y = 0;
      if (!(vs >> x >> y)) return std::nullopt;
      t.anchor_ = {x, y};
    } else if (key == "order") {
      try {
        t.order_ = std::stoi(val);
      } catch (...) {
        return std::nullopt;
      }
    } else {
      auto g = Charge::parse(key);
      auto r = parse_rational(val);
      if (!g || !r) return std::nullopt;
      t.set_raw(*g, *r);
    }
  }
  return t;
}

Rational initial_invariants(int d) {
  if (d == 0) throw UnsupportedClassError("initial invariant undefined at d = 0");
  long long ad = std::llabs(static_cast<long long>(d));
  Rational r(1, ad * ad);
  return (ad % 2 == 1) ? r : -r;
}

InvariantTable seed_table(const Scene& scene, int order) {
  InvariantTable t(scene.basepoint(), order);
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const Charge& e = scene.thimble(i);
    for (int d = 1; (e * d).degree() <= order; ++d)
      t.add(e * d, initial_invariants(d));
  }
  return t;
}

bool reality_check(const InvariantTable& table) {
  for (const auto& [g, v] : table.entries()) {
    auto it = table.entries().find(-g);
    if (it != table.entries().end() && it->second != v) return false;
  }
  return true;
}

std::string WallCrossingEvent::to_text() const {
  std::ostringstream os;
  os << "wall " << g1.to_string() << " " << g2.to_string() << " at " << point.real()
     << ' ' << point.imag() << '\n';
  os << "[before]\n" << before.to_text();
  os << "[after]\n" << after.to_text();
  return os.str();
}

namespace {

// Coprime nonnegative combinations a*d1 + b*d2 whose primitive charge can
// carry table support within the order.
std::vector<Charge> cone_rays(const Charge& d1, const Charge& d2, int order) {
  std::vector<Charge> out;
  for (int a = 0; a <= order; ++a)
    for (int b = 0; b <= order; ++b) {
      if (a + b == 0 || std::gcd(a, b) != 1) continue;
      Charge ray = d1 * a + d2 * b;
      Charge prim = canonical(ray.primitive());
      if (prim.degree() > order) continue;
      if (std::find(out.begin(), out.end(), prim) == out.end()) out.push_back(prim);
    }
  return out;
}

// One scattering step: rebuild the span of (d1, d2) from the phase-ordered
// factorization at w, approached along v.
InvariantTable scatter_table(const InvariantTable& table, const Charge& d1,
                             const Charge& d2, Complex w, Complex v,
                             const Scene& scene) {
  const int order = table.order();
  Charge p1 = canonical(d1.primitive());
  Charge p2 = canonical(d2.primitive());
  LinearForm f1 = scene.linear_form(p1);
  LinearForm f2 = scene.linear_form(p2);
  double sc = std::abs(f1.slope) + std::abs(f1.offset) + std::abs(f2.slope) +
              std::abs(f2.offset);
  if (std::abs(f1.slope * f2.offset - f2.slope * f1.offset) <= 1e-12 * sc * sc)
    throw InvalidWallError(
        "cross_wall: proportional central charges define no transversal wall "
        "(non-primitive total class)");

  std::vector<Charge> rays = cone_rays(p1, p2, order);

  // phases just before the crossing, in the window anchored at the path
  // direction
  double h = 1e-7 * scene.chart().diameter() / std::abs(v);
  Complex w_minus = w - h * v;
  double psi0 = std::arg(v);
  auto window = [&](double phi) {
    double d = phi - psi0;
    while (d <= 0) d += 2 * M_PI;
    while (d > 2 * M_PI) d -= 2 * M_PI;
    return d;
  };

  std::vector<Wall> incoming;
  for (const Charge& ray : rays) {
    std::map<int, Rational> values;
    for (int d = 1; (ray * d).degree() <= order; ++d) {
      Rational val = table.value(ray * d);
      if (val != 0) values[d] = val;
    }
    if (values.empty()) continue;
    Wall wl;
    wl.direction = ray;
    wl.function = wall_function(values, ray, order);
    wl.anchor = w;
    wl.phase = std::arg(scene.linear_form(ray).value(w_minus));
    incoming.push_back(std::move(wl));
  }
  std::stable_sort(incoming.begin(), incoming.end(), [&](const Wall& a, const Wall& b) {
    return window(a.phase) > window(b.phase);
  });

  std::vector<Wall> outgoing = factorize_scattering(incoming, order);

  InvariantTable next = table;
  for (const Charge& ray : rays)
    for (int d = 1; (ray * d).degree() <= order; ++d) next.set(ray * d, 0);
  for (const Wall& wl : outgoing) {
    auto values = invariants_from_wall_function(wl.function, wl.direction, order);
    for (const auto& [d, val] : values) {
      Charge g = wl.direction * d;
      if (g.degree() <= order) next.set(g, val);
    }
  }
  return next;
}

InvariantTable relabel(const InvariantTable& table, const Charge& thimble, int sign) {
  InvariantTable next(table.anchor(), table.order());
  for (const auto& [g, v] : table.entries()) {
    Charge moved = picard_lefschetz(g, thimble, sign);
    if (moved.degree() <= table.order()) next.set(moved, v);
  }
  return next;
}

}  // namespace

InvariantTable propagate(const InvariantTable& table, const Polyline& path,
                         const Scene& scene, std::vector<WallCrossingEvent>* events) {
  InvariantTable cur = table;
  if (path.size() < 2) return cur;
  for (Complex v : path)
    if (scene.singularity_near(v))
      throw GeometryError("path vertex coincides with a singularity");

  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    Complex p = path[k], q = path[k + 1];
    for (std::size_t i = 0; i < scene.size(); ++i) {
      Complex b = scene.singularity(i).position;
      Complex d = q - p;
      double len2 = std::norm(d);
      double t = len2 == 0 ? 0 : std::clamp(((b - p) * std::conj(d)).real() / len2, 0.0, 1.0);
      if (std::abs(b - (p + t * d)) <= kEpsGeom)
        throw GeometryError("path passes through singularities[" + std::to_string(i) + "]");
    }

    auto cuts = cut_crossings(p, q, scene);
    std::size_t cut_idx = 0;
    double t_cur = 0.0;
    const double t_eps = 1e-12;
    while (true) {
      // earliest wall crossing among active pairs after t_cur
      double wall_t = 2.0;
      Charge wg1, wg2;
      auto dirs = cur.active_directions();
      for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
          LinearForm zi = scene.linear_form(dirs[i]);
          LinearForm zj = scene.linear_form(dirs[j]);
          double sc = std::abs(zi.slope) + std::abs(zi.offset) + std::abs(zj.slope) +
                      std::abs(zj.offset);
          if (std::abs(zi.slope * zj.offset - zj.slope * zi.offset) <= 1e-12 * sc * sc)
            continue;
          for (double t : wall_hits_on_segment(zi, zj, p, q, t_cur + t_eps)) {
            if (t < wall_t) {
              wall_t = t;
              wg1 = dirs[i];
              wg2 = dirs[j];
            }
            break;
          }
        }
      double cut_t = cut_idx < cuts.size() ? cuts[cut_idx].t : 2.0;
      if (wall_t > 1.0 && cut_t > 1.0) break;

      if (cut_t <= wall_t) {
        cur = relabel(cur, scene.thimble(cuts[cut_idx].sing), cuts[cut_idx].sign);
        t_cur = cut_t;
        ++cut_idx;
      } else {
        Complex w = p + wall_t * (q - p);
        InvariantTable before = cur;
        cur = scatter_table(cur, wg1, wg2, w, q - p, scene);
        if (events) {
          WallCrossingEvent ev;
          ev.g1 = wg1;
          ev.g2 = wg2;
          ev.point = w;
          double back = std::max(t_cur, wall_t - 1e-4);
          ev.incoming_rep = p + back * (q - p);
          ev.outgoing_rep = p + std::min(1.0, wall_t + 1e-4) * (q - p);
          ev.before = before;
          ev.after = cur;
          events->push_back(std::move(ev));
        }
        t_cur = wall_t;
      }
    }
    cur.set_anchor(q);
  }
  return cur;
}

Rational invariant_at(const Charge& g, Complex u, int order, const Scene& scene) {
  if (g.is_zero())
    throw UnsupportedClassError("invariant_at: the zero charge has no invariant");
  int eff = std::max<long long>(order, canonical(g).degree());
  InvariantTable table = seed_table(scene, eff);
  table = propagate(table, {scene.basepoint(), u}, scene);

  // refuse points sitting on an active wall
  auto dirs = table.active_directions();
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      LinearForm zi = scene.linear_form(dirs[i]);
      LinearForm zj = scene.linear_form(dirs[j]);
      double sc = std::abs(zi.slope) + std::abs(zi.offset) + std::abs(zj.slope) +
                  std::abs(zj.offset);
      if (std::abs(zi.slope * zj.offset - zj.slope * zi.offset) <= 1e-12 * sc * sc)
        continue;
      if (on_wall(zi, zj, u))
        throw WallAmbiguityError("point lies on the wall of " + dirs[i].to_string() +
                                 " and " + dirs[j].to_string());
    }
  return table.value(g);
}

WallCrossingEvent cross_wall(const InvariantTable& table, const WallLocus& wall,
                             Complex point, const Scene& scene) {
  if (wall.degenerate)
    throw InvalidWallError(
        "cross_wall: degenerate wall (proportional charges; the total class has "
        "non-primitive boundary)");
  Complex v = point - table.anchor();
  if (std::abs(v) <= kEpsGeom)
    throw GeometryError("cross_wall: table anchor coincides with the crossing point");

  WallCrossingEvent ev;
  ev.g1 = wall.g1;
  ev.g2 = wall.g2;
  ev.point = point;
  ev.before = table;
  ev.incoming_rep = table.anchor();
  ev.after = scatter_table(table, wall.g1, wall.g2, point, v, scene);
  ev.outgoing_rep = point + 1e-4 * v / std::abs(v);
  ev.after.set_anchor(ev.outgoing_rep);
  return ev;
}

Rational delta_tropical(const Charge& g, int d,
                        const std::vector<Charge>& wall_charges,
                        const InvariantTable& table, Complex point,
                        const Scene& scene) {
  if (g.is_zero() || g.content() != 1)
    throw UnsupportedClassError("delta_tropical: gamma must be primitive");
  if (d < 1) throw UnsupportedClassError("delta_tropical: d must be positive");
  const std::size_t n = wall_charges.size();
  if (n == 0) return 0;

  Charge target = g * d;

  // multiplicities m_i >= 1 with sum m_i * gamma_i = d * gamma
  std::vector<std::vector<int>> mults;
  std::vector<int> cur(n, 0);
  long long bound = target.degree() + 1;
  std::function<void(std::size_t, Charge)> rec = [&](std::size_t i, Charge rest) {
    if (i == n) {
      if (rest.is_zero()) mults.push_back(cur);
      return;
    }
    for (int m = 1; m * wall_charges[i].degree() <= bound; ++m) {
      cur[i] = m;
      Charge next = rest - wall_charges[i] * m;
      if (i + 1 == n) {
        if (next.is_zero()) mults.push_back(cur);
      } else {
        rec(i + 1, next);
      }
    }
    cur[i] = 0;
  };
  rec(0, target);

  // partitions of an integer as non-increasing sequences
  auto partitions = [](int m) {
    std::vector<std::vector<int>> out;
    std::vector<int> part;
    std::function<void(int, int)> go = [&](int rem, int mx) {
      if (rem == 0) {
        out.push_back(part);
        return;
      }
      for (int k = std::min(rem, mx); k >= 1; --k) {
        part.push_back(k);
        go(rem - k, k);
        part.pop_back();
      }
    };
    go(m, m);
    return out;
  };
  auto aut = [](const std::vector<int>& part) {
    Rational a = 1;
    int run = 1;
    for (std::size_t i = 1; i <= part.size(); ++i) {
      if (i < part.size() && part[i] == part[i - 1]) {
        ++run;
      } else {
        for (int k = 2; k <= run; ++k) a *= k;
        run = 1;
      }
    }
    return a;
  };

  Rational total = 0;
  for (const auto& m : mults) {
    // all weight vectors: one partition per wall charge
    std::vector<std::vector<std::vector<int>>> parts(n);
    for (std::size_t i = 0; i < n; ++i) parts[i] = partitions(m[i]);
    std::vector<std::size_t> pick(n, 0);
    while (true) {
      WeightVector w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = parts[i][pick[i]];
      Rational coeff = 1;
      bool zero = false;
      for (std::size_t i = 0; i < n && !zero; ++i)
        for (int wij : w[i]) {
          Rational v = table.value(wall_charges[i] * wij);
          if (v == 0) {
            zero = true;
            break;
          }
          coeff *= v;
        }
      if (!zero) {
        long long trees = count_tropical(w, wall_charges, point, scene);
        if (trees != 0) {
          Rational autw = 1;
          for (std::size_t i = 0; i < n; ++i) autw *= aut(w[i]);
          total += Rational(trees) / autw * coeff;
        }
      }
      std::size_t i = 0;
      while (i < n && ++pick[i] == parts[i].size()) {
        pick[i] = 0;
        ++i;
      }
      if (i == n) break;
    }
  }
  return total;
}

GvResult gv_invariants(const std::map<int, Rational>& values, int order, int sigma) {
  GvResult out;
  std::map<int, Rational> twisted;
  for (const auto& [d, v] : values) {
    if (d < 1) throw UnsupportedClassError("gv_invariants: multiples must be >= 1");
    twisted[d] = (sigma == -1 && d % 2 == 1) ? -v : v;
  }
  for (int m = 1; m <= order; ++m) {
    Rational rhs = twisted.count(m) ? twisted.at(m) : Rational(0);
    for (int k = 2; k <= m; ++k) {
      if (m % k) continue;
      Rational mc(1, static_cast<long long>(k) * k);
      if (k % 2 == 0) mc = -mc;
      rhs -= mc * (out.omega.count(m / k) ? out.omega.at(m / k) : Rational(0));
    }
    if (rhs != 0) out.omega[m] = rhs;
    if (!is_integer(rhs)) out.all_integer = false;
  }
  return out;
}

}  // namespace kswall
