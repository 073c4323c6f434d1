#include "kswall/scattering.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "kswall/errors.hpp"

namespace kswall {

void validate_wall(const Wall& w) {
  if (!is_primitive_boundary(w.direction))
    throw InvalidWallError("wall direction must have primitive nonzero boundary: " +
                           w.direction.to_string());
  if (w.direction.content() != 1)
    throw InvalidWallError("wall direction must be a primitive charge: " +
                           w.direction.to_string());
  if (w.function.constant_term() != 1)
    throw InvalidWallError("wall function must have constant term 1");
  for (const auto& [g, c] : w.function.terms()) {
    if (g.is_zero()) continue;
    // support on positive multiples of the direction
    long long ct = g.content();
    if (g.primitive() != w.direction || ct < 1)
      throw InvalidWallError("wall function support must be positive multiples of " +
                             w.direction.to_string() + ", found " + g.to_string());
  }
}

FormalSeries act(const Wall& w, const FormalSeries& s) {
  validate_wall(w);
  if (w.function.is_one()) return s;
  FormalSeries out(s.order());
  std::map<long long, FormalSeries> powers;  // exponent -> f^exponent
  for (const auto& [mu, c] : s.terms()) {
    long long e = pair(mu, w.direction);
    auto it = powers.find(e);
    if (it == powers.end())
      it = powers.emplace(e, w.function.truncated(s.order()).pow(e)).first;
    for (const auto& [g, fc] : it->second.terms()) {
      Charge m = mu + g;
      if (m.degree() <= s.order()) out.add_term(m, c * fc);
    }
  }
  return out;
}

FormalSeries compose_action(const std::vector<Wall>& walls, FormalSeries s) {
  for (auto it = walls.rbegin(); it != walls.rend(); ++it) s = act(*it, s);
  return s;
}

FormalSeries wall_function(const std::map<int, Rational>& values, const Charge& gp,
                           int order) {
  FormalSeries arg(order);
  for (const auto& [d, v] : values) {
    if (d < 1) throw InvalidWallError("wall_function: multiples must be >= 1");
    arg.add_term(gp * d, Rational(d) * v);
  }
  return arg.exp();
}

std::map<int, Rational> invariants_from_wall_function(const FormalSeries& f,
                                                      const Charge& gp, int order) {
  if (f.constant_term() != 1)
    throw InvalidWallError("invariants_from_wall_function: constant term must be 1");
  FormalSeries lg = f.truncated(order).log();
  std::map<int, Rational> out;
  long long base = gp.degree();
  for (const auto& [g, c] : lg.terms()) {
    if (g.primitive() != gp || base == 0)
      throw InvalidWallError("wall function support off the ray of " + gp.to_string());
    long long d = g.content();
    out[static_cast<int>(d)] = c / d;
  }
  return out;
}

namespace {

// Internal representation for the order-by-order solve. The incoming
// directions span a strictly convex cone (their central charges at the
// anchor point share a phase), so the monoid they generate carries a
// well-defined degree: the minimal number of generators summing to the
// charge. That degree is additive-or-less under addition and gives a
// consistent truncation filtration even when the generators are linearly
// dependent.
struct MonoidContext {
  std::vector<Charge> dirs;
  std::map<Charge, long long> degree;  // monoid elements with degree <= order
  int order = 0;

  bool contains(const Charge& g) const { return degree.count(g) != 0; }
  long long deg(const Charge& g) const { return degree.at(g); }
};

MonoidContext build_monoid(const std::vector<Charge>& dirs, int order) {
  MonoidContext cx;
  cx.dirs = dirs;
  cx.order = order;
  cx.degree[Charge()] = 0;
  std::vector<Charge> frontier{Charge()};
  for (int step = 1; step <= order; ++step) {
    std::vector<Charge> next;
    for (const Charge& base : frontier)
      for (const Charge& d : dirs) {
        Charge g = base + d;
        if (cx.degree.emplace(g, step).second) next.push_back(g);
      }
    frontier.swap(next);
    if (cx.degree.size() > 200000)
      throw InvalidWallError(
          "factorize_scattering: incoming directions do not span a convex cone");
  }
  return cx;
}

// Series over the monoid, truncated by monoid degree.
using MonoSeries = std::map<Charge, Rational>;

MonoSeries mono_one() { return {{Charge(), Rational(1)}}; }

MonoSeries mul(const MonoSeries& a, const MonoSeries& b, const MonoidContext& cx) {
  MonoSeries r;
  for (const auto& [ga, ca] : a)
    for (const auto& [gb, cb] : b) {
      Charge g = ga + gb;
      auto it = cx.degree.find(g);
      if (it == cx.degree.end()) continue;
      auto [jt, fresh] = r.emplace(g, ca * cb);
      if (!fresh) jt->second += ca * cb;
    }
  for (auto it = r.begin(); it != r.end();)
    it = (it->second == 0) ? r.erase(it) : std::next(it);
  return r;
}

MonoSeries pow(const MonoSeries& f, long long k, const MonoidContext& cx) {
  if (k == 0) return mono_one();
  MonoSeries base = f;
  if (k < 0) {
    MonoSeries e = f;
    e.erase(Charge());
    MonoSeries inv = mono_one(), term = mono_one(), neg;
    for (const auto& [g, c] : e) neg[g] = -c;
    for (int i = 0; i < cx.order; ++i) {
      term = mul(term, neg, cx);
      if (term.empty()) break;
      for (const auto& [g, c] : term) {
        auto [it, fresh] = inv.emplace(g, c);
        if (!fresh) it->second += c;
      }
    }
    base = inv;
    k = -k;
  }
  MonoSeries r = mono_one();
  while (k > 0) {
    if (k & 1) r = mul(r, base, cx);
    base = mul(base, base, cx);
    k >>= 1;
  }
  return r;
}

struct MonoWall {
  Charge direction;  // lattice primitive
  MonoSeries f;      // constant term 1, support on multiples of direction
};

// x^probe * s  ->  x^probe * act(s); powers of f memoized per exponent.
MonoSeries mono_act(const MonoWall& w, const Charge& probe, const MonoSeries& s,
                    const MonoidContext& cx) {
  MonoSeries out;
  std::map<long long, MonoSeries> powers;
  for (const auto& [g, c] : s) {
    long long k = pair(probe + g, w.direction);
    auto it = powers.find(k);
    if (it == powers.end()) it = powers.emplace(k, pow(w.f, k, cx)).first;
    for (const auto& [gf, cf] : it->second) {
      Charge m = g + gf;
      if (!cx.contains(m)) continue;
      auto [jt, fresh] = out.emplace(m, c * cf);
      if (!fresh) jt->second += c * cf;
    }
  }
  for (auto it = out.begin(); it != out.end();)
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  return out;
}

std::vector<MonoSeries> probe_images(const std::vector<MonoWall>& walls,
                                     const std::vector<Charge>& probes,
                                     const MonoidContext& cx) {
  std::vector<MonoSeries> out;
  for (const Charge& p : probes) {
    MonoSeries s = mono_one();
    for (auto it = walls.rbegin(); it != walls.rend(); ++it)
      s = mono_act(*it, p, s, cx);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<Wall> factorize_scattering(const std::vector<Wall>& incoming, int order) {
  if (incoming.empty()) return {};
  for (const auto& w : incoming) validate_wall(w);
  for (std::size_t i = 1; i < incoming.size(); ++i)
    if (std::abs(incoming[i].anchor - incoming[0].anchor) > 1e-9)
      throw InvalidWallError("factorize_scattering: inconsistent anchors");

  // Merge proportional directions (their factors commute).
  std::vector<Wall> merged;
  for (const auto& w : incoming) {
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Wall& m) {
      return m.direction == w.direction;
    });
    if (it == merged.end())
      merged.push_back(w);
    else
      it->function = it->function * w.function;
  }

  std::vector<Charge> dirs;
  for (const auto& w : merged) dirs.push_back(w.direction);
  MonoidContext cx = build_monoid(dirs, order);
  const std::vector<Charge> probes{Charge(1, 0), Charge(0, 1)};

  auto to_mono = [&](const Wall& w) {
    MonoWall mw;
    mw.direction = w.direction;
    mw.f = mono_one();
    for (const auto& [g, c] : w.function.terms()) {
      if (g.is_zero()) continue;
      if (cx.contains(g)) mw.f[g] = c;
    }
    return mw;
  };

  std::vector<MonoWall> target_walls;
  for (const auto& w : merged) target_walls.push_back(to_mono(w));
  const std::vector<MonoSeries> target = probe_images(target_walls, probes, cx);

  // Strictly positive linear grading on the cone: corrections at one level
  // only disturb strictly higher levels, so the sweep below is triangular.
  std::vector<double> phi(2 + 8, 0.0);
  auto embed = [](const Charge& g, std::vector<double>* v) {
    (*v)[0] = static_cast<double>(g.a());
    (*v)[1] = static_cast<double>(g.b());
    for (std::size_t j = 0; j < g.flux().size() && j + 2 < v->size(); ++j)
      (*v)[j + 2] = static_cast<double>(g.flux()[j]);
  };
  for (const Charge& d : dirs) {
    std::vector<double> v(phi.size(), 0.0);
    embed(d, &v);
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < phi.size(); ++j) phi[j] += v[j] / norm;
  }
  auto level = [&](const Charge& g) {
    std::vector<double> v(phi.size(), 0.0);
    embed(g, &v);
    double s = 0;
    for (std::size_t j = 0; j < phi.size(); ++j) s += phi[j] * v[j];
    return s;
  };
  for (const Charge& d : dirs)
    if (level(d) <= 1e-9)
      throw InvalidWallError(
          "factorize_scattering: incoming directions do not span a strictly "
          "convex cone");

  // Outgoing phase order interpolates between the extreme incoming
  // directions: dir ~ a*first + b*last gives the key b/(a+b); the list is
  // sorted descending, reversing the incoming order across the wall.
  const Charge df = dirs.front(), dl = dirs.back();
  auto order_key = [&](const Charge& dir) {
    double a, b;
    double det = static_cast<double>(pair(df, dl));
    if (std::abs(det) > 0.5) {
      a = static_cast<double>(pair(dir, dl)) / det;
      b = static_cast<double>(pair(df, dir)) / det;
    } else {
      // boundary-degenerate span: least squares over all coordinates
      double ff = 0, fl = 0, ll = 0, xf = 0, xl = 0;
      auto dot = [](const Charge& u, const Charge& v) {
        double s = static_cast<double>(u.a()) * v.a() +
                   static_cast<double>(u.b()) * v.b();
        for (std::size_t j = 0; j < std::max(u.flux().size(), v.flux().size()); ++j)
          s += static_cast<double>(u.flux_at(j)) * v.flux_at(j);
        return s;
      };
      ff = dot(df, df);
      fl = dot(df, dl);
      ll = dot(dl, dl);
      xf = dot(dir, df);
      xl = dot(dir, dl);
      double d2 = ff * ll - fl * fl;
      if (std::abs(d2) < 1e-12) return 0.5;
      a = (xf * ll - xl * fl) / d2;
      b = (xl * ff - xf * fl) / d2;
    }
    double s = a + b;
    return std::abs(s) < 1e-12 ? 0.5 : b / s;
  };

  std::map<Charge, MonoWall> out;
  for (const auto& mw : target_walls) out[mw.direction] = mw;

  auto sorted_walls = [&]() {
    std::vector<MonoWall> ws;
    for (const auto& [dir, w] : out) ws.push_back(w);
    std::stable_sort(ws.begin(), ws.end(), [&](const MonoWall& x, const MonoWall& y) {
      return order_key(x.direction) > order_key(y.direction);
    });
    return ws;
  };

  const int max_iters = 16 * static_cast<int>(cx.degree.size()) + 16;
  for (int guard = 0; guard < max_iters; ++guard) {
    std::vector<MonoSeries> current = probe_images(sorted_walls(), probes, cx);
    double lowest = -1;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      std::map<Charge, Rational> defect;
      for (const auto& [g, c] : target[p]) defect[g] += c;
      for (const auto& [g, c] : current[p]) defect[g] -= c;
      for (const auto& [g, c] : defect) {
        if (c == 0) continue;
        double d = level(g);
        if (lowest < 0 || d < lowest) lowest = d;
      }
    }
    if (lowest < 0) break;  // identity reached

    // Corrections at the lowest level commute with everything higher, so
    // they read off the probe defects directly.
    std::map<Charge, Rational> corrections;
    for (std::size_t p = 0; p < probes.size(); ++p) {
      std::map<Charge, Rational> defect;
      for (const auto& [g, c] : target[p]) defect[g] += c;
      for (const auto& [g, c] : current[p]) defect[g] -= c;
      for (const auto& [g, dv] : defect) {
        if (dv == 0 || level(g) > lowest + 1e-9) continue;
        Charge dir = g.primitive();
        long long pp = pair(probes[p], dir);
        if (pp == 0) continue;
        Rational a = dv / pp;
        auto [it, fresh] = corrections.emplace(g, a);
        if (!fresh && it->second != a)
          throw InvalidWallError(
              "factorize_scattering: inconsistent correction "
              "(incompatible incoming data)");
      }
    }
    if (corrections.empty())
      throw InvalidWallError(
          "factorize_scattering: defect not correctable by wall insertions");
    for (const auto& [g, a] : corrections) {
      Charge dir = g.primitive();
      auto it = out.find(dir);
      if (it == out.end()) {
        MonoWall mw;
        mw.direction = dir;
        mw.f = mono_one();
        it = out.emplace(dir, std::move(mw)).first;
      }
      it->second.f[g] += a;
      if (it->second.f[g] == 0) it->second.f.erase(g);
    }
  }

  // Convert back to public walls, dropping trivial factors. The public
  // series order must admit every kept monomial's ambient degree.
  std::vector<MonoWall> finals = sorted_walls();
  long long max_ambient = order;
  for (const auto& mw : finals)
    for (const auto& [g, c] : mw.f) {
      (void)c;
      max_ambient = std::max(max_ambient, g.degree());
    }
  std::vector<Wall> result;
  double lo = merged.back().phase, hi = merged.front().phase;
  for (const auto& mw : finals) {
    FormalSeries f(static_cast<int>(max_ambient));
    f.set_coefficient(Charge(), 1);
    for (const auto& [g, c] : mw.f) {
      if (g.is_zero()) continue;
      f.add_term(g, c);
    }
    if (f.is_one()) continue;
    Wall w;
    w.direction = mw.direction;
    w.function = f;
    w.anchor = merged[0].anchor;
    double t = order_key(mw.direction);
    w.phase = hi + (lo - hi) * (1.0 - t);
    result.push_back(std::move(w));
  }
  return result;
}

}  // namespace kswall
