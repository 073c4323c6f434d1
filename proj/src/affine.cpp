#include "kswall/affine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include "kswall/errors.hpp"
#include "kswall/invariants.hpp"

namespace kswall {

namespace {

// Intersection parameters of the full line p0 + t * d with the chart.
std::optional<std::pair<double, double>> clip_line(Complex p0, Complex d,
                                                   const ChartRect& chart) {
  double tmin = -std::numeric_limits<double>::infinity();
  double tmax = std::numeric_limits<double>::infinity();
  auto clip1 = [&](double pos, double dir, double lo, double hi) {
    if (std::abs(dir) < 1e-300) return pos >= lo && pos <= hi;
    double t0 = (lo - pos) / dir, t1 = (hi - pos) / dir;
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    return true;
  };
  if (!clip1(p0.real(), d.real(), chart.xmin, chart.xmax)) return std::nullopt;
  if (!clip1(p0.imag(), d.imag(), chart.ymin, chart.ymax)) return std::nullopt;
  if (tmin > tmax) return std::nullopt;
  return std::make_pair(tmin, tmax);
}

}  // namespace

SpecialLine special_line(const Charge& g, PhaseAngle theta, const Scene& scene) {
  LinearForm f = scene.linear_form(g);
  Complex rot = std::polar(1.0, -theta.value());
  Complex rs = rot * f.slope, rt = rot * f.offset;
  SpecialLine out;
  if (std::abs(f.slope) <= kEpsNum) {
    if (std::abs(rt.real()) <= kEpsNum) {
      out.kind = SpecialLine::Kind::kWholeChart;
      return out;
    }
    throw DegenerateChargeError("special_line: constant Z never satisfies Re = 0 for " +
                                g.to_string());
  }
  // Re(rs) x - Im(rs) y + Re(rt) = 0
  double A = rs.real(), B = -rs.imag(), C = rt.real();
  double n2 = A * A + B * B;
  Complex p0{-A * C / n2, -B * C / n2};
  Complex dir{-B, A};
  auto span = clip_line(p0, dir, scene.chart());
  if (!span) return out;  // empty
  out.kind = SpecialLine::Kind::kSegment;
  out.from = p0 + span->first * dir;
  out.to = p0 + span->second * dir;
  return out;
}

InitialRay initial_ray(std::size_t sing, PhaseAngle theta, const Scene& scene) {
  const Singularity& s = scene.singularity(sing);
  Complex dir = std::polar(1.0, theta.value() + M_PI / 2.0) / s.slope;
  dir /= std::abs(dir);
  InitialRay out{s.position, dir, 0.0};
  auto span = clip_line(s.position, dir, scene.chart());
  if (span && span->second > 0) out.length = span->second;
  return out;
}

bool on_wall(const LinearForm& z1, const LinearForm& z2, Complex u, double eps) {
  Complex a = z1.value(u), b = z2.value(u);
  if (std::abs(a) <= kEpsNum || std::abs(b) <= kEpsNum) return false;
  Complex prod = a * std::conj(b);
  return prod.real() > 0 && std::abs(std::arg(prod)) <= eps;
}

std::vector<double> wall_hits_on_segment(const LinearForm& z1, const LinearForm& z2,
                                         Complex p, Complex q, double t_min) {
  Complex d = q - p;
  Complex a1 = z1.slope * d, b1 = z1.value(p);
  Complex a2 = z2.slope * d, b2 = z2.value(p);
  // Im((a1 t + b1) conj(a2 t + b2)) = qa t^2 + qb t + qc
  double qa = (a1 * std::conj(a2)).imag();
  double qb = (a1 * std::conj(b2)).imag() + (b1 * std::conj(a2)).imag();
  double qc = (b1 * std::conj(b2)).imag();
  std::vector<double> roots;
  double scale = std::max({std::abs(qa), std::abs(qb), std::abs(qc), 1e-30});
  if (std::abs(qa) / scale < 1e-14) {
    if (std::abs(qb) / scale >= 1e-14) roots.push_back(-qc / qb);
  } else {
    double disc = qb * qb - 4 * qa * qc;
    if (disc >= 0) {
      double r = std::sqrt(disc);
      double q0 = -(qb + std::copysign(r, qb)) / 2;
      roots.push_back(q0 / qa);
      if (q0 != 0) roots.push_back(qc / q0);
    }
  }
  std::vector<double> out;
  for (double t : roots) {
    if (!(t > t_min && t <= 1.0)) continue;
    Complex z1v = a1 * t + b1, z2v = a2 * t + b2;
    if (std::abs(z1v) <= kEpsNum || std::abs(z2v) <= kEpsNum) continue;
    if ((z1v * std::conj(z2v)).real() <= 0) continue;  // anti-parallel branch
    out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double x, double y) { return std::abs(x - y) < 1e-13; }),
            out.end());
  return out;
}

namespace {

struct GridEdgePoint {
  Complex point;
  bool valid = false;
};

}  // namespace

WallLocus marginal_wall(const Charge& g1, const Charge& g2, const Scene& scene,
                        const WallTraceOptions& opts) {
  LinearForm z1 = scene.linear_form(g1);
  LinearForm z2 = scene.linear_form(g2);
  if (std::abs(z1.slope) <= kEpsNum && std::abs(z1.offset) <= kEpsNum)
    throw DegenerateChargeError("marginal_wall: Z identically zero for " + g1.to_string());
  if (std::abs(z2.slope) <= kEpsNum && std::abs(z2.offset) <= kEpsNum)
    throw DegenerateChargeError("marginal_wall: Z identically zero for " + g2.to_string());

  WallLocus wall;
  wall.g1 = g1;
  wall.g2 = g2;

  // Proportional forms: the phase condition holds everywhere or nowhere;
  // flagged either way, per the non-primitive analysis.
  double scale = std::abs(z1.slope) + std::abs(z1.offset) + std::abs(z2.slope) +
                 std::abs(z2.offset);
  if (std::abs(z1.slope * z2.offset - z2.slope * z1.offset) <= 1e-12 * scale * scale) {
    wall.degenerate = true;
    return wall;
  }

  const ChartRect& chart = scene.chart();
  const int n = opts.grid;
  auto g = [&](Complex u) { return (z1.value(u) * std::conj(z2.value(u))).imag(); };
  auto mask = [&](Complex u) {
    Complex prod = z1.value(u) * std::conj(z2.value(u));
    return prod.real() > 0;
  };
  auto node = [&](int i, int j) {
    return Complex(chart.xmin + chart.width() * i / n,
                   chart.ymin + chart.height() * j / n);
  };

  std::vector<double> val(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) val[j * (n + 1) + i] = g(node(i, j));

  // refined zero on a grid edge (bisection to the phase tolerance)
  auto refine = [&](Complex a, Complex b, double fa, double fb) -> GridEdgePoint {
    GridEdgePoint out;
    if ((fa > 0) == (fb > 0)) return out;
    Complex mid = (a + b) * 0.5;
    for (int it = 0; it < 80; ++it) {
      mid = (a + b) * 0.5;
      double fm = g(mid);
      Complex z1v = z1.value(mid), z2v = z2.value(mid);
      if (std::abs(z1v) > kEpsNum && std::abs(z2v) > kEpsNum &&
          std::abs(std::arg(z1v * std::conj(z2v))) < kEpsPhase * 0.5)
        break;
      if ((fm > 0) == (fa > 0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
        fb = fm;
      }
    }
    out.point = mid;
    out.valid = mask(out.point);
    return out;
  };

  // marching squares; refined points keyed by their grid edge
  std::map<std::tuple<int, int, int>, GridEdgePoint> edge_points;
  auto edge_point = [&](int i, int j, int horiz) -> GridEdgePoint& {
    auto key = std::make_tuple(i, j, horiz);
    auto it = edge_points.find(key);
    if (it != edge_points.end()) return it->second;
    Complex a = node(i, j);
    Complex b = horiz ? node(i + 1, j) : node(i, j + 1);
    double fa = val[j * (n + 1) + i];
    double fb = horiz ? val[j * (n + 1) + i + 1] : val[(j + 1) * (n + 1) + i];
    return edge_points.emplace(key, refine(a, b, fa, fb)).first->second;
  };

  using EdgeKey = std::tuple<int, int, int>;
  std::map<EdgeKey, std::vector<EdgeKey>> adj;
  auto connect = [&](const EdgeKey& a, const EdgeKey& b) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double f00 = val[j * (n + 1) + i], f10 = val[j * (n + 1) + i + 1];
      double f01 = val[(j + 1) * (n + 1) + i], f11 = val[(j + 1) * (n + 1) + i + 1];
      auto sgn = [](double x) { return x > 0; };
      std::vector<std::pair<EdgeKey, GridEdgePoint>> here;
      if (sgn(f00) != sgn(f10)) here.push_back({{i, j, 1}, edge_point(i, j, 1)});
      if (sgn(f01) != sgn(f11)) here.push_back({{i, j + 1, 1}, edge_point(i, j + 1, 1)});
      if (sgn(f00) != sgn(f01)) here.push_back({{i, j, 0}, edge_point(i, j, 0)});
      if (sgn(f10) != sgn(f11)) here.push_back({{i + 1, j, 0}, edge_point(i + 1, j, 0)});
      std::vector<std::pair<EdgeKey, GridEdgePoint>> ok;
      for (auto& e : here)
        if (e.second.valid) ok.push_back(e);
      if (ok.size() == 2) {
        connect(ok[0].first, ok[1].first);
      } else if (ok.size() == 4) {
        // saddle: resolve with the center sign
        Complex c = (node(i, j) + node(i + 1, j + 1)) * 0.5;
        if ((g(c) > 0) == sgn(f00)) {
          connect(ok[0].first, ok[2].first);
          connect(ok[1].first, ok[3].first);
        } else {
          connect(ok[0].first, ok[3].first);
          connect(ok[1].first, ok[2].first);
        }
      }
      // 1 or 3 valid points: the mask boundary cuts the cell; the lone
      // point stays as a chain end
    }

  std::map<EdgeKey, bool> used;
  for (auto& [key, nbrs] : adj) {
    (void)nbrs;
    used[key] = false;
  }
  for (auto& [key, pt] : edge_points)
    if (pt.valid && !adj.count(key)) adj[key] = {};
  auto walk = [&](const EdgeKey& start) {
    std::vector<EdgeKey> chain{start};
    used[start] = true;
    EdgeKey cur = start;
    while (true) {
      bool advanced = false;
      for (auto& nxt : adj[cur]) {
        if (used.count(nxt) && used[nxt]) continue;
        chain.push_back(nxt);
        used[nxt] = true;
        cur = nxt;
        advanced = true;
        break;
      }
      if (!advanced) break;
    }
    return chain;
  };

  std::vector<std::vector<EdgeKey>> chains;
  for (auto& [key, nbrs] : adj)
    if (!used[key] && nbrs.size() == 1) chains.push_back(walk(key));
  for (auto& [key, nbrs] : adj) {
    (void)nbrs;
    if (!used[key]) chains.push_back(walk(key));
  }

  const double cell = chart.diameter() / n;
  for (auto& chain : chains) {
    Polyline poly;
    for (auto& key : chain) {
      auto it = edge_points.find(key);
      if (it != edge_points.end() && it->second.valid) poly.push_back(it->second.point);
    }
    if (poly.size() < 2) continue;
    // Wall endpoints limit onto singularities where one Z vanishes; append
    // the exact limit point so the traced locus covers the closure.
    for (int end : {0, 1}) {
      Complex tip = end ? poly.back() : poly.front();
      for (std::size_t si = 0; si < scene.size(); ++si) {
        Complex b = scene.singularity(si).position;
        if (std::abs(tip - b) < 2.0 * cell &&
            (std::abs(z1.value(b)) <= kEpsNum || std::abs(z2.value(b)) <= kEpsNum)) {
          if (end)
            poly.push_back(b);
          else
            poly.insert(poly.begin(), b);
          break;
        }
      }
    }
    if (opts.refine) {
      // split each span with a refined midpoint: step ~ diameter / 512
      Polyline fine;
      fine.push_back(poly.front());
      for (std::size_t k = 0; k + 1 < poly.size(); ++k) {
        Complex a = poly[k], b = poly[k + 1];
        Complex mid = (a + b) * 0.5;
        Complex nrm = (b - a) * Complex(0, 1);
        double h = std::abs(b - a) * 0.5;
        if (std::abs(nrm) > 0 && h > 0) {
          nrm /= std::abs(nrm);
          double f0 = g(mid - nrm * h), f1 = g(mid + nrm * h);
          if ((f0 > 0) != (f1 > 0)) {
            auto r = refine(mid - nrm * h, mid + nrm * h, f0, f1);
            if (r.valid) mid = r.point;
          }
        }
        if (mask(mid)) fine.push_back(mid);
        fine.push_back(b);
      }
      poly.swap(fine);
    }
    wall.pieces.push_back(std::move(poly));
  }
  return wall;
}

std::pair<double, double> affine_coords(Complex u, PhaseAngle theta, const Charge& g1,
                                        const Charge& g2, const Scene& scene) {
  Complex rot = std::polar(1.0, -theta.value());
  return {(rot * central_charge(g1, u, scene)).real(),
          (rot * central_charge(g2, u, scene)).real()};
}

std::pair<double, double> boundary_covector(const Charge& g, Complex u,
                                            PhaseAngle theta, const Scene& scene) {
  (void)u;  // the differential is constant in the affine-linear model
  Complex rs = std::polar(1.0, -theta.value()) * scene.linear_form(g).slope;
  return {rs.imag(), rs.real()};
}

AttractorRay attractor_ray(const Charge& g, Complex u, const Scene& scene,
                           const InvariantTable& table) {
  if (g.boundary_is_zero())
    throw UnsupportedClassError("attractor_ray: zero boundary class is unsupported");
  LinearForm f = scene.linear_form(g);
  Complex z = f.value(u);
  if (std::abs(z) <= kEpsNum)
    throw DegenerateChargeError("attractor_ray: Z vanishes at the start point");
  auto zero = f.zero();
  if (!zero)
    throw DegenerateChargeError("attractor_ray: constant Z has no attractor flow");
  Complex target = *zero;

  AttractorRay out;
  out.from = u;

  // earliest active-wall crossing strictly inside the flow segment
  double best_t = 2.0;
  Charge best1, best2;
  auto dirs = table.active_directions();
  for (std::size_t i = 0; i < dirs.size(); ++i)
    for (std::size_t j = i + 1; j < dirs.size(); ++j) {
      LinearForm zi = scene.linear_form(dirs[i]);
      LinearForm zj = scene.linear_form(dirs[j]);
      double sc = std::abs(zi.slope) + std::abs(zi.offset) + std::abs(zj.slope) +
                  std::abs(zj.offset);
      if (std::abs(zi.slope * zj.offset - zj.slope * zi.offset) <= 1e-12 * sc * sc)
        continue;  // proportional forms: no wall
      for (double t : wall_hits_on_segment(zi, zj, u, target, 1e-9)) {
        if (t >= 1.0 - 1e-12) continue;
        if (t < best_t) {
          best_t = t;
          best1 = dirs[i];
          best2 = dirs[j];
        }
      }
    }

  if (best_t <= 1.0) {
    out.stop.kind = AttractorStop::Kind::kWall;
    out.stop.point = u + best_t * (target - u);
    out.stop.wall_g1 = best1;
    out.stop.wall_g2 = best2;
    return out;
  }

  out.stop.kind = AttractorStop::Kind::kZero;
  out.stop.point = target;
  if (auto si = scene.singularity_near(target)) {
    Decomposition d = scene.decompose(g);
    bool pure = true;
    long long mult = 0;
    for (std::size_t k = 0; k < d.thimble.size(); ++k) {
      if (k == *si) {
        mult = d.thimble[k];
      } else if (d.thimble[k] != 0) {
        pure = false;
      }
    }
    for (long long fc : d.flux)
      if (fc != 0) pure = false;
    if (pure && mult > 0) {
      out.stop.singularity = si;
      out.stop.thimble_multiple = mult;
    }
  }
  return out;
}

}  // namespace kswall
