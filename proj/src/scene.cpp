#include "kswall/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "kswall/errors.hpp"

namespace kswall {

double ChartRect::diameter() const { return std::hypot(width(), height()); }

namespace {

double cross2(Complex a, Complex b) {
  return a.real() * b.imag() - a.imag() * b.real();
}

double dist_point_segment(Complex x, Complex p, Complex q) {
  Complex d = q - p;
  double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(x - p);
  double t = std::clamp(((x - p) * std::conj(d)).real() / len2, 0.0, 1.0);
  return std::abs(x - (p + t * d));
}

// Solves the 2 x n integer system  M c = rhs  (columns of M are thimble
// boundaries). Returns one solution plus a basis of the integer kernel.
struct IntSolve {
  bool solvable = false;
  std::vector<long long> solution;
  std::vector<std::vector<long long>> kernel;
};

IntSolve solve_boundary_system(const std::vector<std::array<long long, 2>>& cols,
                               long long r0, long long r1) {
  const std::size_t n = cols.size();
  // Column-style Hermite reduction: M * U stays invariant as we apply the
  // same column operations to M (2 x n) and U (n x n, starts as identity).
  std::vector<std::array<long long, 2>> m(cols);
  std::vector<std::vector<long long>> u(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;

  auto col_axpy = [&](std::size_t dst, std::size_t src, long long k) {
    // col dst += k * col src
    m[dst][0] += k * m[src][0];
    m[dst][1] += k * m[src][1];
    for (std::size_t i = 0; i < n; ++i) u[i][dst] += k * u[i][src];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    std::swap(m[x], m[y]);
    for (std::size_t i = 0; i < n; ++i) std::swap(u[i][x], u[i][y]);
  };

  std::size_t rank = 0;
  for (int row = 0; row < 2 && rank < n; ++row) {
    // gcd-eliminate row entries right of `rank` into column `rank`
    while (true) {
      std::size_t piv = n;
      for (std::size_t j = rank; j < n; ++j)
        if (m[j][row] != 0 && (piv == n || std::llabs(m[j][row]) < std::llabs(m[piv][row])))
          piv = j;
      if (piv == n) break;  // row is zero from rank on
      col_swap(rank, piv);
      bool clean = true;
      for (std::size_t j = rank + 1; j < n; ++j) {
        if (m[j][row] != 0) {
          col_axpy(j, rank, -(m[j][row] / m[rank][row]));
          if (m[j][row] != 0) clean = false;
        }
      }
      if (clean) break;
    }
    if (rank < n && m[rank][row] != 0) ++rank;
  }

  // Back-solve M' y = rhs over the reduced (lower-triangular-ish) columns.
  IntSolve out;
  std::vector<long long> rhs{r0, r1};
  std::vector<long long> y(n, 0);
  for (int row = 0; row < 2; ++row) {
    // find the pivot column for this row among the first `rank`
    std::size_t pc = n;
    for (std::size_t j = 0; j < rank; ++j) {
      if (m[j][row] != 0) {
        bool used = false;
        for (int r2 = 0; r2 < row; ++r2)
          if (m[j][r2] != 0) used = true;
        if (!used) {
          pc = j;
          break;
        }
      }
    }
    long long acc = rhs[row];
    for (std::size_t j = 0; j < n; ++j)
      if (j != pc) acc -= m[j][row] * y[j];
    if (pc == n) {
      if (acc != 0) return out;  // inconsistent row
      continue;
    }
    if (acc % m[pc][row] != 0) return out;  // no integer solution
    y[pc] = acc / m[pc][row];
  }
  // verify (paranoid about pivot bookkeeping above)
  long long c0 = 0, c1 = 0;
  for (std::size_t j = 0; j < n; ++j) {
    c0 += m[j][0] * y[j];
    c1 += m[j][1] * y[j];
  }
  if (c0 != r0 || c1 != r1) return out;

  out.solvable = true;
  out.solution.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.solution[i] += u[i][j] * y[j];
  for (std::size_t j = rank; j < n; ++j) {
    std::vector<long long> k(n);
    for (std::size_t i = 0; i < n; ++i) k[i] = u[i][j];
    out.kernel.push_back(std::move(k));
  }
  return out;
}

}  // namespace

std::vector<Diagnostic> Scene::validate() const {
  std::vector<Diagnostic> out;
  auto err = [&](std::string field, std::string msg) {
    out.push_back({Diagnostic::Severity::kError, std::move(field), std::move(msg)});
  };
  auto warn = [&](std::string field, std::string msg) {
    out.push_back({Diagnostic::Severity::kWarning, std::move(field), std::move(msg)});
  };

  if (chart_.xmin >= chart_.xmax || chart_.ymin >= chart_.ymax)
    err("chart", "empty chart rectangle");
  if (flux_rank_ < 0) err("flux_rank", "negative flux rank");
  if (static_cast<int>(flux_z_.size()) != flux_rank_)
    err("flux_z", "expected one central-charge constant per flux basis charge");

  for (std::size_t i = 0; i < sings_.size(); ++i) {
    const auto& s = sings_[i];
    std::string base = "singularities[" + std::to_string(i) + "]";
    if (!is_primitive_boundary(s.thimble))
      err(base + ".thimble", "thimble boundary must be nonzero and primitive");
    if (std::abs(s.slope) <= kEpsNum) err(base + ".slope", "zero slope");
    if (!chart_.contains(s.position)) warn(base + ".position", "outside the chart");
    if (static_cast<int>(s.thimble.flux().size()) > flux_rank_)
      err(base + ".thimble", "flux part longer than the scene flux rank");
    for (std::size_t j = i + 1; j < sings_.size(); ++j) {
      if (std::abs(s.position - sings_[j].position) <= kEpsGeom)
        err(base + ".position", "coincides with singularities[" + std::to_string(j) + "]");
    }
  }

  // Model-degenerate charges: thimble differences with (numerically) equal
  // slopes have constant Z, so dZ = 0 even though Z is defined.
  for (std::size_t i = 0; i < sings_.size(); ++i)
    for (std::size_t j = i + 1; j < sings_.size(); ++j) {
      if (std::abs(sings_[i].slope - sings_[j].slope) <= 1e-12)
        warn("singularities", "thimble difference e" + std::to_string(i) + " - e" +
                                  std::to_string(j) +
                                  " is model-degenerate (equal slopes, constant Z)");
    }

  if (!chart_.contains(basepoint_)) err("basepoint", "outside the chart");
  for (std::size_t i = 0; i < sings_.size(); ++i) {
    if (std::abs(basepoint_ - sings_[i].position) <= kEpsGeom)
      err("basepoint", "coincides with singularities[" + std::to_string(i) + "]");
    // on the branch cut?
    Complex d = basepoint_ - sings_[i].position;
    Complex cut = std::polar(1.0, sings_[i].cut_angle);
    if (std::abs(cross2(cut, d)) <= kEpsGeom && (d * std::conj(cut)).real() > 0)
      err("basepoint", "lies on the branch cut of singularities[" + std::to_string(i) + "]");
  }
  return out;
}

bool Scene::is_valid() const {
  for (const auto& d : validate())
    if (d.severity == Diagnostic::Severity::kError) return false;
  return true;
}

Decomposition Scene::decompose(const Charge& g) const {
  const std::size_t n = sings_.size();
  std::vector<std::array<long long, 2>> cols(n);
  for (std::size_t i = 0; i < n; ++i)
    cols[i] = {sings_[i].thimble.a(), sings_[i].thimble.b()};
  IntSolve sol = solve_boundary_system(cols, g.a(), g.b());
  if (!sol.solvable)
    throw BasisError("charge " + g.to_string() + " is not expressible in the scene basis");

  // An ambiguous expression is fine only when Z does not depend on the
  // choice, i.e. the kernel combinations have identically vanishing Z.
  for (const auto& k : sol.kernel) {
    Complex slope{0, 0}, offset{0, 0};
    std::vector<long long> flux_shift(static_cast<std::size_t>(flux_rank_), 0);
    for (std::size_t i = 0; i < n; ++i) {
      slope += static_cast<double>(k[i]) * sings_[i].slope;
      offset -= static_cast<double>(k[i]) * sings_[i].slope * sings_[i].position;
      for (int j = 0; j < flux_rank_; ++j)
        flux_shift[j] += k[i] * sings_[i].thimble.flux_at(j);
    }
    for (int j = 0; j < flux_rank_; ++j)
      offset -= static_cast<double>(flux_shift[j]) * flux_z_[j];
    if (std::abs(slope) > 1e-12 || std::abs(offset) > 1e-12)
      throw BasisError("charge " + g.to_string() +
                       " has an ambiguous scene-basis expression with non-constant Z");
  }

  Decomposition d;
  d.thimble = sol.solution;
  d.flux.assign(static_cast<std::size_t>(flux_rank_), 0);
  for (int j = 0; j < flux_rank_; ++j) {
    long long f = g.flux_at(j);
    for (std::size_t i = 0; i < n; ++i) f -= d.thimble[i] * sings_[i].thimble.flux_at(j);
    d.flux[j] = f;
  }
  if (static_cast<int>(g.flux().size()) > flux_rank_)
    throw BasisError("charge " + g.to_string() + " has flux beyond the scene flux rank");
  return d;
}

LinearForm Scene::linear_form(const Charge& g) const {
  Decomposition d = decompose(g);
  LinearForm f;
  for (std::size_t i = 0; i < sings_.size(); ++i) {
    f.slope += static_cast<double>(d.thimble[i]) * sings_[i].slope;
    f.offset -= static_cast<double>(d.thimble[i]) * sings_[i].slope * sings_[i].position;
  }
  for (int j = 0; j < flux_rank_; ++j)
    f.offset += static_cast<double>(d.flux[j]) * flux_z_[j];
  return f;
}

std::optional<std::size_t> Scene::singularity_near(Complex u, double eps) const {
  for (std::size_t i = 0; i < sings_.size(); ++i)
    if (std::abs(u - sings_[i].position) <= eps) return i;
  return std::nullopt;
}

std::vector<CutCrossing> cut_crossings(Complex p, Complex q, const Scene& scene) {
  std::vector<CutCrossing> out;
  Complex s = q - p;
  if (std::abs(s) == 0.0) return out;
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const auto& sing = scene.singularity(i);
    Complex cut = std::polar(1.0, sing.cut_angle);
    // segment point p + t s on the ray b + r cut, r > 0
    double denom = cross2(cut, s);
    if (std::abs(denom) < 1e-15) continue;  // parallel to the cut
    Complex w = p - sing.position;
    double t = -cross2(cut, w) / denom;
    double r = cross2(s, w) / (-denom);
    // Half-open convention in t keeps shared polyline vertices from double
    // counting; r must be strictly positive (r ~ 0 is the singularity).
    if (t <= 0.0 || t > 1.0) continue;
    if (r <= kEpsGeom) {
      if (r > -kEpsGeom)
        throw GeometryError("path crosses a branch cut at its singularity");
      continue;
    }
    int sign = denom > 0 ? 1 : -1;  // phase of (u - b) increasing through the cut
    out.push_back({t, i, sign});
  }
  std::sort(out.begin(), out.end(), [](const CutCrossing& x, const CutCrossing& y) {
    return x.t < y.t;
  });
  return out;
}

Charge parallel_transport(const Charge& g, const BasePath& path, const Scene& scene) {
  if (path.polyline.size() < 2) return g;
  for (Complex v : path.polyline)
    if (scene.singularity_near(v))
      throw GeometryError("path vertex coincides with a singularity");
  Charge cur = g;
  for (std::size_t k = 0; k + 1 < path.polyline.size(); ++k) {
    Complex p = path.polyline[k], q = path.polyline[k + 1];
    for (std::size_t i = 0; i < scene.size(); ++i)
      if (dist_point_segment(scene.singularity(i).position, p, q) <= kEpsGeom)
        throw GeometryError("path segment passes through singularities[" +
                            std::to_string(i) + "]");
    for (const auto& c : cut_crossings(p, q, scene))
      cur = picard_lefschetz(cur, scene.thimble(c.sing), c.sign);
  }
  return cur;
}

}  // namespace kswall
