#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kswall {

// Element of the charge lattice: an integer boundary part (a, b) plus an
// integer flux part lying in the kernel of the skew pairing. Flux vectors
// are stored with trailing zeros trimmed, so (1,0) and (1,0|0) compare equal.
class Charge {
 public:
  Charge() = default;
  Charge(long long a, long long b) : a_(a), b_(b) {}
  Charge(long long a, long long b, std::vector<long long> flux)
      : a_(a), b_(b), flux_(std::move(flux)) {
    trim();
  }

  long long a() const { return a_; }
  long long b() const { return b_; }
  const std::vector<long long>& flux() const { return flux_; }
  long long flux_at(std::size_t j) const {
    return j < flux_.size() ? flux_[j] : 0;
  }

  bool is_zero() const { return a_ == 0 && b_ == 0 && flux_.empty(); }
  bool boundary_is_zero() const { return a_ == 0 && b_ == 0; }

  // Total degree used for series truncation: |a| + |b| + sum |f_j|.
  long long degree() const;

  // gcd of all coordinates; 0 for the zero charge.
  long long content() const;
  Charge primitive() const;  // this / content(); zero charge maps to itself

  Charge operator+(const Charge& o) const;
  Charge operator-(const Charge& o) const;
  Charge operator-() const;
  Charge operator*(long long k) const;
  bool operator==(const Charge& o) const = default;
  std::strong_ordering operator<=>(const Charge& o) const;

  // "(a,b)" or "(a,b|f1,...,fk)".
  std::string to_string() const;
  static std::optional<Charge> parse(std::string_view text);

 private:
  void trim();
  long long a_ = 0;
  long long b_ = 0;
  std::vector<long long> flux_;
};

// Skew pairing <gamma, delta> = a*b' - b*a'; flux lies in the kernel.
long long pair(const Charge& g, const Charge& d);

// Nonzero boundary with coprime coordinates.
bool is_primitive_boundary(const Charge& g);

// gamma + sign * <gamma, thimble> * thimble. Requires a primitive thimble
// boundary; preserves the pairing.
Charge picard_lefschetz(const Charge& g, const Charge& thimble, int sign);

// True when (a,b,flux) is the preferred representative of {g, -g}: first
// nonzero coordinate of the boundary positive (boundary-zero charges fall
// back to the flux part).
bool is_canonical(const Charge& g);
Charge canonical(const Charge& g);

// Piecewise-linear path on the chart.
struct BasePath {
  std::vector<std::complex<double>> polyline;
};

}  // namespace kswall
