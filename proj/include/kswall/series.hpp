#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "kswall/charge.hpp"
#include "kswall/rational.hpp"

namespace kswall {

// Truncated element of the group algebra of the charge lattice over Q.
// Monomials x^gamma carry exact rational coefficients; every operation
// discards monomials whose total degree exceeds the truncation order.
//
// Truncated arithmetic is consistent as long as all supports stay inside a
// common positive cone (degree is additive there). Wall functions and
// scattering outputs satisfy this by construction.
class FormalSeries {
 public:
  explicit FormalSeries(int order = 0) : order_(order) {}

  static FormalSeries one(int order);
  static FormalSeries monomial(const Charge& g, const Rational& c, int order);

  int order() const { return order_; }
  const std::map<Charge, Rational>& terms() const { return terms_; }
  Rational coefficient(const Charge& g) const;
  Rational constant_term() const { return coefficient(Charge()); }
  bool is_one() const;
  bool is_zero() const { return terms_.empty(); }

  void set_coefficient(const Charge& g, const Rational& c);
  void add_term(const Charge& g, const Rational& c);

  FormalSeries operator+(const FormalSeries& o) const;
  FormalSeries operator-(const FormalSeries& o) const;
  FormalSeries operator*(const FormalSeries& o) const;
  FormalSeries operator*(const Rational& c) const;
  FormalSeries operator-() const;
  bool operator==(const FormalSeries& o) const = default;

  // Integer powers; negative powers require constant term exactly 1.
  FormalSeries pow(long long k) const;
  // Multiplicative inverse; requires constant term exactly 1.
  FormalSeries inverse() const;

  // exp of a series with zero constant term / log of a series with
  // constant term 1.
  FormalSeries exp() const;
  FormalSeries log() const;

  // Re-truncate to a (lower) order.
  FormalSeries truncated(int order) const;

  // Canonical text form: monomials sorted by (degree, charge), exact
  // rational coefficients. Example: "1 + 1 * x^(1,0) - 1/4 * x^(2,0)".
  std::string to_text() const;
  static std::optional<FormalSeries> parse(std::string_view text, int order);

 private:
  void prune();
  int order_;
  std::map<Charge, Rational> terms_;
};

}  // namespace kswall
