#include "kswall/charge.hpp"

#include <cstdlib>
#include <numeric>
#include <sstream>

#include "kswall/errors.hpp"

namespace kswall {

void Charge::trim() {
  while (!flux_.empty() && flux_.back() == 0) flux_.pop_back();
}

long long Charge::degree() const {
  long long d = std::llabs(a_) + std::llabs(b_);
  for (long long f : flux_) d += std::llabs(f);
  return d;
}

long long Charge::content() const {
  long long g = std::gcd(std::llabs(a_), std::llabs(b_));
  for (long long f : flux_) g = std::gcd(g, std::llabs(f));
  return g;
}

Charge Charge::primitive() const {
  long long c = content();
  if (c <= 1) return *this;
  std::vector<long long> f(flux_);
  for (auto& x : f) x /= c;
  return Charge(a_ / c, b_ / c, std::move(f));
}

Charge Charge::operator+(const Charge& o) const {
  std::vector<long long> f(std::max(flux_.size(), o.flux_.size()), 0);
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = flux_at(j) + o.flux_at(j);
  return Charge(a_ + o.a_, b_ + o.b_, std::move(f));
}

Charge Charge::operator-(const Charge& o) const { return *this + (-o); }

Charge Charge::operator-() const {
  std::vector<long long> f(flux_);
  for (auto& x : f) x = -x;
  return Charge(-a_, -b_, std::move(f));
}

Charge Charge::operator*(long long k) const {
  if (k == 0) return Charge();
  std::vector<long long> f(flux_);
  for (auto& x : f) x *= k;
  return Charge(a_ * k, b_ * k, std::move(f));
}

std::strong_ordering Charge::operator<=>(const Charge& o) const {
  if (auto c = a_ <=> o.a_; c != 0) return c;
  if (auto c = b_ <=> o.b_; c != 0) return c;
  std::size_t n = std::max(flux_.size(), o.flux_.size());
  for (std::size_t j = 0; j < n; ++j)
    if (auto c = flux_at(j) <=> o.flux_at(j); c != 0) return c;
  return std::strong_ordering::equal;
}

std::string Charge::to_string() const {
  std::ostringstream os;
  os << '(' << a_ << ',' << b_;
  if (!flux_.empty()) {
    os << '|';
    for (std::size_t j = 0; j < flux_.size(); ++j) {
      if (j) os << ',';
      os << flux_[j];
    }
  }
  os << ')';
  return os.str();
}

std::optional<Charge> Charge::parse(std::string_view text) {
  // (a,b) or (a,b|f1,...,fk); also bare "a,b" for CLI convenience.
  std::string s(text);
  if (!s.empty() && s.front() == '(') {
    if (s.back() != ')') return std::nullopt;
    s = s.substr(1, s.size() - 2);
  }
  std::string boundary = s, flux;
  if (auto bar = s.find('|'); bar != std::string::npos) {
    boundary = s.substr(0, bar);
    flux = s.substr(bar + 1);
  }
  auto split = [](const std::string& t) {
    std::vector<long long> out;
    std::istringstream is(t);
    std::string item;
    while (std::getline(is, item, ',')) {
      std::size_t pos = 0;
      long long v = 0;
      try {
        v = std::stoll(item, &pos);
      } catch (...) {
        return std::optional<std::vector<long long>>();
      }
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) return std::optional<std::vector<long long>>();
      out.push_back(v);
    }
    return std::optional(out);
  };
  auto bv = split(boundary);
  if (!bv || bv->size() != 2) return std::nullopt;
  std::vector<long long> fv;
  if (!flux.empty()) {
    auto parsed = split(flux);
    if (!parsed) return std::nullopt;
    fv = *parsed;
  }
  return Charge((*bv)[0], (*bv)[1], std::move(fv));
}

long long pair(const Charge& g, const Charge& d) {
  return g.a() * d.b() - g.b() * d.a();
}

bool is_primitive_boundary(const Charge& g) {
  if (g.boundary_is_zero()) return false;
  return std::gcd(std::llabs(g.a()), std::llabs(g.b())) == 1;
}

Charge picard_lefschetz(const Charge& g, const Charge& thimble, int sign) {
  if (!is_primitive_boundary(thimble))
    throw UnsupportedClassError("picard_lefschetz: thimble must have primitive nonzero boundary");
  if (sign != 1 && sign != -1)
    throw UnsupportedClassError("picard_lefschetz: sign must be +1 or -1");
  return g + thimble * (sign * pair(g, thimble));
}

bool is_canonical(const Charge& g) {
  if (g.a() != 0) return g.a() > 0;
  if (g.b() != 0) return g.b() > 0;
  for (long long f : g.flux())
    if (f != 0) return f > 0;
  return true;  // zero charge
}

Charge canonical(const Charge& g) { return is_canonical(g) ? g : -g; }

}  // namespace kswall
