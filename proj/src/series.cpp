#include "kswall/series.hpp"

#include <sstream>

#include "kswall/errors.hpp"

namespace kswall {

std::string rational_to_string(const Rational& r) {
  std::ostringstream os;
  os << numerator(r);
  if (denominator(r) != 1) os << '/' << denominator(r);
  return os.str();
}

std::optional<Rational> parse_rational(std::string_view text) {
  std::string s(text);
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) return std::nullopt;
    return Rational(num, den);
  } catch (...) {
    return std::nullopt;
  }
}

FormalSeries FormalSeries::one(int order) {
  FormalSeries s(order);
  s.terms_[Charge()] = 1;
  return s;
}

FormalSeries FormalSeries::monomial(const Charge& g, const Rational& c, int order) {
  FormalSeries s(order);
  if (c != 0 && g.degree() <= order) s.terms_[g] = c;
  return s;
}

Rational FormalSeries::coefficient(const Charge& g) const {
  auto it = terms_.find(g);
  return it == terms_.end() ? Rational(0) : it->second;
}

bool FormalSeries::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first == Charge() &&
         terms_.begin()->second == 1;
}

void FormalSeries::set_coefficient(const Charge& g, const Rational& c) {
  if (c == 0 || g.degree() > order_)
    terms_.erase(g);
  else
    terms_[g] = c;
}

void FormalSeries::add_term(const Charge& g, const Rational& c) {
  if (g.degree() > order_) return;
  auto [it, inserted] = terms_.emplace(g, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  } else if (c == 0) {
    terms_.erase(it);
  }
}

void FormalSeries::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0 || it->first.degree() > order_)
      it = terms_.erase(it);
    else
      ++it;
  }
}

FormalSeries FormalSeries::operator+(const FormalSeries& o) const {
  FormalSeries r(*this);
  r.order_ = std::min(order_, o.order_);
  for (const auto& [g, c] : o.terms_) r.add_term(g, c);
  r.prune();
  return r;
}

FormalSeries FormalSeries::operator-(const FormalSeries& o) const {
  return *this + (-o);
}

FormalSeries FormalSeries::operator-() const {
  FormalSeries r(*this);
  for (auto& [g, c] : r.terms_) c = -c;
  return r;
}

FormalSeries FormalSeries::operator*(const Rational& c) const {
  FormalSeries r(order_);
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& [g, v] : r.terms_) v *= c;
  return r;
}

FormalSeries FormalSeries::operator*(const FormalSeries& o) const {
  FormalSeries r(std::min(order_, o.order_));
  for (const auto& [g1, c1] : terms_)
    for (const auto& [g2, c2] : o.terms_) {
      Charge g = g1 + g2;
      if (g.degree() <= r.order_) r.add_term(g, c1 * c2);
    }
  return r;
}

FormalSeries FormalSeries::inverse() const {
  if (constant_term() != 1)
    throw InvalidWallError("series inverse requires constant term 1");
  // 1/(1+e) = sum (-e)^k
  FormalSeries e(*this);
  e.terms_.erase(Charge());
  FormalSeries result = one(order_);
  FormalSeries term = one(order_);
  FormalSeries neg = -e;
  for (int k = 0; k < order_; ++k) {
    term = term * neg;
    if (term.is_zero()) break;
    result = result + term;
  }
  return result;
}

FormalSeries FormalSeries::pow(long long k) const {
  if (k == 0) return one(order_);
  FormalSeries base = k > 0 ? *this : inverse();
  long long n = k > 0 ? k : -k;
  FormalSeries result = one(order_);
  while (n > 0) {
    if (n & 1) result = result * base;
    base = base * base;
    n >>= 1;
  }
  return result;
}

FormalSeries FormalSeries::exp() const {
  if (constant_term() != 0)
    throw InvalidWallError("series exp requires zero constant term");
  FormalSeries result = one(order_);
  FormalSeries term = one(order_);
  Rational inv_fact = 1;
  for (int m = 1; m <= order_; ++m) {
    term = term * (*this);
    if (term.is_zero()) break;
    inv_fact /= m;
    result = result + term * inv_fact;
  }
  return result;
}

FormalSeries FormalSeries::log() const {
  if (constant_term() != 1)
    throw InvalidWallError("series log requires constant term 1");
  FormalSeries e(*this);
  e.terms_.erase(Charge());
  FormalSeries result(order_);
  FormalSeries term = one(order_);
  for (int m = 1; m <= order_; ++m) {
    term = term * e;
    if (term.is_zero()) break;
    Rational c = Rational((m % 2 == 1) ? 1 : -1, m);
    result = result + term * c;
  }
  return result;
}

FormalSeries FormalSeries::truncated(int order) const {
  FormalSeries r(order);
  for (const auto& [g, c] : terms_)
    if (g.degree() <= order) r.terms_[g] = c;
  return r;
}

std::string FormalSeries::to_text() const {
  if (terms_.empty()) return "0";
  // sort by (degree, charge)
  std::vector<std::pair<Charge, Rational>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    if (x.first.degree() != y.first.degree())
      return x.first.degree() < y.first.degree();
    return x.first < y.first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, c] : sorted) {
    Rational abs_c = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << '-';
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (g.is_zero()) {
      os << rational_to_string(abs_c);
    } else {
      os << rational_to_string(abs_c) << " * x^" << g.to_string();
    }
  }
  return os.str();
}

std::optional<FormalSeries> FormalSeries::parse(std::string_view text, int order) {
  FormalSeries s(order);
  std::string t(text);
  if (t == "0") return s;
  // tokenize on +/- separators at top level (charges contain no signs after '(')
  std::vector<std::pair<int, std::string>> parts;  // sign, body
  int sign = 1;
  std::string cur;
  bool in_paren = false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    char ch = t[i];
    if (ch == '(') in_paren = true;
    if (ch == ')') in_paren = false;
    if (!in_paren && (ch == '+' || ch == '-') && !cur.empty() &&
        cur.find_first_not_of(' ') != std::string::npos) {
      parts.push_back({sign, cur});
      sign = ch == '-' ? -1 : 1;
      cur.clear();
    } else if (!in_paren && ch == '-' && cur.find_first_not_of(' ') == std::string::npos) {
      sign = -sign;
    } else {
      cur += ch;
    }
  }
  if (cur.find_first_not_of(' ') != std::string::npos) parts.push_back({sign, cur});
  for (auto& [sg, body] : parts) {
    // body: "c * x^(a,b)" or "c" or "x^(a,b)"
    auto strip = [](std::string v) {
      auto b = v.find_first_not_of(' ');
      auto e = v.find_last_not_of(' ');
      return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    std::string b = strip(body);
    Rational coeff = 1;
    Charge g;
    auto xpos = b.find("x^");
    if (xpos == std::string::npos) {
      auto r = parse_rational(b);
      if (!r) return std::nullopt;
      coeff = *r;
    } else {
      std::string cpart = strip(b.substr(0, xpos));
      if (!cpart.empty() && cpart.back() == '*') cpart = strip(cpart.substr(0, cpart.size() - 1));
      if (!cpart.empty()) {
        auto r = parse_rational(cpart);
        if (!r) return std::nullopt;
        coeff = *r;
      }
      auto cg = Charge::parse(strip(b.substr(xpos + 2)));
      if (!cg) return std::nullopt;
      g = *cg;
    }
    s.add_term(g, sg * coeff);
  }
  return s;
}

}  // namespace kswall
