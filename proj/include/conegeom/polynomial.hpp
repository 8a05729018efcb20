#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <vector>

#include "conegeom/matrix.hpp"

namespace conegeom {

/// Dense univariate polynomial over Q, coefficients in increasing degree.
/// The zero polynomial has no coefficients.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly constant(const Rational& a) { return Poly({a}); }
  static Poly x() { return Poly({Rational(0), Rational(1)}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational operator()(const Rational& t) const {
    Rational acc = 0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
    return acc;
  }

  Poly derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < c_.size(); ++i) d.push_back(c_[i] * Rational(static_cast<long long>(i)));
    return Poly(d);
  }

  Poly monic() const {
    if (is_zero()) return *this;
    std::vector<Rational> m = c_;
    const Rational lc = leading();
    for (auto& a : m) a /= lc;
    return Poly(m);
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Rational> s(std::max(a.c_.size(), b.c_.size()), Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) s[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) s[i] += b.c_[i];
    return Poly(s);
  }
  friend Poly operator-(const Poly& a) {
    std::vector<Rational> s = a.c_;
    for (auto& x : s) x = -x;
    return Poly(s);
  }
  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly();
    std::vector<Rational> p(a.c_.size() + b.c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) p[i + j] += a.c_[i] * b.c_[j];
    return Poly(p);
  }

  /// Euclidean division: a = q*b + r with deg r < deg b.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    assert(!b.is_zero());
    std::vector<Rational> r = a.c_;
    const int db = b.degree();
    std::vector<Rational> q(std::max(0, a.degree() - db + 1), Rational(0));
    for (int d = a.degree(); d >= db; --d) {
      const Rational f = r[d] / b.leading();
      if (f == 0) continue;
      q[d - db] = f;
      for (int i = 0; i <= db; ++i) r[d - db + i] -= f * b.c_[i];
    }
    return {Poly(q), Poly(r)};
  }

  friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }
  friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
  friend bool operator==(const Poly&, const Poly&) = default;

  static Poly gcd(Poly a, Poly b) {
    while (!b.is_zero()) {
      Poly r = a % b;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /// p / gcd(p, p'): same roots, each simple.
  Poly squarefree_part() const {
    if (degree() <= 0) return monic();
    return (*this / gcd(*this, derivative())).monic();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

/// Characteristic polynomial det(tI - m) by the Faddeev-LeVerrier recursion.
inline Poly characteristic_polynomial(const RatMatrix& m) {
  assert(m.square());
  const std::size_t n = m.rows();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  RatMatrix prev = RatMatrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    RatMatrix mk = m * prev;
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += mk(i, i);
    c[n - k] = -tr / Rational(static_cast<long long>(k));
    prev = mk;
    for (std::size_t i = 0; i < n; ++i) prev(i, i) += c[n - k];
  }
  return Poly(c);
}

/// p(m) by Horner's rule.
inline RatMatrix evaluate(const Poly& p, const RatMatrix& m) {
  const std::size_t n = m.rows();
  RatMatrix acc(n, n);
  const auto& c = p.coeffs();
  for (std::size_t i = c.size(); i-- > 0;) {
    acc = acc * m;
    for (std::size_t d = 0; d < n; ++d) acc(d, d) += c[i];
  }
  return acc;
}

namespace detail {

inline int sign_changes_at_infinity(const std::vector<Poly>& chain, bool positive) {
  int changes = 0, last = 0;
  for (const auto& p : chain) {
    if (p.is_zero()) continue;
    int s = p.leading() > 0 ? 1 : -1;
    if (!positive && p.degree() % 2 == 1) s = -s;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace detail

/// Number of distinct real roots, by Sturm's theorem.
inline int count_distinct_real_roots(const Poly& p) {
  if (p.degree() <= 0) return 0;
  std::vector<Poly> chain{p, p.derivative()};
  while (!chain.back().is_zero()) {
    Poly r = chain[chain.size() - 2] % chain.back();
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  return detail::sign_changes_at_infinity(chain, false) - detail::sign_changes_at_infinity(chain, true);
}

inline bool has_only_real_roots(const Poly& p) {
  const Poly s = p.squarefree_part();
  return count_distinct_real_roots(s) == s.degree();
}

namespace detail {

inline std::vector<BigInt> positive_divisors(BigInt n) {
  if (n < 0) n = -n;
  std::vector<BigInt> small, large;
  for (BigInt d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d * d != n) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

}  // namespace detail

/// Rational roots of p, each listed once in increasing order, by the rational
/// root theorem on the integer-scaled polynomial. Meant for the small
/// coefficients produced by adjoint matrices.
inline std::vector<Rational> rational_roots(const Poly& p) {
  std::vector<Rational> roots;
  if (p.degree() <= 0) return roots;
  Poly q = p.squarefree_part();
  // Strip the root at zero.
  if (q.coeff(0) == 0) {
    roots.push_back(0);
    q = Poly::divmod(q, Poly::x()).first;
  }
  if (q.degree() <= 0) return roots;
  BigInt lcm = 1;
  for (const auto& a : q.coeffs()) {
    const BigInt d = boost::multiprecision::denominator(a);
    lcm = lcm / boost::multiprecision::gcd(lcm, d) * d;
  }
  const BigInt a0 = boost::multiprecision::numerator(q.coeff(0) * lcm);
  const BigInt an = boost::multiprecision::numerator(q.leading() * lcm);
  for (const auto& num : detail::positive_divisors(a0))
    for (const auto& den : detail::positive_divisors(an))
      for (int sign : {1, -1}) {
        const Rational cand = Rational(num * sign, den);
        if (q(cand) == 0 && std::find(roots.begin(), roots.end(), cand) == roots.end()) roots.push_back(cand);
      }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace conegeom
