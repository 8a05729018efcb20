#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "conegeom/errors.hpp"
#include "conegeom/matrix.hpp"

namespace conegeom {

/// Exact positive number mant * 2^exp2 with mant in [1, 2), or zero.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(const Rational& q) : Dyadic(q, BigInt(0)) {}  // NOLINT: implicit on purpose
  Dyadic(const Rational& mant, const BigInt& exp2) : mant_(mant), exp2_(exp2) {
    if (mant_ < 0) throw Error("Dyadic values are nonnegative");
    normalize();
  }
  static Dyadic pow2(const BigInt& e) { return Dyadic(Rational(1), e); }

  bool is_zero() const { return mant_ == 0; }
  const Rational& mant() const { return mant_; }
  const BigInt& exp2() const { return exp2_; }

  /// log2 of the value as a double (the exponent part is assumed to fit).
  double log2() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return exp2_.convert_to<double>() + std::log2(mant_.convert_to<double>());
  }

  /// The exact value when the exponent is small enough to expand.
  std::optional<Rational> exact(long max_bits = 1 << 16) const {
    if (is_zero()) return Rational(0);
    if (abs(exp2_) > max_bits) return std::nullopt;
    const long e = exp2_.convert_to<long>();
    const BigInt p = BigInt(1) << static_cast<unsigned>(std::abs(e));
    return e >= 0 ? Rational(mant_ * p) : Rational(mant_ / p);
  }

  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return Dyadic(a.mant_ * b.mant_, a.exp2_ + b.exp2_);
  }
  friend Dyadic operator/(const Dyadic& a, const Dyadic& b) {
    if (b.is_zero()) throw Error("Dyadic division by zero");
    if (a.is_zero()) return {};
    return Dyadic(a.mant_ / b.mant_, a.exp2_ - b.exp2_);
  }
  friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.mant_ == b.mant_ && a.exp2_ == b.exp2_; }
  friend bool operator<(const Dyadic& a, const Dyadic& b) {
    if (a.is_zero() || b.is_zero()) return a.is_zero() && !b.is_zero();
    if (a.exp2_ != b.exp2_) return a.exp2_ < b.exp2_;
    return a.mant_ < b.mant_;
  }
  friend bool operator>(const Dyadic& a, const Dyadic& b) { return b < a; }
  friend bool operator<=(const Dyadic& a, const Dyadic& b) { return !(b < a); }

  /// |a - b| / max(a, b), exact when both expand; 1 otherwise (values that
  /// far apart differ by at least half their size).
  static double relative_gap(const Dyadic& a, const Dyadic& b) {
    if (a == b) return 0;
    const Dyadic& big = a < b ? b : a;
    const Dyadic& small = a < b ? a : b;
    if (small.is_zero() || big.exp2_ - small.exp2_ > 2) return 1;
    const Rational q = (small / big).exact().value();
    return (Rational(1) - q).convert_to<double>();
  }

  std::string str() const {
    if (is_zero()) return "0";
    if (auto e = exact(64)) return e->str();
    return mant_.str() + "*2^" + exp2_.str();
  }

 private:
  static long bit_length(const BigInt& x) { return x == 0 ? 0 : static_cast<long>(msb(x)) + 1; }

  void normalize() {
    if (mant_ == 0) {
      exp2_ = 0;
      return;
    }
    const BigInt p = numerator(mant_), q = denominator(mant_);
    long k = bit_length(p) - bit_length(q);
    Rational m = k >= 0 ? Rational(p, q << static_cast<unsigned>(k)) : Rational(p << static_cast<unsigned>(-k), q);
    if (m < 1) {
      m *= 2;
      --k;
    }
    mant_ = m;
    exp2_ += k;
  }

  Rational mant_ = 0;
  BigInt exp2_ = 0;
};

/// log-distance comparison: returns <0, 0, >0 as |log a| is smaller, equal,
/// larger than |log b|. |log a| = log max(a, 1/a).
inline int compare_logdist(const Dyadic& a, const Dyadic& b) {
  const Dyadic one(Rational(1));
  const Dyadic fa = a < one ? one / a : a;
  const Dyadic fb = b < one ? one / b : b;
  if (fa < fb) return -1;
  if (fb < fa) return 1;
  return 0;
}

/// v: N -> N_{>0} with values mant * 2^exp2 (exact big numbers when huge).
struct VRule {
  std::string name;
  std::string fibers;  // documentation of the fiber structure
  std::function<Dyadic(const BigInt&)> value;
};

inline int nu2(BigInt x) {
  int k = 0;
  while (x != 0 && (x & 1) == 0) {
    x >>= 1;
    ++k;
  }
  return k;
}

namespace detail {
inline Dyadic odd_branch(const BigInt& n) { return Dyadic(Rational(1 + nu2((n - 1) / 2 + 1))); }
}  // namespace detail

/// v(n) = lambda on even n; v(2i+1) = 1 + nu_2(i+1) on odd n. Every value
/// k >= 1 is taken on infinitely many odd n; lambda also on all even n.
inline VRule v_constant(long lambda) {
  return {"l" + std::to_string(lambda),
          "even n -> " + std::to_string(lambda) + "; odd n = 2i+1 -> 1 + nu2(i+1), each value k>=1 infinitely often",
          [lambda](const BigInt& n) {
            if ((n & 1) == 0) return Dyadic(Rational(lambda));
            return detail::odd_branch(n);
          }};
}

/// v(n) = 2^{n^2} on even n; odd n as in v_constant. Unbounded along the
/// even numbers; the odd branch makes v onto N_{>0} with infinite fibers.
inline VRule v_unbounded() {
  return {"unbounded", "even n -> 2^(n^2); odd n = 2i+1 -> 1 + nu2(i+1), each value k>=1 infinitely often",
          [](const BigInt& n) {
            if ((n & 1) == 0) return Dyadic::pow2(n * n);
            return detail::odd_branch(n);
          }};
}

inline VRule v_preset(const std::string& name) {
  if (name == "unbounded") return v_unbounded();
  if (name.size() > 1 && name[0] == 'l') return v_constant(std::stol(name.substr(1)));
  throw Error("unknown v preset: " + name);
}

/// Tower indices beyond this are not evaluated (projections may look one
/// index further).
constexpr long kTowerCap = 13;

inline BigInt pow2_big(long e) { return BigInt(1) << static_cast<unsigned>(e); }

/// 2^{2^n} (1 + eps v(n)^{-2}).
struct TowerPoint {
  long n = 0;
  bool eps = false;
  Dyadic value;
};

inline TowerPoint tower_point(long n, bool eps, const VRule* v) {
  Dyadic base = Dyadic::pow2(pow2_big(n));
  if (!eps) return {n, false, base};
  const Dyadic vn = v->value(BigInt(n));
  const Rational vq = vn.exact().value();
  return {n, true, base * Dyadic(Rational(1) + 1 / (vq * vq))};
}

/// The image of a tower point under i: 2^{2^n} -> itself,
/// 2^{2^n}(1 + v^{-2}) -> 2^{2^n}(1 + v^{-1}).
inline Dyadic embed_i(const TowerPoint& p, const VRule& v) {
  Dyadic base = Dyadic::pow2(pow2_big(p.n));
  if (!p.eps) return base;
  const Rational vq = v.value(BigInt(p.n)).exact().value();
  return base * Dyadic(Rational(1) + 1 / vq);
}

namespace detail {

inline TowerPoint nearest_tower(const Dyadic& x, bool eps, const VRule* v) {
  if (x.is_zero()) throw Error("projection of 0");
  const double l = std::max(1.0, x.log2());
  const long guess = static_cast<long>(std::floor(std::log2(l)));
  std::optional<TowerPoint> best;
  for (long n = std::max(0L, guess - 1); n <= guess + 2; ++n) {
    if (n > kTowerCap + 1) throw HorizonTooSmall("tower index " + std::to_string(n) + " beyond the cap");
    TowerPoint cand = tower_point(n, eps, v);
    if (!best) {
      best = cand;
      continue;
    }
    const int c = compare_logdist(cand.value / x, best->value / x);
    if (c < 0 || (c == 0 && best->value < cand.value)) best = cand;
  }
  return *best;
}

}  // namespace detail

/// u(x): the largest minimizer of |log(y/x)| over Y = {2^{2^n}}.
inline TowerPoint projection_u(const Dyadic& x) { return detail::nearest_tower(x, false, nullptr); }

/// u'(x): the same over X - Y = {2^{2^n}(1 + v(n)^{-2})}.
inline TowerPoint projection_u_prime(const Dyadic& x, const VRule& v) { return detail::nearest_tower(x, true, &v); }

/// Strictly increasing index sequence sigma(1), sigma(2), ... standing in for
/// an ultrafilter containing its range.
struct FilterSpec {
  std::string name;
  std::string description;
  std::function<Dyadic(long)> sigma;
  long default_horizon = 6;
};

inline FilterSpec filter_tower_even() {
  return {"tower_even", "sigma(j) = 2^{2^{2j}}: the tower points with even index",
          [](long j) { return Dyadic::pow2(pow2_big(2 * j)); }, 6};
}

inline FilterSpec filter_midpoints() {
  return {"midpoints", "sigma(j) = 2^{3*2^{j-1}}: geometric midpoints of consecutive tower points",
          [](long j) { return Dyadic::pow2(BigInt(3) * pow2_big(j - 1)); }, 6};
}

inline FilterSpec filter_factorial() {
  auto cache = std::make_shared<std::vector<BigInt>>(1, BigInt(1));
  return {"factorial", "sigma(j) = j!", [cache](long j) {
            while (static_cast<long>(cache->size()) <= j) cache->push_back(cache->back() * BigInt(cache->size()));
            return Dyadic(Rational((*cache)[static_cast<std::size_t>(j)]));
          },
          900};
}

inline FilterSpec filter_evens() {
  return {"evens", "sigma(j) = 2j", [](long j) { return Dyadic(Rational(2 * j)); }, 50};
}

inline FilterSpec filter_tower() {
  return {"tower", "sigma(j) = 2^{2^j}", [](long j) { return Dyadic::pow2(pow2_big(j)); }, 12};
}

enum class LimitKind { finite, zero, infinite, divergent };

inline const char* to_string(LimitKind k) {
  switch (k) {
    case LimitKind::finite: return "finite";
    case LimitKind::zero: return "zero";
    case LimitKind::infinite: return "infinite";
    case LimitKind::divergent: return "divergent";
  }
  return "?";
}

struct Limit {
  LimitKind kind = LimitKind::divergent;
  Dyadic value;              // last term (finite limits)
  std::vector<double> log2_tail;

  bool finite_nonzero() const { return kind == LimitKind::finite && !value.is_zero(); }
  bool degenerate() const { return kind == LimitKind::zero || kind == LimitKind::infinite; }
  std::string str() const {
    if (kind == LimitKind::finite) return value.str();
    return to_string(kind);
  }
};

/// Limit of a sequence of positive values, judged on the last half of the
/// terms: Cauchy within tol -> finite; at least doubling (halving) every step
/// -> infinite (zero); anything else is divergent.
inline Limit detect_limit(const std::vector<Dyadic>& terms, double tol) {
  if (terms.size() < 3) throw HorizonTooSmall("at least 3 terms are needed");
  const std::size_t w = std::max<std::size_t>(3, terms.size() / 2);
  const std::size_t start = terms.size() - w;
  Limit lim;
  for (std::size_t i = start; i < terms.size(); ++i) lim.log2_tail.push_back(terms[i].log2());
  const Dyadic two(Rational(2));
  bool up = true, down = true, bounded = true;
  for (std::size_t i = start + 1; i < terms.size(); ++i) {
    if (terms[i] < terms[i - 1] * two) up = false;
    if (terms[i - 1] < terms[i] * two) down = false;
  }
  for (std::size_t i = start; i < terms.size(); ++i)
    if (terms.back() * two < terms[i] || terms[i] * two < terms.back()) bounded = false;
  bool cauchy = true;
  for (std::size_t i = terms.size() - 3; i + 1 < terms.size(); ++i)
    if (Dyadic::relative_gap(terms[i], terms[i + 1]) > tol) cauchy = false;
  if (cauchy && bounded) {
    lim.kind = LimitKind::finite;
    lim.value = terms.back();
  } else if (up) {
    lim.kind = LimitKind::infinite;
  } else if (down) {
    lim.kind = LimitKind::zero;
  }
  return lim;
}

/// lim seq(sigma(j)) for j = 1..horizon.
inline Limit ultralimit_along(const std::function<Dyadic(const Dyadic&)>& seq, const FilterSpec& fs, long horizon,
                              double tol = 1e-9) {
  std::vector<Dyadic> terms;
  Dyadic prev;
  for (long j = 1; j <= horizon; ++j) {
    const Dyadic n = fs.sigma(j);
    if (j > 1 && !(prev < n)) throw Error("filter " + fs.name + " is not strictly increasing");
    prev = n;
    terms.push_back(seq(n));
  }
  return detect_limit(terms, tol);
}

struct MapEntry {
  Rational from, to;
};

struct TowerConeReport {
  std::string filter, v_rule;
  long horizon = 0;
  Limit ell, ell_prime;
  Limit lambda_tower;    // lim v(m), m the tower index of u(sigma(j))
  Limit lambda_ambient;  // lim v(sigma(j))
  int case_id = 0;       // 1, 2, 3; 0 when the filter does not decide
  std::string note;
  std::vector<Rational> cone_points;
  std::vector<MapEntry> induced_map;
  std::optional<Rational> best_lipschitz;
  bool lambda_relation_holds = false;  // case 3: ell' = (1 + lambda^{-2}) ell exactly
  bool embedding_isometric = false;    // d_omega(u, u') = |ell - ell'|
};

/// Case analysis of the cone of X = U_n {2^{2^n}, 2^{2^n}(1 + v(n)^{-2})}
/// along a filter.
inline TowerConeReport classify_case(const FilterSpec& fs, const VRule& v, long horizon = 0, double tol = 1e-9) {
  if (horizon == 0) horizon = fs.default_horizon;
  TowerConeReport rep;
  rep.filter = fs.name;
  rep.v_rule = v.name;
  rep.horizon = horizon;

  std::vector<Dyadic> ell, ellp, lam_t, lam_a, image, gap;
  Dyadic prev;
  for (long j = 1; j <= horizon; ++j) {
    const Dyadic n = fs.sigma(j);
    if (j > 1 && !(prev < n)) throw Error("filter " + fs.name + " is not strictly increasing");
    prev = n;
    if (n.log2() > std::ldexp(1.0, kTowerCap)) throw HorizonTooSmall("sigma(" + std::to_string(j) + ") beyond the tower cap");
    const TowerPoint u = projection_u(n);
    const TowerPoint up = projection_u_prime(n, v);
    ell.push_back(u.value / n);
    ellp.push_back(up.value / n);
    lam_t.push_back(v.value(BigInt(u.n)));
    const auto ne = n.exact();
    lam_a.push_back(ne ? v.value(numerator(*ne)) : Dyadic());
    image.push_back(embed_i(up, v) / n);
    // |u - u'| / n, computed from the exact difference when it expands
    const auto a = u.value.exact(1 << 15), b = up.value.exact(1 << 15), nn = n.exact(1 << 15);
    if (a && b && nn) gap.push_back(Dyadic(boost::multiprecision::abs(*a - *b) / *nn));
  }
  rep.ell = detect_limit(ell, tol);
  rep.ell_prime = detect_limit(ellp, tol);
  rep.lambda_tower = detect_limit(lam_t, tol);
  if (std::all_of(lam_a.begin(), lam_a.end(), [](const Dyadic& d) { return !d.is_zero(); }))
    rep.lambda_ambient = detect_limit(lam_a, tol);

  const auto& l = rep.ell;
  const auto& lp = rep.ell_prime;
  if (l.kind == LimitKind::divergent || lp.kind == LimitKind::divergent) {
    rep.note = std::string("filter does not decide: ") + (l.kind == LimitKind::divergent ? "ell" : "ell'") +
               " has no limit along the filter";
    return rep;
  }
  if (l.degenerate() && lp.degenerate()) {
    rep.case_id = 1;
    rep.cone_points = {0};
    rep.induced_map = {{0, 0}};
    rep.best_lipschitz = Rational(0);
    rep.embedding_isometric = true;
    return rep;
  }
  if (!l.finite_nonzero() || !lp.finite_nonzero()) {
    rep.note = "filter does not decide: exactly one of ell, ell' is degenerate";
    return rep;
  }
  const Rational lq = l.value.exact().value(), lpq = lp.value.exact().value();
  const Limit img = detect_limit(image, tol);
  if (Dyadic::relative_gap(l.value, lp.value) <= tol) {
    rep.case_id = 2;
    rep.cone_points = {0, lq};
    rep.induced_map = {{0, 0}, {lq, lq}};
  } else {
    rep.case_id = 3;
    rep.cone_points = {0, lq, lpq};
    if (img.kind != LimitKind::finite) {
      rep.note = "image of ell' has no limit";
      return rep;
    }
    rep.induced_map = {{0, 0}, {lq, lq}, {lpq, img.value.exact().value()}};
    if (rep.lambda_tower.kind == LimitKind::finite) {
      const Rational lam = rep.lambda_tower.value.exact().value();
      rep.lambda_relation_holds = lpq == (1 + 1 / (lam * lam)) * lq;
    }
  }
  Rational best = 0;
  for (std::size_t a = 0; a < rep.induced_map.size(); ++a)
    for (std::size_t b = a + 1; b < rep.induced_map.size(); ++b) {
      const auto& p = rep.induced_map[a];
      const auto& q = rep.induced_map[b];
      const Rational slope = boost::multiprecision::abs(p.to - q.to) / boost::multiprecision::abs(p.from - q.from);
      if (slope > best) best = slope;
    }
  rep.best_lipschitz = best;
  if (gap.size() >= 3) {
    const Limit g = detect_limit(gap, tol);
    const Rational expect = rep.case_id == 2 ? Rational(0) : Rational(boost::multiprecision::abs(lq - lpq));
    rep.embedding_isometric =
        (expect == 0 && (g.kind == LimitKind::zero || (g.kind == LimitKind::finite && g.value.is_zero()))) ||
        (g.kind == LimitKind::finite && Dyadic::relative_gap(g.value, Dyadic(expect)) <= tol) ||
        (expect == 0 && g.kind == LimitKind::finite && g.value.log2() < std::log2(tol));
  }
  return rep;
}

struct TowerScenario {
  FilterSpec filter;
  VRule v;
};

/// Named presets: case1 (midpoints), case2 (even tower points, unbounded v),
/// case3_l<k> (even tower points, v = k there), factorial.
inline TowerScenario scenario_preset(const std::string& name) {
  if (name == "case1") return {filter_midpoints(), v_constant(2)};
  if (name == "case2") return {filter_tower_even(), v_unbounded()};
  if (name.rfind("case3_l", 0) == 0) return {filter_tower_even(), v_constant(std::stol(name.substr(7)))};
  if (name == "factorial") return {filter_factorial(), v_constant(2)};
  throw Error("unknown filter preset: " + name);
}

}  // namespace conegeom
