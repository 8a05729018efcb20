#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "conegeom/errors.hpp"
#include "conegeom/lie_algebra.hpp"
#include "conegeom/matrix.hpp"

namespace conegeom {

/// 64-bit mantissa with a binary exponent range of +-2^28, so that
/// quantities like exp(2^20) stay finite.
using Real = boost::multiprecision::number<
    boost::multiprecision::backends::cpp_bin_float<64, boost::multiprecision::backends::digit_base_2, void,
                                                   std::int32_t, -(1 << 28), (1 << 28)>,
    boost::multiprecision::et_off>;

using RealVec = Vec<Real>;
using RealMatrix = Matrix<Real>;

namespace num {

inline double abs(double x) { return std::fabs(x); }
inline Real abs(const Real& x) { return boost::multiprecision::abs(x); }
inline double exp(double x) { return std::exp(x); }
inline Real exp(const Real& x) { return boost::multiprecision::exp(x); }
inline double log(double x) { return std::log(x); }
inline Real log(const Real& x) { return boost::multiprecision::log(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline Real sqrt(const Real& x) { return boost::multiprecision::sqrt(x); }
inline double pow(double x, double y) { return std::pow(x, y); }
inline Real pow(const Real& x, const Real& y) { return boost::multiprecision::pow(x, y); }
inline bool isfinite(double x) { return std::isfinite(x); }
inline bool isfinite(const Real& x) { return boost::multiprecision::isfinite(x); }
inline Rational abs(const Rational& x) { return boost::multiprecision::abs(x); }

template <typename T>
T to(const Rational& q) {
  if constexpr (std::is_same_v<T, Rational>) return q;
  else return q.template convert_to<T>();
}

}  // namespace num

template <typename T>
T max_abs(const Vec<T>& v) {
  T m = 0;
  for (const auto& x : v) m = std::max<T>(m, num::abs(x));
  return m;
}

template <typename T>
T max_abs(const Matrix<T>& a) {
  T m = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max<T>(m, num::abs(a(i, j)));
  return m;
}

/// exp(a) by scaling and squaring with a degree-18 Taylor polynomial.
template <typename T>
Matrix<T> expm(const Matrix<T>& a) {
  const std::size_t n = a.rows();
  T norm = 0;
  for (std::size_t i = 0; i < n; ++i) {
    T s = 0;
    for (std::size_t j = 0; j < n; ++j) s += num::abs(a(i, j));
    norm = std::max<T>(norm, s);
  }
  int squarings = 0;
  T scale = 1;
  while (norm * scale > T(0.5)) {
    scale /= 2;
    ++squarings;
  }
  const Matrix<T> x = scale * a;
  Matrix<T> acc = Matrix<T>::identity(n), term = Matrix<T>::identity(n);
  for (int k = 1; k <= 18; ++k) {
    term = (T(1) / T(k)) * (term * x);
    acc = acc + term;
  }
  for (int s = 0; s < squarings; ++s) acc = acc * acc;
  return acc;
}

/// exp of a nilpotent matrix as a finite series.
template <typename T>
Matrix<T> expm_nilpotent(const Matrix<T>& a) {
  const std::size_t n = a.rows();
  Matrix<T> acc = Matrix<T>::identity(n), term = Matrix<T>::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    term = (T(1) / T(static_cast<int>(k))) * (term * a);
    acc = acc + term;
  }
  return acc;
}

/// Structure constants as a sparse table over T.
template <typename T>
class BracketTable {
 public:
  BracketTable() = default;
  explicit BracketTable(const LieAlgebra& g) : n_(g.dim()) {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i + 1; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          if (g.constants()(i, j, k) != 0) entries_.push_back({i, j, k, num::to<T>(g.constants()(i, j, k))});
  }

  std::size_t dim() const { return n_; }

  Vec<T> operator()(const Vec<T>& x, const Vec<T>& y) const {
    Vec<T> out(n_, T(0));
    for (const auto& e : entries_) {
      const T coef = x[e.i] * y[e.j] - x[e.j] * y[e.i];
      if (coef != 0) out[e.k] += coef * e.c;
    }
    return out;
  }

 private:
  struct Entry {
    std::size_t i, j, k;
    T c;
  };
  std::size_t n_ = 0;
  std::vector<Entry> entries_;
};

namespace detail {

// Compositions of n into exactly parts positive integers.
inline void compositions(int n, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (parts == 0) {
    if (n == 0) out.push_back(cur);
    return;
  }
  for (int k = 1; k <= n - parts + 1; ++k) {
    cur.push_back(k);
    compositions(n - k, parts - 1, cur, out);
    cur.pop_back();
  }
}

// B_{2p} / (2p)! for p = 1..5.
inline Rational bernoulli_ratio(int p) {
  static const Rational b[] = {Rational(1, 6), Rational(-1, 30), Rational(1, 42), Rational(-1, 30),
                               Rational(5, 66)};
  if (p < 1 || p > 5) throw Error("BCH depth beyond 11 is not supported");
  Rational f = 1;
  for (int k = 2; k <= 2 * p; ++k) f *= k;
  return b[p - 1] / f;
}

}  // namespace detail

/// Baker-Campbell-Hausdorff product log(exp x exp y) in a nilpotent algebra of
/// class `depth`, via the Varadarajan recursion
///   (n+1) z_{n+1} = 1/2 [x-y, z_n]
///                 + sum_{p>=1, 2p<=n} K_{2p} sum_{k_1+..+k_2p=n} [z_k1,[...,[z_k2p, x+y]]].
template <typename T>
Vec<T> bch(const BracketTable<T>& br, const Vec<T>& x, const Vec<T>& y, std::size_t depth) {
  const std::size_t n = br.dim();
  std::vector<Vec<T>> z(depth + 1);
  Vec<T> sum(n), diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] = x[i] + y[i];
    diff[i] = x[i] - y[i];
  }
  if (depth == 0) return sum;
  z[1] = sum;
  for (std::size_t m = 1; m < depth; ++m) {
    Vec<T> next = br(diff, z[m]);
    for (auto& c : next) c /= 2;
    for (int p = 1; 2 * p <= static_cast<int>(m); ++p) {
      std::vector<std::vector<int>> comps;
      std::vector<int> cur;
      detail::compositions(static_cast<int>(m), 2 * p, cur, comps);
      const T kp = num::to<T>(detail::bernoulli_ratio(p));
      for (const auto& ks : comps) {
        Vec<T> acc = sum;
        for (auto it = ks.rbegin(); it != ks.rend(); ++it) acc = br(z[*it], acc);
        for (std::size_t i = 0; i < n; ++i) next[i] += kp * acc[i];
      }
    }
    for (auto& c : next) c /= T(static_cast<int>(m + 1));
    z[m + 1] = std::move(next);
  }
  Vec<T> out(n, T(0));
  for (std::size_t m = 1; m <= depth; ++m)
    for (std::size_t i = 0; i < n; ++i) out[i] += z[m][i];
  return out;
}

template <typename T>
Vec<T> negate(Vec<T> v) {
  for (auto& x : v) x = -x;
  return v;
}

}  // namespace conegeom
