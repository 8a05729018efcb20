#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "conegeom/errors.hpp"
#include "conegeom/lie_core.hpp"
#include "conegeom/polynomial.hpp"

namespace conegeom {

struct CartanData {
  Subspace h;                  // Cartan subalgebra
  Subspace w;                  // h intersect r
  Subspace v;                  // pivot-column complement of w in h
  Subspace r;                  // exponential radical
  std::vector<RatVec> v_lifts; // echelon basis of v
  RatVec regular_element;
};

namespace detail {

// Matrix of v -> v mod s (kills the pivot columns of s).
inline RatMatrix reduction_matrix(const Subspace& s) {
  const std::size_t n = s.ambient_dim();
  RatMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = s.reduce(Subspace::unit(n, j));
    for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
  }
  return m;
}

inline std::vector<RatVec> shell(std::size_t n, int radius, std::uint64_t seed) {
  std::vector<std::vector<int>> pts;
  std::vector<int> cur(n, -radius);
  for (;;) {
    int mx = 0;
    for (int c : cur) mx = std::max(mx, std::abs(c));
    if (mx == radius) pts.push_back(cur);
    std::size_t i = 0;
    while (i < n && cur[i] == radius) cur[i++] = -radius;
    if (i == n) break;
    ++cur[i];
  }
  std::mt19937_64 rng(seed);
  std::shuffle(pts.begin(), pts.end(), rng);
  std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    auto l1 = [](const auto& v) { return std::accumulate(v.begin(), v.end(), 0, [](int s, int x) { return s + std::abs(x); }); };
    return l1(a) < l1(b);
  });
  std::vector<RatVec> out;
  for (const auto& p : pts) {
    RatVec v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = p[i];
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

/// Normalizer {y : [y, s] inside s}.
inline Subspace normalizer(const LieAlgebra& g, const Subspace& s) {
  const std::size_t n = g.dim();
  const RatMatrix red = detail::reduction_matrix(s);
  const auto basis = s.basis();
  RatMatrix stacked(n * std::max<std::size_t>(basis.size(), 1), n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const RatMatrix block = red * g.ad(basis[i]);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) stacked(i * n + a, b) = block(a, b);
  }
  return Subspace::span(n, nullspace(stacked));
}

/// Fitting null component ker ad(x)^n.
inline Subspace fitting_null_component(const LieAlgebra& g, const RatVec& x) {
  return Subspace::span(g.dim(), nullspace(matrix_power(g.ad(x), g.dim())));
}

/// Cartan subalgebra as the Fitting null component of a regular element,
/// found by enumerating small integer vectors shell by shell (max-norm 1, 2,
/// 3), lower l1-norm first, seeded shuffle among ties. The minimum possible
/// nullity is dim g - dim r, which ends the search early.
inline CartanData cartan_subalgebra(const LieAlgebra& g, std::uint64_t seed = 0) {
  triangulability_check(g);
  const std::size_t n = g.dim();
  const Subspace r = exponential_radical(g);
  const std::size_t lower_bound = n - r.dim();

  for (int radius = 1; radius <= 3; ++radius) {
    std::size_t best = n + 1;
    RatVec best_x;
    for (const auto& x : detail::shell(n, radius, seed)) {
      const std::size_t nullity = n - rank(matrix_power(g.ad(x), n));
      if (nullity < best) {
        best = nullity;
        best_x = x;
      }
      if (best == lower_bound) break;
    }
    const Subspace h = fitting_null_component(g, best_x);
    if (!is_nilpotent(g.restrict_to(h)) || !(normalizer(g, h) == h)) continue;
    CartanData cd;
    cd.h = h;
    cd.r = r;
    cd.w = h.intersect(r);
    cd.v_lifts = h.pivot_complement(cd.w);
    cd.v = Subspace::span(n, cd.v_lifts);
    cd.regular_element = best_x;
    return cd;
  }
  throw RegularElementNotFound();
}

struct JordanSplit {
  RatMatrix semisimple;
  RatMatrix nilpotent;
};

/// Additive Jordan decomposition m = S + N over Q. S is obtained by Newton's
/// iteration S <- S - p(S) p'(S)^{-1} on the squarefree part p of the
/// characteristic polynomial, which converges in finitely many exact steps.
inline JordanSplit jordan_split(const RatMatrix& m) {
  const std::size_t n = m.rows();
  const Poly p = characteristic_polynomial(m).squarefree_part();
  if (count_distinct_real_roots(p) != p.degree()) throw NonRealSpectrum();
  const Poly dp = p.derivative();
  RatMatrix s = m;
  for (std::size_t iter = 0; iter < 2 * n + 4; ++iter) {
    const RatMatrix ps = evaluate(p, s);
    if (ps.is_zero()) break;
    const auto inv = inverse(evaluate(dp, s));
    if (!inv) throw Error("Jordan split: p'(S) singular");
    s = s - ps * *inv;
  }
  RatMatrix nil = m - s;
  if (!evaluate(p, s).is_zero() || !matrix_power(nil, n).is_zero() || !(s * nil == nil * s))
    throw Error("Jordan split did not converge");
  return {std::move(s), std::move(nil)};
}

struct WeightBlock {
  std::vector<RatVec> basis;         // in radical coordinates
  std::vector<Rational> eigenvalues; // one per V generator
};

/// Adjoint action of V on the radical, split into semisimple and nilpotent
/// parts generator by generator. All matrices are in the echelon basis of r.
struct ActionSplit {
  Subspace r;
  std::vector<RatVec> v_lifts;
  std::vector<RatMatrix> alpha, semisimple, nilpotent;
  std::vector<WeightBlock> weights;
  bool weights_exact = false;
  RatMatrix eigenbasis, eigenbasis_inv;  // columns = concatenated block bases

  std::size_t radical_dim() const { return r.dim(); }
  std::size_t generator_count() const { return v_lifts.size(); }

  // sum_i t_i M_i
  static RatMatrix combine(const std::vector<RatMatrix>& ms, const RatVec& t, std::size_t d) {
    RatMatrix acc(d, d);
    for (std::size_t i = 0; i < ms.size(); ++i)
      if (t[i] != 0) acc = acc + t[i] * ms[i];
    return acc;
  }
  RatMatrix alpha_of(const RatVec& t) const { return combine(alpha, t, radical_dim()); }
  RatMatrix semisimple_of(const RatVec& t) const { return combine(semisimple, t, radical_dim()); }
  RatMatrix nilpotent_of(const RatVec& t) const { return combine(nilpotent, t, radical_dim()); }
};

/// ad(x) restricted to the invariant subspace r, in r's echelon basis.
inline RatMatrix restricted_ad(const LieAlgebra& g, const RatVec& x, const Subspace& r) {
  const std::size_t d = r.dim();
  RatMatrix m(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto img = g.bracket(x, r.basis_vector(j));
    if (!r.contains(img)) throw Error("subspace is not ad-invariant");
    const auto c = r.coordinates(img);
    for (std::size_t i = 0; i < d; ++i) m(i, j) = c[i];
  }
  return m;
}

namespace detail {

inline void common_blocks(const std::vector<RatMatrix>& ss, std::size_t idx, const Subspace& current,
                          std::vector<Rational>& eig, std::vector<WeightBlock>& out) {
  if (current.is_zero()) return;
  if (idx == ss.size()) {
    out.push_back({current.basis(), eig});
    return;
  }
  const std::size_t d = current.ambient_dim();
  for (const auto& lambda : rational_roots(characteristic_polynomial(ss[idx]))) {
    RatMatrix shifted = ss[idx];
    for (std::size_t k = 0; k < d; ++k) shifted(k, k) -= lambda;
    eig.push_back(lambda);
    common_blocks(ss, idx + 1, current.intersect(Subspace::span(d, nullspace(shifted))), eig, out);
    eig.pop_back();
  }
}

}  // namespace detail

inline ActionSplit build_actions(const CartanData& cd, const LieAlgebra& g) {
  ActionSplit as;
  as.r = cd.r;
  as.v_lifts = cd.v_lifts;
  const std::size_t d = cd.r.dim();
  for (const auto& xi : cd.v_lifts) {
    auto a = restricted_ad(g, xi, cd.r);
    auto js = jordan_split(a);
    as.alpha.push_back(std::move(a));
    as.semisimple.push_back(std::move(js.semisimple));
    as.nilpotent.push_back(std::move(js.nilpotent));
  }
  // The semisimple part of the action must vanish on W.
  for (const auto& xi : cd.w.basis())
    if (!jordan_split(restricted_ad(g, xi, cd.r)).semisimple.is_zero())
      throw Error("semisimple part of the action is nonzero on W");
  for (std::size_t i = 0; i < as.semisimple.size(); ++i)
    for (std::size_t j = 0; j < as.semisimple.size(); ++j) {
      if (!(as.semisimple[i] * as.semisimple[j] == as.semisimple[j] * as.semisimple[i]) ||
          !(as.semisimple[i] * as.nilpotent[j] == as.nilpotent[j] * as.semisimple[i]))
        throw Error("semisimple parts do not commute with the action");
    }

  if (d == 0) {
    as.weights_exact = true;
    return as;
  }
  std::vector<Rational> eig;
  detail::common_blocks(as.semisimple, 0, Subspace::whole(d), eig, as.weights);
  std::size_t covered = 0;
  for (const auto& b : as.weights) covered += b.basis.size();
  as.weights_exact = covered == d;
  if (as.weights_exact) {
    std::vector<RatVec> cols;
    for (const auto& b : as.weights) cols.insert(cols.end(), b.basis.begin(), b.basis.end());
    as.eigenbasis = RatMatrix::from_columns(cols, d);
    as.eigenbasis_inv = *inverse(as.eigenbasis);
  }
  return as;
}

struct PolyBoundReport {
  int degree = 0;        // k = dim r - 1
  double c_all = 0;      // smallest C over the whole grid
  double c_lower = 0;    // smallest C over the lower half (by |h|)
  double c_upper = 0;    // smallest C over the upper half
  std::size_t samples = 0;
};

/// exp(M) for a nilpotent matrix, as a finite series in double precision.
inline Matrix<double> exp_nilpotent(const Matrix<double>& m) {
  const std::size_t d = m.rows();
  Matrix<double> acc = Matrix<double>::identity(d), term = Matrix<double>::identity(d);
  for (std::size_t k = 1; k <= d; ++k) {
    term = (1.0 / static_cast<double>(k)) * (term * m);
    acc = acc + term;
  }
  return acc;
}

/// Checks max|u(exp(t xi))_{ij}| <= C (1+|h|)^k with k = dim r - 1 along
/// each V generator and each grid parameter t. C is fitted on the lower half
/// of the grid and must keep holding, within 10%, on the whole grid;
/// `length` maps V coordinates to |h|.
inline PolyBoundReport unipotent_poly_bound(const ActionSplit& as, const std::vector<double>& grid,
                                            const std::function<double(const std::vector<double>&)>& length) {
  PolyBoundReport rep;
  const std::size_t d = as.radical_dim(), m = as.generator_count();
  rep.degree = d > 0 ? static_cast<int>(d) - 1 : 0;
  struct Sample {
    double len, ratio;
  };
  std::vector<Sample> samples;
  for (std::size_t dir = 0; dir < m; ++dir) {
    const Matrix<double> n = as.nilpotent[dir].cast<double>();
    for (double t : grid) {
      std::vector<double> coords(m, 0.0);
      coords[dir] = t;
      const double len = length(coords);
      const auto u = exp_nilpotent(t * n);
      double mx = 0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) mx = std::max(mx, std::abs(u(i, j)));
      samples.push_back({len, mx / std::pow(1.0 + len, rep.degree)});
    }
  }
  if (samples.empty()) return rep;
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.len < b.len; });
  const std::size_t half = samples.size() / 2;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    rep.c_all = std::max(rep.c_all, samples[i].ratio);
    (i < half ? rep.c_lower : rep.c_upper) = std::max(i < half ? rep.c_lower : rep.c_upper, samples[i].ratio);
  }
  rep.samples = samples.size();
  for (const auto& s : samples)
    if (s.ratio > 1.1 * rep.c_lower) throw BoundViolated(s.len);
  return rep;
}

}  // namespace conegeom
