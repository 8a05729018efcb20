#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "conegeom/errors.hpp"
#include "conegeom/lie_algebra.hpp"
#include "conegeom/polynomial.hpp"
#include "conegeom/subspace.hpp"

namespace conegeom {

/// g^1 = g, g^{i+1} = [g, g^i]. Stops after the first term that is zero or
/// equal to its predecessor, so the last entry is the stable term g^infinity.
inline std::vector<Subspace> lower_central_series(const LieAlgebra& g) {
  const auto whole = Subspace::whole(g.dim());
  std::vector<Subspace> series{whole};
  for (std::size_t step = 0; step <= g.dim(); ++step) {
    Subspace next = g.bracket_span(whole, series.back());
    const bool stop = next.is_zero() || next == series.back();
    series.push_back(std::move(next));
    if (stop) break;
  }
  return series;
}

inline std::vector<Subspace> derived_series(const LieAlgebra& g) {
  std::vector<Subspace> series{Subspace::whole(g.dim())};
  for (std::size_t step = 0; step <= g.dim(); ++step) {
    Subspace next = g.bracket_span(series.back(), series.back());
    const bool stop = next.is_zero() || next == series.back();
    series.push_back(std::move(next));
    if (stop) break;
  }
  return series;
}

inline bool is_solvable(const LieAlgebra& g) { return derived_series(g).back().is_zero(); }
inline bool is_nilpotent(const LieAlgebra& g) { return lower_central_series(g).back().is_zero(); }

/// Nilpotency class: number of nonzero terms of the lower central series.
inline std::size_t nilpotency_class(const LieAlgebra& g) {
  const auto s = lower_central_series(g);
  if (!s.back().is_zero()) throw NotNilpotent();
  return s.size() - 1;
}

/// The stable term of the lower central series: the smallest ideal with
/// nilpotent quotient.
inline Subspace exponential_radical(const LieAlgebra& g) {
  if (!is_solvable(g)) throw NotSolvable();
  return lower_central_series(g).back();
}

struct QuotientResult {
  LieAlgebra algebra;
  RatMatrix projection;        // (dim g - dim ideal) x dim g
  std::vector<RatVec> lifts;   // standard basis vectors spanning the complement
  Subspace ideal;

  RatVec project(const RatVec& v) const { return projection * v; }
  RatVec lift(const RatVec& coords) const {
    RatVec out(ideal.ambient_dim(), Rational(0));
    for (std::size_t a = 0; a < lifts.size(); ++a)
      for (std::size_t j = 0; j < out.size(); ++j) out[j] += coords[a] * lifts[a][j];
    return out;
  }
};

/// g / ideal on the complement spanned by the non-pivot standard basis vectors.
inline QuotientResult quotient(const LieAlgebra& g, const Subspace& ideal) {
  if (!g.is_ideal(ideal)) throw NotAnIdeal();
  const std::size_t n = g.dim();
  std::vector<bool> pivot(n, false);
  for (auto p : ideal.pivots()) pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < n; ++j)
    if (!pivot[j]) free.push_back(j);

  const std::size_t m = free.size();
  RatMatrix proj(m, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto r = ideal.reduce(Subspace::unit(n, j));
    for (std::size_t a = 0; a < m; ++a) proj(a, j) = r[free[a]];
  }

  StructureTensor c(m);
  std::vector<std::string> labels;
  std::vector<RatVec> lifts;
  for (std::size_t a = 0; a < m; ++a) {
    labels.push_back(g.labels()[free[a]]);
    lifts.push_back(Subspace::unit(n, free[a]));
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      const auto coords = proj * g.bracket(lifts[a], lifts[b]);
      for (std::size_t k = 0; k < m; ++k) c(a, b, k) = coords[k];
    }
  QuotientResult q{LieAlgebra::validate(std::move(c), std::move(labels)), std::move(proj), std::move(lifts), ideal};

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto ei = Subspace::unit(n, i), ej = Subspace::unit(n, j);
      if (q.project(g.bracket(ei, ej)) != q.algebra.bracket(q.project(ei), q.project(ej)))
        throw Error("quotient projection is not a homomorphism");
    }
  return q;
}

/// The associated graded algebra of a nilpotent algebra, realized on the basis
/// of pivot-column lifts of the layers g^i / g^{i+1}.
struct GradedLieAlgebra {
  std::vector<Subspace> layers;  // span of the chosen lifts of each layer
  std::vector<RatVec> lifts;     // adapted basis of the source, layer by layer
  std::vector<int> weights;      // layer index (from 1) of each adapted basis vector
  LieAlgebra algebra;            // graded bracket in the adapted basis
  RatMatrix to_adapted;          // source coordinates -> adapted coordinates

  RatVec adapted_coordinates(const RatVec& v) const { return to_adapted * v; }
};

inline GradedLieAlgebra associated_graded(const LieAlgebra& g) {
  const auto series = lower_central_series(g);
  if (!series.back().is_zero()) throw NotNilpotent();
  const std::size_t n = g.dim();

  std::vector<Subspace> layers;
  std::vector<RatVec> lifts;
  std::vector<int> weights;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const auto layer = series[i].pivot_complement(series[i + 1]);
    layers.push_back(Subspace::span(n, layer));
    for (const auto& v : layer) {
      lifts.push_back(v);
      weights.push_back(static_cast<int>(i + 1));
    }
  }
  const auto to_adapted = inverse(RatMatrix::from_columns(lifts, n));
  if (!to_adapted) throw Error("graded lifts are not a basis");

  StructureTensor c(n);
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < n; ++a) labels.push_back(g.describe(lifts[a]));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      const auto coords = *to_adapted * g.bracket(lifts[a], lifts[b]);
      const int target = weights[a] + weights[b];
      for (std::size_t k = 0; k < n; ++k)
        if (weights[k] == target) c(a, b, k) = coords[k];
    }
  return GradedLieAlgebra{std::move(layers), std::move(lifts), std::move(weights),
                          LieAlgebra::validate(std::move(c), std::move(labels)), *to_adapted};
}

/// Checks that `phi` (columns = images of the basis of `a` in `b`) is a Lie
/// algebra isomorphism a -> b. Deciding gradability would need a search for
/// such a map; only verification of a supplied candidate is offered.
inline bool verify_isomorphism(const LieAlgebra& a, const LieAlgebra& b, const RatMatrix& phi) {
  const std::size_t n = a.dim();
  if (b.dim() != n || phi.rows() != n || phi.cols() != n || rank(phi) != n) return false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto ei = Subspace::unit(n, i), ej = Subspace::unit(n, j);
      if (phi * a.bracket(ei, ej) != b.bracket(phi * ei, phi * ej)) return false;
    }
  return true;
}

struct TriangulabilityResult {
  /// 0 = I_0 < I_1 < ... with dim I_k = k, each an ideal of g.
  std::vector<Subspace> flag;
  /// False when the spectrum is real but some step needs an irrational
  /// eigenvector; the flag then stops at the last rational ideal.
  bool flag_complete = true;
  std::string note;
};

namespace detail {

// Depth-first search for a common eigenvector of ad(e_0), ..., ad(e_{m-1})
// with rational eigenvalues, pruning on empty intersections.
inline bool common_eigenspace(const std::vector<RatMatrix>& ads, std::size_t idx, const Subspace& current,
                              Subspace& found) {
  if (current.is_zero()) return false;
  if (idx == ads.size()) {
    found = current;
    return true;
  }
  const std::size_t n = current.ambient_dim();
  for (const auto& lambda : rational_roots(characteristic_polynomial(ads[idx]))) {
    RatMatrix shifted = ads[idx];
    for (std::size_t d = 0; d < n; ++d) shifted(d, d) -= lambda;
    const auto eig = Subspace::span(n, nullspace(shifted));
    if (common_eigenspace(ads, idx + 1, current.intersect(eig), found)) return true;
  }
  return false;
}

}  // namespace detail

/// Builds a full flag of ideals with one-dimensional steps by repeatedly
/// taking a common real eigenvector of the adjoint action on the quotient.
inline TriangulabilityResult triangulability_check(const LieAlgebra& g) {
  if (!is_solvable(g)) throw NotTriangulable(0, "algebra is not solvable");
  const std::size_t n = g.dim();
  TriangulabilityResult result;
  result.flag.push_back(Subspace(n));
  while (result.flag.back().dim() < n) {
    const Subspace& current = result.flag.back();
    const auto q = quotient(g, current);
    const std::size_t m = q.algebra.dim();
    std::vector<RatMatrix> ads;
    for (std::size_t a = 0; a < m; ++a) ads.push_back(q.algebra.ad(Subspace::unit(m, a)));

    Subspace eig;
    if (!detail::common_eigenspace(ads, 0, Subspace::whole(m), eig)) {
      // Solvable with real weights iff every ad(e_a) has real spectrum.
      for (std::size_t a = 0; a < m; ++a)
        if (!has_only_real_roots(characteristic_polynomial(ads[a])))
          throw NotTriangulable(current.dim(), "ad(" + q.algebra.labels()[a] + ") has non-real eigenvalues");
      result.flag_complete = false;
      result.note = "real spectrum, but the next flag step needs an irrational eigenvector";
      return result;
    }
    const auto v = q.lift(eig.basis_vector(eig.dim() - 1));
    auto vs = current.basis();
    vs.push_back(v);
    result.flag.push_back(Subspace::span(n, vs));
  }
  return result;
}

}  // namespace conegeom
