#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "conegeom/cartan_split.hpp"
#include "conegeom/lie_core.hpp"

namespace conegeom {

/// The original algebra together with its class-(C) companion
/// g1 = r x| (h/w), where h/w acts on r through the semisimple parts only.
/// In g1 the basis is: echelon basis of r first, then the V lifts.
struct ReducedPair {
  LieAlgebra g;
  LieAlgebra g1;
  CartanData cartan;
  ActionSplit actions;

  std::size_t radical_dim() const { return cartan.r.dim(); }
  std::size_t quotient_dim() const { return cartan.v_lifts.size(); }
  Subspace radical_in_g1() const {
    std::vector<RatVec> vs;
    for (std::size_t i = 0; i < radical_dim(); ++i) vs.push_back(Subspace::unit(g1.dim(), i));
    return Subspace::span(g1.dim(), vs);
  }
  Subspace complement_in_g1() const {
    std::vector<RatVec> vs;
    for (std::size_t i = radical_dim(); i < g1.dim(); ++i) vs.push_back(Subspace::unit(g1.dim(), i));
    return Subspace::span(g1.dim(), vs);
  }
};

/// Coordinates of x in h with respect to the basis (w basis, v lifts).
inline RatVec split_h_coordinates(const CartanData& cd, const RatVec& x) {
  std::vector<RatVec> cols;
  for (const auto& b : cd.w.basis()) cols.push_back(cd.h.coordinates(b));
  for (const auto& b : cd.v_lifts) cols.push_back(cd.h.coordinates(b));
  const auto inv = inverse(RatMatrix::from_columns(cols, cd.h.dim()));
  if (!inv) throw Error("w and v lifts do not form a basis of h");
  return *inv * cd.h.coordinates(x);
}

inline ReducedPair build_class_C(const LieAlgebra& g, const CartanData& cd, const ActionSplit& as) {
  const std::size_t d = cd.r.dim(), m = cd.v_lifts.size(), wd = cd.w.dim();
  if (d + m != g.dim()) throw Error("dim r + dim h/w does not match dim g");
  const std::size_t n1 = d + m;
  StructureTensor c(n1);
  std::vector<std::string> labels;
  const auto rb = cd.r.basis();
  for (const auto& b : rb) labels.push_back(g.describe(b));
  for (const auto& b : cd.v_lifts) labels.push_back(g.describe(b));

  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) {
      const auto coords = cd.r.coordinates(g.bracket(rb[a], rb[b]));
      for (std::size_t k = 0; k < d; ++k) c(a, b, k) = coords[k];
    }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t k = 0; k < d; ++k) {
        c(d + i, a, k) = as.semisimple[i](k, a);
        c(a, d + i, k) = -as.semisimple[i](k, a);
      }
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const auto coords = split_h_coordinates(cd, g.bracket(cd.v_lifts[i], cd.v_lifts[j]));
      for (std::size_t k = 0; k < m; ++k) c(d + i, d + j, d + k) = coords[wd + k];
    }

  ReducedPair rp{g, LieAlgebra::validate(std::move(c), std::move(labels)), cd, as};
  if (!(exponential_radical(rp.g1) == rp.radical_in_g1()))
    throw Error("radical of the reconstructed algebra differs from r");
  return rp;
}

/// Runs the whole chain: Cartan subalgebra, action split, reconstruction.
inline ReducedPair reduce_to_class_C(const LieAlgebra& g, std::uint64_t seed = 0) {
  const auto cd = cartan_subalgebra(g, seed);
  const auto as = build_actions(cd, g);
  return build_class_C(g, cd, as);
}

struct ClassCVerdict {
  bool semidirect = false;            // g1 = r x| h as vector spaces, r ideal, h subalgebra
  bool diagonalizable = false;        // ad(xi)|r semisimple with real spectrum, xi in h
  bool commutator_centralizes = false;// [h,h] acts trivially on r
  std::string failure;

  bool pass() const { return semidirect && diagonalizable && commutator_centralizes; }
};

inline ClassCVerdict class_C_check(const LieAlgebra& g1, const Subspace& r, const Subspace& h) {
  ClassCVerdict v;
  v.semidirect = g1.is_ideal(r) && g1.is_subalgebra(h) && r.intersect(h).is_zero() && r.dim() + h.dim() == g1.dim();
  if (!v.semidirect) {
    v.failure = "(1) not a semidirect sum r x| h";
    return v;
  }
  v.diagonalizable = true;
  for (const auto& xi : h.basis()) {
    const auto a = restricted_ad(g1, xi, r);
    const Poly p = characteristic_polynomial(a).squarefree_part();
    if (!evaluate(p, a).is_zero() || count_distinct_real_roots(p) != p.degree()) {
      v.diagonalizable = false;
      v.failure = "(2) ad(" + g1.describe(xi) + ") on r is not real-diagonalizable";
      return v;
    }
  }
  v.commutator_centralizes = true;
  for (const auto& z : g1.bracket_span(h, h).basis())
    if (!restricted_ad(g1, z, r).is_zero()) {
      v.commutator_centralizes = false;
      v.failure = "(3) [h,h] does not centralize r";
      return v;
    }
  return v;
}

/// True when b is a relabeling of a: c_b(p i, p j, p k) = c_a(i, j, k) for some
/// permutation p of the basis.
inline bool same_up_to_permutation(const LieAlgebra& a, const LieAlgebra& b) {
  const std::size_t n = a.dim();
  if (b.dim() != n) return false;
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = 0; j < n && ok; ++j)
        for (std::size_t k = 0; k < n && ok; ++k)
          if (a.constants()(i, j, k) != b.constants()(p[i], p[j], p[k])) ok = false;
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

}  // namespace conegeom
