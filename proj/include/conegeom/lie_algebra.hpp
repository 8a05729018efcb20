#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "conegeom/errors.hpp"
#include "conegeom/matrix.hpp"
#include "conegeom/subspace.hpp"

namespace conegeom {

/// Raw structure-constant tensor, c[i][j][k] = coefficient of e_k in [e_i, e_j].
class StructureTensor {
 public:
  StructureTensor() = default;
  explicit StructureTensor(std::size_t n) : n_(n), c_(n * n * n, Rational(0)) {}

  std::size_t dim() const { return n_; }
  Rational& operator()(std::size_t i, std::size_t j, std::size_t k) { return c_[(i * n_ + j) * n_ + k]; }
  const Rational& operator()(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * n_ + j) * n_ + k]; }

  // Sets [e_i, e_j] = value * e_k and the antisymmetric partner.
  void set_bracket(std::size_t i, std::size_t j, std::size_t k, const Rational& value) {
    (*this)(i, j, k) = value;
    (*this)(j, i, k) = -value;
  }

  friend bool operator==(const StructureTensor&, const StructureTensor&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> c_;
};

/// A finite-dimensional real Lie algebra given by exact rational structure
/// constants. Instances are only obtained through `validate`, so antisymmetry
/// and the Jacobi identity always hold.
class LieAlgebra {
 public:
  static LieAlgebra validate(StructureTensor c, std::vector<std::string> labels = {}) {
    const std::size_t n = c.dim();
    if (labels.empty())
      for (std::size_t i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i));
    if (labels.size() != n) throw Error("label count does not match dimension");

    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (c(i, j, k) != -c(j, i, k)) throw AntisymmetryViolation(i, j, k);

    LieAlgebra g(std::move(c), std::move(labels));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          const auto ei = Subspace::unit(n, i), ej = Subspace::unit(n, j), ek = Subspace::unit(n, k);
          auto s = g.bracket(g.bracket(ei, ej), ek);
          const auto t = g.bracket(g.bracket(ej, ek), ei);
          const auto u = g.bracket(g.bracket(ek, ei), ej);
          for (std::size_t m = 0; m < n; ++m)
            if (s[m] + t[m] + u[m] != 0) throw JacobiViolation(i, j, k);
        }
    return g;
  }

  std::size_t dim() const { return c_.dim(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const StructureTensor& constants() const { return c_; }

  RatVec bracket(const RatVec& x, const RatVec& y) const {
    const std::size_t n = dim();
    RatVec out(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == 0) continue;
        const Rational xy = x[i] * y[j];
        for (std::size_t k = 0; k < n; ++k)
          if (c_(i, j, k) != 0) out[k] += xy * c_(i, j, k);
      }
    }
    return out;
  }

  /// Matrix of ad(x) in the standard basis: column j holds [x, e_j].
  RatMatrix ad(const RatVec& x) const {
    const std::size_t n = dim();
    RatMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      const auto col = bracket(x, Subspace::unit(n, j));
      for (std::size_t k = 0; k < n; ++k) m(k, j) = col[k];
    }
    return m;
  }

  bool is_abelian() const {
    const std::size_t n = dim();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (c_(i, j, k) != 0) return false;
    return true;
  }

  /// Span of all [u, v] with u in a, v in b.
  Subspace bracket_span(const Subspace& a, const Subspace& b) const {
    std::vector<RatVec> vs;
    for (const auto& u : a.basis())
      for (const auto& v : b.basis()) vs.push_back(bracket(u, v));
    return Subspace::span(dim(), vs);
  }

  bool is_subalgebra(const Subspace& s) const { return s.contains(bracket_span(s, s)); }
  bool is_ideal(const Subspace& s) const { return s.contains(bracket_span(Subspace::whole(dim()), s)); }

  /// Structure constants of a subalgebra in the echelon basis of `s`.
  LieAlgebra restrict_to(const Subspace& s) const {
    if (!is_subalgebra(s)) throw Error("subspace is not a subalgebra");
    const std::size_t m = s.dim();
    StructureTensor c(m);
    std::vector<std::string> labels;
    const auto b = s.basis();
    for (std::size_t i = 0; i < m; ++i) {
      labels.push_back(describe(b[i]));
      for (std::size_t j = 0; j < m; ++j) {
        const auto coords = s.coordinates(bracket(b[i], b[j]));
        for (std::size_t k = 0; k < m; ++k) c(i, j, k) = coords[k];
      }
    }
    return LieAlgebra(std::move(c), std::move(labels));
  }

  /// Human-readable linear combination of basis labels, e.g. "X+1/2*Y".
  std::string describe(const RatVec& v) const {
    std::string s;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (v[i] == 0) continue;
      if (!s.empty() && v[i] > 0) s += "+";
      if (v[i] == -1)
        s += "-";
      else if (v[i] != 1)
        s += v[i].str() + "*";
      s += labels_[i];
    }
    return s.empty() ? "0" : s;
  }

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) { return a.c_ == b.c_; }

 private:
  LieAlgebra(StructureTensor c, std::vector<std::string> labels) : c_(std::move(c)), labels_(std::move(labels)) {}

  StructureTensor c_;
  std::vector<std::string> labels_;
};

}  // namespace conegeom
