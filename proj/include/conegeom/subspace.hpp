#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "conegeom/matrix.hpp"

namespace conegeom {

/// A linear subspace of Q^n stored as its reduced row echelon basis.
///
/// The echelon form is canonical, so two equal subspaces compare equal with
/// `==` and the basis can be used as a deterministic coordinate system: the
/// coordinates of a member vector are its entries at the pivot columns.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : ambient_(ambient_dim), basis_(0, ambient_dim) {}

  static Subspace span(std::size_t ambient_dim, const std::vector<RatVec>& vectors) {
    Subspace s(ambient_dim);
    if (vectors.empty()) return s;
    auto [red, piv] = rref(RatMatrix::from_rows(vectors, ambient_dim));
    s.basis_ = std::move(red);
    s.pivots_ = std::move(piv);
    return s;
  }

  static Subspace whole(std::size_t n) {
    std::vector<RatVec> e;
    for (std::size_t i = 0; i < n; ++i) e.push_back(unit(n, i));
    return span(n, e);
  }

  static RatVec unit(std::size_t n, std::size_t i) {
    RatVec v(n, Rational(0));
    v[i] = 1;
    return v;
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return pivots_.size(); }
  bool is_zero() const { return pivots_.empty(); }
  const RatMatrix& basis_matrix() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  RatVec basis_vector(std::size_t i) const { return basis_.row(i); }
  std::vector<RatVec> basis() const {
    std::vector<RatVec> b;
    for (std::size_t i = 0; i < dim(); ++i) b.push_back(basis_.row(i));
    return b;
  }

  bool contains(const RatVec& v) const {
    // Reduce against the echelon basis; v is a member iff nothing remains.
    RatVec r = v;
    for (std::size_t i = 0; i < dim(); ++i) {
      const Rational f = r[pivots_[i]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < ambient_; ++j) r[j] -= f * basis_(i, j);
    }
    for (const auto& x : r)
      if (x != 0) return false;
    return true;
  }

  bool contains(const Subspace& other) const {
    for (std::size_t i = 0; i < other.dim(); ++i)
      if (!contains(other.basis_vector(i))) return false;
    return true;
  }

  /// Coordinates of a member vector in the echelon basis.
  RatVec coordinates(const RatVec& v) const {
    RatVec c(dim());
    for (std::size_t i = 0; i < dim(); ++i) c[i] = v[pivots_[i]];
    return c;
  }

  RatVec from_coordinates(const RatVec& c) const {
    assert(c.size() == dim());
    RatVec v(ambient_, Rational(0));
    for (std::size_t i = 0; i < dim(); ++i) {
      if (c[i] == 0) continue;
      for (std::size_t j = 0; j < ambient_; ++j) v[j] += c[i] * basis_(i, j);
    }
    return v;
  }

  Subspace operator+(const Subspace& other) const {
    auto vs = basis();
    auto ws = other.basis();
    vs.insert(vs.end(), ws.begin(), ws.end());
    return span(ambient_, vs);
  }

  Subspace intersect(const Subspace& other) const {
    // Solve sum a_i u_i - sum b_j w_j = 0; the a-part yields the intersection.
    const std::size_t p = dim(), q = other.dim();
    if (p == 0 || q == 0) return Subspace(ambient_);
    RatMatrix m(ambient_, p + q);
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t k = 0; k < ambient_; ++k) m(k, i) = basis_(i, k);
    for (std::size_t j = 0; j < q; ++j)
      for (std::size_t k = 0; k < ambient_; ++k) m(k, p + j) = -other.basis_(j, k);
    std::vector<RatVec> vs;
    for (const auto& sol : nullspace(m)) vs.push_back(from_coordinates(RatVec(sol.begin(), sol.begin() + p)));
    return span(ambient_, vs);
  }

  /// Complement of `inner` inside this subspace chosen by pivot columns: the
  /// echelon rows whose pivot column is not a pivot of `inner`.
  std::vector<RatVec> pivot_complement(const Subspace& inner) const {
    assert(contains(inner));
    std::vector<bool> taken(ambient_, false);
    for (auto p : inner.pivots_) taken[p] = true;
    std::vector<RatVec> out;
    for (std::size_t i = 0; i < dim(); ++i)
      if (!taken[pivots_[i]]) out.push_back(basis_vector(i));
    return out;
  }

  /// Residue of v modulo this subspace: v with its pivot columns eliminated.
  RatVec reduce(const RatVec& v) const {
    RatVec r = v;
    for (std::size_t i = 0; i < dim(); ++i) {
      const Rational f = r[pivots_[i]];
      if (f == 0) continue;
      for (std::size_t j = 0; j < ambient_; ++j) r[j] -= f * basis_(i, j);
    }
    return r;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.pivots_ == b.pivots_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_ = 0;
  RatMatrix basis_;
  std::vector<std::size_t> pivots_;
};

}  // namespace conegeom
