#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "conegeom/lie_algebra.hpp"

namespace conegeom::corpus {

/// [X,Y] = Z.
inline LieAlgebra heis3() {
  StructureTensor c(3);
  c.set_bracket(0, 1, 2, 1);
  return LieAlgebra::validate(c, {"X", "Y", "Z"});
}

/// [T,X] = X, [T,Y] = X + Y: a Jordan block acting on an abelian plane.
inline LieAlgebra gJ() {
  StructureTensor c(3);
  c.set_bracket(0, 1, 1, 1);
  c.set_bracket(0, 2, 1, 1);
  c.set_bracket(0, 2, 2, 1);
  return LieAlgebra::validate(c, {"T", "X", "Y"});
}

/// [T,X] = X, [T,Y] = Y, [X,Y] = Z, [T,Z] = 2Z.
inline LieAlgebra g4() {
  StructureTensor c(4);
  c.set_bracket(0, 1, 1, 1);
  c.set_bracket(0, 2, 2, 1);
  c.set_bracket(1, 2, 3, 1);
  c.set_bracket(0, 3, 3, 2);
  return LieAlgebra::validate(c, {"T", "X", "Y", "Z"});
}

/// [T,X] = Y, [T,Y] = -X: solvable but not triangulable.
inline LieAlgebra rotation() {
  StructureTensor c(3);
  c.set_bracket(0, 1, 2, 1);
  c.set_bracket(0, 2, 1, -1);
  return LieAlgebra::validate(c, {"T", "X", "Y"});
}

inline LieAlgebra abelian(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("A" + std::to_string(i));
  return LieAlgebra::validate(StructureTensor(n), labels);
}

/// [X1,X2]=X3, [X1,X3]=X4, [X2,X3]=X4.
inline LieAlgebra filiform4() {
  StructureTensor c(4);
  c.set_bracket(0, 1, 2, 1);
  c.set_bracket(0, 2, 3, 1);
  c.set_bracket(1, 2, 3, 1);
  return LieAlgebra::validate(c, {"X1", "X2", "X3", "X4"});
}

/// [X1,X2]=X3, [X1,X3]=X4, [X1,X4]=X5, [X2,X3]=X5; not isomorphic to its
/// associated graded algebra.
inline LieAlgebra filiform5() {
  StructureTensor c(5);
  c.set_bracket(0, 1, 2, 1);
  c.set_bracket(0, 2, 3, 1);
  c.set_bracket(0, 3, 4, 1);
  c.set_bracket(1, 2, 4, 1);
  return LieAlgebra::validate(c, {"X1", "X2", "X3", "X4", "X5"});
}

/// [X1,X2]=Z, [X1,A]=A, [X1,B]=-B, [A,B]=Z. The Cartan subalgebra
/// span(X1,X2,Z) meets the radical span(A,B,Z) in span(Z).
inline LieAlgebra g5() {
  StructureTensor c(5);
  c.set_bracket(0, 1, 4, 1);
  c.set_bracket(0, 2, 2, 1);
  c.set_bracket(0, 3, 3, -1);
  c.set_bracket(2, 3, 4, 1);
  return LieAlgebra::validate(c, {"X1", "X2", "A", "B", "Z"});
}

/// filiform5 on X1..X5 extended by a plane (A,B) on which X1 acts by the
/// Jordan block [X1,A]=A, [X1,B]=A+B. The Cartan subalgebra is the
/// non-graded filiform5 and the action has a unipotent part.
inline LieAlgebra filiform_jordan() {
  StructureTensor c(7);
  c.set_bracket(0, 1, 2, 1);
  c.set_bracket(0, 2, 3, 1);
  c.set_bracket(0, 3, 4, 1);
  c.set_bracket(1, 2, 4, 1);
  c.set_bracket(0, 5, 5, 1);
  c.set_bracket(0, 6, 5, 1);
  c.set_bracket(0, 6, 6, 1);
  return LieAlgebra::validate(c, {"X1", "X2", "X3", "X4", "X5", "A", "B"});
}

namespace detail {

using UpperMatrix = std::vector<Rational>;  // packed upper triangle, row-major

inline std::size_t packed_index(std::size_t n, std::size_t i, std::size_t j) {
  return i * n - i * (i - 1) / 2 + (j - i);
}

inline UpperMatrix upper_commutator(std::size_t n, const UpperMatrix& a, const UpperMatrix& b) {
  UpperMatrix c(a.size(), Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      Rational s = 0;
      for (std::size_t k = i; k <= j; ++k) {
        s += a[packed_index(n, i, k)] * b[packed_index(n, k, j)];
        s -= b[packed_index(n, i, k)] * a[packed_index(n, k, j)];
      }
      c[packed_index(n, i, j)] = s;
    }
  return c;
}

}  // namespace detail

/// A random subalgebra of upper triangular rational matrices (hence
/// triangulable with rational weights) of dimension 2..max_dim, generated by
/// closing two or three sparse random generators under the commutator.
inline LieAlgebra random_triangulable(std::uint64_t seed, std::size_t max_dim = 6) {
  std::mt19937_64 rng(seed);
  for (;;) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 4)(rng);
    const std::size_t packed = n * (n + 1) / 2;
    const std::size_t gens = std::uniform_int_distribution<std::size_t>(2, 3)(rng);
    std::vector<detail::UpperMatrix> vs;
    for (std::size_t g = 0; g < gens; ++g) {
      detail::UpperMatrix m(packed, Rational(0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
          const bool diag = i == j;
          if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) continue;
          m[detail::packed_index(n, i, j)] =
              diag ? std::uniform_int_distribution<int>(0, 2)(rng) : std::uniform_int_distribution<int>(-1, 2)(rng);
        }
      vs.push_back(std::move(m));
    }
    Subspace span = Subspace::span(packed, vs);
    bool too_big = false;
    for (;;) {
      auto basis = span.basis();
      auto all = basis;
      for (std::size_t a = 0; a < basis.size(); ++a)
        for (std::size_t b = a + 1; b < basis.size(); ++b) all.push_back(detail::upper_commutator(n, basis[a], basis[b]));
      Subspace next = Subspace::span(packed, all);
      if (next.dim() > max_dim) {
        too_big = true;
        break;
      }
      if (next == span) break;
      span = std::move(next);
    }
    if (too_big || span.dim() < 2) continue;

    const std::size_t d = span.dim();
    const auto basis = span.basis();
    StructureTensor c(d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b) {
        const auto coords = span.coordinates(detail::upper_commutator(n, basis[a], basis[b]));
        for (std::size_t k = 0; k < d; ++k) c(a, b, k) = coords[k];
      }
    return LieAlgebra::validate(std::move(c));
  }
}

}  // namespace conegeom::corpus
