#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace conegeom {

// Base of every error raised by the library. Each subclass corresponds to a
// named failure of one operation and carries whatever indices locate it.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AntisymmetryViolation : Error {
  std::size_t i, j, k;
  AntisymmetryViolation(std::size_t i_, std::size_t j_, std::size_t k_)
      : Error("antisymmetry violated at c[" + std::to_string(i_) + "][" + std::to_string(j_) + "][" +
              std::to_string(k_) + "]"),
        i(i_), j(j_), k(k_) {}
};

struct JacobiViolation : Error {
  std::size_t i, j, k;
  JacobiViolation(std::size_t i_, std::size_t j_, std::size_t k_)
      : Error("Jacobi identity fails on basis triple (" + std::to_string(i_) + "," + std::to_string(j_) + "," +
              std::to_string(k_) + ")"),
        i(i_), j(j_), k(k_) {}
};

struct NotSolvable : Error {
  NotSolvable() : Error("derived series does not reach zero: algebra is not solvable") {}
};

struct NotNilpotent : Error {
  NotNilpotent() : Error("lower central series does not reach zero: algebra is not nilpotent") {}
};

struct NotAnIdeal : Error {
  NotAnIdeal() : Error("subspace is not an ideal") {}
};

struct NotTriangulable : Error {
  std::size_t flag_depth;  // dimension of the partial flag built before failing
  explicit NotTriangulable(std::size_t depth, const std::string& why)
      : Error("not triangulable: " + why + " (quotient by ideal of dimension " + std::to_string(depth) + ")"),
        flag_depth(depth) {}
};

struct NonRealSpectrum : Error {
  NonRealSpectrum() : Error("characteristic polynomial has non-real roots") {}
};

struct RegularElementNotFound : Error {
  RegularElementNotFound() : Error("no regular element with nilpotent self-normalizing Fitting null component") {}
};

struct BoundViolated : Error {
  double length;
  explicit BoundViolated(double len)
      : Error("unipotent polynomial bound violated at |h| = " + std::to_string(len)), length(len) {}
};

struct NoConvergence : Error {
  explicit NoConvergence(const std::string& what) : Error("no convergence: " + what) {}
};

struct Overflow : Error {
  explicit Overflow(const std::string& what) : Error("overflow: " + what) {}
};

struct InsufficientData : Error {
  explicit InsufficientData(const std::string& what) : Error("insufficient data: " + what) {}
};

struct NetTooCoarse : Error {
  int bin;
  NetTooCoarse(int b, double spacing)
      : Error("image net too coarse in bin 2^" + std::to_string(b) + " (spacing " + std::to_string(spacing) + ")"),
        bin(b) {}
};

struct HorizonTooSmall : Error {
  explicit HorizonTooSmall(const std::string& what) : Error("horizon too small: " + what) {}
};

struct ParseError : Error {
  std::size_t line, column;
  ParseError(std::size_t l, std::size_t c, const std::string& what)
      : Error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + what), line(l), column(c) {}
};

}  // namespace conegeom
