#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "conegeom/cone_construct.hpp"
#include "conegeom/numeric.hpp"

namespace conegeom {

/// Which multiplication applies to a point of R x V: the original group G,
/// the reconstructed R x| V, or R x| V with V carrying its graded law.
enum class Law { original, reduced, graded };

inline const char* to_string(Law l) {
  switch (l) {
    case Law::original: return "original";
    case Law::reduced: return "reduced";
    case Law::graded: return "graded";
  }
  return "?";
}

/// Exponential coordinates r (echelon basis of the radical) and v (V lifts).
struct GroupElement {
  RealVec r;
  RealVec v;
  Law law = Law::original;
};

/// The map psi: identity on coordinates, original law -> reduced law.
inline GroupElement psi(const GroupElement& p) {
  if (p.law != Law::original) throw Error("psi expects a point of the original group");
  return {p.r, p.v, Law::reduced};
}

namespace num {
inline double log1p(double x) { return std::log1p(x); }
inline Real log1p(const Real& x) {
  if (abs(x) < Real(1e-5)) return x - x * x / 2 + x * x * x / 3 - x * x * x * x / 4;
  return log(Real(1) + x);
}
}  // namespace num

/// l(r) = log(1 + |r|_2), evaluated without forming |r| when it is huge.
template <typename T>
T length_R(const Vec<T>& r) {
  const T m = max_abs(r);
  if (m == 0) return T(0);
  T s = 0;
  for (const auto& x : r) s += (x / m) * (x / m);
  const T lognorm = num::log(m) + num::log(num::sqrt(s));
  if (lognorm > T(40)) return lognorm + num::exp(-lognorm);
  return num::log1p(m * num::sqrt(s));
}

/// Homogeneous quasi-norm sum_j |c_j|^{1/w_j} in coordinates adapted to the
/// lower central series of G/R.
struct LengthModel {
  std::vector<int> weights;
  RealMatrix to_adapted;    // V-lift coordinates -> adapted coordinates
  RealMatrix from_adapted;

  Real adapted_norm(const RealVec& c) const {
    Real s = 0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const Real a = num::abs(c[j]);
      if (a == 0) continue;
      s += weights[j] == 1 ? a : num::pow(a, Real(1) / Real(weights[j]));
    }
    return s;
  }
  Real norm(const RealVec& t) const { return adapted_norm(to_adapted * t); }

  /// delta_lambda on adapted coordinates: c_j -> lambda^{w_j} c_j.
  RealVec dilate(RealVec c, const Real& lambda) const {
    for (std::size_t j = 0; j < c.size(); ++j) c[j] *= num::pow(lambda, Real(weights[j]));
    return c;
  }
};

inline LengthModel make_length_model(const LieAlgebra& quotient_algebra) {
  const auto gr = associated_graded(quotient_algebra);
  return {gr.weights, gr.to_adapted.cast<Real>(), inverse(gr.to_adapted)->cast<Real>()};
}

struct DecomposedH {
  RealVec delta;  // h coordinates, lies in w
  RealVec lift;   // coordinates along the chosen basis of v
};

/// Writes h = delta * exp(lift) with delta in W and lift in v, under the
/// BCH law of a nilpotent h. Modulo the normal subgroup W the lift must equal
/// the v-component of log h, so only delta is computed by BCH.
class HSplitter {
 public:
  HSplitter() = default;
  HSplitter(const LieAlgebra& h, const std::vector<RatVec>& w_basis, const std::vector<RatVec>& v_basis)
      : law_(h), depth_(nilpotency_class(h)), wd_(w_basis.size()) {
    std::vector<RatVec> cols = w_basis;
    cols.insert(cols.end(), v_basis.begin(), v_basis.end());
    const auto inv = inverse(RatMatrix::from_columns(cols, h.dim()));
    if (!inv) throw Error("w and v do not span h");
    split_ = inv->cast<Real>();
    RatMatrix vb(h.dim(), v_basis.size());
    for (std::size_t j = 0; j < v_basis.size(); ++j)
      for (std::size_t i = 0; i < h.dim(); ++i) vb(i, j) = v_basis[j][i];
    v_to_h_ = vb.cast<Real>();
    if (!h.is_ideal(Subspace::span(h.dim(), w_basis))) throw NotAnIdeal();
  }

  const BracketTable<Real>& law() const { return law_; }
  std::size_t depth() const { return depth_; }
  RealVec from_v(const RealVec& t) const { return v_to_h_ * t; }
  RealVec split(const RealVec& x) const { return split_ * x; }

  DecomposedH decompose(const RealVec& eta) const {
    const RealVec s = split_ * eta;
    RealVec lift(s.begin() + static_cast<std::ptrdiff_t>(wd_), s.end());
    RealVec delta = bch(law_, eta, negate(v_to_h_ * lift), depth_);
    const RealVec ds = split_ * delta;
    Real off = 0;
    for (std::size_t k = wd_; k < ds.size(); ++k) off = std::max(off, num::abs(ds[k]));
    if (off > Real(1e-10) * (Real(1) + max_abs(eta))) throw NoConvergence("decompose_H residual outside w");
    return {std::move(delta), std::move(lift)};
  }

 private:
  BracketTable<Real> law_;
  std::size_t depth_ = 0, wd_ = 0;
  RealMatrix split_, v_to_h_;
};

/// Both group laws on R x V built from a ReducedPair, plus the length
/// functionals l, |.|_{G/R}, L and the quasi-distances.
class GroupModel {
 public:
  explicit GroupModel(const ReducedPair& rp) : rp_(rp), quotient_(rp.g1.restrict_to(rp.complement_in_g1())) {
    const std::size_t d = rp.radical_dim(), m = rp.quotient_dim();
    d_ = d;
    m_ = m;
    const auto r_alg = rp.g1.restrict_to(rp.radical_in_g1());
    r_law_ = BracketTable<Real>(r_alg);
    r_depth_ = nilpotency_class(r_alg);
    q_law_ = BracketTable<Real>(quotient_);
    q_depth_ = nilpotency_class(quotient_);
    lm_ = make_length_model(quotient_);
    const auto gr = associated_graded(quotient_);
    graded_law_ = BracketTable<Real>(gr.algebra);

    const auto& cd = rp.cartan;
    const auto h_alg = rp.g.restrict_to(cd.h);
    std::vector<RatVec> w_h, v_h;
    for (const auto& b : cd.w.basis()) w_h.push_back(cd.h.coordinates(b));
    for (const auto& b : cd.v_lifts) v_h.push_back(cd.h.coordinates(b));
    h_ = HSplitter(h_alg, w_h, v_h);
    RatMatrix w_to_r(d, cd.w.dim());
    const auto wb = cd.w.basis();
    for (std::size_t j = 0; j < wb.size(); ++j) {
      const auto c = cd.r.coordinates(wb[j]);
      for (std::size_t i = 0; i < d; ++i) w_to_r(i, j) = c[i];
    }
    w_to_r_ = w_to_r.cast<Real>();

    const auto& as = rp.actions;
    for (std::size_t i = 0; i < m; ++i) {
      s_.push_back(as.semisimple[i].cast<Real>());
      n_.push_back(as.nilpotent[i].cast<Real>());
    }
    exact_weights_ = as.weights_exact && d > 0;
    if (exact_weights_) {
      eig_ = as.eigenbasis.cast<Real>();
      eig_inv_ = as.eigenbasis_inv.cast<Real>();
      for (const auto& blk : as.weights)
        for (std::size_t k = 0; k < blk.basis.size(); ++k) {
          RealVec e;
          for (const auto& x : blk.eigenvalues) e.push_back(num::to<Real>(x));
          column_weights_.push_back(std::move(e));
        }
    }
  }

  const ReducedPair& pair() const { return rp_; }
  std::size_t radical_dim() const { return d_; }
  std::size_t quotient_dim() const { return m_; }
  const LengthModel& length_model() const { return lm_; }
  const HSplitter& h_splitter() const { return h_; }
  const LieAlgebra& quotient_algebra() const { return quotient_; }
  bool exact_weights() const { return exact_weights_; }

  Real quotient_norm(const RealVec& t) const { return lm_.norm(t); }

  /// L(rv) = l(r) + |v|_{G/R}, the same on every law.
  Real size(const GroupElement& p) const { return length_R(p.r) + lm_.norm(p.v); }

  RealMatrix alpha(const RealVec& t) const { return combine(s_, t) + combine(n_, t); }

  /// exp(-S_t) = B(v^{-1}).
  RealMatrix B_inverse(const RealVec& t) const {
    if (d_ == 0) return RealMatrix(0, 0);
    if (!exact_weights_) return expm(Real(-1) * combine(s_, t));
    RealMatrix scaled = eig_;
    for (std::size_t k = 0; k < d_; ++k) {
      Real lambda = 0;
      for (std::size_t i = 0; i < m_; ++i) lambda += column_weights_[k][i] * t[i];
      const Real f = num::exp(-lambda);
      for (std::size_t i = 0; i < d_; ++i) scaled(i, k) *= f;
    }
    return scaled * eig_inv_;
  }

  /// exp(-N_t) = U(v^{-1}).
  RealMatrix U_inverse(const RealVec& t) const {
    if (d_ == 0) return RealMatrix(0, 0);
    return expm_nilpotent(Real(-1) * combine(n_, t));
  }

  /// exp(-ad(xi_t)|r) = A(v^{-1}) = B(v^{-1}) U(v^{-1}).
  RealMatrix A_inverse(const RealVec& t) const {
    if (d_ == 0) return RealMatrix(0, 0);
    return B_inverse(t) * U_inverse(t);
  }

  RealVec r_product(const RealVec& a, const RealVec& b) const { return bch(r_law_, a, b, r_depth_); }
  RealVec q_product(const RealVec& a, const RealVec& b) const { return bch(q_law_, a, b, q_depth_); }
  RealVec graded_product(const RealVec& a, const RealVec& b) const {
    return bch(graded_law_, a, b, q_depth_);
  }

  /// delta(v^{-1} v') as radical coordinates, together with [v^{-1}v'].
  std::pair<RealVec, RealVec> delta_and_class(const RealVec& t, const RealVec& t2) const {
    const RealVec eta = bch(h_.law(), negate(h_.from_v(t)), h_.from_v(t2), h_.depth());
    const auto dec = h_.decompose(eta);
    const RealVec ds = h_.split(dec.delta);
    RealVec w_coords(ds.begin(), ds.begin() + static_cast<std::ptrdiff_t>(w_to_r_.cols()));
    return {w_to_r_ * w_coords, dec.lift};
  }

  struct DistanceParts {
    Real r_part;   // l(...)
    Real v_part;   // |v^{-1}v'|_{G/R}
    Real delta;    // l(delta(v^{-1}v')), original law only
    Real total() const { return r_part + v_part; }
  };

  DistanceParts distance_parts(const GroupElement& p, const GroupElement& q, Law law) const {
    const RealVec rho0 = r_product(negate(p.r), q.r);
    DistanceParts out{0, 0, 0};
    switch (law) {
      case Law::original: {
        auto [delta, cls] = delta_and_class(p.v, q.v);
        const RealVec r = d_ ? r_product(A_inverse(p.v) * rho0, delta) : RealVec{};
        out.r_part = length_R(r);
        out.v_part = lm_.norm(cls);
        out.delta = length_R(delta);
        break;
      }
      case Law::reduced: {
        out.r_part = d_ ? length_R(B_inverse(p.v) * rho0) : Real(0);
        out.v_part = lm_.norm(q_product(negate(p.v), q.v));
        break;
      }
      case Law::graded: {
        out.r_part = d_ ? length_R(B_inverse(p.v) * rho0) : Real(0);
        const RealVec c = graded_product(negate(lm_.to_adapted * p.v), lm_.to_adapted * q.v);
        out.v_part = lm_.adapted_norm(c);
        break;
      }
    }
    if (!num::isfinite(out.r_part) || !num::isfinite(out.v_part)) throw Overflow("quasi-distance");
    return out;
  }

  /// d_1 (original), d_2 (reduced) or the graded variant.
  Real distance(const GroupElement& p, const GroupElement& q, Law law) const {
    return distance_parts(p, q, law).total();
  }

  /// A point with L(p) = s: a fraction a of s goes to l(r) and the rest to
  /// |v|_{G/R}, reached by a homogeneous dilation of a random direction.
  template <typename Rng>
  GroupElement sample(const Real& s, Rng& rng, Law law = Law::original) const {
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double a = unif(rng);
    if (d_ == 0) a = 0;
    if (m_ == 0) a = 1;
    GroupElement p{RealVec(d_, Real(0)), RealVec(m_, Real(0)), law};
    if (d_ > 0) {
      RealVec dir(d_);
      Real nrm = 0;
      do {
        nrm = 0;
        for (auto& x : dir) {
          x = gauss(rng);
          nrm += x * x;
        }
      } while (nrm == 0);
      nrm = num::sqrt(nrm);
      const Real radius = num::exp(Real(a) * s) - 1;
      for (std::size_t i = 0; i < d_; ++i) p.r[i] = dir[i] / nrm * radius;
    }
    if (m_ > 0) {
      RealVec c(m_);
      Real nrm = 0;
      do {
        for (auto& x : c) x = gauss(rng);
        nrm = lm_.adapted_norm(c);
      } while (nrm == 0);
      const Real target = Real(1 - a) * s;
      p.v = lm_.from_adapted * lm_.dilate(c, target / nrm);
    }
    return p;
  }

 private:
  RealMatrix combine(const std::vector<RealMatrix>& ms, const RealVec& t) const {
    RealMatrix acc(d_, d_);
    for (std::size_t i = 0; i < ms.size(); ++i)
      if (t[i] != 0) acc = acc + t[i] * ms[i];
    return acc;
  }

  ReducedPair rp_;
  std::size_t d_ = 0, m_ = 0;
  BracketTable<Real> r_law_, q_law_, graded_law_;
  std::size_t r_depth_ = 0, q_depth_ = 0;
  LieAlgebra quotient_;
  LengthModel lm_;
  HSplitter h_;
  RealMatrix w_to_r_;
  std::vector<RealMatrix> s_, n_;
  bool exact_weights_ = false;
  RealMatrix eig_, eig_inv_;
  std::vector<RealVec> column_weights_;
};

/// One sampled pair of the residual study.
struct ResidualSample {
  int scale_bin;  // k with |p| + |q| in [2^k, 2^{k+1})
  double p_size, q_size;
  double d_a, d_b;
  double residual;  // |d_a - d_b|
  double v_size, v2_size;
  double delta;
};

/// Pairs stratified into dyadic bins k_min..k_max-1 of |p|+|q|, with the same
/// number of pairs per bin; distances under laws a and b.
inline std::vector<ResidualSample> residual_study(const GroupModel& model, Law a, Law b, int k_min, int k_max,
                                                  std::size_t pairs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<ResidualSample> out;
  const std::size_t bins = static_cast<std::size_t>(std::max(1, k_max - k_min));
  const std::size_t per_bin = (pairs + bins - 1) / bins;
  for (int k = k_min; k < k_max; ++k)
    for (std::size_t i = 0; i < per_bin; ++i) {
      const double total = std::ldexp(1.0 + unif(rng), k);
      const double frac = 0.1 + 0.8 * unif(rng);
      const auto p = model.sample(Real(total * frac), rng);
      const auto q = model.sample(Real(total * (1 - frac)), rng);
      const auto pa = model.distance_parts(p, q, a);
      const auto pb = model.distance_parts(p, q, b);
      const Real res = num::abs(pa.total() - pb.total());
      out.push_back({k, model.size(p).convert_to<double>(), model.size(q).convert_to<double>(),
                     pa.total().convert_to<double>(), pb.total().convert_to<double>(), res.convert_to<double>(),
                     model.quotient_norm(p.v).convert_to<double>(), model.quotient_norm(q.v).convert_to<double>(),
                     std::max(pa.delta, pb.delta).convert_to<double>()});
    }
  return out;
}

/// Per-bin summary of a residual study: K_bin = max residual /
/// (log(1+|v|) + log(1+|v'|) + 1) and the bin max of residual / (|p|+|q|).
struct ResidualBin {
  int k = 0;
  std::size_t count = 0;
  double k_estimate = 0;
  double max_relative = 0;
};

inline std::vector<ResidualBin> summarize_residuals(const std::vector<ResidualSample>& rows) {
  std::vector<ResidualBin> bins;
  for (const auto& s : rows) {
    if (bins.empty() || bins.back().k != s.scale_bin) bins.push_back({s.scale_bin});
    auto& b = bins.back();
    ++b.count;
    b.k_estimate = std::max(b.k_estimate, s.residual / (std::log1p(s.v_size) + std::log1p(s.v2_size) + 1));
    b.max_relative = std::max(b.max_relative, s.residual / (s.p_size + s.q_size));
  }
  return bins;
}

inline void write_residual_csv(std::ostream& os, const std::vector<ResidualSample>& rows, std::uint64_t seed) {
  os << "# seed=" << seed << "\n";
  os << "scale_bin,|p|,|q|,d1,d2,residual\n";
  os.precision(17);
  for (const auto& s : rows)
    os << s.scale_bin << ',' << s.p_size << ',' << s.q_size << ',' << s.d_a << ',' << s.d_b << ',' << s.residual
       << '\n';
}

}  // namespace conegeom
