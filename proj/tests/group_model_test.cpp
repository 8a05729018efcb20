#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "conegeom/corpus.hpp"
#include "conegeom/group_model.hpp"
#include "oracles.hpp"

using namespace conegeom;

namespace {

// Strictly upper triangular n x n matrices, basis E_ij (i < j) in row order.
LieAlgebra strictly_upper(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>>& idx) {
  idx.clear();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) idx.push_back({i, j});
  const std::size_t m = idx.size();
  StructureTensor c(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      // [E_ij, E_kl] = d_jk E_il - d_li E_kj
      const auto [i, j] = idx[a];
      const auto [k, l] = idx[b];
      for (std::size_t t = 0; t < m; ++t) {
        Rational v = 0;
        if (j == k && idx[t] == std::make_pair(i, l)) v += 1;
        if (l == i && idx[t] == std::make_pair(k, j)) v -= 1;
        c(a, b, t) = v;
      }
    }
  return LieAlgebra::validate(c);
}

RatMatrix to_matrix(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& idx, const RatVec& x) {
  RatMatrix m(n, n);
  for (std::size_t a = 0; a < idx.size(); ++a) m(idx[a].first, idx[a].second) = x[a];
  return m;
}

RatMatrix exp_nil(const RatMatrix& x) {
  const std::size_t n = x.rows();
  RatMatrix acc = RatMatrix::identity(n), term = RatMatrix::identity(n);
  for (std::size_t k = 1; k < n; ++k) {
    term = Rational(1, static_cast<int>(k)) * (term * x);
    acc = acc + term;
  }
  return acc;
}

RatMatrix log_unipotent(const RatMatrix& u) {
  const std::size_t n = u.rows();
  const RatMatrix y = u - RatMatrix::identity(n);
  RatMatrix acc(n, n), term = RatMatrix::identity(n);
  for (std::size_t k = 1; k < n; ++k) {
    term = term * y;
    acc = acc + Rational(k % 2 ? 1 : -1, static_cast<int>(k)) * term;
  }
  return acc;
}

RealVec rv(std::initializer_list<double> xs) {
  RealVec v;
  for (double x : xs) v.push_back(Real(x));
  return v;
}

double dbl(const Real& x) { return x.convert_to<double>(); }

}  // namespace

TEST(BCH, AbelianIsSum) {
  BracketTable<Real> br(corpus::abelian(3));
  const auto z = bch(br, rv({1, 2, 3}), rv({-4, 5, 0.5}), 1);
  EXPECT_EQ(z, rv({-3, 7, 3.5}));
}

TEST(BCH, Heis3DegreeTwo) {
  BracketTable<Rational> br(corpus::heis3());
  const RatVec x{2, Rational(1, 3), 5}, y{-1, 4, Rational(1, 2)};
  const auto z = bch(br, x, y, 2);
  EXPECT_EQ(z, (RatVec{1, Rational(13, 3), Rational(11, 2) + (2 * 4 - (-1) * Rational(1, 3)) / 2}));
}

TEST(BCH, InverseIsNegation) {
  BracketTable<Real> br(corpus::filiform5());
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int i = 0; i < 20; ++i) {
    RealVec x(5);
    for (auto& c : x) c = g(rng);
    for (const auto& c : bch(br, x, negate(x), 4)) EXPECT_EQ(c, 0);
  }
}

TEST(BCH, MatchesMatrixLogarithmExactly) {
  // log(exp X exp Y) in strictly upper triangular matrices, n = 4, 5, 6,
  // exercises recursion depths 3, 4 and 5.
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> num(-3, 3), den(1, 3);
  for (std::size_t n : {4u, 5u, 6u}) {
    std::vector<std::pair<std::size_t, std::size_t>> idx;
    const auto g = strictly_upper(n, idx);
    BracketTable<Rational> br(g);
    for (int trial = 0; trial < 5; ++trial) {
      RatVec x(idx.size()), y(idx.size());
      for (auto& c : x) c = Rational(num(rng), den(rng));
      for (auto& c : y) c = Rational(num(rng), den(rng));
      const auto z = bch(br, x, y, nilpotency_class(g));
      const auto expect = log_unipotent(exp_nil(to_matrix(n, idx, x)) * exp_nil(to_matrix(n, idx, y)));
      EXPECT_EQ(to_matrix(n, idx, z), expect) << "n=" << n;
    }
  }
}

TEST(BCH, AssociativeOnSampledTriples) {
  for (const auto& g : {corpus::heis3(), corpus::filiform4(), corpus::filiform5()}) {
    BracketTable<Real> br(g);
    const auto depth = nilpotency_class(g);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0, 3);
    for (int i = 0; i < 50; ++i) {
      RealVec a(g.dim()), b(g.dim()), c(g.dim());
      for (std::size_t k = 0; k < g.dim(); ++k) {
        a[k] = gauss(rng);
        b[k] = gauss(rng);
        c[k] = gauss(rng);
      }
      const auto l = bch(br, bch(br, a, b, depth), c, depth);
      const auto r = bch(br, a, bch(br, b, c, depth), depth);
      for (std::size_t k = 0; k < g.dim(); ++k) EXPECT_LE(dbl(num::abs(l[k] - r[k])), 1e-12 * (1 + dbl(max_abs(l))));
    }
  }
}

TEST(DecomposeH, Heis3Example) {
  const auto h = corpus::heis3();
  HSplitter split(h, {Subspace::unit(3, 2)}, {Subspace::unit(3, 0), Subspace::unit(3, 1)});
  const auto dec = split.decompose(rv({1.5, -2, 0.25}));
  EXPECT_EQ(dec.lift, rv({1.5, -2}));
  EXPECT_EQ(dec.delta, rv({0, 0, 0.25}));
}

TEST(DecomposeH, PureVAndPureW) {
  const auto h = corpus::heis3();
  HSplitter split(h, {Subspace::unit(3, 2)}, {Subspace::unit(3, 0), Subspace::unit(3, 1)});
  auto dec = split.decompose(rv({3, 4, 0}));
  EXPECT_EQ(dec.delta, rv({0, 0, 0}));
  dec = split.decompose(rv({0, 0, 7}));
  EXPECT_EQ(dec.lift, rv({0, 0}));
  EXPECT_EQ(dec.delta, rv({0, 0, 7}));
}

TEST(DecomposeH, ProductReconstructsInput) {
  // g5: h = span(X1, X2, Z) is Heisenberg, w = span(Z).
  const GroupModel model(reduce_to_class_C(corpus::g5()));
  const auto& split = model.h_splitter();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0, 10);
  for (int i = 0; i < 50; ++i) {
    const RealVec eta = rv({gauss(rng), gauss(rng), gauss(rng)});
    const auto dec = split.decompose(eta);
    const auto back = bch(split.law(), dec.delta, split.from_v(dec.lift), split.depth());
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(dbl(back[k]), dbl(eta[k]), 1e-10);
  }
}

TEST(LengthR, Examples) {
  EXPECT_EQ(length_R(RealVec{Real(0), Real(0)}), 0);
  EXPECT_NEAR(length_R(std::vector<double>{std::exp(1.0) - 1}), 1.0, 1e-15);
  EXPECT_NEAR(length_R(std::vector<double>{std::exp(50.0), 0}), 50.0, 1e-9);
  EXPECT_NEAR(dbl(length_R(RealVec{num::exp(Real(1e6)), Real(0)})), 1e6, 1e-6);
  EXPECT_NEAR(length_R(std::vector<double>{1e300, 1e300}), std::log(1e300) + 0.5 * std::log(2.0), 1e-9);
}

TEST(QuotientNorm, Examples) {
  const auto lm = make_length_model(corpus::heis3());
  EXPECT_EQ(lm.norm(rv({0, 0, 0})), 0);
  EXPECT_NEAR(dbl(lm.norm(rv({0, 0, 9}))), 3.0, 1e-15);
  EXPECT_NEAR(dbl(lm.norm(rv({0, 0, -16}))), 4.0, 1e-15);
  const auto ab = make_length_model(corpus::abelian(3));
  EXPECT_EQ(ab.norm(rv({1, -2, 3})), 6);
}

TEST(QuotientNorm, HomogeneousUnderDilation) {
  const auto lm = make_length_model(corpus::filiform5());
  const RealVec c = rv({0.3, -1.2, 2, 0.7, -5});
  for (double lambda : {0.5, 3.0, 1000.0})
    EXPECT_NEAR(dbl(lm.adapted_norm(lm.dilate(c, Real(lambda)))), lambda * dbl(lm.adapted_norm(c)),
                1e-12 * lambda);
}

TEST(QuasiDistance, GJExamples) {
  const GroupModel model(reduce_to_class_C(corpus::gJ()));
  const GroupElement e{rv({0, 0}), rv({0})};
  for (Law law : {Law::original, Law::reduced}) {
    EXPECT_EQ(model.distance(e, e, law), 0);
    const GroupElement q{rv({std::exp(10.0) - 1, 0}), rv({0})};
    EXPECT_NEAR(dbl(model.distance(e, q, law)), 10.0, 1e-12);
    const GroupElement q2{rv({0, 0}), rv({-7.5})};
    EXPECT_NEAR(dbl(model.distance(e, q2, law)), 7.5, 1e-15);
  }
  std::mt19937_64 rng(0);
  for (int i = 0; i < 20; ++i) {
    const auto p = model.sample(Real(100), rng);
    EXPECT_EQ(model.distance(p, p, Law::original), 0);
    EXPECT_EQ(model.distance(p, p, Law::reduced), 0);
  }
}

TEST(QuasiDistance, SizeIsDistanceFromIdentity) {
  const GroupModel model(reduce_to_class_C(corpus::g5()));
  const GroupElement e{RealVec(3, Real(0)), RealVec(2, Real(0))};
  std::mt19937_64 rng(9);
  for (int i = 0; i < 20; ++i) {
    const auto p = model.sample(Real(50), rng);
    EXPECT_NEAR(dbl(model.size(p)), 50.0, 1e-12);
    for (Law law : {Law::original, Law::reduced, Law::graded})
      EXPECT_NEAR(dbl(model.distance(e, p, law)), 50.0, 1e-12);
  }
}

TEST(QuasiDistance, SamplerReachesLargeScales) {
  const GroupModel model(reduce_to_class_C(corpus::gJ()));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const auto p = model.sample(Real(std::ldexp(1.0, 20)), rng);
    const auto q = model.sample(Real(std::ldexp(1.0, 20)), rng);
    EXPECT_NEAR(dbl(model.size(p)), std::ldexp(1.0, 20), 1e-6);
    EXPECT_TRUE(std::isfinite(dbl(model.distance(p, q, Law::original))));
  }
}

TEST(Psi, IdentityOnCoordinates) {
  const GroupElement p{rv({1, 2}), rv({3}), Law::original};
  const auto q = psi(p);
  EXPECT_EQ(q.r, p.r);
  EXPECT_EQ(q.v, p.v);
  EXPECT_EQ(q.law, Law::reduced);
  EXPECT_THROW(psi(q), Error);
  const GroupElement zero{rv({0, 0}), rv({0})};
  EXPECT_EQ(psi(zero).r, zero.r);
}

TEST(Actions, AEqualsExpOfMinusAlpha) {
  std::vector<LieAlgebra> gs{corpus::gJ(), corpus::g4(), corpus::g5()};
  for (std::uint64_t s = 0; s < 10; ++s) gs.push_back(corpus::random_triangulable(s));
  std::mt19937_64 rng(6);
  std::normal_distribution<double> gauss(0, 2);
  for (const auto& g : gs) {
    const GroupModel model(reduce_to_class_C(g));
    if (model.radical_dim() == 0) continue;
    for (int i = 0; i < 10; ++i) {
      RealVec t(model.quotient_dim());
      for (auto& x : t) x = gauss(rng);
      const auto a = model.A_inverse(t);
      const auto ref = expm(Real(-1) * model.alpha(t));
      EXPECT_LE(dbl(max_abs(a - ref)), 1e-9 * dbl(max_abs(ref)));
      const auto b = model.B_inverse(t), u = model.U_inverse(t);
      EXPECT_LE(dbl(max_abs(b * u - u * b)), 1e-9 * dbl(max_abs(b * u)));
    }
  }
}

TEST(Actions, BetaAndUAreHomomorphismsOnH) {
  // On H = exp(h): beta(h1 h2) = beta(h1) beta(h2) and the same for u, with
  // h1 h2 computed exactly by BCH and the parts of each element's action
  // computed by an exact Jordan split.
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> num(-4, 4);
  for (const auto& g : {corpus::gJ(), corpus::g4(), corpus::g5(), corpus::random_triangulable(2),
                        corpus::random_triangulable(6), corpus::random_triangulable(9)}) {
    const auto cd = cartan_subalgebra(g);
    if (cd.r.is_zero()) continue;
    const auto hal = g.restrict_to(cd.h);
    BracketTable<Rational> br(hal);
    const auto hb = cd.h.basis();
    auto in_g = [&](const RatVec& hc) {
      RatVec x(g.dim(), Rational(0));
      for (std::size_t a = 0; a < hb.size(); ++a)
        for (std::size_t j = 0; j < g.dim(); ++j) x[j] += hc[a] * hb[a][j];
      return x;
    };
    auto parts = [&](const RatVec& hc) { return jordan_split(restricted_ad(g, in_g(hc), cd.r)); };
    for (int trial = 0; trial < 10; ++trial) {
      RatVec x(hb.size()), y(hb.size());
      for (auto& c : x) c = Rational(num(rng), 4);
      for (auto& c : y) c = Rational(num(rng), 4);
      const auto z = bch(br, x, y, nilpotency_class(hal));
      const auto px = parts(x), py = parts(y), pz = parts(z);
      auto ex = [](const RatMatrix& m) { return expm(m.cast<double>()); };
      const auto beta = ex(px.semisimple) * ex(py.semisimple);
      const auto u = ex(px.nilpotent) * ex(py.nilpotent);
      EXPECT_LE(max_abs(beta - ex(pz.semisimple)), 1e-9 * max_abs(beta));
      EXPECT_LE(max_abs(u - ex(pz.nilpotent)), 1e-9 * max_abs(u));
    }
  }
}

TEST(Actions, BetaIsTrivialOnW) {
  const auto g = corpus::g5();
  const auto cd = cartan_subalgebra(g);
  ASSERT_EQ(cd.w.dim(), 1u);
  EXPECT_TRUE(jordan_split(restricted_ad(g, cd.w.basis_vector(0), cd.r)).semisimple.is_zero());
}

TEST(LogComparison, RandomTriples) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> loga(-20, 20), logc(0, 5);
  std::size_t violations = 0;
  for (int i = 0; i < 20000; ++i) {
    const double a = std::exp(loga(rng)), lc = logc(rng);
    const double b = a * std::exp(std::uniform_real_distribution<double>(-lc, lc)(rng));
    if (std::fabs(std::log1p(a) - std::log1p(b)) > lc + 1e-12) ++violations;
  }
  EXPECT_EQ(violations, 0u);
}

TEST(DeltaBound, GrowsLogarithmically) {
  // l(delta(v^{-1}v')) <= K (log(1+|v|) + log(1+|v'|) + 1) with one K
  // across scales, on g5 where delta is nontrivial.
  const GroupModel model(reduce_to_class_C(corpus::g5()));
  const auto rows = residual_study(model, Law::original, Law::reduced, 2, 16, 1400, 3);
  double k_max = 0, delta_max = 0;
  for (const auto& r : rows) {
    k_max = std::max(k_max, r.delta / (std::log1p(r.v_size) + std::log1p(r.v2_size) + 1));
    delta_max = std::max(delta_max, r.delta);
  }
  EXPECT_GT(delta_max, 5.0);
  EXPECT_LT(k_max, 2.0);
}

TEST(Residuals, QuasiTriangleHoldsWithFittedConstant) {
  const GroupModel model(reduce_to_class_C(corpus::gJ()));
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> scale(1, 4000);
  for (Law law : {Law::original, Law::reduced}) {
    double k = 0;
    for (int i = 0; i < 500; ++i) {
      const auto p = model.sample(Real(scale(rng)), rng), q = model.sample(Real(scale(rng)), rng),
                 s = model.sample(Real(scale(rng)), rng);
      const double lhs = dbl(model.distance(p, q, law));
      const double rhs = dbl(model.distance(p, s, law) + model.distance(s, q, law)) + 1;
      k = std::max(k, lhs / rhs);
    }
    EXPECT_LT(k, 3.0) << to_string(law);
  }
}

TEST(Residuals, G4HasNoResidual) {
  const GroupModel model(reduce_to_class_C(corpus::g4()));
  for (const auto& r : residual_study(model, Law::original, Law::reduced, 4, 10, 300, 1)) EXPECT_EQ(r.residual, 0);
}

TEST(Residuals, GJBoundedByLogarithms) {
  const GroupModel model(reduce_to_class_C(corpus::gJ()));
  const auto rows = residual_study(model, Law::original, Law::reduced, 4, 20, 3200, 7);
  const auto bins = summarize_residuals(rows);
  ASSERT_EQ(bins.size(), 16u);
  double lo = 1e300, hi = 0;
  for (const auto& b : bins) {
    lo = std::min(lo, b.k_estimate);
    hi = std::max(hi, b.k_estimate);
  }
  EXPECT_GT(lo, 0);
  EXPECT_LT(hi / lo, 2.0);
  EXPECT_GE(bins.front().max_relative, 4 * bins.back().max_relative);
}

TEST(Residuals, GradedLawOnFiliform5IsSublinear) {
  const GroupModel model(reduce_to_class_C(corpus::filiform5()));
  const auto bins = summarize_residuals(residual_study(model, Law::reduced, Law::graded, 4, 20, 3200, 5));
  EXPECT_GT(bins.front().max_relative, 0);
  EXPECT_GE(bins.front().max_relative, 4 * bins.back().max_relative);
}

TEST(Residuals, CsvLayout) {
  const GroupModel model(reduce_to_class_C(corpus::gJ()));
  std::ostringstream os;
  write_residual_csv(os, residual_study(model, Law::original, Law::reduced, 4, 6, 4, 42), 42);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "# seed=42");
  std::getline(is, line);
  EXPECT_EQ(line, "scale_bin,|p|,|q|,d1,d2,residual");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 4);
}

TEST(Residuals, DeterministicGivenSeed) {
  const GroupModel model(reduce_to_class_C(corpus::gJ()));
  std::ostringstream a, b;
  write_residual_csv(a, residual_study(model, Law::original, Law::reduced, 4, 8, 40, 9), 9);
  write_residual_csv(b, residual_study(model, Law::original, Law::reduced, 4, 8, 40, 9), 9);
  EXPECT_EQ(a.str(), b.str());
}
