#include <gtest/gtest.h>

#include <cmath>

#include "conegeom/cone_analysis.hpp"

using namespace conegeom;

namespace {

std::vector<std::pair<double, double>> profile(double (*q)(double), int k_min = 4, int k_max = 20, int per_bin = 40) {
  std::vector<std::pair<double, double>> out;
  Rng rng(0);
  std::uniform_real_distribution<double> unif(1, 2);
  for (int k = k_min; k < k_max; ++k)
    for (int i = 0; i < per_bin; ++i) {
      const double s = std::ldexp(unif(rng), k);
      out.emplace_back(s, q(s));
    }
  return out;
}

const SamplingPlan kPlan{4, 20, 40, 11};

ConeConstants constants_of(const RealMap& f, const SamplingPlan& plan = kPlan) {
  return estimate_cone_constants<double, double>(f, real_line(), real_line(), plan);
}

}  // namespace

TEST(SublinearFit, Examples) {
  EXPECT_EQ(sublinear_fit(profile([](double s) { return std::sqrt(s); })).verdict, Verdict::sublinear);
  EXPECT_EQ(sublinear_fit(profile([](double s) { return 0.1 * s; })).verdict, Verdict::not_sublinear);
  EXPECT_EQ(sublinear_fit(profile([](double) { return 0.0; })).verdict, Verdict::sublinear);
  EXPECT_EQ(sublinear_fit(profile([](double s) { return std::log1p(s); })).verdict, Verdict::sublinear);
}

TEST(SublinearFit, PlateauAfterDecayIsNotSublinear) {
  // Decays over the first bins, then stays at a constant fraction of s. The
  // top third is below half the bottom third, but not below half the middle.
  const auto w = sublinear_fit(profile([](double s) { return 0.05 * s + std::sqrt(s); }));
  EXPECT_LE(w.top, 0.5 * w.bottom);
  EXPECT_EQ(w.verdict, Verdict::not_sublinear);
}

TEST(SublinearFit, InconclusiveWhenUnderpopulated) {
  EXPECT_EQ(sublinear_fit(profile([](double s) { return std::sqrt(s); }, 4, 12)).verdict, Verdict::inconclusive);
  EXPECT_EQ(sublinear_fit(profile([](double s) { return std::sqrt(s); }, 4, 20, 20)).verdict,
            Verdict::inconclusive);
  EXPECT_THROW(sublinear_fit_strict(profile([](double s) { return s; }, 4, 8)), InsufficientData);
}

TEST(SublinearFit, EnvelopeIsNonIncreasingUpperBound) {
  const auto w = sublinear_fit(profile([](double s) { return std::sqrt(s) * (1 + std::sin(s)); }));
  for (std::size_t i = 0; i < w.bins.size(); ++i) {
    EXPECT_GE(w.bins[i].envelope, w.bins[i].bin_max);
    if (i + 1 < w.bins.size()) EXPECT_GE(w.bins[i].envelope, w.bins[i + 1].envelope);
  }
}

TEST(ConeDefined, Examples) {
  const auto x = real_line();
  EXPECT_TRUE((check_cone_defined<double, double>(gallery_map("identity"), x, x, kPlan).cone_defined()));
  EXPECT_TRUE((check_cone_defined<double, double>(gallery_map("x_plus_cbrt"), x, x, kPlan).cone_defined()));
  const auto sq = check_cone_defined<double, double>(gallery_map("square"), x, x, kPlan);
  EXPECT_FALSE(sq.condition1);
  EXPECT_FALSE(sq.cone_defined());
}

TEST(ConeDefined, FastOscillationFailsCondition2) {
  // x (2 + sin x): linearly bounded, but points at distance o(|x|) can have
  // images Theta(|x|) apart.
  const RealMap f = [](const double& x) { return x * (2 + std::sin(x)); };
  const auto x = real_line();
  const auto rep = check_cone_defined<double, double>(f, x, x, kPlan);
  EXPECT_TRUE(rep.condition1);
  EXPECT_FALSE(rep.condition2);
}

TEST(ConeConstants, Dilation) {
  const auto cc = constants_of(gallery_map("dilation2"));
  EXPECT_GE(cc.C_best, 1.9);
  EXPECT_LE(cc.C_best, 2.1);
  EXPECT_GE(cc.M_best, 1.9);
  EXPECT_LE(cc.M_best, 2.1);
  EXPECT_TRUE(cc.bilipschitz());
}

TEST(ConeConstants, CubeRootIsConeNull) {
  const auto cc = constants_of(gallery_map("cube_root"));
  EXPECT_EQ(cc.C_best, 0);
  EXPECT_TRUE(cc.cone_null());
  EXPECT_FALSE(cc.bilipschitz());
}

TEST(ConeConstants, SublinearPerturbationsHaveConstantOne) {
  for (const char* name : {"x_plus_sqrt", "x_plus_cbrt", "x_plus_log"}) {
    const auto cc = constants_of(gallery_map(name));
    EXPECT_NEAR(cc.C_best, 1.0, 0.05) << name;
    EXPECT_NEAR(cc.M_best, 1.0, 0.05) << name;
    EXPECT_LE(cc.M_best, cc.C_best) << name;
    EXPECT_TRUE(cc.bilipschitz()) << name;
  }
}

TEST(ConeEquivalent, Examples) {
  const auto x = real_line();
  const auto id = gallery_map("identity");
  EXPECT_EQ((check_cone_equivalent<double, double>(id, gallery_map("x_plus_log"), x, x, kPlan).verdict),
            Verdict::sublinear);
  EXPECT_EQ((check_cone_equivalent<double, double>(id, gallery_map("dilation1.01"), x, x, kPlan).verdict),
            Verdict::not_sublinear);
  EXPECT_EQ((check_cone_equivalent<double, double>(id, id, x, x, kPlan).verdict), Verdict::sublinear);
  EXPECT_EQ((check_cone_equivalent<double, double>(id, gallery_map("x_plus_sqrt"), x, x, kPlan).verdict),
            Verdict::sublinear);
}

TEST(ConeSurjective, Examples) {
  const auto x = real_line();
  const auto net = power_net(2, 12000, 0.125);
  EXPECT_TRUE((check_cone_surjective<double, double>(gallery_map("identity"), net, x, kPlan).image_dense()));
  // Dense image, yet the map is cone-null, so it is no cone equivalence.
  EXPECT_TRUE((check_cone_surjective<double, double>(gallery_map("cube_root"), power_net(6, 12000, 0.125), x, kPlan)
                   .image_dense()));
  EXPECT_FALSE(constants_of(gallery_map("cube_root")).bilipschitz());

  const std::function<Point2(const double&)> axis = [](const double& t) { return Point2{t, 0}; };
  EXPECT_FALSE((check_cone_surjective<double, Point2>(axis, net, euclidean_plane(), kPlan).image_dense()));
}

TEST(ConeSurjective, CoarseNetIsRejected) {
  const auto x = real_line();
  EXPECT_THROW((check_cone_surjective<double, double>(gallery_map("identity"), geometric_net(62, 2), x, kPlan)),
               NetTooCoarse);
}

TEST(Properties, ScaleInvariance) {
  const auto x = real_line();
  for (const char* name : {"dilation2", "x_plus_sqrt", "cube_root"}) {
    const auto base = constants_of(gallery_map(name));
    for (auto [tx, ty] : {std::pair{0.1, 0.1}, {10.0, 10.0}, {0.5, 4.0}, {3.0, 0.2}}) {
      const auto cc = estimate_cone_constants<double, double>(gallery_map(name), rescaled(x, tx), rescaled(x, ty),
                                                              kPlan);
      const double ratio = ty / tx;
      EXPECT_NEAR(cc.C_best, base.C_best * ratio, 0.05 * base.C_best * ratio + 1e-12) << name;
      EXPECT_NEAR(cc.M_best, base.M_best * ratio, 0.05 * base.M_best * ratio + 1e-12) << name;
      EXPECT_EQ(cc.bilipschitz(), base.bilipschitz()) << name;
      EXPECT_EQ(cc.cone_null(), base.cone_null()) << name;
    }
  }
}

TEST(Properties, CompositionBound) {
  const std::vector<std::string> names{"dilation2", "x_plus_sqrt", "x_plus_log", "identity"};
  for (const auto& a : names)
    for (const auto& b : names) {
      const auto f = gallery_map(a), g = gallery_map(b);
      const RealMap gf = [f, g](const double& x) { return g(f(x)); };
      const double c = constants_of(f).C_best, c2 = constants_of(g).C_best;
      EXPECT_LE(constants_of(gf).C_best, 1.1 * c * c2) << b << " o " << a;
    }
}

TEST(Properties, Deterministic) {
  const auto a = constants_of(gallery_map("x_plus_sqrt"));
  const auto b = constants_of(gallery_map("x_plus_sqrt"));
  EXPECT_EQ(a.C_best, b.C_best);
  EXPECT_EQ(a.M_best, b.M_best);
  EXPECT_EQ(a.lipschitz_witness.verdict, b.lipschitz_witness.verdict);
}
