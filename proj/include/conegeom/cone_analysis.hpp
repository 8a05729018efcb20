#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "conegeom/errors.hpp"

namespace conegeom {

using Rng = std::mt19937_64;

/// A quasi-metric space with a base point and a sampler producing points x
/// with |x| = d(x, base) close to a requested scale. `near` (optional)
/// returns a point at distance about `radius` from x.
template <typename P>
struct PointedSpace {
  std::function<double(const P&, const P&)> distance;
  P base;
  std::function<P(double, Rng&)> sample;
  std::function<P(const P&, double, Rng&)> near;
  std::string name;

  double norm(const P& x) const { return distance(x, base); }
};

/// A copy of X with every distance multiplied by t (samplers adjusted so that
/// requested scales refer to the new distance).
template <typename P>
PointedSpace<P> rescaled(const PointedSpace<P>& x, double t) {
  PointedSpace<P> y = x;
  y.distance = [d = x.distance, t](const P& a, const P& b) { return t * d(a, b); };
  y.sample = [s = x.sample, t](double scale, Rng& rng) { return s(scale / t, rng); };
  if (x.near) y.near = [n = x.near, t](const P& p, double r, Rng& rng) { return n(p, r / t, rng); };
  y.name = x.name + " (scaled)";
  return y;
}

enum class Verdict { sublinear, not_sublinear, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::sublinear: return "sublinear";
    case Verdict::not_sublinear: return "not-sublinear";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct SublinearBin {
  int k = 0;               // scales in [2^k, 2^{k+1})
  std::size_t count = 0;
  double bin_max = 0;      // max residual / scale
  double envelope = 0;     // non-increasing upper fit
};

struct SublinearWitness {
  std::vector<SublinearBin> bins;  // populated bins only, increasing k
  Verdict verdict = Verdict::inconclusive;
  double bottom = 0, middle = 0, top = 0;  // max of bin_max over each third
};

struct SublinearOptions {
  std::size_t min_bins = 10;
  std::size_t min_per_bin = 30;
  double zero_clamp = 1e-9;
};

/// Dyadic-bin test for q(s)/s -> 0. The verdict is sublinear when the top
/// third of the bins is at most half of both the bottom and the middle third.
inline SublinearWitness sublinear_fit(const std::vector<std::pair<double, double>>& samples,
                                      const SublinearOptions& opt = {}) {
  std::map<int, SublinearBin> by_k;
  for (const auto& [scale, residual] : samples) {
    if (!(scale > 0) || !std::isfinite(scale)) continue;
    const int k = static_cast<int>(std::floor(std::log2(scale)));
    auto& b = by_k[k];
    b.k = k;
    ++b.count;
    double r = std::max(0.0, residual) / scale;
    if (r <= opt.zero_clamp) r = 0;
    b.bin_max = std::max(b.bin_max, r);
  }
  SublinearWitness w;
  for (const auto& [k, b] : by_k)
    if (b.count >= opt.min_per_bin) w.bins.push_back(b);
  double run = 0;
  for (auto it = w.bins.rbegin(); it != w.bins.rend(); ++it) {
    run = std::max(run, it->bin_max);
    it->envelope = run;
  }
  if (w.bins.size() < opt.min_bins) return w;
  const std::size_t n = w.bins.size(), third = n / 3;
  auto range_max = [&](std::size_t lo, std::size_t hi) {
    double m = 0;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, w.bins[i].bin_max);
    return m;
  };
  w.bottom = range_max(0, third);
  w.middle = range_max(third, n - third);
  w.top = range_max(n - third, n);
  w.verdict = (w.top <= 0.5 * w.bottom && w.top <= 0.5 * w.middle) ? Verdict::sublinear : Verdict::not_sublinear;
  return w;
}

/// Same as sublinear_fit but throws InsufficientData instead of returning an
/// inconclusive verdict.
inline SublinearWitness sublinear_fit_strict(const std::vector<std::pair<double, double>>& samples,
                                             const SublinearOptions& opt = {}) {
  auto w = sublinear_fit(samples, opt);
  if (w.verdict == Verdict::inconclusive) throw InsufficientData("fewer than 10 populated dyadic bins");
  return w;
}

struct SamplingPlan {
  int k_min = 4;
  int k_max = 20;             // bins k_min .. k_max-1
  std::size_t per_bin = 40;
  std::uint64_t seed = 0;
};

/// Pairs (x, y) with |x| + |y| spread over the dyadic bins of the plan.
template <typename P>
std::vector<std::pair<P, P>> sample_pairs(const PointedSpace<P>& x, const SamplingPlan& plan) {
  Rng rng(plan.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::pair<P, P>> out;
  for (int k = plan.k_min; k < plan.k_max; ++k)
    for (std::size_t i = 0; i < plan.per_bin; ++i) {
      const double total = std::ldexp(1.0 + unif(rng), k);
      const double frac = 0.1 + 0.8 * unif(rng);
      P a = x.sample(total * frac, rng);
      P b = x.sample(total * (1 - frac), rng);
      out.emplace_back(std::move(a), std::move(b));
    }
  return out;
}

template <typename P>
std::vector<P> sample_points(const PointedSpace<P>& x, const SamplingPlan& plan) {
  Rng rng(plan.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<P> out;
  for (int k = plan.k_min; k < plan.k_max; ++k)
    for (std::size_t i = 0; i < plan.per_bin; ++i) out.push_back(x.sample(std::ldexp(1.0 + unif(rng), k), rng));
  return out;
}

struct ConeDefinedReport {
  bool condition1 = false;  // |f(x)| <= C |x| + C
  bool condition2 = false;  // near pairs stay near
  bool condition2_tested = false;
  std::vector<SublinearBin> growth;          // bin max of |f(x)| / |x|
  std::vector<std::pair<int, double>> bands; // (j, max d(fx,fy)/(|x|+|y|)) for ratio in [2^-j-1, 2^-j)
  bool cone_defined() const { return condition1 && (condition2 || !condition2_tested); }
};

template <typename P, typename Q>
ConeDefinedReport check_cone_defined(const std::function<Q(const P&)>& f, const PointedSpace<P>& x,
                                     const PointedSpace<Q>& y, const SamplingPlan& plan, int bands = 8) {
  ConeDefinedReport rep;
  std::vector<std::pair<double, double>> growth;
  for (const auto& p : sample_points(x, plan)) {
    const double s = x.norm(p);
    growth.emplace_back(s, y.norm(f(p)));
  }
  SublinearOptions raw;
  raw.zero_clamp = -1;
  const auto w = sublinear_fit(growth, raw);
  if (w.bins.size() < raw.min_bins) throw InsufficientData("cone-defined condition 1");
  rep.growth = w.bins;
  // |f(x)|/|x| must not keep growing: the top third may not exceed twice the
  // bottom third.
  rep.condition1 = w.top <= 2 * w.bottom;

  if (x.near) {
    rep.condition2_tested = true;
    Rng rng(plan.seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::map<int, double> band_max;
    const int k_lo = (plan.k_min + plan.k_max) / 2;
    for (int j = 1; j <= bands; ++j)
      for (int k = k_lo; k < plan.k_max; ++k)
        for (std::size_t i = 0; i < plan.per_bin; ++i) {
          const P a = x.sample(std::ldexp(1.0 + unif(rng), k), rng);
          const double target = std::ldexp(1.0 + unif(rng), -j - 1) * 2 * x.norm(a);
          const P b = x.near(a, std::max(0.0, target - 1), rng);
          const double s = x.norm(a) + x.norm(b);
          const double ratio = (x.distance(a, b) + 1) / s;
          const int band = static_cast<int>(std::floor(-std::log2(ratio)));
          if (band < 1 || band > bands) continue;
          auto& m = band_max[band];
          m = std::max(m, y.distance(f(a), f(b)) / s);
        }
    for (const auto& [j, m] : band_max) rep.bands.emplace_back(j, m);
    rep.condition2 = !rep.bands.empty() &&
                     (rep.bands.back().second <= 1e-9 || rep.bands.back().second <= 0.5 * rep.bands.front().second);
  }
  return rep;
}

/// Cached pair data for constant estimation: a = d_X(x,y), b = d_Y(fx,fy),
/// s = |x| + |y|.
struct PairData {
  double a, b, s;
};

template <typename P, typename Q>
std::vector<PairData> pair_data(const std::function<Q(const P&)>& f, const PointedSpace<P>& x,
                                const PointedSpace<Q>& y, const SamplingPlan& plan) {
  std::vector<PairData> out;
  for (const auto& [p, q] : sample_pairs(x, plan)) {
    const Q fp = f(p), fq = f(q);
    out.push_back({x.distance(p, q), y.distance(fp, fq), x.norm(p) + x.norm(q)});
  }
  return out;
}

struct ConeConstants {
  double C_best = std::numeric_limits<double>::infinity();
  double M_best = 0;
  SublinearWitness lipschitz_witness, expansive_witness;
  std::vector<std::pair<int, std::size_t>> bin_counts;

  bool bilipschitz() const { return M_best > 0 && M_best <= C_best && std::isfinite(C_best); }
  bool cone_null() const { return C_best == 0; }
};

inline ConeConstants estimate_cone_constants(const std::vector<PairData>& data, int iterations = 20) {
  auto upper_residuals = [&](double c) {
    std::vector<std::pair<double, double>> r;
    for (const auto& d : data) r.emplace_back(d.s, d.b - c * d.a);
    return r;
  };
  auto lower_residuals = [&](double m) {
    std::vector<std::pair<double, double>> r;
    for (const auto& d : data) r.emplace_back(d.s, m * d.a - d.b);
    return r;
  };
  ConeConstants cc;
  double hi = 0;
  for (const auto& d : data)
    if (d.a > 0) hi = std::max(hi, d.b / d.a);
  const auto w_hi = sublinear_fit(upper_residuals(hi));
  if (w_hi.verdict == Verdict::inconclusive) throw InsufficientData("cone constants");
  for (const auto& b : w_hi.bins) cc.bin_counts.emplace_back(b.k, b.count);

  if (sublinear_fit(upper_residuals(0)).verdict == Verdict::sublinear) {
    cc.C_best = 0;
  } else if (w_hi.verdict == Verdict::sublinear) {
    double lo = 0, up = hi;
    for (int i = 0; i < iterations; ++i) {
      const double mid = 0.5 * (lo + up);
      if (sublinear_fit(upper_residuals(mid)).verdict == Verdict::sublinear) up = mid;
      else lo = mid;
    }
    cc.C_best = up;
  }
  cc.lipschitz_witness = sublinear_fit(upper_residuals(std::isfinite(cc.C_best) ? cc.C_best : hi));

  // M = 0 always passes. The search is capped at C_best: a passing M above
  // C_best only reflects the resolution of the sublinear test.
  const double m_cap = std::isfinite(cc.C_best) ? std::min(hi, cc.C_best) : hi;
  double lo = 0, up = m_cap;
  if (sublinear_fit(lower_residuals(m_cap)).verdict == Verdict::sublinear) {
    lo = m_cap;
  } else {
    for (int i = 0; i < iterations; ++i) {
      const double mid = 0.5 * (lo + up);
      if (sublinear_fit(lower_residuals(mid)).verdict == Verdict::sublinear) lo = mid;
      else up = mid;
    }
  }
  cc.M_best = lo;
  cc.expansive_witness = sublinear_fit(lower_residuals(lo));
  return cc;
}

template <typename P, typename Q>
ConeConstants estimate_cone_constants(const std::function<Q(const P&)>& f, const PointedSpace<P>& x,
                                      const PointedSpace<Q>& y, const SamplingPlan& plan) {
  return estimate_cone_constants(pair_data(f, x, y, plan));
}

/// Sublinear fit of d(f1(x), f2(x)) against |x|.
template <typename P, typename Q>
SublinearWitness check_cone_equivalent(const std::function<Q(const P&)>& f1, const std::function<Q(const P&)>& f2,
                                       const PointedSpace<P>& x, const PointedSpace<Q>& y,
                                       const SamplingPlan& plan) {
  std::vector<std::pair<double, double>> r;
  for (const auto& p : sample_points(x, plan)) r.emplace_back(x.norm(p), y.distance(f1(p), f2(p)));
  return sublinear_fit_strict(r);
}

struct SurjectivityReport {
  SublinearWitness witness;
  bool image_dense() const { return witness.verdict == Verdict::sublinear; }
};

/// Sublinear fit of d(y, f(net)) against |y| for y sampled in Y. The image net
/// must be finer than a tenth of the scale around every sampled y.
template <typename P, typename Q>
SurjectivityReport check_cone_surjective(const std::function<Q(const P&)>& f, const std::vector<P>& domain_net,
                                         const PointedSpace<Q>& y, const SamplingPlan& plan) {
  std::vector<Q> image;
  image.reserve(domain_net.size());
  for (const auto& p : domain_net) image.push_back(f(p));
  if (image.size() < 2) throw InsufficientData("image net");
  std::vector<std::pair<double, double>> r;
  for (const auto& q : sample_points(y, plan)) {
    const double s = y.norm(q);
    std::size_t best = 0;
    double dbest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < image.size(); ++i) {
      const double d = y.distance(q, image[i]);
      if (d < dbest) {
        dbest = d;
        best = i;
      }
    }
    double spacing = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < image.size(); ++i)
      if (i != best) spacing = std::min(spacing, y.distance(image[best], image[i]));
    if (spacing > s / 10) throw NetTooCoarse(static_cast<int>(std::floor(std::log2(s))), spacing);
    r.emplace_back(s, dbest);
  }
  return {sublinear_fit_strict(r)};
}

// Spaces and maps used by the gallery.

inline PointedSpace<double> real_line() {
  PointedSpace<double> x;
  x.distance = [](double a, double b) { return std::fabs(a - b); };
  x.base = 0;
  x.sample = [](double s, Rng& rng) { return (rng() & 1) ? s : -s; };
  x.near = [](double p, double r, Rng& rng) { return (rng() & 1) ? p + r : p - r; };
  x.name = "R";
  return x;
}

using Point2 = std::pair<double, double>;

inline PointedSpace<Point2> euclidean_plane() {
  PointedSpace<Point2> x;
  x.distance = [](const Point2& a, const Point2& b) { return std::hypot(a.first - b.first, a.second - b.second); };
  x.base = {0, 0};
  x.sample = [](double s, Rng& rng) {
    const double th = std::uniform_real_distribution<double>(0, 2 * M_PI)(rng);
    return Point2{s * std::cos(th), s * std::sin(th)};
  };
  x.near = [](const Point2& p, double r, Rng& rng) {
    const double th = std::uniform_real_distribution<double>(0, 2 * M_PI)(rng);
    return Point2{p.first + r * std::cos(th), p.second + r * std::sin(th)};
  };
  x.name = "R^2";
  return x;
}

/// Geometric net {0, +-2^{i/density}} of the real line up to 2^max_log.
inline std::vector<double> geometric_net(int max_log, int density) {
  std::vector<double> net{0.0};
  for (int i = 0; i <= max_log * density; ++i) {
    const double v = std::exp2(static_cast<double>(i) / density);
    net.push_back(v);
    net.push_back(-v);
  }
  return net;
}

/// Net {+-(i h)^p : 0 <= i <= n}; spacing near x grows like |x|^{1-1/p}.
inline std::vector<double> power_net(double p, int n, double h = 1) {
  std::vector<double> net{0.0};
  for (int i = 1; i <= n; ++i) {
    const double v = std::pow(i * h, p);
    net.push_back(v);
    net.push_back(-v);
  }
  return net;
}

using RealMap = std::function<double(const double&)>;

struct GalleryEntry {
  std::string name;
  RealMap f;
};

inline std::vector<GalleryEntry> map_gallery() {
  return {
      {"identity", [](const double& x) { return x; }},
      {"dilation2", [](const double& x) { return 2 * x; }},
      {"cube_root", [](const double& x) { return std::cbrt(x); }},
      {"x_plus_sqrt", [](const double& x) { return x + std::sqrt(std::fabs(x)); }},
      {"x_plus_cbrt", [](const double& x) { return x + std::cbrt(x); }},
      {"x_plus_log", [](const double& x) { return x + std::log1p(std::fabs(x)); }},
      {"dilation1.01", [](const double& x) { return 1.01 * x; }},
      {"square", [](const double& x) { return x * x; }},
  };
}

inline RealMap gallery_map(const std::string& name) {
  for (auto& e : map_gallery())
    if (e.name == name) return e.f;
  throw Error("unknown gallery map: " + name);
}

}  // namespace conegeom
