#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include "conegeom/cone_analysis.hpp"
#include "conegeom/group_model.hpp"

namespace conegeom {

/// R x V under one of the laws, as a pointed space (base point: identity).
/// The model must outlive the returned space.
inline PointedSpace<GroupElement> group_space(const GroupModel& model, Law law) {
  PointedSpace<GroupElement> x;
  x.distance = [&model, law](const GroupElement& p, const GroupElement& q) {
    return model.distance(p, q, law).convert_to<double>();
  };
  x.base = GroupElement{RealVec(model.radical_dim(), Real(0)), RealVec(model.quotient_dim(), Real(0)), law};
  x.sample = [&model, law](double s, Rng& rng) { return model.sample(Real(s), rng, law); };
  x.name = to_string(law);
  return x;
}

/// Coordinate identity R x V -> R x V, retagging the law.
inline std::function<GroupElement(const GroupElement&)> coordinate_identity(Law to) {
  return [to](const GroupElement& p) { return GroupElement{p.r, p.v, to}; };
}

/// Cone constants of psi from (R x V, d_1) to (R x V, d_2).
inline ConeConstants psi_constants(const GroupModel& model, const SamplingPlan& plan) {
  const std::function<GroupElement(const GroupElement&)> f = [](const GroupElement& p) { return psi(p); };
  return estimate_cone_constants(f, group_space(model, Law::original), group_space(model, Law::reduced), plan);
}

/// Residual |d_a - d_b| over dyadic scale bins, with the two checks used for
/// a composite cone equivalence: (a) one constant K bounds the residual by
/// the log sizes of the V parts across bins, (b) the relative residual falls.
struct ResidualReport {
  std::vector<ResidualSample> rows;
  std::vector<ResidualBin> bins;
  bool identically_zero = false;
  double k_ratio = 0;   // max / min per-bin K estimate
  double decrease = 0;  // first-bin / last-bin max relative residual
  SublinearWitness sublinear;

  bool bounded_by_logs() const { return identically_zero || k_ratio < 2; }
  bool relative_decreases() const { return identically_zero || decrease >= 4; }
};

inline ResidualReport residual_report(const GroupModel& model, Law a, Law b, int k_min, int k_max, std::size_t pairs,
                                      std::uint64_t seed) {
  ResidualReport rep;
  rep.rows = residual_study(model, a, b, k_min, k_max, pairs, seed);
  rep.bins = summarize_residuals(rep.rows);
  rep.identically_zero =
      std::all_of(rep.rows.begin(), rep.rows.end(), [](const ResidualSample& r) { return r.residual == 0; });
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& bin : rep.bins) {
    lo = std::min(lo, bin.k_estimate);
    hi = std::max(hi, bin.k_estimate);
  }
  rep.k_ratio = lo > 0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!rep.bins.empty() && rep.bins.back().max_relative > 0)
    rep.decrease = rep.bins.front().max_relative / rep.bins.back().max_relative;
  else if (!rep.bins.empty() && rep.bins.front().max_relative > 0)
    rep.decrease = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rep.rows) pts.emplace_back(r.p_size + r.q_size, r.residual);
  rep.sublinear = sublinear_fit(pts);
  return rep;
}

}  // namespace conegeom
