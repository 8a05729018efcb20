// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "conegeom/cartan_split.hpp"
#include "conegeom/cone_construct.hpp"
#include "conegeom/corpus.hpp"
#include "conegeom/pipeline.hpp"
#include "conegeom/ultralimit.hpp"
#include "oracles.hpp"

using namespace conegeom;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<LieAlgebra> base_inputs() {
  std::vector<LieAlgebra> gs{corpus::heis3(), corpus::gJ(), corpus::g4()};
  for (std::uint64_t s = 0; s < 20; ++s) gs.push_back(corpus::random_triangulable(1000 + s, 6));
  return gs;
}

// Every nilpotent algebra reachable from an input: itself, its radical, and
// its quotient by the radical.
std::vector<LieAlgebra> nilpotent_pieces(const LieAlgebra& g) {
  std::vector<LieAlgebra> out;
  if (is_nilpotent(g)) out.push_back(g);
  const auto r = exponential_radical(g);
  if (!r.is_zero()) out.push_back(g.restrict_to(r));
  out.push_back(quotient(g, r).algebra);
  return out;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t checked = 0;
  for (const auto& g : base_inputs()) {
    const auto impl = lower_central_series(g);
    const auto ref = oracle::lower_central_series(g);
    bool same = impl.size() == ref.size();
    for (std::size_t i = 0; same && i < impl.size(); ++i) same = oracle::same_span(ref[i], impl[i]);
    o.require(same, "lower central series differs on input " + std::to_string(checked));
    o.require(oracle::same_span(ref.back(), exponential_radical(g)), "radical differs on input " + std::to_string(checked));
    ++checked;
  }
  const double t = seconds_since(t0);
  o.require(t < 5, "runtime");
  o.detail << checked << " algebras, " << t << " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto h = corpus::heis3();
  o.require(associated_graded(h).algebra == h, "gr(heis3) != heis3");
  std::size_t pieces = 0;
  for (const auto& g : base_inputs())
    for (const auto& n : nilpotent_pieces(g)) {
      const auto gr = associated_graded(n);
      const auto& c = gr.algebra.constants();
      for (std::size_t i = 0; i < n.dim(); ++i)
        for (std::size_t j = 0; j < n.dim(); ++j)
          for (std::size_t k = 0; k < n.dim(); ++k)
            if (c(i, j, k) != 0) o.require(gr.weights[k] == gr.weights[i] + gr.weights[j], "layer compatibility");
      ++pieces;
    }
  o.detail << pieces << " nilpotent algebras graded";
  return o;
}

std::vector<std::vector<long double>> scaled(const RatMatrix& m, long double t) {
  std::vector<std::vector<long double>> out(m.rows(), std::vector<long double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = t * m(i, j).convert_to<long double>();
  return out;
}

Outcome criterion3() {
  Outcome o;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unif(-3, 3);
  std::size_t gens = 0, params = 0;
  for (const auto& g : base_inputs()) {
    const auto as = build_actions(cartan_subalgebra(g), g);
    const std::size_t d = as.radical_dim();
    for (std::size_t i = 0; i < as.generator_count(); ++i) {
      const auto& s = as.semisimple[i];
      const auto& n = as.nilpotent[i];
      o.require(s + n == as.alpha[i], "S + N = alpha");
      o.require(s * n == n * s, "SN = NS");
      o.require(matrix_power(n, d).is_zero(), "N nilpotent");
      const Poly p = characteristic_polynomial(s).squarefree_part();
      o.require(evaluate(p, s).is_zero() && count_distinct_real_roots(p) == p.degree(), "S real-diagonalizable");
      ++gens;
    }
    if (d == 0 || as.generator_count() == 0) continue;
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t i = trial % as.generator_count();
      const long double t = unif(rng);
      const auto ea = oracle::expm(scaled(as.alpha[i], t));
      const auto es = oracle::expm(scaled(as.semisimple[i], t));
      const auto en = oracle::expm(scaled(as.nilpotent[i], t));
      long double scale = 0, err = 0;
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          long double prod = 0;
          for (std::size_t k = 0; k < d; ++k) prod += es[a][k] * en[k][b];
          scale = std::max(scale, std::fabs(ea[a][b]));
          err = std::max(err, std::fabs(prod - ea[a][b]));
        }
      o.require(err <= 1e-9 * scale, "exp(S)exp(N) = exp(alpha)");
      ++params;
    }
  }
  o.detail << gens << " generators exact, " << params << " sampled parameters";
  return o;
}

Outcome criterion4() {
  Outcome o;
  std::vector<double> grid;
  for (int i = 0; i <= 200; ++i) grid.push_back(-1000 + 10.0 * i);
  const auto abs_len = [](const std::vector<double>& c) {
    double s = 0;
    for (double x : c) s += x * x;
    return std::sqrt(s);
  };
  double worst = 0;
  std::size_t cases = 0;
  for (const auto& g : base_inputs()) {
    const auto as = build_actions(cartan_subalgebra(g), g);
    if (as.radical_dim() == 0) continue;
    try {
      const auto rep = unipotent_poly_bound(as, grid, abs_len);
      o.require(rep.c_upper <= 1.1 * rep.c_lower, "fitted C grows between grid halves");
      if (rep.c_lower > 0) worst = std::max(worst, rep.c_upper / rep.c_lower);
    } catch (const BoundViolated& e) {
      o.require(false, e.what());
    }
    ++cases;
  }
  // gJ: u(t) = [[1, t], [0, 1]], max entry max(1, |t|). The ratio to 1 + |t|
  // is 1 at t = 0 and peaks at 1000/1001 on the upper half of the grid.
  const auto gj = build_actions(cartan_subalgebra(corpus::gJ()), corpus::gJ());
  const auto rep = unipotent_poly_bound(gj, grid, abs_len);
  o.require(rep.c_all == 1.0, "gJ constant");
  o.require(std::fabs(rep.c_upper - 1000.0 / 1001.0) < 1e-12, "gJ upper-half constant");
  o.detail << cases << " algebras, max c_upper/c_lower = " << worst << ", gJ C = " << rep.c_all;
  return o;
}

Outcome residual_criterion(const char* name, const LieAlgebra& g, Law a, Law b, bool need_log_bound) {
  Outcome o;
  const GroupModel model(reduce_to_class_C(g));
  const auto rep = residual_report(model, a, b, 4, 20, 10000, 5);
  o.require(rep.rows.size() >= 10000, "pair count");
  o.require(rep.bins.size() == 16, "bins spanning 2^4..2^20");
  if (need_log_bound) o.require(rep.bounded_by_logs(), "(a) per-bin K within 2x");
  o.require(rep.relative_decreases(), "(b) relative residual falls 4x");
  if (!need_log_bound)
    o.require(rep.identically_zero || rep.sublinear.verdict == Verdict::sublinear, "residual sublinear");
  o.detail << name << ": ";
  if (rep.identically_zero) o.detail << "residual identically 0 (degenerate); ";
  else o.detail << "K ratio " << rep.k_ratio << ", decrease " << rep.decrease << "x, " << to_string(rep.sublinear.verdict) << "; ";
  return o;
}

Outcome merge(Outcome a, Outcome b) {
  a.pass = a.pass && b.pass;
  a.detail << b.detail.str();
  return a;
}

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  auto o = merge(residual_criterion("gJ", corpus::gJ(), Law::original, Law::reduced, true),
                  residual_criterion("g4", corpus::g4(), Law::original, Law::reduced, true));
  const double t = seconds_since(t0);
  o.require(t < 60, "runtime");
  o.detail << t << " s";
  return o;
}

Outcome criterion6() {
  Outcome o;
  const GroupModel model(reduce_to_class_C(corpus::gJ()));
  const auto cc = psi_constants(model, SamplingPlan{4, 20, 40, 6});
  o.require(cc.C_best >= 0.95 && cc.C_best <= 1.05, "C_best in [0.95, 1.05]");
  o.require(cc.M_best >= 0.95 && cc.M_best <= 1.05, "M_best in [0.95, 1.05]");
  o.detail << "C_best " << cc.C_best << ", M_best " << cc.M_best;
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto run = [](const std::string& name) {
    const auto s = scenario_preset(name);
    return classify_case(s.filter, s.v);
  };
  const auto c1 = run("case1");
  o.require(c1.case_id == 1 && c1.cone_points == std::vector<Rational>{0} && c1.best_lipschitz == Rational(0),
            "case 1");
  const auto c2 = run("case2");
  o.require(c2.case_id == 2 && c2.cone_points.size() == 2 && c2.best_lipschitz == Rational(1), "case 2");
  o.require(c2.embedding_isometric, "case 2 embedding");
  o.detail << "case1 L=0, case2 L=1";
  for (long lambda : {1L, 2L, 5L, 10L}) {
    const auto c3 = run("case3_l" + std::to_string(lambda));
    const Rational l(lambda);
    const bool ok = c3.case_id == 3 && c3.cone_points.size() == 3 && c3.best_lipschitz == l &&
                    c3.cone_points[2] == (1 + 1 / (l * l)) * c3.cone_points[1] && c3.lambda_relation_holds &&
                    c3.embedding_isometric;
    o.require(ok, "case 3 with lambda " + std::to_string(lambda));
    o.detail << ", case3 lambda=" << lambda << " L=" << (c3.best_lipschitz ? c3.best_lipschitz->str() : "?");
  }
  const double t = seconds_since(t0);
  o.require(t < 10, "runtime");
  o.detail << ", " << t << " s";
  return o;
}

Outcome criterion8() {
  Outcome o;
  const SamplingPlan plan{4, 20, 40, 11};
  const auto x = real_line();
  const auto consts = [&](const char* name) { return estimate_cone_constants<double, double>(gallery_map(name), x, x, plan); };
  const auto cube = consts("cube_root");
  o.require(cube.cone_null(), "x^(1/3) cone-null");
  const RealMap id = [](const double& t) { return t; };
  const auto eq = check_cone_equivalent<double, double>(gallery_map("x_plus_sqrt"), id, x, x, plan);
  o.require(eq.verdict == Verdict::sublinear, "x + |x|^(1/2) equivalent to identity");
  const auto dil = consts("dilation2");
  o.require(dil.C_best >= 1.9 && dil.C_best <= 2.1 && dil.M_best >= 1.9 && dil.M_best <= 2.1, "dilation constants");
  const auto sq = check_cone_defined<double, double>(gallery_map("square"), x, x, plan);
  o.require(!sq.condition1, "x^2 fails condition 1");
  o.detail << "cube_root C=" << cube.C_best << ", dilation2 C=" << dil.C_best << " M=" << dil.M_best
           << ", x+sqrt " << to_string(eq.verdict) << ", square condition1=" << sq.condition1;
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<long double> log_a(-30, 30), log_c(0, 8), unit(-1, 1);
  std::size_t violations = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const long double a = std::exp(log_a(rng));
    const long double lc = log_c(rng);
    // Hypothesis |log a - log b| <= log c; every tenth triple sits on the boundary.
    const long double shift = (i % 10 == 0) ? (i % 20 == 0 ? lc : -lc) : unit(rng) * lc;
    const long double b = a * std::exp(shift);
    if (std::fabs(std::log1p(a) - std::log1p(b)) > lc * (1 + 1e-15L) + 1e-18L) ++violations;
  }
  o.require(violations == 0, "violations");
  o.detail << n << " triples, " << violations << " violations";
  return o;
}

Outcome criterion10() {
  return merge(residual_criterion("g4 original->graded", corpus::g4(), Law::original, Law::graded, true),
                residual_criterion("filiform_jordan original->graded", corpus::filiform_jordan(), Law::original,
                                   Law::graded, false));
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"series/radical oracle", criterion1},  {"graded correctness", criterion2},
      {"Jordan split", criterion3},           {"unipotent polynomial bound", criterion4},
      {"residual bound", criterion5},         {"psi constants", criterion6},
      {"ultralimit table", criterion7},       {"map gallery", criterion8},
      {"log(1+x) comparison", criterion9},            {"composite with graded model", criterion10},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.str().c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
