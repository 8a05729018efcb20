#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "conegeom/cone_construct.hpp"
#include "conegeom/lie_io.hpp"
#include "conegeom/pipeline.hpp"
#include "conegeom/ultralimit.hpp"

using namespace conegeom;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kRefuted = 1, kInconclusive = 2, kInputError = 3 };

struct RunConfig {
  std::string subcommand;
  std::string algebra;
  std::uint64_t seed = 0;
  std::string scales = "4,20";
  std::size_t samples = 10000;
  std::string report;
  std::string format = "json";
  std::string csv;
  std::string out;
  std::string map = "identity";
  std::string scenario = "tower";
  std::string filter = "case3_l5";
  std::string v;
  long horizon = 0;
  std::string target = "reduced";
};

std::uint64_t default_seed() {
  if (const char* s = std::getenv("CONEGEOM_SEED")) return std::stoull(s);
  return 0;
}

/// key = value lines, '#' comments. Unknown keys are input errors.
std::map<std::string, std::pair<std::string, std::size_t>> read_config(const std::string& path,
                                                                        const std::set<std::string>& known) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::map<std::string, std::pair<std::string, std::size_t>> out;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = hash == std::string::npos ? line : line.substr(0, hash);
    if (trim(body).empty()) continue;
    const auto eq = body.find('=');
    const std::size_t col = body.find_first_not_of(" \t") + 1;
    if (eq == std::string::npos) throw ParseError(lineno, col, "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    if (!known.count(key)) throw ParseError(lineno, col, "unknown key '" + key + "'");
    out[key] = {trim(body.substr(eq + 1)), lineno};
  }
  return out;
}

std::pair<int, int> parse_scales(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw Error("scales must be k_min,k_max");
  const int lo = std::stoi(s.substr(0, comma)), hi = std::stoi(s.substr(comma + 1));
  if (lo < 0 || hi <= lo) throw Error("scales must satisfy 0 <= k_min < k_max");
  return {lo, hi};
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.report.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.report);
  if (!f) throw Error("cannot write report: " + cfg.report);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json header(const RunConfig& cfg) {
  Json j;
  j["subcommand"] = cfg.subcommand;
  j["seed"] = cfg.seed;
  if (!cfg.algebra.empty()) j["algebra"] = cfg.algebra;
  return j;
}

Json vec_json(const LieAlgebra& g, const std::vector<RatVec>& vs) {
  Json a = Json::array();
  for (const auto& v : vs) a.push_back(g.describe(v));
  return a;
}

Json matrix_json(const RatMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
    rows.push_back(row);
  }
  return rows;
}

Json witness_json(const SublinearWitness& w) {
  Json bins = Json::array();
  for (const auto& b : w.bins) bins.push_back({{"k", b.k}, {"count", b.count}, {"bin_max", b.bin_max}, {"envelope", b.envelope}});
  return {{"verdict", to_string(w.verdict)}, {"bottom", w.bottom}, {"middle", w.middle}, {"top", w.top}, {"bins", bins}};
}

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

int cmd_validate(const RunConfig& cfg) {
  const auto g = read_algebra_file(cfg.algebra);
  Json j = header(cfg);
  j["dim"] = g.dim();
  j["solvable"] = is_solvable(g);
  j["nilpotent"] = is_nilpotent(g);
  bool triangulable = false;
  std::string note;
  if (j["solvable"].get<bool>()) {
    try {
      const auto t = triangulability_check(g);
      triangulable = true;
      note = t.note;
    } catch (const NotTriangulable& e) {
      note = e.what();
    } catch (const NonRealSpectrum& e) {
      note = e.what();
    }
  }
  j["triangulable"] = triangulable;
  j["radical_dim"] = exponential_radical(g).dim();
  j["note"] = note;
  j["verdict"] = triangulable ? "pass" : "refuted";
  emit(cfg, dump(j));
  return triangulable ? kPass : kRefuted;
}

int cmd_reduce(const RunConfig& cfg) {
  const auto g = read_algebra_file(cfg.algebra);
  const auto rp = reduce_to_class_C(g, cfg.seed);
  const auto check = class_C_check(rp.g1, rp.radical_in_g1(), rp.complement_in_g1());
  Json j = header(cfg);
  j["cartan"] = vec_json(g, rp.cartan.h.basis());
  j["regular_element"] = g.describe(rp.cartan.regular_element);
  j["radical"] = vec_json(g, rp.cartan.r.basis());
  j["w"] = vec_json(g, rp.cartan.w.basis());
  j["v_lifts"] = vec_json(g, rp.cartan.v_lifts);
  Json weights = Json::array();
  for (const auto& blk : rp.actions.weights) {
    Json ev = Json::array();
    for (const auto& e : blk.eigenvalues) ev.push_back(e.str());
    weights.push_back({{"multiplicity", blk.basis.size()}, {"eigenvalues", ev}});
  }
  j["weights"] = weights;
  j["weights_exact"] = rp.actions.weights_exact;
  Json discarded = Json::array();
  for (std::size_t i = 0; i < rp.actions.nilpotent.size(); ++i)
    discarded.push_back({{"generator", g.describe(rp.cartan.v_lifts[i])}, {"nilpotent_part", matrix_json(rp.actions.nilpotent[i])}});
  j["unipotent_parts_discarded"] = discarded;
  j["class_C"] = check.pass();
  j["g1"] = algebra_to_string(rp.g1);
  j["verdict"] = check.pass() ? "pass" : "refuted";

  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) throw Error("cannot write " + cfg.out);
    write_algebra(f, rp.g1);
    emit(cfg, dump(j));
  } else if (!cfg.report.empty()) {
    write_algebra(std::cout, rp.g1);
    emit(cfg, dump(j));
  } else {
    write_algebra(std::cout, rp.g1);
    std::cout << dump(j);
  }
  return check.pass() ? kPass : kRefuted;
}

int cmd_gradify(const RunConfig& cfg) {
  const auto g = read_algebra_file(cfg.algebra);
  if (!is_nilpotent(g)) throw NotNilpotent();
  const auto gr = associated_graded(g);
  std::ostringstream os;
  write_algebra(os, gr.algebra);
  if (!cfg.out.empty()) {
    std::ofstream f(cfg.out);
    if (!f) throw Error("cannot write " + cfg.out);
    f << os.str();
  }
  Json j = header(cfg);
  j["weights"] = gr.weights;
  j["adapted_basis"] = vec_json(g, gr.lifts);
  j["graded"] = os.str();
  j["verdict"] = "pass";
  if (cfg.out.empty() && cfg.report.empty()) std::cout << os.str();
  emit(cfg, dump(j));
  return kPass;
}

Law parse_target(const std::string& t) {
  if (t == "reduced") return Law::reduced;
  if (t == "graded") return Law::graded;
  throw Error("target must be reduced or graded");
}

int cmd_verify(const RunConfig& cfg) {
  const auto [k_min, k_max] = parse_scales(cfg.scales);
  const Law target = parse_target(cfg.target);
  const auto g = read_algebra_file(cfg.algebra);
  const GroupModel model(reduce_to_class_C(g, cfg.seed));
  const Law source = target == Law::graded ? Law::reduced : Law::original;
  const auto rep = residual_report(model, source, target, k_min, k_max, cfg.samples, cfg.seed);

  if (!cfg.csv.empty()) {
    std::ofstream f(cfg.csv);
    if (!f) throw Error("cannot write " + cfg.csv);
    write_residual_csv(f, rep.rows, cfg.seed);
  }
  if (cfg.format == "csv") {
    std::ostringstream os;
    write_residual_csv(os, rep.rows, cfg.seed);
    emit(cfg, os.str());
  }

  Json j = header(cfg);
  j["source"] = to_string(source);
  j["target"] = to_string(target);
  j["scales"] = {k_min, k_max};
  j["samples"] = rep.rows.size();
  j["identically_zero"] = rep.identically_zero;
  j["k_ratio"] = number_or_null(rep.k_ratio);
  j["decrease"] = number_or_null(rep.decrease);
  j["bounded_by_logs"] = rep.bounded_by_logs();
  j["relative_decreases"] = rep.relative_decreases();
  j["sublinear"] = witness_json(rep.sublinear);
  Json bins = Json::array();
  for (const auto& b : rep.bins)
    bins.push_back({{"k", b.k}, {"count", b.count}, {"k_estimate", b.k_estimate}, {"max_relative", b.max_relative}});
  j["bins"] = bins;

  int code = kPass;
  if (rep.rows.size() < 30 * static_cast<std::size_t>(k_max - k_min) && !rep.identically_zero) code = kInconclusive;
  else if (!rep.relative_decreases()) code = kRefuted;
  else if (source == Law::original && !rep.bounded_by_logs()) code = kRefuted;
  else if (source == Law::reduced && !rep.identically_zero && rep.sublinear.verdict != Verdict::sublinear)
    code = rep.sublinear.verdict == Verdict::inconclusive ? kInconclusive : kRefuted;

  if (source == Law::original) {
    SamplingPlan plan{k_min, k_max, std::max<std::size_t>(30, std::min<std::size_t>(40, cfg.samples / (k_max - k_min))),
                      cfg.seed};
    try {
      const auto cc = psi_constants(model, plan);
      j["constants"] = {{"C_best", number_or_null(cc.C_best)}, {"M_best", cc.M_best}, {"bilipschitz", cc.bilipschitz()}};
    } catch (const InsufficientData& e) {
      j["constants"] = {{"C_best", nullptr}, {"M_best", nullptr}, {"bilipschitz", false}};
      if (code == kPass) code = kInconclusive;
    }
  }
  j["verdict"] = code == kPass ? "pass" : code == kRefuted ? "refuted" : "inconclusive";
  if (cfg.format == "json") emit(cfg, dump(j));
  return code;
}

int cmd_analyze_map(const RunConfig& cfg) {
  const auto [k_min, k_max] = parse_scales(cfg.scales);
  const RealMap f = gallery_map(cfg.map);
  const auto line = real_line();
  SamplingPlan plan{k_min, k_max, std::max<std::size_t>(30, std::min<std::size_t>(200, cfg.samples / (k_max - k_min))),
                    cfg.seed};
  Json j = header(cfg);
  j["map"] = cfg.map;
  j["scales"] = {k_min, k_max};
  int code = kPass;
  try {
    const auto def = check_cone_defined(f, line, line, plan);
    j["cone_defined"] = {{"condition1", def.condition1},
                         {"condition2", def.condition2},
                         {"condition2_tested", def.condition2_tested},
                         {"pass", def.cone_defined()}};
    if (!def.cone_defined()) {
      code = kRefuted;
    } else {
      const auto cc = estimate_cone_constants(f, line, line, plan);
      j["constants"] = {{"C_best", number_or_null(cc.C_best)},
                        {"M_best", cc.M_best},
                        {"bilipschitz", cc.bilipschitz()},
                        {"cone_null", cc.cone_null()},
                        {"lipschitz_witness", witness_json(cc.lipschitz_witness)}};
      const RealMap id = [](const double& x) { return x; };
      const auto eq = check_cone_equivalent(f, id, line, line, plan);
      j["equivalent_to_identity"] = witness_json(eq);
    }
  } catch (const InsufficientData& e) {
    j["note"] = e.what();
    code = kInconclusive;
  }
  j["verdict"] = code == kPass ? "pass" : code == kRefuted ? "refuted" : "inconclusive";
  emit(cfg, dump(j));
  return code;
}

Json limit_json(const Limit& l) {
  Json j{{"kind", to_string(l.kind)}};
  if (l.kind == LimitKind::finite) j["value"] = l.value.str();
  return j;
}

int cmd_ultralimit(const RunConfig& cfg) {
  if (cfg.scenario != "tower" && cfg.scenario != "sec24") throw Error("unknown scenario: " + cfg.scenario);
  TowerScenario sc = [&] {
    const std::map<std::string, std::function<FilterSpec()>> rules{{"tower_even", filter_tower_even},
                                                                     {"midpoints", filter_midpoints},
                                                                     {"factorial", filter_factorial},
                                                                     {"tower", filter_tower}};
    if (auto it = rules.find(cfg.filter); it != rules.end()) return TowerScenario{it->second(), v_constant(2)};
    return scenario_preset(cfg.filter);
  }();
  if (!cfg.v.empty()) sc.v = v_preset(cfg.v);

  Json j = header(cfg);
  j["scenario"] = "tower";
  j["filter"] = {{"name", sc.filter.name}, {"description", sc.filter.description}};
  j["v"] = {{"name", sc.v.name}, {"fibers", sc.v.fibers}};
  int code = kPass;
  try {
    const auto rep = classify_case(sc.filter, sc.v, cfg.horizon);
    j["horizon"] = rep.horizon;
    j["ell"] = limit_json(rep.ell);
    j["ell_prime"] = limit_json(rep.ell_prime);
    j["lambda_tower"] = limit_json(rep.lambda_tower);
    j["lambda_ambient"] = limit_json(rep.lambda_ambient);
    j["case"] = rep.case_id;
    Json pts = Json::array();
    for (const auto& p : rep.cone_points) pts.push_back(p.str());
    j["cone_points"] = pts;
    Json table = Json::array();
    for (const auto& e : rep.induced_map) table.push_back({{"from", e.from.str()}, {"to", e.to.str()}});
    j["induced_map"] = table;
    j["best_lipschitz"] = rep.best_lipschitz ? Json(rep.best_lipschitz->str()) : Json(nullptr);
    j["lambda_relation_holds"] = rep.lambda_relation_holds;
    j["embedding_isometric"] = rep.embedding_isometric;
    j["note"] = rep.note;
    if (rep.case_id == 0) code = kInconclusive;
  } catch (const HorizonTooSmall& e) {
    j["note"] = e.what();
    code = kInconclusive;
  }
  j["verdict"] = code == kPass ? "pass" : "inconclusive";
  emit(cfg, dump(j));
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conegeom: cone geometry of triangulable Lie groups"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.seed = default_seed();
  std::string config_path;
  app.add_option("--config", config_path, "key=value file mirroring the flags");

  std::map<std::string, std::vector<std::pair<CLI::App*, CLI::Option*>>> by_key;
  auto sub = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("--config", config_path, "key=value file mirroring the flags");
    return s;
  };
  auto opt = [&](CLI::App* s, const std::string& key, auto& target, const char* help) {
    by_key[key].push_back({s, s->add_option("--" + key, target, help)});
  };

  auto* validate = sub("validate", "check a structure-constant file");
  auto* reduce = sub("reduce", "class-(C) companion g1 plus provenance");
  auto* gradify = sub("gradify", "associated graded of a nilpotent algebra");
  auto* verify = sub("verify-cone-equiv", "residual study of the composite cone equivalence");
  auto* analyze = sub("analyze-map", "cone analysis of a gallery map on the real line");
  auto* ultra = sub("ultralimit", "exact case table of the tower example");

  for (auto* s : {validate, reduce, gradify, verify}) opt(s, "algebra", cfg.algebra, "algebra file");
  for (auto* s : {validate, reduce, gradify, verify, analyze, ultra}) {
    opt(s, "seed", cfg.seed, "random seed (default $CONEGEOM_SEED or 0)");
    opt(s, "report", cfg.report, "output path (default stdout)");
  }
  for (auto* s : {reduce, gradify}) opt(s, "out", cfg.out, "algebra output path");
  for (auto* s : {verify, analyze}) {
    opt(s, "scales", cfg.scales, "k_min,k_max");
    opt(s, "samples", cfg.samples, "sample count");
  }
  opt(verify, "format", cfg.format, "json or csv");
  opt(verify, "csv", cfg.csv, "also write the residual table here");
  opt(verify, "target", cfg.target, "reduced (psi) or graded (reduced -> graded)");
  opt(analyze, "map", cfg.map, "gallery map name");
  opt(ultra, "scenario", cfg.scenario, "scenario name");
  opt(ultra, "filter", cfg.filter, "preset (case1, case2, case3_l<k>, factorial) or rule");
  opt(ultra, "v", cfg.v, "v preset (l<k>, unbounded)");
  opt(ultra, "horizon", cfg.horizon, "number of filter terms");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    cfg.subcommand = active->get_name();
    if (!config_path.empty()) {
      std::set<std::string> known;
      for (const auto& [k, _] : by_key) known.insert(k);
      for (const auto& [key, entry] : read_config(config_path, known)) {
        CLI::Option* o = nullptr;
        for (const auto& [owner, cand] : by_key[key])
          if (owner == active) o = cand;
        if (!o) throw ParseError(entry.second, 1, "key '" + key + "' does not apply to " + cfg.subcommand);
        if (o->count() == 0) {
          o->add_result(entry.first);
          o->run_callback();
        }
      }
    }
    if (cfg.format != "json" && cfg.format != "csv") throw Error("format must be json or csv");
    if (by_key.count("algebra") && cfg.algebra.empty() &&
        (active == validate || active == reduce || active == gradify || active == verify))
      throw Error("--algebra is required");
    if (active == validate) return cmd_validate(cfg);
    if (active == reduce) return cmd_reduce(cfg);
    if (active == gradify) return cmd_gradify(cfg);
    if (active == verify) return cmd_verify(cfg);
    if (active == analyze) return cmd_analyze_map(cfg);
    return cmd_ultralimit(cfg);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const CLI::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const InsufficientData& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const NoConvergence& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const Overflow& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const Error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
}
