// corrkit: deterministic outlier-correlation toolkit.
//
// Subcommands: params, gen, detect, lightbulb, parity, amplify, spectral.
// Reports are JSON documents carrying a full parameter echo, counters and
// results; wall-clock timings live under "timings" so reports are otherwise
// byte-identical across reruns of the same command line and seed.
// Exit codes: 0 found/ok, 1 not-found, 2 parameter/parse/capacity error.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "corrkit/amplifier.hpp"
#include "corrkit/bounds.hpp"
#include "corrkit/detector.hpp"
#include "corrkit/errors.hpp"
#include "corrkit/problems.hpp"
#include "corrkit/prng.hpp"
#include "corrkit/rotgraph.hpp"
#include "corrkit/spectral.hpp"
#include "corrkit/vecio.hpp"

using json = nlohmann::ordered_json;
using namespace corrkit;

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void emit(const json& report, const std::string& out_path) {
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    os << report.dump(2) << "\n";
  }
  std::cout << report.dump(2) << "\n";
}

// ---- amplifier construction shared by detect/lightbulb/parity/amplify ----

struct AmpFlags {
  std::string mode = "identity";  // identity | toy | explicit | tensor-sample
  int ell = 1;
  double gamma = 1.05;
  std::int64_t K = 0;          // 0: minimal
  std::int64_t ts_dim = 4096;
  std::int64_t ts_p = 2;
  std::uint64_t seed = 1;
  std::int64_t mem_cap = 26;
};

void add_amp_flags(CLI::App* cmd, AmpFlags& f) {
  cmd->add_option("--mode", f.mode, "amplifier: identity, toy, explicit, tensor-sample")
      ->check(CLI::IsMember({"identity", "toy", "explicit", "tensor-sample"}));
  cmd->add_option("--ell", f.ell, "log2 of the amplifier strength p");
  cmd->add_option("--amp-gamma", f.gamma, "amplifier error gamma > 1");
  cmd->add_option("--amp-K", f.K, "log2 output dimension (0 = minimal)");
  cmd->add_option("--ts-dim", f.ts_dim, "tensor-sample output dimension");
  cmd->add_option("--ts-p", f.ts_p, "tensor-sample strength");
  cmd->add_option("--mem-cap", f.mem_cap, "log2 cap on materialized coordinates");
}

amplifier::AmplifierSchedule make_schedule(const AmpFlags& f, std::int64_t d, double tau) {
  amplifier::AmplifierParams p;
  p.d = d;
  p.ell = f.ell;
  p.tau = tau;
  p.gamma = f.gamma;
  if (f.K > 0) p.K = f.K;
  if (f.mode == "explicit") {
    p.mode = amplifier::Mode::theoretical;
    if (f.K == 0) {
      bounds::DimQuery q;
      q.d = d;
      q.tau = BigRat(tau);
      q.gamma = BigRat(f.gamma);
      q.ell = f.ell;
      q.p = std::int64_t(1) << f.ell;
      p.K = bounds::explicit_dim(q).K;
    }
  } else {
    p.mode = amplifier::Mode::toy;
    p.toy_levels.assign(f.ell, amplifier::ToyLevelSpec{});
  }
  return amplifier::derive_schedule(p);
}

detector::RunOptions make_run(const AmpFlags& f, std::int64_t d, double tau,
                              std::int64_t s, int threads) {
  detector::RunOptions run;
  run.s = s;
  run.tau = tau;
  run.threads = threads;
  run.memory_cap_log2 = f.mem_cap;
  if (f.mode == "identity") {
    run.mode = detector::AmpMode::identity;
    run.gamma = 1.0 + 1e-12;
    run.p = 1;
  } else if (f.mode == "tensor-sample") {
    run.mode = detector::AmpMode::tensor_sample;
    run.ts_dim = f.ts_dim;
    run.ts_p = f.ts_p;
    run.ts_seed = f.seed;
    run.gamma = f.gamma;
    run.p = f.ts_p;
  } else {
    run.mode = f.mode == "toy" ? detector::AmpMode::toy : detector::AmpMode::explicit_amp;
    run.schedule = make_schedule(f, d, tau);
    run.gamma = f.gamma;
    run.p = std::int64_t(1) << f.ell;
  }
  return run;
}

json schedule_json(const amplifier::AmplifierSchedule& s) {
  json levels = json::array();
  for (const auto& lv : s.levels) {
    json l;
    l["tau_i"] = lv.tau_i;
    if (lv.b_i) l["b_i"] = lv.b_i;
    if (lv.t_i) l["t_i"] = lv.t_i;
    l["d_in"] = lv.d_in.str();
    l["D_i"] = lv.D_i.str();
    l["Delta_i"] = lv.Delta_i.str();
    l["graph"] = lv.graph->describe();
    l["lambda_hat"] = lv.lambda_hat;
    l["lambda_measured"] = lv.lambda_measured;
    l["degree_bound_ok"] = lv.degree_bound_ok;
    levels.push_back(l);
  }
  return json{{"gamma0", s.gamma0},
              {"tau0", s.tau0},
              {"k", s.k},
              {"K", s.K},
              {"d_ell", s.d_ell.str()},
              {"toy_verified", s.toy_verified()},
              {"levels", levels}};
}

json report_json(const detector::DetectionReport& rep) {
  json outliers = json::array();
  for (const auto& pr : rep.outliers)
    outliers.push_back({{"x", pr.x_index}, {"y", pr.y_index}, {"inner", pr.inner}});
  return json{{"outliers", outliers},
              {"tiles_total", rep.tiles_total},
              {"flagged_tiles", rep.flagged_tiles},
              {"pairs_scanned", rep.pairs_scanned},
              {"bucket_size", rep.s},
              {"amplified_dim", rep.amplified_dim.str()},
              {"threshold", rep.threshold},
              {"rho_threshold_abs", rep.rho_threshold_abs},
              {"mode", rep.mode},
              {"ts_seed", rep.ts_seed}};
}

rotgraph::GraphPtr parse_graph(const std::string& spec) {
  auto num = [&](std::size_t at) { return std::stoull(spec.substr(at)); };
  if (spec.rfind("kl", 0) == 0) return rotgraph::complete_with_loops(num(2));
  if (spec.rfind("c", 0) == 0) return rotgraph::cycle(num(1));
  if (spec.rfind("k", 0) == 0) return rotgraph::complete_no_loops(num(1));
  if (spec.rfind("q", 0) == 0) return rotgraph::hypercube(static_cast<int>(num(1)));
  if (spec.rfind("base:", 0) == 0) {
    const auto comma = spec.find(',', 5);
    if (comma == std::string::npos)
      throw ParameterError("graph spec: expected base:<b>,<d_poly>");
    const int b = std::stoi(spec.substr(5, comma - 5));
    const std::uint64_t dp = std::stoull(spec.substr(comma + 1));
    return rotgraph::base_graph(gf2k::find_irreducible(b), dp);
  }
  if (spec.rfind("rvwtoy:", 0) == 0) {
    // cycle(256) base: the smallest D = Delta^8 shape
    return rotgraph::rvw_family_toy(rotgraph::cycle(256), std::stoll(spec.substr(7)));
  }
  if (spec.rfind("rvw:", 0) == 0) {
    const auto comma = spec.find(',', 4);
    if (comma == std::string::npos) throw ParameterError("graph spec: expected rvw:<b>,<t>");
    return rotgraph::rvw_family(std::stoi(spec.substr(4, comma - 4)),
                                std::stoll(spec.substr(comma + 1)));
  }
  throw ParameterError("graph spec: unknown form '" + spec +
                       "' (use cN, kN, klN, qM, base:b,d, rvw:b,t, rvwtoy:t)");
}

// ---------------------------------- params ----------------------------------

int cmd_params_detect(std::int64_t n, std::int64_t d, double rho, double tau,
                      const detector::DetectorConstants& consts, const std::string& out) {
  auto p = detector::derive_params(n, d, rho, tau, consts, /*enforce=*/false);
  json rep;
  rep["command"] = "params detect";
  rep["inputs"] = {{"n", n}, {"d", d}, {"rho", rho}, {"tau", tau},
                   {"epsilon", consts.epsilon}, {"tau_max", consts.tau_max},
                   {"delta", consts.delta}, {"C", consts.C}, {"alpha", consts.alpha}};
  rep["derived"] = {
      {"sigma", {{"value", p.sigma}, {"formula", "0.99*eps*(alpha-delta)/(4C+1)"}}},
      {"s", {{"value", p.s}, {"formula", "floor(n^sigma)"}}},
      {"zeta", {{"value", p.zeta}, {"formula", "sigma/4"}}},
      {"log2_gamma", {{"value", p.log2_gamma}, {"formula", "-eps*log2(tau_max)/100000"}}},
      {"gamma", {{"value", p.gamma}, {"formula", "2^log2_gamma"}}},
      {"c1", {{"value", p.c1}, {"formula", "tau_max^(-eps/100000)"}}},
      {"c2", {{"value", p.c2}, {"formula", "(1-0.99*eps/(4C+1))*(alpha-delta)/C"}}},
      {"p_window",
       {{"lo", p.p_window_lo}, {"hi", p.p_window_hi},
        {"formula", "(A, 2A], A = ((1-sigma)*alpha-delta)*log2(n)/(2C*log2(gamma/tau))"}}},
      {"p", {{"value", p.p}, {"formula", "unique power of two in the window"}}},
      {"log2_D",
       {{"value", p.log2_D},
        {"formula", "floor(log2(d) + C*p*log2(gamma/tau)); (1/2)d(g/t)^(Cp) < D <= d(g/t)^(Cp)"}}},
      {"log2_threshold",
       {{"value", p.log2_threshold},
        {"formula", "2*sigma*log2(n) + p*log2(tau*gamma) + log2(D)"}}},
  };
  rep["violations"] = p.violations;
  emit(rep, out);
  return p.violations.empty() ? 0 : 2;
}

int cmd_params_amplify(std::int64_t d, const std::string& tau_str,
                       const std::string& gamma_str, int ell, const std::string& out) {
  bounds::DimQuery q;
  q.d = d;
  q.tau = parse_decimal(tau_str);   // exact: 0.05 means 1/20, not its double
  q.gamma = parse_decimal(gamma_str);
  q.ell = ell;
  q.p = std::int64_t(1) << ell;
  const auto dims = bounds::explicit_dim(q);
  const double tau = static_cast<double>(q.tau);
  const double gamma = static_cast<double>(q.gamma);
  json rep;
  rep["command"] = "params amplify";
  rep["inputs"] = {{"d", d}, {"tau", tau_str}, {"gamma", gamma_str}, {"ell", ell}};
  rep["derived"] = {
      {"K_min",
       {{"value", dims.K},
        {"formula", "min K: 2^K >= d*(2^10/(1-gamma^-1/2))^(20ell+1)*(gamma/tau)^(60*2^ell)"}}},
      {"K_sharp",
       {{"value", dims.K_sharp}, {"formula", "post-composition bound (informative)"}}},
  };
  amplifier::AmplifierParams p;
  p.d = d;
  p.ell = ell;
  p.tau = tau;
  p.gamma = gamma;
  p.mode = amplifier::Mode::theoretical;
  p.K = dims.K;
  rep["schedule"] = schedule_json(amplifier::derive_schedule(p));
  emit(rep, out);
  return 0;
}

int cmd_params_bounds(std::int64_t d, std::int64_t p, const std::string& tau_str,
                      const std::string& gamma_str, std::optional<int> ell,
                      const std::string& out) {
  bounds::DimQuery q;
  q.d = d;
  q.p = p;
  q.tau = parse_decimal(tau_str);   // exact decimals; see params amplify
  q.gamma = parse_decimal(gamma_str);
  q.ell = ell;
  const double tau = static_cast<double>(q.tau);
  json rep;
  rep["command"] = "params bounds";
  rep["inputs"] = {{"d", d}, {"p", p}, {"tau", tau_str}, {"gamma", gamma_str}};
  rep["existence_dim"] = {{"value", bounds::existence_dim(q).str()},
                          {"formula", "ceil(3d*(gamma^p-1)^-2*(gamma/tau)^(2p))"}};
  const auto low = bounds::lower_dim(q);
  if (low.applicable)
    rep["lower_dim"] = {{"value", low.bound.str()},
                        {"formula", "ceil((1/5)*(1/(gamma*tau))^p)"}};
  else
    rep["lower_dim"] = {{"not_applicable", low.violated}};
  if (ell) {
    const auto dims = bounds::explicit_dim(q);
    rep["explicit_dim"] = {{"K", dims.K}, {"K_sharp", dims.K_sharp}};
  }
  rep["hoeffding_tail_tau_d"] = {
      {"value", bounds::hoeffding_tail(static_cast<double>(d), tau * static_cast<double>(d), 2.0)},
      {"formula", "exp(-2 c^2 / (D w^2)) at c = tau*d, w = 2: P(|<x,y>| >= tau d)"}};
  emit(rep, out);
  return 0;
}

// ----------------------------------- gen ------------------------------------

int cmd_gen(const std::string& kind, std::int64_t n, std::int64_t d, double rho,
            std::uint64_t seed, const std::string& out, bool binary) {
  vecio::VectorFile f;
  f.d = d;
  if (kind == "uniform") {
    SplitMix64 rng(seed);
    for (std::int64_t i = 0; i < n; ++i) f.vectors.push_back(SignVector::random(d, rng));
  } else {
    auto inst = problems::gen_lightbulb(n, d, rho, seed);
    f.vectors = inst.vectors;
    std::cerr << "planted pair: " << inst.planted_a << " " << inst.planted_b << "\n";
  }
  vecio::write_path(out, f, binary);
  return 0;
}

// ---------------------------------- detect ----------------------------------

int cmd_detect(const std::string& x_path, const std::string& y_path, double rho,
               double tau, std::int64_t s, const AmpFlags& amp, int threads,
               const std::string& out) {
  Timer timer;
  auto fx = vecio::read_path(x_path);
  auto fy = vecio::read_path(y_path);
  if (fx.d != fy.d) throw ParameterError("detect: X and Y dimension mismatch");
  auto run = make_run(amp, fx.d, tau, s, threads);
  auto rep = detector::detect_outliers(fx.vectors, fy.vectors, rho, run);
  json doc;
  doc["command"] = "detect";
  doc["inputs"] = {{"x", x_path}, {"y", y_path}, {"n_x", fx.vectors.size()},
                   {"n_y", fy.vectors.size()}, {"d", fx.d}, {"rho", rho}, {"tau", tau},
                   {"s", s}, {"mode", amp.mode}, {"seed", amp.seed}};
  if (run.schedule) doc["schedule"] = schedule_json(*run.schedule);
  doc["report"] = report_json(rep);
  doc["timings"] = {{"total_s", timer.seconds()}};
  emit(doc, out);
  return rep.outliers.empty() ? 1 : 0;
}

// --------------------------------- lightbulb --------------------------------

int cmd_lightbulb(std::int64_t n, std::int64_t d, double rho, double kappa,
                  std::optional<double> tau_override, std::int64_t s, const AmpFlags& amp,
                  std::uint64_t seed, int threads, const std::string& out) {
  Timer timer;
  auto inst = problems::gen_lightbulb(n, d, rho, seed);
  problems::LightBulbOptions opt;
  opt.kappa = kappa;
  opt.tau_override = tau_override;
  const double tau = tau_override ? *tau_override : std::pow(rho, kappa);
  opt.run = make_run(amp, d, tau, s, threads);
  auto res = problems::solve_lightbulb(inst, opt);
  json doc;
  doc["command"] = "lightbulb";
  doc["inputs"] = {{"n", n}, {"d", d}, {"rho", rho}, {"kappa", kappa}, {"tau", tau},
                   {"s", s}, {"mode", amp.mode}, {"seed", seed}};
  if (opt.run.schedule) doc["schedule"] = schedule_json(*opt.run.schedule);
  doc["planted"] = {{"a", inst.planted_a}, {"b", inst.planted_b}};
  doc["result"] = {{"found", res.found}, {"a", res.a}, {"b", res.b},
                   {"inner", res.inner}, {"rounds", res.rounds},
                   {"flagged_tiles", res.flagged_tiles},
                   {"matches_planted",
                    res.found && res.a == inst.planted_a && res.b == inst.planted_b}};
  doc["timings"] = {{"total_s", timer.seconds()}};
  emit(doc, out);
  return res.found ? 0 : 1;
}

// ---------------------------------- parity ----------------------------------

int cmd_parity(std::int64_t v, std::int64_t k, double eta, std::int64_t d, double xi,
               std::optional<double> rho_override, std::optional<double> tau_override,
               const std::string& support_csv, std::int64_t s, const AmpFlags& amp,
               std::uint64_t seed, int threads, const std::string& out) {
  Timer timer;
  std::vector<int> support;
  if (!support_csv.empty()) {
    std::size_t pos = 0;
    while (pos < support_csv.size()) {
      auto comma = support_csv.find(',', pos);
      if (comma == std::string::npos) comma = support_csv.size();
      support.push_back(std::stoi(support_csv.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  } else {
    SplitMix64 rng(seed ^ 0x5EEDF00Dull);
    while (static_cast<std::int64_t>(support.size()) < k) {
      const int cand = static_cast<int>(rng.below(v));
      bool dup = false;
      for (int x : support) dup |= x == cand;
      if (!dup) support.push_back(cand);
    }
    std::sort(support.begin(), support.end());
  }
  auto inst = problems::gen_parity(v, k, support, eta, d, seed);
  problems::ParityOptions opt;
  opt.xi = xi;
  opt.rho_override = rho_override;
  opt.tau_override = tau_override;
  const double rho = rho_override ? *rho_override : std::pow(std::abs(1 - 2 * eta), xi);
  const double tau = tau_override ? *tau_override : std::pow(rho, xi);
  opt.run = make_run(amp, d, tau, s, threads);
  auto res = problems::solve_parity(inst, opt);
  json doc;
  doc["command"] = "parity";
  doc["inputs"] = {{"v", v}, {"k", k}, {"eta", eta}, {"d", d}, {"xi", xi},
                   {"rho", res.rho}, {"tau", res.tau}, {"s", s}, {"mode", amp.mode},
                   {"seed", seed}};
  if (opt.run.schedule) doc["schedule"] = schedule_json(*opt.run.schedule);
  doc["planted_support"] = inst.support;
  doc["result"] = {{"found", res.found}, {"support", res.support}, {"score", res.score},
                   {"matches_planted", res.found && res.support == inst.support}};
  doc["timings"] = {{"total_s", timer.seconds()}};
  emit(doc, out);
  return res.found ? 0 : 1;
}

// ---------------------------------- amplify ---------------------------------

int cmd_amplify(const std::string& in_path, std::int64_t d, std::int64_t n,
                std::uint64_t seed, double tau, const AmpFlags& amp,
                const std::string& coord, const std::string& out_vec, bool binary,
                const std::string& out) {
  Timer timer;
  vecio::VectorFile f;
  if (!in_path.empty()) {
    f = vecio::read_path(in_path);
  } else {
    f.d = d;
    SplitMix64 rng(seed);
    for (std::int64_t i = 0; i < n; ++i) f.vectors.push_back(SignVector::random(d, rng));
  }
  auto schedule = make_schedule(amp, f.d, tau);
  json doc;
  doc["command"] = "amplify";
  doc["inputs"] = {{"in", in_path}, {"d", f.d}, {"n", f.vectors.size()}, {"tau", tau},
                   {"gamma", amp.gamma}, {"ell", amp.ell}, {"mode", amp.mode},
                   {"seed", seed}};
  doc["schedule"] = schedule_json(schedule);
  if (!coord.empty()) {
    const BigInt j(coord);
    json vals = json::array();
    amplifier::CoordStats stats;
    for (const auto& x : f.vectors) {
      vals.push_back(amplifier::amplify_coord(x, schedule, j, &stats));
    }
    doc["result"] = {{"coordinate", coord}, {"values", vals},
                     {"input_touches", stats.input_touches}};
  } else {
    vecio::VectorFile g;
    g.d = std::int64_t(1) << schedule.K;
    for (const auto& x : f.vectors)
      g.vectors.push_back(amplifier::amplify(x, schedule, amp.mem_cap));
    if (!out_vec.empty()) vecio::write_path(out_vec, g, binary);
    doc["result"] = {{"output_dim", g.d}, {"out_vec", out_vec}};
  }
  doc["timings"] = {{"total_s", timer.seconds()}};
  emit(doc, out);
  return 0;
}

// ---------------------------------- spectral --------------------------------

int cmd_spectral(const std::string& g1, const std::string& g2, const std::string& op,
                 double tol, const std::string& out) {
  Timer timer;
  rotgraph::GraphPtr g = parse_graph(g1);
  if (op == "square") {
    g = rotgraph::square(g);
  } else if (op == "tensor") {
    g = rotgraph::tensor(g, parse_graph(g2));
  } else if (op == "zigzag") {
    g = rotgraph::zigzag(g, parse_graph(g2));
  }
  const auto est = rotgraph::second_eigenvalue(g, tol);
  json doc;
  doc["command"] = "spectral";
  doc["graph"] = g->describe();
  doc["vertices"] = g->vertex_count().str();
  doc["degree"] = g->degree().str();
  doc["lambda_hat"] = est.lambda_hat;
  doc["iterations"] = est.iterations;
  doc["residual"] = est.residual;
  doc["timings"] = {{"total_s", timer.seconds()}};
  emit(doc, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic outlier-correlation toolkit"};
  app.require_subcommand(1);

  int threads = 1;
  app.add_option("--threads", threads, "cap on worker threads")->capture_default_str();

  // params
  auto* params = app.add_subcommand("params", "derive and print parameter ledgers");
  params->require_subcommand(1);
  struct {
    std::int64_t n = 1000000, d = 100;
    double rho = 0.2, tau = 0.05;
    detector::DetectorConstants consts;
    std::string out;
  } pd;
  auto* params_detect = params->add_subcommand("detect", "detection parameters");
  params_detect->add_option("--n", pd.n)->required();
  params_detect->add_option("--d", pd.d)->required();
  params_detect->add_option("--rho", pd.rho)->required();
  params_detect->add_option("--tau", pd.tau)->required();
  params_detect->add_option("--eps", pd.consts.epsilon);
  params_detect->add_option("--tau-max", pd.consts.tau_max);
  params_detect->add_option("--delta", pd.consts.delta);
  params_detect->add_option("--C", pd.consts.C);
  params_detect->add_option("--alpha", pd.consts.alpha);
  params_detect->add_option("--out", pd.out);

  struct {
    std::int64_t d = 2;
    std::string tau = "0.5", gamma = "4";
    int ell = 1;
    std::string out;
  } pa;
  auto* params_amplify = params->add_subcommand("amplify", "amplifier dimensions");
  params_amplify->add_option("--d", pa.d)->required();
  params_amplify->add_option("--tau", pa.tau)->required();
  params_amplify->add_option("--gamma", pa.gamma)->required();
  params_amplify->add_option("--ell", pa.ell)->required();
  params_amplify->add_option("--out", pa.out);

  struct {
    std::int64_t d = 100, p = 2;
    std::string tau = "0.5", gamma = "2";
    int ell = 0;
    std::string out;
  } pb;
  auto* params_bounds = params->add_subcommand("bounds", "dimension calculators");
  params_bounds->add_option("--d", pb.d)->required();
  params_bounds->add_option("--p", pb.p)->required();
  params_bounds->add_option("--tau", pb.tau)->required();
  params_bounds->add_option("--gamma", pb.gamma)->required();
  params_bounds->add_option("--ell", pb.ell);
  params_bounds->add_option("--out", pb.out);

  // gen
  struct {
    std::string kind = "uniform", out;
    std::int64_t n = 16, d = 64;
    double rho = 0.5;
    std::uint64_t seed = 1;
    bool binary = false;
  } g;
  auto* gen = app.add_subcommand("gen", "generate vector files");
  gen->add_option("--kind", g.kind)->check(CLI::IsMember({"uniform", "lightbulb"}));
  gen->add_option("--n", g.n)->required();
  gen->add_option("--d", g.d)->required();
  gen->add_option("--rho", g.rho);
  gen->add_option("--seed", g.seed);
  gen->add_option("--out", g.out)->required();
  gen->add_flag("--binary", g.binary);

  // detect
  struct {
    std::string x, y, out;
    double rho = 0.5, tau = 0.1;
    std::int64_t s = 1;
    AmpFlags amp;
  } det;
  auto* detect = app.add_subcommand("detect", "find outlier pairs between two files");
  detect->add_option("--x", det.x)->required();
  detect->add_option("--y", det.y)->required();
  detect->add_option("--rho", det.rho)->required();
  detect->add_option("--tau", det.tau)->required();
  detect->add_option("--s", det.s);
  detect->add_option("--seed", det.amp.seed);
  detect->add_option("--out", det.out);
  add_amp_flags(detect, det.amp);

  // lightbulb
  struct {
    std::int64_t n = 64, d = 512, s = 1;
    double rho = 0.5, kappa = 2.0;
    std::optional<double> tau;
    std::uint64_t seed = 1;
    std::string out;
    AmpFlags amp;
  } lb;
  auto* lightbulb = app.add_subcommand("lightbulb", "generate and solve a planted instance");
  lightbulb->add_option("--n", lb.n)->required();
  lightbulb->add_option("--d", lb.d)->required();
  lightbulb->add_option("--rho", lb.rho)->required();
  lightbulb->add_option("--kappa", lb.kappa);
  lightbulb->add_option("--tau", lb.tau, "override tau = rho^kappa");
  lightbulb->add_option("--s", lb.s);
  lightbulb->add_option("--seed", lb.seed);
  lightbulb->add_option("--out", lb.out);
  add_amp_flags(lightbulb, lb.amp);

  // parity
  struct {
    std::int64_t v = 8, k = 2, d = 2000, s = 1;
    double eta = 0.1, xi = 2.0, theta = 0.9;
    std::optional<double> rho, tau;
    std::string support, out;
    std::uint64_t seed = 1;
    AmpFlags amp;
  } par;
  auto* parity = app.add_subcommand("parity", "learn a noisy parity support");
  parity->add_option("--v", par.v)->required();
  parity->add_option("--k", par.k)->required();
  parity->add_option("--eta", par.eta)->required();
  parity->add_option("--d", par.d)->required();
  parity->add_option("--xi", par.xi);
  parity->add_option("--theta", par.theta, "bound on |1-2 eta| (ledger only)");
  parity->add_option("--rho", par.rho, "override rho = |1-2 eta|^xi");
  parity->add_option("--tau", par.tau, "override tau = rho^xi");
  parity->add_option("--support", par.support, "planted support, e.g. 1,5");
  parity->add_option("--s", par.s);
  parity->add_option("--seed", par.seed);
  parity->add_option("--out", par.out);
  add_amp_flags(parity, par.amp);

  // amplify
  struct {
    std::string in, coord, out_vec, out;
    std::int64_t d = 64, n = 4;
    double tau = 0.5;
    std::uint64_t seed = 1;
    bool binary = false;
    AmpFlags amp;
  } am;
  auto* amplify = app.add_subcommand("amplify", "evaluate the correlation amplifier");
  amplify->add_option("--in", am.in, "input vector file (else --d/--n/--seed)");
  amplify->add_option("--d", am.d);
  amplify->add_option("--n", am.n);
  amplify->add_option("--seed", am.seed);
  amplify->add_option("--tau", am.tau)->required();
  amplify->add_option("--coord", am.coord, "evaluate one output coordinate (decimal index)");
  amplify->add_option("--out-vec", am.out_vec, "materialize to a vector file");
  amplify->add_flag("--binary", am.binary);
  amplify->add_option("--out", am.out);
  add_amp_flags(amplify, am.amp);
  am.amp.mode = "toy";

  // spectral
  struct {
    std::string graph, graph2, op = "none", out;
    double tol = 1e-7;
  } sp;
  auto* spectral = app.add_subcommand("spectral", "measure normalized second eigenvalues");
  spectral->add_option("--graph", sp.graph)->required();
  spectral->add_option("--graph2", sp.graph2);
  spectral->add_option("--op", sp.op)->check(CLI::IsMember({"none", "square", "tensor", "zigzag"}));
  spectral->add_option("--tol", sp.tol);
  spectral->add_option("--out", sp.out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (params_detect->parsed())
      return cmd_params_detect(pd.n, pd.d, pd.rho, pd.tau, pd.consts, pd.out);
    if (params_amplify->parsed())
      return cmd_params_amplify(pa.d, pa.tau, pa.gamma, pa.ell, pa.out);
    if (params_bounds->parsed())
      return cmd_params_bounds(pb.d, pb.p, pb.tau, pb.gamma,
                               pb.ell > 0 ? std::optional<int>(pb.ell) : std::nullopt,
                               pb.out);
    if (gen->parsed()) return cmd_gen(g.kind, g.n, g.d, g.rho, g.seed, g.out, g.binary);
    if (detect->parsed())
      return cmd_detect(det.x, det.y, det.rho, det.tau, det.s, det.amp, threads, det.out);
    if (lightbulb->parsed())
      return cmd_lightbulb(lb.n, lb.d, lb.rho, lb.kappa, lb.tau, lb.s, lb.amp, lb.seed,
                           threads, lb.out);
    if (parity->parsed())
      return cmd_parity(par.v, par.k, par.eta, par.d, par.xi, par.rho, par.tau,
                        par.support, par.s, par.amp, par.seed, threads, par.out);
    if (amplify->parsed())
      return cmd_amplify(am.in, am.d, am.n, am.seed, am.tau, am.amp, am.coord, am.out_vec,
                         am.binary, am.out);
    if (spectral->parsed()) return cmd_spectral(sp.graph, sp.graph2, sp.op, sp.tol, sp.out);
  } catch (const ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
