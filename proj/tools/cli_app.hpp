#ifndef BERGMAN_TOOLS_CLI_APP_HPP_
#define BERGMAN_TOOLS_CLI_APP_HPP_

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bergman/bergman.hpp"
#include "config.hpp"

namespace bergman::cli {

enum ExitCode : int { kOk = 0, kBadInput = 1, kNumericFailure = 2, kInconclusive = 3 };

struct Options {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format = "json";
  std::optional<std::string> strategy;
  std::optional<double> tol;
};

struct Output {
  std::string body;
  int code = kOk;
};

inline std::string fmt(real x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", static_cast<double>(x));
  return buf;
}

inline real log10_of(real log_value) { return log_value / std::log(real(10)); }

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline MStrategy strategy_from(const Options& o, const Node& root) {
  if (o.strategy) return parse_strategy(*o.strategy);
  if (root.has("strategy")) {
    try {
      return parse_strategy(root.at("strategy").string());
    } catch (const domain_error& e) {
      root.at("strategy").fail(e.what());
    }
  }
  return MStrategy::greedy;
}

inline std::vector<SymbolPair> read_pairs(const Node& root, const SpaceParams& sp) {
  std::vector<SymbolPair> pairs;
  for (const Node& item : root.at("pairs").items()) {
    item.require_object({"u", "phi", "k"});
    SymbolPair pr{item.at("u").expression(sp), item.at("phi").expression(sp), 0};
    if (item.has("k")) {
      const long k = item.at("k").integer();
      if (k < 0 || k > static_cast<long>(kMaxJetOrder)) item.at("k").fail("derivative order out of range");
      pr.k = static_cast<int>(k);
    }
    pairs.push_back(std::move(pr));
  }
  return pairs;
}

inline json pair_header(const Node& root, std::size_t i) {
  const auto items = root.at("pairs").items();
  const Node& it = items[i];
  return json{{"u", it.at("u").string()}, {"phi", it.at("phi").string()}, {"k", it.has("k") ? it.at("k").integer() : 0}};
}

inline Output cmd_interpolate(const Options& o, const nlohmann::json& cfg) {
  const Node root(cfg, "");
  root.require_object({"params", "points", "J", "strategy", "estimate_norm", "quadrature"});
  InterpolationProblem pb;
  if (root.has("params")) pb.params = root.at("params").params();
  for (const Node& p : root.at("points").items()) pb.points.push_back(p.complex());
  pb.J = root.has("J") ? static_cast<int>(root.at("J").integer()) : 0;
  if (pb.J < 0 || pb.J > pb.n()) root.at("J").fail("J must lie in [0, N]");
  try {
    pb.validate();
  } catch (const domain_error& e) {
    root.fail(e.what());
  }
  InterpolationOptions opt;
  opt.strategy = strategy_from(o, root);
  if (root.has("estimate_norm")) opt.estimate_norm = root.at("estimate_norm").boolean();
  if (root.has("quadrature")) opt.quadrature = root.at("quadrature").quadrature();
  if (o.tol) opt.contract_tol = *o.tol;

  const InterpolationResult res = interpolate(pb, opt);
  Output out;
  out.code = res.contract_ok ? kOk : kNumericFailure;
  if (o.format == "csv") {
    std::string s = "index,log10_magnitude,phase,relative_error\n";
    for (const auto& jc : res.jets)
      s += std::to_string(jc.index) + "," + fmt(log10_of(jc.log_abs_value)) + "," + fmt(jc.phase) + "," +
           fmt(jc.error) + "\n";
    out.body = s;
  } else {
    json j = to_json(pb, res);
    j["status"] = res.contract_ok ? "ok" : "contract-violated";
    out.body = dump(j);
  }
  return out;
}

struct SweepRow {
  real t;
  CaseTag kind;
  real log_norm;
  real log_max_half;
  bool contract_ok;
  std::string error;
};

inline Output cmd_sweep(const Options& o, const nlohmann::json& cfg) {
  const Node root(cfg, "");
  root.require_object({"params", "J", "N", "directions", "t", "strategy", "estimate_norm", "quadrature"});
  const SpaceParams sp = root.has("params") ? root.at("params").params() : SpaceParams{};
  std::vector<cplx> dirs;
  if (root.has("directions")) {
    for (const Node& d : root.at("directions").items()) {
      const cplx u = d.complex();
      if (!(std::abs(u) > 0) || !(std::abs(u) <= 1)) d.fail("direction must satisfy 0 < |u| <= 1");
      dirs.push_back(u);
    }
  } else {
    if (!root.has("N")) root.fail("either 'directions' or 'N' is required");
    const long n = root.at("N").integer();
    if (n < 0 || n > static_cast<long>(kMaxJetOrder)) root.at("N").fail("N out of range");
    std::mt19937_64 rng(o.seed.value_or(1));
    for (long k = 0; k <= n; ++k) dirs.push_back(std::polar(real(1), 2 * kPi * detail::unit(rng)));
  }
  if (dirs.empty()) root.at("directions").fail("need at least one direction");
  std::vector<real> ts;
  for (const Node& t : root.at("t").items()) {
    const real v = t.number();
    if (!(v >= 0 && v < 1)) t.fail("t must lie in [0, 1)");
    ts.push_back(v);
  }
  InterpolationOptions opt;
  opt.strategy = strategy_from(o, root);
  if (root.has("estimate_norm")) opt.estimate_norm = root.at("estimate_norm").boolean();
  if (root.has("quadrature")) opt.quadrature = root.at("quadrature").quadrature();
  if (o.tol) opt.contract_tol = *o.tol;
  const int J = root.has("J") ? static_cast<int>(root.at("J").integer()) : 0;
  if (J < 0 || J >= static_cast<int>(dirs.size())) root.at("J").fail("J must lie in [0, N]");

  // Grid points run concurrently; rows are emitted in grid order.
  std::vector<std::future<SweepRow>> jobs;
  for (real t : ts) {
    jobs.push_back(std::async(std::launch::async, [&, t] {
      SweepRow row{t, CaseTag::central, kNaN, kNaN, false, ""};
      try {
        InterpolationProblem pb;
        pb.params = sp;
        pb.J = J;
        for (const cplx& u : dirs) pb.points.push_back(t * u);
        const auto res = interpolate(pb, opt);
        row.kind = res.kind;
        row.log_norm = res.norm.log_value;
        row.log_max_half = log_max_modulus(res.f, 0.5L);
        row.contract_ok = res.contract_ok;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      return row;
    }));
  }
  std::vector<SweepRow> rows;
  for (auto& j : jobs) rows.push_back(j.get());

  Output out;
  for (const auto& r : rows)
    if (!r.contract_ok) out.code = kNumericFailure;
  if (o.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json e{{"t", static_cast<double>(r.t)}, {"case", to_string(r.kind)},
             {"norm_estimate_log10", static_cast<double>(log10_of(r.log_norm))},
             {"max_abs_f_half_disk_log10", static_cast<double>(log10_of(r.log_max_half))},
             {"contract_ok", r.contract_ok}};
      if (!r.error.empty()) e["error"] = r.error;
      arr.push_back(e);
    }
    out.body = dump(json{{"command", "sweep"}, {"params", params_json(sp)}, {"rows", arr}});
  } else {
    std::string s = "t,norm_estimate_log10,max_abs_f_half_disk_log10,case\n";
    for (const auto& r : rows)
      s += fmt(r.t) + "," + fmt(log10_of(r.log_norm)) + "," + fmt(log10_of(r.log_max_half)) + "," +
           (r.error.empty() ? to_string(r.kind) : "error") + "\n";
    out.body = s;
  }
  return out;
}

inline Output cmd_check_order_bounded(const Options& o, const nlohmann::json& cfg) {
  const Node root(cfg, "");
  root.require_object({"source", "target", "pairs", "quadrature"});
  OperatorSpec spec;
  spec.source = root.has("source") ? root.at("source").params() : SpaceParams{};
  spec.target = root.at("target").params();
  if (!(spec.target->alpha > -1)) root.at("target").fail("target weight beta must exceed -1");
  if (spec.source.sup_norm() || spec.target->sup_norm()) root.fail("p and q must be finite");
  spec.pairs = read_pairs(root, spec.source);
  try {
    spec.validate();
  } catch (const self_map_error&) {
    throw;
  } catch (const domain_error& e) {
    root.at("pairs").fail(e.what());
  }
  QuadratureConfig qc;
  if (root.has("quadrature")) qc = root.at("quadrature").quadrature();
  if (o.tol) qc.rel_tol = *o.tol;
  const auto chk = check_order_bounded(spec, qc);
  json j{{"command", "check-order-bounded"}, {"source", params_json(spec.source)}, {"target", params_json(*spec.target)}};
  j["pairs"] = json::array();
  for (std::size_t i = 0; i < chk.pairs.size(); ++i) {
    json e = pair_header(root, i);
    e.update(to_json(chk.pairs[i]));
    j["pairs"].push_back(e);
  }
  j["overall"] = to_string(chk.overall);
  Output out;
  out.code = chk.overall == Verdict::inconclusive ? kInconclusive : kOk;
  if (o.format == "csv") {
    std::string s = "pair,verdict,value,growth_exponent\n";
    for (std::size_t i = 0; i < chk.pairs.size(); ++i)
      s += std::to_string(i) + "," + to_string(chk.pairs[i].verdict) + "," + fmt(chk.pairs[i].value) + "," +
           fmt(chk.pairs[i].growth_exponent) + "\n";
    s += "overall," + to_string(chk.overall) + ",,\n";
    out.body = s;
  } else {
    out.body = dump(j);
  }
  return out;
}

inline Output cmd_check_compact(const Options& o, const nlohmann::json& cfg) {
  const Node root(cfg, "");
  root.require_object({"source", "pairs", "sequence_check", "strategy"});
  OperatorSpec spec;
  spec.source = root.has("source") ? root.at("source").params() : SpaceParams{};
  spec.pairs = read_pairs(root, spec.source);
  try {
    spec.validate();
  } catch (const domain_error& e) {
    root.at("pairs").fail(e.what());
  }
  const auto chk = check_compact(spec);
  json j{{"command", "check-compact"}, {"source", params_json(spec.source)}};
  j["pairs"] = json::array();
  for (std::size_t i = 0; i < chk.pairs.size(); ++i) {
    json e = pair_header(root, i);
    e.update(to_json(chk.pairs[i]));
    j["pairs"].push_back(e);
  }
  j["overall"] = to_string(chk.overall);
  if (!root.has("sequence_check") || root.at("sequence_check").boolean()) {
    InterpolationOptions opt;
    opt.strategy = strategy_from(o, root);
    j["sequence_check"] = to_json(sequence_criterion_check(spec, opt));
  }
  Output out;
  out.code = chk.overall == Verdict::inconclusive ? kInconclusive : kOk;
  if (o.format == "csv") {
    std::string s = "pair,verdict,u_bounded,limit_zero,sup_phi\n";
    for (std::size_t i = 0; i < chk.pairs.size(); ++i)
      s += std::to_string(i) + "," + to_string(chk.pairs[i].compact) + "," + to_string(chk.pairs[i].u_bounded) + "," +
           to_string(chk.pairs[i].limit_zero) + "," + fmt(chk.pairs[i].sup_phi) + "\n";
    s += "overall," + to_string(chk.overall) + ",,,\n";
    out.body = s;
  } else {
    out.body = dump(j);
  }
  return out;
}

inline Output cmd_kernel_norms(const Options& o, const nlohmann::json& cfg) {
  const Node root(cfg, "");
  root.require_object({"params", "m", "lambdas"});
  std::vector<SpaceParams> plist;
  if (!root.has("params")) {
    plist.push_back(SpaceParams{});
  } else if (root.at("params").raw().is_array()) {
    for (const Node& p : root.at("params").items()) plist.push_back(p.params());
  } else {
    plist.push_back(root.at("params").params());
  }
  std::vector<real> ms;
  for (const Node& m : root.at("m").items()) {
    const real v = m.number();
    if (!(v >= 0) || v != std::floor(v)) m.fail("m must be a nonnegative integer");
    ms.push_back(v);
  }
  std::vector<cplx> lams;
  for (const Node& l : root.at("lambdas").items()) {
    const cplx v = l.complex();
    if (!(std::abs(v) < 1)) l.fail("lambda must lie in the open unit disk");
    lams.push_back(v);
  }
  std::string csv = "p,alpha,m,lambda_re,lambda_im,norm_log10,method,resolved\n";
  json rows = json::array();
  for (const auto& sp : plist)
    for (real m : ms)
      for (const cplx& lam : lams) {
        const auto n = kernel_norm(m, lam, sp);
        csv += (sp.sup_norm() ? std::string("inf") : fmt(sp.p)) + "," + fmt(sp.alpha) + "," + fmt(m) + "," +
               fmt(lam.real()) + "," + fmt(lam.imag()) + "," + fmt(log10_of(n.log_value)) + "," + n.method + "," +
               (n.resolved ? "true" : "false") + "\n";
        json e{{"params", params_json(sp)}, {"m", real_json(m)}, {"lambda", complex_json(lam)}};
        e["norm"] = norm_json(n);
        rows.push_back(e);
      }
  return {o.format == "csv" ? csv : dump(json{{"command", "kernel-norms"}, {"rows", rows}}), kOk};
}

inline Output cmd_verify(const Options& o, const nlohmann::json& cfg, std::ostream& err) {
  const Node root(cfg, "");
  SuiteOptions so;
  if (!cfg.is_null()) {
    root.require_object({"trials", "inject"});
    if (root.has("trials")) {
      const long t = root.at("trials").integer();
      if (t < 1) root.at("trials").fail("trials must be positive");
      so.trials = static_cast<std::size_t>(t);
    }
    if (root.has("inject")) {
      for (const Node& i : root.at("inject").items()) {
        if (i.string() != "determinant-floor") i.fail("unknown injection '" + i.string() + "'");
        so.inject_determinant_violation = true;
      }
    }
  }
  if (o.seed) so.seed = *o.seed;
  const auto rep = run_property_suite(so);
  Output out;
  out.code = rep.all_pass() ? kOk : kNumericFailure;
  json props = json::array();
  std::string csv = "property,trials,failures,precondition_errors,extremal_label,extremal\n";
  for (const auto& p : rep.properties) {
    json e{{"property", p.name},
           {"trials", p.trials},
           {"failures", p.failures},
           {"precondition_errors", p.precondition_errors},
           {"extremal_label", p.extremal_label},
           {"extremal", real_json(p.extremal)},
           {"status", p.failures == 0 ? "pass" : "fail"}};
    if (!p.falsifying.empty()) e["falsifying_input"] = p.falsifying;
    if (!p.precondition.empty()) e["precondition_error"] = p.precondition;
    props.push_back(e);
    csv += p.name + "," + std::to_string(p.trials) + "," + std::to_string(p.failures) + "," +
           std::to_string(p.precondition_errors) + "," + p.extremal_label + "," + fmt(p.extremal) + "\n";
    if (p.failures) err << "verify: " << p.name << " failed on " << p.falsifying << "\n";
  }
  out.body = o.format == "csv" ? csv
                               : dump(json{{"command", "verify"},
                                           {"seed", so.seed},
                                           {"trials", so.trials},
                                           {"properties", props},
                                           {"all_pass", rep.all_pass()}});
  return out;
}

/// Parses argv, runs one subcommand and returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpolation and operator experiments on weighted Bergman and Hardy spaces", "bergman"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  double tol = 0;
  std::string strategy;
  const auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* c = sub->add_option("--config", o.config_path, "JSON configuration file");
    if (config_required) c->required();
    sub->add_option("--seed", seed, "random seed");
    sub->add_option("--out", o.out_path, "write output here instead of stdout");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--strategy", strategy, "kernel exponent strategy")->check(CLI::IsMember({"paper", "greedy"}));
    sub->add_option("--tol", tol, "tolerance")->check(CLI::PositiveNumber);
  };
  std::vector<std::pair<std::string, std::string>> cmds = {
      {"interpolate", "solve one interpolation problem"},
      {"check-order-bounded", "order boundedness of a sum of weighted differentiation composition operators"},
      {"check-compact", "compactness into H^inf of a sum of weighted differentiation composition operators"},
      {"kernel-norms", "norms of the modified reproducing kernels"},
      {"verify", "randomized property battery"},
      {"sweep", "interpolation along points moving toward the boundary"}};
  std::vector<CLI::App*> subs;
  for (const auto& [name, desc] : cmds) {
    subs.push_back(app.add_subcommand(name, desc));
    add_common(subs.back(), name != "verify");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    std::ostringstream o1, o2;
    app.exit(e, o1, o2);
    err << o1.str() << o2.str();
    return kBadInput;
  }
  for (auto* s : subs)
    if (s->parsed()) {
      o.command = s->get_name();
      if (s->count("--seed")) o.seed = seed;
      if (s->count("--tol")) o.tol = tol;
      if (s->count("--strategy")) o.strategy = strategy;
      if (!s->count("--format") && o.command == "sweep") o.format = "csv";
    }

  Output result;
  try {
    const nlohmann::json cfg = o.config_path.empty() ? nlohmann::json() : load_config(o.config_path);
    if (o.command == "interpolate") {
      result = cmd_interpolate(o, cfg);
    } else if (o.command == "sweep") {
      result = cmd_sweep(o, cfg);
    } else if (o.command == "check-order-bounded") {
      result = cmd_check_order_bounded(o, cfg);
    } else if (o.command == "check-compact") {
      result = cmd_check_compact(o, cfg);
    } else if (o.command == "kernel-norms") {
      result = cmd_kernel_norms(o, cfg);
    } else {
      result = cmd_verify(o, cfg, err);
    }
  } catch (const config_error& e) {
    err << "config error: " << e.what() << "\n";
    return kBadInput;
  } catch (const self_map_error& e) {
    err << "invalid symbol: " << e.what() << "\n";
    return kBadInput;
  } catch (const parse_error& e) {
    err << "invalid symbol: " << e.what() << "\n";
    return kBadInput;
  } catch (const numeric_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    result = {dump(json{{"command", o.command}, {"status", "numerical-failure"}, {"diagnostic", e.what()}}),
              kNumericFailure};
  } catch (const singular_matrix_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    result = {dump(json{{"command", o.command}, {"status", "numerical-failure"}, {"diagnostic", e.what()}}),
              kNumericFailure};
  } catch (const convergence_error& e) {
    err << "numerical failure: " << e.what() << "\n";
    result = {dump(json{{"command", o.command}, {"status", "numerical-failure"}, {"diagnostic", e.what()}}),
              kNumericFailure};
  } catch (const domain_error& e) {
    err << "invalid input: " << e.what() << "\n";
    return kBadInput;
  }

  if (o.out_path.empty()) {
    out << result.body;
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) {
      err << "cannot write '" << o.out_path << "'\n";
      return kBadInput;
    }
    f << result.body;
  }
  return result.code;
}

}  // namespace bergman::cli

#endif  // BERGMAN_TOOLS_CLI_APP_HPP_
