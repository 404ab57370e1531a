// imd: command-line laboratory for the imitative monomer-dimer model.
//
// Subcommands: phase, critical-line, exact, sample, verify, stein.  Every run
// writes a per-run directory <out>/<command>-<hash>/ containing manifest.json
// plus the command's artifacts; re-running with --config manifest.json
// reproduces the outputs byte-identically.  Flags override config values.
//
// Exit codes: 0 ok, 2 usage, 3 empty conditional side, 4 classification
// mismatch, 5 numerical failure, 1 anything else.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "imd/errors.hpp"
#include "imd/exact.hpp"
#include "imd/laws.hpp"
#include "imd/mcmc.hpp"
#include "imd/model.hpp"
#include "imd/phase.hpp"
#include "imd/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace imd;

namespace {

// ---------------------------------------------------------------------------
// config plumbing

json load_config_section(const std::string& path, const std::string& command,
                         const std::vector<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) throw usage_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw usage_error("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw usage_error("config file must hold a JSON object");
  json section;
  if (j.contains("command")) {
    // manifest form: {"command": "...", "<command>": {...}}
    if (j["command"] != command)
      throw usage_error("config is a manifest for command '" +
                        j["command"].get<std::string>() + "', not '" + command + "'");
    if (!j.contains(command) || !j[command].is_object())
      throw usage_error("manifest lacks a '" + command + "' parameter object");
    section = j[command];
  } else {
    section = j;
  }
  for (auto& [key, value] : section.items()) {
    (void)value;
    bool known = false;
    for (const auto& a : allowed) known = known || key == a;
    if (!known)
      throw usage_error("unknown config key '" + key + "' for command " + command);
  }
  return section;
}

double require_num(const json& cfg, const CLI::Option* opt, double flag_value,
                   const char* key, std::optional<double> fallback) {
  if (opt->count() > 0) return flag_value;
  if (cfg.contains(key)) {
    if (!cfg[key].is_number())
      throw usage_error(std::string("config key '") + key + "' must be a number");
    return cfg[key].get<double>();
  }
  if (fallback) return *fallback;
  throw usage_error(std::string("missing required parameter --") + key);
}

long require_int(const json& cfg, const CLI::Option* opt, long flag_value,
                 const char* key, std::optional<long> fallback) {
  if (opt->count() > 0) return flag_value;
  if (cfg.contains(key)) {
    if (!cfg[key].is_number_integer())
      throw usage_error(std::string("config key '") + key + "' must be an integer");
    return cfg[key].get<long>();
  }
  if (fallback) return *fallback;
  throw usage_error(std::string("missing required parameter --") + key);
}

std::string require_str(const json& cfg, const CLI::Option* opt,
                        const std::string& flag_value, const char* key,
                        std::optional<std::string> fallback) {
  if (opt->count() > 0) return flag_value;
  if (cfg.contains(key)) {
    if (!cfg[key].is_string())
      throw usage_error(std::string("config key '") + key + "' must be a string");
    return cfg[key].get<std::string>();
  }
  if (fallback) return *fallback;
  throw usage_error(std::string("missing required parameter --") + key);
}

bool have(const json& cfg, const CLI::Option* opt, const char* key) {
  return opt->count() > 0 || cfg.contains(key);
}

std::vector<long> parse_n_list(const std::string& s) {
  std::vector<long> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string item = s.substr(pos, comma - pos);
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw usage_error("bad N list entry '" + item + "'");
    }
    pos = comma + 1;
  }
  if (out.empty()) throw usage_error("empty N list");
  return out;
}

std::vector<long> n_list_param(const json& cfg, const CLI::Option* opt,
                               const std::string& flag_value,
                               const std::vector<long>& fallback) {
  if (opt->count() > 0) return parse_n_list(flag_value);
  if (cfg.contains("N")) {
    if (cfg["N"].is_string()) return parse_n_list(cfg["N"].get<std::string>());
    if (cfg["N"].is_array()) {
      std::vector<long> out;
      for (const auto& v : cfg["N"]) {
        if (!v.is_number_integer()) throw usage_error("config N list must be integers");
        out.push_back(v.get<long>());
      }
      if (out.empty()) throw usage_error("empty N list");
      return out;
    }
    throw usage_error("config key 'N' must be a list or comma string");
  }
  return fallback;
}

Side parse_side(const std::string& s) {
  if (s == "below") return Side::kBelow;
  if (s == "above") return Side::kAbove;
  throw usage_error("side must be 'below' or 'above', got '" + s + "'");
}

Mode parse_mode(const std::string& s) {
  if (s == "full") return Mode::kFull;
  if (s == "lumped") return Mode::kLumped;
  throw usage_error("mode must be 'full' or 'lumped', got '" + s + "'");
}

// Create <out_base>/<command>-<hash>/, write the manifest, return the path.
fs::path open_run_dir(const std::string& out_flag, const std::string& command,
                      const json& params) {
  const fs::path dir = fs::path(resolve_out_base(out_flag)) / run_name(command, params);
  fs::create_directories(dir);
  write_json_file((dir / "manifest.json").string(), manifest_json(command, params));
  return dir;
}

void announce(const fs::path& dir) {
  std::fprintf(stderr, "run directory: %s\n", dir.string().c_str());
}

void print_stdout(const json& j) { std::printf("%s\n", j.dump(2).c_str()); }

// ---------------------------------------------------------------------------
// subcommands

struct CommonFlags {
  std::string out;
  std::string config;
};

int cmd_phase(const CommonFlags& common, const json& cfg, const CLI::Option* oJ,
              double J, const CLI::Option* oH, double h) {
  ModelParams p;
  p.J = require_num(cfg, oJ, J, "J", std::nullopt);
  p.h = require_num(cfg, oH, h, "h", 0.0);
  const PhasePortrait portrait = classify(p);

  json params = {{"J", p.J}, {"h", p.h}};
  const fs::path dir = open_run_dir(common.out, "phase", params);
  const json out = portrait_json(portrait);
  write_json_file((dir / "portrait.json").string(), out);
  announce(dir);
  print_stdout(out);
  return 0;
}

int cmd_critical_line(const CommonFlags& common, const json& cfg,
                      const CLI::Option* oMin, double j_min, const CLI::Option* oMax,
                      double j_max, const CLI::Option* oSteps, long steps) {
  const TricriticalPoint& tc = tricritical();
  const double lo = require_num(cfg, oMin, j_min, "j_min", tc.J_c + 0.01);
  const double hi = require_num(cfg, oMax, j_max, "j_max", 3.0);
  const long n = require_int(cfg, oSteps, steps, "steps", 50);
  if (n < 1) throw usage_error("steps must be >= 1");
  if (hi < lo) throw usage_error("j_max must be >= j_min");
  if (!(lo > tc.J_c + 1e-4))
    throw usage_error("j_min must exceed the tricritical coupling by at least 1e-4");

  json params = {{"j_min", lo}, {"j_max", hi}, {"steps", n}};
  const fs::path dir = open_run_dir(common.out, "critical-line", params);

  std::vector<CriticalLineRow> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    CriticalLineRow row;
    row.J = (n == 1) ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    row.gamma = critical_h(row.J);
    auto mx = find_maximizers({row.J, row.gamma}, 1e-9);
    if (mx.size() != 2)
      throw numerical_error("coexistence point did not yield two maximizers");
    row.m1 = mx[0].m;
    row.m2 = mx[1].m;
    row.lambda1 = mx[0].lambda;
    row.lambda2 = mx[1].lambda;
    rows.push_back(row);
  }
  write_critical_line_csv((dir / "critical_line.csv").string(), rows);

  json summary = {{"rows", rows.size()},
                  {"first_gamma", rows.front().gamma},
                  {"last_gamma", rows.back().gamma},
                  {"h_c", tc.h_c}};
  announce(dir);
  print_stdout(summary);
  return 0;
}

int cmd_exact(const CommonFlags& common, const json& cfg, const CLI::Option* oJ,
              double J, const CLI::Option* oH, double h, const CLI::Option* oN, long N,
              const CLI::Option* oXi, double xi, const CLI::Option* oSide,
              const std::string& side_str) {
  ModelParams p;
  p.J = require_num(cfg, oJ, J, "J", std::nullopt);
  p.h = require_num(cfg, oH, h, "h", 0.0);
  const long n = require_int(cfg, oN, N, "N", std::nullopt);
  const bool conditioned = have(cfg, oXi, "xi");
  json params = {{"J", p.J}, {"h", p.h}, {"N", n}};
  Side side = Side::kBelow;
  double xi_val = 0;
  if (conditioned) {
    xi_val = require_num(cfg, oXi, xi, "xi", std::nullopt);
    side = parse_side(require_str(cfg, oSide, side_str, "side", std::string("below")));
    params["xi"] = xi_val;
    params["side"] = side == Side::kBelow ? "below" : "above";
  }

  const fs::path dir = open_run_dir(common.out, "exact", params);
  ExactDistribution dist = exact_distribution(p, n);
  json moments_out = {{"schema_version", kSchemaVersion},
                      {"params", {{"J", p.J}, {"h", p.h}}},
                      {"N", n}};
  if (conditioned) {
    dist = conditional(dist, xi_val, side);
    moments_out["xi"] = xi_val;
    moments_out["side"] = side == Side::kBelow ? "below" : "above";
  } else {
    moments_out["free_energy"] = free_energy(p, n);
    moments_out["free_energy_normalized"] = free_energy_normalized(p, n);
  }
  const double mean = dist.mean_m();
  moments_out["mean_m"] = mean;
  moments_out["var_W"] = moments(dist, mean, 0.5, 2);
  moments_out["fourth_W"] = moments(dist, mean, 0.5, 4);

  write_distribution_csv((dir / "distribution.csv").string(), dist);
  write_json_file((dir / "moments.json").string(), moments_out);
  announce(dir);
  print_stdout(moments_out);
  return 0;
}

int cmd_sample(const CommonFlags& common, const json& cfg, const CLI::Option* oJ,
               double J, const CLI::Option* oH, double h, const CLI::Option* oN, long N,
               const CLI::Option* oSteps, long steps, const CLI::Option* oBurn,
               long burn_in, const CLI::Option* oThin, long thinning,
               const CLI::Option* oChains, long chains, const CLI::Option* oSeed,
               long seed, const CLI::Option* oMode, const std::string& mode_str,
               const CLI::Option* oXi, double xi, const CLI::Option* oSide,
               const std::string& side_str) {
  SamplerConfig sc;
  sc.params.J = require_num(cfg, oJ, J, "J", std::nullopt);
  sc.params.h = require_num(cfg, oH, h, "h", 0.0);
  sc.N = require_int(cfg, oN, N, "N", std::nullopt);
  sc.steps = require_int(cfg, oSteps, steps, "steps", std::nullopt);
  sc.burn_in = require_int(cfg, oBurn, burn_in, "burn_in", 0L);
  sc.thinning = require_int(cfg, oThin, thinning, "thinning", 1L);
  sc.chains = static_cast<int>(require_int(cfg, oChains, chains, "chains", 1L));
  sc.seed = static_cast<std::uint64_t>(require_int(cfg, oSeed, seed, "seed", 1L));
  sc.mode = parse_mode(require_str(cfg, oMode, mode_str, "mode", std::string("lumped")));
  sc.restricted = have(cfg, oXi, "xi");

  json params = {{"J", sc.params.J},  {"h", sc.params.h},
                 {"N", sc.N},         {"steps", sc.steps},
                 {"burn_in", sc.burn_in}, {"thinning", sc.thinning},
                 {"chains", sc.chains},   {"seed", static_cast<long>(sc.seed)},
                 {"mode", sc.mode == Mode::kFull ? "full" : "lumped"}};
  if (sc.restricted) {
    sc.xi = require_num(cfg, oXi, xi, "xi", std::nullopt);
    sc.side = parse_side(require_str(cfg, oSide, side_str, "side", std::string("below")));
    params["xi"] = sc.xi;
    params["side"] = sc.side == Side::kBelow ? "below" : "above";
  }

  const fs::path dir = open_run_dir(common.out, "sample", params);
  const TraceSummary summary = sc.restricted ? conditional_run(sc) : run(sc);

  ExactDistribution target = exact_distribution(sc.params, sc.N);
  if (sc.restricted) target = conditional(target, sc.xi, sc.side);
  const double tv = tv_distance(summary, target);

  json out = {{"schema_version", kSchemaVersion},
              {"params", params},
              {"support", summary.support},
              {"counts", summary.counts},
              {"empirical", summary.empirical},
              {"tv_vs_exact", tv},
              {"frac_down", summary.frac_down},
              {"frac_up", summary.frac_up},
              {"frac_swap", summary.frac_swap},
              {"frac_stay", summary.frac_stay},
              {"final_counts", summary.final_counts},
              {"samples_per_chain",
               summary.samples.size() / static_cast<std::size_t>(sc.chains)}};

  write_trace_csv((dir / "trace.csv").string(), sc.burn_in + 1, sc.thinning,
                  summary.samples, sc.chains);
  write_json_file((dir / "summary.json").string(), out);
  announce(dir);
  print_stdout(out);
  return 0;
}

VerifyReport make_law_report(const std::string& mode, const PhasePortrait& portrait,
                             const ExactDistribution* dists, const std::vector<long>& Ns,
                             double center, double scale_exponent, const LimitLaw& law,
                             double coeff, double coeff_expected) {
  VerifyReport r;
  r.mode = mode;
  r.portrait = portrait;
  r.law = law;
  r.center = center;
  r.scale_exponent = scale_exponent;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    const double ks = ks_distance(dists[i], center, scale_exponent, law);
    KsRow row;
    row.N = Ns[i];
    row.ks = ks;
    row.scaled_ks = ks * std::pow(static_cast<double>(Ns[i]),
                                  scale_exponent == 0.75 ? 0.25 : 0.5);
    r.rows.push_back(row);
    pts.emplace_back(static_cast<double>(Ns[i]), ks);
  }
  r.fit = rate_fit(pts);
  r.coeff_check = coeff;
  r.coeff_expected = coeff_expected;
  return r;
}

int cmd_verify(const CommonFlags& common, const json& cfg, const CLI::Option* oMode,
               const std::string& mode_str, const CLI::Option* oJ, double J,
               const CLI::Option* oH, double h, const CLI::Option* oN,
               const std::string& n_str, const CLI::Option* oXi, double xi) {
  const std::string mode = require_str(cfg, oMode, mode_str, "mode", std::nullopt);
  const std::vector<long> Ns =
      n_list_param(cfg, oN, n_str, {500, 1000, 2000, 4000, 8000});
  if (Ns.size() < 4) throw usage_error("verify needs at least 4 values of N");
  const TricriticalPoint& tc = tricritical();

  ModelParams p;
  json params = {{"mode", mode}, {"N", Ns}};

  if (mode == "clt") {
    p.J = require_num(cfg, oJ, J, "J", std::nullopt);
    p.h = require_num(cfg, oH, h, "h", 0.0);
    params["J"] = p.J;
    params["h"] = p.h;
    const PhasePortrait portrait = classify(p);
    if (portrait.kind != PhaseKind::kUnique)
      throw classification_error("verify --mode clt needs a unique maximizer");
    const Maximizer& m0 = portrait.maximizers[0];

    const fs::path dir = open_run_dir(common.out, "verify", params);
    std::vector<ExactDistribution> dists;
    for (long n : Ns) dists.push_back(exact_distribution(p, n));
    const VerifyReport r = make_law_report(
        "clt", portrait, dists.data(), Ns, m0.m, 0.5, LimitLaw::gaussian(m0.lambda),
        gaussian_coefficient_check(m0.m, p), 1.0 / (2.0 * m0.lambda));
    const json out = build_report(r);
    write_json_file((dir / "report.json").string(), out);
    write_rate_csv((dir / "rates.csv").string(), r.rows);
    announce(dir);
    print_stdout(out);
    return 0;
  }

  if (mode == "critical") {
    p.J = require_num(cfg, oJ, J, "J", tc.J_c);
    p.h = require_num(cfg, oH, h, "h", tc.h_c);
    params["J"] = p.J;
    params["h"] = p.h;
    const PhasePortrait portrait = classify(p);
    if (portrait.kind != PhaseKind::kTricritical)
      throw classification_error("verify --mode critical needs the tricritical point");
    const Maximizer& m0 = portrait.maximizers[0];

    const fs::path dir = open_run_dir(common.out, "verify", params);
    std::vector<ExactDistribution> dists;
    for (long n : Ns) dists.push_back(exact_distribution(p, n));
    const VerifyReport r = make_law_report(
        "critical", portrait, dists.data(), Ns, m0.m, 0.75,
        LimitLaw::quartic(m0.lambda), quartic_coefficient_check(m0.m, p),
        tc.lambda_c / 24.0);
    const json out = build_report(r);
    write_json_file((dir / "report.json").string(), out);
    write_rate_csv((dir / "rates.csv").string(), r.rows);
    announce(dir);
    print_stdout(out);
    return 0;
  }

  if (mode == "conditional") {
    p.J = require_num(cfg, oJ, J, "J", std::nullopt);
    p.h = have(cfg, oH, "h") ? require_num(cfg, oH, h, "h", std::nullopt)
                             : critical_h(p.J);
    params["J"] = p.J;
    params["h"] = p.h;
    const PhasePortrait portrait = classify(p);
    if (portrait.kind != PhaseKind::kCriticalPair)
      throw classification_error("verify --mode conditional needs a critical pair");
    const Maximizer& m1 = portrait.maximizers[0];
    const Maximizer& m2 = portrait.maximizers[1];
    const double xi_val = have(cfg, oXi, "xi")
                              ? require_num(cfg, oXi, xi, "xi", std::nullopt)
                              : 0.5 * (m1.m + m2.m);
    params["xi"] = xi_val;

    const fs::path dir = open_run_dir(common.out, "verify", params);
    std::vector<ExactDistribution> below, above;
    for (long n : Ns) {
      const ExactDistribution d = exact_distribution(p, n);
      below.push_back(conditional(d, xi_val, Side::kBelow));
      above.push_back(conditional(d, xi_val, Side::kAbove));
    }
    const VerifyReport rb = make_law_report(
        "conditional:below", portrait, below.data(), Ns, m1.m, 0.5,
        LimitLaw::gaussian(m1.lambda), gaussian_coefficient_check(m1.m, p),
        1.0 / (2.0 * m1.lambda));
    const VerifyReport ra = make_law_report(
        "conditional:above", portrait, above.data(), Ns, m2.m, 0.5,
        LimitLaw::gaussian(m2.lambda), gaussian_coefficient_check(m2.m, p),
        1.0 / (2.0 * m2.lambda));
    json out = {{"schema_version", kSchemaVersion},
                {"mode", "conditional"},
                {"xi", xi_val},
                {"below", build_report(rb)},
                {"above", build_report(ra)}};
    write_json_file((dir / "report.json").string(), out);
    write_rate_csv((dir / "rates_below.csv").string(), rb.rows);
    write_rate_csv((dir / "rates_above.csv").string(), ra.rows);
    announce(dir);
    print_stdout(out);
    return 0;
  }

  throw usage_error("verify mode must be clt, critical or conditional");
}

int cmd_stein(const CommonFlags& common, const json& cfg, const CLI::Option* oJ,
              double J, const CLI::Option* oH, double h, const CLI::Option* oN,
              const std::string& n_str, const CLI::Option* oK, long k_flag) {
  ModelParams p;
  p.J = require_num(cfg, oJ, J, "J", std::nullopt);
  p.h = require_num(cfg, oH, h, "h", 0.0);
  const std::vector<long> Ns = n_list_param(cfg, oN, n_str, {200, 400, 800, 1600, 3200});

  const PhasePortrait portrait = classify(p);
  int k;
  if (portrait.kind == PhaseKind::kUnique)
    k = 0;
  else if (portrait.kind == PhaseKind::kTricritical)
    k = 1;
  else
    throw classification_error("stein diagnostics need a unique or tricritical maximizer");
  if (have(cfg, oK, "k")) {
    const long kk = require_int(cfg, oK, k_flag, "k", std::nullopt);
    if (kk != k)
      throw classification_error("requested k does not match the phase classification");
  }
  const double m0 = portrait.maximizers[0].m;

  json params = {{"J", p.J}, {"h", p.h}, {"N", Ns}, {"k", k}};
  const fs::path dir = open_run_dir(common.out, "stein", params);

  json rows = json::array();
  for (long n : Ns) rows.push_back(stein_json(stein_terms(p, n, k, m0)));
  json out = {{"schema_version", kSchemaVersion},
              {"params", {{"J", p.J}, {"h", p.h}}},
              {"k", k},
              {"m0", m0},
              {"rows", rows}};
  write_json_file((dir / "stein.json").string(), out);
  announce(dir);
  print_stdout(out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"imitative monomer-dimer model laboratory"};
  app.require_subcommand(1);

  // the model field option is spelled --h, so help must not claim -h
  auto add_sub = [&app](const std::string& name, const std::string& desc) {
    auto* sub = app.add_subcommand(name, desc);
    sub->set_help_flag("--help", "print this help message and exit");
    return sub;
  };

  CommonFlags common;
  json cfg = json::object();

  // phase
  auto* sub_phase = add_sub("phase", "classify a parameter point");
  double ph_J = 0, ph_h = 0;
  auto* ph_oJ = sub_phase->add_option("--J", ph_J, "imitation coefficient");
  auto* ph_oH = sub_phase->add_option("--h", ph_h, "monomer field (default 0)");

  // critical-line
  auto* sub_line = add_sub("critical-line", "trace h = gamma(J)");
  double cl_min = 0, cl_max = 0;
  long cl_steps = 0;
  auto* cl_oMin = sub_line->add_option("--j-min", cl_min, "lowest J (default J_c + 0.01)");
  auto* cl_oMax = sub_line->add_option("--j-max", cl_max, "highest J (default 3)");
  auto* cl_oSteps = sub_line->add_option("--steps", cl_steps, "number of rows (default 50)");

  // exact
  auto* sub_exact = add_sub("exact", "exact finite-N distribution");
  double ex_J = 0, ex_h = 0, ex_xi = 0;
  long ex_N = 0;
  std::string ex_side;
  auto* ex_oJ = sub_exact->add_option("--J", ex_J, "imitation coefficient");
  auto* ex_oH = sub_exact->add_option("--h", ex_h, "monomer field (default 0)");
  auto* ex_oN = sub_exact->add_option("--N", ex_N, "system size");
  auto* ex_oXi = sub_exact->add_option("--xi", ex_xi, "condition on one side of xi");
  auto* ex_oSide = sub_exact->add_option("--side", ex_side, "below|above (default below)");

  // sample
  auto* sub_sample = add_sub("sample", "run the pair-update sampler");
  double sm_J = 0, sm_h = 0, sm_xi = 0;
  long sm_N = 0, sm_steps = 0, sm_burn = 0, sm_thin = 0, sm_chains = 0, sm_seed = 0;
  std::string sm_mode, sm_side;
  auto* sm_oJ = sub_sample->add_option("--J", sm_J, "imitation coefficient");
  auto* sm_oH = sub_sample->add_option("--h", sm_h, "monomer field (default 0)");
  auto* sm_oN = sub_sample->add_option("--N", sm_N, "system size");
  auto* sm_oSteps = sub_sample->add_option("--steps", sm_steps, "total steps per chain");
  auto* sm_oBurn = sub_sample->add_option("--burn-in", sm_burn, "discarded prefix (default 0)");
  auto* sm_oThin = sub_sample->add_option("--thinning", sm_thin, "sample stride (default 1)");
  auto* sm_oChains = sub_sample->add_option("--chains", sm_chains, "independent chains (default 1)");
  auto* sm_oSeed = sub_sample->add_option("--seed", sm_seed, "master seed (default 1)");
  auto* sm_oMode = sub_sample->add_option("--mode", sm_mode, "full|lumped (default lumped)");
  auto* sm_oXi = sub_sample->add_option("--xi", sm_xi, "restrict to one side of xi");
  auto* sm_oSide = sub_sample->add_option("--side", sm_side, "below|above (default below)");

  // verify
  auto* sub_verify = add_sub("verify", "limit-law verification report");
  double vf_J = 0, vf_h = 0, vf_xi = 0;
  std::string vf_mode, vf_N;
  auto* vf_oMode = sub_verify->add_option("--mode", vf_mode, "clt|critical|conditional");
  auto* vf_oJ = sub_verify->add_option("--J", vf_J, "imitation coefficient");
  auto* vf_oH = sub_verify->add_option("--h", vf_h, "monomer field");
  auto* vf_oN = sub_verify->add_option("--N", vf_N, "comma-separated N list");
  auto* vf_oXi = sub_verify->add_option("--xi", vf_xi, "conditioning threshold");

  // stein
  auto* sub_stein = add_sub("stein", "exchangeable-pair diagnostics");
  double st_J = 0, st_h = 0;
  std::string st_N;
  long st_k = 0;
  auto* st_oJ = sub_stein->add_option("--J", st_J, "imitation coefficient");
  auto* st_oH = sub_stein->add_option("--h", st_h, "monomer field (default 0)");
  auto* st_oN = sub_stein->add_option("--N", st_N, "comma-separated N list");
  auto* st_oK = sub_stein->add_option("--k", st_k, "0 off-critical, 1 tricritical");

  for (auto* sub : {sub_phase, sub_line, sub_exact, sub_sample, sub_verify, sub_stein}) {
    sub->add_option("--out", common.out, "output base directory ($IMD_OUT_DIR, then ./runs)");
    sub->add_option("--config", common.config, "JSON config or manifest; flags override");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sub_phase->parsed()) {
      if (!common.config.empty())
        cfg = load_config_section(common.config, "phase", {"J", "h"});
      return cmd_phase(common, cfg, ph_oJ, ph_J, ph_oH, ph_h);
    }
    if (sub_line->parsed()) {
      if (!common.config.empty())
        cfg = load_config_section(common.config, "critical-line",
                                  {"j_min", "j_max", "steps"});
      return cmd_critical_line(common, cfg, cl_oMin, cl_min, cl_oMax, cl_max, cl_oSteps,
                               cl_steps);
    }
    if (sub_exact->parsed()) {
      if (!common.config.empty())
        cfg = load_config_section(common.config, "exact", {"J", "h", "N", "xi", "side"});
      return cmd_exact(common, cfg, ex_oJ, ex_J, ex_oH, ex_h, ex_oN, ex_N, ex_oXi, ex_xi,
                       ex_oSide, ex_side);
    }
    if (sub_sample->parsed()) {
      if (!common.config.empty())
        cfg = load_config_section(common.config, "sample",
                                  {"J", "h", "N", "steps", "burn_in", "thinning",
                                   "chains", "seed", "mode", "xi", "side"});
      return cmd_sample(common, cfg, sm_oJ, sm_J, sm_oH, sm_h, sm_oN, sm_N, sm_oSteps,
                        sm_steps, sm_oBurn, sm_burn, sm_oThin, sm_thin, sm_oChains,
                        sm_chains, sm_oSeed, sm_seed, sm_oMode, sm_mode, sm_oXi, sm_xi,
                        sm_oSide, sm_side);
    }
    if (sub_verify->parsed()) {
      if (!common.config.empty())
        cfg = load_config_section(common.config, "verify",
                                  {"mode", "J", "h", "N", "xi"});
      return cmd_verify(common, cfg, vf_oMode, vf_mode, vf_oJ, vf_J, vf_oH, vf_h, vf_oN,
                        vf_N, vf_oXi, vf_xi);
    }
    if (sub_stein->parsed()) {
      if (!common.config.empty())
        cfg = load_config_section(common.config, "stein", {"J", "h", "N", "k"});
      return cmd_stein(common, cfg, st_oJ, st_J, st_oH, st_h, st_oN, st_N, st_oK, st_k);
    }
  } catch (const usage_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const empty_condition_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const classification_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const numerical_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
