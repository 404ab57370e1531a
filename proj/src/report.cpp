#include "imd/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>
#include <string>

namespace imd {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

const char* kind_name(PhaseKind k) {
  switch (k) {
    case PhaseKind::kUnique: return "UNIQUE";
    case PhaseKind::kCriticalPair: return "CRITICAL_PAIR";
    case PhaseKind::kTricritical: return "TRICRITICAL";
  }
  return "UNKNOWN";
}

}  // namespace

std::string run_name(const std::string& cmd, const nlohmann::json& params) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(cmd + params.dump())));
  return cmd + "-" + buf;
}

std::string resolve_out_base(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("IMD_OUT_DIR"); env && *env) return env;
  return "runs";
}

nlohmann::json manifest_json(const std::string& command, const nlohmann::json& params) {
  return {{"schema_version", kSchemaVersion},
          {"artifact_version", kArtifactVersion},
          {"command", command},
          {command, params}};
}

nlohmann::json portrait_json(const PhasePortrait& portrait) {
  nlohmann::json mx = nlohmann::json::array();
  for (const Maximizer& m : portrait.maximizers) {
    // non-finite curvature serializes as an honest null, not a NaN artifact
    nlohmann::json lambda;
    if (std::isfinite(m.lambda)) lambda = m.lambda;
    mx.push_back({{"m", m.m}, {"value", m.value}, {"lambda", lambda}});
  }
  return {{"kind", kind_name(portrait.kind)},
          {"params", {{"J", portrait.params.J}, {"h", portrait.params.h}}},
          {"maximizers", mx}};
}

nlohmann::json law_json(const LimitLaw& law) {
  if (law.kind == LawKind::kGaussian)
    return {{"kind", "GAUSSIAN"}, {"lambda", law.param}};
  return {{"kind", "QUARTIC"}, {"lambda_c", law.param}};
}

nlohmann::json stein_json(const SteinDiagnostics& d) {
  return {{"N", d.N},
          {"k", d.k},
          {"c0", d.c0},
          {"term_variance", d.term_variance},
          {"term_remainder", d.term_remainder},
          {"scaled_variance", d.scaled_variance},
          {"scaled_remainder", d.scaled_remainder},
          {"fitted_c", d.fitted_c}};
}

nlohmann::json rate_fit_json(const RateFit& fit) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& [n, ks] : fit.points) pts.push_back({{"N", n}, {"ks", ks}});
  return {{"slope", fit.slope},
          {"intercept", fit.intercept},
          {"residual", fit.residual},
          {"max_scaled_sqrt", fit.max_scaled_sqrt},
          {"max_scaled_quarter", fit.max_scaled_quarter},
          {"points", pts}};
}

nlohmann::json build_report(const VerifyReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const KsRow& row : r.rows)
    rows.push_back({{"N", row.N}, {"ks", row.ks}, {"scaled_ks", row.scaled_ks}});
  nlohmann::json out = {
      {"schema_version", kSchemaVersion},
      {"mode", r.mode},
      {"portrait", portrait_json(r.portrait)},
      {"law", law_json(r.law)},
      {"center", r.center},
      {"scale_exponent", r.scale_exponent},
      {"ks_table", rows},
      {"rate_fit", rate_fit_json(r.fit)},
      {"coefficient_check", {{"computed", r.coeff_check}, {"expected", r.coeff_expected}}}};
  if (!r.stein.empty()) {
    nlohmann::json st = nlohmann::json::array();
    for (const SteinDiagnostics& d : r.stein) st.push_back(stein_json(d));
    out["stein"] = st;
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);  // binary: LF endings everywhere
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

void write_distribution_csv(const std::string& path, const ExactDistribution& d) {
  std::string s = "t,m,log_prob,prob\n";
  for (std::size_t i = 0; i < d.support.size(); ++i) {
    const double m = static_cast<double>(d.support[i]) / static_cast<double>(d.N);
    s += std::to_string(d.support[i]) + "," + fmt17(m) + "," + fmt17(d.log_probs[i]) +
         "," + fmt17(d.prob(i)) + "\n";
  }
  write_text_file(path, s);
}

void write_rate_csv(const std::string& path, const std::vector<KsRow>& rows) {
  std::string s = "N,ks,scaled_ks\n";
  for (const KsRow& r : rows)
    s += std::to_string(r.N) + "," + fmt17(r.ks) + "," + fmt17(r.scaled_ks) + "\n";
  write_text_file(path, s);
}

void write_trace_csv(const std::string& path, long first_step, long stride,
                     const std::vector<long>& ts) {
  write_trace_csv(path, first_step, stride, ts, 1);
}

void write_trace_csv(const std::string& path, long first_step, long stride,
                     const std::vector<long>& ts, int chains) {
  if (chains < 1 || (chains > 1 && ts.size() % static_cast<std::size_t>(chains) != 0))
    throw std::invalid_argument("write_trace_csv: samples must split evenly over chains");
  const std::size_t per = chains > 1 ? ts.size() / static_cast<std::size_t>(chains)
                                     : ts.size();
  std::string s = "step,t\n";
  for (std::size_t i = 0; i < ts.size(); ++i)
    s += std::to_string(first_step + stride * static_cast<long>(per ? i % per : 0)) +
         "," + std::to_string(ts[i]) + "\n";
  write_text_file(path, s);
}

void write_critical_line_csv(const std::string& path,
                             const std::vector<CriticalLineRow>& rows) {
  std::string s = "J,gamma,m1,m2,lambda1,lambda2\n";
  for (const CriticalLineRow& r : rows)
    s += fmt17(r.J) + "," + fmt17(r.gamma) + "," + fmt17(r.m1) + "," + fmt17(r.m2) +
         "," + fmt17(r.lambda1) + "," + fmt17(r.lambda2) + "\n";
  write_text_file(path, s);
}

}  // namespace imd
