#pragma once
// Output plumbing: run directories, manifests, CSV tables and the JSON
// verification report.  CSV numbers are printed with 17 significant digits;
// JSON numbers use shortest round-trip serialization, which preserves the
// exact double value.  Outputs carry no timestamps so re-runs are
// byte-identical.

#include <string>
#include <vector>

#include "json.hpp"

#include "imd/exact.hpp"
#include "imd/laws.hpp"
#include "imd/phase.hpp"

namespace imd {

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kArtifactVersion = "0.1.0";

std::string fmt17(double x);  // %.17g

// Deterministic per-run directory name: "<cmd>-<fnv1a64 of the canonical
// parameter JSON>".
std::string run_name(const std::string& cmd, const nlohmann::json& params);

// Output base directory: explicit flag value if nonempty, else $IMD_OUT_DIR,
// else "runs".
std::string resolve_out_base(const std::string& flag_value);

// {"schema_version", "artifact_version", "command", "<command>": params};
// feeding the manifest back as --config reproduces the run.
nlohmann::json manifest_json(const std::string& command, const nlohmann::json& params);

nlohmann::json portrait_json(const PhasePortrait& portrait);
nlohmann::json law_json(const LimitLaw& law);
nlohmann::json stein_json(const SteinDiagnostics& d);
nlohmann::json rate_fit_json(const RateFit& fit);

struct KsRow {
  long N = 0;
  double ks = 0;
  double scaled_ks = 0;  // ks * N^{-nominal slope}
};

struct VerifyReport {
  std::string mode;  // "clt" | "critical" | "conditional:below" | "conditional:above"
  PhasePortrait portrait;
  LimitLaw law{LawKind::kGaussian, 1.0};
  double center = 0;
  double scale_exponent = 0.5;
  std::vector<KsRow> rows;
  RateFit fit;
  double coeff_check = 0;     // gaussian/quartic coefficient identity, computed
  double coeff_expected = 0;  // its closed-form target
  std::vector<SteinDiagnostics> stein;  // optional extras
};

nlohmann::json build_report(const VerifyReport& r);

void write_text_file(const std::string& path, const std::string& content);
void write_json_file(const std::string& path, const nlohmann::json& j);
void write_distribution_csv(const std::string& path, const ExactDistribution& d);
void write_rate_csv(const std::string& path, const std::vector<KsRow>& rows);
// One row per retained sample; `step` is the within-chain step index.  The
// multi-chain overload expects the samples pooled in chain order (equal count
// per chain) and restarts the step column at each chain boundary.
void write_trace_csv(const std::string& path, long first_step, long stride,
                     const std::vector<long>& ts);
void write_trace_csv(const std::string& path, long first_step, long stride,
                     const std::vector<long>& ts, int chains);

struct CriticalLineRow {
  double J = 0, gamma = 0, m1 = 0, m2 = 0, lambda1 = 0, lambda2 = 0;
};
void write_critical_line_csv(const std::string& path,
                             const std::vector<CriticalLineRow>& rows);

}  // namespace imd
