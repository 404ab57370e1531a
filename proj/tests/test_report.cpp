#include <cfloat>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "imd/exact.hpp"
#include "imd/phase.hpp"
#include "imd/report.hpp"

using namespace imd;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "imd_report_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("fmt17 round-trips every double through strtod") {
  for (double x : {0.1, 1.0 / 3.0, 1e-300, 5e-324, DBL_MAX, -2.5, 0.0}) {
    const std::string s = fmt17(x);
    CHECK(std::strtod(s.c_str(), nullptr) == x);
  }
}

TEST_CASE("run_name is deterministic and filesystem-friendly") {
  const nlohmann::json params = {{"J", 0.5}, {"h", 0.0}};
  const std::string a = run_name("phase", params);
  const std::string b = run_name("phase", params);
  CHECK(a == b);
  CHECK(a.substr(0, 6) == "phase-");
  for (char c : a)
    CHECK(((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-'));
  // parameter changes move the hash
  CHECK(a != run_name("phase", {{"J", 0.5}, {"h", 0.1}}));
  CHECK(a != run_name("exact", params));
}

TEST_CASE("resolve_out_base precedence: flag, then environment, then default") {
  unsetenv("IMD_OUT_DIR");
  CHECK(resolve_out_base("") == "runs");
  setenv("IMD_OUT_DIR", "/tmp/imd_env_base", 1);
  CHECK(resolve_out_base("") == "/tmp/imd_env_base");
  CHECK(resolve_out_base("explicit") == "explicit");
  unsetenv("IMD_OUT_DIR");
}

TEST_CASE("manifest reproduces the command section") {
  const nlohmann::json params = {{"J", 1.25}, {"h", -0.5}, {"N", 100}};
  const nlohmann::json m = manifest_json("exact", params);
  CHECK(m.at("schema_version") == kSchemaVersion);
  CHECK(m.at("artifact_version") == kArtifactVersion);
  CHECK(m.at("command") == "exact");
  CHECK(m.at("exact") == params);
}

TEST_CASE("portrait json carries maximizers; NaN curvature becomes null") {
  const auto portrait = classify({0.5, 0.0});
  const nlohmann::json j = portrait_json(portrait);
  CHECK(j.at("kind") == "UNIQUE");
  CHECK(j.at("maximizers").size() == 1);
  CHECK(j.at("maximizers")[0].at("m").get<double>() ==
        doctest::Approx(portrait.maximizers[0].m));

  PhasePortrait degenerate = portrait;
  degenerate.maximizers[0].lambda = std::nan("");
  CHECK(portrait_json(degenerate).at("maximizers")[0].at("lambda").is_null());
}

TEST_CASE("csv writers emit the documented headers with LF line endings") {
  const fs::path dir = temp_dir();

  const auto dist = exact_distribution({0.5, 0.0}, 10);
  const fs::path dcsv = dir / "distribution.csv";
  write_distribution_csv(dcsv.string(), dist);
  const std::string dtext = slurp(dcsv);
  CHECK(dtext.rfind("t,m,log_prob,prob\n", 0) == 0);
  CHECK(dtext.find('\r') == std::string::npos);
  // one line per atom plus header, trailing newline
  CHECK(static_cast<std::size_t>(std::count(dtext.begin(), dtext.end(), '\n')) ==
        dist.support.size() + 1);
  CHECK(dtext.back() == '\n');

  const std::vector<KsRow> rows = {{500, 0.031, 0.693}, {1000, 0.022, 0.695}};
  const fs::path rcsv = dir / "rates.csv";
  write_rate_csv(rcsv.string(), rows);
  const std::string rtext = slurp(rcsv);
  CHECK(rtext.rfind("N,ks,scaled_ks\n", 0) == 0);
  CHECK(rtext.find("500,") != std::string::npos);
  CHECK(rtext.find('\r') == std::string::npos);

  const fs::path tcsv = dir / "trace.csv";
  write_trace_csv(tcsv.string(), 101, 10, {4, 6, 8});
  const std::string ttext = slurp(tcsv);
  CHECK(ttext == "step,t\n101,4\n111,6\n121,8\n");

  // multi-chain traces restart the step column at each chain boundary
  write_trace_csv(tcsv.string(), 101, 10, {4, 6, 8, 10}, 2);
  CHECK(slurp(tcsv) == "step,t\n101,4\n111,6\n101,8\n111,10\n");

  const fs::path ccsv = dir / "critical_line.csv";
  write_critical_line_csv(ccsv.string(), {{2.0, -0.41, 0.1, 0.9, 5.0, 6.0}});
  const std::string ctext = slurp(ccsv);
  CHECK(ctext.rfind("J,gamma,m1,m2,lambda1,lambda2\n", 0) == 0);

  // numbers round-trip through the 17-digit format
  const std::string line = dtext.substr(dtext.find('\n') + 1,
                                        dtext.find('\n', dtext.find('\n') + 1) -
                                            dtext.find('\n') - 1);
  std::istringstream ls(line);
  std::string cell;
  std::getline(ls, cell, ',');
  CHECK(std::stol(cell) == dist.support[0]);
  std::getline(ls, cell, ',');
  CHECK(std::strtod(cell.c_str(), nullptr) ==
        static_cast<double>(dist.support[0]) / 10.0);
  std::getline(ls, cell, ',');
  CHECK(std::strtod(cell.c_str(), nullptr) == dist.log_probs[0]);

  fs::remove_all(dir);
}

TEST_CASE("json files end with a newline and parse back unchanged") {
  const fs::path dir = temp_dir();
  const fs::path jpath = dir / "roundtrip.json";
  const nlohmann::json j = {{"a", 1}, {"b", {{"c", 0.1}, {"d", nullptr}}}};
  write_json_file(jpath.string(), j);
  const std::string text = slurp(jpath);
  CHECK(text.back() == '\n');
  CHECK(nlohmann::json::parse(text) == j);
  fs::remove_all(dir);
}

TEST_CASE("verification report carries every section") {
  VerifyReport r;
  r.mode = "clt";
  r.portrait = classify({0.5, 0.0});
  r.law = LimitLaw::gaussian(r.portrait.maximizers[0].lambda);
  r.center = r.portrait.maximizers[0].m;
  r.scale_exponent = 0.5;
  r.rows = {{500, 0.03, 0.67}, {1000, 0.021, 0.66}, {2000, 0.015, 0.67},
            {4000, 0.0105, 0.664}};
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : r.rows)
    pts.emplace_back(static_cast<double>(row.N), row.ks);
  r.fit = rate_fit(pts);
  r.coeff_check = 0.0208;
  r.coeff_expected = 0.0208;

  const nlohmann::json j = build_report(r);
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("mode") == "clt");
  CHECK(j.at("portrait").at("kind") == "UNIQUE");
  CHECK(j.at("law").at("kind") == "GAUSSIAN");
  CHECK(j.at("ks_table").size() == 4);
  CHECK(j.at("ks_table")[0].at("N") == 500);
  CHECK(j.at("rate_fit").contains("slope"));
  CHECK(j.at("rate_fit").contains("intercept"));
  CHECK(j.at("coefficient_check").at("computed").get<double>() == 0.0208);
  CHECK(j.at("coefficient_check").at("expected").get<double>() == 0.0208);
  CHECK(j.at("center").get<double>() == r.center);
  CHECK(j.at("scale_exponent").get<double>() == 0.5);
  CHECK(!j.contains("stein"));  // optional section absent when empty
}
