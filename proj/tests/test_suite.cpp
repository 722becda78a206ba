#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rmat/errors.hpp"
#include "rmat/suite.hpp"

using namespace rmat;
using nlohmann::json;

namespace {

std::string temp_path(const std::string& name) {
  return std::string(P_tmpdir) + "/rmat_test_" + name;
}

std::vector<double> residuals(const SuiteReport& r) {
  std::vector<double> out;
  for (const auto& c : r.reports) out.push_back(c.residual);
  return out;
}

}  // namespace

TEST_CASE("parse_config defaults") {
  const auto cfg = parse_config({"--family", "yang", "--N", "2", "--M", "3", "--seed", "7"});
  CHECK(cfg.family == "yang");
  CHECK(cfg.variant == VariantKind::Rational);
  CHECK(cfg.n == 2);
  CHECK(cfg.m == 3);
  CHECK(cfg.seed == 7);
  CHECK(cfg.samples == 20);
  CHECK_FALSE(cfg.tau.has_value());

  const auto b = parse_config({"--family", "belavin", "--N", "3", "--tau", "0.2,0.9"});
  CHECK(b.variant == VariantKind::Elliptic);
  CHECK(b.tau == cplx{0.2, 0.9});
  CHECK(b.m == 2);

  const auto s = parse_config({"--family", "scalar", "--variant", "trig"});
  CHECK(s.n == 1);
  CHECK(s.variant == VariantKind::Trigonometric);

  const auto t = parse_config({"--family", "yang", "--tol", "AYBE=1e-8,qybe=2e-9", "--tol",
                               "CUBIC=3e-9", "--checks", "AYBE,QYBE,CUBIC"});
  CHECK(t.tolerances.at(CheckKind::AYBE) == 1e-8);
  CHECK(t.tolerances.at(CheckKind::QYBE) == 2e-9);
  CHECK(t.tolerances.at(CheckKind::CUBIC) == 3e-9);
  CHECK(t.checks.size() == 3);
}

TEST_CASE("parse_config errors") {
  using Args = std::vector<std::string>;
  for (const Args& bad : {
           Args{"--family", "belavin", "--N", "2"},
           Args{"--family", "yang", "--tau", "0,1"},
           Args{"--family", "yang", "--N", "two"},
           Args{"--family", "yang", "--bogus"},
           Args{"--N", "2"},
           Args{"--family", "yang", "--N", "1", "--M", "2", "--checks", "COMPONENT_IJK"},
           Args{"--family", "yang", "--variant", "elliptic"},
           Args{"--family", "belavin", "--N", "1", "--tau", "0,1"},
           Args{"--family", "belavin", "--N", "2", "--tau", "0,-1"},
           Args{"--family", "yang", "--checks", "NOPE"},
           Args{"--family", "yang", "--tol", "AYBE=-1"},
           Args{"--family", "scalar", "--N", "2"},
       }) {
    CAPTURE(bad.size());
    CHECK_THROWS_AS((parse_config(bad)), ConfigError);
  }
  try {
    parse_config({"--family", "belavin", "--N", "2"});
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("tau required") != std::string::npos);
  }
}

TEST_CASE("config file precedence") {
  const std::string path = temp_path("config.json");
  {
    std::ofstream f(path);
    f << R"({"family": "yang", "N": 3, "samples": 50, "seed": 11, "checks": ["AYBE", "QYBE"]})";
  }
  const auto from_file = parse_config({"--config", path});
  CHECK(from_file.samples == 50);
  CHECK(from_file.n == 3);
  const auto overridden = parse_config({"--config", path, "--samples", "10"});
  CHECK(overridden.samples == 10);
  CHECK(overridden.seed == 11);

  CHECK_THROWS_AS((config_from_json(json{{"family", "yang"}, {"colour", "red"}})), ConfigError);
  const auto j = config_from_json(json{{"family", "belavin"}, {"N", 2}, {"tau", {0.0, 1.0}}});
  CHECK(j.tau == cplx{0.0, 1.0});
  CHECK_THROWS_AS((parse_config({"--config", temp_path("missing.json")})), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("planned checks") {
  const auto two = planned_checks(parse_config({"--family", "yang", "--M", "2"}));
  CHECK(std::find(two.begin(), two.end(), CheckKind::COMPONENT_IJK) == two.end());
  const auto three = planned_checks(parse_config({"--family", "yang", "--M", "3"}));
  CHECK(std::find(three.begin(), three.end(), CheckKind::COMPONENT_IJK) != three.end());
  CHECK(three.size() == all_check_kinds().size());
}

TEST_CASE("Yang suite passes") {
  auto cfg = parse_config({"--family", "yang", "--N", "2", "--M", "2", "--samples", "20",
                           "--seed", "42"});
  const auto report = run_suite(cfg);
  CHECK(report.all_passed());
  CHECK(report.reports.size() == 14 * 20);
}

TEST_CASE("runs are deterministic across worker counts") {
  auto cfg = parse_config({"--family", "belavin", "--N", "2", "--M", "3", "--tau", "0.1,1.2",
                           "--samples", "2", "--seed", "5", "--checks",
                           "AYBE,DYBE_FELDER,COMPONENT_IJK,CDYBE_FELDER"});
  cfg.workers = 1;
  const auto serial = run_suite(cfg);
  cfg.workers = 4;
  const auto parallel = run_suite(cfg);
  const auto again = run_suite(cfg);
  CHECK(residuals(serial) == residuals(parallel));
  CHECK(residuals(parallel) == residuals(again));
  CHECK(report_to_json(serial, false).dump() == report_to_json(parallel, false).dump());
}

TEST_CASE("report schema") {
  const auto cfg = parse_config({"--family", "yang", "--M", "3", "--samples", "1", "--checks",
                                 "AYBE,COMPONENT_IJK"});
  const auto doc = report_to_json(run_suite(cfg));
  CHECK(doc["schema_version"] == kReportSchemaVersion);
  CHECK(doc["toolkit_version"] == RMAT_VERSION);
  CHECK(doc["sampler"] == kSamplerName);
  CHECK(doc["config"]["variant"] == "rational");
  CHECK(doc["family"].is_string());
  CHECK(doc.contains("duration_seconds"));
  // AYBE once, COMPONENT_IJK for each of the six ordered triples.
  CHECK(doc["summary"]["total"] == 7);
  CHECK(doc["summary"]["by_kind"]["COMPONENT_IJK"]["count"] == 6);
  const auto& first = doc["checks"][0];
  for (const char* key : {"kind", "sample", "residual", "residual_full", "tolerance", "verdict"}) {
    CHECK(first.contains(key));
  }
  CHECK(first["residual"].is_string());
  CHECK(first["sample"]["q"].size() == 3);
  CHECK(doc["checks"][1].contains("indices"));
}

TEST_CASE("exit codes") {
  std::ostringstream out, err;
  CHECK(run_verify_command({"--family", "yang", "--samples", "2", "--checks", "AYBE"}, out, err) ==
        kExitPass);
  CHECK(json::parse(out.str())["summary"]["failed"] == 0);

  CHECK(run_verify_command({"--family", "belavin", "--N", "2"}, out, err) == kExitConfigError);
  CHECK(run_verify_command({"--help"}, out, err) == kExitPass);

  const std::string plugin = std::string("plugin:") + CORRUPTED_PLUGIN_PATH;
  CHECK(run_verify_command({"--family", plugin, "--samples", "2"}, out, err) ==
        kExitNumericalError);

  std::ostringstream out2, err2;
  const std::string path = temp_path("corrupted.json");
  CHECK(run_verify_command({"--family", plugin, "--samples", "3", "--checks", "AYBE,SKEW",
                            "--no-certify", "--out", path},
                           out2, err2) == kExitCheckFailure);
  CHECK(err2.str().find("FAIL AYBE") != std::string::npos);
  std::ifstream f(path);
  const auto doc = json::parse(f);
  CHECK(doc["summary"]["by_kind"]["AYBE"]["failed"] == 3);
  CHECK(doc["summary"]["by_kind"]["AYBE"]["max_residual"].get<double>() > 1e-8);
  std::remove(path.c_str());

  const std::string good = std::string("plugin:") + YANG_PLUGIN_PATH;
  CHECK(run_verify_command({"--family", good, "--samples", "2", "--M", "2"}, out, err) ==
        kExitPass);
  CHECK(run_verify_command({"--family", good, "--N", "3"}, out, err) == kExitConfigError);
}
