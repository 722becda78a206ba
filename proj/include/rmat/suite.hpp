#pragma once

// Verification harness: configuration, seeded suite execution and the JSON
// report behind the `rmat verify` command.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rmat/verify.hpp"

namespace rmat {

inline constexpr int kReportSchemaVersion = 1;

enum ExitCode : int {
  kExitPass = 0,
  kExitCheckFailure = 1,
  kExitConfigError = 2,
  kExitNumericalError = 3,
};

struct SuiteConfig {
  // scalar | yang | belavin | plugin
  std::string family;
  std::string plugin_path;
  // 0: taken from the plugin.
  std::size_t n = 0;
  std::size_t m = 2;
  // Unset only for plugins, which report their own variant.
  std::optional<VariantKind> variant;
  std::optional<cplx> tau;
  // Empty means every applicable check.
  std::vector<CheckKind> checks;
  std::size_t samples = 20;
  std::uint64_t seed = 0;
  std::map<CheckKind, double> tolerances;
  bool fd_check = false;
  // "-" is standard output.
  std::string output = "-";
  // 0 means RMAT_WORKERS or all available cores.
  int workers = 0;
  // Test hook: skip plugin certification.
  bool certify = true;
};

// Parses the arguments that follow `verify`. A `--config <file>` JSON document
// supplies values that explicit flags override. Throws ConfigError naming the
// offending field.
SuiteConfig parse_config(const std::vector<std::string>& args);
// Same rules for a JSON document alone.
SuiteConfig config_from_json(const nlohmann::json& doc);

RFamily build_family(const SuiteConfig& cfg);

// The checks a run executes: cfg.checks, or every check applicable to M.
std::vector<CheckKind> planned_checks(const SuiteConfig& cfg);

struct SuiteReport {
  SuiteConfig config;
  std::string family_name;
  std::size_t n = 0;
  std::string variant;
  std::optional<cplx> tau;
  std::vector<CheckReport> reports;
  double duration_seconds = 0.0;

  std::size_t passed() const;
  std::size_t failed() const { return reports.size() - passed(); }
  bool all_passed() const { return failed() == 0; }
};

// Throws ConfigError for invalid configurations and NumericalError (including
// CertificationError and PoleProximity) for numerical-environment failures.
SuiteReport run_suite(const SuiteConfig& cfg);

nlohmann::json config_to_json(const SuiteConfig& cfg);
nlohmann::json report_to_json(const SuiteReport& report, bool with_duration = true);

// Full `verify` command: returns one of the ExitCode values.
int run_verify_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmat
