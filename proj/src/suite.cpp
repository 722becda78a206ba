#include "rmat/suite.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <ostream>
#include <sstream>

#include "rmat/errors.hpp"
#include "rmat/kernels.hpp"

#ifndef RMAT_VERSION
#define RMAT_VERSION "0.0.0"
#endif

namespace rmat {

namespace {

using nlohmann::json;

struct HelpRequested {
  std::string text;
};

// Values as given on the command line or in a config file, before defaults
// and cross-field rules are applied.
struct RawConfig {
  std::optional<std::string> family;
  std::optional<std::size_t> n;
  std::optional<std::size_t> m;
  std::optional<std::string> variant;
  std::optional<cplx> tau;
  std::optional<std::vector<std::string>> checks;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> tolerances;
  std::optional<bool> fd_check;
  std::optional<std::string> out;
  std::optional<int> workers;
  bool certify = true;
};

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t");
  if (first == std::string::npos) return {};
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(field + ": malformed number '" + text + "'");
  }
  return value;
}

cplx parse_tau(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ConfigError("tau: expected 're,im', got '" + text + "'");
  return {parse_double(parts[0], "tau"), parse_double(parts[1], "tau")};
}

void parse_tolerance(RawConfig& raw, const std::string& item) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) throw ConfigError("tol: expected kind=value, got '" + item + "'");
  const std::string kind = trim(item.substr(0, eq));
  check_kind_from_string(kind);
  raw.tolerances[kind] = parse_double(item.substr(eq + 1), "tol " + kind);
}

template <typename T>
T json_unsigned(const json& v, const std::string& field) {
  const bool ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  if (!ok) throw ConfigError(field + ": expected a non-negative integer");
  return v.get<T>();
}

// Fills the fields of raw that are still unset from a JSON document.
void merge_json(RawConfig& raw, const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "family") {
      if (!v.is_string()) throw ConfigError("family: expected a string");
      if (!raw.family) raw.family = v.get<std::string>();
    } else if (key == "N") {
      if (!raw.n) raw.n = json_unsigned<std::size_t>(v, "N");
    } else if (key == "M") {
      if (!raw.m) raw.m = json_unsigned<std::size_t>(v, "M");
    } else if (key == "variant") {
      if (!v.is_string()) throw ConfigError("variant: expected a string");
      if (!raw.variant) raw.variant = v.get<std::string>();
    } else if (key == "tau") {
      cplx t;
      if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        t = {v[0].get<double>(), v[1].get<double>()};
      } else if (v.is_string()) {
        t = parse_tau(v.get<std::string>());
      } else {
        throw ConfigError("tau: expected [re, im] or \"re,im\"");
      }
      if (!raw.tau) raw.tau = t;
    } else if (key == "checks") {
      std::vector<std::string> names;
      if (v.is_string()) {
        names = split(v.get<std::string>(), ',');
      } else if (v.is_array()) {
        for (const auto& e : v) {
          if (!e.is_string()) throw ConfigError("checks: expected strings");
          names.push_back(e.get<std::string>());
        }
      } else {
        throw ConfigError("checks: expected a list or a comma-separated string");
      }
      if (!raw.checks) raw.checks = names;
    } else if (key == "samples") {
      if (!raw.samples) raw.samples = json_unsigned<std::size_t>(v, "samples");
    } else if (key == "seed") {
      if (!raw.seed) raw.seed = json_unsigned<std::uint64_t>(v, "seed");
    } else if (key == "tolerances") {
      if (!v.is_object()) throw ConfigError("tolerances: expected an object");
      for (const auto& [kind, tol] : v.items()) {
        check_kind_from_string(kind);
        if (!tol.is_number()) throw ConfigError("tolerances." + kind + ": expected a number");
        // Flags given on the command line win.
        raw.tolerances.try_emplace(kind, tol.get<double>());
      }
    } else if (key == "fd_check") {
      if (!v.is_boolean()) throw ConfigError("fd_check: expected a boolean");
      if (!raw.fd_check) raw.fd_check = v.get<bool>();
    } else if (key == "out") {
      if (!v.is_string()) throw ConfigError("out: expected a string");
      if (!raw.out) raw.out = v.get<std::string>();
    } else if (key == "workers") {
      if (!raw.workers) raw.workers = static_cast<int>(json_unsigned<unsigned>(v, "workers"));
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
}

SuiteConfig resolve(const RawConfig& raw) {
  SuiteConfig cfg;
  if (!raw.family) throw ConfigError("family: required (scalar, yang, belavin or plugin:<path>)");
  const std::string& fam = *raw.family;
  if (fam.rfind("plugin:", 0) == 0) {
    cfg.family = "plugin";
    cfg.plugin_path = fam.substr(7);
    if (cfg.plugin_path.empty()) throw ConfigError("family: plugin path is empty");
  } else if (fam == "scalar" || fam == "yang" || fam == "belavin") {
    cfg.family = fam;
  } else {
    throw ConfigError("family: unknown family '" + fam + "'");
  }

  std::optional<VariantKind> given;
  if (raw.variant) given = variant_kind_from_string(*raw.variant);
  if (cfg.family == "yang") {
    if (given && *given != VariantKind::Rational) throw ConfigError("variant: yang is rational");
    cfg.variant = VariantKind::Rational;
  } else if (cfg.family == "belavin") {
    if (given && *given != VariantKind::Elliptic) throw ConfigError("variant: belavin is elliptic");
    cfg.variant = VariantKind::Elliptic;
  } else if (cfg.family == "scalar") {
    cfg.variant = given.value_or(VariantKind::Rational);
  } else {
    cfg.variant = given;
  }

  cfg.tau = raw.tau;
  if (cfg.family == "plugin") {
    if (cfg.tau) throw ConfigError("tau: a plugin reports its own modular parameter");
  } else if (*cfg.variant == VariantKind::Elliptic) {
    if (!cfg.tau) throw ConfigError("tau: tau required for the elliptic variant");
    if (!(cfg.tau->imag() > 0.0)) throw ConfigError("tau: needs Im tau > 0");
  } else if (cfg.tau) {
    throw ConfigError("tau: tau given for the " + to_string(*cfg.variant) + " variant");
  }

  if (cfg.family == "scalar") {
    cfg.n = raw.n.value_or(1);
    if (cfg.n != 1) throw ConfigError("N: the scalar family has N = 1");
  } else if (cfg.family == "plugin") {
    cfg.n = raw.n.value_or(0);
  } else {
    cfg.n = raw.n.value_or(2);
    if (cfg.n < 1) throw ConfigError("N: needs N >= 1");
    if (cfg.family == "belavin" && cfg.n < 2) throw ConfigError("N: belavin needs N >= 2");
  }

  cfg.m = raw.m.value_or(2);
  if (cfg.m < 1) throw ConfigError("M: needs M >= 1");
  cfg.samples = raw.samples.value_or(20);
  if (cfg.samples < 1) throw ConfigError("samples: needs samples >= 1");
  cfg.seed = raw.seed.value_or(0);

  if (raw.checks) {
    bool all = false;
    for (const std::string& name : *raw.checks) {
      if (name == "all" || name == "ALL") {
        all = true;
        continue;
      }
      const CheckKind k = check_kind_from_string(name);
      if (std::find(cfg.checks.begin(), cfg.checks.end(), k) == cfg.checks.end()) {
        cfg.checks.push_back(k);
      }
    }
    if (all) cfg.checks.clear();
    if (!all && cfg.checks.empty()) throw ConfigError("checks: empty list");
  }
  for (const CheckKind k : cfg.checks) {
    if (k == CheckKind::COMPONENT_IJK && cfg.m < 3) {
      throw ConfigError("checks: COMPONENT_IJK needs M >= 3 (M = " + std::to_string(cfg.m) + ")");
    }
  }
  for (const auto& [name, tol] : raw.tolerances) {
    if (!(tol > 0.0)) throw ConfigError("tol " + name + ": needs a positive tolerance");
    cfg.tolerances[check_kind_from_string(name)] = tol;
  }
  cfg.fd_check = raw.fd_check.value_or(false);
  cfg.output = raw.out.value_or("-");
  cfg.workers = raw.workers.value_or(0);
  if (cfg.workers < 0) throw ConfigError("workers: needs workers >= 0");
  cfg.certify = raw.certify;
  return cfg;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("RMAT_WORKERS"); env && *env) {
    const double w = parse_double(env, "RMAT_WORKERS");
    if (!(w >= 1.0) || w != static_cast<int>(w)) {
      throw ConfigError("RMAT_WORKERS: expected a positive integer");
    }
    return static_cast<int>(w);
  }
  return kernels::max_workers();
}

json cplx_json(cplx x) { return json::array({x.real(), x.imag()}); }

std::string three_digits(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

json sample_json(const Sample& s) {
  json z = json::array();
  for (const cplx x : s.z) z.push_back(cplx_json(x));
  json q = json::array();
  for (const cplx x : s.q) q.push_back(cplx_json(x));
  return {{"index", s.index}, {"seed", s.seed}, {"hbar", cplx_json(s.hbar)},
          {"eta", cplx_json(s.eta)}, {"z", z}, {"q", q}};
}

double tolerance_for(const SuiteConfig& cfg, CheckKind kind, const FunctionVariant& v) {
  const auto it = cfg.tolerances.find(kind);
  return it != cfg.tolerances.end() ? it->second : default_tolerance(kind, v);
}

std::vector<CheckReport> run_one(CheckKind kind, const RFamily& family, const Sample& s,
                                 double tol, const SuiteConfig& cfg) {
  switch (kind) {
    case CheckKind::FAY:
      return {check_fay(family.variant(), s, tol)};
    case CheckKind::SCALAR_UNITARITY:
      return {check_scalar_unitarity(family.variant(), s, tol)};
    case CheckKind::AYBE:
    case CheckKind::SKEW:
    case CheckKind::UNITARITY:
    case CheckKind::QYBE:
    case CheckKind::CUBIC:
    case CheckKind::TWO_PLANCK:
      return {check_nondynamical(kind, family, s, tol)};
    case CheckKind::DYBE_FELDER:
    case CheckKind::DYBE_COMPOSITE:
      return {check_dybe(kind, family, s, tol)};
    case CheckKind::COMPONENT_IJK: {
      std::vector<CheckReport> out;
      const std::size_t m = s.q.size();
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          for (std::size_t k = 0; k < m; ++k) {
            if (i == j || j == k || i == k) continue;
            out.push_back(check_component_identity(family, i, j, k, s, tol));
          }
        }
      }
      return out;
    }
    case CheckKind::CYBE:
    case CheckKind::CDYBE_FELDER:
    case CheckKind::CDYBE_COMPOSITE: {
      ClassicalOptions options;
      options.fd_check = cfg.fd_check;
      return {check_classical(kind, family, s, tol, options)};
    }
    case CheckKind::CLASSICAL_LIMIT:
      return {check_classical_limit(family, s, tol)};
  }
  return {};
}

}  // namespace

SuiteConfig config_from_json(const json& doc) {
  RawConfig raw;
  merge_json(raw, doc);
  return resolve(raw);
}

SuiteConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Numerically certify R-matrix identities", "verify"};
  RawConfig raw;
  std::string family, variant, tau, checks, out, config_path;
  std::size_t n = 0, m = 0, samples = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  std::vector<std::string> tols;
  bool fd_check = false, no_certify = false;

  auto* o_family = app.add_option("--family", family, "scalar | yang | belavin | plugin:<path>");
  auto* o_variant = app.add_option("--variant", variant, "elliptic | trig | rational");
  auto* o_n = app.add_option("--N", n, "Rank N of the vertex family");
  auto* o_m = app.add_option("--M", m, "Number M of dynamical parameters");
  auto* o_tau = app.add_option("--tau", tau, "Modular parameter as re,im");
  auto* o_checks = app.add_option("--checks", checks, "Comma-separated check kinds, or all");
  auto* o_samples = app.add_option("--samples", samples, "Samples per check");
  auto* o_seed = app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--tol", tols, "Tolerance override kind=value (repeatable)");
  auto* o_fd = app.add_flag("--fd-check", fd_check, "Cross-check q-derivatives by finite differences");
  auto* o_out = app.add_option("--out", out, "Report path (- for standard output)");
  auto* o_workers = app.add_option("--workers", workers, "Worker threads (default RMAT_WORKERS or all cores)");
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_flag("--no-certify", no_certify, "Skip plugin certification (test hook)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(std::string(e.what()));
  }

  if (o_family->count()) raw.family = family;
  if (o_variant->count()) raw.variant = variant;
  if (o_n->count()) raw.n = n;
  if (o_m->count()) raw.m = m;
  if (o_tau->count()) raw.tau = parse_tau(tau);
  if (o_checks->count()) raw.checks = split(checks, ',');
  if (o_samples->count()) raw.samples = samples;
  if (o_seed->count()) raw.seed = seed;
  for (const std::string& t : tols) {
    for (const std::string& item : split(t, ',')) parse_tolerance(raw, item);
  }
  if (o_fd->count()) raw.fd_check = fd_check;
  if (o_out->count()) raw.out = out;
  if (o_workers->count()) {
    if (workers < 1) throw ConfigError("workers: needs workers >= 1");
    raw.workers = workers;
  }
  raw.certify = !no_certify;

  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("config: cannot open '" + config_path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("config: " + std::string(e.what()));
    }
    merge_json(raw, doc);
  }
  return resolve(raw);
}

RFamily build_family(const SuiteConfig& cfg) {
  if (cfg.family == "scalar") {
    switch (cfg.variant.value_or(VariantKind::Rational)) {
      case VariantKind::Rational:
        return scalar_family(FunctionVariant::rational());
      case VariantKind::Trigonometric:
        return scalar_family(FunctionVariant::trigonometric());
      case VariantKind::Elliptic:
        return scalar_family(FunctionVariant::elliptic(cfg.tau.value()));
    }
  }
  if (cfg.family == "yang") return yang_family(cfg.n);
  if (cfg.family == "belavin") return belavin_family(cfg.n, cfg.tau.value());
  if (cfg.family == "plugin") {
    RFamily family = load_plugin_family(cfg.plugin_path, cfg.certify);
    if (cfg.n != 0 && cfg.n != family.n()) {
      throw ConfigError("N: plugin has N = " + std::to_string(family.n()) + ", not " +
                        std::to_string(cfg.n));
    }
    if (cfg.variant && *cfg.variant != family.variant().kind()) {
      throw ConfigError("variant: plugin is " + to_string(family.variant().kind()));
    }
    return family;
  }
  throw ConfigError("family: unknown family '" + cfg.family + "'");
}

std::vector<CheckKind> planned_checks(const SuiteConfig& cfg) {
  if (!cfg.checks.empty()) return cfg.checks;
  std::vector<CheckKind> out;
  for (const CheckKind k : all_check_kinds()) {
    if (k == CheckKind::COMPONENT_IJK && cfg.m < 3) continue;
    out.push_back(k);
  }
  return out;
}

std::size_t SuiteReport::passed() const {
  return static_cast<std::size_t>(
      std::count_if(reports.begin(), reports.end(), [](const CheckReport& r) { return r.passed; }));
}

SuiteReport run_suite(const SuiteConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const int workers = resolve_workers(cfg.workers);
  const RFamily family = build_family(cfg);
  const std::vector<CheckKind> kinds = planned_checks(cfg);
  for (const CheckKind k : kinds) {
    if (k == CheckKind::COMPONENT_IJK && cfg.m < 3) {
      throw ConfigError("checks: COMPONENT_IJK needs M >= 3");
    }
  }
  const Sampler sampler(family.variant(), cfg.m, default_policy(family.variant()));

  struct Task {
    CheckKind kind;
    std::size_t index;
  };
  std::vector<Task> tasks;
  for (const CheckKind k : kinds) {
    for (std::size_t i = 0; i < cfg.samples; ++i) tasks.push_back({k, i});
  }
  std::vector<std::vector<CheckReport>> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());

  const long count = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (long t = 0; t < count; ++t) {
    const Task& task = tasks[static_cast<std::size_t>(t)];
    try {
      const Sample s = sampler.draw(cfg.seed, stream_tag(to_string(task.kind)), task.index);
      results[static_cast<std::size_t>(t)] =
          run_one(task.kind, family, s, tolerance_for(cfg, task.kind, family.variant()), cfg);
    } catch (...) {
      errors[static_cast<std::size_t>(t)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SuiteReport report;
  report.config = cfg;
  report.family_name = family.name();
  report.n = family.n();
  report.variant = to_string(family.variant().kind());
  report.tau = family.variant().tau();
  for (auto& r : results) {
    for (auto& c : r) report.reports.push_back(std::move(c));
  }
  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json config_to_json(const SuiteConfig& cfg) {
  json j;
  j["family"] = cfg.family == "plugin" ? "plugin:" + cfg.plugin_path : cfg.family;
  j["N"] = cfg.n;
  j["M"] = cfg.m;
  j["variant"] = cfg.variant ? json(to_string(*cfg.variant)) : json(nullptr);
  j["tau"] = cfg.tau ? cplx_json(*cfg.tau) : json(nullptr);
  json checks = json::array();
  for (const CheckKind k : planned_checks(cfg)) checks.push_back(to_string(k));
  j["checks"] = checks;
  j["samples"] = cfg.samples;
  j["seed"] = cfg.seed;
  json tols = json::object();
  for (const auto& [k, v] : cfg.tolerances) tols[to_string(k)] = v;
  j["tolerances"] = tols;
  j["fd_check"] = cfg.fd_check;
  return j;
}

json report_to_json(const SuiteReport& report, bool with_duration) {
  json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["toolkit_version"] = RMAT_VERSION;
  doc["sampler"] = kSamplerName;
  json cfg = config_to_json(report.config);
  cfg["N"] = report.n;
  cfg["variant"] = report.variant;
  cfg["tau"] = report.tau ? cplx_json(*report.tau) : json(nullptr);
  doc["config"] = cfg;
  doc["family"] = report.family_name;

  struct KindSummary {
    int count = 0;
    int failed = 0;
    double max_residual = 0.0;
  };
  std::map<std::string, KindSummary> kinds;
  json checks = json::array();
  for (const CheckReport& r : report.reports) {
    const std::string kind = to_string(r.kind);
    json c;
    c["kind"] = kind;
    if (r.indices) c["indices"] = *r.indices;
    c["sample"] = sample_json(r.sample);
    c["residual"] = three_digits(r.residual);
    c["residual_full"] = r.residual;
    c["tolerance"] = r.tolerance;
    c["verdict"] = r.passed ? "pass" : "fail";
    checks.push_back(std::move(c));

    KindSummary& k = kinds[kind];
    ++k.count;
    if (!r.passed) ++k.failed;
    // NaN sticks (serialized as null).
    if (std::isnan(r.residual) || std::isnan(k.max_residual)) {
      k.max_residual = r.residual + k.max_residual;
    } else {
      k.max_residual = std::max(k.max_residual, r.residual);
    }
  }
  json by_kind = json::object();
  for (const auto& [name, k] : kinds) {
    by_kind[name] = {{"count", k.count}, {"failed", k.failed}, {"max_residual", k.max_residual}};
  }
  doc["checks"] = checks;
  doc["summary"] = {{"total", report.reports.size()},
                    {"passed", report.passed()},
                    {"failed", report.failed()},
                    {"by_kind", by_kind}};
  if (with_duration) doc["duration_seconds"] = report.duration_seconds;
  return doc;
}

int run_verify_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  SuiteConfig cfg;
  SuiteReport report;
  try {
    cfg = parse_config(args);
    report = run_suite(cfg);
  } catch (const HelpRequested& h) {
    out << h.text;
    return kExitPass;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  const std::string text = report_to_json(report).dump(2) + "\n";
  if (cfg.output == "-") {
    out << text;
  } else {
    std::ofstream file(cfg.output);
    if (!file) {
      err << "configuration error: out: cannot write '" << cfg.output << "'\n";
      return kExitConfigError;
    }
    file << text;
    out << report.passed() << "/" << report.reports.size() << " checks passed; report written to "
        << cfg.output << "\n";
  }
  for (const CheckReport& r : report.reports) {
    if (r.passed) continue;
    err << "FAIL " << to_string(r.kind) << " sample " << r.sample.index << ": residual "
        << three_digits(r.residual) << " > tolerance " << r.tolerance << "\n";
  }
  return report.all_passed() ? kExitPass : kExitCheckFailure;
}

}  // namespace rmat
