// ckn: command-line front end for the monomial CKN verification suites.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ckn/errors.hpp"
#include "ckn/report.hpp"

namespace {

constexpr int kExitCheckFailure = 1;
constexpr int kExitConfig = 2;

std::pair<double, double> parse_range(const std::string& s, const char* what) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw ckn::ConfigError(std::string(what) + ": expected lo:hi");
  double lo = 0, hi = 0;
  try {
    std::size_t used = 0;
    lo = std::stod(s.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(s);
    const std::string rest = s.substr(colon + 1);
    hi = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
  } catch (const std::logic_error&) {
    throw ckn::ConfigError(std::string(what) + ": cannot parse '" + s + "'");
  }
  if (!(lo <= hi)) throw ckn::ConfigError(std::string(what) + ": lo must not exceed hi");
  return {lo, hi};
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ckn::ConfigError("cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sharp monomial CKN constant: derivation and verification suites"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, format;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples, degree;
  bool quiet = false;
  app.add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "write output here instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", seed, "override the configured seed");
  app.add_option("--samples", samples, "random samples per battery");
  app.add_option("--degree", degree, "Rayleigh-Ritz polynomial degree");
  app.add_flag("--quiet", quiet, "print the summary line only");

  auto* derive = app.add_subcommand("derive", "derived parameters, hypotheses, regime");
  auto* constant = app.add_subcommand("constant", "Z and C_opt, closed form vs quadrature");
  auto* verify = app.add_subcommand("verify-optimizer", "Euler-Lagrange, CKN ratio and tight Sobolev for one optimizer");
  double s = 1.0, t = 1.0;
  verify->add_option("--s", s, "optimizer parameter s > 0");
  verify->add_option("--t", t, "optimizer parameter t > 0");
  auto* geometry = app.add_subcommand("geometry", "CD, Hessian, warped identity and integration-by-parts batteries");
  bool inject_bug = false;
  geometry->add_flag("--inject-bug", inject_bug, "perturb W_theta in the operators (negative control)");
  auto* eigen = app.add_subcommand("eigen", "sphere eigenvalue, radial gap and detector");
  auto* scan = app.add_subcommand("scan", "(a, b) phase diagram");
  std::string a_range, b_range, steps;
  scan->add_option("--a-range", a_range, "lo:hi for a");
  scan->add_option("--b-range", b_range, "lo:hi for b - a");
  scan->add_option("--steps", steps, "N or NA:NB");
  auto* report = app.add_subcommand("report", "run every suite and emit one report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  ckn::Config cfg;
  try {
    cfg = ckn::load_config_file(config_path);
    if (seed) cfg.seed = *seed;
    if (samples) {
      if (*samples < 0) throw ckn::ConfigError("--samples must be >= 0");
      cfg.samples = *samples;
    }
    if (degree) {
      if (*degree < 1) throw ckn::ConfigError("--degree must be >= 1");
      cfg.degree = *degree;
    }
    if (!format.empty()) cfg.format = format;
    if (!out_path.empty()) cfg.path = out_path;
    if (!a_range.empty()) std::tie(cfg.scan.a_min, cfg.scan.a_max) = parse_range(a_range, "--a-range");
    if (!b_range.empty()) std::tie(cfg.scan.delta_min, cfg.scan.delta_max) = parse_range(b_range, "--b-range");
    if (!steps.empty()) {
      const auto colon = steps.find(':');
      try {
        cfg.scan.steps_a = std::stoi(steps.substr(0, colon));
        cfg.scan.steps_b = colon == std::string::npos ? cfg.scan.steps_a : std::stoi(steps.substr(colon + 1));
      } catch (const std::logic_error&) {
        throw ckn::ConfigError("--steps: cannot parse '" + steps + "'");
      }
      if (cfg.scan.steps_a < 1 || cfg.scan.steps_b < 1) throw ckn::ConfigError("--steps must be positive");
    }

    ckn::CommandResult result;
    std::string csv_override;
    if (*derive) {
      result = ckn::cmd_derive(cfg);
    } else if (*constant) {
      result = ckn::cmd_constant(cfg);
    } else if (*verify) {
      result = ckn::cmd_verify_optimizer(cfg, s, t);
    } else if (*geometry) {
      result = ckn::cmd_geometry(cfg, cfg.samples, inject_bug);
    } else if (*eigen) {
      result = ckn::cmd_eigen(cfg, cfg.degree);
    } else if (*scan) {
      const auto rows = ckn::cmd_scan(cfg);
      result = ckn::scan_result(cfg, rows);
      csv_override = ckn::scan_csv(rows);
    } else if (*report) {
      result = ckn::cmd_report(cfg);
    }

    std::string text;
    if (cfg.format == "csv")
      text = csv_override.empty() ? ckn::checks_csv(result) : csv_override;
    else
      text = ckn::to_json(result, cfg).dump(2) + "\n";
    if (quiet) {
      std::cout << ckn::summary_line(result) << "\n";
      if (!cfg.path.empty()) emit(text, cfg.path);
    } else {
      emit(text, cfg.path);
    }
    for (const std::string& w : result.warnings)
      if (!quiet) std::cerr << "warning: " << w << "\n";
    return result.ok() ? 0 : kExitCheckFailure;
  } catch (const ckn::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
