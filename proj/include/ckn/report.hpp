#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ckn/params.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/spectral.hpp"

namespace ckn {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "ckn-report/1";

struct Config {
  CknParams params;
  int radial_nodes = 64;
  int sphere_nodes = 64;
  int doubling_max = 512;
  double tol_quad = 1e-10;
  double tol_identity = 1e-8;
  double tol_eigen = 1e-6;
  std::uint64_t seed = 42;
  std::string format = "json";
  std::string path;
  int samples = 200;
  int degree = 4;
  ScanGrid scan;

  QuadratureOptions radial_options() const;
  QuadratureOptions sphere_options() const;
  Json echo() const;
};

// Throws ConfigError for missing/mistyped fields and DomainError for
// parameters rejected by derive().
Config load_config(const Json& j);
Config load_config_file(const std::string& path);

struct Check {
  std::string name;
  double value = 0;
  double tolerance = 0;
  std::string relation;  // "<=" or ">="
  bool pass = false;
};
Check check_le(std::string name, double value, double tol);
Check check_ge(std::string name, double value, double bound);

struct CommandResult {
  std::string command;
  Json body = Json::object();
  std::vector<Check> checks;
  std::vector<std::string> warnings;
  Json timings = Json::object();

  bool ok() const;
  void merge(const std::string& section, CommandResult&& other);
};

CommandResult cmd_derive(const Config& cfg);
CommandResult cmd_constant(const Config& cfg);
CommandResult cmd_verify_optimizer(const Config& cfg, double s = 1.0, double t = 1.0);
// inject_bug perturbs W_theta in the operators (negative control).
CommandResult cmd_geometry(const Config& cfg, int samples, bool inject_bug = false);
CommandResult cmd_eigen(const Config& cfg, int degree);
CommandResult cmd_weyl(const Config& cfg, int samples);
CommandResult cmd_report(const Config& cfg);

std::vector<ScanRow> cmd_scan(const Config& cfg);
std::string scan_csv(const std::vector<ScanRow>& rows);
CommandResult scan_result(const Config& cfg, const std::vector<ScanRow>& rows);

// Full document: schema, command, config echo, body, checks, status, timings.
Json to_json(const CommandResult& r, const Config& cfg);
std::string checks_csv(const CommandResult& r);
std::string summary_line(const CommandResult& r);
// Removes the top-level "timings" object.
Json strip_timings(Json j);

std::string format_double(double v);  // %.17g

}  // namespace ckn
