#include "ckn/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ckn/errors.hpp"
#include "ckn/identities.hpp"
#include "ckn/models.hpp"
#include "ckn/optimizers.hpp"
#include "ckn/parallel.hpp"
#include "ckn/random.hpp"
#include "ckn/special.hpp"
#include "ckn/test_functions.hpp"

namespace ckn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Independent seed per battery so adding one does not shift the others.
std::uint64_t battery_seed(std::uint64_t seed, std::uint64_t tag) { return SplitMix64(seed ^ tag).next(); }

constexpr std::uint64_t kTagGeometry = 0x67656f6d;
constexpr std::uint64_t kTagIbp = 0x696270;
constexpr std::uint64_t kTagIntegrated = 0x696e7463;
constexpr std::uint64_t kTagEigen = 0x6569676e;
constexpr std::uint64_t kTagWeyl = 0x7765796c;

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <class T>
T field(const Json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw ConfigError(std::string("config: missing field '") + where + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config: field '") + where + key + "' has the wrong type");
  }
}

template <class T>
void optional_field(const Json& j, const char* key, const char* where, T& out) {
  if (j.contains(key)) out = field<T>(j, key, where);
}

Json derived_json(const DerivedParams& dp) {
  Json j;
  j["D"] = dp.D;
  j["p"] = dp.p;
  j["n"] = dp.n;
  j["alpha"] = dp.alpha;
  j["alpha_sq"] = dp.fs_lhs;
  j["fs_bound"] = dp.fs_rhs;
  j["a_c"] = dp.a_c;
  j["delta"] = dp.delta;
  j["regime"] = std::string(to_string(dp.regime));
  return j;
}

std::vector<double> unit_diagonal(int d) { return std::vector<double>(d, 1.0 / std::sqrt(static_cast<double>(d))); }

}  // namespace

QuadratureOptions Config::radial_options() const {
  QuadratureOptions o;
  o.initial_nodes = radial_nodes;
  o.max_nodes = doubling_max;
  o.rel_tol = tol_quad;
  return o;
}

QuadratureOptions Config::sphere_options() const {
  QuadratureOptions o;
  o.initial_nodes = sphere_nodes;
  o.max_nodes = doubling_max;
  o.rel_tol = tol_quad;
  return o;
}

Json Config::echo() const {
  Json j;
  j["d"] = params.weight.dim();
  j["A"] = std::vector<double>(params.weight.exponents().begin(), params.weight.exponents().end());
  j["a"] = params.a;
  j["b"] = params.b;
  j["quadrature"] = {{"radial_nodes", radial_nodes}, {"sphere_nodes", sphere_nodes}, {"doubling_max", doubling_max}};
  j["tolerances"] = {{"quad", tol_quad}, {"identity", tol_identity}, {"eigen", tol_eigen}};
  j["seed"] = seed;
  j["samples"] = samples;
  j["degree"] = degree;
  j["scan"] = {{"a_min", scan.a_min},         {"a_max", scan.a_max},   {"delta_min", scan.delta_min},
               {"delta_max", scan.delta_max}, {"steps_a", scan.steps_a}, {"steps_b", scan.steps_b}};
  return j;
}

Config load_config(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  Config c;
  const int d = field<int>(j, "d", "");
  const auto A = field<std::vector<double>>(j, "A", "");
  if (d < 1) throw ConfigError("config: d must be >= 1");
  if (static_cast<int>(A.size()) != d) throw ConfigError("config: A must have d entries");
  c.params = CknParams{MonomialWeight(A), field<double>(j, "a", ""), field<double>(j, "b", "")};
  if (j.contains("quadrature")) {
    const Json& q = j.at("quadrature");
    optional_field(q, "radial_nodes", "quadrature.", c.radial_nodes);
    optional_field(q, "sphere_nodes", "quadrature.", c.sphere_nodes);
    optional_field(q, "doubling_max", "quadrature.", c.doubling_max);
  }
  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    optional_field(t, "quad", "tolerances.", c.tol_quad);
    optional_field(t, "identity", "tolerances.", c.tol_identity);
    optional_field(t, "eigen", "tolerances.", c.tol_eigen);
  }
  optional_field(j, "seed", "", c.seed);
  optional_field(j, "samples", "", c.samples);
  optional_field(j, "degree", "", c.degree);
  if (j.contains("output")) {
    const Json& o = j.at("output");
    optional_field(o, "format", "output.", c.format);
    optional_field(o, "path", "output.", c.path);
  }
  if (j.contains("scan")) {
    const Json& s = j.at("scan");
    optional_field(s, "a_min", "scan.", c.scan.a_min);
    optional_field(s, "a_max", "scan.", c.scan.a_max);
    optional_field(s, "delta_min", "scan.", c.scan.delta_min);
    optional_field(s, "delta_max", "scan.", c.scan.delta_max);
    optional_field(s, "steps_a", "scan.", c.scan.steps_a);
    optional_field(s, "steps_b", "scan.", c.scan.steps_b);
  }
  if (c.radial_nodes < 1 || c.sphere_nodes < 1 || c.doubling_max < 1)
    throw ConfigError("config: quadrature node counts must be positive");
  if (!(c.tol_quad > 0 && c.tol_identity > 0 && c.tol_eigen > 0))
    throw ConfigError("config: tolerances must be positive");
  if (c.format != "json" && c.format != "csv") throw ConfigError("config: output.format must be json or csv");
  if (c.samples < 0) throw ConfigError("config: samples must be >= 0");
  if (c.degree < 1) throw ConfigError("config: degree must be >= 1");
  if (c.scan.steps_a < 1 || c.scan.steps_b < 1 || c.scan.a_min > c.scan.a_max || c.scan.delta_min > c.scan.delta_max)
    throw ConfigError("config: malformed scan range");
  derive(c.params);  // DomainError names the violated constraint
  return c;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return load_config(j);
}

Check check_le(std::string name, double value, double tol) {
  return {std::move(name), value, tol, "<=", value <= tol};
}

Check check_ge(std::string name, double value, double bound) {
  return {std::move(name), value, bound, ">=", value >= bound};
}

bool CommandResult::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void CommandResult::merge(const std::string& section, CommandResult&& other) {
  body[section] = std::move(other.body);
  for (Check& c : other.checks) {
    c.name = section + "." + c.name;
    checks.push_back(std::move(c));
  }
  for (std::string& w : other.warnings) warnings.push_back(section + ": " + w);
  for (auto& [k, v] : other.timings.items()) timings[section + "." + k] = v;
}

CommandResult cmd_derive(const Config& cfg) {
  const auto t0 = Clock::now();
  CommandResult r;
  r.command = "derive";
  const DerivedParams dp = derive(cfg.params);
  r.body["derived"] = derived_json(dp);
  const auto res = identity_residuals(cfg.params, dp);
  r.body["identity_residuals"] = {{"alpha_n", res.alpha_n}, {"two_a", res.two_a}};
  r.checks.push_back(check_le("identity_alpha_n", res.alpha_n, 1e-12));
  r.checks.push_back(check_le("identity_two_a", res.two_a, 1e-12));
  const HypothesisReport h = theorem_hypotheses(cfg.params, dp);
  r.body["hypotheses"] = {{"n_above_four", h.n_above_four},
                          {"last_exponent_zero", h.last_exponent_zero},
                          {"felli_schneider", h.felli_schneider},
                          {"strict_classification", h.strict_classification},
                          {"all", h.all()}};
  for (const std::string& w : h.warnings()) r.warnings.push_back(w);
  r.timings["derive"] = seconds_since(t0);
  return r;
}

CommandResult cmd_constant(const Config& cfg) {
  const auto t0 = Clock::now();
  CommandResult r;
  r.command = "constant";
  const DerivedParams dp = derive(cfg.params);
  const ClosedFormConstants c = closed_form_constants(cfg.params, dp);
  r.body["closed_form"] = {{"sphere_area", c.sphere_area},
                           {"profile_integral", c.profile_integral},
                           {"Z", c.Z},
                           {"C_opt", c.C_opt},
                           {"optimality_proven", c.optimality_proven}};
  if (!c.optimality_proven)
    r.warnings.push_back("C_opt is the radial value; the Felli-Schneider condition fails, so it is not sharp here");
  if (cfg.params.weight.dim() <= 3) {
    const double Zq = integrate_S([](double, std::span<const double>) { return 1.0; }, dp, cfg.params.weight,
                                  cfg.sphere_options());
    const double rel = std::abs(Zq - c.Z) / c.Z;
    r.body["quadrature"] = {{"Z", Zq}, {"relative_difference", rel}};
    r.checks.push_back(check_le("Z_closed_vs_quadrature", rel, cfg.tol_quad));
  } else {
    r.body["quadrature"] = nullptr;
    r.warnings.push_back("no quadrature cross-check: sphere rules cover d <= 3");
  }
  r.timings["constant"] = seconds_since(t0);
  return r;
}

CommandResult cmd_verify_optimizer(const Config& cfg, double s, double t) {
  const auto t0 = Clock::now();
  CommandResult r;
  r.command = "verify-optimizer";
  const DerivedParams dp = derive(cfg.params);
  const OptimizerE f(s, t, dp);
  const double C = optimal_constant(cfg.params, dp);

  const ModelE E(cfg.params, dp);
  const std::vector<double> dir = unit_diagonal(cfg.params.weight.dim());
  double el = 0;
  for (double rad : euler_lagrange_radii(f, 100)) {
    std::vector<double> x = dir;
    for (double& xi : x) xi *= rad;
    el = std::max(el, euler_lagrange_residual(E, f, x));
  }
  r.body["euler_lagrange_max_relative"] = el;
  r.checks.push_back(check_le("euler_lagrange", el, cfg.tol_identity));

  const CknSides sides = ckn_sides(radial_profile(f), cfg.params, dp, cfg.radial_options());
  const double rel = std::abs(sides.ratio - C) / C;
  r.body["ckn"] = {{"lhs", sides.lhs}, {"rhs", sides.rhs}, {"ratio", sides.ratio}, {"C_opt", C},
                   {"relative_difference", rel}};
  r.checks.push_back(check_le("ckn_ratio_vs_C_opt", rel, 1e-6));

  const OptimizerS v = conformal_E_to_S(f);
  const TightSides ts = tight_sobolev_sides([&](const Jet& y) { return v(y); }, dp, cfg.radial_options());
  r.body["tight_sobolev"] = {{"C", v.C()}, {"B", v.B()}, {"lhs", ts.lhs}, {"rhs", ts.rhs}};
  r.checks.push_back(check_le("tight_sobolev_equality", std::abs(ts.lhs - ts.rhs), cfg.tol_identity));

  if (cfg.params.weight.last_uncharged()) {
    const ModelS S(cfg.params, dp);
    const OptimizerS vn = v.normalized();
    double phi = 0;
    for (double y : {-0.9, -0.5, 0.0, 0.5, 0.9}) phi = std::max(phi, phi_identity_residual(S, vn, y));
    r.body["phi_identity_max"] = phi;
    r.checks.push_back(check_le("phi_identity", phi, 1e-10));
  }
  if (dp.regime == Regime::Breaking)
    r.warnings.push_back("Breaking regime: the radial family is not optimal; ratio equals the radial constant only");
  r.timings["verify_optimizer"] = seconds_since(t0);
  return r;
}

CommandResult cmd_geometry(const Config& cfg, int samples, bool inject_bug) {
  const auto t0 = Clock::now();
  CommandResult r;
  r.command = "geometry";
  r.body["samples"] = samples;
  r.body["inject_bug"] = inject_bug;
  if (samples == 0) return r;
  const MonomialWeight& w = cfg.params.weight;
  if (!w.last_uncharged()) throw DomainError("geometry: the sphere chart needs A_d = 0");
  const DerivedParams dp = derive(cfg.params);
  const double eps = inject_bug ? 0.1 : 0.0;
  const ModelS S(cfg.params, dp, eps);
  const MonomialSphere& sphere = S.sphere();

  struct Sample {
    double cd, hess_residual, hess_slack, warped;
  };
  const std::uint64_t gseed = battery_seed(cfg.seed, kTagGeometry);
  const auto out = parallel::map(static_cast<std::size_t>(samples), [&](std::size_t i) {
    SplitMix64 rng = SplitMix64::stream(gseed, i);
    const SpherePoint pt = sphere.chart_point(random_sphere_point(rng, w));
    Sample s;
    const Jet f = random_cubic_jet(rng, sphere.chart_dim());
    s.cd = cd_sphere_defect(sphere, sphere.at(pt), f);
    const HessianBound h = hessian_W_bound_residual(sphere, pt, f);
    const double scale = std::max(1.0, std::abs(h.hessian));
    s.hess_residual = h.identity_residual / scale;
    s.hess_slack = h.bound_slack / scale;
    const double y = rng.uniform(-0.95, 0.95);
    s.warped = warped_identity(S, y, pt, random_cubic_jet(rng, S.dim())).residual;
    return s;
  });
  double cd = 1e300, hr = 0, hs = 1e300, wr = 0;
  for (const Sample& s : out) {
    cd = std::min(cd, s.cd);
    hr = std::max(hr, s.hess_residual);
    hs = std::min(hs, s.hess_slack);
    wr = std::max(wr, s.warped);
  }
  r.body["cd_defect_min"] = num(cd);
  r.body["hessian_identity_max"] = num(hr);
  r.body["hessian_slack_min"] = num(hs);
  r.body["warped_identity_max"] = num(wr);
  r.checks.push_back(check_ge("cd_defect_min", cd, -1e-9));
  r.checks.push_back(check_le("hessian_identity_max", hr, 1e-10));
  r.checks.push_back(check_ge("hessian_slack_min", hs, -1e-10));
  r.checks.push_back(check_le("warped_identity_max", wr, cfg.tol_identity));

  if (w.dim() > 3) {
    r.warnings.push_back("integration-by-parts and integrated CD skipped: sphere rules cover d <= 3");
    r.timings["geometry"] = seconds_since(t0);
    return r;
  }
  QuadratureOptions q = cfg.sphere_options();
  q.initial_nodes = std::min(q.initial_nodes, 16);
  q.rel_tol = std::max(q.rel_tol, 1e-10);
  const int d = w.dim();
  SplitMix64 rng(battery_seed(cfg.seed, kTagIbp));
  const AmbientFunction td = [](std::span<const Jet> t) { return t.back(); };
  double ibp_sphere = ibp_residual_sphere(sphere, td, td, q);
  const int nfun = std::min(samples, 2);
  for (int k = 0; k < nfun; ++k) {
    const TrigPolynomial f = TrigPolynomial::random(rng, d, 4, 2, {}, 2.0);
    const TrigPolynomial h = TrigPolynomial::random(rng, d, 4, 2, {}, 2.0);
    ibp_sphere = std::max(ibp_sphere, ibp_residual_sphere(sphere, f, h, q));
  }
  const CutoffFamily zeta(8);
  const auto breaks = zeta.breakpoints();
  const double margin = 1.0 / zeta.k();
  double ibp_S = 0;
  for (int k = 0; k < nfun; ++k) {
    const TrigPolynomial phi = TrigPolynomial::random(rng, d, 3, 2, {}, 1.0);
    const TrigPolynomial ft = TrigPolynomial::random(rng, d + 1, 3, 2, {}, 1.0);
    const AmbientFunction h = [&](std::span<const Jet> v) { return zeta(v[0]) * (v[0] * v[0] + 0.5) * phi(v.subspan(1)); };
    const AmbientFunction f = [&](std::span<const Jet> v) { return ft(v); };
    ibp_S = std::max(ibp_S, ibp_residual_S(S, f, h, margin, q, breaks));
  }
  r.body["ibp_sphere_max"] = ibp_sphere;
  r.body["ibp_S_max"] = ibp_S;
  r.checks.push_back(check_le("ibp_sphere_max", ibp_sphere, cfg.tol_identity));
  r.checks.push_back(check_le("ibp_S_max", ibp_S, cfg.tol_identity));

  if (dp.regime == Regime::Symmetric) {
    SplitMix64 irng(battery_seed(cfg.seed, kTagIntegrated));
    std::vector<bool> even(d + 1, false);
    for (int i = 0; i < d; ++i) even[i + 1] = w.charged(i);
    double icd_w = 1e300, icd_u = 1e300;
    const int nint = std::min(samples, 10);
    for (int k = 0; k < nint; ++k) {
      const TrigPolynomial t = TrigPolynomial::random(irng, d + 1, 4, 2, even, 0.9).shifted(1.0);
      const AmbientFunction g = [&](std::span<const Jet> v) { return t(v); };
      const double y = irng.uniform(-0.8, 0.8), nu = dp.n + irng.uniform(0.1, 3.0);
      const IntegratedCd c = integrated_cd_defect(S, g, nu, y, q);
      icd_w = std::min(icd_w, c.weighted);
      icd_u = std::min(icd_u, c.unweighted);
    }
    r.body["integrated_cd_min"] = {{"weighted", num(icd_w)}, {"unweighted", num(icd_u)}};
    r.checks.push_back(check_ge("integrated_cd_weighted_min", icd_w, -1e-9));
    r.checks.push_back(check_ge("integrated_cd_unweighted_min", icd_u, -1e-9));
  } else {
    r.body["integrated_cd_min"] = nullptr;
    r.warnings.push_back(std::string("integrated CD skipped: positivity is only claimed in the Symmetric regime (") +
                         std::string(to_string(dp.regime)) + ")");
  }
  r.timings["geometry"] = seconds_since(t0);
  return r;
}

CommandResult cmd_eigen(const Config& cfg, int degree) {
  const auto t0 = Clock::now();
  CommandResult r;
  r.command = "eigen";
  const DerivedParams dp = derive(cfg.params);
  const MonomialWeight& w = cfg.params.weight;
  SpectralOptions so;
  so.nodes = cfg.sphere_nodes;
  const double D = dp.D;
  const double lam = sphere_first_eigenvalue(w, degree, so);
  r.body["degree"] = degree;
  r.body["lambda_theta_1"] = lam;
  r.body["expected"] = D - 1;
  r.checks.push_back(check_le("lambda_theta_1_vs_D_minus_1", std::abs(lam - (D - 1)), cfg.tol_eigen));

  if (w.last_uncharged()) {
    const MonomialSphere sphere(w);
    const std::uint64_t eseed = battery_seed(cfg.seed, kTagEigen);
    const auto res = parallel::map(200, [&](std::size_t i) {
      SplitMix64 rng = SplitMix64::stream(eseed, i);
      const SpherePoint pt = sphere.chart_point(random_sphere_point(rng, w));
      const Jet t = sphere.embedding(pt).back();
      return std::abs(sphere.at(pt).generator(t) + (D - 1) * t.value());
    });
    const double worst = *std::max_element(res.begin(), res.end());
    r.body["theta_d_residual_max"] = worst;
    r.checks.push_back(check_le("theta_d_eigen_residual", worst, 1e-10));
  }

  const double gap = radial_spectral_gap_S(dp, degree, so);
  r.body["radial_gap"] = gap;
  r.body["alpha_sq_n"] = dp.fs_lhs * dp.n;
  r.checks.push_back(check_le("radial_gap_vs_alpha_sq_n", std::abs(gap - dp.fs_lhs * dp.n), cfg.tol_identity));
  const double full = spectral_gap_S(cfg.params, dp, degree, so);
  r.body["spectral_gap_estimate"] = full;
  r.body["half_D"] = D / 2;
  r.body["gap_at_least_half_D"] = full >= D / 2 - cfg.tol_eigen;

  const BreakingVerdict v = symmetry_breaking_detector(cfg.params, degree, so, lam);
  r.body["detector"] = {{"test_quotient", v.test_quotient},
                        {"threshold", v.threshold},
                        {"verdict", to_string(v.verdict)},
                        {"agrees_with_fs", v.agrees_with_fs}};
  if (w.last_uncharged()) {
    QuadratureOptions qo = cfg.sphere_options();
    qo.initial_nodes = std::min(qo.initial_nodes, 16);
    const TestQuotient q = nonradial_test_quotient(cfg.params, dp, lam, qo);
    const double rel = std::abs(q.quadrature - q.closed_form) / q.closed_form;
    r.body["detector"]["quotient_quadrature"] = q.quadrature;
    r.checks.push_back(check_le("test_quotient_closed_vs_quadrature", rel, cfg.tol_identity));
  }
  if (v.verdict == Verdict::Unstable) r.warnings.push_back("detector: radial optimizers are unstable (symmetry breaking)");
  r.timings["eigen"] = seconds_since(t0);
  return r;
}

CommandResult cmd_weyl(const Config& cfg, int samples) {
  const auto t0 = Clock::now();
  CommandResult r;
  r.command = "weyl";
  const DerivedParams dp = derive(cfg.params);
  const int k = cfg.params.weight.charged_count();
  const std::size_t chambers = std::size_t{1} << std::min(k, 16);
  const std::uint64_t wseed = battery_seed(cfg.seed, kTagWeyl);
  struct Outcome {
    bool ok;
  };
  const auto res = parallel::map(static_cast<std::size_t>(samples), [&](std::size_t i) {
    SplitMix64 rng = SplitMix64::stream(wseed, i);
    std::vector<double> m(std::max<std::size_t>(chambers, 2), 0.0);
    // half the draws are single-chamber vectors
    const bool single = (i % 2 == 0);
    if (single) {
      m[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(m.size()) - 1))] = rng.uniform(0.1, 2.0);
    } else {
      for (double& x : m) x = rng.uniform();
      m[0] += 0.01;
      m[1] += 0.01;
    }
    const WeylCheck c = weyl_extension_check(m, dp.p);
    const bool eq_numeric = std::abs(c.lp2 - c.l1) <= 1e-12 * c.l1;
    return Outcome{c.lp2 <= c.l1 * (1 + 1e-15) && c.equality == single && eq_numeric == single};
  });
  const auto failures = std::count_if(res.begin(), res.end(), [](const Outcome& o) { return !o.ok; });
  r.body["samples"] = samples;
  r.body["chambers"] = chambers;
  r.body["failures"] = failures;
  r.checks.push_back(check_le("weyl_failures", static_cast<double>(failures), 0.0));
  r.timings["weyl"] = seconds_since(t0);
  return r;
}

std::vector<ScanRow> cmd_scan(const Config& cfg) {
  SpectralOptions so;
  so.nodes = cfg.sphere_nodes;
  QuadratureOptions q = cfg.sphere_options();
  q.initial_nodes = std::min(q.initial_nodes, 16);
  return phase_scan(cfg.params.weight, cfg.scan, cfg.degree, so, q);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::ostringstream os;
  os << "a,b,alpha_sq,fs_bound,regime,lambda_theta_1,quotient,threshold,verdict,agree\n";
  for (const ScanRow& r : rows) {
    os << format_double(r.a) << ',' << format_double(r.b) << ',';
    if (!r.valid) {
      os << ",,Skipped,,,,Skipped,\n";
      continue;
    }
    os << format_double(r.dp.fs_lhs) << ',' << format_double(r.dp.fs_rhs) << ',' << to_string(r.dp.regime) << ','
       << format_double(r.verdict.lambda_theta_1) << ',' << format_double(r.verdict.test_quotient) << ','
       << format_double(r.verdict.threshold) << ',' << to_string(r.verdict.verdict) << ','
       << (r.verdict.agrees_with_fs ? "true" : "false") << '\n';
  }
  return os.str();
}

CommandResult scan_result(const Config& cfg, const std::vector<ScanRow>& rows) {
  (void)cfg;
  CommandResult r;
  r.command = "scan";
  Json arr = Json::array();
  int checked = 0, disagree = 0, skipped = 0;
  double worst_quotient = 0;
  for (const ScanRow& row : rows) {
    Json j;
    j["a"] = row.a;
    j["b"] = row.b;
    if (!row.valid) {
      ++skipped;
      j["skipped"] = row.skip_reason;
      arr.push_back(std::move(j));
      continue;
    }
    j["alpha_sq"] = row.dp.fs_lhs;
    j["fs_bound"] = row.dp.fs_rhs;
    j["regime"] = std::string(to_string(row.dp.regime));
    j["lambda_theta_1"] = row.verdict.lambda_theta_1;
    j["quotient"] = row.verdict.test_quotient;
    j["quotient_quadrature"] = row.quotient_quadrature;
    j["threshold"] = row.verdict.threshold;
    j["verdict"] = to_string(row.verdict.verdict);
    j["agree"] = row.verdict.agrees_with_fs;
    arr.push_back(std::move(j));
    if (row.quotient_quadrature != 0.0)
      worst_quotient = std::max(worst_quotient, std::abs(row.quotient_quadrature - row.verdict.test_quotient) /
                                                    row.verdict.test_quotient);
    if (std::abs(row.dp.fs_lhs - row.dp.fs_rhs) > 1e-3) {
      ++checked;
      if (!row.verdict.agrees_with_fs) ++disagree;
    }
  }
  r.body["rows"] = std::move(arr);
  r.body["summary"] = {{"rows", rows.size()}, {"skipped", skipped}, {"checked", checked}, {"disagreements", disagree}};
  r.checks.push_back(check_le("disagreements_outside_margin", disagree, 0.0));
  r.checks.push_back(check_le("quotient_closed_vs_quadrature", worst_quotient, cfg.tol_identity));
  return r;
}

CommandResult cmd_report(const Config& cfg) {
  const auto t0 = Clock::now();
  CommandResult r;
  r.command = "report";
  r.merge("derive", cmd_derive(cfg));
  r.merge("constant", cmd_constant(cfg));
  r.merge("optimizer", cmd_verify_optimizer(cfg, 1.0, 1.0));
  const MonomialWeight& w = cfg.params.weight;
  if (w.last_uncharged()) {
    r.merge("geometry", cmd_geometry(cfg, cfg.samples, false));
  } else {
    r.body["geometry"] = nullptr;
    r.warnings.push_back("geometry skipped: the sphere chart needs A_d = 0");
  }
  if (w.dim() <= 3) {
    r.merge("eigen", cmd_eigen(cfg, cfg.degree));
  } else {
    r.body["eigen"] = nullptr;
    r.warnings.push_back("eigen skipped: sphere rules cover d <= 3");
  }
  r.merge("weyl", cmd_weyl(cfg, 1000));
  r.timings["total"] = seconds_since(t0);
  return r;
}

Json to_json(const CommandResult& r, const Config& cfg) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = r.command;
  j["config"] = cfg.echo();
  for (auto& [k, v] : r.body.items()) j[k] = v;
  Json checks = Json::array();
  for (const Check& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", num(c.value)}, {"relation", c.relation},
                      {"tolerance", c.tolerance}, {"pass", c.pass}});
  j["checks"] = std::move(checks);
  j["warnings"] = r.warnings;
  j["status"] = r.ok() ? "pass" : "fail";
  j["timings"] = r.timings;
  return j;
}

std::string checks_csv(const CommandResult& r) {
  std::ostringstream os;
  os << "name,value,relation,tolerance,pass\n";
  for (const Check& c : r.checks)
    os << c.name << ',' << format_double(c.value) << ',' << c.relation << ',' << format_double(c.tolerance) << ','
       << (c.pass ? "true" : "false") << '\n';
  return os.str();
}

std::string summary_line(const CommandResult& r) {
  const auto passed = std::count_if(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
  std::ostringstream os;
  os << "ckn " << r.command << ": " << passed << "/" << r.checks.size() << " checks passed";
  if (r.body.contains("derive")) os << ", regime " << r.body["derive"]["derived"]["regime"].get<std::string>();
  if (r.body.contains("eigen") && r.body["eigen"].is_object())
    os << ", detector " << r.body["eigen"]["detector"]["verdict"].get<std::string>();
  os << (r.ok() ? " [pass]" : " [fail]");
  return os.str();
}

Json strip_timings(Json j) {
  j.erase("timings");
  return j;
}

}  // namespace ckn
