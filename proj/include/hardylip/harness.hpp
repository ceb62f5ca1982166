#pragma once

// Config-driven verification suites. Each suite produces records
// {suite, anchor, metric, value, tolerance, pass} and optional convergence
// tables; suites run on a worker pool and the report is assembled in the
// fixed suite order, so output bytes do not depend on scheduling.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hardylip/blaschke.hpp"
#include "hardylip/boundary.hpp"
#include "hardylip/conformal.hpp"
#include "hardylip/io.hpp"
#include "hardylip/kernel.hpp"
#include "hardylip/representation.hpp"
#include "hardylip/transform.hpp"

namespace hardylip {

inline constexpr const char* version_string = "1.0.0";

// ---------------------------------------------------------------- logging

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* v = std::getenv("HARDYLIP_LOG");
    std::string s = v ? v : "error";
    if (s == "debug") return LogLevel::Debug;
    if (s == "info") return LogLevel::Info;
    return LogLevel::Error;
  }();
  return level;
}

inline void log_msg(LogLevel level, const std::string& msg) {
  static std::mutex mu;
  if (static_cast<int>(level) > static_cast<int>(log_level())) return;
  static const char* names[] = {"error", "info", "debug"};
  std::lock_guard<std::mutex> lock(mu);
  std::fprintf(stderr, "[hardylip %s] %s\n", names[static_cast<int>(level)], msg.c_str());
}

// ---------------------------------------------------------------- config

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"kernel",     "isomorphism", "blaschke", "cauchy",  "boundary",
                                                 "membership", "pairing",     "decay",    "upgrade"};
  return names;
}

struct ProbeCounts {
  /// random interior samples (round trips, modulus checks)
  int interior = 1000;
  /// boundary-adjacent samples
  int boundary = 100;
  /// reconstruction points per side
  int points = 10;
  /// moment points below the curve
  int alphas = 20;
};

struct ExperimentConfig {
  std::string curve_name = "flat";
  LipschitzGraph curve = LipschitzGraph::flat();
  std::vector<double> p_values = {1.0, 2.0};
  double tolerance = 1e-8;
  TauGrid tau_grid;
  ProbeCounts probes;
  std::vector<std::string> suites;
  std::uint64_t seed = 1;
};

inline ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      static const std::vector<std::string> keys = {"curve", "p_values", "tolerance", "tau_grid",
                                                    "probes", "suites", "seed"};
      if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) {
        throw ConfigError("unknown config key: " + it.key());
      }
    }
    if (j.contains("curve")) {
      const auto& cj = j.at("curve");
      c.curve = curve_from_json(cj);
      c.curve_name = cj.is_string() ? cj.get<std::string>() : "custom";
    }
    if (j.contains("p_values")) c.p_values = j.at("p_values").get<std::vector<double>>();
    if (j.contains("tolerance")) c.tolerance = j.at("tolerance").get<double>();
    if (j.contains("tau_grid")) {
      const auto& t = j.at("tau_grid");
      c.tau_grid.min = t.value("min", c.tau_grid.min);
      c.tau_grid.max = t.value("max", c.tau_grid.max);
      c.tau_grid.count = t.value("count", c.tau_grid.count);
    }
    if (j.contains("probes")) {
      const auto& p = j.at("probes");
      c.probes.interior = p.value("interior", c.probes.interior);
      c.probes.boundary = p.value("boundary", c.probes.boundary);
      c.probes.points = p.value("points", c.probes.points);
      c.probes.alphas = p.value("alphas", c.probes.alphas);
    }
    if (j.contains("suites")) c.suites = j.at("suites").get<std::vector<std::string>>();
    if (j.contains("seed")) {
      if (!j.at("seed").is_number_integer() || j.at("seed").get<std::int64_t>() < 0) throw ConfigError("seed must be a non-negative integer");
      c.seed = j.at("seed").get<std::uint64_t>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (double p : c.p_values) {
    if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("p_values must be positive");
  }
  if (!(c.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
  if (!(c.tau_grid.min > 0.0) || !(c.tau_grid.max > c.tau_grid.min) || c.tau_grid.count < 2) {
    throw ConfigError("tau_grid needs 0 < min < max and count >= 2");
  }
  if (c.probes.interior < 1 || c.probes.boundary < 1 || c.probes.points < 1 || c.probes.alphas < 1) {
    throw ConfigError("probe counts must be positive");
  }
  for (const auto& s : c.suites) {
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end()) {
      throw ConfigError("unknown suite: " + s);
    }
  }
  return c;
}

// ---------------------------------------------------------------- report

/// Anchors name the property a record verifies.
inline const std::vector<std::string>& anchor_registry() {
  static const std::vector<std::string> anchors = {
      "kernel-two-pole-form",     "kernel-normalization",       "kernel-normalization-control",
      "kernel-bound",             "kernel-bound-cone",          "conformal-oracle",
      "conformal-round-trip",     "conformal-derivative-identity", "isomorphism-round-trip",
      "isomorphism-contraction",  "isomorphism-inverse-bounded", "blaschke-zeros",
      "blaschke-modulus",         "blaschke-boundary-modulus",  "deflation-ordering",
      "deflation-nonvanishing",   "deflation-recovery",         "cauchy-representation",
      "cauchy-annihilation-below", "ktau-representation",       "ktau-cauchy-consistency",
      "nontangential-limit",      "boundary-lp-convergence",    "membership-characterization",
      "membership-control",       "membership-linearity",       "annihilation-pairing",
      "annihilation-control",     "strip-decay",                "hp-upgrade",
      "hp-upgrade-control",       "suite-error"};
  return anchors;
}

enum class Cmp { AtMost, Below, AtLeast, Above, Finite };

struct Record {
  std::string suite;
  std::string anchor;
  std::string metric;
  double value = 0.0;
  double tolerance = 0.0;
  Cmp cmp = Cmp::AtMost;
  bool pass = false;
  std::string inputs;
};

inline bool evaluate(Cmp cmp, double value, double tol) {
  switch (cmp) {
    case Cmp::AtMost: return value <= tol;
    case Cmp::Below: return value < tol;
    case Cmp::AtLeast: return value >= tol;
    case Cmp::Above: return value > tol;
    case Cmp::Finite: return std::isfinite(value);
  }
  return false;
}

struct PlotRow {
  std::string series;
  double radius_or_tau;
  std::string direction;
  double value;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<Record> records;
  std::vector<PlotRow> plots;
  std::string version = version_string;
  double wall_time = 0.0;

  bool all_pass() const {
    return std::all_of(records.begin(), records.end(), [](const Record& r) { return r.pass; });
  }
};

struct SuiteOutput {
  std::string suite;
  std::vector<Record> records;
  std::vector<PlotRow> plots;

  void add(const std::string& anchor, const std::string& metric, double value, double tol, Cmp cmp,
           const std::string& inputs = "") {
    Record r{suite, anchor, metric, value, tol, cmp, evaluate(cmp, value, tol), inputs};
    log_msg(LogLevel::Debug, suite + " " + anchor + " " + metric + " " + std::to_string(value));
    records.push_back(std::move(r));
  }
};

inline std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

inline std::string fmt_c(cplx z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

// ---------------------------------------------------------------- suites

struct SuiteContext {
  const ExperimentConfig& config;
  const LipschitzGraph& graph;
  const SchwarzChristoffelMap& map;
  std::uint64_t seed;

  std::mt19937_64 rng() const { return std::mt19937_64(seed); }
  /// quadrature tolerance for norms (relative)
  double norm_tol() const { return std::clamp(0.01 * config.tolerance, 1e-10, 1e-6); }
};

namespace suites {

// non-kink abscissae spread over the breakpoint range
inline std::vector<double> base_abscissae(const LipschitzGraph& g, int count) {
  std::vector<double> out;
  const double lo = g.breakpoints().empty() ? -2.0 : g.breakpoints().front().first - 1.5;
  const double hi = g.breakpoints().empty() ? 2.0 : g.breakpoints().back().first + 1.5;
  for (int k = 0; k < count; ++k) {
    double u = lo + (hi - lo) * (k + 0.37) / count;
    while (g.is_breakpoint(u, 1e-6)) u += 0.05;
    out.push_back(u);
  }
  return out;
}

inline cplx random_above(const LipschitzGraph& g, std::mt19937_64& rng, double hmin, double hmax, double umax = 4.0) {
  std::uniform_real_distribution<double> uu(-umax, umax), hh(std::log(hmin), std::log(hmax));
  return g.zeta(uu(rng)) + I * std::exp(hh(rng));
}

inline cplx random_below(const LipschitzGraph& g, std::mt19937_64& rng, double hmin, double hmax, double umax = 4.0) {
  std::uniform_real_distribution<double> uu(-umax, umax), hh(std::log(hmin), std::log(hmax));
  return g.zeta(uu(rng)) - I * std::exp(hh(rng));
}

/// metric used for norm comparisons: the norm for p >= 1, its p-th power below
inline double hp_metric(double norm, double p) { return p >= 1.0 ? norm : std::pow(norm, p); }

inline void kernel(const SuiteContext& ctx, SuiteOutput& out) {
  const auto& g = ctx.graph;
  auto rng = ctx.rng();
  const double tol = ctx.config.tolerance;
  {
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    double worst = 0.0;
    for (int k = 0; k < ctx.config.probes.interior; ++k) {
      cplx zeta(d(rng), d(rng)), zeta0(d(rng), d(rng)), z(d(rng), d(rng));
      cplx a = k_kernel(zeta, zeta0, z), b = k_kernel_two_pole(zeta, zeta0, z);
      worst = std::max(worst, std::abs(a - b) / std::abs(a));
    }
    out.add("kernel-two-pole-form", "max_rel_diff", worst, 1e-13, Cmp::Below,
            std::to_string(ctx.config.probes.interior) + " random triples");
  }
  const auto us = base_abscissae(g, 3);
  for (double u0 : us) {
    for (double tau : {0.1, 1.0, 10.0}) {
      const cplx zeta0 = g.zeta(u0);
      auto r = kernel_normalization(g, zeta0, I * tau, 0.01 * tol);
      out.add("kernel-normalization", "abs_err", std::abs(r.value - 1.0), tol, Cmp::AtMost,
              "u0=" + fmt("%.4g", u0) + " tau=" + fmt("%.3g", tau));
    }
  }
  {
    // both poles above the curve: the integral vanishes
    const cplx zeta0 = g.zeta(us[1]) + 3.0 * I;
    auto r = kernel_normalization(g, zeta0, cplx(0.5, 0.0), 0.01 * tol);
    out.add("kernel-normalization-control", "abs_value", std::abs(r.value), tol, Cmp::AtMost,
            "zeta0+-z both above");
  }
  {
    // stability is checked on an outer segment; near a kink the maximising
    // zeta crosses the kink as tau grows and the fitted value dips
    const std::vector<double> taus = {0.01, 0.0316, 0.1, 0.316, 1.0, 3.16, 10.0};
    const double outer = g.breakpoints().empty() ? 0.5 : g.breakpoints().back().first + 1.5;
    auto samples_at = [](double u0) {
      std::vector<double> s;
      for (int k = -800; k <= 800; ++k) {
        if (k != 0) s.push_back(u0 + (k < 0 ? -1.0 : 1.0) * 1e-4 * std::pow(10.0, std::abs(k) / 100.0));
      }
      return s;
    };
    auto fit = kernel_bound_check(g, outer, taus, samples_at(outer));
    out.add("kernel-bound", "fitted_C", fit.constant, 0.0, Cmp::Finite, "u0=" + fmt("%.4g", outer));
    out.add("kernel-bound", "relative_spread_over_tau", fit.relative_spread, 0.05, Cmp::AtMost,
            "u0=" + fmt("%.4g", outer) + " tau in [0.01, 10]");
    auto near = kernel_bound_check(g, us[1], taus, samples_at(us[1]));
    out.add("kernel-bound", "fitted_C_near_kink", near.constant, 0.0, Cmp::Finite,
            "u0=" + fmt("%.4g", us[1]) + " spread=" + fmt("%.3g", near.relative_spread));
    for (std::size_t k = 0; k < taus.size(); ++k) {
      out.plots.push_back({"kernel-bound", taus[k], "fitted_C", fit.per_scale[k]});
      out.plots.push_back({"kernel-bound", taus[k], "fitted_C_near_kink", near.per_scale[k]});
    }
    Cone cone = make_cone(g, us[1], 0.5 * (std::abs(g.tangent_angle(us[1])) + pi / 2.0));
    std::vector<double> radii, dirs;
    for (int k = 0; k < 5; ++k) radii.push_back(0.5 * cone.safety_radius * std::pow(10.0, -k));
    for (int k = 1; k < 8; ++k) {
      double lo = cone.tangent_angle + cone.half_angle_param, hi = cone.tangent_angle + pi - cone.half_angle_param;
      dirs.push_back(lo + (hi - lo) * k / 8.0);
    }
    auto cfit = kernel_bound_check_cone(g, cone, radii, dirs, samples_at(us[1]));
    out.add("kernel-bound-cone", "fitted_C", cfit.constant, 0.0, Cmp::Finite, "cone at u0=" + fmt("%.4g", us[1]));
  }
}

inline void isomorphism(const SuiteContext& ctx, SuiteOutput& out) {
  const auto& g = ctx.graph;
  const auto& m = ctx.map;
  auto rng = ctx.rng();
  {
    std::uniform_real_distribution<double> xr(-5.0, 5.0), yl(std::log(0.1), std::log(10.0));
    double rt = 0.0, di = 0.0;
    for (int k = 0; k < ctx.config.probes.interior; ++k) {
      cplx z(xr(rng), std::exp(yl(rng)));
      cplx w = m.phi(z);
      rt = std::max(rt, std::abs(m.psi(w) - z) / (1.0 + std::abs(z)));
      di = std::max(di, std::abs(m.phi_prime(m.psi(w)) * m.psi_prime(w) - 1.0));
    }
    out.add("conformal-round-trip", "max_scaled_err", rt, 1e-8, Cmp::AtMost, "Im z in [0.1, 10]");
    out.add("conformal-derivative-identity", "max_abs_err", di, 1e-9, Cmp::AtMost, "");
    if (ctx.config.curve_name == "vee" || ctx.config.curve_name == "flat") {
      const bool vee = ctx.config.curve_name == "vee";
      double worst = 0.0;
      for (int k = 0; k < 20; ++k) {
        cplx z(xr(rng), std::exp(yl(rng)));
        cplx exact = vee ? std::polar(2.0, pi / 4.0) * std::sqrt(z + 1.0) : z;
        worst = std::max(worst, std::abs(m.phi(z) - exact) / std::abs(exact));
      }
      out.add("conformal-oracle", "max_rel_err", worst, vee ? 1e-6 : 0.0, Cmp::AtMost,
              vee ? "2 e^{i pi/4} sqrt(z+1)" : "identity");
    }
  }
  const auto& grid = ctx.config.tau_grid;
  const cplx alpha = g.zeta(0.3) - I;
  for (double p : ctx.config.p_values) {
    std::vector<AnalyticTestFunction> family = {transform_T_inv(power_generator(p), p, m),
                                                native_power(g, alpha, 2.0 / p)};
    const std::string ps = "p=" + fmt("%g", p);
    {
      // pointwise inverse identities
      const auto& f = power_generator(p);
      auto TTf = transform_T(family[0], p, m);
      auto TiT = transform_T_inv(transform_T(family[1], p, m), p, m);
      auto rng2 = ctx.rng();
      double e1 = 0.0, e2 = 0.0;
      std::uniform_real_distribution<double> xr(-4.0, 4.0), yl(std::log(0.05), std::log(5.0));
      for (int k = 0; k < 100; ++k) {
        cplx z(xr(rng2), std::exp(yl(rng2)));
        e1 = std::max(e1, std::abs(TTf(z) - f(z)) / std::abs(f(z)));
        cplx w = random_above(g, rng2, 0.05, 5.0);
        e2 = std::max(e2, std::abs(TiT(w) - family[1](w)) / std::abs(family[1](w)));
      }
      out.add("isomorphism-round-trip", "T_Tinv_max_rel_err", e1, 1e-8, Cmp::AtMost, ps);
      out.add("isomorphism-round-trip", "Tinv_T_max_rel_err", e2, 1e-8, Cmp::AtMost, ps);
    }
    const char* names[] = {"pushforward", "native"};
    for (std::size_t k = 0; k < family.size(); ++k) {
      const auto& F = family[k];
      auto TF = transform_T(F, p, m);
      auto nF = hardy_norm(F, p, grid, ctx.norm_tol());
      auto nTF = hardy_norm(TF, p, grid, ctx.norm_tol());
      double ratio = hp_metric(nTF.value, p) / hp_metric(nF.value, p);
      out.add("isomorphism-contraction", "norm_ratio_minus_1", ratio - 1.0, 5.0 * ctx.config.tolerance, Cmp::AtMost,
              ps + " " + names[k] + " |F|=" + fmt("%.10g", nF.value) + " |TF|=" + fmt("%.10g", nTF.value) +
                  " argmax_tau=" + fmt("%.3g", nF.argmax_tau));
      for (const auto& [t, v] : nF.table) out.plots.push_back({"norm:" + ps + ":" + names[k], t, "F", v});
    }
    {
      auto f = power_generator(p);
      auto nf = hardy_norm(f, p, grid, ctx.norm_tol());
      auto nF = hardy_norm(family[0], p, grid, ctx.norm_tol());
      double ratio = hp_metric(nF.value, p) / hp_metric(nf.value, p);
      out.add("isomorphism-inverse-bounded", "norm_ratio", ratio, 0.0, Cmp::Finite, ps);
    }
  }
}

// zero sets in domain coordinates, built from graph points
inline std::vector<std::vector<cplx>> zero_cases(const LipschitzGraph& g) {
  return {{g.zeta(0.1) + 2.0 * I},
          {g.zeta(0.5) + 1.0 * I, g.zeta(-1.2) + 1.5 * I},
          {g.zeta(0.3) + 0.7 * I, g.zeta(0.3) + 0.7 * I},
          {g.zeta(2.0) + 3.0 * I, g.zeta(-2.0) + 0.5 * I, g.zeta(0.1) + 1.2 * I},
          {g.zeta(-0.4) + 0.3 * I}};
}

inline double primary_p(const ExperimentConfig& c) {
  for (double p : c.p_values) {
    if (p >= 1.0) return p;
  }
  return c.p_values.empty() ? 2.0 : c.p_values.front();
}

inline void blaschke(const SuiteContext& ctx, SuiteOutput& out) {
  const auto& g = ctx.graph;
  const auto& m = ctx.map;
  auto rng = ctx.rng();
  const double p = primary_p(ctx.config);
  const auto cases = zero_cases(g);
  int index = 0;
  for (const auto& zeros : cases) {
    ++index;
    const std::string tag = "case " + std::to_string(index) + " (" + std::to_string(zeros.size()) + " zeros)";
    auto B = blaschke_domain(zeros, m);
    double at_zero = 0.0;
    for (cplx w : zeros) at_zero = std::max(at_zero, std::abs(B(w)));
    out.add("blaschke-zeros", "max_abs_B_at_zeros", at_zero, 1e-12, Cmp::AtMost, tag);
    double inside = 0.0;
    for (int k = 0; k < ctx.config.probes.interior; ++k) {
      inside = std::max(inside, std::abs(B(random_above(g, rng, 1e-3, 10.0))));
    }
    out.add("blaschke-modulus", "max_abs_B_interior", inside, 1.0, Cmp::Below, tag);
    double edge = 0.0;
    std::uniform_real_distribution<double> uu(-4.0, 4.0);
    for (int k = 0; k < ctx.config.probes.boundary; ++k) {
      double u = uu(rng);
      if (g.is_kink(u, 1e-6)) continue;
      double mod = std::abs(B(g.zeta(u) + I * 1e-6));
      edge = std::max(edge, mod > 1.0 ? 1.0 + (mod - 1.0) * 1e12 : 1.0 - mod);
    }
    out.add("blaschke-boundary-modulus", "max_one_minus_abs_B", edge, 1e-4, Cmp::AtMost, tag + " tau=1e-6");
    // F = T^-1(f B_+) vanishes exactly at the zeros; G = F / B
    auto Bu = blaschke_upper(preimage_zeros(zeros, m));
    auto f = power_generator(p);
    auto F = transform_T_inv(multiply(f, Bu), p, m);
    auto G = deflate_zeros(F, zeros, m);
    auto H = transform_T_inv(f, p, m);
    double rec = 0.0, gmin = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
      cplx w = random_above(g, rng, 0.05, 5.0);
      double near = std::numeric_limits<double>::infinity();
      for (cplx z : zeros) near = std::min(near, std::abs(w - z));
      if (near > 1e-3) rec = std::max(rec, std::abs(G(w) - H(w)) / std::abs(H(w)));
      gmin = std::min(gmin, std::abs(G(w)));
    }
    for (cplx z : zeros) {
      for (double r : {0.0, 5e-5, 5e-3}) gmin = std::min(gmin, std::abs(G(z + r * std::polar(1.0, 0.7))));
    }
    out.add("deflation-recovery", "max_rel_err", rec, 1e-8, Cmp::AtMost, tag);
    out.add("deflation-nonvanishing", "min_abs_G", gmin, 0.0, Cmp::Above, tag);
    auto nF = hardy_norm(F, p, ctx.config.tau_grid, ctx.norm_tol());
    auto nG = hardy_norm(G, p, ctx.config.tau_grid, ctx.norm_tol());
    out.add("deflation-ordering", "normF_minus_normG", hp_metric(nF.value, p) - hp_metric(nG.value, p),
            ctx.config.tolerance, Cmp::AtMost, tag + " p=" + fmt("%g", p));
  }
}

inline void cauchy(const SuiteContext& ctx, SuiteOutput& out) {
  const auto& g = ctx.graph;
  const auto& m = ctx.map;
  for (double p : ctx.config.p_values) {
    if (p < 1.0) continue;
    auto rng = ctx.rng();
    const std::string ps = "p=" + fmt("%g", p);
    auto F = transform_T_inv(power_generator(p), p, m);
    auto bd = boundary_data(F);
    const double normF = boundary_lp_norm(F, p, ctx.norm_tol());
    double above = 0.0, below = 0.0;
    int got = 0;
    while (got < ctx.config.probes.points) {
      cplx w = random_above(g, rng, 0.5, 4.0, 3.0);
      if (distance_to_graph(g, w) < 0.5) continue;
      ++got;
      cplx direct = F(w);
      auto r = cauchy_reconstruct(g, bd, w, 1e-3 * std::abs(direct) * 1e-6);
      above = std::max(above, std::abs(r.value - direct) / std::abs(direct));
    }
    got = 0;
    while (got < ctx.config.probes.points) {
      cplx w = random_below(g, rng, 0.5, 4.0, 3.0);
      if (distance_to_graph(g, w) < 0.5) continue;
      ++got;
      auto r = cauchy_reconstruct(g, bd, w, 1e-3 * normF * 1e-6);
      below = std::max(below, std::abs(r.value) / normF);
    }
    out.add("cauchy-representation", "max_rel_err", above, 1e-6, Cmp::AtMost, ps + " above, dist>=0.5");
    out.add("cauchy-annihilation-below", "max_abs_over_norm", below, 1e-6, Cmp::AtMost, ps + " below, dist>=0.5");
    // K_{i tau} reproduction at non-kink base points
    double kt = 0.0, cons = 0.0;
    const auto us = base_abscissae(g, ctx.config.probes.points);
    for (std::size_t k = 0; k < us.size(); ++k) {
      double tau = 0.2 * std::pow(15.0, static_cast<double>(k) / std::max<std::size_t>(1, us.size() - 1));
      cplx w = g.zeta(us[k]) + I * tau;
      cplx direct = F(w);
      auto r = ktau_reconstruct(g, bd, us[k], tau, 1e-9 * std::abs(direct));
      kt = std::max(kt, std::abs(r.value - direct) / std::abs(direct));
      auto c = cauchy_reconstruct(g, bd, w, 1e-9 * std::abs(direct));
      cons = std::max(cons, std::abs(r.value - c.value) / std::abs(direct));
    }
    out.add("ktau-representation", "max_rel_err", kt, 1e-6, Cmp::AtMost, ps);
    out.add("ktau-cauchy-consistency", "max_rel_diff", cons, 1e-8, Cmp::AtMost, ps);
  }
}

inline void boundary(const SuiteContext& ctx, SuiteOutput& out) {
  const auto& g = ctx.graph;
  const auto& m = ctx.map;
  const auto us = base_abscissae(g, 5);
  for (double p : ctx.config.p_values) {
    const std::string ps = "p=" + fmt("%g", p);
    auto F = transform_T_inv(power_generator(p), p, m);
    int violations = 0;
    double final_spread = 0.0;
    for (double u0 : us) {
      Cone cone = make_cone(g, u0, 0.5 * (std::abs(g.tangent_angle(u0)) + pi / 2.0));
      std::vector<double> radii;
      const double r0 = std::min(0.1, 0.5 * cone.safety_radius);
      for (int k = 0; k < 5; ++k) radii.push_back(r0 * std::pow(10.0, -k));
      auto nt = nontangential_limit(F, cone, radii);
      if (!nt.limit_detected) ++violations;
      final_spread = std::max(final_spread, nt.final_spread);
      const std::string series = "nt:" + ps + ":u0=" + fmt("%.4g", u0);
      for (const auto& row : nt.table) {
        out.plots.push_back({series, row.radius, "edge-lo", std::abs(row.values[0])});
        out.plots.push_back({series, row.radius, "axis", std::abs(row.values[1])});
        out.plots.push_back({series, row.radius, "edge-hi", std::abs(row.values[2])});
        out.plots.push_back({series, row.radius, "spread", row.spread});
      }
    }
    out.add("nontangential-limit", "points_without_decreasing_spread", violations, 0.0, Cmp::AtMost,
            ps + " 5 non-kink points");
    out.add("nontangential-limit", "max_final_spread", final_spread, 1e-3, Cmp::AtMost, ps);
    // consecutive entries differ by orders of magnitude; 1e-6 relative suffices
    auto table = boundary_lp_convergence(F, p, {1e-1, 1e-2, 1e-3, 1e-4, 1e-5}, std::max(ctx.norm_tol() * 100.0, 1e-6));
    int bad = 0;
    for (std::size_t k = 1; k < table.size(); ++k) bad += table[k].second < table[k - 1].second ? 0 : 1;
    for (const auto& [t, v] : table) out.plots.push_back({"lp:" + ps, t, "distance", v});
    out.add("boundary-lp-convergence", "non_decreasing_steps", bad, 0.0, Cmp::AtMost,
            ps + " tau 1e-1..1e-5, final=" + fmt("%.3e", table.back().second));
  }
}

inline std::vector<cplx> alpha_samples(const SuiteContext& ctx) {
  auto rng = ctx.rng();
  std::vector<cplx> out;
  while (static_cast<int>(out.size()) < ctx.config.probes.alphas) {
    cplx a = random_below(ctx.graph, rng, 0.1, 4.0, 4.0);
    if (distance_to_graph(ctx.graph, a) >= 0.05) out.push_back(a);
  }
  return out;
}

inline void membership(const SuiteContext& ctx, SuiteOutput& out) {
  const auto& g = ctx.graph;
  const auto& m = ctx.map;
  const auto alphas = alpha_samples(ctx);
  const double tol = 1e-7;
  std::vector<BoundaryData> traces;
  for (double p : ctx.config.p_values) {
    if (p < 1.0) continue;
    auto F = transform_T_inv(power_generator(p), p, m);
    traces.push_back(boundary_data(F));
    auto v = membership_test(g, traces.back(), alphas, tol);
    out.add("membership-characterization", "max_abs_moment", v.max_moment, tol, Cmp::AtMost,
            "p=" + fmt("%g", p) + " " + std::to_string(alphas.size()) + " alphas");
  }
  if (traces.size() >= 2) {
    auto v = membership_test(g, cplx(0.7, 0.2) * traces[0] + traces[1], alphas, tol);
    out.add("membership-linearity", "max_abs_moment", v.max_moment, tol, Cmp::AtMost, "combination of two traces");
  }
  // control: 1/(zeta - w+) with w+ above the curve is not a boundary trace
  const cplx wp = g.zeta(0.2) + 1.0 * I;
  BoundaryData ctl{[wp](cplx z) { return 1.0 / (z - wp); }, 1.0, {wp}};
  auto v = membership_test(g, ctl, alphas, tol);
  double min_moment = std::numeric_limits<double>::infinity(), oracle = 0.0;
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    min_moment = std::min(min_moment, std::abs(v.moments[k]));
    oracle = std::max(oracle, std::abs(v.moments[k] - 2.0 * pi * I / (wp - alphas[k])));
  }
  out.add("membership-control", "verdict_pass", v.pass ? 1.0 : 0.0, 0.0, Cmp::AtMost, "pole above at " + fmt_c(wp));
  out.add("membership-control", "min_abs_moment", min_moment, 1e-3, Cmp::AtLeast, "margin");
  out.add("membership-control", "max_oracle_err", oracle, 1e-6, Cmp::AtMost, "2 pi i / (w+ - alpha)");
}

inline void pairing(const SuiteContext& ctx, SuiteOutput& out) {
  const auto& g = ctx.graph;
  const auto& m = ctx.map;
  const double tol = 1e-7;
  const cplx alpha = g.zeta(-0.6) - 0.8 * I;
  for (double p : ctx.config.p_values) {
    if (p < 1.0) continue;
    auto F = transform_T_inv(power_generator(p), p, m);
    std::string tag;
    QuadratureResult r;
    if (p == 1.0) {
      auto G = cauchy_pole(g, alpha);
      r = annihilation_pairing(g, boundary_data(F), boundary_data(G), 1e-3 * tol);
      tag = "p=1 q=inf, G=1/(w-alpha)";
    } else {
      double q = p / (p - 1.0);
      auto G = transform_T_inv(power_generator(q), q, m);
      r = annihilation_pairing(g, boundary_data(F), boundary_data(G), 1e-3 * tol);
      tag = "p=" + fmt("%g", p) + " q=" + fmt("%g", q);
    }
    out.add("annihilation-pairing", "abs_integral", std::abs(r.value), tol, Cmp::AtMost, tag);
  }
  {
    // G analytic below the curve with a pole above: the pairing picks up 2 pi i F(w+)
    const double p = primary_p(ctx.config);
    auto F = transform_T_inv(power_generator(p), p, m);
    const cplx wp = g.zeta(0.4) + 0.9 * I;
    BoundaryData G{[wp](cplx z) { return 1.0 / (z - wp); }, 1.0, {wp}};
    auto r = annihilation_pairing(g, boundary_data(F), G, 1e-10);
    cplx oracle = 2.0 * pi * I * F(wp);
    out.add("annihilation-control", "abs_integral", std::abs(r.value), 1e-3, Cmp::AtLeast, "pole above");
    out.add("annihilation-control", "oracle_err", std::abs(r.value - oracle), 1e-6, Cmp::AtMost, "2 pi i F(w+)");
  }
}

inline void decay(const SuiteContext& ctx, SuiteOutput& out) {
  const auto& g = ctx.graph;
  const auto& m = ctx.map;
  const std::vector<double> us = {0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0};
  auto B = blaschke_domain({g.zeta(0.2) + 1.0 * I}, m);
  for (double p : ctx.config.p_values) {
    const std::string ps = "p=" + fmt("%g", p);
    auto F = transform_T_inv(power_generator(p), p, m);
    auto table = strip_decay_probe(F, 0.5, 2.0, 0.1, us);
    auto FB = multiply(F, B);
    auto tb = strip_decay_probe(FB, 0.5, 2.0, 0.1, us);
    int bad = 0, bad_b = 0;
    // monotone decay is asserted on the tail |u| >= 1; near a kink the sup may first grow
    for (std::size_t k = 0; k < table.size(); ++k) {
      if (k > 0 && table[k - 1].first >= 1.0) bad += table[k].second < table[k - 1].second ? 0 : 1;
      bad_b += tb[k].second <= table[k].second ? 0 : 1;
    }
    // plot series run toward the boundary at infinity: radius 1/(1+|u|)
    for (const auto& [u, v] : table) out.plots.push_back({"strip:" + ps, 1.0 / (1.0 + u), "sup_abs_F", v});
    out.add("strip-decay", "non_decreasing_steps", bad, 0.0, Cmp::AtMost,
            ps + " strip [0.6, 1.9], |u| >= 1, ratio u=100/u=0: " + fmt("%.3e", table.back().second / table.front().second));
    out.add("strip-decay", "blaschke_product_exceeds_F", bad_b, 0.0, Cmp::AtMost, ps + " |F B| <= |F|");
  }
}

inline void upgrade(const SuiteContext& ctx, SuiteOutput& out) {
  const auto& g = ctx.graph;
  const auto& m = ctx.map;
  const auto& grid = ctx.config.tau_grid;
  {
    auto F = transform_T_inv(power_generator(1.0), 1.0, m);
    auto v = hp_upgrade_check(F, 1.0, 2.0, grid, ctx.norm_tol());
    out.add("hp-upgrade", "H2_norm", v.norm_q.value, 0.0, Cmp::Finite, "T^-1 generator certified in H^1");
  }
  {
    auto Z = zero_function(DomainTag::AboveGraph, g);
    auto v = hp_upgrade_check(Z, 1.0, 2.0, grid, ctx.norm_tol());
    out.add("hp-upgrade", "H2_norm_zero", v.norm_q.value, 0.0, Cmp::Finite, "F = 0");
  }
  {
    const double ub = suites::base_abscissae(g, 3)[1];
    auto C = boundary_singular_control(g, ub, g.zeta(ub) - 1.0 * I);
    auto ok = hp_upgrade_check(C, 1.0, 1.5, grid, ctx.norm_tol());
    out.add("hp-upgrade", "H1.5_norm_control", ok.norm_q.value, 0.0, Cmp::Finite, "control in H^q for q < 2");
    auto bad = hp_upgrade_check(C, 1.0, 2.0, grid, ctx.norm_tol());
    out.add("hp-upgrade-control", "divergence_detected", bad.pass ? 0.0 : 1.0, 1.0, Cmp::AtLeast,
            "trace not in L^2");
  }
}

}  // namespace suites

using SuiteFn = std::function<void(const SuiteContext&, SuiteOutput&)>;

inline SuiteFn suite_function(const std::string& name) {
  static const std::map<std::string, SuiteFn> table = {
      {"kernel", suites::kernel},       {"isomorphism", suites::isomorphism}, {"blaschke", suites::blaschke},
      {"cauchy", suites::cauchy},       {"boundary", suites::boundary},       {"membership", suites::membership},
      {"pairing", suites::pairing},     {"decay", suites::decay},             {"upgrade", suites::upgrade}};
  return table.at(name);
}

/// Runs the selected suites; failures inside a suite become failing records.
inline ExperimentReport run(const ExperimentConfig& config, unsigned workers = 0) {
  auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = config;
  std::vector<std::string> selected;
  for (const auto& s : suite_names()) {
    if (std::find(config.suites.begin(), config.suites.end(), s) != config.suites.end()) selected.push_back(s);
  }
  if (selected.empty()) return report;
  const SchwarzChristoffelMap map = sc_solve(config.curve);
  for (const auto& w : map.warnings()) log_msg(LogLevel::Info, w);
  std::vector<SuiteOutput> outputs(selected.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t k = next++; k < selected.size(); k = next++) {
      const auto& name = selected[k];
      outputs[k].suite = name;
      const auto idx = static_cast<std::uint64_t>(
          std::find(suite_names().begin(), suite_names().end(), name) - suite_names().begin());
      std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                        static_cast<std::uint32_t>(idx)};
      std::uint32_t s[2];
      seq.generate(s, s + 2);
      SuiteContext ctx{config, config.curve, map, (static_cast<std::uint64_t>(s[0]) << 32) | s[1]};
      log_msg(LogLevel::Info, "suite " + name + " started");
      try {
        suite_function(name)(ctx, outputs[k]);
      } catch (const std::exception& e) {
        outputs[k].add("suite-error", "exception", std::numeric_limits<double>::quiet_NaN(), 0.0, Cmp::Finite,
                       e.what());
        log_msg(LogLevel::Error, "suite " + name + ": " + e.what());
      }
      log_msg(LogLevel::Info, "suite " + name + " finished");
    }
  };
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(selected.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < workers; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& o : outputs) {
    report.records.insert(report.records.end(), o.records.begin(), o.records.end());
    report.plots.insert(report.plots.end(), o.plots.begin(), o.plots.end());
  }
  auto rank = [](const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) - v.begin(); };
  std::stable_sort(report.records.begin(), report.records.end(), [&](const Record& a, const Record& b) {
    auto ka = std::make_pair(rank(suite_names(), a.suite), rank(anchor_registry(), a.anchor));
    auto kb = std::make_pair(rank(suite_names(), b.suite), rank(anchor_registry(), b.anchor));
    return ka < kb;
  });
  report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// ---------------------------------------------------------------- output

inline std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string report_csv(const ExperimentReport& r) {
  std::string out = "suite,anchor,metric,value,tolerance,pass\n";
  for (const auto& rec : r.records) {
    out += csv_field(rec.suite) + "," + csv_field(rec.anchor) + "," + csv_field(rec.metric) + "," +
           csv_number(rec.value) + "," + csv_number(rec.tolerance) + "," + (rec.pass ? "true" : "false") + "\n";
  }
  return out;
}

/// Long-form convergence data; each series is emitted with strictly
/// decreasing radius_or_tau and the series name folded into the direction
/// column as "series/direction".
inline std::string plotdata_csv(const ExperimentReport& r) {
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> groups;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& row : r.plots) {
    auto key = std::make_pair(row.series, row.direction);
    if (!groups.count(key)) order.push_back(key);
    groups[key].emplace_back(row.radius_or_tau, row.value);
  }
  std::string out = "radius_or_tau,direction,value\n";
  for (const auto& key : order) {
    auto rows = groups[key];
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    double last = std::numeric_limits<double>::infinity();
    for (const auto& [t, v] : rows) {
      if (!(t < last)) continue;
      last = t;
      out += csv_number(t) + "," + csv_field(key.first + "/" + key.second) + "," + csv_number(v) + "\n";
    }
  }
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed: " + path);
}

inline void emit_csv(const ExperimentReport& r, const std::string& path) { write_text(path, report_csv(r)); }

inline void emit_convergence_plotdata(const ExperimentReport& r, const std::string& path) {
  write_text(path, plotdata_csv(r));
}

inline json report_json(const ExperimentReport& r) {
  json recs = json::array();
  for (const auto& rec : r.records) {
    recs.push_back({{"suite", rec.suite},
                    {"anchor", rec.anchor},
                    {"metric", rec.metric},
                    {"inputs", rec.inputs},
                    {"measured", std::isfinite(rec.value) ? json(rec.value) : json(csv_number(rec.value))},
                    {"tolerance", rec.tolerance},
                    {"pass", rec.pass}});
  }
  return {{"environment", {{"version", r.version}, {"seed", r.config.seed}, {"wall_time", r.wall_time}}},
          {"curve", curve_to_json(r.config.curve)},
          {"records", recs},
          {"all_pass", r.all_pass()}};
}

}  // namespace hardylip
