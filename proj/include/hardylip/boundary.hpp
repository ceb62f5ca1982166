#pragma once

// Boundary behaviour of Hardy functions: non-tangential limits inside cones,
// L^p convergence of the shifted restrictions to the boundary trace, uniform
// decay in horizontal strips, and upgrading H^p to H^q.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "hardylip/curve.hpp"
#include "hardylip/function.hpp"
#include "hardylip/quadrature.hpp"
#include "hardylip/transform.hpp"

namespace hardylip {

struct NTLimitRow {
  double radius;
  std::array<cplx, 3> values;  // edge, axis, edge
  double spread;               // max pairwise difference
};

struct NTLimitResult {
  cplx estimate{};
  std::vector<NTLimitRow> table;
  /// spreads strictly decreasing as r decreases
  bool limit_detected = false;
  double final_spread = 0.0;
};

/// Samples F at zeta0 + r e^{i theta} for the two edge directions
/// phi0 + phi + eps, phi0 + pi - phi - eps and the axis phi0 + pi/2.
inline NTLimitResult nontangential_limit(const AnalyticTestFunction& F, const Cone& cone,
                                         const std::vector<double>& radii, double eps = 1e-3) {
  if (radii.empty()) throw HardyError("no radii");
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0 && radii[k] < cone.safety_radius)) throw HardyError("radius outside (0, delta)");
    if (k > 0 && !(radii[k] < radii[k - 1])) throw HardyError("radii must decrease");
  }
  const double phi0 = cone.tangent_angle, phi = cone.half_angle_param;
  if (!(phi + eps < pi / 2.0)) throw HardyError("cone too narrow for the edge offset");
  const std::array<double, 3> dirs = {phi0 + phi + eps, phi0 + pi / 2.0, phi0 + pi - phi - eps};
  NTLimitResult res;
  for (double r : radii) {
    NTLimitRow row{r, {}, 0.0};
    for (int d = 0; d < 3; ++d) row.values[d] = F(cone.vertex + std::polar(r, dirs[d]));
    for (int a = 0; a < 3; ++a) {
      for (int b = a + 1; b < 3; ++b) row.spread = std::max(row.spread, std::abs(row.values[a] - row.values[b]));
    }
    res.table.push_back(row);
  }
  res.estimate = res.table.back().values[1];
  res.final_spread = res.table.back().spread;
  res.limit_detected = true;
  for (std::size_t k = 1; k < res.table.size(); ++k) {
    res.limit_detected = res.limit_detected && res.table[k].spread < res.table[k - 1].spread;
  }
  return res;
}

/// Distance in L^p(Gamma, |dzeta|) between F on the shifted curve and its
/// boundary trace; for p < 1 the metric value int |.|^p is reported.
inline double shifted_trace_distance(const AnalyticTestFunction& F, double tau, double p, double tol) {
  if (!(tau > 0.0)) throw HardyError("tau must be positive");
  const LipschitzGraph& g = F.graph();
  ContourIntegrand ig;
  ig.decay_exponent = p * F.decay();
  ig.singular_points = detail::norm_singular_points(F);
  ig.evaluator = [&F, tau, p](cplx zeta, cplx dz) -> cplx {
    return std::pow(std::abs(F(zeta + I * tau) - F.trace(zeta)), p) * std::abs(dz);
  };
  auto coarse = integrate_curve(g, 0.0, ig, 1e-3);
  double scale = std::abs(coarse.value);
  if (scale == 0.0) return 0.0;
  double v = integrate_curve(g, 0.0, ig, tol * scale).value.real();
  v = std::max(0.0, v);
  return p >= 1.0 ? std::pow(v, 1.0 / p) : v;
}

/// (tau, distance) rows for a decreasing tau list.
inline std::vector<std::pair<double, double>> boundary_lp_convergence(const AnalyticTestFunction& F, double p,
                                                                      const std::vector<double>& taus,
                                                                      double tol = 1e-6) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (k > 0 && !(taus[k] < taus[k - 1])) throw HardyError("tau list must decrease");
    out.emplace_back(taus[k], shifted_trace_distance(F, taus[k], p, tol));
  }
  return out;
}

/// For each |u| of the grid, sup of |F(zeta(+-u) + i tau)| over
/// tau in [tau1 + delta, tau2 - delta].
inline std::vector<std::pair<double, double>> strip_decay_probe(const AnalyticTestFunction& F, double tau1,
                                                                double tau2, double delta,
                                                                const std::vector<double>& u_grid,
                                                                int tau_samples = 9) {
  if (!(tau1 > 0.0 && tau2 > tau1 && delta > 0.0 && delta < 0.5 * (tau2 - tau1))) {
    throw HardyError("invalid strip");
  }
  const LipschitzGraph& g = F.graph();
  std::vector<std::pair<double, double>> out;
  const double lo = tau1 + delta, hi = tau2 - delta;
  for (double u : u_grid) {
    double sup = 0.0;
    for (int k = 0; k < tau_samples; ++k) {
      double tau = lo + (hi - lo) * k / std::max(1, tau_samples - 1);
      sup = std::max({sup, std::abs(F(g.zeta(std::abs(u)) + I * tau)), std::abs(F(g.zeta(-std::abs(u)) + I * tau))});
    }
    out.emplace_back(std::abs(u), sup);
  }
  return out;
}

struct UpgradeVerdict {
  bool pass = false;
  /// L^q norm of the boundary trace (infinite when it diverges)
  double boundary_lq = 0.0;
  HardyNormResult norm_q;
};

/// A function in H^p whose boundary trace lies in L^q (q > p) is in H^q;
/// PASS iff the H^q norm over the tau grid is finite.
inline UpgradeVerdict hp_upgrade_check(const AnalyticTestFunction& F, double p, double q, const TauGrid& grid = {},
                                       double tol = 1e-6) {
  if (!(p < q)) throw HardyError("upgrade needs p < q");
  if (!F.certified_in(p)) throw HardyError("function not certified in H^p");
  UpgradeVerdict v;
  try {
    v.boundary_lq = boundary_lp_norm(F, q, tol);
  } catch (const QuadratureError&) {
    v.boundary_lq = std::numeric_limits<double>::infinity();
  }
  if (!std::isfinite(v.boundary_lq)) {
    v.norm_q.divergent = true;
    v.norm_q.value = std::numeric_limits<double>::infinity();
    return v;
  }
  v.norm_q = hardy_norm(F, q, grid, tol);
  v.pass = !v.norm_q.divergent && std::isfinite(v.norm_q.value);
  return v;
}

}  // namespace hardylip
