#pragma once

// The two-pole kernel K_z(zeta, zeta0) = (1/(pi i)) z / ((zeta - zeta0)^2 - z^2),
// its normalization over the curve and empirical fits of its decay constants.

#include <algorithm>
#include <cmath>
#include <vector>

#include "hardylip/curve.hpp"
#include "hardylip/quadrature.hpp"

namespace hardylip {

inline cplx k_kernel(cplx zeta, cplx zeta0, cplx z) {
  const cplx d = zeta - zeta0;
  const cplx den = d * d - z * z;
  if (std::abs(den) <= 1e-300 || std::abs(d - z) == 0.0 || std::abs(d + z) == 0.0) {
    throw HardyError("degenerate kernel: z = +-(zeta - zeta0)");
  }
  return z / (pi * I * den);
}

/// (1/(2 pi i)) (1/(zeta - (zeta0 + z)) - 1/(zeta - (zeta0 - z)))
inline cplx k_kernel_two_pole(cplx zeta, cplx zeta0, cplx z) {
  const cplx a = zeta - (zeta0 + z), b = zeta - (zeta0 - z);
  if (a == cplx(0.0, 0.0) || b == cplx(0.0, 0.0)) throw HardyError("degenerate kernel: z = +-(zeta - zeta0)");
  return (1.0 / a - 1.0 / b) / (2.0 * pi * I);
}

/// int_Gamma K_z(zeta, zeta0) dzeta; equals 1 when zeta0 + z lies above the
/// curve and zeta0 - z below it.
inline QuadratureResult kernel_normalization(const LipschitzGraph& g, cplx zeta0, cplx z, double tol) {
  ContourIntegrand ig;
  ig.decay_exponent = 2.0;
  ig.singular_points = {zeta0 + z, zeta0 - z};
  ig.evaluator = [zeta0, z](cplx zeta, cplx dz) { return k_kernel(zeta, zeta0, z) * dz; };
  return integrate_curve(g, 0.0, ig, tol);
}

struct KernelBoundFit {
  /// max over all samples
  double constant = 0.0;
  /// per entry of the scale grid (tau or |z|)
  std::vector<double> per_scale;
  /// (max - min) / max over per_scale
  double relative_spread = 0.0;
};

namespace detail {

inline KernelBoundFit finish_fit(std::vector<double> per) {
  KernelBoundFit fit;
  fit.per_scale = std::move(per);
  if (fit.per_scale.empty()) return fit;
  auto [lo, hi] = std::minmax_element(fit.per_scale.begin(), fit.per_scale.end());
  fit.constant = *hi;
  fit.relative_spread = *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
  return fit;
}

}  // namespace detail

/// Fits C in |K_{i tau}(zeta, zeta0)| <= C tau / (|zeta - zeta0|^2 + tau^2)
/// over the boundary samples zeta(u), u in sample_u, for each tau.
inline KernelBoundFit kernel_bound_check(const LipschitzGraph& g, double u0,
                                         const std::vector<double>& tau_grid,
                                         const std::vector<double>& sample_u) {
  const cplx zeta0 = g.zeta(u0);
  std::vector<double> per;
  for (double tau : tau_grid) {
    if (!(tau > 0.0)) throw HardyError("kernel bound needs tau > 0");
    double c = 0.0;
    for (double u : sample_u) {
      cplx zeta = g.zeta(u);
      double r2 = std::norm(zeta - zeta0);
      c = std::max(c, std::abs(k_kernel(zeta, zeta0, I * tau)) * (r2 + tau * tau) / tau);
    }
    per.push_back(c);
  }
  return detail::finish_fit(std::move(per));
}

/// Cone variant: fits C in |K_z(zeta, zeta0)| <= C |z| / (|zeta - zeta0|^2 + |z|^2)
/// for z = r e^{i theta} in the cone, one entry per radius.
inline KernelBoundFit kernel_bound_check_cone(const LipschitzGraph& g, const Cone& cone,
                                              const std::vector<double>& radii,
                                              const std::vector<double>& directions,
                                              const std::vector<double>& sample_u) {
  std::vector<double> per;
  for (double r : radii) {
    double c = 0.0;
    for (double th : directions) {
      cplx z = std::polar(r, th);
      if (!cone.contains_direction(th)) throw HardyError("direction outside the cone");
      for (double u : sample_u) {
        cplx zeta = g.zeta(u);
        double r2 = std::norm(zeta - cone.vertex);
        c = std::max(c, std::abs(k_kernel(zeta, cone.vertex, z)) * (r2 + r * r) / r);
      }
    }
    per.push_back(c);
  }
  return detail::finish_fit(std::move(per));
}

}  // namespace hardylip
