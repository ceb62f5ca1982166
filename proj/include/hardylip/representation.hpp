#pragma once

// Integral representations through boundary values: Cauchy and K_{i tau}
// reproduction, the moment test for boundary traces and the annihilation
// pairing of conjugate Hardy functions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "hardylip/function.hpp"
#include "hardylip/kernel.hpp"
#include "hardylip/quadrature.hpp"

namespace hardylip {

/// Boundary values on the curve with their decay certificate.
struct BoundaryData {
  std::function<cplx(cplx)> value;
  double decay = 0.0;
  std::vector<cplx> singular_points;
};

inline BoundaryData boundary_data(const AnalyticTestFunction& F) {
  if (!F.has_trace()) throw HardyError("function has no boundary trace");
  return {[F](cplx zeta) { return F.trace(zeta); }, F.decay(), F.singular_points()};
}

inline BoundaryData operator+(const BoundaryData& a, const BoundaryData& b) {
  std::vector<cplx> sp = a.singular_points;
  sp.insert(sp.end(), b.singular_points.begin(), b.singular_points.end());
  return {[a, b](cplx z) { return a.value(z) + b.value(z); }, std::min(a.decay, b.decay), std::move(sp)};
}

inline BoundaryData operator*(cplx c, const BoundaryData& a) {
  return {[a, c](cplx z) { return c * a.value(z); }, a.decay, a.singular_points};
}

/// Points closer than this to the curve are rejected by the reconstructions.
inline constexpr double near_curve_band = 1e-3;

/// (1/(2 pi i)) int_Gamma F(zeta) / (zeta - w) dzeta with absolute tolerance tol.
inline QuadratureResult cauchy_reconstruct(const LipschitzGraph& g, const BoundaryData& F, cplx w, double tol) {
  if (distance_to_graph(g, w) < near_curve_band) throw HardyError("evaluation point too close to the curve");
  ContourIntegrand ig;
  ig.decay_exponent = F.decay + 1.0;
  ig.singular_points = F.singular_points;
  ig.singular_points.push_back(w);
  const double c = 1.0 / (2.0 * pi);
  ig.evaluator = [&F, w, c](cplx zeta, cplx dz) { return F.value(zeta) / (zeta - w) * dz * (-I * c); };
  return integrate_curve(g, 0.0, ig, tol);
}

/// int_Gamma K_{i tau}(zeta, zeta0) F(zeta) dzeta for zeta0 = zeta(u0).
inline QuadratureResult ktau_reconstruct(const LipschitzGraph& g, const BoundaryData& F, double u0, double tau,
                                         double tol) {
  if (!(tau > 0.0)) throw HardyError("tau must be positive");
  if (g.is_kink(u0, 1e-10)) throw HardyError("base point at a kink");
  const cplx zeta0 = g.zeta(u0);
  if (distance_to_graph(g, zeta0 + I * tau) < near_curve_band ||
      distance_to_graph(g, zeta0 - I * tau) < near_curve_band) {
    throw HardyError("kernel poles too close to the curve");
  }
  ContourIntegrand ig;
  ig.decay_exponent = F.decay + 2.0;
  ig.singular_points = F.singular_points;
  ig.singular_points.push_back(zeta0 + I * tau);
  ig.singular_points.push_back(zeta0 - I * tau);
  ig.evaluator = [&F, zeta0, tau](cplx zeta, cplx dz) { return k_kernel(zeta, zeta0, I * tau) * F.value(zeta) * dz; };
  return integrate_curve(g, 0.0, ig, tol);
}

/// int_Gamma F(zeta) / (zeta - alpha) dzeta
inline QuadratureResult cauchy_moment(const LipschitzGraph& g, const BoundaryData& F, cplx alpha, double tol) {
  if (distance_to_graph(g, alpha) < near_curve_band) throw HardyError("moment point too close to the curve");
  ContourIntegrand ig;
  ig.decay_exponent = F.decay + 1.0;
  ig.singular_points = F.singular_points;
  ig.singular_points.push_back(alpha);
  ig.evaluator = [&F, alpha](cplx zeta, cplx dz) { return F.value(zeta) / (zeta - alpha) * dz; };
  return integrate_curve(g, 0.0, ig, tol);
}

struct MembershipVerdict {
  bool pass = false;
  double max_moment = 0.0;
  std::vector<cplx> moments;
};

/// Boundary values of a Hardy function annihilate 1/(zeta - alpha) for every
/// alpha below the curve; PASS when all sampled moments are within tol.
inline MembershipVerdict membership_test(const LipschitzGraph& g, const BoundaryData& F,
                                         const std::vector<cplx>& alphas, double tol) {
  MembershipVerdict v;
  for (cplx a : alphas) {
    if (classify(g, a) != Side::Below) throw HardyError("moment sample not below the curve");
    cplx m = cauchy_moment(g, F, a, 0.01 * tol).value;
    v.moments.push_back(m);
    v.max_moment = std::max(v.max_moment, std::abs(m));
  }
  v.pass = v.max_moment <= tol;
  return v;
}

/// int_Gamma F(zeta) G(zeta) dzeta
inline QuadratureResult annihilation_pairing(const LipschitzGraph& g, const BoundaryData& F, const BoundaryData& G,
                                             double tol) {
  ContourIntegrand ig;
  ig.decay_exponent = F.decay + G.decay;
  if (!(ig.decay_exponent > 1.0)) throw QuadratureError("tail certificate insufficient: decay exponent <= 1");
  ig.singular_points = F.singular_points;
  ig.singular_points.insert(ig.singular_points.end(), G.singular_points.begin(), G.singular_points.end());
  ig.evaluator = [&F, &G](cplx zeta, cplx dz) { return F.value(zeta) * G.value(zeta) * dz; };
  return integrate_curve(g, 0.0, ig, tol);
}

}  // namespace hardylip
