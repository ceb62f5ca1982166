#include <gtest/gtest.h>

#include <random>

#include "hardylip/conformal.hpp"
#include "hardylip/kernel.hpp"
#include "hardylip/transform.hpp"

using namespace hardylip;

namespace {

std::vector<cplx> random_points(int n, unsigned seed, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<cplx> out;
  for (int k = 0; k < n; ++k) out.emplace_back(d(rng), d(rng));
  return out;
}

std::vector<cplx> above(const LipschitzGraph& g, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-4.0, 4.0), h(0.05, 3.0);
  std::vector<cplx> out;
  for (int k = 0; k < n; ++k) out.push_back(g.zeta(u(rng)) + I * h(rng));
  return out;
}

std::vector<double> log_samples(double u0) {
  std::vector<double> s;
  for (int k = -600; k <= 600; ++k) {
    if (k != 0) s.push_back(u0 + (k < 0 ? -1.0 : 1.0) * 1e-3 * std::pow(10.0, std::abs(k) / 100.0));
  }
  return s;
}

LipschitzGraph symmetric_vee(double m) { return LipschitzGraph({{0.0, 0.0}}, -m, m); }

}  // namespace

TEST(Kernel, DiagonalValue) {
  for (double tau : {1e-3, 0.5, 7.0}) {
    cplx z0(0.3, -1.2);
    EXPECT_NEAR(std::abs(k_kernel(z0, z0, I * tau) - 1.0 / (pi * tau)), 0.0, 1e-15 / tau);
  }
}

TEST(Kernel, Symmetries) {
  for (cplx p : random_points(100, 1, -2.0, 2.0)) {
    cplx zeta = p, zeta0 = p * p - 0.3, z = 0.4 * p + I;
    EXPECT_EQ(k_kernel(zeta, zeta0, z), k_kernel(zeta0, zeta, z));
    EXPECT_EQ(k_kernel(zeta, zeta0, -z), -k_kernel(zeta, zeta0, z));
  }
}

TEST(Kernel, TwoPoleForm) {
  auto pts = random_points(3000, 2, -3.0, 3.0);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    cplx a = k_kernel(pts[3 * k], pts[3 * k + 1], pts[3 * k + 2]);
    cplx b = k_kernel_two_pole(pts[3 * k], pts[3 * k + 1], pts[3 * k + 2]);
    worst = std::max(worst, std::abs(a - b) / std::abs(a));
  }
  EXPECT_LT(worst, 1e-13);
  EXPECT_THROW(k_kernel(cplx(1.0, 0.0), 0.0, cplx(1.0, 0.0)), HardyError);
  EXPECT_THROW(k_kernel_two_pole(cplx(1.0, 0.0), 0.0, cplx(1.0, 0.0)), HardyError);
}

TEST(Kernel, Normalization) {
  auto flat = kernel_normalization(LipschitzGraph::flat(), 0.0, I, 1e-12);
  EXPECT_NEAR(std::abs(flat.value - 1.0), 0.0, 1e-10);
  const auto v = LipschitzGraph::vee();
  auto r = kernel_normalization(v, v.zeta(1.0), 0.3 * I, 1e-12);
  EXPECT_LT(std::abs(r.value - 1.0), 1e-10);
  const auto t = LipschitzGraph::threekink();
  for (double u0 : {-2.0, -0.5, 0.5, 3.0}) {
    for (double tau : {0.05, 1.0, 20.0}) {
      EXPECT_LT(std::abs(kernel_normalization(t, t.zeta(u0), I * tau, 1e-12).value - 1.0), 1e-10) << u0 << " " << tau;
    }
  }
  // both poles above: zero
  EXPECT_LT(std::abs(kernel_normalization(t, t.zeta(0.5) + 3.0 * I, 0.5, 1e-12).value), 1e-10);
  // poles swapped: -1
  EXPECT_LT(std::abs(kernel_normalization(v, v.zeta(1.0), -0.3 * I, 1e-12).value + 1.0), 1e-10);
}

TEST(Kernel, FlatBoundConstant) {
  auto fit = kernel_bound_check(LipschitzGraph::flat(), 0.0, {0.01, 0.1, 1.0, 10.0}, log_samples(0.0));
  EXPECT_NEAR(fit.constant, 1.0 / pi, 1e-15);
  EXPECT_LT(fit.relative_spread, 1e-14);
}

TEST(Kernel, BoundGrowsWithLipschitzConstant) {
  const std::vector<double> taus = {0.01, 0.1, 1.0, 10.0};
  double last = 0.0;
  for (double m : {0.0, 0.5, 1.0}) {
    auto g = symmetric_vee(m);
    double c = 0.0;
    for (double u0 : {-1.0, -0.3, 0.2, 2.0}) c = std::max(c, kernel_bound_check(g, u0, taus, log_samples(u0)).constant);
    EXPECT_GE(c, last * (1.0 - 1e-12)) << m;
    EXPECT_TRUE(std::isfinite(c));
    last = c;
  }
  EXPECT_GT(last, 1.0 / pi);
  EXPECT_THROW(kernel_bound_check(LipschitzGraph::flat(), 0.0, {0.0}, {1.0}), HardyError);
}

TEST(Kernel, ConeBoundFinite) {
  const auto g = LipschitzGraph::threekink();
  Cone cone = make_cone(g, 0.5, 1.2);
  std::vector<double> radii, dirs;
  for (int k = 0; k < 4; ++k) radii.push_back(0.5 * cone.safety_radius * std::pow(10.0, -k));
  for (int k = 1; k < 6; ++k) {
    double lo = cone.tangent_angle + cone.half_angle_param, hi = cone.tangent_angle + pi - cone.half_angle_param;
    dirs.push_back(lo + (hi - lo) * k / 6.0);
  }
  auto fit = kernel_bound_check_cone(g, cone, radii, dirs, log_samples(0.5));
  EXPECT_TRUE(std::isfinite(fit.constant));
  EXPECT_GT(fit.constant, 0.0);
  EXPECT_EQ(fit.per_scale.size(), radii.size());
  EXPECT_THROW(kernel_bound_check_cone(g, cone, radii, {cone.tangent_angle}, {1.0}), HardyError);
}

TEST(Transform, FlatIsIdentity) {
  auto m = sc_solve(LipschitzGraph::flat());
  auto f = power_generator(2.0);
  auto F = transform_T_inv(f, 2.0, m);
  for (cplx z : above(LipschitzGraph::flat(), 50, 3)) EXPECT_EQ(F(z), f(z));
  auto back = transform_T(F, 2.0, m);
  for (cplx z : above(LipschitzGraph::flat(), 50, 4)) EXPECT_EQ(back(z), f(z));
}

TEST(Transform, RoundTrips) {
  for (auto g : {LipschitzGraph::vee(), LipschitzGraph::threekink()}) {
    auto m = sc_solve(g);
    for (double p : {0.5, 1.0, 2.0, 4.0}) {
      auto f = power_generator(p);
      auto Tf = transform_T(transform_T_inv(f, p, m), p, m);
      for (cplx z : above(LipschitzGraph::flat(), 50, 5)) {
        ASSERT_LT(std::abs(Tf(z) - f(z)), 1e-8 * (1.0 + std::abs(f(z))));
      }
      auto F = native_power(g, g.zeta(0.3) - I, 2.0 / p);
      auto FF = transform_T_inv(transform_T(F, p, m), p, m);
      for (cplx w : above(g, 50, 6)) ASSERT_LT(std::abs(FF(w) - F(w)), 1e-8 * (1.0 + std::abs(F(w))));
      // traces agree with the interior limit on the curve
      auto Finv = transform_T_inv(f, p, m);
      const double u = 1.7;
      EXPECT_LT(std::abs(Finv.trace(g.zeta(u)) - Finv(g.zeta(u) + 1e-9 * I)), 1e-6 * (1.0 + std::abs(Finv.trace(g.zeta(u)))));
    }
  }
}

TEST(Transform, DomainChecks) {
  auto m = sc_solve(LipschitzGraph::vee());
  auto f = power_generator(2.0);
  EXPECT_THROW(transform_T(f, 2.0, m), HardyError);
  EXPECT_THROW(transform_T_inv(transform_T_inv(f, 2.0, m), 2.0, m), HardyError);
  EXPECT_THROW(transform_T_inv(f, 0.0, m), HardyError);
}

TEST(HardyNorm, FlatClosedForm) {
  // int |x + i (1 + tau)|^-2 dx = pi / (1 + tau), largest at the boundary
  auto r = hardy_norm(power_generator(2.0), 2.0, {}, 1e-10);
  EXPECT_NEAR(r.value, std::sqrt(pi), 1e-8);
  EXPECT_TRUE(r.has_boundary_level);
  EXPECT_FALSE(r.divergent);
  EXPECT_EQ(r.argmax_tau, 0.0);
  for (const auto& [tau, v] : r.table) EXPECT_NEAR(v, std::sqrt(pi / (1.0 + tau)), 1e-8 * std::sqrt(pi)) << tau;
}

TEST(HardyNorm, ZeroAndHomogeneity) {
  EXPECT_EQ(hardy_norm(zero_function(DomainTag::UpperHalfPlane, LipschitzGraph::flat()), 2.0).value, 0.0);
  auto f = power_generator(1.0);
  for (double p : {0.5, 1.0, 2.0}) {
    auto g = power_generator(p);
    double a = hardy_norm(g, p, {}, 1e-9).value;
    double b = hardy_norm(g.scaled(cplx(0.0, 3.0)), p, {}, 1e-9).value;
    EXPECT_TRUE(std::isfinite(a));
    EXPECT_NEAR(b, 3.0 * a, 1e-6 * a) << p;
  }
  EXPECT_TRUE(std::isfinite(hardy_norm(f, 1.0).value));
  EXPECT_THROW(hardy_norm(f, 0.0), HardyError);
}

TEST(HardyNorm, IsometryOnVee) {
  auto m = sc_solve(LipschitzGraph::vee());
  auto f = power_generator(2.0);
  double nf = hardy_norm(f, 2.0, {}, 1e-9).value;
  double nF = hardy_norm(transform_T_inv(f, 2.0, m), 2.0, {}, 1e-9).value;
  EXPECT_NEAR(nF / nf, 1.0, 1e-6);
}

TEST(HardyNorm, DivergenceDetected) {
  // (z + i)^-1/2 is not in H^2(C+)
  auto f = power_generator(4.0);
  auto r = hardy_norm(f, 2.0);
  EXPECT_TRUE(r.divergent);
  EXPECT_TRUE(std::isinf(r.value));
}

TEST(Analyticity, CauchyRiemann) {
  auto g = LipschitzGraph::threekink();
  auto m = sc_solve(g);
  auto F = transform_T_inv(power_generator(2.0), 2.0, m);
  EXPECT_LT(cauchy_riemann_residual(F, above(g, 50, 7)), 1e-5);
  auto G = transform_T(native_power(g, g.zeta(-0.4) - I, 1.0), 1.0, m);
  std::vector<cplx> pts;
  for (cplx z : above(LipschitzGraph::flat(), 50, 8)) pts.push_back(z);
  EXPECT_LT(cauchy_riemann_residual(G, pts), 1e-5);
}
