#include <gtest/gtest.h>

#include "hardylip/blaschke.hpp"
#include "hardylip/boundary.hpp"

using namespace hardylip;

namespace {

std::vector<double> radii(double top, int n) {
  std::vector<double> r;
  for (int k = 0; k < n; ++k) r.push_back(top * std::pow(10.0, -k));
  return r;
}

}  // namespace

TEST(NontangentialLimit, FlatPole) {
  const auto g = LipschitzGraph::flat();
  Cone cone = make_cone(g, 0.0, 0.5);
  auto res = nontangential_limit(power_generator(2.0), cone, radii(0.5 * cone.safety_radius, 6));
  EXPECT_TRUE(res.limit_detected);
  EXPECT_LT(std::abs(res.estimate + I), 1e-5);
  EXPECT_LT(res.final_spread, 1e-5);
  EXPECT_EQ(res.table.size(), 6u);
}

TEST(NontangentialLimit, BlaschkeFactor) {
  const auto g = LipschitzGraph::flat();
  Cone cone = make_cone(g, 0.0, 0.3);
  auto res = nontangential_limit(blaschke_upper(make_blaschke_data({I})), cone, radii(0.5 * cone.safety_radius, 6));
  EXPECT_TRUE(res.limit_detected);
  EXPECT_LT(std::abs(res.estimate + 1.0), 1e-5);
}

TEST(NontangentialLimit, KinkedDomain) {
  const auto g = LipschitzGraph::vee();
  auto m = sc_solve(g);
  auto F = transform_T_inv(power_generator(2.0), 2.0, m);
  Cone cone = make_cone(g, 1.0, 1.0);
  auto res = nontangential_limit(F, cone, radii(0.5 * cone.safety_radius, 5));
  EXPECT_TRUE(res.limit_detected);
  EXPECT_LT(res.final_spread, 1e-3);
  EXPECT_LT(std::abs(res.estimate - F.trace(g.zeta(1.0))), 1e-3);
}

TEST(NontangentialLimit, Errors) {
  const auto g = LipschitzGraph::flat();
  Cone cone = make_cone(g, 0.0, 0.5);
  auto F = power_generator(2.0);
  EXPECT_THROW(nontangential_limit(F, cone, {}), HardyError);
  EXPECT_THROW(nontangential_limit(F, cone, {0.1, 0.2}), HardyError);
  EXPECT_THROW(nontangential_limit(F, cone, {2.0 * cone.safety_radius}), HardyError);
  EXPECT_THROW(make_cone(LipschitzGraph::vee(), 0.0, 1.0), GeometryError);
}

TEST(BoundaryConvergence, FlatMonotone) {
  const std::vector<double> taus = {1e-1, 1e-2, 1e-3, 1e-4};
  for (double p : {0.5, 1.0, 2.0}) {
    auto rows = boundary_lp_convergence(power_generator(p), p, taus, 1e-8);
    ASSERT_EQ(rows.size(), taus.size());
    for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_LT(rows[k].second, rows[k - 1].second) << p;
    EXPECT_LT(rows.back().second, 0.1 * rows.front().second) << p;
  }
  EXPECT_THROW(boundary_lp_convergence(power_generator(2.0), 2.0, {1e-2, 1e-1}), HardyError);
}

TEST(BoundaryConvergence, FlatClosedForm) {
  // f = (z + i)^-1: |f(x + i tau) - f(x)| = tau / (|x + i (1 + tau)| |x + i|),
  // and the L^2 distance squared is pi tau^2 / ((1 + tau)(2 + tau))
  for (double tau : {0.5, 0.01}) {
    double d = shifted_trace_distance(power_generator(2.0), tau, 2.0, 1e-10);
    EXPECT_NEAR(d, tau * std::sqrt(pi / ((1.0 + tau) * (2.0 + tau))), 1e-8 * d);
  }
}

TEST(BoundaryConvergence, ZeroAndKinked) {
  auto rows = boundary_lp_convergence(zero_function(DomainTag::UpperHalfPlane, LipschitzGraph::flat()), 2.0,
                                      {1e-1, 1e-3});
  for (const auto& r : rows) EXPECT_EQ(r.second, 0.0);
  const auto g = LipschitzGraph::vee();
  auto m = sc_solve(g);
  auto kinked = boundary_lp_convergence(transform_T_inv(power_generator(2.0), 2.0, m), 2.0, {1e-1, 1e-2, 1e-3}, 1e-6);
  for (std::size_t k = 1; k < kinked.size(); ++k) EXPECT_LT(kinked[k].second, kinked[k - 1].second);
}

TEST(StripDecay, DecaysAlongTheCurve) {
  const auto g = LipschitzGraph::vee();
  auto m = sc_solve(g);
  auto F = transform_T_inv(power_generator(1.0), 1.0, m);
  const std::vector<double> us = {0.0, 1.0, 10.0, 100.0};
  auto t = strip_decay_probe(F, 0.5, 2.0, 0.1, us);
  ASSERT_EQ(t.size(), us.size());
  EXPECT_LT(t.back().second / t.front().second, 1e-3);
  for (std::size_t k = 2; k < t.size(); ++k) EXPECT_LT(t[k].second, t[k - 1].second);
  auto Z = strip_decay_probe(zero_function(DomainTag::AboveGraph, g), 0.5, 2.0, 0.1, us);
  for (const auto& r : Z) EXPECT_EQ(r.second, 0.0);
  auto B = blaschke_domain({g.zeta(0.3) + I}, m);
  auto FB = strip_decay_probe(multiply(F, B), 0.5, 2.0, 0.1, us);
  for (std::size_t k = 0; k < us.size(); ++k) EXPECT_LE(FB[k].second, t[k].second * (1.0 + 1e-12));
  EXPECT_THROW(strip_decay_probe(F, 0.5, 2.0, 0.8, us), HardyError);
  EXPECT_THROW(strip_decay_probe(F, 2.0, 0.5, 0.1, us), HardyError);
}

TEST(Upgrade, Verdicts) {
  const auto g = LipschitzGraph::vee();
  auto m = sc_solve(g);
  TauGrid grid{1e-3, 1e2, 11};
  auto ok = hp_upgrade_check(transform_T_inv(power_generator(1.0), 1.0, m), 1.0, 2.0, grid, 1e-7);
  EXPECT_TRUE(ok.pass);
  EXPECT_TRUE(std::isfinite(ok.boundary_lq));
  EXPECT_TRUE(hp_upgrade_check(zero_function(DomainTag::AboveGraph, g), 1.0, 2.0, grid).pass);
  auto C = boundary_singular_control(g, 1.0, g.zeta(1.0) - I);
  EXPECT_TRUE(hp_upgrade_check(C, 1.0, 1.5, grid, 1e-7).pass);
  auto bad = hp_upgrade_check(C, 1.0, 2.0, grid, 1e-7);
  EXPECT_FALSE(bad.pass);
  EXPECT_TRUE(bad.norm_q.divergent);
  EXPECT_THROW(hp_upgrade_check(C, 2.0, 1.0, grid), HardyError);
  EXPECT_THROW(hp_upgrade_check(C, 0.5, 1.0, grid), HardyError);
}
