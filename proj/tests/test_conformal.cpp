#include <gtest/gtest.h>

#include <random>

#include "hardylip/conformal.hpp"
#include "hardylip/io.hpp"

using namespace hardylip;

namespace {

// closed forms derived by hand for the normalisation x_1 = -1, |C| = 1
cplx vee_closed(cplx z) { return std::polar(2.0, pi / 4.0) * std::sqrt(z + 1.0); }
cplx vee_closed_prime(cplx z) { return std::polar(1.0, pi / 4.0) / std::sqrt(z + 1.0); }
// a = tan(theta)|u|: beta = 2 theta / pi, Phi = e^{i theta} (z+1)^(1-beta) / (1-beta)
cplx wedge_closed(double theta, cplx z) {
  double e = 1.0 - 2.0 * theta / pi;
  return std::polar(1.0, theta) * std::exp(e * std::log(z + 1.0)) / e;
}

std::vector<cplx> random_upper(int n, unsigned seed, double ymin = 0.1, double ymax = 10.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x(-6.0, 6.0), ly(std::log(ymin), std::log(ymax));
  std::vector<cplx> out;
  for (int k = 0; k < n; ++k) out.emplace_back(x(rng), std::exp(ly(rng)));
  return out;
}

}  // namespace

TEST(Conformal, FlatIsIdentity) {
  auto m = sc_solve(LipschitzGraph::flat());
  for (cplx z : random_upper(100, 1)) {
    EXPECT_EQ(phi(m, z), z);
    EXPECT_EQ(psi(m, z), z);
    EXPECT_EQ(phi_prime(m, z), cplx(1.0, 0.0));
    EXPECT_EQ(phi_prime_power(m, z, 0.7), cplx(1.0, 0.0));
  }
  EXPECT_EQ(phi(m, I), I);
}

TEST(Conformal, VeeClosedForm) {
  auto m = sc_solve(LipschitzGraph::vee());
  ASSERT_EQ(m.prevertices().size(), 1u);
  EXPECT_DOUBLE_EQ(m.prevertices()[0], -1.0);
  EXPECT_NEAR(std::abs(m.multiplier()), 1.0, 1e-15);
  double worst = 0.0;
  for (cplx z : random_upper(20, 2)) worst = std::max(worst, std::abs(phi(m, z) - vee_closed(z)) / std::abs(vee_closed(z)));
  EXPECT_LT(worst, 1e-6);
  EXPECT_LT(worst, 1e-12);
  // the point above the prevertex maps to the symmetry axis
  cplx w = phi(m, cplx(-1.0, 1.0));
  EXPECT_NEAR(w.real(), 0.0, 1e-13);
  EXPECT_GT(w.imag(), 0.0);
  EXPECT_NEAR(std::abs(phi_prime(m, I) - vee_closed_prime(I)), 0.0, 1e-10);
  const cplx z0(2.0, 3.0);
  EXPECT_NEAR(std::abs(psi(m, vee_closed(z0)) - z0), 0.0, 1e-12);
}

TEST(Conformal, WedgeClosedForm) {
  const double theta = pi / 6.0;
  auto m = sc_solve(LipschitzGraph::wedge(theta));
  for (cplx z : random_upper(20, 3)) {
    cplx exact = wedge_closed(theta, z);
    EXPECT_LT(std::abs(phi(m, z) - exact) / std::abs(exact), 1e-10);
  }
}

TEST(Conformal, ThreekinkParameters) {
  auto m = sc_solve(LipschitzGraph::threekink());
  const auto& g = m.graph();
  ASSERT_EQ(m.vertex_images().size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LT(std::abs(m.vertex_images()[k] - m.kinks()[k]), 1e-10);
    EXPECT_LT(std::abs(m.exponents()[k]), 1.0);
  }
  double sum = 0.0;
  for (double b : m.exponents()) sum += b;
  EXPECT_NEAR(sum, (std::atan(g.right_slope()) - std::atan(g.left_slope())) / pi, 1e-14);
  EXPECT_NEAR(m.sigma(), sum, 1e-15);
  EXPECT_LT(m.residual(), 1e-10);
  EXPECT_TRUE(m.warnings().empty());
}

TEST(Conformal, RoundTripAndDerivativeIdentity) {
  for (auto g : {LipschitzGraph::vee(), LipschitzGraph::threekink()}) {
    auto m = sc_solve(g);
    for (cplx z : random_upper(1000, 4)) {
      cplx w = phi(m, z);
      ASSERT_LT(std::abs(psi(m, w) - z), 1e-8 * (1.0 + std::abs(z)));
      ASSERT_NEAR(std::abs(phi_prime(m, psi(m, w)) * psi_prime(m, w) - 1.0), 0.0, 1e-9);
    }
  }
}

TEST(Conformal, SectorCondition) {
  for (auto g : {LipschitzGraph::vee(), LipschitzGraph::threekink()}) {
    auto m = sc_solve(g);
    const double bound = std::atan(g.lipschitz_bound()) + 1e-8;
    for (cplx z : random_upper(1000, 5, 1e-6, 100.0)) EXPECT_LE(std::abs(std::arg(phi_prime(m, z))), bound);
  }
}

TEST(Conformal, BoundaryTraceOnGraph) {
  auto m = sc_solve(LipschitzGraph::threekink());
  const auto& g = m.graph();
  for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
    cplx w = phi(m, cplx(x, 0.0));
    EXPECT_LT(std::abs(w.imag() - g.height(w.real())), 1e-9) << x;
  }
  double last = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 1000; ++k) {
    double re = phi(m, cplx(-8.0 + 16.0 * k / 1000.0, 0.0)).real();
    ASSERT_GT(re, last);
    last = re;
  }
}

TEST(Conformal, BoundaryPreimage) {
  auto m = sc_solve(LipschitzGraph::threekink());
  const auto& g = m.graph();
  for (double u : {-50.0, -3.0, -1.0 - 1e-9, -0.5, 1e-12, 0.3, 1.0 + 1e-6, 7.0, 2000.0}) {
    double x = m.boundary_preimage(g.zeta(u));
    EXPECT_LT(std::abs(phi(m, cplx(x, 0.0)) - g.zeta(u)), 1e-9 * (1.0 + std::abs(u))) << u;
  }
  // offsets follow the local power law next to a kink; zeta itself carries
  // an absolute rounding of 1e-16, so u stays well above that
  auto b = m.boundary_local(g.zeta(1e-8));
  EXPECT_EQ(b.anchor, 1u);
  EXPECT_GT(b.offset, 0.0);
  auto b2 = m.boundary_local(g.zeta(2e-8));
  const double ratio = b2.offset / b.offset;
  const double e = 1.0 / (1.0 - m.exponents()[1]);
  EXPECT_NEAR(ratio, std::pow(2.0, e), 1e-6);
  // vee: x = (zeta / (2 e^{i pi/4}))^2 - 1
  auto mv = sc_solve(LipschitzGraph::vee());
  for (double u : {-40.0, -1.0, 0.25, 3.0}) {
    cplx q = LipschitzGraph::vee().zeta(u) / std::polar(2.0, pi / 4.0);
    EXPECT_NEAR(mv.boundary_preimage(LipschitzGraph::vee().zeta(u)), (q * q).real() - 1.0, 1e-12 * (1.0 + u * u));
  }
}

TEST(Conformal, PhiPrimePower) {
  auto m = sc_solve(LipschitzGraph::vee());
  for (cplx z : random_upper(50, 6)) EXPECT_EQ(phi_prime_power(m, z, 1.0), phi_prime(m, z));
  // continuation oracle from 2i to i along the segment, principal factor per step
  cplx v = std::sqrt(vee_closed_prime(2.0 * I));
  const int steps = 200;
  for (int k = 1; k <= steps; ++k) {
    cplx a = (2.0 - static_cast<double>(k - 1) / steps) * I, b = (2.0 - static_cast<double>(k) / steps) * I;
    v *= std::sqrt(vee_closed_prime(b) / vee_closed_prime(a));
  }
  EXPECT_LT(std::abs(phi_prime_power(m, I, 2.0) - v), 1e-12);
}

TEST(Conformal, FiniteDifferenceDerivative) {
  auto m = sc_solve(LipschitzGraph::threekink());
  for (cplx z : random_upper(100, 7, 0.2, 5.0)) {
    const double h = 1e-5;
    cplx fd = (phi(m, z + h) - phi(m, z - h)) / (2.0 * h);
    EXPECT_LT(std::abs(fd - phi_prime(m, z)) / std::abs(phi_prime(m, z)), 1e-6);
  }
}

TEST(Conformal, AnglePreservation) {
  auto m = sc_solve(LipschitzGraph::threekink());
  const double x0 = 0.7 * m.prevertices()[1] + 0.3 * m.prevertices()[2];
  const cplx w0 = phi(m, cplx(x0, 0.0));
  for (double alpha : {pi / 6.0, pi / 3.0}) {
    const double th = pi / 2.0 - alpha / 2.0, t = 1e-6;
    cplx d1 = phi(m, x0 + std::polar(t, th)) - w0;
    cplx d2 = phi(m, x0 + std::polar(t, th + alpha)) - w0;
    EXPECT_NEAR(std::arg(d2 / d1), alpha, 1e-4);
  }
}

TEST(Conformal, Errors) {
  auto m = sc_solve(LipschitzGraph::threekink());
  EXPECT_THROW(psi(m, cplx(0.0, 0.0)), MapError);
  EXPECT_THROW(psi(m, cplx(5.0, -1.0)), MapError);
  EXPECT_THROW(phi_prime(m, cplx(m.prevertices()[0], 0.0)), MapError);
  EXPECT_THROW(phi_prime_power(m, I, 0.0), MapError);
  SolverOptions hopeless;
  hopeless.max_iter = 1;
  hopeless.tol = 1e-15;
  EXPECT_THROW(sc_solve(LipschitzGraph({{-1.0, 0.0}, {0.0, 0.75}, {0.01, 0.7}, {1.0, 0.0}}, -0.75, 0.75), hopeless),
               MapError);
  SolverOptions strict;
  strict.crowding = 2.0;
  EXPECT_FALSE(sc_solve(LipschitzGraph::threekink(), strict).warnings().empty());
  EXPECT_THROW(SchwarzChristoffelMap::from_parameters(m.graph(), {0.0, 1.0}, m.exponents(), 1.0, 0.0), MapError);
  EXPECT_THROW(SchwarzChristoffelMap::from_parameters(m.graph(), m.prevertices(), m.exponents(), I, 0.0), MapError);
}

TEST(Conformal, CachedParametersReproduceMap) {
  auto m = sc_solve(LipschitzGraph::threekink());
  auto j = map_to_json(m);
  auto back = map_from_json(m.graph(), json::parse(j.dump()));
  for (cplx z : random_upper(50, 8)) EXPECT_LT(std::abs(back.phi(z) - m.phi(z)), 1e-14 * (1.0 + std::abs(m.phi(z))));
  EXPECT_THROW(map_from_json(m.graph(), json::parse(R"({"prevertices": [0]})")), ConfigError);
}
