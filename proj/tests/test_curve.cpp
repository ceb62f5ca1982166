#include <gtest/gtest.h>

#include <random>

#include "hardylip/curve.hpp"

using namespace hardylip;

namespace {

LipschitzGraph tent() { return LipschitzGraph({{-1.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}}, 0.0, 0.0); }

}  // namespace

TEST(Curve, EvalZeta) {
  EXPECT_EQ(eval_zeta(LipschitzGraph::flat(), 2.0), cplx(2.0, 0.0));
  EXPECT_EQ(eval_zeta(LipschitzGraph::vee(), -3.0), cplx(-3.0, 3.0));
  EXPECT_NEAR(std::abs(eval_zeta(tent(), 0.5) - cplx(0.5, 0.5)), 0.0, 1e-15);
}

TEST(Curve, ConstructionInvariants) {
  const auto g = LipschitzGraph::threekink();
  EXPECT_DOUBLE_EQ(g.lipschitz_bound(), 0.75);
  EXPECT_DOUBLE_EQ(g.left_slope(), -0.75);
  EXPECT_DOUBLE_EQ(g.right_slope(), 0.75);
  EXPECT_EQ(g.kinks().size(), 3u);
  EXPECT_THROW(LipschitzGraph({{1.0, 0.0}, {0.0, 0.0}}, 0.0, 0.0), GeometryError);
  EXPECT_THROW(LipschitzGraph({{0.0, 0.0}, {0.0, 1.0}}, 0.0, 0.0), GeometryError);
  EXPECT_THROW(LipschitzGraph({}, 0.0, 1.0), GeometryError);
  EXPECT_THROW(LipschitzGraph({{0.0, std::nan("")}}, 0.0, 0.0), GeometryError);
}

TEST(Curve, CollinearBreakpointIsNotAKink) {
  const LipschitzGraph g({{-1.0, -1.0}, {0.0, 0.0}, {1.0, 1.0}}, 1.0, 1.0);
  EXPECT_TRUE(g.kinks().empty());
  EXPECT_FALSE(g.is_kink(0.0));
}

TEST(Curve, ArcMeasureDensity) {
  EXPECT_DOUBLE_EQ(arc_measure_density(LipschitzGraph::flat(), 3.7).value, 1.0);
  EXPECT_DOUBLE_EQ(arc_measure_density(LipschitzGraph::vee(), 2.0).value, std::sqrt(2.0));
  const auto g = LipschitzGraph::threekink();
  const double m = g.lipschitz_bound();
  for (double u = -5.0; u <= 5.0; u += 0.01) {
    double d = arc_measure_density(g, u).value;
    EXPECT_GE(d, 1.0);
    EXPECT_LE(d, std::sqrt(1.0 + m * m) + 1e-15);
  }
  EXPECT_DOUBLE_EQ(arc_measure_density(g, 0.5).value, std::sqrt(1.0 + m * m));
}

TEST(Curve, Classify) {
  EXPECT_EQ(classify(LipschitzGraph::flat(), I), Side::Above);
  EXPECT_EQ(classify(LipschitzGraph::vee(), cplx(1.0, 0.5)), Side::Below);
  EXPECT_EQ(classify(LipschitzGraph::vee(), cplx(1.0, 1.0)), Side::On);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uu(-10.0, 10.0), tt(1e-9, 10.0);
  const auto g = LipschitzGraph::threekink();
  for (int k = 0; k < 10000; ++k) {
    double u = uu(rng), t = tt(rng);
    EXPECT_EQ(classify(g, g.zeta(u) + I * t), Side::Above);
    EXPECT_EQ(classify(g, g.zeta(u) - I * t), Side::Below);
  }
}

TEST(Curve, LipschitzParametrization) {
  const auto g = LipschitzGraph::threekink();
  const double bound = std::sqrt(1.0 + g.lipschitz_bound() * g.lipschitz_bound());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uu(-6.0, 6.0);
  for (int k = 0; k < 10000; ++k) {
    double a = uu(rng), b = uu(rng);
    EXPECT_LE(std::abs(g.zeta(a) - g.zeta(b)), bound * std::abs(a - b) * (1.0 + 1e-14) + 1e-15);
  }
}

TEST(Curve, ShiftedPoint) {
  EXPECT_EQ(shifted_point(cplx(1.0, 1.0), 2.0), cplx(1.0, 3.0));
  EXPECT_EQ(shifted_point(cplx(0.7, 0.0), 0.0), cplx(0.7, 0.0));
  cplx w(0.3, -0.2);
  EXPECT_EQ(shifted_point(shifted_point(w, 0.5), 1.25), shifted_point(w, 1.75));
}

TEST(Curve, DistanceToGraph) {
  EXPECT_DOUBLE_EQ(distance_to_graph(LipschitzGraph::flat(), cplx(3.0, -2.0)), 2.0);
  // nearest point of |u| to (0, 2) lies on either arm at distance sqrt(2)
  EXPECT_NEAR(distance_to_graph(LipschitzGraph::vee(), cplx(0.0, 2.0)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(distance_to_graph(LipschitzGraph::vee(), cplx(0.0, -1.0)), 1.0, 1e-15);
}

TEST(Cone, FlatCapsAtDeltaMax) {
  auto c = make_cone(LipschitzGraph::flat(), 0.0, pi / 4.0, 2.5);
  EXPECT_DOUBLE_EQ(c.tangent_angle, 0.0);
  EXPECT_DOUBLE_EQ(c.safety_radius, 2.5);
}

TEST(Cone, VeeTruncatedByKink) {
  auto c = make_cone(LipschitzGraph::vee(), 1.0, pi / 3.0, 100.0);
  EXPECT_NEAR(c.tangent_angle, pi / 4.0, 1e-15);
  EXPECT_GT(c.safety_radius, 0.0);
  EXPECT_LT(c.safety_radius, 100.0);
}

TEST(Cone, NarrowConeRejected) {
  EXPECT_THROW(make_cone(LipschitzGraph::vee(), 1.0, pi / 8.0), GeometryError);
  EXPECT_THROW(make_cone(LipschitzGraph::vee(), 0.0, pi / 3.0), GeometryError);
  EXPECT_THROW(make_cone(LipschitzGraph::flat(), 0.0, pi / 2.0), GeometryError);
}

TEST(Cone, RejectionSampledPointsSeparate) {
  std::mt19937_64 rng(5);
  struct Case {
    LipschitzGraph g;
    double u0, phi;
  };
  const std::vector<Case> cases = {{LipschitzGraph::vee(), 1.0, pi / 3.0},
                                   {LipschitzGraph::threekink(), -0.4, 1.0},
                                   {LipschitzGraph::threekink(), 1.3, 0.8},
                                   {LipschitzGraph::vee(), -0.05, 0.9}};
  for (const auto& cs : cases) {
    Cone c = make_cone(cs.g, cs.u0, cs.phi);
    std::uniform_real_distribution<double> xy(-c.safety_radius, c.safety_radius);
    int accepted = 0;
    while (accepted < 10000) {
      cplx z(xy(rng), xy(rng));
      if (!c.contains(z)) continue;
      ++accepted;
      ASSERT_EQ(classify(cs.g, c.vertex + z), Side::Above);
      ASSERT_EQ(classify(cs.g, c.vertex - z), Side::Below);
    }
  }
}

TEST(Cone, RejectedConeReallyCrosses) {
  // the refused cone points below the horizontal and, untruncated, reaches below the graph
  const auto g = LipschitzGraph::vee();
  const cplx z0 = g.zeta(1.0);
  const double phi0 = pi / 4.0, phi = pi / 8.0;
  bool found = false;
  for (int k = 1; k < 100 && !found; ++k) {
    double th = phi0 + phi + (pi - 2.0 * phi) * k / 100.0;
    for (double r = 0.1; r < 5.0 && !found; r += 0.1) found = classify(g, z0 + std::polar(r, th)) == Side::Below;
  }
  EXPECT_TRUE(found);
}
