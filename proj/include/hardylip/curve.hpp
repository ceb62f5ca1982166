#pragma once

// Piecewise-linear Lipschitz graphs Gamma = { u + i a(u) }, the shifted
// copies Gamma + i tau, the half-domains above and below, and non-tangential
// approach cones.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "hardylip/types.hpp"

namespace hardylip {

enum class Side { Above, Below, On };

inline constexpr double default_tol_on = 1e-12;

class LipschitzGraph {
 public:
  using Breakpoint = std::pair<double, double>;

  LipschitzGraph() : LipschitzGraph({}, 0.0, 0.0) {}

  /// Breakpoints (u_k, a_k) with strictly increasing u_k; outside the
  /// breakpoint range the graph continues with the given end slopes. With no
  /// breakpoints the graph is the line a(u) = left_slope * u and both slopes
  /// must agree.
  LipschitzGraph(std::vector<Breakpoint> breakpoints, double left_slope, double right_slope)
      : breakpoints_(std::move(breakpoints)) {
    for (const auto& [u, a] : breakpoints_) {
      if (!std::isfinite(u) || !std::isfinite(a)) throw GeometryError("non-finite breakpoint");
    }
    if (!std::isfinite(left_slope) || !std::isfinite(right_slope)) {
      throw GeometryError("non-finite end slope");
    }
    for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
      if (!(breakpoints_[k].first > breakpoints_[k - 1].first)) {
        throw GeometryError("breakpoint abscissae must be strictly increasing");
      }
    }
    if (breakpoints_.empty() && left_slope != right_slope) {
      throw GeometryError("a graph without breakpoints needs equal end slopes");
    }
    slopes_.push_back(left_slope);
    for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
      const auto& [u0, a0] = breakpoints_[k - 1];
      const auto& [u1, a1] = breakpoints_[k];
      slopes_.push_back((a1 - a0) / (u1 - u0));
    }
    if (!breakpoints_.empty()) slopes_.push_back(right_slope);
    lipschitz_ = 0.0;
    for (double s : slopes_) lipschitz_ = std::max(lipschitz_, std::abs(s));
    for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
      if (slopes_[k] != slopes_[k + 1]) kinks_.push_back(k);
    }
  }

  static LipschitzGraph flat() { return {}; }
  static LipschitzGraph vee() { return LipschitzGraph({{0.0, 0.0}}, -1.0, 1.0); }
  /// a(u) = tan(theta) |u|
  static LipschitzGraph wedge(double theta) {
    const double t = std::tan(theta);
    return LipschitzGraph({{0.0, 0.0}}, -t, t);
  }
  static LipschitzGraph threekink() {
    return LipschitzGraph({{-1.0, 0.0}, {0.0, 0.75}, {1.0, 0.0}}, -0.75, 0.75);
  }

  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }
  double left_slope() const { return slopes_.front(); }
  double right_slope() const { return slopes_.back(); }
  double lipschitz_bound() const { return lipschitz_; }

  /// Segment slopes from left to right: slopes()[0] is the left end slope,
  /// slopes()[k] is the slope between breakpoints k-1 and k.
  const std::vector<double>& slopes() const { return slopes_; }

  /// Breakpoints where the slope actually changes.
  std::vector<Breakpoint> kinks() const {
    std::vector<Breakpoint> out;
    for (auto k : kinks_) out.push_back(breakpoints_[k]);
    return out;
  }
  std::vector<double> kink_abscissae() const {
    std::vector<double> out;
    for (auto k : kinks_) out.push_back(breakpoints_[k].first);
    return out;
  }

  /// Index of the slope segment containing u (right-continuous at breakpoints).
  std::size_t segment_index(double u) const {
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), u,
                               [](double v, const Breakpoint& b) { return v < b.first; });
    return static_cast<std::size_t>(it - breakpoints_.begin());
  }

  double height(double u) const {
    if (breakpoints_.empty()) return slopes_[0] * u;
    std::size_t s = segment_index(u);
    if (s == 0) return breakpoints_[0].second + slopes_[0] * (u - breakpoints_[0].first);
    const auto& [ub, ab] = breakpoints_[s - 1];
    return ab + slopes_[s] * (u - ub);
  }

  /// Right-limit slope a'(u+).
  double slope(double u) const { return slopes_[segment_index(u)]; }

  bool is_breakpoint(double u, double tol = 1e-12) const {
    for (const auto& [ub, ab] : breakpoints_) {
      if (std::abs(u - ub) <= tol * (1.0 + std::abs(ub))) return true;
    }
    return false;
  }

  bool is_kink(double u, double tol = 1e-12) const {
    for (auto k : kinks_) {
      double ub = breakpoints_[k].first;
      if (std::abs(u - ub) <= tol * (1.0 + std::abs(ub))) return true;
    }
    return false;
  }

  cplx zeta(double u) const { return {u, height(u)}; }
  cplx zeta_prime(double u) const { return {1.0, slope(u)}; }

  /// Tangent direction angle arctan a'(u) (right limit at kinks).
  double tangent_angle(double u) const { return std::atan(slope(u)); }

 private:
  std::vector<Breakpoint> breakpoints_;
  std::vector<double> slopes_;
  std::vector<std::size_t> kinks_;
  double lipschitz_ = 0.0;
};

/// u + i a(u)
inline cplx eval_zeta(const LipschitzGraph& g, double u) { return g.zeta(u); }

struct ArcDensity {
  double value;
  bool at_kink;
};

/// |d zeta| / du = sqrt(1 + a'(u)^2). At a kink the right-limit value is
/// returned and the sample is flagged.
inline ArcDensity arc_measure_density(const LipschitzGraph& g, double u) {
  const double s = g.slope(u);
  return {std::sqrt(1.0 + s * s), g.is_kink(u)};
}

inline Side classify(const LipschitzGraph& g, cplx w, double tol_on = default_tol_on) {
  const double d = w.imag() - g.height(w.real());
  if (d > tol_on) return Side::Above;
  if (d < -tol_on) return Side::Below;
  return Side::On;
}

/// Euclidean distance from w to the graph.
inline double distance_to_graph(const LipschitzGraph& g, cplx w) {
  const auto& bps = g.breakpoints();
  auto seg = [&w](cplx a, cplx b) {
    cplx d = b - a;
    double t = std::clamp(std::real(std::conj(d) * (w - a)) / std::norm(d), 0.0, 1.0);
    return std::abs(w - (a + t * d));
  };
  auto ray = [&w](cplx a, cplx dir) {
    double t = std::max(0.0, std::real(std::conj(dir) * (w - a)) / std::norm(dir));
    return std::abs(w - (a + t * dir));
  };
  if (bps.empty()) {
    cplx dir(1.0, g.left_slope());
    return std::min(ray(0.0, dir), ray(0.0, -dir));
  }
  cplx first(bps.front().first, bps.front().second), last(bps.back().first, bps.back().second);
  double best = std::min(ray(first, cplx(-1.0, -g.left_slope())), ray(last, cplx(1.0, g.right_slope())));
  for (std::size_t k = 1; k < bps.size(); ++k) {
    best = std::min(best, seg(cplx(bps[k - 1].first, bps[k - 1].second), cplx(bps[k].first, bps[k].second)));
  }
  return best;
}

/// w + i tau
inline cplx shifted_point(cplx w, double tau) { return w + cplx(0.0, tau); }

/// Truncated approach cone { zeta0 + r e^{i theta} : 0 < r < delta,
/// theta - phi0 in (phi, pi - phi) }.
struct Cone {
  cplx vertex;
  double tangent_angle;
  double half_angle_param;
  double safety_radius;

  bool contains_direction(double theta) const {
    double rel = std::remainder(theta - tangent_angle - pi / 2.0, 2.0 * pi);
    return std::abs(rel) < pi / 2.0 - half_angle_param;
  }
  /// True when zeta0 + z lies in the truncated cone.
  bool contains(cplx z) const {
    return std::abs(z) > 0.0 && std::abs(z) < safety_radius && contains_direction(std::arg(z));
  }
};

namespace detail {

// Smallest positive distance from p to points of the closed segment [a, b]
// (b may be pushed to infinity along dir) lying in the closed sector of
// directions [lo, hi] around p. Returns +inf when there are none.
inline double sector_hit_distance(cplx p, cplx a, cplx dir, double length, double lo,
                                  double hi) {
  const double eps = 1e-13;
  double best = std::numeric_limits<double>::infinity();
  auto in_sector = [&](cplx q) {
    cplx d = q - p;
    if (std::abs(d) <= eps) return false;
    double rel = std::remainder(std::arg(d) - (lo + hi) / 2.0, 2.0 * pi);
    return std::abs(rel) <= (hi - lo) / 2.0 + 1e-14;
  };
  auto consider = [&](double t) {
    if (!(t >= -1e-15) || t > length + 1e-15) return;
    cplx q = a + dir * std::clamp(t, 0.0, length);
    if (in_sector(q)) best = std::min(best, std::abs(q - p));
  };
  consider(0.0);
  if (std::isfinite(length)) consider(length);
  // intersections with both boundary rays p + s e^{i ang}, s > 0
  for (double ang : {lo, hi}) {
    cplx e = std::polar(1.0, ang);
    // solve a + t dir = p + s e
    double det = dir.real() * (-e.imag()) - dir.imag() * (-e.real());
    if (std::abs(det) < 1e-15) continue;
    cplx rhs = p - a;
    double t = (rhs.real() * (-e.imag()) - rhs.imag() * (-e.real())) / det;
    double s = (dir.real() * rhs.imag() - dir.imag() * rhs.real()) / det;
    if (s > eps) consider(t);
  }
  // foot of the perpendicular
  double tf = std::real(std::conj(dir) * (p - a));
  consider(tf);
  return best;
}

inline double sector_clearance(const LipschitzGraph& g, cplx p, double lo, double hi) {
  const auto& bps = g.breakpoints();
  const auto& sl = g.slopes();
  const double inf = std::numeric_limits<double>::infinity();
  auto unit = [](double s) { return cplx(1.0, s) / std::sqrt(1.0 + s * s); };
  double best = inf;
  if (bps.empty()) {
    cplx e = unit(sl[0]);
    best = std::min(best, sector_hit_distance(p, cplx(0.0, 0.0), e, inf, lo, hi));
    best = std::min(best, sector_hit_distance(p, cplx(0.0, 0.0), -e, inf, lo, hi));
    return best;
  }
  cplx first(bps.front().first, bps.front().second);
  cplx last(bps.back().first, bps.back().second);
  best = std::min(best, sector_hit_distance(p, first, -unit(sl.front()), inf, lo, hi));
  best = std::min(best, sector_hit_distance(p, last, unit(sl.back()), inf, lo, hi));
  for (std::size_t k = 1; k < bps.size(); ++k) {
    cplx a(bps[k - 1].first, bps[k - 1].second);
    cplx b(bps[k].first, bps[k].second);
    best = std::min(best, sector_hit_distance(p, a, (b - a) / std::abs(b - a), std::abs(b - a),
                                              lo, hi));
  }
  return best;
}

}  // namespace detail

/// Builds the approach cone at zeta(u0). The safety radius is 0.9 times the
/// largest radius for which the cone stays strictly above the graph and its
/// reflection through zeta0 stays strictly below, capped at delta_max.
///
/// Throws GeometryError when u0 is a kink, when phi is outside (0, pi/2), or
/// when phi <= |phi0| (the cone then contains directions pointing below the
/// horizontal and is not a non-tangential approach region in the vertical
/// sense).
inline Cone make_cone(const LipschitzGraph& g, double u0, double phi, double delta_max = 1.0) {
  if (g.is_kink(u0, 1e-10)) throw GeometryError("cone vertex at a kink");
  if (!(phi > 0.0 && phi < pi / 2.0)) throw GeometryError("cone parameter outside (0, pi/2)");
  const double phi0 = g.tangent_angle(u0);
  if (phi <= std::abs(phi0)) {
    throw GeometryError("cone parameter does not exceed the tangent angle; cone not interior");
  }
  const cplx z0 = g.zeta(u0);
  const double up = detail::sector_clearance(g, z0, phi0 + phi, phi0 + pi - phi);
  const double down = detail::sector_clearance(g, z0, phi0 + pi + phi, phi0 + 2.0 * pi - phi);
  double delta = 0.9 * std::min(up, down);
  if (!std::isfinite(delta) || delta > delta_max) delta = delta_max;
  return Cone{z0, phi0, phi, delta};
}

}  // namespace hardylip
