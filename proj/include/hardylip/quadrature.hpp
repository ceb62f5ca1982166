#pragma once

// Adaptive contour quadrature over Gamma + i tau, parametrized by the
// abscissa u, with certified truncation of the two infinite tails.
//
// Every integral is written as  int h(u) du  where
//   h(u) = evaluator(zeta(u) + i tau, zeta'(u)).
// The evaluator decides the measure: returning f(zeta) * dzeta gives the
// complex line integral, returning f(zeta) * |dzeta| the arc-length one.
//
// Panels: 16-point Gauss-Legendre with an 8-point comparison as the error
// estimate, global adaptive bisection (worst panel first). Panels never
// straddle breakpoints or singular-point projections. Panels touching a
// kink of the graph are graded with u = u_kink + h t^q so that algebraic
// endpoint singularities of boundary traces are integrated accurately.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "hardylip/curve.hpp"
#include "hardylip/gauss.hpp"

namespace hardylip {

struct ContourIntegrand {
  std::function<cplx(cplx zeta, cplx dzeta_du)> evaluator;
  /// |h(u)| <= tail_constant |u|^-decay_exponent for |u| >= tail_start
  double decay_exponent = 2.0;
  /// Non-positive: fitted by sampling the tails (factor-2 margin).
  double tail_constant = 0.0;
  /// Non-positive: just beyond the outermost breakpoint.
  double tail_start = 0.0;
  /// Known singularities near the contour (already in the shifted frame).
  /// Points lying on the contour get graded panels on both sides.
  std::vector<cplx> singular_points;
};

struct QuadratureResult {
  cplx value{};
  /// panel error + tail bound
  double abs_error_estimate = 0.0;
  int panels_used = 0;
  double tail_bound = 0.0;
  /// Truncation abscissa U: the integral runs over [-U_left, U_right];
  /// infinite when the tails were mapped.
  double truncation_left = 0.0;
  double truncation_right = 0.0;
};

struct QuadratureOptions {
  int max_panels = 60000;
  double grading_power = 4.0;
  /// Override the certified truncation (used to test truncation soundness).
  double truncation_scale = 1.0;
  /// When the certified truncation exceeds this, the tails beyond it are
  /// integrated in full through u = U t^(-1/(s-1)), t in (0, 1].
  double max_truncation = 1e8;
};

namespace detail {

enum class PanelMap { Linear, GradedLeft, GradedRight, Tail };

struct Segment {
  double ua, ub;   // abscissa range
  double aa;       // a(ua)
  double slope;    // a' on the segment
  PanelMap map;
  double q;        // grading power, or 1/(s-1) for a tail

  double u_of(double t, double* dudt) const {
    const double h = ub - ua;
    switch (map) {
      case PanelMap::Linear:
        *dudt = h;
        return ua + h * t;
      case PanelMap::GradedLeft:
        *dudt = h * q * std::pow(t, q - 1.0);
        return ua + h * std::pow(t, q);
      case PanelMap::GradedRight: {
        double s = 1.0 - t;
        *dudt = h * q * std::pow(s, q - 1.0);
        return ub - h * std::pow(s, q);
      }
      case PanelMap::Tail: {
        // u = ua t^-q runs from ua (t = 1) out to infinity (t -> 0)
        double r = std::pow(t, -q);
        *dudt = std::abs(ua) * q * r / t;
        return ua * r;
      }
    }
    *dudt = h;
    return ua + h * t;
  }
  cplx zeta(double u, double tau) const { return {u, aa + slope * (u - ua) + tau}; }
};

struct Panel {
  std::size_t seg;
  double t0, t1;
  cplx value;
  double err;
  double absint;
};

struct PanelOrder {
  bool operator()(const Panel& a, const Panel& b) const {
    if (a.err != b.err) return a.err < b.err;
    if (a.seg != b.seg) return a.seg > b.seg;
    return a.t0 > b.t0;
  }
};

template <class H>
Panel eval_panel(const Segment& s, std::size_t seg, double t0, double t1, double tau, const H& h) {
  const auto& g16 = gauss_legendre(16);
  const auto& g8 = gauss_legendre(8);
  const double half = 0.5 * (t1 - t0), mid = 0.5 * (t1 + t0);
  const cplx dz(1.0, s.slope);
  cplx q16{}, q8{};
  double abs16 = 0.0;
  // mapped tail nodes beyond the double range contribute nothing
  auto value = [&](double t) -> cplx {
    double dudt;
    double u = s.u_of(t, &dudt);
    if (s.map == PanelMap::Tail && !(std::abs(u) < 1e250 && dudt < 1e250)) return 0.0;
    return h(s.zeta(u, tau), dz) * dudt;
  };
  for (std::size_t i = 0; i < g16.size(); ++i) {
    cplx v = value(mid + half * g16.nodes[i]);
    q16 += g16.weights[i] * v;
    abs16 += g16.weights[i] * std::abs(v);
  }
  for (std::size_t i = 0; i < g8.size(); ++i) q8 += g8.weights[i] * value(mid + half * g8.nodes[i]);
  q16 *= half;
  q8 *= half;
  abs16 *= std::abs(half);
  return Panel{seg, t0, t1, q16, std::abs(q16 - q8), abs16};
}

inline double point_segment_distance(cplx p, cplx a, cplx b) {
  cplx d = b - a;
  double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  double t = std::clamp(std::real(std::conj(d) * (p - a)) / len2, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

}  // namespace detail

/// Integral of evaluator over Gamma_tau = Gamma + i tau with absolute
/// tolerance tol on panel error + tail bound.
inline QuadratureResult integrate_curve(const LipschitzGraph& g, double tau, const ContourIntegrand& f,
                                 double tol, const QuadratureOptions& opt = {}) {
  if (!(tol > 0.0)) throw QuadratureError("tolerance must be positive");
  const double s = f.decay_exponent;
  if (!(s > 1.0)) throw QuadratureError("tail certificate insufficient: decay exponent <= 1");
  if (!f.evaluator) throw QuadratureError("empty integrand");

  const auto h = [&](cplx zeta, cplx dz) { return f.evaluator(zeta, dz); };
  const double lip = g.lipschitz_bound();
  const double arc = std::sqrt(1.0 + lip * lip);

  // breakpoint structure
  std::vector<double> cuts;
  for (const auto& [u, a] : g.breakpoints()) cuts.push_back(u);
  const double inner_lo = cuts.empty() ? 0.0 : cuts.front();
  const double inner_hi = cuts.empty() ? 0.0 : cuts.back();
  for (cplx sp : f.singular_points) {
    double u = sp.real();
    bool dup = false;
    for (double c : cuts) dup = dup || std::abs(c - u) < 1e-12 * (1.0 + std::abs(u));
    if (!dup) cuts.push_back(u);
  }
  if (cuts.empty()) cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());

  // tail certificate
  double u0 = f.tail_start;
  if (!(u0 > 0.0)) u0 = std::max({1.0, 2.0 * std::abs(inner_lo), 2.0 * std::abs(inner_hi)});
  u0 = std::max({u0, std::abs(cuts.front()) + 1.0, std::abs(cuts.back()) + 1.0});
  double ctail = f.tail_constant;
  const cplx dz_left(1.0, g.left_slope()), dz_right(1.0, g.right_slope());
  if (!(ctail > 0.0)) {
    const int samples = 24;
    double worst = 0.0;
    std::vector<double> scaled;
    for (int k = 0; k <= samples; ++k) {
      double u = u0 * std::pow(2.0, 0.75 * k);
      double vr = std::abs(h(g.zeta(u) + cplx(0.0, tau), dz_right)) * std::pow(u, s);
      double vl = std::abs(h(g.zeta(-u) + cplx(0.0, tau), dz_left)) * std::pow(u, s);
      if (!std::isfinite(vr) || !std::isfinite(vl)) {
        throw QuadratureError("tail certificate insufficient: non-finite tail sample");
      }
      double v = std::max(vr, vl);
      worst = std::max(worst, v);
      scaled.push_back(v);
    }
    // |h| u^s must have levelled off at the far end
    double far = scaled[samples], before = scaled[samples - 4];
    if (far > 1.5 * before && far > 1e-300) {
      throw QuadratureError("tail certificate insufficient: integrand decays slower than declared");
    }
    ctail = 2.0 * worst;
  }
  double ucut = u0;
  if (ctail > 0.0) {
    double need = std::pow(4.0 * ctail * arc / ((s - 1.0) * tol), 1.0 / (s - 1.0));
    ucut = std::max(u0, need);
  }
  ucut *= opt.truncation_scale;
  const bool mapped_tail = !(ucut <= opt.max_truncation);
  if (mapped_tail) ucut = std::max(64.0 * u0, std::abs(cuts.front()) + 64.0);
  ucut = std::max({ucut, std::abs(cuts.front()) + 1.0, std::abs(cuts.back()) + 1.0});
  const double tail_bound =
      ctail > 0.0 && !mapped_tail ? 2.0 * ctail * std::pow(ucut, 1.0 - s) / (s - 1.0) * arc : 0.0;

  // initial segments
  std::vector<detail::Segment> segs;
  // algebraic endpoint behaviour: kinks and singular points lying on the curve
  std::vector<double> graded_at;
  std::vector<cplx> off_curve;
  for (cplx sp : f.singular_points) {
    if (std::abs(sp.imag() - (g.height(sp.real()) + tau)) <= 1e-12 * (1.0 + std::abs(sp))) {
      graded_at.push_back(sp.real());
    } else {
      off_curve.push_back(sp);
    }
  }
  auto is_kink = [&](double u) {
    if (g.is_kink(u, 1e-14)) return true;
    for (double v : graded_at) {
      if (std::abs(u - v) <= 1e-14 * (1.0 + std::abs(v))) return true;
    }
    return false;
  };
  auto add = [&](double ua, double ub, detail::PanelMap m) {
    if (!(ub > ua)) return;
    double mid = 0.5 * (ua + ub);
    double sl = g.slope(mid);
    segs.push_back({ua, ub, g.height(ua), sl, m, opt.grading_power});
  };
  // left tail, outward geometric pieces
  {
    double start = cuts.front();
    double step = std::max(1.0, 0.5 * (cuts.back() - cuts.front()));
    std::vector<std::pair<double, double>> pieces;
    double inner = start, width = step;
    while (inner > -ucut) {
      double outer = std::max(-ucut, inner - width);
      pieces.emplace_back(outer, inner);
      inner = outer;
      width *= 2.0;
    }
    for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) {
      bool graded = (it->second == start) && is_kink(start);
      add(it->first, it->second, graded ? detail::PanelMap::GradedRight : detail::PanelMap::Linear);
    }
    if (mapped_tail) segs.push_back({-ucut, -ucut, g.height(-ucut), g.left_slope(), detail::PanelMap::Tail, 1.0 / (s - 1.0)});
  }
  for (std::size_t k = 1; k < cuts.size(); ++k) {
    double ua = cuts[k - 1], ub = cuts[k], mid = 0.5 * (ua + ub);
    add(ua, mid, is_kink(ua) ? detail::PanelMap::GradedLeft : detail::PanelMap::Linear);
    add(mid, ub, is_kink(ub) ? detail::PanelMap::GradedRight : detail::PanelMap::Linear);
  }
  {
    double start = cuts.back();
    double step = std::max(1.0, 0.5 * (cuts.back() - cuts.front()));
    double inner = start, width = step;
    while (inner < ucut) {
      double outer = std::min(ucut, inner + width);
      bool graded = (inner == start) && is_kink(start);
      add(inner, outer, graded ? detail::PanelMap::GradedLeft : detail::PanelMap::Linear);
      inner = outer;
      width *= 2.0;
    }
    if (mapped_tail) segs.push_back({ucut, ucut, g.height(ucut), g.right_slope(), detail::PanelMap::Tail, 1.0 / (s - 1.0)});
  }

  // near-singularity pre-refinement
  std::vector<std::pair<std::size_t, std::pair<double, double>>> work, ready;
  for (std::size_t k = 0; k < segs.size(); ++k) work.push_back({k, {0.0, 1.0}});
  const int max_panels = opt.max_panels;
  while (!work.empty()) {
    auto [k, tt] = work.back();
    work.pop_back();
    const auto& sg = segs[k];
    double d0, d1;
    double ua = sg.u_of(tt.first, &d0), ub = sg.u_of(tt.second, &d1);
    cplx za = sg.zeta(ua, tau), zb = sg.zeta(ub, tau);
    double len = std::abs(zb - za);
    bool split = false;
    for (cplx sp : off_curve) {
      double dist = detail::point_segment_distance(sp, za, zb);
      if (dist < 2.0 * len && len >= 0.5 * dist && len > 1e-14 * (1.0 + std::abs(za))) {
        split = true;
        break;
      }
    }
    if (split && static_cast<int>(ready.size() + work.size()) < max_panels) {
      double tm = 0.5 * (tt.first + tt.second);
      work.push_back({k, {tt.first, tm}});
      work.push_back({k, {tm, tt.second}});
    } else {
      ready.push_back({k, tt});
    }
  }

  std::priority_queue<detail::Panel, std::vector<detail::Panel>, detail::PanelOrder> heap;
  std::vector<detail::Panel> done;
  double total_err = 0.0, stuck_err = 0.0;
  for (const auto& [k, tt] : ready) {
    auto p = detail::eval_panel(segs[k], k, tt.first, tt.second, tau, h);
    if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag())) {
      throw QuadratureError("non-finite integrand value");
    }
    heap.push(p);
    total_err += p.err;
  }
  const double eps = std::numeric_limits<double>::epsilon();
  const double panel_tol = 0.5 * tol;
  int count = static_cast<int>(heap.size());
  while (!heap.empty() && total_err > panel_tol) {
    detail::Panel worst = heap.top();
    // panels at roundoff level are final
    if (worst.err <= 64.0 * eps * worst.absint) {
      heap.pop();
      total_err -= worst.err;
      worst.err = 0.0;
      done.push_back(worst);
      continue;
    }
    // too narrow to split: keep its error, the tolerance check below decides
    if (worst.t1 - worst.t0 < 1e-15) {
      heap.pop();
      total_err -= worst.err;
      stuck_err += worst.err;
      done.push_back(worst);
      continue;
    }
    if (count >= max_panels) {
      throw QuadratureError("panel budget exhausted before tolerance");
    }
    heap.pop();
    total_err -= worst.err;
    double tm = 0.5 * (worst.t0 + worst.t1);
    auto a = detail::eval_panel(segs[worst.seg], worst.seg, worst.t0, tm, tau, h);
    auto b = detail::eval_panel(segs[worst.seg], worst.seg, tm, worst.t1, tau, h);
    if (!std::isfinite(std::abs(a.value)) || !std::isfinite(std::abs(b.value))) {
      throw QuadratureError("non-finite integrand value");
    }
    total_err += a.err + b.err;
    heap.push(a);
    heap.push(b);
    ++count;
  }
  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  std::sort(done.begin(), done.end(), [](const detail::Panel& a, const detail::Panel& b) {
    return a.seg != b.seg ? a.seg < b.seg : a.t0 < b.t0;
  });
  if (stuck_err > panel_tol) {
    throw QuadratureError("unresolved singularity: tolerance not met at minimal panel width");
  }
  QuadratureResult res;
  double err = 0.0;
  for (const auto& p : done) {
    res.value += p.value;
    err += p.err;
  }
  res.panels_used = static_cast<int>(done.size());
  res.tail_bound = tail_bound;
  res.abs_error_estimate = err + tail_bound;
  res.truncation_left = mapped_tail ? std::numeric_limits<double>::infinity() : ucut;
  res.truncation_right = res.truncation_left;
  return res;
}

/// Integral over the real line (the flat graph).
inline QuadratureResult integrate_real_line(const ContourIntegrand& f, double tol,
                                            const QuadratureOptions& opt = {}) {
  return integrate_curve(LipschitzGraph::flat(), 0.0, f, tol, opt);
}

/// (int_Gamma |F(zeta + i tau)|^p |dzeta|)^{1/p} with relative tolerance tol.
/// `decay` is the exponent d with |F(w)| = O(|w|^-d); the tail certificate
/// uses p*d, which must exceed 1.
template <class Fn>
double lp_norm_on_shifted_curve(const LipschitzGraph& g, double tau, const Fn& F, double decay,
                                double p, double tol, std::vector<cplx> singular_points = {}) {
  if (!(p > 0.0)) throw QuadratureError("p must be positive");
  ContourIntegrand ig;
  ig.decay_exponent = p * decay;
  ig.singular_points = std::move(singular_points);
  ig.evaluator = [&](cplx zeta, cplx dz) -> cplx {
    return std::pow(std::abs(F(zeta)), p) * std::abs(dz);
  };
  double coarse_tol = 1e-3;
  auto coarse = integrate_curve(g, tau, ig, coarse_tol);
  while (coarse.abs_error_estimate > 0.1 * std::abs(coarse.value) && coarse_tol > 1e-250) {
    coarse_tol *= 1e-4;
    coarse = integrate_curve(g, tau, ig, coarse_tol);
  }
  double scale = std::abs(coarse.value);
  if (scale == 0.0) return 0.0;
  auto fine = integrate_curve(g, tau, ig, tol * scale);
  return std::pow(std::max(0.0, fine.value.real()), 1.0 / p);
}

}  // namespace hardylip
