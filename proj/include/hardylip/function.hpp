#pragma once

// Analytic test functions: an evaluator on C+ or on the domain above a graph,
// its boundary trace, a decay certificate and the range of certified H^p
// memberships.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hardylip/curve.hpp"

namespace hardylip {

enum class DomainTag { UpperHalfPlane, AboveGraph };

enum class Provenance { ClosedForm, PushforwardT, PushforwardTInv, BlaschkeProduct, Product };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::ClosedForm: return "closed-form";
    case Provenance::PushforwardT: return "pushforward-T";
    case Provenance::PushforwardTInv: return "pushforward-T-inverse";
    case Provenance::BlaschkeProduct: return "blaschke-product";
    case Provenance::Product: return "product";
  }
  return "unknown";
}

/// Open-below range of exponents p with a certified finite H^p norm.
/// hi = inf with hi_inclusive means the function is also bounded (H^inf).
struct MembershipRange {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool hi_inclusive = false;

  bool contains(double p) const {
    if (!(p > lo)) return false;
    return hi_inclusive ? p <= hi : p < hi;
  }
  bool bounded() const { return std::isinf(hi) && hi_inclusive; }
  static MembershipRange none() { return {0.0, 0.0, false}; }
};

class AnalyticTestFunction {
 public:
  using Fn = std::function<cplx(cplx)>;

  AnalyticTestFunction() = default;

  AnalyticTestFunction(Fn eval, Fn trace, DomainTag tag, LipschitzGraph graph, double decay,
                       MembershipRange memberships, Provenance provenance, std::string label,
                       std::vector<cplx> singular_points = {})
      : eval_(std::move(eval)),
        trace_(std::move(trace)),
        tag_(tag),
        graph_(std::make_shared<const LipschitzGraph>(std::move(graph))),
        decay_(decay),
        range_(memberships),
        provenance_(provenance),
        label_(std::move(label)),
        singular_(std::move(singular_points)) {}

  cplx operator()(cplx w) const { return eval_(w); }
  cplx eval(cplx w) const { return eval_(w); }

  /// Boundary value at a point of the boundary curve (a real x for C+).
  cplx trace(cplx zeta) const {
    if (!trace_) throw HardyError("function has no boundary trace: " + label_);
    return trace_(zeta);
  }
  bool has_trace() const { return static_cast<bool>(trace_); }

  DomainTag domain() const { return tag_; }
  const LipschitzGraph& graph() const { return *graph_; }
  /// |F(w)| = O(|w|^-decay) at infinity within the domain and on its boundary.
  double decay() const { return decay_; }
  const MembershipRange& membership_range() const { return range_; }
  bool certified_in(double p) const { return range_.contains(p); }
  /// The subset of candidate exponents with a certified finite norm.
  std::vector<double> hp_memberships(const std::vector<double>& candidates) const {
    std::vector<double> out;
    for (double p : candidates) {
      if (range_.contains(p)) out.push_back(p);
    }
    return out;
  }
  Provenance provenance() const { return provenance_; }
  const std::string& label() const { return label_; }
  /// Singularities near the boundary (outside the domain), used to steer quadrature.
  const std::vector<cplx>& singular_points() const { return singular_; }

  AnalyticTestFunction scaled(cplx c) const {
    AnalyticTestFunction out = *this;
    Fn e = eval_, t = trace_;
    out.eval_ = [e, c](cplx w) { return c * e(w); };
    if (t) out.trace_ = [t, c](cplx z) { return c * t(z); };
    if (c == cplx(0.0, 0.0)) out.range_ = {0.0, std::numeric_limits<double>::infinity(), true};
    return out;
  }

 private:
  Fn eval_;
  Fn trace_;
  DomainTag tag_ = DomainTag::UpperHalfPlane;
  std::shared_ptr<const LipschitzGraph> graph_ = std::make_shared<const LipschitzGraph>();
  double decay_ = 0.0;
  MembershipRange range_;
  Provenance provenance_ = Provenance::ClosedForm;
  std::string label_;
  std::vector<cplx> singular_;
};

/// Pointwise product. Memberships follow Hoelder's inequality; a bounded
/// factor keeps the other factor's range.
inline AnalyticTestFunction multiply(const AnalyticTestFunction& a, const AnalyticTestFunction& b) {
  if (a.domain() != b.domain()) throw HardyError("product of functions on different domains");
  MembershipRange r;
  const auto& ra = a.membership_range();
  const auto& rb = b.membership_range();
  if (ra.bounded()) {
    r = rb;
  } else if (rb.bounded()) {
    r = ra;
  } else {
    // 1/r = 1/p + 1/q
    double inv_hi = (std::isinf(ra.hi) ? 0.0 : 1.0 / ra.hi) + (std::isinf(rb.hi) ? 0.0 : 1.0 / rb.hi);
    double inv_lo = 1.0 / ra.lo + 1.0 / rb.lo;
    r.lo = 1.0 / inv_lo;
    r.hi = inv_hi > 0.0 ? 1.0 / inv_hi : std::numeric_limits<double>::infinity();
    r.hi_inclusive = false;
  }
  AnalyticTestFunction::Fn trace;
  if (a.has_trace() && b.has_trace()) {
    trace = [a, b](cplx z) { return a.trace(z) * b.trace(z); };
  }
  std::vector<cplx> sing = a.singular_points();
  sing.insert(sing.end(), b.singular_points().begin(), b.singular_points().end());
  return AnalyticTestFunction([a, b](cplx w) { return a(w) * b(w); }, trace, a.domain(), a.graph(),
                              a.decay() + b.decay(), r, Provenance::Product,
                              a.label() + "*" + b.label(), std::move(sing));
}

inline AnalyticTestFunction zero_function(DomainTag tag, const LipschitzGraph& g = {}) {
  auto z = [](cplx) { return cplx(0.0, 0.0); };
  return AnalyticTestFunction(z, z, tag, g, 8.0,
                              {0.0, std::numeric_limits<double>::infinity(), true},
                              Provenance::ClosedForm, "zero");
}

/// f(z) = (z + i)^(-k/p0) on C+, in H^q(C+) exactly for q > p0/k.
inline AnalyticTestFunction power_generator(double p0, double k = 2.0) {
  if (!(p0 > 0.0) || !(k > 0.0)) throw HardyError("generator needs p > 0 and k > 0");
  const double e = -k / p0;
  auto f = [e](cplx z) { return std::exp(e * std::log(z + I)); };
  char buf[64];
  std::snprintf(buf, sizeof buf, "(z+i)^(-%g/%g)", k, p0);
  return AnalyticTestFunction(f, f, DomainTag::UpperHalfPlane, LipschitzGraph::flat(), k / p0,
                              {p0 / k, std::numeric_limits<double>::infinity(), false},
                              Provenance::ClosedForm, buf, {-I});
}

/// 1/(w - alpha) with alpha strictly below the boundary; bounded, and in H^q
/// for every q > 1.
inline AnalyticTestFunction cauchy_pole(const LipschitzGraph& g, cplx alpha,
                                        DomainTag tag = DomainTag::AboveGraph) {
  if (classify(g, alpha) != Side::Below) throw HardyError("pole must lie below the boundary");
  auto f = [alpha](cplx w) { return 1.0 / (w - alpha); };
  return AnalyticTestFunction(f, f, tag, g, 1.0, {1.0, std::numeric_limits<double>::infinity(), true},
                              Provenance::ClosedForm, "1/(w-alpha)", {alpha});
}

/// (-i (w - alpha))^(-gamma) with alpha below the boundary. The principal
/// branch cut runs straight down from alpha, so it never meets the domain.
inline AnalyticTestFunction native_power(const LipschitzGraph& g, cplx alpha, double gamma,
                                         DomainTag tag = DomainTag::AboveGraph) {
  if (classify(g, alpha) != Side::Below) throw HardyError("branch point must lie below the boundary");
  if (!(gamma > 0.0)) throw HardyError("exponent must be positive");
  auto f = [alpha, gamma](cplx w) { return std::exp(-gamma * std::log(-I * (w - alpha))); };
  return AnalyticTestFunction(f, f, tag, g, gamma,
                              {1.0 / gamma, std::numeric_limits<double>::infinity(), false},
                              Provenance::ClosedForm, "(-i(w-alpha))^-gamma", {alpha});
}

/// (-i (w - zeta_b))^(-1/2) (-i (w - alpha))^(-1) with zeta_b on the curve
/// and alpha below it: in H^q exactly for 2/3 < q < 2, the trace is not in L^2.
inline AnalyticTestFunction boundary_singular_control(const LipschitzGraph& g, double u_b, cplx alpha) {
  if (classify(g, alpha) != Side::Below) throw HardyError("pole must lie below the boundary");
  const cplx zb = g.zeta(u_b);
  auto f = [zb, alpha](cplx w) {
    return std::exp(-0.5 * std::log(-I * (w - zb))) / (-I * (w - alpha));
  };
  return AnalyticTestFunction(f, f, DomainTag::AboveGraph, g, 1.5, {2.0 / 3.0, 2.0, false},
                              Provenance::ClosedForm, "boundary-singular-control", {zb, alpha});
}

/// Maximum Cauchy-Riemann residual |dF/dy - i dF/dx| / (1 + |F'|) over the
/// points, from central differences with step h.
inline double cauchy_riemann_residual(const AnalyticTestFunction& F, const std::vector<cplx>& pts,
                                      double h = 1e-5) {
  double worst = 0.0;
  for (cplx w : pts) {
    cplx fx = (F(w + h) - F(w - h)) / (2.0 * h);
    cplx fy = (F(w + I * h) - F(w - I * h)) / (2.0 * h);
    worst = std::max(worst, std::abs(fy - I * fx) / (1.0 + std::abs(fx)));
  }
  return worst;
}

}  // namespace hardylip
