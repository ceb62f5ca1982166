#pragma once

// The transform T F = F(Phi) (Phi')^(1/p) from the domain above the graph to
// C+, its inverse, and Hardy norms as the supremum of L^p norms over shifted
// curves.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "hardylip/conformal.hpp"
#include "hardylip/function.hpp"
#include "hardylip/quadrature.hpp"

namespace hardylip {

namespace detail {

inline MembershipRange single_exponent(double p) {
  return {std::nextafter(p, 0.0), p, true};
}

}  // namespace detail

/// T F(z) = F(Phi(z)) exp(log Phi'(z) / p), a function on C+.
inline AnalyticTestFunction transform_T(const AnalyticTestFunction& F, double p,
                                        const SchwarzChristoffelMap& map) {
  if (F.domain() != DomainTag::AboveGraph) throw HardyError("T needs a function above the graph");
  if (!(p > 0.0)) throw HardyError("p must be positive");
  auto m = std::make_shared<const SchwarzChristoffelMap>(map);
  auto eval = [F, m, p](cplx z) { return F(m->phi(z)) * std::exp(m->log_phi_prime(z) / p); };
  AnalyticTestFunction::Fn trace;
  if (F.has_trace()) {
    trace = [F, m, p](cplx x) {
      if (m->is_prevertex(x.real())) return cplx(0.0, 0.0);
      cplx z(x.real(), 0.0);
      return F.trace(m->phi(z)) * std::exp(m->log_phi_prime(z) / p);
    };
  }
  std::vector<cplx> sing;
  for (double x : m->prevertices()) sing.emplace_back(x, 0.0);
  const double s = m->sigma();
  const double decay = F.decay() * (1.0 - s) + s / p;
  MembershipRange r = F.certified_in(p) ? detail::single_exponent(p) : MembershipRange::none();
  return AnalyticTestFunction(eval, trace, DomainTag::UpperHalfPlane, LipschitzGraph::flat(), decay, r,
                              Provenance::PushforwardT, "T[" + F.label() + "]", std::move(sing));
}

/// T^-1 f(w) = f(Psi(w)) exp(-log Phi'(Psi(w)) / p), a function above the graph.
inline AnalyticTestFunction transform_T_inv(const AnalyticTestFunction& f, double p,
                                            const SchwarzChristoffelMap& map) {
  if (f.domain() != DomainTag::UpperHalfPlane) throw HardyError("T^-1 needs a function on C+");
  if (!(p > 0.0)) throw HardyError("p must be positive");
  auto m = std::make_shared<const SchwarzChristoffelMap>(map);
  auto eval = [f, m, p](cplx w) {
    cplx z = m->psi(w);
    return f(z) * std::exp(-m->log_phi_prime(z) / p);
  };
  AnalyticTestFunction::Fn trace;
  if (f.has_trace()) {
    trace = [f, m, p](cplx zeta) {
      auto b = m->boundary_local(zeta);
      if (b.anchor != SchwarzChristoffelMap::npos && b.offset == 0.0) return cplx(0.0, 0.0);
      double x = b.anchor == SchwarzChristoffelMap::npos ? b.offset : m->prevertices()[b.anchor] + b.offset;
      return f.trace(cplx(x, 0.0)) * std::exp(-m->log_phi_prime_local(b) / p);
    };
  }
  std::vector<cplx> sing(m->kinks().begin(), m->kinks().end());
  const double s = m->sigma();
  const double decay = (f.decay() - s / p) / (1.0 - s);
  MembershipRange r = f.certified_in(p) ? detail::single_exponent(p) : MembershipRange::none();
  return AnalyticTestFunction(eval, trace, DomainTag::AboveGraph, map.graph(), decay, r,
                              Provenance::PushforwardTInv, "T^-1[" + f.label() + "]", std::move(sing));
}

struct TauGrid {
  double min = 1e-4;
  double max = 1e2;
  int count = 25;

  std::vector<double> values() const {
    if (!(min > 0.0) || !(max > min) || count < 2) throw HardyError("invalid tau grid");
    std::vector<double> out(count);
    for (int k = 0; k < count; ++k) {
      out[k] = min * std::pow(max / min, static_cast<double>(k) / (count - 1));
    }
    return out;
  }
};

struct HardyNormResult {
  double value = 0.0;
  /// tau of the maximum; 0 when the boundary level dominates
  double argmax_tau = 0.0;
  /// L^p norm of the boundary trace (the tau -> 0 limit), when available
  double boundary_level = 0.0;
  bool has_boundary_level = false;
  bool extended = false;
  /// the norm did not stay bounded as tau -> 0
  bool divergent = false;
  /// (tau, L^p norm on the shifted curve), tau increasing
  std::vector<std::pair<double, double>> table;
};

namespace detail {

inline std::vector<cplx> norm_singular_points(const AnalyticTestFunction& F) {
  std::vector<cplx> sp = F.singular_points();
  for (const auto& [u, a] : F.graph().kinks()) sp.emplace_back(u, a);
  return sp;
}

}  // namespace detail

/// (int_Gamma |F(zeta + i tau)|^p |dzeta|)^(1/p), relative tolerance tol.
inline double lp_norm_at(const AnalyticTestFunction& F, double tau, double p, double tol) {
  if (!(tau > 0.0)) throw HardyError("tau must be positive; use the boundary trace for tau = 0");
  return lp_norm_on_shifted_curve(F.graph(), tau, F, F.decay(), p, tol,
                                  detail::norm_singular_points(F));
}

/// L^p norm of the boundary trace over the curve.
inline double boundary_lp_norm(const AnalyticTestFunction& F, double p, double tol) {
  auto tr = [&F](cplx zeta) { return F.trace(zeta); };
  return lp_norm_on_shifted_curve(F.graph(), 0.0, tr, F.decay(), p, tol, detail::norm_singular_points(F));
}

/// Supremum over tau > 0 of the L^p norms on shifted curves, realized as the
/// maximum over a log grid plus the boundary-trace level; the grid is
/// extended by one decade when the maximum sits at an edge.
inline HardyNormResult hardy_norm(const AnalyticTestFunction& F, double p, const TauGrid& grid = {},
                                  double tol = 1e-8) {
  if (!(p > 0.0)) throw HardyError("p must be positive");
  HardyNormResult res;
  auto taus = grid.values();
  auto eval_at = [&](double tau) -> double {
    try {
      return lp_norm_at(F, tau, p, tol);
    } catch (const QuadratureError&) {
      res.divergent = true;
      return std::numeric_limits<double>::infinity();
    }
  };
  std::vector<double> vals;
  for (double t : taus) vals.push_back(eval_at(t));
  auto arg = std::max_element(vals.begin(), vals.end()) - vals.begin();
  const int ext = std::max(2, grid.count / 4);
  const double ratio = std::pow(grid.max / grid.min, 1.0 / (grid.count - 1));
  if (arg == 0 || arg == static_cast<long>(vals.size()) - 1) {
    res.extended = true;
    const bool low = arg == 0;
    for (int k = 1; k <= ext; ++k) {
      double t = low ? taus.front() / ratio : taus.back() * ratio;
      double v = eval_at(t);
      if (low) {
        taus.insert(taus.begin(), t);
        vals.insert(vals.begin(), v);
      } else {
        taus.push_back(t);
        vals.push_back(v);
      }
    }
  }
  for (std::size_t k = 0; k < taus.size(); ++k) res.table.emplace_back(taus[k], vals[k]);
  arg = std::max_element(vals.begin(), vals.end()) - vals.begin();
  res.value = vals[arg];
  res.argmax_tau = taus[arg];
  if (F.has_trace()) {
    try {
      res.boundary_level = boundary_lp_norm(F, p, tol);
      res.has_boundary_level = std::isfinite(res.boundary_level);
      if (!res.has_boundary_level) res.divergent = true;
    } catch (const QuadratureError&) {
      res.divergent = true;
    }
    if (res.has_boundary_level && res.boundary_level >= res.value) {
      res.value = res.boundary_level;
      res.argmax_tau = 0.0;
    }
  } else if (arg == 0 && vals.size() >= 4) {
    // no trace: steady growth over the smallest taus signals divergence
    bool increasing = true;
    for (std::size_t k = 0; k < 3; ++k) increasing = increasing && vals[k] > vals[k + 1] * (1.0 + 1e-3);
    res.divergent = res.divergent || increasing;
  }
  if (res.divergent) res.value = std::numeric_limits<double>::infinity();
  return res;
}

}  // namespace hardylip
