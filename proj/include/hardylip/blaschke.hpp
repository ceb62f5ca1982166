#pragma once

// Finite Blaschke products on C+ and, through Psi, on the domain above the
// graph; division of a function by the Blaschke product of its zeros.

#include <cmath>
#include <limits>
#include <memory>
#include <vector>

#include "hardylip/conformal.hpp"
#include "hardylip/function.hpp"

namespace hardylip {

struct BlaschkeData {
  /// zeros in C+ other than i, repeated according to multiplicity
  std::vector<cplx> zeros;
  /// multiplicity of the zero at i
  int m_at_i = 0;
  /// sum of y_n / (1 + |z_n|^2) over all zeros, including those at i
  double convergence_sum = 0.0;
};

/// Zeros within this distance of i are counted in m_at_i.
inline constexpr double blaschke_i_tol = 1e-14;

inline BlaschkeData make_blaschke_data(const std::vector<cplx>& zeros) {
  BlaschkeData b;
  for (cplx z : zeros) {
    if (!(z.imag() > 0.0) || !std::isfinite(std::abs(z))) {
      throw HardyError("Blaschke zeros must lie in the open upper half plane");
    }
    b.convergence_sum += z.imag() / (1.0 + std::norm(z));
    if (std::abs(z - I) <= blaschke_i_tol) {
      ++b.m_at_i;
    } else {
      b.zeros.push_back(z);
    }
  }
  return b;
}

/// B(z) = ((z - i)/(z + i))^m prod (|z_n^2 + 1| / (z_n^2 + 1)) (z - z_n)/(z - conj z_n)
inline cplx blaschke_eval(const BlaschkeData& b, cplx z) {
  cplx out = std::pow((z - I) / (z + I), b.m_at_i);
  for (cplx zn : b.zeros) {
    cplx q = zn * zn + 1.0;
    out *= (std::abs(q) / q) * (z - zn) / (z - std::conj(zn));
  }
  return out;
}

namespace detail {

inline MembershipRange bounded_only() {
  const double inf = std::numeric_limits<double>::infinity();
  return {inf, inf, true};
}

}  // namespace detail

inline AnalyticTestFunction blaschke_upper(const BlaschkeData& b) {
  for (cplx z : b.zeros) {
    if (!(z.imag() > 0.0)) throw HardyError("Blaschke zero on or below the real axis");
  }
  auto data = std::make_shared<const BlaschkeData>(b);
  auto f = [data](cplx z) { return blaschke_eval(*data, z); };
  std::vector<cplx> poles;
  for (cplx z : b.zeros) poles.push_back(std::conj(z));
  for (int k = 0; k < b.m_at_i; ++k) poles.push_back(-I);
  return AnalyticTestFunction(f, f, DomainTag::UpperHalfPlane, LipschitzGraph::flat(), 0.0,
                              detail::bounded_only(), Provenance::BlaschkeProduct, "B", std::move(poles));
}

/// Blaschke data of the preimages Psi(w_n) of zeros w_n above the graph.
inline BlaschkeData preimage_zeros(const std::vector<cplx>& domain_zeros, const SchwarzChristoffelMap& map) {
  std::vector<cplx> z;
  for (cplx w : domain_zeros) {
    if (classify(map.graph(), w) != Side::Above) throw HardyError("Blaschke zero not above the graph");
    z.push_back(map.psi(w));
  }
  return make_blaschke_data(z);
}

/// B(w) = B_+(Psi(w)) with B_+ the Blaschke product of the preimage zeros.
inline AnalyticTestFunction blaschke_domain(const std::vector<cplx>& domain_zeros,
                                            const SchwarzChristoffelMap& map) {
  auto data = std::make_shared<const BlaschkeData>(preimage_zeros(domain_zeros, map));
  auto m = std::make_shared<const SchwarzChristoffelMap>(map);
  auto eval = [data, m](cplx w) { return blaschke_eval(*data, m->psi(w)); };
  auto trace = [data, m](cplx zeta) {
    return blaschke_eval(*data, cplx(m->boundary_preimage(zeta), 0.0));
  };
  return AnalyticTestFunction(eval, trace, DomainTag::AboveGraph, map.graph(), 0.0, detail::bounded_only(),
                              Provenance::BlaschkeProduct, "B", {});
}

struct DeflateOptions {
  /// |F(w_n)| must be below this times the local scale of F
  double zero_tol = 1e-8;
  /// radius of the removable-singularity guard around each zero
  double guard_radius = 1e-4;
};

/// G = F / B for B the Blaschke product of the listed zeros of F (repeated
/// according to multiplicity). Within guard_radius of a zero G is the
/// quadratic interpolant through three points on a circle of twice that
/// radius.
inline AnalyticTestFunction deflate_zeros(const AnalyticTestFunction& F, const std::vector<cplx>& domain_zeros,
                                          const SchwarzChristoffelMap& map, const DeflateOptions& opt = {}) {
  if (F.domain() != DomainTag::AboveGraph) throw HardyError("deflation needs a function above the graph");
  AnalyticTestFunction B = blaschke_domain(domain_zeros, map);
  std::vector<cplx> centers;
  for (cplx w : domain_zeros) {
    bool seen = false;
    for (cplx c : centers) seen = seen || std::abs(c - w) <= 1e-14 * (1.0 + std::abs(w));
    if (!seen) centers.push_back(w);
  }
  const double rg = opt.guard_radius;
  for (cplx w : centers) {
    const double rl = std::min(1e-2, 0.5 * distance_to_graph(map.graph(), w));
    double local = 0.0;
    for (int k = 0; k < 8; ++k) local = std::max(local, std::abs(F(w + std::polar(rl, 2.0 * pi * k / 8))));
    if (!(std::abs(F(w)) <= opt.zero_tol * std::max(local, 1e-300))) {
      throw HardyError("zero mismatch: F does not vanish at a listed zero");
    }
    // F must vanish to the listed order: F / B stays bounded on shrinking circles
    double g_out = 0.0, g_in = 0.0;
    for (int k = 0; k < 8; ++k) {
      cplx e = std::polar(1.0, 2.0 * pi * (k + 0.5) / 8);
      g_out = std::max(g_out, std::abs(F(w + 4.0 * rg * e) / B(w + 4.0 * rg * e)));
      g_in = std::max(g_in, std::abs(F(w + 2.0 * rg * e) / B(w + 2.0 * rg * e)));
    }
    if (g_in > 1.5 * g_out + 1e-300) throw HardyError("zero mismatch: multiplicity exceeds the order of the zero");
  }
  auto eval = [F, B, centers, rg](cplx w) {
    for (cplx c : centers) {
      if (std::abs(w - c) < rg) {
        // quadratic through three points on |w - c| = 2 rg
        cplx p[3], v[3];
        for (int k = 0; k < 3; ++k) {
          p[k] = c + std::polar(2.0 * rg, 2.0 * pi * k / 3.0);
          v[k] = F(p[k]) / B(p[k]);
        }
        cplx out{};
        for (int a = 0; a < 3; ++a) {
          cplx l = 1.0;
          for (int b = 0; b < 3; ++b) {
            if (b != a) l *= (w - p[b]) / (p[a] - p[b]);
          }
          out += v[a] * l;
        }
        return out;
      }
    }
    return F(w) / B(w);
  };
  AnalyticTestFunction::Fn trace;
  if (F.has_trace()) trace = [F, B](cplx zeta) { return F.trace(zeta) / B.trace(zeta); };
  return AnalyticTestFunction(eval, trace, DomainTag::AboveGraph, map.graph(), F.decay(), F.membership_range(),
                              Provenance::Product, F.label() + "/B", F.singular_points());
}

}  // namespace hardylip
