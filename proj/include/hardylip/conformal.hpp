#pragma once

// Schwarz-Christoffel map from the upper half plane onto the domain above a
// piecewise-linear Lipschitz graph:
//
//   Phi'(z) = C prod_k (z - x_k)^(-beta_k),   Phi(x_1) = A = first kink,
//
// with x_1 = -1 and |C| = 1 fixing the Moebius freedom (infinity is fixed by
// the product form). beta_k is the turning angle at kink k divided by pi and
// arg C is the direction of the right end ray.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "hardylip/curve.hpp"
#include "hardylip/gauss.hpp"
#include "hardylip/gauss_newton.hpp"

namespace hardylip {

struct SolverOptions {
  double tol = 1e-10;
  int max_iter = 100;
  double crowding = 1e-12;
};

class SchwarzChristoffelMap {
 public:
  /// Solves the parameter problem for g: side lengths of all finite segments
  /// matched to options.tol by damped Gauss-Newton on log-gaps.
  static SchwarzChristoffelMap solve(const LipschitzGraph& g, const SolverOptions& opt = {}) {
    SchwarzChristoffelMap m(g);
    const std::size_t n = m.kinks_.size();
    if (n >= 2) {
      std::vector<double> lengths(n - 1);
      for (std::size_t k = 0; k + 1 < n; ++k) lengths[k] = std::abs(m.kinks_[k + 1] - m.kinks_[k]);
      auto residual = [&m, &lengths](const Eigen::VectorXd& y) {
        m.set_gaps(y);
        Eigen::VectorXd r(y.size());
        for (Eigen::Index k = 0; k < y.size(); ++k) {
          r(k) = std::log(m.side_length(static_cast<std::size_t>(k)) / lengths[k]);
        }
        return r;
      };
      Eigen::VectorXd y(n - 1);
      for (std::size_t k = 0; k + 1 < n; ++k) y(k) = std::log(lengths[k]);
      // log residuals ~ relative; tighten so absolute lengths meet opt.tol
      double lmax = *std::max_element(lengths.begin(), lengths.end());
      GaussNewton gn(0.01 * opt.tol / std::max(1.0, lmax), opt.max_iter);
      auto sol = gn.solve(residual, y);
      m.set_gaps(sol.x);
      double worst = 0.0;
      for (std::size_t k = 0; k + 1 < n; ++k) {
        worst = std::max(worst, std::abs(m.side_length(k) - lengths[k]));
      }
      m.residual_ = worst;
      if (!(worst <= opt.tol)) {
        throw MapError("parameter problem did not converge; side-length residual " +
                       std::to_string(worst));
      }
      for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m.x_[k + 1] - m.x_[k] < opt.crowding) {
          m.warnings_.push_back("crowding: prevertices " + std::to_string(k) + " and " +
                                std::to_string(k + 1) + " closer than " +
                                std::to_string(opt.crowding));
        }
      }
    }
    m.finalize();
    return m;
  }

  /// Rebuilds a map from cached parameters; exponents and multiplier are
  /// checked against the graph.
  static SchwarzChristoffelMap from_parameters(const LipschitzGraph& g,
                                               std::vector<double> prevertices,
                                               std::vector<double> exponents, cplx C, cplx A) {
    SchwarzChristoffelMap m(g);
    if (prevertices.size() != m.x_.size() || exponents.size() != m.beta_.size()) {
      throw MapError("parameter count does not match the number of kinks");
    }
    for (std::size_t k = 0; k < exponents.size(); ++k) {
      if (std::abs(exponents[k] - m.beta_[k]) > 1e-9) throw MapError("exponent mismatch");
    }
    for (std::size_t k = 1; k < prevertices.size(); ++k) {
      if (!(prevertices[k] > prevertices[k - 1])) throw MapError("prevertices must increase");
    }
    if (std::abs(std::arg(C) - std::arg(m.c_)) > 1e-9) throw MapError("multiplier direction mismatch");
    m.x_ = std::move(prevertices);
    m.c_ = C;
    m.a_ = A;
    m.finalize();
    return m;
  }

  const LipschitzGraph& graph() const { return graph_; }
  const std::vector<double>& prevertices() const { return x_; }
  const std::vector<double>& exponents() const { return beta_; }
  cplx multiplier() const { return c_; }
  cplx offset() const { return a_; }
  const std::vector<cplx>& vertex_images() const { return w_; }
  const std::vector<cplx>& kinks() const { return kinks_; }
  double residual() const { return residual_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  /// Sum of exponents; Phi(z) ~ z^(1 - sigma) at infinity.
  double sigma() const { return sigma_; }
  bool is_prevertex(double x) const { return std::find(x_.begin(), x_.end(), x) != x_.end(); }

  /// log Phi'(z) on the branch continuous in the closed upper half plane; its
  /// imaginary part is arg Phi', which stays in [-arctan M, arctan M].
  cplx log_phi_prime(cplx z) const {
    z = upper_limit(z);
    cplx acc = log_c_;
    for (std::size_t k = 0; k < x_.size(); ++k) {
      cplx d = upper_limit(cplx(z.real() - x_[k], z.imag()));
      if (d == cplx(0.0, 0.0)) throw MapError("derivative evaluated at a prevertex");
      acc -= beta_[k] * std::log(d);
    }
    return acc;
  }

  cplx phi_prime(cplx z) const { return std::exp(log_phi_prime(z)); }

  /// (Phi'(z))^(1/p) with the principal branch.
  cplx phi_prime_power(cplx z, double p) const {
    if (!(p > 0.0)) throw MapError("p must be positive");
    cplx l = log_phi_prime(z);
    if (std::abs(l.imag()) >= pi / 2.0 - 1e-8) throw MapError("sector condition violated");
    return std::exp(l / p);
  }

  cplx phi(cplx z) const {
    z = upper_limit(z);
    if (x_.empty()) return a_ + c_ * z;
    if (std::abs(z) >= r_asym_) return asymptotic_phi(z);
    std::size_t j = nearest_prevertex(z);
    return w_[j] + c_ * integral_from(j, z);
  }

  /// Inverse map for w above the graph; Newton from the best available seed.
  cplx psi(cplx w) const {
    if (x_.empty()) return (w - a_) / c_;
    if (classify(graph_, w, 0.0) != Side::Above) throw MapError("psi requires a point above the graph");
    cplx best = seed_from_samples(w);
    cplx best_r = phi(best) - w;
    if (std::abs(w - a_) > 0.5 * image_radius_) {
      cplx z0 = asymptotic_seed(w);
      if (z0.imag() > 0.0 && std::isfinite(std::abs(z0))) {
        cplx r = phi(z0) - w;
        if (std::abs(r) < std::abs(best_r)) {
          best = z0;
          best_r = r;
        }
      }
    }
    return newton(w, best, best_r);
  }

  cplx psi_prime(cplx w) const { return std::exp(-log_phi_prime(psi(w))); }

  /// Boundary preimage in local form x = x_anchor + offset, anchored at the
  /// nearest kink of the containing segment so that points close to a kink
  /// keep full relative precision. For graphs without kinks anchor is npos
  /// and offset is x itself.
  struct BoundaryPoint {
    std::size_t anchor;
    double offset;
  };
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  BoundaryPoint boundary_local(cplx zeta) const {
    if (x_.empty()) return {npos, std::real((zeta - a_) / c_)};
    const std::size_t n = x_.size();
    const double u = zeta.real();
    std::size_t i;
    double dir, rho_max;
    if (u < kinks_[0].real()) {
      i = 0;
      dir = -1.0;
      rho_max = std::numeric_limits<double>::infinity();
    } else if (u >= kinks_[n - 1].real()) {
      i = n - 1;
      dir = 1.0;
      rho_max = std::numeric_limits<double>::infinity();
    } else {
      i = 0;
      while (i + 1 < n && kinks_[i + 1].real() <= u) ++i;
      dir = 1.0;
      rho_max = x_[i + 1] - x_[i];
      if (std::abs(zeta - kinks_[i + 1]) < std::abs(zeta - kinks_[i])) {
        ++i;
        dir = -1.0;
      }
    }
    const double target = std::abs(zeta - kinks_[i]);
    if (target == 0.0) return {i, 0.0};
    // interior segments: anchor at the end whose half of [x_i, x_i+1] holds the point
    if (std::isfinite(rho_max)) {
      const auto& own = edge_samples_[i][dir > 0.0 ? 1 : 0];
      if (target > std::abs(own.front().d)) {
        i = dir > 0.0 ? i + 1 : i - 1;
        dir = -dir;
        return boundary_solve(i, dir, std::abs(zeta - kinks_[i]));
      }
    }
    return boundary_solve(i, dir, target);
  }

  /// Real x with Phi(x) = zeta for zeta on the graph.
  double boundary_preimage(cplx zeta) const {
    auto b = boundary_local(zeta);
    return b.anchor == npos ? b.offset : x_[b.anchor] + b.offset;
  }

  /// log Phi'(x_anchor + offset) on the real axis, evaluated with the offset
  /// kept separate from the anchor.
  cplx log_phi_prime_local(std::size_t anchor, double offset) const {
    if (anchor == npos) return log_c_;
    if (offset == 0.0) throw MapError("derivative evaluated at a prevertex");
    cplx acc = log_c_;
    for (std::size_t k = 0; k < x_.size(); ++k) {
      double d = k == anchor ? offset : (x_[anchor] - x_[k]) + offset;
      acc -= beta_[k] * std::log(upper_limit(cplx(d, 0.0)));
    }
    return acc;
  }

  cplx log_phi_prime_local(const BoundaryPoint& b) const { return log_phi_prime_local(b.anchor, b.offset); }

 private:
  explicit SchwarzChristoffelMap(const LipschitzGraph& g) : graph_(g) {
    const auto& bps = g.breakpoints();
    const auto& sl = g.slopes();
    for (std::size_t k = 0; k < bps.size(); ++k) {
      if (sl[k] == sl[k + 1]) continue;
      kinks_.emplace_back(bps[k].first, bps[k].second);
      beta_.push_back((std::atan(sl[k + 1]) - std::atan(sl[k])) / pi);
    }
    const double theta_last = std::atan(g.right_slope());
    c_ = std::polar(1.0, theta_last);
    if (kinks_.empty()) {
      a_ = cplx(0.0, g.height(0.0));
    } else {
      a_ = kinks_[0];
      // initial prevertices: x_1 = -1, gaps equal to side lengths
      x_.push_back(-1.0);
      for (std::size_t k = 1; k < kinks_.size(); ++k) {
        x_.push_back(x_.back() + std::abs(kinks_[k] - kinks_[k - 1]));
      }
    }
    sigma_ = 0.0;
    for (double b : beta_) sigma_ += b;
  }

  void set_gaps(const Eigen::VectorXd& y) {
    for (Eigen::Index k = 0; k < y.size(); ++k) x_[k + 1] = x_[k] + std::exp(y(k));
  }

  // |int_{x_k}^{x_{k+1}} Phi'(x) dx|
  double side_length(std::size_t k) const {
    double m = 0.5 * (x_[k] + x_[k + 1]);
    return std::abs(c_ * (integral_from(k, cplx(m, 0.0)) - integral_from(k + 1, cplx(m, 0.0))));
  }

  std::size_t nearest_prevertex(cplx z) const {
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x_.size(); ++k) {
      double d = std::abs(z - x_[k]);
      if (d < best) {
        best = d;
        j = k;
      }
    }
    return j;
  }

  // sum_k -beta_k log(zeta - x_k) over k != skip, with zeta = x_j + t v
  cplx log_factors(std::size_t skip, cplx offset_from_xj, std::size_t j) const {
    cplx acc{};
    for (std::size_t k = 0; k < x_.size(); ++k) {
      if (k == skip) continue;
      cplx d = upper_limit(cplx((x_[j] - x_[k]) + offset_from_xj.real(), offset_from_xj.imag()));
      acc -= beta_[k] * std::log(d);
    }
    return acc;
  }

  // int_{x_j}^{z} prod_k (zeta - x_k)^(-beta_k) d zeta along the straight
  // path. Geometric panels from x_j; the first panel carries the endpoint
  // singularity through a Gauss-Jacobi weight.
  cplx integral_from(std::size_t j, cplx z) const {
    z = upper_limit(z);
    return integral_offset(j, upper_limit(cplx(z.real() - x_[j], z.imag())));
  }

  // same integral with the endpoint given as v = z - x_j
  cplx integral_offset(std::size_t j, cplx v) const {
    const double len = std::abs(v);
    if (len == 0.0) return {};
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x_.size(); ++k) {
      if (k != j) d = std::min(d, std::abs(x_[k] - x_[j]));
    }
    const double bj = beta_[j];
    const int nodes = 16;
    double t1 = std::min(1.0, 0.5 * d / len);
    // first panel: int_0^t1 (t v)^(-bj) g(x_j + t v) v dt
    const auto& gj = gauss_jacobi(nodes, 0.0, -bj);
    cplx first{};
    for (std::size_t i = 0; i < gj.size(); ++i) {
      double s = 0.5 * (1.0 + gj.nodes[i]);
      first += gj.weights[i] * std::exp(log_factors(j, t1 * s * v, j));
    }
    first *= std::pow(2.0, bj - 1.0) * std::pow(t1, 1.0 - bj);
    cplx total = std::exp((1.0 - bj) * std::log(v)) * first;
    const auto& gl = gauss_legendre(nodes);
    double ta = t1;
    while (ta < 1.0) {
      double tb = std::min(1.0, 2.0 * ta);
      double half = 0.5 * (tb - ta), mid = 0.5 * (tb + ta);
      cplx acc{};
      for (std::size_t i = 0; i < gl.size(); ++i) {
        double t = mid + half * gl.nodes[i];
        cplx off = t * v;
        cplx lf = log_factors(j, off, j) - bj * std::log(upper_limit(off));
        acc += gl.weights[i] * std::exp(lf);
      }
      total += acc * half * v;
      ta = tb;
    }
    return total;
  }

  cplx asymptotic_phi(cplx z) const {
    cplx lz = std::log(z);
    cplx s{};
    for (std::size_t m = 0; m < coef_.size(); ++m) {
      double e = 1.0 - sigma_ - static_cast<double>(m);
      if (std::abs(e) < 1e-12) {
        s += coef_[m] * lz;
      } else {
        s += coef_[m] * std::exp(e * lz) / e;
      }
    }
    return k_asym_ + c_ * s;
  }

  void finalize() {
    w_.clear();
    if (x_.empty()) {
      log_c_ = std::log(c_);
      return;
    }
    log_c_ = cplx(std::log(std::abs(c_)), std::arg(c_));
    w_.push_back(a_);
    for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
      double m = 0.5 * (x_[k] + x_[k + 1]);
      w_.push_back(w_[k] + c_ * (integral_from(k, cplx(m, 0.0)) - integral_from(k + 1, cplx(m, 0.0))));
    }
    // far-field series of prod_k (1 - x_k/z)^(-beta_k) = sum_m c_m z^-m
    const std::size_t terms = 48;
    coef_.assign(terms, 0.0);
    coef_[0] = 1.0;
    double xmax = 0.0;
    for (std::size_t k = 0; k < x_.size(); ++k) {
      xmax = std::max(xmax, std::abs(x_[k]));
      std::vector<double> fac(terms);
      fac[0] = 1.0;
      for (std::size_t i = 1; i < terms; ++i) {
        fac[i] = fac[i - 1] * (beta_[k] + static_cast<double>(i) - 1.0) / static_cast<double>(i) * x_[k];
      }
      std::vector<double> out(terms, 0.0);
      for (std::size_t a = 0; a < terms; ++a) {
        for (std::size_t b = 0; a + b < terms; ++b) out[a + b] += coef_[a] * fac[b];
      }
      coef_ = out;
    }
    r_asym_ = 4.0 * std::max(1.0, xmax);
    {
      cplx zr(0.0, r_asym_);
      std::size_t j = nearest_prevertex(zr);
      cplx exact = w_[j] + c_ * integral_from(j, zr);
      k_asym_ = 0.0;
      k_asym_ = exact - asymptotic_phi(zr);
    }
    // seed samples: a rectangular grid plus boundary points graded toward
    // every prevertex
    scale_ = std::max(1.0, x_.back() - x_.front());
    samples_.clear();
    auto add_sample = [this](cplx z) { samples_.push_back({z, phi(z), phi_prime(z)}); };
    const int nx = 33, ny = 14;
    const double xa = x_.front() - 2.0 * scale_, xb = x_.back() + 2.0 * scale_;
    for (int iy = 0; iy < ny; ++iy) {
      double y = 1e-3 * scale_ * std::pow(3e3, static_cast<double>(iy) / (ny - 1));
      for (int ix = 0; ix < nx; ++ix) add_sample(cplx(xa + (xb - xa) * ix / (nx - 1), y));
    }
    const std::size_t n = x_.size();
    for (std::size_t k = 0; k < n; ++k) {
      double left = k == 0 ? 64.0 * scale_ : 0.5 * (x_[k] - x_[k - 1]);
      double right = k + 1 == n ? 64.0 * scale_ : 0.5 * (x_[k + 1] - x_[k]);
      const double floor = 1e-13 * (1.0 + std::abs(x_[k]));
      for (double rho = left; rho >= floor; rho *= 0.5) add_sample(cplx(x_[k] - rho, 0.0));
      for (double rho = right; rho >= floor; rho *= 0.5) add_sample(cplx(x_[k] + rho, 0.0));
    }
    edge_samples_.assign(n, {});
    for (std::size_t k = 0; k < n; ++k) {
      for (int side = 0; side < 2; ++side) {
        const double dir = side == 0 ? -1.0 : 1.0;
        double top = side == 0 ? (k == 0 ? 64.0 * scale_ : 0.5 * (x_[k] - x_[k - 1]))
                               : (k + 1 == n ? 64.0 * scale_ : 0.5 * (x_[k + 1] - x_[k]));
        const bool outer = (k == 0 && side == 0) || (k + 1 == n && side == 1);
        if (outer) top = std::max(top, r_asym_ + std::abs(x_[k]));
        const double floor = 1e-13 * (1.0 + std::abs(x_[k]));
        // accumulate segment by segment from the innermost sample outwards
        std::vector<double> rhos;
        for (double rho = top; rho >= floor; rho *= 0.5) rhos.push_back(rho);
        std::vector<EdgeSample> list(rhos.size());
        cplx d = c_ * integral_offset(k, cplx(dir * rhos.back(), 0.0));
        list.back() = {rhos.back(), d};
        const auto& gl = gauss_legendre(16);
        for (std::size_t q = rhos.size() - 1; q-- > 0;) {
          const double a = rhos[q + 1], b = rhos[q], half = 0.5 * (b - a), mid = 0.5 * (a + b);
          cplx acc{};
          for (std::size_t m = 0; m < gl.size(); ++m) {
            acc += gl.weights[m] * std::exp(log_phi_prime_local(k, dir * (mid + half * gl.nodes[m])));
          }
          d += acc * (half * dir);
          list[q] = {b, d};
        }
        edge_samples_[k][side] = std::move(list);
      }
    }
    image_radius_ = 0.0;
    for (const auto& smp : samples_) {
      if (smp.z.imag() > 0.0) image_radius_ = std::max(image_radius_, std::abs(smp.w - a_));
    }
  }

  // rho > 0 with |Phi(x_i + dir rho) - w_i| = target. The graded edge samples
  // bracket rho within a factor 2; Newton then integrates Phi' only from the
  // nearest sample below, or uses the far-field series beyond the last one.
  BoundaryPoint boundary_solve(std::size_t i, double dir, double target) const {
    const auto& list = edge_samples_[i][dir > 0.0 ? 1 : 0];  // rho decreasing
    const double e = 1.0 - beta_[i];
    std::size_t idx = list.size();
    for (std::size_t k = 0; k < list.size(); ++k) {
      if (std::abs(list[k].d) < target) {
        idx = k;
        break;
      }
    }
    if (idx == list.size()) {
      // below the smallest sample: the local power law is exact to rounding
      const auto& s = list.back();
      return {i, dir * s.rho * std::pow(target / std::abs(s.d), 1.0 / e)};
    }
    const bool outer_side = (i == 0 && dir < 0.0) || (i + 1 == x_.size() && dir > 0.0);
    if (idx == 0 && !outer_side) return {i, dir * list[0].rho};
    const auto& base = list[idx];
    const double far = idx == 0 ? std::numeric_limits<double>::infinity() : list[idx - 1].rho;
    const bool outer = idx == 0;
    auto image = [&](double rho) -> cplx {
      if (outer) return asymptotic_phi(cplx(x_[i] + dir * rho, 0.0)) - w_[i];
      const auto& gl = gauss_legendre(16);
      const double half = 0.5 * (rho - base.rho), mid = 0.5 * (rho + base.rho);
      cplx acc{};
      for (std::size_t q = 0; q < gl.size(); ++q) {
        acc += gl.weights[q] * std::exp(log_phi_prime_local(i, dir * (mid + half * gl.nodes[q])));
      }
      return base.d + acc * (half * dir);
    };
    const double growth = outer ? 1.0 - sigma_ : e;
    double rho = base.rho * std::pow(target / std::abs(base.d), 1.0 / growth);
    if (!(rho > base.rho)) rho = base.rho;
    if (!(rho < far)) rho = std::sqrt(base.rho * far);
    if (outer && std::abs(cplx(x_[i] + dir * base.rho, 0.0)) < r_asym_) {
      throw MapError("boundary preimage beyond the sampled range");
    }
    double lo = base.rho, hi = far;
    for (int it = 0; it < 60; ++it) {
      double f = std::abs(image(rho)) - target;
      if (f > 0.0) hi = rho; else lo = rho;
      if (std::abs(f) <= 4e-16 * target) break;
      double dfd = std::abs(std::exp(log_phi_prime_local(i, dir * rho)));
      double next = rho - f / dfd;
      if (!(next > lo && next < hi) || !std::isfinite(next)) {
        next = std::isfinite(hi) ? 0.5 * (lo + hi) : 2.0 * rho;
      }
      if (std::abs(next - rho) <= 1e-16 * rho) {
        rho = next;
        break;
      }
      rho = next;
      if (hi - lo <= 1e-16 * hi) break;
    }
    return {i, dir * rho};
  }

  cplx seed_from_samples(cplx w) const {
    const Sample* best = &samples_.front();
    double bd = std::numeric_limits<double>::infinity();
    for (const auto& smp : samples_) {
      double d = std::norm(smp.w - w);
      if (d < bd) {
        bd = d;
        best = &smp;
      }
    }
    cplx z0 = best->z + (w - best->w) / best->dphi;
    if (!(z0.imag() > 0.0) || !std::isfinite(std::abs(z0))) {
      z0 = cplx(best->z.real(), std::max(best->z.imag(), std::sqrt(bd) / std::abs(best->dphi)));
    }
    return z0;
  }

  cplx asymptotic_seed(cplx w) const {
    double e = 1.0 - sigma_;
    return std::pow((w - k_asym_) * e / c_, 1.0 / e);
  }

  // int_{za}^{zb} prod (zeta - x_k)^(-beta_k) dzeta for a short segment far
  // from every prevertex (relative to its length)
  bool short_segment(cplx za, cplx zb) const {
    const double len = std::abs(zb - za);
    const cplx mid = 0.5 * (za + zb);
    double d = std::numeric_limits<double>::infinity();
    for (double xk : x_) d = std::min(d, std::abs(mid - xk));
    return len <= 0.2 * (d - 0.5 * len);
  }

  cplx segment_integral(cplx za, cplx zb) const {
    const auto& gl = gauss_legendre(12);
    const cplx half = 0.5 * (zb - za), mid = 0.5 * (za + zb);
    cplx acc{};
    for (std::size_t i = 0; i < gl.size(); ++i) {
      cplx zeta = mid + half * gl.nodes[i];
      cplx l{};
      for (std::size_t k = 0; k < x_.size(); ++k) l -= beta_[k] * std::log(upper_limit(zeta - x_[k]));
      acc += gl.weights[i] * std::exp(l);
    }
    return acc * half;
  }

  // damped Newton on Phi(z) = w keeping Im z > 0; residual updates use short
  // segment integrals where possible and the result is verified with a full
  // evaluation of Phi
  cplx newton(cplx w, cplx z, cplx r) const {
    const double scale = 1.0 + std::abs(w);
    auto iterate = [&](bool incremental, int max_it) {
      for (int it = 0; it < max_it; ++it) {
        if (std::abs(r) <= 1e-14 * scale) break;
        cplx dz = -r / phi_prime(z);
        double lambda = 1.0;
        bool ok = false;
        cplx zn, rn;
        while (lambda > 1e-12) {
          zn = z + lambda * dz;
          if (zn.imag() > 0.0) {
            if (incremental && short_segment(z, zn)) {
              rn = r + c_ * segment_integral(z, zn);
            } else {
              rn = phi(zn) - w;
            }
            if (std::abs(rn) < std::abs(r)) {
              ok = true;
              break;
            }
          }
          lambda *= 0.5;
        }
        if (!ok) break;
        bool tiny = std::abs(zn - z) <= 1e-16 * (1.0 + std::abs(z));
        z = zn;
        r = rn;
        if (tiny) break;
      }
    };
    iterate(true, 100);
    r = phi(z) - w;
    if (std::abs(r) > 1e-13 * scale) {
      iterate(false, 30);
    }
    if (!(std::abs(r) < 1e-10 * scale)) {
      throw MapError("Newton inversion of the conformal map did not converge");
    }
    return z;
  }

  struct Sample {
    cplx z;
    cplx w;
    cplx dphi;
  };
  struct EdgeSample {
    double rho;
    cplx d;  // Phi(x_k + dir rho) - w_k
  };

  LipschitzGraph graph_;
  std::vector<cplx> kinks_;
  std::vector<double> x_;
  std::vector<double> beta_;
  cplx c_{1.0, 0.0};
  cplx a_{};
  cplx log_c_{};
  double sigma_ = 0.0;
  double residual_ = 0.0;
  std::vector<std::string> warnings_;
  std::vector<cplx> w_;
  std::vector<double> coef_;
  double r_asym_ = std::numeric_limits<double>::infinity();
  cplx k_asym_{};
  double scale_ = 1.0;
  double image_radius_ = 0.0;
  std::vector<Sample> samples_;
  std::vector<std::array<std::vector<EdgeSample>, 2>> edge_samples_;
};

inline SchwarzChristoffelMap sc_solve(const LipschitzGraph& g, const SolverOptions& opt = {}) {
  return SchwarzChristoffelMap::solve(g, opt);
}

inline cplx phi(const SchwarzChristoffelMap& m, cplx z) { return m.phi(z); }
inline cplx phi_prime(const SchwarzChristoffelMap& m, cplx z) { return m.phi_prime(z); }
inline cplx psi(const SchwarzChristoffelMap& m, cplx w) { return m.psi(w); }
inline cplx psi_prime(const SchwarzChristoffelMap& m, cplx w) { return m.psi_prime(w); }
inline cplx phi_prime_power(const SchwarzChristoffelMap& m, cplx z, double p) {
  return m.phi_prime_power(z, p);
}

}  // namespace hardylip
