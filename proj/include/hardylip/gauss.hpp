#pragma once

// Gauss-Legendre and Gauss-Jacobi rules on [-1, 1].
//
// Legendre nodes come from Newton iteration on the three-term recurrence;
// Jacobi rules use the Golub-Welsch eigenvalue method on the symmetric
// Jacobi matrix. Rules are cached per (n, alpha, beta) and the cache is
// guarded so rules may be requested from several threads.

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hardylip/types.hpp"

namespace hardylip {

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

namespace detail {

inline GaussRule compute_legendre(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // final derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

inline GaussRule compute_jacobi(int n, double alpha, double beta) {
  // weight (1 - x)^alpha (1 + x)^beta
  Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    double denom = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
    double diag = (std::abs(denom) < 1e-300) ? (beta - alpha) / (ab + 2.0)
                                             : (beta * beta - alpha * alpha) / denom;
    jm(k, k) = diag;
    if (k + 1 < n) {
      double j = k + 1.0;
      double num = 4.0 * j * (j + alpha) * (j + beta) * (j + ab);
      double den = (2.0 * j + ab) * (2.0 * j + ab) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0);
      double off = std::sqrt(num / den);
      jm(k, k + 1) = off;
      jm(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jm);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    rule.nodes[k] = es.eigenvalues()(k);
    double v0 = es.eigenvectors()(0, k);
    rule.weights[k] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1].
inline const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, detail::compute_legendre(n)).first;
  return it->second;
}

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1.
inline const GaussRule& gauss_jacobi(int n, double alpha, double beta) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(n, alpha, beta);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, detail::compute_jacobi(n, alpha, beta)).first;
  return it->second;
}

}  // namespace hardylip
