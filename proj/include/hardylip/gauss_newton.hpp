#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace hardylip {

struct GaussNewtonResult {
  Eigen::VectorXd x;
  Eigen::VectorXd residual;
  int iterations = 0;
  bool converged = false;
};

/// Damped Gauss-Newton for min ||r(x)||^2 with a central-difference
/// Jacobian and step halving. Converges when max |r_i| <= tol.
class GaussNewton {
 public:
  using Residual = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  GaussNewton(double tol, int max_iter, double fd_step = 1e-7)
      : tol_(tol), max_iter_(max_iter), fd_step_(fd_step) {}

  GaussNewtonResult solve(const Residual& r, Eigen::VectorXd x) const {
    GaussNewtonResult out;
    Eigen::VectorXd res = r(x);
    int it = 0;
    for (; it < max_iter_; ++it) {
      if (res.lpNorm<Eigen::Infinity>() <= tol_) break;
      Eigen::MatrixXd jac(res.size(), x.size());
      for (int j = 0; j < x.size(); ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp(j) += fd_step_;
        xm(j) -= fd_step_;
        jac.col(j) = (r(xp) - r(xm)) / (2.0 * fd_step_);
      }
      Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-res);
      double lambda = 1.0;
      const double base = res.squaredNorm();
      bool accepted = false;
      while (lambda > 1e-8) {
        Eigen::VectorXd xn = x + lambda * step;
        Eigen::VectorXd rn = r(xn);
        if (rn.allFinite() && rn.squaredNorm() < base) {
          x = xn;
          res = rn;
          accepted = true;
          break;
        }
        lambda *= 0.5;
      }
      if (!accepted) break;
    }
    out.x = x;
    out.residual = res;
    out.iterations = it;
    out.converged = res.lpNorm<Eigen::Infinity>() <= tol_;
    return out;
  }

 private:
  double tol_;
  int max_iter_;
  double fd_step_;
};

}  // namespace hardylip
