#include "air/optim.hpp"

#include <cmath>

#include <Eigen/Cholesky>

namespace air {

namespace {

Eigen::VectorXd apply_step(const Retraction& retract, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& step) {
  return retract ? retract(x, step) : Eigen::VectorXd(x + step);
}

}  // namespace

Eigen::MatrixXd numeric_jacobian(const ResidualFunction& residual, const Eigen::VectorXd& params,
                                 int step_dimension, const Eigen::VectorXd& step_sizes,
                                 const Retraction& retract) {
  Eigen::VectorXd r0;
  residual(params, r0, nullptr);
  Eigen::MatrixXd jac(r0.size(), step_dimension);
  Eigen::VectorXd rp;
  Eigen::VectorXd rm;
  for (int k = 0; k < step_dimension; ++k) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(step_dimension);
    d[k] = step_sizes[k];
    residual(apply_step(retract, params, d), rp, nullptr);
    residual(apply_step(retract, params, -d), rm, nullptr);
    jac.col(k) = (rp - rm) / (2.0 * step_sizes[k]);
  }
  return jac;
}

LmResult levenberg_marquardt(const ResidualFunction& residual, Eigen::VectorXd initial,
                             int step_dimension, const LmOptions& options,
                             const Retraction& retract) {
  LmResult result;
  result.params = std::move(initial);
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  residual(result.params, r, &jac);
  result.cost = r.squaredNorm();
  result.initial_cost = result.cost;
  double lambda = options.initial_damping;
  bool need_jacobian = false;

  for (int it = 0; it < options.max_iterations; ++it) {
    result.iterations = it + 1;
    if (result.cost == 0.0) {
      result.converged = true;
      return result;
    }
    if (need_jacobian) {
      residual(result.params, r, &jac);
      need_jacobian = false;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * r;
    Eigen::MatrixXd damped = jtj;
    for (int k = 0; k < step_dimension; ++k) {
      damped(k, k) += lambda * std::max(jtj(k, k), 1e-300);
    }
    const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
    const double step_norm = step.norm();
    if (!std::isfinite(step_norm)) break;

    const Eigen::VectorXd candidate = apply_step(retract, result.params, step);
    Eigen::VectorXd rc;
    residual(candidate, rc, nullptr);
    const double cost = rc.squaredNorm();

    const bool small_step =
        step_norm < options.step_tolerance * (result.params.norm() + options.step_tolerance);
    if (std::isfinite(cost) && cost < result.cost) {
      const double rel = (result.cost - cost) / result.cost;
      result.params = candidate;
      result.cost = cost;
      r = rc;
      need_jacobian = true;
      lambda = std::max(lambda * 0.1, 1e-15);
      if (small_step || rel < options.cost_tolerance) {
        result.converged = true;
        return result;
      }
    } else {
      if (small_step) {
        result.converged = true;
        return result;
      }
      lambda *= 10.0;
      if (lambda > 1e16) {
        // No descent direction left at working precision.
        result.converged = true;
        return result;
      }
    }
  }
  return result;
}

}  // namespace air
