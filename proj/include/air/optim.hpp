#pragma once

#include <functional>

#include <Eigen/Core>

namespace air {

struct LmOptions {
  int max_iterations = 100;
  double step_tolerance = 1e-10;       // relative to the parameter norm
  double cost_tolerance = 1e-12;       // relative cost decrease
  double initial_damping = 1e-3;
};

struct LmResult {
  Eigen::VectorXd params;
  double initial_cost = 0.0;  // sum of squared residuals
  double cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Fills `residuals` at `params`; when `jacobian` is non-null also fills the
/// derivative of the residuals with respect to the local step passed to the
/// retraction (for plain vector spaces, with respect to the parameters).
using ResidualFunction =
    std::function<void(const Eigen::VectorXd& params, Eigen::VectorXd& residuals,
                       Eigen::MatrixXd* jacobian)>;

/// Applies a local step to the parameters. Defaults to vector addition.
using Retraction =
    std::function<Eigen::VectorXd(const Eigen::VectorXd& params, const Eigen::VectorXd& step)>;

/// Levenberg-Marquardt with Marquardt's diagonal scaling. Returns the best
/// iterate; `converged` is false when the iteration cap was reached first.
LmResult levenberg_marquardt(const ResidualFunction& residual, Eigen::VectorXd initial,
                             int step_dimension, const LmOptions& options = {},
                             const Retraction& retract = {});

/// Central-difference Jacobian of `residual` with respect to local steps.
Eigen::MatrixXd numeric_jacobian(const ResidualFunction& residual, const Eigen::VectorXd& params,
                                 int step_dimension, const Eigen::VectorXd& step_sizes,
                                 const Retraction& retract = {});

}  // namespace air
