#pragma once

#include <Eigen/Dense>

#include <functional>

namespace sideband {

// Residuals r(p) and, when J is non-null, the Jacobian dr/dp.
using ResidualFn = std::function<void(const Eigen::VectorXd& p, Eigen::VectorXd& r,
                                      Eigen::MatrixXd* J)>;

struct LeastSquaresProblem {
    Eigen::Index n_residuals = 0;
    ResidualFn evaluate;
    // Typical magnitude of each parameter; the step test is relative to
    // max(|p_i|, scale_i).
    Eigen::VectorXd scale;
};

struct LeastSquaresOptions {
    int max_iterations = 200;
    double step_tolerance = 1e-10;
};

struct LeastSquaresResult {
    Eigen::VectorXd params;
    Eigen::MatrixXd covariance; // s^2 (J^T J)^-1, s^2 = SSR / (m - n)
    double residual_norm = 0.0;
    int iterations = 0;
};

// Levenberg-Marquardt with Marquardt diagonal scaling. Throws NonConvergence
// after max_iterations and RankDeficient when J^T J is singular at the optimum.
LeastSquaresResult solve_least_squares(const LeastSquaresProblem& problem, Eigen::VectorXd init,
                                       const LeastSquaresOptions& options = {});

} // namespace sideband
