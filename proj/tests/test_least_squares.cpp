#include "sideband/errors.hpp"
#include "sideband/least_squares.hpp"

#include <doctest.h>

#include <cmath>

using namespace sideband;

TEST_CASE("exponential decay is recovered exactly")
{
    // y = a exp(-b x)
    const int m = 30;
    Eigen::VectorXd x(m), y(m);
    for (int i = 0; i < m; ++i) {
        x[i] = 0.1 * i;
        y[i] = 3.0 * std::exp(-1.7 * x[i]);
    }
    LeastSquaresProblem prob;
    prob.n_residuals = m;
    prob.evaluate = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        for (int i = 0; i < m; ++i) {
            const double e = std::exp(-p[1] * x[i]);
            r[i] = p[0] * e - y[i];
            if (J) {
                (*J)(i, 0) = e;
                (*J)(i, 1) = -p[0] * x[i] * e;
            }
        }
    };
    const auto res = solve_least_squares(prob, Eigen::Vector2d(1.0, 0.5));
    CHECK(res.params[0] == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(res.params[1] == doctest::Approx(1.7).epsilon(1e-9));
    CHECK(res.residual_norm < 1e-9);
}

TEST_CASE("linear model covariance matches the normal equations")
{
    const int m = 8;
    Eigen::VectorXd x(m), y(m);
    const double noise[m] = {0.1, -0.2, 0.05, 0.3, -0.1, 0.0, -0.25, 0.15};
    for (int i = 0; i < m; ++i) {
        x[i] = i;
        y[i] = 2.0 + 0.5 * i + noise[i];
    }
    LeastSquaresProblem prob;
    prob.n_residuals = m;
    prob.evaluate = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        r = (p[0] + p[1] * x.array()).matrix() - y;
        if (J) {
            J->col(0).setOnes();
            J->col(1) = x;
        }
    };
    const auto res = solve_least_squares(prob, Eigen::Vector2d::Zero());

    Eigen::MatrixXd A(m, 2);
    A.col(0).setOnes();
    A.col(1) = x;
    const Eigen::Vector2d beta = (A.transpose() * A).ldlt().solve(A.transpose() * y);
    const double s2 = (A * beta - y).squaredNorm() / (m - 2);
    const Eigen::Matrix2d cov = s2 * (A.transpose() * A).inverse();
    CHECK(res.params[0] == doctest::Approx(beta[0]).epsilon(1e-10));
    CHECK(res.params[1] == doctest::Approx(beta[1]).epsilon(1e-10));
    CHECK(res.covariance(0, 0) == doctest::Approx(cov(0, 0)).epsilon(1e-8));
    CHECK(res.covariance(1, 1) == doctest::Approx(cov(1, 1)).epsilon(1e-8));
    CHECK(res.covariance(0, 1) == doctest::Approx(cov(0, 1)).epsilon(1e-8));
}

TEST_CASE("failure modes")
{
    LeastSquaresProblem prob;
    prob.n_residuals = 1;
    prob.evaluate = [](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        r[0] = p[0] + p[1] - 1.0;
        if (J)
            *J << 1.0, 1.0;
    };
    CHECK_THROWS_AS(solve_least_squares(prob, Eigen::Vector2d::Zero()), RankDeficient);

    prob.n_residuals = 2;
    prob.evaluate = [](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        r[0] = r[1] = p[0] + p[1] - 1.0 + 0.1;
        if (J)
            *J << 1.0, 1.0, 1.0, 1.0;
    };
    CHECK_THROWS_AS(solve_least_squares(prob, Eigen::Vector2d::Zero()), RankDeficient);

    // residual with no minimum at finite p
    prob.n_residuals = 1;
    prob.evaluate = [](const Eigen::VectorXd& p, Eigen::VectorXd& r, Eigen::MatrixXd* J) {
        r[0] = std::exp(-p[0]);
        if (J)
            (*J)(0, 0) = -std::exp(-p[0]);
    };
    LeastSquaresOptions opt;
    opt.max_iterations = 20;
    opt.step_tolerance = 1e-300;
    CHECK_THROWS_AS(solve_least_squares(prob, Eigen::VectorXd::Zero(1), opt), NonConvergence);
}
