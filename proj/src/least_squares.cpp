#include "sideband/least_squares.hpp"

#include "sideband/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace sideband {

namespace {

double relative_step(const Eigen::VectorXd& step, const Eigen::VectorXd& p,
                     const Eigen::VectorXd& scale)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        double ref = std::abs(p[i]);
        if (scale.size() == p.size())
            ref = std::max(ref, std::abs(scale[i]));
        if (ref == 0.0)
            ref = 1.0;
        worst = std::max(worst, std::abs(step[i]) / ref);
    }
    return worst;
}

} // namespace

LeastSquaresResult solve_least_squares(const LeastSquaresProblem& problem, Eigen::VectorXd init,
                                       const LeastSquaresOptions& options)
{
    const Eigen::Index n = init.size();
    const Eigen::Index m = problem.n_residuals;
    if (m < n)
        throw RankDeficient("fewer residuals than parameters");

    Eigen::VectorXd p = std::move(init);
    Eigen::VectorXd r(m), r_try(m);
    Eigen::MatrixXd J(m, n);
    problem.evaluate(p, r, &J);
    double cost = r.squaredNorm();
    if (!std::isfinite(cost))
        throw NonConvergence("residuals are not finite at the initial point");

    double lambda = -1.0;
    bool converged = cost == 0.0;
    int it = 0;
    while (!converged) {
        if (it >= options.max_iterations) {
            std::ostringstream os;
            os << "no convergence after " << options.max_iterations << " iterations";
            throw NonConvergence(os.str());
        }
        ++it;
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * r;
        Eigen::VectorXd D = JtJ.diagonal();
        for (Eigen::Index i = 0; i < n; ++i)
            if (!(D[i] > 0.0))
                D[i] = 1.0;
        if (lambda < 0.0)
            lambda = 1e-3;

        bool accepted = false;
        for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
            Eigen::MatrixXd A = JtJ;
            A.diagonal() += lambda * D;
            const Eigen::VectorXd step = A.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd p_try = p + step;
            problem.evaluate(p_try, r_try, nullptr);
            const double cost_try = r_try.squaredNorm();
            const double rel = relative_step(step, p, problem.scale);
            if (std::isfinite(cost_try) && cost_try <= cost) {
                p = p_try;
                cost = cost_try;
                problem.evaluate(p, r, &J);
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (rel < options.step_tolerance || cost == 0.0)
                    converged = true;
            } else {
                // an uphill step this small means we sit at the minimum
                if (rel < options.step_tolerance) {
                    converged = true;
                    break;
                }
                lambda *= 4.0;
            }
        }
        if (!accepted && !converged)
            throw NonConvergence("damping grew without finding a downhill step");
    }

    LeastSquaresResult res;
    res.params = p;
    res.residual_norm = std::sqrt(cost);
    res.iterations = it;
    // column scaling keeps the rank test meaningful for mixed-unit parameters
    Eigen::VectorXd col = J.colwise().norm().transpose();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(col[i] > 0.0))
            throw RankDeficient("a parameter does not influence the residuals");
    const Eigen::MatrixXd Js = J * col.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Js);
    qr.setThreshold(1e-12);
    if (qr.rank() < n)
        throw RankDeficient("Jacobian is rank deficient at the solution");
    const Eigen::MatrixXd inv = (Js.transpose() * Js).inverse();
    const double dof = static_cast<double>(m - n);
    const double s2 = dof > 0.0 ? cost / dof : 0.0;
    res.covariance = s2 * col.cwiseInverse().asDiagonal() * inv * col.cwiseInverse().asDiagonal();
    return res;
}

} // namespace sideband
