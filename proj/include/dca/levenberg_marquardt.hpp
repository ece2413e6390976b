#pragma once

// Small dense Levenberg-Marquardt with box constraints.
//
// Trial points are projected onto the bounds before evaluation, so every
// evaluated parameter vector is feasible. Damping uses Marquardt's diagonal
// scaling, which keeps the iteration insensitive to the very different
// magnitudes of rates, decline constants and exponents.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace dca {

template <int N>
using ParameterVector = Eigen::Matrix<double, N, 1>;

template <int N>
using JacobianMatrix = Eigen::Matrix<double, Eigen::Dynamic, N>;

template <int N>
struct BoxBounds {
    ParameterVector<N> lower;
    ParameterVector<N> upper;

    ParameterVector<N> project(const ParameterVector<N>& p) const {
        return p.cwiseMax(lower).cwiseMin(upper);
    }
};

struct LevenbergMarquardtSettings {
    int max_iterations = 200;
    /// Converged once both the relative step and the relative cost decrease
    /// fall below this.
    double tolerance = 1e-10;
    double initial_damping = 1e-3;
};

template <int N>
struct LevenbergMarquardtResult {
    ParameterVector<N> params;
    double cost = 0.0; ///< sum of squared residuals at `params`
    int iterations = 0;
    bool converged = false;
};

/// Minimises |r(p)|^2 over the box. `model(p, r, J)` fills the residual vector
/// and its Jacobian at p.
template <int N, class Model>
LevenbergMarquardtResult<N> levenberg_marquardt(Model&& model, const ParameterVector<N>& start,
                                                const BoxBounds<N>& bounds,
                                                const LevenbergMarquardtSettings& settings = {}) {
    using Vector = ParameterVector<N>;
    using Normal = Eigen::Matrix<double, N, N>;

    Eigen::VectorXd r;
    JacobianMatrix<N> J;

    LevenbergMarquardtResult<N> result;
    result.params = bounds.project(start);
    model(result.params, r, J);
    result.cost = r.squaredNorm();

    // Exact fits stop here; no relative criterion is meaningful at zero cost.
    const double cost_floor = std::numeric_limits<double>::min();
    if (result.cost <= cost_floor) {
        result.converged = true;
        return result;
    }

    Normal JtJ = J.transpose() * J;
    Vector gradient = J.transpose() * r;
    double damping = settings.initial_damping;

    auto relative_step = [](const Vector& step, const Vector& p) {
        double worst = 0.0;
        for (int i = 0; i < N; ++i) {
            const double scale = std::max(std::abs(p[i]), std::numeric_limits<double>::min());
            worst = std::max(worst, std::abs(step[i]) / scale);
        }
        return worst;
    };

    Eigen::VectorXd trial_r;
    JacobianMatrix<N> trial_J;
    while (result.iterations < settings.max_iterations) {
        ++result.iterations;

        Normal A = JtJ;
        Vector rhs = -gradient;
        for (int i = 0; i < N; ++i)
            A(i, i) += damping * std::max(JtJ(i, i), std::numeric_limits<double>::epsilon());
        // Parameters resting on a bound with the descent direction pointing
        // outward are held fixed for this step.
        for (int i = 0; i < N; ++i) {
            const bool pinned_low = result.params[i] <= bounds.lower[i] && gradient[i] > 0.0;
            const bool pinned_high = result.params[i] >= bounds.upper[i] && gradient[i] < 0.0;
            if (!pinned_low && !pinned_high) continue;
            A.row(i).setZero();
            A.col(i).setZero();
            A(i, i) = 1.0;
            rhs[i] = 0.0;
        }
        const Vector raw_step = A.ldlt().solve(rhs);
        const Vector trial = bounds.project(result.params + raw_step);
        const Vector step = trial - result.params;
        const double rel_step = relative_step(step, result.params);

        if (!step.allFinite() || rel_step == 0.0) {
            // Pinned against the bounds with nowhere left to go.
            result.converged = step.allFinite();
            return result;
        }

        model(trial, trial_r, trial_J);
        const double trial_cost = trial_r.squaredNorm();

        if (std::isfinite(trial_cost) && trial_cost < result.cost) {
            const double rel_decrease = (result.cost - trial_cost) / result.cost;
            result.params = trial;
            result.cost = trial_cost;
            r.swap(trial_r);
            J.swap(trial_J);
            JtJ = J.transpose() * J;
            gradient = J.transpose() * r;
            damping = std::max(damping / 10.0, 1e-12);

            if (result.cost <= cost_floor ||
                (rel_step < settings.tolerance && rel_decrease < settings.tolerance)) {
                result.converged = true;
                return result;
            }
        } else {
            // A rejected step this small means the cost is flat to rounding.
            if (rel_step < settings.tolerance) {
                result.converged = true;
                return result;
            }
            damping *= 10.0;
            if (damping > 1e32) return result;
        }
    }
    return result;
}

} // namespace dca
