#pragma once

// Estimating decline parameters from observed rates.
//
// Exponential and harmonic declines are fitted by straight lines in a
// linearising space (log10 q and 1/q against time). The hyperbolic decline has
// no such transform and is fitted by bounded nonlinear least squares on the
// rates themselves. Every fit measures time from the first record it is given,
// so qi is the model rate at the start of the fitting window.

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dca/arps.hpp"
#include "dca/error.hpp"
#include "dca/history.hpp"
#include "dca/levenberg_marquardt.hpp"
#include "dca/regression.hpp"

namespace dca {

struct Goodness {
    /// Absent when the observed rates have zero variance.
    std::optional<double> r_squared;
    double rmse = 0.0; ///< mmscf/day
};

struct FitResult {
    DeclineParameters params;
    /// Straight line in the linearising space: log10(q) for exponential fits,
    /// 1/q for harmonic fits. Absent for hyperbolic fits.
    std::optional<LinearFit> transformed;
    std::optional<double> r_squared;
    double rmse = 0.0;
    std::size_t n_points = 0;
    TimeWindow window;
    std::vector<double> residuals; ///< observed minus model, per record
    int iterations = 0;            ///< optimiser iterations (hyperbolic only)
};

class FitError : public Error {
public:
    enum class Reason {
        TooFewRecords,
        ZeroTimeVariance,
        NoDecline,
        InvalidCoefficients,
        NotConverged,
    };

    FitError(Reason reason, const std::string& what, std::optional<FitResult> best = std::nullopt)
        : Error(what), reason_(reason), best_(std::move(best)) {}

    Reason reason() const noexcept { return reason_; }
    /// Best parameters reached before the optimiser gave up, if any.
    const std::optional<FitResult>& best_so_far() const noexcept { return best_; }

private:
    Reason reason_;
    std::optional<FitResult> best_;
};

inline Goodness goodness_of_fit(std::span<const double> observed, std::span<const double> predicted) {
    if (observed.size() != predicted.size() || observed.empty())
        throw InvalidArgument("goodness of fit needs equal, non-empty series");
    const auto n = static_cast<double>(observed.size());
    double mean = 0.0;
    for (double v : observed) mean += v;
    mean /= n;

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = observed[i] - predicted[i];
        ss_res += e * e;
        ss_tot += (observed[i] - mean) * (observed[i] - mean);
    }
    Goodness g;
    g.rmse = std::sqrt(ss_res / n);
    if (ss_tot > 0.0) g.r_squared = 1.0 - ss_res / ss_tot;
    return g;
}

/// Model rates at each record, with the decline starting at the first record.
inline std::vector<double> predicted_rates(const ProductionHistory& history,
                                           const DeclineParameters& params) {
    std::vector<double> out;
    out.reserve(history.size());
    const double t0 = history.front().t;
    for (const auto& r : history.records()) out.push_back(rate_at(params, r.t - t0));
    return out;
}

/// R^2 and RMSE of `params` against `history`, measured in rate space.
inline Goodness goodness(const ProductionHistory& history, const DeclineParameters& params) {
    const auto observed = history.rates();
    const auto predicted = predicted_rates(history, params);
    return goodness_of_fit(observed, predicted);
}

namespace detail {

inline void require_records(const ProductionHistory& history, std::size_t minimum) {
    if (history.size() < minimum)
        throw FitError(FitError::Reason::TooFewRecords,
                       "fit needs at least " + std::to_string(minimum) + " records, got " +
                           std::to_string(history.size()));
}

inline std::vector<double> elapsed_times(const ProductionHistory& history) {
    std::vector<double> tau = history.times();
    const double t0 = tau.front();
    for (double& t : tau) t -= t0;
    return tau;
}

inline LinearFit regress(std::span<const double> x, std::span<const double> y) {
    try {
        return ordinary_least_squares(x, y);
    } catch (const InvalidArgument& e) {
        throw FitError(FitError::Reason::ZeroTimeVariance, e.what());
    }
}

inline FitResult finish(const ProductionHistory& history, DeclineParameters params,
                        std::optional<LinearFit> transformed) {
    FitResult fit;
    fit.params = params;
    fit.transformed = transformed;
    fit.n_points = history.size();
    fit.window = history.span();
    const auto predicted = predicted_rates(history, params);
    const auto observed = history.rates();
    fit.residuals.resize(observed.size());
    for (std::size_t i = 0; i < observed.size(); ++i) fit.residuals[i] = observed[i] - predicted[i];
    const Goodness g = goodness_of_fit(observed, predicted);
    fit.r_squared = g.r_squared;
    fit.rmse = g.rmse;
    return fit;
}

} // namespace detail

/// Straight line through log10(q) against time.
inline FitResult fit_exponential(const ProductionHistory& history) {
    detail::require_records(history, 3);
    const auto tau = detail::elapsed_times(history);
    std::vector<double> log_rate;
    log_rate.reserve(history.size());
    for (const auto& r : history.records()) log_rate.push_back(std::log(r.rate));

    const LinearFit natural = detail::regress(tau, log_rate);
    if (!(natural.slope < 0.0))
        throw FitError(FitError::Reason::NoDecline, "no decline detected");

    const LinearFit base10{natural.intercept / std::numbers::ln10, natural.slope / std::numbers::ln10};
    const auto params = DeclineParameters::exponential(std::exp(natural.intercept), -natural.slope);
    return detail::finish(history, params, base10);
}

/// Straight line through 1/q against time.
inline FitResult fit_harmonic(const ProductionHistory& history) {
    detail::require_records(history, 3);
    const auto tau = detail::elapsed_times(history);
    std::vector<double> reciprocal;
    reciprocal.reserve(history.size());
    for (const auto& r : history.records()) reciprocal.push_back(1.0 / r.rate);

    const LinearFit line = detail::regress(tau, reciprocal);
    if (!(line.slope > 0.0)) throw FitError(FitError::Reason::NoDecline, "no decline detected");
    if (!(line.intercept > 0.0))
        throw FitError(FitError::Reason::InvalidCoefficients,
                       "reciprocal-rate intercept is not positive");
    return detail::finish(history, harmonic_from_reciprocal(line.intercept, line.slope), line);
}

struct HyperbolicFitSettings {
    double b_start = 0.5;
    double b_min = 1e-9;
    double b_max = 1.0 - 1e-9;
    LevenbergMarquardtSettings solver{};
};

namespace detail {

/// [log1p(x) - x/(1+x)] / x^2, the b-sensitivity kernel of the hyperbolic rate.
inline double hyperbolic_b_kernel(double x) {
    if (std::abs(x) < 1e-3) {
        // sum over n >= 2 of (-1)^n (n-1)/n x^(n-2)
        double sum = 0.0, power = 1.0;
        for (int n = 2; n <= 9; ++n) {
            sum += ((n % 2 == 0) ? 1.0 : -1.0) * (n - 1.0) / n * power;
            power *= x;
        }
        return sum;
    }
    return (std::log1p(x) - x / (1.0 + x)) / (x * x);
}

} // namespace detail

/// Unweighted least squares on rates over (qi, Di, b), starting from the
/// exponential fit with b = b_start.
inline FitResult fit_hyperbolic(const ProductionHistory& history,
                                const HyperbolicFitSettings& settings = {}) {
    detail::require_records(history, 4);
    FitResult seed;
    try {
        seed = fit_exponential(history);
    } catch (const FitError& e) {
        throw FitError(e.reason(), std::string("hyperbolic initialisation failed: ") + e.what());
    }

    const auto tau = detail::elapsed_times(history);
    const auto observed = history.rates();
    const auto n = static_cast<Eigen::Index>(tau.size());

    auto model = [&](const ParameterVector<3>& p, Eigen::VectorXd& r, JacobianMatrix<3>& J) {
        const double qi = p[0], di = p[1], b = p[2];
        r.resize(n);
        J.resize(n, 3);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double t = tau[static_cast<std::size_t>(i)];
            const double x = b * di * t;
            const double q = qi * std::exp(-std::log1p(x) / b);
            r[i] = q - observed[static_cast<std::size_t>(i)];
            J(i, 0) = q / qi;
            J(i, 1) = -q * t / (1.0 + x);
            J(i, 2) = q * (di * t) * (di * t) * detail::hyperbolic_b_kernel(x);
        }
    };

    constexpr double tiny = std::numeric_limits<double>::min();
    constexpr double inf = std::numeric_limits<double>::infinity();
    BoxBounds<3> bounds{{tiny, tiny, settings.b_min}, {inf, inf, settings.b_max}};
    const ParameterVector<3> start{seed.params.qi, seed.params.di, settings.b_start};

    const auto solution = levenberg_marquardt<3>(model, start, bounds, settings.solver);
    const auto& p = solution.params;

    if (!solution.converged) {
        std::optional<FitResult> best;
        if (p.allFinite() && p[0] > 0.0 && p[1] > 0.0) {
            best = detail::finish(history, DeclineParameters::hyperbolic(p[0], p[1], p[2]), std::nullopt);
            best->iterations = solution.iterations;
        }
        throw FitError(FitError::Reason::NotConverged,
                       "hyperbolic fit did not converge within " +
                           std::to_string(settings.solver.max_iterations) + " iterations",
                       std::move(best));
    }

    auto fit = detail::finish(history, DeclineParameters::hyperbolic(p[0], p[1], p[2]), std::nullopt);
    fit.iterations = solution.iterations;
    return fit;
}

struct FitOutcome {
    DeclineKind kind = DeclineKind::Exponential;
    std::optional<FitResult> fit;
    std::string diagnostic; ///< failure text when `fit` is absent
};

inline FitResult fit(DeclineKind kind, const ProductionHistory& history);

/// Fits each kind independently; failures are captured, not thrown.
inline std::vector<FitOutcome> fit_models(const ProductionHistory& history,
                                          std::span<const DeclineKind> kinds) {
    std::vector<FitOutcome> out;
    for (DeclineKind kind : kinds) {
        FitOutcome o{kind, std::nullopt, {}};
        try {
            o.fit = fit(kind, history);
        } catch (const FitError& e) {
            o.diagnostic = e.what();
        }
        out.push_back(std::move(o));
    }
    return out;
}

inline FitResult fit(DeclineKind kind, const ProductionHistory& history) {
    switch (kind) {
    case DeclineKind::Exponential: return fit_exponential(history);
    case DeclineKind::Harmonic: return fit_harmonic(history);
    case DeclineKind::Hyperbolic: return fit_hyperbolic(history);
    }
    throw InvalidArgument("unknown decline kind");
}

} // namespace dca
