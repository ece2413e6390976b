#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dca/arps.hpp"
#include "dca/error.hpp"
#include "dca/fitting.hpp"
#include "dca/history.hpp"

namespace dca {

inline constexpr double kDefaultAbandonmentRate = 0.03; // mmscf/day
inline constexpr double kDefaultForecastStep = 1.0;     // days

struct ForecastSpec {
    double q_start = 0.0; ///< current rate, mmscf/day
    double q_ab = kDefaultAbandonmentRate;
    double step = kDefaultForecastStep;

    void validate() const {
        if (!(std::isfinite(q_ab) && q_ab > 0.0))
            throw InvalidArgument("abandonment rate must be positive and finite");
        if (!(std::isfinite(q_start) && q_start > q_ab))
            throw InvalidArgument("current rate must exceed the abandonment rate");
        if (!(std::isfinite(step) && step > 0.0))
            throw InvalidArgument("forecast step must be positive and finite");
    }

    RateInterval interval() const { return {q_start, q_ab}; }
};

struct RatePoint {
    double t = 0.0;
    double rate = 0.0;
};

struct Forecast {
    DeclineParameters params; ///< re-anchored at the current rate
    std::vector<RatePoint> points;
    double delta_t = 0.0;     ///< days to abandonment
    double qf = 0.0;          ///< remaining recoverable volume, mmscf
    std::optional<double> eur;
};

/// Estimated ultimate recovery: produced to date plus remaining.
inline double eur(double np, double qf) {
    if (!(std::isfinite(np) && np >= 0.0)) throw InvalidArgument("Np must be non-negative");
    if (!(std::isfinite(qf) && qf >= 0.0)) throw InvalidArgument("Qf must be non-negative");
    return np + qf;
}

/// One minus the relative error of a predicted producing life.
inline double life_accuracy(double predicted_days, double actual_days) {
    if (!(std::isfinite(actual_days) && actual_days > 0.0))
        throw InvalidArgument("actual producing life must be positive");
    if (!(std::isfinite(predicted_days) && predicted_days >= 0.0))
        throw InvalidArgument("predicted producing life must be non-negative");
    return 1.0 - std::abs(predicted_days - actual_days) / actual_days;
}

inline constexpr std::size_t kMaxForecastPoints = 50'000'000;

/// Rate series from the current rate down to abandonment, sampled every
/// `spec.step` days and closed by an exact point at (delta_t, q_ab).
inline Forecast forecast(const DeclineParameters& params, const ForecastSpec& spec,
                         std::optional<double> np = std::nullopt) {
    spec.validate();
    Forecast out;
    out.params = params.reanchored(spec.q_start);
    out.delta_t = time_between_rates(out.params, spec.interval());
    out.qf = cumulative_between(out.params, spec.interval());
    if (np) out.eur = eur(*np, out.qf);

    if (out.delta_t / spec.step > static_cast<double>(kMaxForecastPoints))
        throw InvalidArgument("forecast would exceed " + std::to_string(kMaxForecastPoints) +
                              " samples; use a larger step");

    out.points.push_back({0.0, spec.q_start});
    for (std::size_t k = 1;; ++k) {
        const double t = static_cast<double>(k) * spec.step;
        if (t >= out.delta_t) break;
        const double q = rate_at(out.params, t);
        if (q <= spec.q_ab) break;
        out.points.push_back({t, q});
    }
    out.points.push_back({out.delta_t, spec.q_ab});
    return out;
}

/// One row of the model comparison.
struct ModelEntry {
    DeclineKind kind = DeclineKind::Exponential;
    std::optional<DeclineParameters> params; ///< fitted or supplied, before re-anchoring
    std::optional<FitResult> fit;            ///< absent when parameters were supplied directly
    std::optional<Forecast> projection;      ///< absent when the fit failed
    std::string diagnostic;                  ///< failure text; empty on success
    std::optional<double> life_accuracy;

    bool ok() const noexcept { return projection.has_value(); }
};

struct AnalysisReport {
    std::string well_id;
    std::optional<double> np;
    double q_ab = kDefaultAbandonmentRate;
    std::vector<ModelEntry> entries;
    DeclineKind selected_model = DeclineKind::Exponential;
    std::string selection_reason;
    std::optional<double> actual_life_days;

    const ModelEntry* entry(DeclineKind kind) const {
        for (const auto& e : entries)
            if (e.kind == kind) return &e;
        return nullptr;
    }
};

/// Requested kinds in canonical order, each at most once.
inline std::vector<DeclineKind> canonical_models(std::span<const DeclineKind> requested) {
    std::vector<DeclineKind> out;
    for (DeclineKind k : kAllDeclineKinds)
        if (std::find(requested.begin(), requested.end(), k) != requested.end()) out.push_back(k);
    return out;
}

namespace detail {

inline int model_preference(DeclineKind kind) {
    switch (kind) {
    case DeclineKind::Exponential: return 0;
    case DeclineKind::Hyperbolic: return 1;
    case DeclineKind::Harmonic: return 2;
    }
    return 3;
}

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// RMSE values this close are treated as equal.
inline constexpr double kRmseTieTolerance = 1e-9;

/// True when `a` should be preferred over `b`; both must have fits.
inline bool better_fit(const ModelEntry& a, const ModelEntry& b) {
    const double ra = a.fit->rmse, rb = b.fit->rmse;
    if (std::abs(ra - rb) > kRmseTieTolerance * std::max(ra, rb)) return ra < rb;
    const double qa = a.fit->r_squared.value_or(-std::numeric_limits<double>::infinity());
    const double qb = b.fit->r_squared.value_or(-std::numeric_limits<double>::infinity());
    if (qa != qb) return qa > qb;
    return model_preference(a.kind) < model_preference(b.kind);
}

} // namespace detail

/// Picks the selected model: lowest in-sample RMSE, then higher R^2, then the
/// fixed preference exponential, hyperbolic, harmonic. Entries without fit
/// diagnostics fall back to the preference order alone.
inline void select_model(AnalysisReport& report) {
    const ModelEntry* best = nullptr;
    bool by_fit = true;
    for (const auto& e : report.entries) {
        if (!e.ok()) continue;
        if (!e.fit) by_fit = false;
    }
    for (const auto& e : report.entries) {
        if (!e.ok()) continue;
        if (!best) {
            best = &e;
            continue;
        }
        const bool better = by_fit ? detail::better_fit(e, *best)
                                   : detail::model_preference(e.kind) < detail::model_preference(best->kind);
        if (better) best = &e;
    }
    if (!best) throw Error("no decline model could be fitted");

    report.selected_model = best->kind;
    std::size_t ok_count = 0;
    for (const auto& e : report.entries) ok_count += e.ok() ? 1 : 0;
    if (ok_count == 1) {
        report.selection_reason = "only successful model";
    } else if (by_fit) {
        report.selection_reason = "lowest in-sample RMSE (" + detail::format_number(best->fit->rmse) +
                                  " mmscf/d)";
    } else {
        report.selection_reason = "no fit diagnostics; fixed model preference order";
    }
}

/// Forecast for parameters supplied directly rather than fitted.
inline ModelEntry evaluate_parameters(const DeclineParameters& params, const ForecastSpec& spec,
                                      std::optional<double> np) {
    ModelEntry e;
    e.kind = params.kind;
    e.params = params;
    e.projection = forecast(params, spec, np);
    return e;
}

/// Side-by-side forecasts for already known parameter sets.
inline AnalysisReport tabulate(std::span<const DeclineParameters> models, const ForecastSpec& spec,
                               std::optional<double> np) {
    spec.validate();
    AnalysisReport report;
    report.np = np;
    report.q_ab = spec.q_ab;
    for (const auto& p : models) report.entries.push_back(evaluate_parameters(p, spec, np));
    select_model(report);
    return report;
}

/// Fits and forecasts each requested model. Individual fit failures are
/// recorded in their entry; the call throws only if every model fails.
inline AnalysisReport compare_models(const ProductionHistory& history, const ForecastSpec& spec,
                                     std::span<const DeclineKind> models) {
    spec.validate();
    const auto kinds = canonical_models(models);
    if (kinds.empty()) throw InvalidArgument("no decline models requested");

    AnalysisReport report;
    report.np = history.np();
    report.q_ab = spec.q_ab;
    std::string failures;
    for (DeclineKind kind : kinds) {
        ModelEntry e;
        e.kind = kind;
        try {
            e.fit = fit(kind, history);
            e.params = e.fit->params;
            e.projection = forecast(e.fit->params, spec, history.np());
        } catch (const FitError& err) {
            e.fit.reset();
            e.params.reset();
            e.diagnostic = err.what();
            failures += std::string(to_string(kind)) + ": " + err.what() + "; ";
        }
        report.entries.push_back(std::move(e));
    }
    const bool any_ok = std::any_of(report.entries.begin(), report.entries.end(),
                                    [](const ModelEntry& e) { return e.ok(); });
    if (!any_ok) throw FitError(FitError::Reason::NotConverged, "all models failed: " + failures);
    select_model(report);
    return report;
}

/// Days from `current_t` until the first holdout record at or below q_ab.
inline std::optional<double> observed_life(const ProductionHistory& holdout, double current_t,
                                           double q_ab) {
    for (const auto& r : holdout.records())
        if (r.t > current_t && r.rate <= q_ab) return r.t - current_t;
    return std::nullopt;
}

/// Scores every successful entry's remaining life against an observed one.
inline void attach_observed_life(AnalysisReport& report, double actual_life_days) {
    report.actual_life_days = actual_life_days;
    for (auto& e : report.entries)
        if (e.ok()) e.life_accuracy = life_accuracy(e.projection->delta_t, actual_life_days);
}

} // namespace dca
