#pragma once

// Closed-form Arps decline kernels.
//
// Units are fixed throughout: time in days, rates in mmscf/day, volumes in
// mmscf. Rates decline as
//
//   exponential (b = 0)      q(t) = qi * exp(-Di t)
//   harmonic    (b = 1)      q(t) = qi / (1 + Di t)
//   hyperbolic  (0 < b < 1)  q(t) = qi * (1 + b Di t)^(-1/b)
//
// The volume and duration kernels take a RateInterval and treat its upper
// rate as the initial rate of the decline; the fitted qi is not used there.

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>

#include "dca/error.hpp"

namespace dca {

enum class DeclineKind { Exponential, Harmonic, Hyperbolic };

inline constexpr DeclineKind kAllDeclineKinds[] = {
    DeclineKind::Exponential, DeclineKind::Harmonic, DeclineKind::Hyperbolic};

constexpr std::string_view to_string(DeclineKind kind) noexcept {
    switch (kind) {
    case DeclineKind::Exponential: return "exponential";
    case DeclineKind::Harmonic: return "harmonic";
    case DeclineKind::Hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

/// Accepts the long names and the short CLI spellings (exp, harm, hyp).
inline std::optional<DeclineKind> parse_decline_kind(std::string_view name) {
    if (name == "exp" || name == "exponential") return DeclineKind::Exponential;
    if (name == "harm" || name == "harmonic") return DeclineKind::Harmonic;
    if (name == "hyp" || name == "hyperbolic") return DeclineKind::Hyperbolic;
    return std::nullopt;
}

/// Hyperbolic exponents closer than this to 0 or 1 are evaluated with the
/// exponential or harmonic closed form respectively.
inline constexpr double kNearLimitExponent = 1e-7;

struct DeclineParameters {
    DeclineKind kind = DeclineKind::Exponential;
    double qi = 0.0; ///< initial rate, mmscf/day
    double di = 0.0; ///< nominal decline rate, 1/day
    double b = 0.0;  ///< decline exponent

    static DeclineParameters exponential(double qi, double di) {
        DeclineParameters p{DeclineKind::Exponential, qi, di, 0.0};
        p.validate();
        return p;
    }

    static DeclineParameters harmonic(double qi, double di) {
        DeclineParameters p{DeclineKind::Harmonic, qi, di, 1.0};
        p.validate();
        return p;
    }

    static DeclineParameters hyperbolic(double qi, double di, double b) {
        DeclineParameters p{DeclineKind::Hyperbolic, qi, di, b};
        p.validate();
        return p;
    }

    void validate() const {
        if (!(std::isfinite(qi) && qi > 0.0))
            throw InvalidArgument("initial rate qi must be positive and finite");
        if (!(std::isfinite(di) && di > 0.0))
            throw InvalidArgument("nominal decline Di must be positive and finite");
        switch (kind) {
        case DeclineKind::Exponential:
            if (b != 0.0) throw InvalidArgument("exponential decline requires b = 0");
            break;
        case DeclineKind::Harmonic:
            if (b != 1.0) throw InvalidArgument("harmonic decline requires b = 1");
            break;
        case DeclineKind::Hyperbolic:
            if (!(b > 0.0 && b < 1.0))
                throw InvalidArgument("hyperbolic decline requires 0 < b < 1, got b = " +
                                      std::to_string(b));
            break;
        }
    }

    /// Same decline, restarted at `q_start`.
    DeclineParameters reanchored(double q_start) const {
        DeclineParameters p = *this;
        p.qi = q_start;
        p.validate();
        return p;
    }

    friend bool operator==(const DeclineParameters&, const DeclineParameters&) = default;
};

/// Rate window from the current rate down to the abandonment rate.
struct RateInterval {
    double q_start = 0.0;
    double q_ab = 0.0;

    void validate() const {
        if (!(std::isfinite(q_ab) && q_ab > 0.0))
            throw InvalidArgument("abandonment rate must be positive and finite");
        if (!std::isfinite(q_start))
            throw InvalidArgument("start rate must be finite");
        if (q_ab > q_start)
            throw InvalidArgument("abandonment rate exceeds start rate");
    }
};

namespace detail {

enum class Regime { Exponential, Harmonic, Hyperbolic };

inline Regime regime(const DeclineParameters& p) noexcept {
    switch (p.kind) {
    case DeclineKind::Exponential: return Regime::Exponential;
    case DeclineKind::Harmonic: return Regime::Harmonic;
    case DeclineKind::Hyperbolic: break;
    }
    if (p.b < kNearLimitExponent) return Regime::Exponential;
    if (1.0 - p.b < kNearLimitExponent) return Regime::Harmonic;
    return Regime::Hyperbolic;
}

} // namespace detail

/// Model rate `t` days after the decline starts at qi.
inline double rate_at(const DeclineParameters& params, double t) {
    params.validate();
    if (!(std::isfinite(t) && t >= 0.0))
        throw InvalidArgument("elapsed time must be finite and non-negative");

    const double x = params.di * t;
    switch (detail::regime(params)) {
    case detail::Regime::Exponential: return params.qi * std::exp(-x);
    case detail::Regime::Harmonic: return params.qi / (1.0 + x);
    case detail::Regime::Hyperbolic: break;
    }
    return params.qi * std::exp(-std::log1p(params.b * x) / params.b);
}

/// Volume produced while the rate falls from interval.q_start to interval.q_ab.
inline double cumulative_between(const DeclineParameters& params, const RateInterval& interval) {
    params.validate();
    interval.validate();
    const double qs = interval.q_start;
    const double qa = interval.q_ab;
    if (qs == qa) return 0.0;

    switch (detail::regime(params)) {
    case detail::Regime::Exponential: return (qs - qa) / params.di;
    case detail::Regime::Harmonic: return qs / params.di * std::log(qs / qa);
    case detail::Regime::Hyperbolic: break;
    }
    // 1 - (qa/qs)^(1-b), written with expm1 so that b near 1 keeps its digits.
    const double one_minus_b = 1.0 - params.b;
    const double fraction = -std::expm1(one_minus_b * std::log(qa / qs));
    return qs / (one_minus_b * params.di) * fraction;
}

/// Days needed for the rate to fall from interval.q_start to interval.q_ab.
inline double time_between_rates(const DeclineParameters& params, const RateInterval& interval) {
    params.validate();
    interval.validate();
    const double qs = interval.q_start;
    const double qa = interval.q_ab;
    if (qs == qa) return 0.0;

    switch (detail::regime(params)) {
    case detail::Regime::Exponential: return std::log(qs / qa) / params.di;
    case detail::Regime::Harmonic: return qs / params.di * (1.0 / qa - 1.0 / qs);
    case detail::Regime::Hyperbolic: break;
    }
    return std::expm1(params.b * std::log(qs / qa)) / (params.b * params.di);
}

/// Converts the slope of log10(rate) against time into a nominal decline.
inline double nominal_decline_from_semilog_slope(double slope) {
    if (!std::isfinite(slope)) throw InvalidArgument("semilog slope must be finite");
    if (slope >= 0.0) throw InvalidArgument("no decline: semilog slope must be negative");
    return -slope * std::numbers::ln10;
}

/// Parameters implied by a straight line log10(q) = intercept + slope * t.
inline DeclineParameters exponential_from_semilog(double intercept, double slope) {
    return DeclineParameters::exponential(std::pow(10.0, intercept),
                                          nominal_decline_from_semilog_slope(slope));
}

/// Parameters implied by a straight line 1/q = intercept + slope * t.
///
/// Rearranging q = qi / (1 + Di t) gives 1/q = 1/qi + (Di/qi) t, so
/// qi = 1/intercept and Di = slope/intercept.
inline DeclineParameters harmonic_from_reciprocal(double intercept, double slope) {
    if (!(std::isfinite(intercept) && intercept > 0.0))
        throw InvalidArgument("reciprocal-rate intercept must be positive");
    if (!(std::isfinite(slope) && slope > 0.0))
        throw InvalidArgument("no decline: reciprocal-rate slope must be positive");
    return DeclineParameters::harmonic(1.0 / intercept, slope / intercept);
}

} // namespace dca
