#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "dca/fitting.hpp"
#include "dca/smoothing.hpp"
#include "oracles.hpp"

using namespace dca;
using dca::testing::relative_error;

namespace {

ProductionHistory make_history(const std::vector<double>& t, const std::vector<double>& q) {
    std::vector<ProductionRecord> records;
    for (std::size_t i = 0; i < t.size(); ++i) records.push_back({t[i], q[i]});
    return ProductionHistory(std::move(records));
}

ProductionHistory from_rates(const std::vector<double>& q) {
    return make_history(dca::testing::day_grid(q.size()), q);
}

template <class F>
ProductionHistory generate(std::size_t n, F&& rate) {
    const auto t = dca::testing::day_grid(n);
    std::vector<double> q;
    for (double ti : t) q.push_back(rate(ti));
    return make_history(t, q);
}

std::vector<double> rates_of(const ProductionHistory& h) { return h.rates(); }

} // namespace

// --- regression ----------------------------------------------------------

TEST(OrdinaryLeastSquares, AgreesWithNormalEquations) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 10 + static_cast<std::size_t>(trial) * 7;
        std::vector<double> x, y;
        for (std::size_t i = 0; i < n; ++i) {
            x.push_back(dca::testing::uniform(rng, 0.0, 300.0));
            y.push_back(dca::testing::uniform(rng, -2.0, 3.0));
        }
        const auto fit = ordinary_least_squares(x, y);
        const auto ref = dca::testing::normal_equations(x, y);
        EXPECT_NEAR(fit.slope, ref.slope, 1e-12 * std::abs(ref.slope) + 1e-15);
        EXPECT_NEAR(fit.intercept, ref.intercept, 1e-12 * std::abs(ref.intercept) + 1e-15);
    }
}

TEST(OrdinaryLeastSquares, RejectsDegenerateInput) {
    const std::vector<double> same{2.0, 2.0, 2.0}, y{1.0, 2.0, 3.0};
    EXPECT_THROW(ordinary_least_squares(same, y), InvalidArgument);
    const std::vector<double> one{1.0};
    EXPECT_THROW(ordinary_least_squares(one, one), InvalidArgument);
}

// --- smoothing -----------------------------------------------------------

TEST(Smooth, TruncatedCentredWindow) {
    EXPECT_EQ(rates_of(smooth(from_rates({1, 2, 3}), {3, true})), (std::vector<double>{1.5, 2.0, 2.5}));
    EXPECT_EQ(rates_of(smooth(from_rates({4, 4, 4, 4}), {3, true})), (std::vector<double>{4, 4, 4, 4}));

    const auto r = rates_of(smooth(from_rates({10, 2, 10, 2, 10}), {3, true}));
    const std::vector<double> expected{6.0, 22.0 / 3.0, 14.0 / 3.0, 22.0 / 3.0, 6.0};
    ASSERT_EQ(r.size(), expected.size());
    for (std::size_t i = 0; i < r.size(); ++i) EXPECT_DOUBLE_EQ(r[i], expected[i]);
}

TEST(Smooth, KeepsTimesCountAndNp) {
    const ProductionHistory h({{0, 5}, {3, 4}, {7, 3}, {9, 2.5}, {15, 2}}, 123.0);
    const auto s = smooth(h, {5, true});
    EXPECT_EQ(s.size(), h.size());
    EXPECT_EQ(s.times(), h.times());
    EXPECT_EQ(s.np(), 123.0);
}

TEST(Smooth, ValidatesSpec) {
    const auto h = from_rates({5, 4, 3, 2});
    EXPECT_THROW(smooth(h, {4, true}), InvalidArgument);
    EXPECT_THROW(smooth(h, {1, true}), InvalidArgument);
    EXPECT_THROW(smooth(h, {5, true}), InvalidArgument);
    EXPECT_EQ(smooth(h, {4, false}), h);
}

TEST(Smooth, ConstantSeriesIsAFixedPoint) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const double c = dca::testing::log_uniform(rng, 1e-3, 1e3);
        const std::size_t n = 5 + static_cast<std::size_t>(trial);
        const auto h = from_rates(std::vector<double>(n, c));
        for (std::size_t w : {3u, 5u}) EXPECT_EQ(smooth(h, {w, true}), h);
    }
}

// --- exponential ---------------------------------------------------------

TEST(FitExponential, RecoversSemilogLineOfWorkedExample) {
    const auto h = generate(200, [](double t) { return dca::testing::exponential_rate(11.339, 0.0134, t); });
    const auto fit = fit_exponential(h);
    ASSERT_TRUE(fit.transformed);
    EXPECT_NEAR(fit.transformed->intercept, 1.0545, 1e-4);
    // The printed slope -0.0058 is 0.0134/ln10 = 0.005820 rounded to four places.
    EXPECT_NEAR(fit.transformed->slope, -0.0134 / std::numbers::ln10, 1e-12);
    EXPECT_NEAR(fit.transformed->slope, -0.0058, 5e-5);
    EXPECT_LT(relative_error(fit.params.qi, 11.339), 1e-9);
    EXPECT_LT(relative_error(fit.params.di, 0.0134), 1e-9);
    EXPECT_EQ(fit.params.kind, DeclineKind::Exponential);
    EXPECT_EQ(fit.params.b, 0.0);
    EXPECT_EQ(fit.n_points, 200u);
    EXPECT_EQ(fit.window, (TimeWindow{0.0, 199.0}));
}

TEST(FitExponential, ParametersFollowFromTransformedLine) {
    const auto h = make_history({0, 10, 25, 31, 60}, {9.1, 8.2, 6.0, 5.9, 3.1});
    const auto fit = fit_exponential(h);
    const auto mapped = exponential_from_semilog(fit.transformed->intercept, fit.transformed->slope);
    EXPECT_LT(relative_error(mapped.qi, fit.params.qi), 1e-12);
    EXPECT_LT(relative_error(mapped.di, fit.params.di), 1e-12);
}

TEST(FitExponential, Errors) {
    try {
        fit_exponential(from_rates({5, 5, 5, 5}));
        FAIL() << "expected no-decline error";
    } catch (const FitError& e) {
        EXPECT_EQ(e.reason(), FitError::Reason::NoDecline);
        EXPECT_STREQ(e.what(), "no decline detected");
    }
    try {
        fit_exponential(from_rates({5, 4}));
        FAIL() << "expected too-few-records error";
    } catch (const FitError& e) {
        EXPECT_EQ(e.reason(), FitError::Reason::TooFewRecords);
    }
}

// --- harmonic ------------------------------------------------------------

TEST(FitHarmonic, RoundTrip) {
    const auto h = generate(300, [](double t) { return dca::testing::harmonic_rate(20.0, 0.004, t); });
    const auto fit = fit_harmonic(h);
    EXPECT_LT(relative_error(fit.params.qi, 20.0), 1e-6);
    EXPECT_LT(relative_error(fit.params.di, 0.004), 1e-6);
    EXPECT_EQ(fit.params.b, 1.0);
    const auto mapped = harmonic_from_reciprocal(fit.transformed->intercept, fit.transformed->slope);
    EXPECT_LT(relative_error(mapped.qi, fit.params.qi), 1e-12);
}

TEST(FitHarmonic, Errors) {
    try {
        fit_harmonic(from_rates({3, 3, 3}));
        FAIL();
    } catch (const FitError& e) {
        EXPECT_EQ(e.reason(), FitError::Reason::NoDecline);
    }
    // 1/q rising so steeply that the line crosses zero before t = 0.
    try {
        fit_harmonic(from_rates({10.0, 10.0, 1.0, 0.5}));
        FAIL();
    } catch (const FitError& e) {
        EXPECT_EQ(e.reason(), FitError::Reason::InvalidCoefficients);
    }
    EXPECT_THROW(fit_harmonic(from_rates({3, 2})), FitError);
}

// --- hyperbolic ----------------------------------------------------------

TEST(FitHyperbolic, RoundTrip) {
    const auto h = generate(300, [](double t) { return dca::testing::hyperbolic_rate(10.0, 0.01, 0.5, t); });
    const auto fit = fit_hyperbolic(h);
    EXPECT_LT(relative_error(fit.params.qi, 10.0), 1e-4);
    EXPECT_LT(relative_error(fit.params.di, 0.01), 1e-4);
    EXPECT_LT(relative_error(fit.params.b, 0.5), 1e-4);
    EXPECT_FALSE(fit.transformed);
    EXPECT_GT(fit.iterations, 0);
}

TEST(FitHyperbolic, ExponentialDataDrivesExponentToZero) {
    const auto h = generate(300, [](double t) { return dca::testing::exponential_rate(8.0, 0.006, t); });
    const auto fit = fit_hyperbolic(h);
    EXPECT_LE(fit.params.b, 1e-3);
    EXPECT_LT(relative_error(fit.params.di, 0.006), 1e-3);
}

TEST(FitHyperbolic, WorkedExampleParameters) {
    const auto h = generate(300, [](double t) { return dca::testing::hyperbolic_rate(2.6755, 0.0039, 2e-5, t); });
    const auto fit = fit_hyperbolic(h);
    EXPECT_NEAR(fit.params.di, 0.0039, 1e-4);
    EXPECT_LT(fit.params.b, 1e-3);
}

TEST(FitHyperbolic, Deterministic) {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> noise(0.0, 0.05);
    const auto h = generate(250, [&](double t) { return dca::testing::hyperbolic_rate(6.0, 0.02, 0.7, t) + noise(rng); });
    const auto a = fit_hyperbolic(h);
    const auto b = fit_hyperbolic(h);
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.residuals, b.residuals);
}

TEST(FitHyperbolic, Errors) {
    EXPECT_THROW(fit_hyperbolic(from_rates({5, 4, 3})), FitError);

    const auto h = generate(100, [](double t) { return dca::testing::hyperbolic_rate(10.0, 0.02, 0.3, t); });
    HyperbolicFitSettings tight;
    tight.solver.max_iterations = 1;
    try {
        fit_hyperbolic(h, tight);
        FAIL() << "expected non-convergence";
    } catch (const FitError& e) {
        EXPECT_EQ(e.reason(), FitError::Reason::NotConverged);
        ASSERT_TRUE(e.best_so_far());
        EXPECT_EQ(e.best_so_far()->iterations, 1);
        EXPECT_GT(e.best_so_far()->rmse, 0.0);
    }
}

// --- properties ----------------------------------------------------------

TEST(FitProperties, RoundTripAcrossRandomDraws) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        const double qi = dca::testing::log_uniform(rng, 1.0, 50.0);
        const double di = dca::testing::log_uniform(rng, 1e-3, 2e-2);
        const double b = dca::testing::uniform(rng, 0.05, 0.95);
        const auto n = static_cast<std::size_t>(dca::testing::uniform(rng, 200.0, 300.0));

        const auto e = fit_exponential(generate(n, [&](double t) { return dca::testing::exponential_rate(qi, di, t); }));
        EXPECT_LT(relative_error(e.params.qi, qi), 1e-6);
        EXPECT_LT(relative_error(e.params.di, di), 1e-6);

        const auto h = fit_harmonic(generate(n, [&](double t) { return dca::testing::harmonic_rate(qi, di, t); }));
        EXPECT_LT(relative_error(h.params.qi, qi), 1e-6);
        EXPECT_LT(relative_error(h.params.di, di), 1e-6);

        const auto y = fit_hyperbolic(generate(n, [&](double t) { return dca::testing::hyperbolic_rate(qi, di, b, t); }));
        EXPECT_LT(relative_error(y.params.qi, qi), 1e-4) << "trial " << trial;
        EXPECT_LT(relative_error(y.params.di, di), 1e-4) << "trial " << trial;
        EXPECT_LT(relative_error(y.params.b, b), 1e-4) << "trial " << trial;
    }
}

TEST(FitProperties, LinearisedCoefficientsMatchTextbookOls) {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> noise(0.0, 0.03);
    for (int trial = 0; trial < 20; ++trial) {
        const auto t = dca::testing::day_grid(150, 2.0);
        std::vector<double> q;
        for (double ti : t) q.push_back(dca::testing::hyperbolic_rate(12.0, 0.01, 0.4, ti) * std::exp(noise(rng)));
        const auto h = make_history(t, q);

        std::vector<double> log10q, inv;
        for (double v : q) {
            log10q.push_back(std::log10(v));
            inv.push_back(1.0 / v);
        }
        const auto e = fit_exponential(h);
        const auto ref_e = dca::testing::normal_equations(t, log10q);
        EXPECT_LT(relative_error(e.transformed->intercept, ref_e.intercept), 1e-12);
        EXPECT_LT(relative_error(e.transformed->slope, ref_e.slope), 1e-12);

        const auto hm = fit_harmonic(h);
        const auto ref_h = dca::testing::normal_equations(t, inv);
        EXPECT_LT(relative_error(hm.transformed->intercept, ref_h.intercept), 1e-12);
        EXPECT_LT(relative_error(hm.transformed->slope, ref_h.slope), 1e-12);
    }
}

TEST(FitProperties, ScaleEquivariance) {
    const auto base = generate(250, [](double t) { return dca::testing::hyperbolic_rate(7.0, 0.012, 0.6, t); });
    for (double c : {0.01, 3.5, 1000.0}) {
        std::vector<ProductionRecord> scaled;
        for (const auto& r : base.records()) scaled.push_back({r.t, r.rate * c});
        const ProductionHistory h(scaled);

        const auto e0 = fit_exponential(base), e1 = fit_exponential(h);
        EXPECT_LT(relative_error(e1.params.qi, c * e0.params.qi), 1e-9);
        EXPECT_LT(relative_error(e1.params.di, e0.params.di), 1e-9);
        EXPECT_NEAR(e1.transformed->intercept, e0.transformed->intercept + std::log10(c), 1e-12);

        const auto h0 = fit_harmonic(base), h1 = fit_harmonic(h);
        EXPECT_LT(relative_error(h1.params.qi, c * h0.params.qi), 1e-9);
        EXPECT_LT(relative_error(h1.params.di, h0.params.di), 1e-9);

        const auto y0 = fit_hyperbolic(base), y1 = fit_hyperbolic(h);
        EXPECT_LT(relative_error(y1.params.qi, c * y0.params.qi), 1e-6);
        EXPECT_LT(relative_error(y1.params.di, y0.params.di), 1e-6);
        EXPECT_LT(relative_error(y1.params.b, y0.params.b), 1e-6);
    }
}

// --- goodness of fit -----------------------------------------------------

TEST(Goodness, PerfectFit) {
    const auto p = DeclineParameters::hyperbolic(5.0, 0.02, 0.4);
    std::vector<ProductionRecord> records;
    for (double t = 10.0; t < 100.0; t += 3.0) records.push_back({t, rate_at(p, t - 10.0)});
    const auto g = goodness(ProductionHistory(records), p);
    ASSERT_TRUE(g.r_squared);
    EXPECT_EQ(*g.r_squared, 1.0);
    EXPECT_EQ(g.rmse, 0.0);
}

TEST(Goodness, TwoPointHandComputation) {
    const std::vector<double> observed{3.0, 1.0}, predicted{2.0, 2.0};
    const auto g = goodness_of_fit(observed, predicted);
    ASSERT_TRUE(g.r_squared);
    EXPECT_DOUBLE_EQ(*g.r_squared, 0.0);
    EXPECT_DOUBLE_EQ(g.rmse, 1.0);
}

TEST(Goodness, ZeroVarianceIsUndefined) {
    const std::vector<double> observed{2.0, 2.0, 2.0}, predicted{1.0, 2.0, 3.0};
    const auto g = goodness_of_fit(observed, predicted);
    EXPECT_FALSE(g.r_squared);
    EXPECT_GT(g.rmse, 0.0);
}

TEST(Goodness, FitterOutputNeverExceedsOne) {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> noise(0.0, 0.2);
    for (int trial = 0; trial < 10; ++trial) {
        const auto h = generate(120, [&](double t) { return dca::testing::hyperbolic_rate(9.0, 0.01, 0.5, t) + noise(rng); });
        for (DeclineKind kind : kAllDeclineKinds) {
            const auto f = fit(kind, h);
            ASSERT_TRUE(f.r_squared);
            EXPECT_LE(*f.r_squared, 1.0);
            EXPECT_GE(f.rmse, 0.0);
            EXPECT_EQ(f.residuals.size(), h.size());
            const auto g = goodness(h, f.params);
            EXPECT_DOUBLE_EQ(g.rmse, f.rmse);
        }
    }
}

TEST(FitModels, CapturesFailuresPerModel) {
    const auto h = from_rates({5, 5, 5, 5, 5});
    const auto outcomes = fit_models(h, kAllDeclineKinds);
    ASSERT_EQ(outcomes.size(), 3u);
    for (const auto& o : outcomes) {
        EXPECT_FALSE(o.fit);
        EXPECT_FALSE(o.diagnostic.empty());
    }
}
