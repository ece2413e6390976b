#pragma once

// Command-line front end: fit, forecast, compare, plot-data.
//
// Exit codes: 0 success, 2 input or validation error, 3 every model failed.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dca/dca.hpp"

namespace dca::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitFit = 3;

struct CommonOptions {
    std::string input;
    std::string out;
    std::string model = "all";
    int smooth_window = 0;
    std::string window;
};

struct ForecastOptions {
    std::optional<double> q_ab;
    std::optional<double> np;
    std::optional<double> q_start;
    double step = kDefaultForecastStep;
    std::string holdout;
};

namespace detail {

inline std::vector<DeclineKind> parse_models(const std::string& text) {
    if (text == "all") return {std::begin(kAllDeclineKinds), std::end(kAllDeclineKinds)};
    std::vector<DeclineKind> kinds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto kind = parse_decline_kind(item);
        if (!kind) throw InvalidArgument("unknown model '" + item + "' (expected exp, harm, hyp or all)");
        kinds.push_back(*kind);
    }
    return canonical_models(kinds);
}

inline TimeWindow parse_window(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw InvalidArgument("window must be tmin:tmax");
    const auto lo = dca::detail::parse_real(dca::detail::trim(std::string_view(text).substr(0, colon)));
    const auto hi = dca::detail::parse_real(dca::detail::trim(std::string_view(text).substr(colon + 1)));
    if (!lo || !hi) throw InvalidArgument("window bounds must be numbers: '" + text + "'");
    return {*lo, *hi};
}

/// Loads the input and applies --np, smoothing and the fit window.
inline WellInput load(const CommonOptions& common, const ForecastOptions* forecast, std::ostream& err) {
    WellInput well = parse_history_file(common.input);
    if (well.dropped_rows > 0)
        err << "warning: dropped " << well.dropped_rows << " row(s) with non-positive rate\n";

    if (forecast && forecast->np) {
        if (well.np() && *well.np() != *forecast->np)
            err << "warning: --np " << *forecast->np << " overrides cumulative_mmscf " << *well.np() << '\n';
        well.history = well.history.with_np(*forecast->np);
    }
    if (forecast && forecast->q_ab) well.q_ab = *forecast->q_ab;

    if (common.smooth_window < 0) throw InvalidArgument("smoothing window must not be negative");
    if (common.smooth_window > 0)
        well.history = smooth(well.history, {static_cast<std::size_t>(common.smooth_window), true});
    if (!common.window.empty()) well.history = well.history.window(parse_window(common.window));
    return well;
}

inline void write_output(const std::string& destination, std::ostream& out,
                         const std::function<void(std::ostream&)>& body) {
    if (destination == "-") {
        body(out);
        return;
    }
    std::ofstream file(destination, std::ios::binary);
    if (!file) throw InvalidArgument("cannot open '" + destination + "' for writing");
    body(file);
    file.flush();
    if (!file) throw InvalidArgument("failed writing '" + destination + "'");
}

inline ForecastSpec forecast_spec(const WellInput& well, const ForecastOptions& opts) {
    ForecastSpec spec;
    spec.q_start = opts.q_start.value_or(well.history.back().rate);
    spec.q_ab = well.q_ab.value_or(kDefaultAbandonmentRate);
    spec.step = opts.step;
    spec.validate();
    return spec;
}

inline int run_fit(const CommonOptions& common, std::ostream& out, std::ostream& err) {
    const WellInput well = load(common, nullptr, err);
    const auto kinds = parse_models(common.model);
    const auto outcomes = fit_models(well.history, kinds);
    for (const auto& o : outcomes)
        if (!o.fit) err << "warning: " << to_string(o.kind) << " fit failed: " << o.diagnostic << '\n';
    write_output(common.out, out,
                 [&](std::ostream& os) { write_json(os, fit_outcomes_to_json(well, well.history, outcomes)); });
    for (const auto& o : outcomes)
        if (o.fit) return kExitOk;
    return kExitFit;
}

inline AnalysisReport build_report(const CommonOptions& common, const WellInput& well, const ForecastSpec& spec) {
    const auto kinds = parse_models(common.model);
    AnalysisReport report = compare_models(well.history, spec, kinds);
    report.well_id = well.well_id;
    return report;
}

inline int run_forecast(const CommonOptions& common, const ForecastOptions& opts, std::ostream& out,
                        std::ostream& err) {
    const WellInput well = load(common, &opts, err);
    const ForecastSpec spec = forecast_spec(well, opts);
    const AnalysisReport report = build_report(common, well, spec);
    write_output(common.out, out, [&](std::ostream& os) { write_json(os, forecasts_to_json(report, spec)); });
    return kExitOk;
}

inline int run_compare(const CommonOptions& common, const ForecastOptions& opts, std::ostream& out,
                       std::ostream& err) {
    const WellInput well = load(common, &opts, err);
    const ForecastSpec spec = forecast_spec(well, opts);
    AnalysisReport report = build_report(common, well, spec);

    if (!opts.holdout.empty()) {
        ParseOptions po;
        po.origin = well.origin;
        po.min_records = 1;
        const WellInput holdout = parse_history_file(opts.holdout, po);
        const auto life = observed_life(holdout.history, well.history.back().t, spec.q_ab);
        if (life)
            attach_observed_life(report, *life);
        else
            err << "warning: holdout never reaches the abandonment rate; life_accuracy not computed\n";
    }
    write_output(common.out, out, [&](std::ostream& os) { emit_report(report, os); });
    return kExitOk;
}

inline int run_plot(const CommonOptions& common, const std::string& kind_name, std::ostream& out,
                    std::ostream& err) {
    const PlotKind kind = parse_plot_kind(kind_name);
    const WellInput well = load(common, nullptr, err);
    const auto kinds = parse_models(common.model);
    std::vector<FitResult> fits;
    for (auto& o : fit_models(well.history, kinds)) {
        if (o.fit)
            fits.push_back(std::move(*o.fit));
        else
            err << "warning: " << to_string(o.kind) << " fit failed: " << o.diagnostic << '\n';
    }
    if (!kinds.empty() && fits.empty()) return kExitFit;
    write_output(common.out, out, [&](std::ostream& os) { emit_plot_series(well.history, fits, kind, os); });
    return kExitOk;
}

/// TOML reader that files top-level keys under the subcommand being run, so a
/// config file can use either flat keys or [subcommand] tables.
class SubcommandConfig : public CLI::ConfigTOML {
public:
    explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigTOML::from_config(input);
        const auto active = app_->get_subcommands();
        if (active.empty()) return items;
        for (auto& item : items)
            if (item.parents.empty() && item.name != "config") item.parents.push_back(active.front()->get_name());
        return items;
    }

private:
    const CLI::App* app_;
};

inline void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("--input", common.input, "Production history CSV")->required();
    cmd->add_option("--out", common.out, "Output file, or - for stdout")->required();
    cmd->add_option("--model", common.model, "exp, harm, hyp, a comma list, or all")->capture_default_str();
    cmd->add_option("--smooth-window", common.smooth_window, "Centred moving-average window (odd, >= 3; 0 = off)")
        ->capture_default_str();
    cmd->add_option("--window", common.window, "Fit window tmin:tmax in days");
}

inline void add_forecast(CLI::App* cmd, ForecastOptions& opts, bool with_step) {
    cmd->add_option("--q-ab", opts.q_ab, "Abandonment rate, mmscf/d (default 0.03)");
    cmd->add_option("--np", opts.np, "Cumulative production to date, mmscf");
    cmd->add_option("--q-start", opts.q_start, "Current rate, mmscf/d (default: last observed rate)");
    if (with_step) cmd->add_option("--step", opts.step, "Forecast sampling step, days")->capture_default_str();
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Arps decline curve analysis"};
    app.set_config("--config", "", "TOML config file ; command-line flags take precedence");
    app.config_formatter(std::make_shared<detail::SubcommandConfig>(&app));
    app.require_subcommand(1);

    CommonOptions common;
    ForecastOptions forecast_opts;
    std::string plot_kind;

    auto* fit = app.add_subcommand("fit", "Fit decline models and report regression diagnostics");
    detail::add_common(fit, common);

    auto* forecast = app.add_subcommand("forecast", "Forecast rates to abandonment");
    detail::add_common(forecast, common);
    detail::add_forecast(forecast, forecast_opts, true);

    auto* compare = app.add_subcommand("compare", "Compare models: Qf, remaining life, EUR");
    detail::add_common(compare, common);
    detail::add_forecast(compare, forecast_opts, false);
    compare->add_option("--holdout", forecast_opts.holdout, "Later observed history for life_accuracy");

    auto* plot = app.add_subcommand("plot-data", "Emit plot-ready CSV");
    detail::add_common(plot, common);
    plot->add_option("--kind", plot_kind, "cartesian, semilog or rate-cum")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*fit) return detail::run_fit(common, out, err);
        if (*forecast) return detail::run_forecast(common, forecast_opts, out, err);
        if (*compare) return detail::run_compare(common, forecast_opts, out, err);
        if (*plot) return detail::run_plot(common, plot_kind, out, err);
    } catch (const FitError& e) {
        err << "error: " << e.what() << '\n';
        return kExitFit;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

/// Convenience overload for tests and embedding.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
    std::vector<const char*> argv{"dca"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace dca::cli
