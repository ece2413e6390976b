#pragma once

// Machine-readable outputs: JSON analysis reports and plot-ready CSV tables.
//
// JSON numbers carry 6 significant digits and keys keep a fixed order, so the
// same input always produces byte-identical output.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dca/arps.hpp"
#include "dca/error.hpp"
#include "dca/fitting.hpp"
#include "dca/forecasting.hpp"
#include "dca/ingest.hpp"

namespace dca {

using Json = nlohmann::ordered_json;

/// `v` rounded to 6 significant digits, or null when absent or non-finite.
inline Json json_number(std::optional<double> v) {
    if (!v || !std::isfinite(*v)) return nullptr;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", *v);
    return std::strtod(buf, nullptr);
}

inline Json to_json(const AnalysisReport& report) {
    Json doc;
    doc["well_id"] = report.well_id;
    doc["np_mmscf"] = json_number(report.np);
    doc["q_ab_mmscfd"] = json_number(report.q_ab);

    Json models = Json::array();
    for (const auto& e : report.entries) {
        Json m;
        m["kind"] = std::string(to_string(e.kind));
        const DeclineParameters* p = e.ok() && e.params ? &*e.params : nullptr;
        m["qi"] = p ? json_number(p->qi) : Json(nullptr);
        m["di_per_day"] = p ? json_number(p->di) : Json(nullptr);
        m["b"] = p ? json_number(p->b) : Json(nullptr);
        m["r_squared"] = e.fit ? json_number(e.fit->r_squared) : Json(nullptr);
        m["rmse_mmscfd"] = e.fit ? json_number(e.fit->rmse) : Json(nullptr);
        m["qf_mmscf"] = e.projection ? json_number(e.projection->qf) : Json(nullptr);
        m["delta_t_days"] = e.projection ? json_number(e.projection->delta_t) : Json(nullptr);
        m["eur_mmscf"] = e.projection ? json_number(e.projection->eur) : Json(nullptr);
        m["status"] = e.ok() ? "ok" : "fit_failed";
        if (!e.ok()) m["diagnostic"] = e.diagnostic;
        if (report.actual_life_days) m["life_accuracy"] = json_number(e.life_accuracy);
        models.push_back(std::move(m));
    }
    doc["models"] = std::move(models);
    doc["selected_model"] = std::string(to_string(report.selected_model));
    doc["selection_reason"] = report.selection_reason;
    if (report.actual_life_days) doc["actual_life_days"] = json_number(report.actual_life_days);
    return doc;
}

inline void write_json(std::ostream& out, const Json& doc) {
    out << doc.dump(2) << '\n';
    if (!out) throw Error("failed to write JSON output");
}

inline void write_json(const std::filesystem::path& destination, const Json& doc) {
    std::ofstream out(destination, std::ios::binary);
    if (!out) throw Error("cannot open '" + destination.string() + "' for writing");
    write_json(out, doc);
}

inline void emit_report(const AnalysisReport& report, std::ostream& out) { write_json(out, to_json(report)); }

inline void emit_report(const AnalysisReport& report, const std::filesystem::path& destination) {
    write_json(destination, to_json(report));
}

/// Regression and goodness-of-fit details for each attempted model.
inline Json fit_outcomes_to_json(const WellInput& well, const ProductionHistory& fitted,
                                 std::span<const FitOutcome> outcomes) {
    Json doc;
    doc["well_id"] = well.well_id;
    doc["n_records"] = fitted.size();
    doc["dropped_rows"] = well.dropped_rows;
    doc["window_days"] = Json::array({json_number(fitted.front().t), json_number(fitted.back().t)});
    Json models = Json::array();
    for (const auto& o : outcomes) {
        Json m;
        m["kind"] = std::string(to_string(o.kind));
        if (o.fit) {
            const auto& f = *o.fit;
            m["qi"] = json_number(f.params.qi);
            m["di_per_day"] = json_number(f.params.di);
            m["b"] = json_number(f.params.b);
            m["transformed_intercept"] = f.transformed ? json_number(f.transformed->intercept) : Json(nullptr);
            m["transformed_slope"] = f.transformed ? json_number(f.transformed->slope) : Json(nullptr);
            m["r_squared"] = json_number(f.r_squared);
            m["rmse_mmscfd"] = json_number(f.rmse);
            m["n_points"] = f.n_points;
            m["status"] = "ok";
        } else {
            for (const char* key : {"qi", "di_per_day", "b", "transformed_intercept", "transformed_slope",
                                    "r_squared", "rmse_mmscfd", "n_points"})
                m[key] = nullptr;
            m["status"] = "fit_failed";
            m["diagnostic"] = o.diagnostic;
        }
        models.push_back(std::move(m));
    }
    doc["models"] = std::move(models);
    return doc;
}

/// Forecast series for each model of a report.
inline Json forecasts_to_json(const AnalysisReport& report, const ForecastSpec& spec) {
    Json doc;
    doc["well_id"] = report.well_id;
    doc["np_mmscf"] = json_number(report.np);
    doc["q_start_mmscfd"] = json_number(spec.q_start);
    doc["q_ab_mmscfd"] = json_number(spec.q_ab);
    doc["step_days"] = json_number(spec.step);
    Json models = Json::array();
    for (const auto& e : report.entries) {
        Json m;
        m["kind"] = std::string(to_string(e.kind));
        if (e.ok()) {
            const auto& f = *e.projection;
            m["qi"] = json_number(e.params->qi);
            m["di_per_day"] = json_number(e.params->di);
            m["b"] = json_number(e.params->b);
            m["qf_mmscf"] = json_number(f.qf);
            m["delta_t_days"] = json_number(f.delta_t);
            m["eur_mmscf"] = json_number(f.eur);
            m["status"] = "ok";
            Json points = Json::array();
            for (const auto& p : f.points) points.push_back(Json::array({json_number(p.t), json_number(p.rate)}));
            m["points"] = std::move(points);
        } else {
            m["status"] = "fit_failed";
            m["diagnostic"] = e.diagnostic;
        }
        models.push_back(std::move(m));
    }
    doc["models"] = std::move(models);
    return doc;
}

enum class PlotKind { CartesianRateTime, SemilogRateTime, RateCumulative };

inline PlotKind parse_plot_kind(std::string_view name) {
    if (name == "cartesian" || name == "cartesian_rate_time") return PlotKind::CartesianRateTime;
    if (name == "semilog" || name == "semilog_rate_time") return PlotKind::SemilogRateTime;
    if (name == "rate-cum" || name == "rate_cumulative") return PlotKind::RateCumulative;
    throw InvalidArgument("unknown plot kind '" + std::string(name) + "'");
}

/// A plot as a table: one abscissa column, the observed series, then one
/// fitted overlay column per model. Missing cells are absent.
struct PlotSeries {
    PlotKind kind = PlotKind::CartesianRateTime;
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> rows;
};

inline PlotSeries make_plot_series(const ProductionHistory& history, std::span<const FitResult> fits,
                                   PlotKind kind) {
    PlotSeries plot;
    plot.kind = kind;
    switch (kind) {
    case PlotKind::CartesianRateTime: plot.columns = {"t_days", "observed"}; break;
    case PlotKind::SemilogRateTime: plot.columns = {"t_days", "log10_rate"}; break;
    case PlotKind::RateCumulative: plot.columns = {"cumulative_mmscf", "rate"}; break;
    }
    for (const auto& f : fits)
        plot.columns.push_back(std::string(to_string(f.params.kind)) +
                               (kind == PlotKind::SemilogRateTime ? "_log10_fitted" : "_fitted"));

    const auto cumulative = running_cumulative(history);
    for (std::size_t i = 0; i < history.size(); ++i) {
        const auto& rec = history[i];
        std::vector<std::optional<double>> row;
        switch (kind) {
        case PlotKind::CartesianRateTime: row = {rec.t, rec.rate}; break;
        case PlotKind::SemilogRateTime: row = {rec.t, std::log10(rec.rate)}; break;
        case PlotKind::RateCumulative: row = {cumulative[i].cumulative, rec.rate}; break;
        }
        for (const auto& f : fits) {
            // Overlays start where their fitting window starts.
            if (rec.t < f.window.t_min) {
                row.push_back(std::nullopt);
                continue;
            }
            const double q = rate_at(f.params, rec.t - f.window.t_min);
            row.push_back(kind == PlotKind::SemilogRateTime ? std::log10(q) : q);
        }
        plot.rows.push_back(std::move(row));
    }
    return plot;
}

inline void write_plot_csv(std::ostream& out, const PlotSeries& plot) {
    for (std::size_t c = 0; c < plot.columns.size(); ++c) out << (c ? "," : "") << plot.columns[c];
    out << '\n';
    for (const auto& row : plot.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            if (row[c]) out << format_exact(*row[c]);
        }
        out << '\n';
    }
    if (!out) throw Error("failed to write plot CSV");
}

inline void emit_plot_series(const ProductionHistory& history, std::span<const FitResult> fits,
                             PlotKind kind, std::ostream& out) {
    write_plot_csv(out, make_plot_series(history, fits, kind));
}

} // namespace dca
