#pragma once

// Production CSV ingestion.
//
// Accepted layout: a header row naming the columns, then one row per
// observation. Time comes from either `t_days` (days, any origin) or `date`
// (ISO-8601 YYYY-MM-DD, converted to days since the first row or since a
// caller-supplied origin). `rate_mmscfd` is required. An optional
// `cumulative_mmscf` column supplies Np from its last non-empty value.
// Blank lines and lines starting with '#' are ignored. Rows with a
// non-positive rate are dropped and counted.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "dca/error.hpp"
#include "dca/history.hpp"

namespace dca {

struct WellInput {
    std::string well_id;
    ProductionHistory history;
    std::optional<double> q_ab;                   ///< per-well abandonment override
    std::size_t dropped_rows = 0;                 ///< rows removed for non-positive rate
    std::optional<std::chrono::sys_days> origin;  ///< calendar date of t = 0, date input only

    std::optional<double> np() const { return history.np(); }
};

struct ParseOptions {
    std::string well_id = "well";
    /// Date columns are measured from this day instead of the first row.
    std::optional<std::chrono::sys_days> origin;
    std::size_t min_records = 3;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    return s;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

inline std::optional<double> parse_real(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

} // namespace detail

/// Parses YYYY-MM-DD.
inline std::optional<std::chrono::sys_days> parse_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    auto number = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int v = 0;
        const auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
        if (ec != std::errc{} || ptr != s.data() + pos + len) return std::nullopt;
        return v;
    };
    const auto y = number(0, 4), m = number(5, 2), d = number(8, 2);
    if (!y || !m || !d) return std::nullopt;
    const std::chrono::year_month_day ymd{std::chrono::year{*y},
                                          std::chrono::month{static_cast<unsigned>(*m)},
                                          std::chrono::day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) return std::nullopt;
    return std::chrono::sys_days{ymd};
}

inline WellInput parse_history(std::istream& in, const ParseOptions& options = {}) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;

    while (std::getline(in, line)) {
        ++line_no;
        const auto t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        for (auto f : detail::split_csv_line(line)) header.emplace_back(f);
        break;
    }
    if (header.empty()) throw ParseError(line_no, "", "missing header row");

    auto column = [&](std::string_view name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto rate_col = column("rate_mmscfd");
    const auto t_col = column("t_days");
    const auto date_col = column("date");
    const auto cum_col = column("cumulative_mmscf");
    if (!rate_col) throw ParseError(line_no, "rate_mmscfd", "missing required column");
    if (!t_col && !date_col) throw ParseError(line_no, "t_days", "missing time column (t_days or date)");

    WellInput well;
    well.well_id = options.well_id;
    well.origin = t_col ? std::nullopt : options.origin;

    std::vector<ProductionRecord> records;
    std::optional<double> np;
    std::optional<double> previous_t;
    while (std::getline(in, line)) {
        ++line_no;
        const auto stripped = detail::trim(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != header.size())
            throw ParseError(line_no, "", "expected " + std::to_string(header.size()) + " fields, got " +
                                              std::to_string(fields.size()));

        double t = 0.0;
        if (t_col) {
            const auto v = detail::parse_real(fields[*t_col]);
            if (!v) throw ParseError(line_no, "t_days", "malformed number '" + std::string(fields[*t_col]) + "'");
            t = *v;
        } else {
            const auto day = parse_iso_date(fields[*date_col]);
            if (!day) throw ParseError(line_no, "date", "malformed ISO-8601 date '" + std::string(fields[*date_col]) + "'");
            if (!well.origin) well.origin = *day;
            t = static_cast<double>((*day - *well.origin).count());
        }
        if (previous_t && !(t > *previous_t))
            throw ParseError(line_no, t_col ? "t_days" : "date", "timestamps must be strictly increasing");
        previous_t = t;

        const auto rate = detail::parse_real(fields[*rate_col]);
        if (!rate) throw ParseError(line_no, "rate_mmscfd", "malformed number '" + std::string(fields[*rate_col]) + "'");

        if (cum_col && !fields[*cum_col].empty()) {
            const auto cum = detail::parse_real(fields[*cum_col]);
            if (!cum || *cum < 0.0)
                throw ParseError(line_no, "cumulative_mmscf", "malformed cumulative '" + std::string(fields[*cum_col]) + "'");
            np = *cum;
        }

        if (*rate <= 0.0) {
            ++well.dropped_rows;
            continue;
        }
        records.push_back({t, *rate});
    }

    if (records.size() < options.min_records)
        throw ParseError(line_no, "", "need at least " + std::to_string(options.min_records) +
                                          " usable rows, got " + std::to_string(records.size()));
    well.history = ProductionHistory(std::move(records), np);
    return well;
}

/// Reads a file; the well id defaults to the file name without extension.
inline WellInput parse_history_file(const std::filesystem::path& path, ParseOptions options = {}) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open input file '" + path.string() + "'");
    if (options.well_id == ParseOptions{}.well_id) options.well_id = path.stem().string();
    return parse_history(in, options);
}

/// Shortest decimal text that reads back to exactly `v`.
inline std::string format_exact(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

/// Writes `t_days,rate_mmscfd,cumulative_mmscf`; Np, if any, sits on the last row.
inline void write_history_csv(std::ostream& out, const ProductionHistory& history) {
    out << "t_days,rate_mmscfd,cumulative_mmscf\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
        out << format_exact(history[i].t) << ',' << format_exact(history[i].rate) << ',';
        if (i + 1 == history.size() && history.np()) out << format_exact(*history.np());
        out << '\n';
    }
}

struct RateCumulative {
    double rate = 0.0;
    double cumulative = 0.0; ///< mmscf produced up to this record
};

/// Trapezoidal running volume paired with each record's rate.
inline std::vector<RateCumulative> running_cumulative(const ProductionHistory& history) {
    std::vector<RateCumulative> out;
    out.reserve(history.size());
    double volume = 0.0;
    for (std::size_t i = 0; i < history.size(); ++i) {
        if (i > 0) volume += 0.5 * (history[i].rate + history[i - 1].rate) * (history[i].t - history[i - 1].t);
        out.push_back({history[i].rate, volume});
    }
    return out;
}

} // namespace dca
