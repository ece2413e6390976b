#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "dca/error.hpp"

namespace dca {

struct ProductionRecord {
    double t = 0.0;    ///< days since the first record
    double rate = 0.0; ///< mmscf/day

    friend bool operator==(const ProductionRecord&, const ProductionRecord&) = default;
};

/// Closed time range [t_min, t_max] in days.
struct TimeWindow {
    double t_min = 0.0;
    double t_max = 0.0;

    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

/// Observed rates for one well, strictly increasing in time, every rate
/// positive. Immutable once built.
class ProductionHistory {
public:
    ProductionHistory() = default;

    explicit ProductionHistory(std::vector<ProductionRecord> records,
                               std::optional<double> np = std::nullopt)
        : records_(std::move(records)), np_(np) {
        if (records_.empty()) throw InvalidArgument("production history has no records");
        for (std::size_t i = 0; i < records_.size(); ++i) {
            const auto& r = records_[i];
            if (!std::isfinite(r.t)) throw InvalidArgument("record time must be finite");
            if (!(std::isfinite(r.rate) && r.rate > 0.0))
                throw InvalidArgument("record rate must be positive and finite");
            if (i > 0 && !(r.t > records_[i - 1].t))
                throw InvalidArgument("record times must be strictly increasing");
        }
        if (np_ && !(std::isfinite(*np_) && *np_ >= 0.0))
            throw InvalidArgument("cumulative production Np must be non-negative");
    }

    const std::vector<ProductionRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const ProductionRecord& front() const { return records_.front(); }
    const ProductionRecord& back() const { return records_.back(); }
    const ProductionRecord& operator[](std::size_t i) const { return records_[i]; }

    std::optional<double> np() const noexcept { return np_; }

    ProductionHistory with_np(std::optional<double> np) const {
        return ProductionHistory(records_, np);
    }

    TimeWindow span() const { return {front().t, back().t}; }

    /// Records with t_min <= t <= t_max. Np is carried over unchanged.
    ProductionHistory window(TimeWindow w) const {
        if (!(w.t_min <= w.t_max)) throw InvalidArgument("window must satisfy t_min <= t_max");
        std::vector<ProductionRecord> kept;
        for (const auto& r : records_)
            if (r.t >= w.t_min && r.t <= w.t_max) kept.push_back(r);
        if (kept.empty()) throw InvalidArgument("window contains no records");
        return ProductionHistory(std::move(kept), np_);
    }

    std::vector<double> times() const {
        std::vector<double> out;
        out.reserve(records_.size());
        for (const auto& r : records_) out.push_back(r.t);
        return out;
    }

    std::vector<double> rates() const {
        std::vector<double> out;
        out.reserve(records_.size());
        for (const auto& r : records_) out.push_back(r.rate);
        return out;
    }

    friend bool operator==(const ProductionHistory&, const ProductionHistory&) = default;

private:
    std::vector<ProductionRecord> records_;
    std::optional<double> np_;
};

} // namespace dca
