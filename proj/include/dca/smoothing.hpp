#pragma once

#include <algorithm>
#include <vector>

#include "dca/error.hpp"
#include "dca/history.hpp"

namespace dca {

/// Centred moving average over `window` records.
struct SmoothingSpec {
    std::size_t window = 3;
    bool enabled = true;

    void validate() const {
        if (!enabled) return;
        if (window < 3 || window % 2 == 0)
            throw InvalidArgument("smoothing window must be odd and at least 3");
    }
};

/// Replaces each rate with the mean of the records within window/2 positions
/// of it. Near the ends the window is cut short rather than padded.
inline ProductionHistory smooth(const ProductionHistory& history, const SmoothingSpec& spec) {
    spec.validate();
    if (!spec.enabled) return history;
    const auto& in = history.records();
    if (spec.window > in.size())
        throw InvalidArgument("smoothing window exceeds the number of records");

    const std::size_t half = spec.window / 2;
    std::vector<ProductionRecord> out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(in.size() - 1, i + half);
        // Accumulate deviations from the centre value so constant runs stay exact.
        const double centre = in[i].rate;
        double deviation = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) deviation += in[j].rate - centre;
        out.push_back({in[i].t, centre + deviation / static_cast<double>(hi - lo + 1)});
    }
    return ProductionHistory(std::move(out), history.np());
}

} // namespace dca
