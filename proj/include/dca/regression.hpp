#pragma once

#include <span>

#include "dca/error.hpp"

namespace dca {

/// y = intercept + slope * x
struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
};

/// Ordinary least squares of y on x using centred sums.
inline LinearFit ordinary_least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw InvalidArgument("regression inputs differ in length");
    if (x.size() < 2) throw InvalidArgument("regression needs at least two points");

    const auto n = static_cast<double>(x.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= n;
    mean_y /= n;

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (y[i] - mean_y);
    }
    if (!(sxx > 0.0)) throw InvalidArgument("regression abscissa has zero variance");

    const double slope = sxy / sxx;
    return {mean_y - slope * mean_x, slope};
}

} // namespace dca
