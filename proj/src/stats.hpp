#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace curvecast::detail {

// Linear interpolation between order statistics (Hyndman-Fan type 7).
inline double quantile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

inline double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

} // namespace curvecast::detail
