#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

namespace pptour {

/// Linear-interpolation quantile (R type 7) of an already sorted vector.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    if (sorted.size() == 1) return sorted[0];
    const double h = q * (static_cast<double>(sorted.size()) - 1.0);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    return quantile_sorted(v, q);
}

inline double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double median_of(std::vector<double> v) { return quantile(std::move(v), 0.5); }

/// Mean absolute successive difference; the smoothness metric for traces.
inline double masd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) s += std::abs(v[i] - v[i - 1]);
    return s / static_cast<double>(v.size() - 1);
}

/// Spearman rank correlation (average ranks for ties).
double spearman(const std::vector<double>& a, const std::vector<double>& b);

} // namespace pptour
