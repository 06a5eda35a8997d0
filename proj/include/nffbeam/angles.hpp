// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace nffbeam {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Wrap an angle to the half-open interval (-pi, pi]. This is the single
/// wrapping convention used everywhere so phase sets from different
/// synthesis methods compare exactly.
inline double wrap_angle(double a) {
    double w = std::remainder(a, two_pi); // [-pi, pi]
    if (w <= -pi) {
        w += two_pi;
    }
    return w;
}

/// Argument of z in (-pi, pi]; the -pi branch edge maps to +pi.
inline double phase_of(const Complex& z) {
    double p = std::atan2(z.imag(), z.real());
    if (p <= -pi) {
        p = pi;
    }
    return p;
}

/// Shortest wrapped distance |a - b| between two angles.
inline double angle_delta(double a, double b) { return std::abs(wrap_angle(a - b)); }

/// Max-min extent of a set of wrapped angles, minimised over the branch
/// cut: values clustering around +-pi report a small spread, not ~2pi.
/// Empty or single-element input has zero spread.
inline double circular_spread(std::span<const double> wrapped) {
    const std::size_t n = wrapped.size();
    if (n <= 1) {
        return 0.0;
    }
    std::vector<double> v(wrapped.begin(), wrapped.end());
    std::sort(v.begin(), v.end());
    double max_gap = two_pi - (v.back() - v.front());
    for (std::size_t i = 1; i < n; ++i) {
        max_gap = std::max(max_gap, v[i] - v[i - 1]);
    }
    return two_pi - max_gap;
}

} // namespace nffbeam
