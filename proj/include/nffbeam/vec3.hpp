// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

namespace nffbeam {

/// Cartesian point/vector in metres. The array lies in z = 0 with boresight
/// +z; the waveguide axis is x (H-plane = x-z), the stacking axis is y
/// (E-plane = y-z).
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
        return {a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
        return {a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr Vec3 operator*(const Vec3& v, double s) {
        return {v.x * s, v.y * s, v.z * s};
    }
    friend constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline bool is_finite(const Vec3& v) {
    return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z);
}

} // namespace nffbeam
