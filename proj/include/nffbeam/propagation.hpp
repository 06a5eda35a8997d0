// SPDX-License-Identifier: Apache-2.0
//
// Free-space scalar Green's function and the probe-dipole field it
// induces. The kernel is scalar: polarization is outside the model and
// all field values are complex scalar amplitudes.

#pragma once

#include <cmath>
#include <string>

#include "nffbeam/angles.hpp"
#include "nffbeam/errors.hpp"
#include "nffbeam/geometry.hpp"
#include "nffbeam/vec3.hpp"

namespace nffbeam {

namespace detail {

/// Kernel value for a precomputed separation d >= geometric_standoff.
inline Complex green_at_distance(double k0, double d) {
    return std::polar(1.0 / (4.0 * pi * d), -k0 * d);
}

inline void check_standoff(double d) {
    if (!(d >= geometric_standoff)) {
        throw SingularityError("source and observation points are closer than the " +
                               std::to_string(geometric_standoff) +
                               " m standoff (separation " + std::to_string(d) + " m)");
    }
}

} // namespace detail

/// e^{-j k0 d} / (4 pi d) with d = |r1 - r2|. Symmetric in its point
/// arguments; magnitude 1/(4 pi d), phase -k0 d.
inline Complex scalar_green(double k0, const Vec3& r1, const Vec3& r2) {
    const double d = distance(r1, r2);
    detail::check_standoff(d);
    return detail::green_at_distance(k0, d);
}

/// Field of a probe dipole at r_s observed at r_obs:
/// j omega mu0 * scalar_green(k0, r_obs, r_s).
inline Complex dipole_field(const FrequencySpec& freq, const Vec3& r_s, const Vec3& r_obs) {
    return Complex{0.0, freq.omega * freq.mu0} * scalar_green(freq.k0, r_obs, r_s);
}

} // namespace nffbeam
