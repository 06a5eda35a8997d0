// SPDX-License-Identifier: Apache-2.0
//
// Per-element excitation phase synthesis: time-reversal conjugation plus
// the ray-optic and far-field baselines it is compared against. All
// methods produce phase-only excitations with uniform unit amplitudes;
// phases are sampled at column phase centers (one phase shifter per
// waveguide).

#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nffbeam/angles.hpp"
#include "nffbeam/errors.hpp"
#include "nffbeam/geometry.hpp"
#include "nffbeam/propagation.hpp"

namespace nffbeam {

enum class Method { TimeReversal, RayOptic, FarField };

inline std::string_view method_name(Method m) {
    switch (m) {
    case Method::TimeReversal: return "tr";
    case Method::RayOptic: return "ray-optic";
    case Method::FarField: return "far-field";
    }
    return "unknown";
}

inline Method method_from_name(std::string_view name) {
    if (name == "tr") return Method::TimeReversal;
    if (name == "ray-optic") return Method::RayOptic;
    if (name == "far-field") return Method::FarField;
    throw InvalidInputError("unknown synthesis method '" + std::string(name) +
                            "' (expected tr, ray-optic, or far-field)");
}

/// Per-element complex excitation: wrapped phase and non-negative
/// amplitude per column, tagged with the synthesis method that produced
/// it. reference_index is set once a set has been normalized.
struct ExcitationSet {
    Method method = Method::TimeReversal;
    std::vector<double> phases;     // rad, each in (-pi, pi]
    std::vector<double> amplitudes; // unit by default
    std::optional<std::size_t> reference_index;

    [[nodiscard]] std::size_t size() const { return phases.size(); }

    friend bool operator==(const ExcitationSet&, const ExcitationSet&) = default;
};

/// Time-reversal synthesis: probe the target with a dipole, take the
/// conjugate of the received field at each phase center, keep its angle.
/// Equivalently phi_n = wrap(k0 |p_n - r_s| - pi/2).
inline ExcitationSet tr_phases(const ArrayLayout& layout, const FocalTarget& target,
                               const FrequencySpec& freq) {
    ExcitationSet exc;
    exc.method = Method::TimeReversal;
    exc.phases.reserve(layout.n_columns);
    for (const auto& p : layout.element_centers) {
        const Complex received = dipole_field(freq, target.r_s, p);
        exc.phases.push_back(phase_of(std::conj(received)));
    }
    exc.amplitudes.assign(layout.n_columns, 1.0);
    return exc;
}

/// Ray-optic synthesis: phase compensation equal to k0 times the
/// geometric path from each phase center to the focal point.
inline ExcitationSet ray_optic_phases(const ArrayLayout& layout, const FocalTarget& target,
                                      const FrequencySpec& freq) {
    ExcitationSet exc;
    exc.method = Method::RayOptic;
    exc.phases.reserve(layout.n_columns);
    for (const auto& p : layout.element_centers) {
        const double d = distance(p, target.r_s);
        detail::check_standoff(d);
        exc.phases.push_back(wrap_angle(freq.k0 * d));
    }
    exc.amplitudes.assign(layout.n_columns, 1.0);
    return exc;
}

/// Far-field baseline: progressive linear phase steering a plane wave
/// toward the target direction u = r_s/|r_s|, ignoring wavefront
/// curvature. phi_n = wrap(-k0 u . p_n).
inline ExcitationSet far_field_phases(const ArrayLayout& layout, const FocalTarget& target,
                                      const FrequencySpec& freq) {
    const double r = norm(target.r_s);
    if (!(r > 0.0)) {
        throw InvalidInputError("far_field_phases precondition: target not at the origin");
    }
    const Vec3 u = target.r_s * (1.0 / r);
    ExcitationSet exc;
    exc.method = Method::FarField;
    exc.phases.reserve(layout.n_columns);
    for (const auto& p : layout.element_centers) {
        exc.phases.push_back(wrap_angle(-freq.k0 * dot(u, p)));
    }
    exc.amplitudes.assign(layout.n_columns, 1.0);
    return exc;
}

inline ExcitationSet synthesize(Method method, const ArrayLayout& layout,
                                const FocalTarget& target, const FrequencySpec& freq) {
    switch (method) {
    case Method::TimeReversal: return tr_phases(layout, target, freq);
    case Method::RayOptic: return ray_optic_phases(layout, target, freq);
    case Method::FarField: return far_field_phases(layout, target, freq);
    }
    throw InvalidInputError("synthesize: unknown method");
}

/// Subtract the reference element's phase from every entry and re-wrap.
/// Amplitudes are unchanged. Idempotent for a fixed reference.
inline ExcitationSet normalize_phases(const ExcitationSet& exc, std::size_t reference_index) {
    if (reference_index >= exc.size()) {
        throw InvalidInputError("normalize_phases precondition: reference_index < n_columns");
    }
    ExcitationSet out = exc;
    const double ref = exc.phases[reference_index];
    for (auto& phi : out.phases) {
        phi = wrap_angle(phi - ref);
    }
    out.reference_index = reference_index;
    return out;
}

/// Snap each phase to the nearest level of a 2^bits phase shifter
/// (round half away from zero), then re-wrap.
inline ExcitationSet quantize_phases(const ExcitationSet& exc, int bits) {
    if (bits < 1 || bits > 16) {
        throw InvalidInputError("quantize_phases precondition: 1 <= bits <= 16");
    }
    const double step = two_pi / static_cast<double>(1 << bits);
    ExcitationSet out = exc;
    for (auto& phi : out.phases) {
        phi = wrap_angle(std::round(phi / step) * step);
    }
    return out;
}

} // namespace nffbeam
