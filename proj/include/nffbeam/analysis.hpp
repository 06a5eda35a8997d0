// SPDX-License-Identifier: Apache-2.0
//
// Focal metrics over field maps plus the method comparisons and steering
// sweeps built on them. Pure post-processing over immutable inputs.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "nffbeam/angles.hpp"
#include "nffbeam/errors.hpp"
#include "nffbeam/field_engine.hpp"
#include "nffbeam/geometry.hpp"
#include "nffbeam/propagation.hpp"
#include "nffbeam/synthesis.hpp"

namespace nffbeam {

/// Normalized TR and ray-optic phase sets must agree to this tolerance;
/// the constant phase offset between the methods cancels exactly.
inline constexpr double tr_ray_optic_phase_tolerance = 1e-9; // rad

struct Peak {
    std::size_t index = 0;
    Vec3 position;
    double magnitude = 0.0;
};

/// Grid point of maximum |E|; ties break to the smallest scan index so the
/// result is independent of evaluation order.
inline Peak find_peak(const FieldMap& map) {
    if (map.values.empty()) {
        throw InvalidInputError("find_peak precondition: non-empty field map");
    }
    std::size_t best = 0;
    double best_mag = std::abs(map.values[0]);
    for (std::size_t i = 1; i < map.values.size(); ++i) {
        const double mag = std::abs(map.values[i]);
        if (mag > best_mag) {
            best = i;
            best_mag = mag;
        }
    }
    return Peak{best, map.grid.point(best), best_mag};
}

/// A -3 dB extent along one grid axis. `truncated` marks contours that
/// exit the grid (the width then covers only what the map shows).
struct AxisWidth {
    double width = 0.0;
    bool truncated = false;

    friend bool operator==(const AxisWidth&, const AxisWidth&) = default;
};

struct SpotSize {
    std::optional<AxisWidth> axial;   // along z
    std::optional<AxisWidth> lateral; // along the transverse plane axis
};

namespace detail {

inline AxisWidth measure_axis_width(const FieldMap& map, const Peak& peak, std::size_t axis) {
    const auto& grid = map.grid;
    const auto idx = grid.decompose(peak.index);
    const std::size_t n = grid.samples[axis];
    const double step = grid.step(axis);
    std::size_t stride = 1;
    for (std::size_t a = 0; a < axis; ++a) {
        stride *= grid.samples[a];
    }
    const std::size_t base = peak.index - idx[axis] * stride;
    auto mag_at = [&](std::size_t k) { return std::abs(map.values[base + k * stride]); };

    const double threshold = peak.magnitude / std::sqrt(2.0);
    const std::size_t peak_k = idx[axis];

    bool truncated = false;

    // Walk right until |E| drops below the threshold, interpolating the
    // crossing between the bracketing samples.
    double right_units = static_cast<double>(n - 1 - peak_k);
    {
        double prev = mag_at(peak_k);
        bool crossed = false;
        for (std::size_t k = peak_k + 1; k < n; ++k) {
            const double cur = mag_at(k);
            if (cur < threshold) {
                const double frac = (prev - threshold) / (prev - cur);
                right_units = static_cast<double>(k - 1 - peak_k) + frac;
                crossed = true;
                break;
            }
            prev = cur;
        }
        if (!crossed) {
            truncated = true;
        }
    }

    double left_units = static_cast<double>(peak_k);
    {
        double prev = mag_at(peak_k);
        bool crossed = false;
        for (std::size_t k = peak_k; k-- > 0;) {
            const double cur = mag_at(k);
            if (cur < threshold) {
                const double frac = (prev - threshold) / (prev - cur);
                left_units = static_cast<double>(peak_k - 1 - k) + frac;
                crossed = true;
                break;
            }
            prev = cur;
        }
        if (!crossed) {
            truncated = true;
        }
    }

    // Grid-resolution floor: a sub-step spike cannot be resolved below one
    // step, so reported widths never drop under it.
    const double width = std::max((left_units + right_units) * step, step);
    return AxisWidth{width, truncated};
}

} // namespace detail

/// Width of the contiguous region around the peak where |E| >= peak/sqrt(2),
/// per measurable axis. Axial-line maps carry no lateral width.
inline SpotSize spot_size(const FieldMap& map, const Peak& peak) {
    if (map.grid.kind == GridKind::Box) {
        throw InvalidInputError("spot_size precondition: map must be a plane-cut or axial-line");
    }
    if (peak.index >= map.values.size()) {
        throw InvalidInputError("spot_size precondition: peak from find_peak on the same map");
    }
    SpotSize out;
    if (map.grid.kind == GridKind::AxialLine) {
        out.axial = detail::measure_axis_width(map, peak, 0);
    } else {
        out.lateral = detail::measure_axis_width(map, peak, 0);
        out.axial = detail::measure_axis_width(map, peak, 1);
    }
    return out;
}

/// Spread (max-min over branch choices) of the per-element contribution
/// phases at the target, using phase-center semantics. Time-reversal
/// excitations drive this to zero: every contribution lands at -pi/2.
inline double phase_alignment_check(const ArrayLayout& layout, const ExcitationSet& exc,
                                    const FocalTarget& target, const FrequencySpec& freq) {
    if (exc.size() != layout.n_columns) {
        throw InvalidInputError("phase_alignment_check precondition: excitation size matches "
                                "layout");
    }
    std::vector<double> contribution_phases;
    contribution_phases.reserve(layout.n_columns);
    for (std::size_t m = 0; m < layout.n_columns; ++m) {
        if (exc.amplitudes[m] == 0.0) {
            continue; // no contribution, no phase
        }
        const Complex g = scalar_green(freq.k0, layout.element_centers[m], target.r_s);
        const Complex contribution = std::polar(exc.amplitudes[m], exc.phases[m]) * g;
        contribution_phases.push_back(phase_of(contribution));
    }
    return circular_spread(contribution_phases);
}

/// Focal metrics for one method on one map. focal_shift is measured along
/// the aperture-center-to-target ray, positive toward the aperture.
struct FocalReport {
    std::string method;
    Vec3 peak_position;
    double peak_magnitude = 0.0;
    std::optional<AxisWidth> axial_width_3db;
    std::optional<AxisWidth> lateral_width_3db;
    double focal_shift = 0.0;      // m
    double alignment_spread = 0.0; // rad
};

inline FocalReport make_focal_report(const FieldMap& map, const ArrayLayout& layout,
                                     const ExcitationSet& exc, const FocalTarget& target,
                                     const FrequencySpec& freq) {
    const Peak peak = find_peak(map);
    FocalReport report;
    report.method = map.meta.method;
    report.peak_position = peak.position;
    report.peak_magnitude = peak.magnitude;
    if (map.grid.kind != GridKind::Box) {
        const SpotSize spot = spot_size(map, peak);
        report.axial_width_3db = spot.axial;
        report.lateral_width_3db = spot.lateral;
    }
    const double target_range = norm(target.r_s);
    const Vec3 u = target.r_s * (1.0 / target_range);
    report.focal_shift = target_range - dot(u, peak.position);
    report.alignment_spread = phase_alignment_check(layout, exc, target, freq);
    return report;
}

struct PairwiseDelta {
    std::string method_a;
    std::string method_b;
    double max_normalized_phase_delta = 0.0; // rad
    double peak_position_delta = 0.0;        // m
    double peak_magnitude_delta_rel = 0.0;
};

struct MethodOutcome {
    ExcitationSet excitation;
    FieldMap map;
    FocalReport report;
};

/// Side-by-side run of the three synthesis methods on one scenario, with
/// the recorded consistency checks: (i) TR and ray-optic normalized
/// phases agree, (ii) the TR peak is not farther than the far-field one,
/// (iii) the TR peak magnitude is at least the far-field one.
struct ComparisonReport {
    std::vector<MethodOutcome> methods; // TR, ray-optic, far-field
    std::vector<PairwiseDelta> deltas;  // each unordered pair once
    bool tr_matches_ray_optic = false;
    bool tr_peak_not_farther_than_far_field = false;
    bool tr_peak_magnitude_at_least_far_field = false;
};

inline double max_normalized_phase_delta(const ExcitationSet& a, const ExcitationSet& b) {
    if (a.size() != b.size() || a.size() == 0) {
        throw InvalidInputError("phase delta requires equally sized non-empty sets");
    }
    const ExcitationSet na = normalize_phases(a, 0);
    const ExcitationSet nb = normalize_phases(b, 0);
    double max_delta = 0.0;
    for (std::size_t i = 0; i < na.size(); ++i) {
        max_delta = std::max(max_delta, angle_delta(na.phases[i], nb.phases[i]));
    }
    return max_delta;
}

inline ComparisonReport compare_methods(const ArrayLayout& layout, const FocalTarget& target,
                                        const FrequencySpec& freq, const ElementModel& model,
                                        const ObservationGrid& grid,
                                        std::optional<int> quantization_bits = {}) {
    ComparisonReport cmp;
    for (const Method method : {Method::TimeReversal, Method::RayOptic, Method::FarField}) {
        ExcitationSet exc = synthesize(method, layout, target, freq);
        if (quantization_bits) {
            exc = quantize_phases(exc, *quantization_bits);
        }
        FieldMap map = total_field(layout, exc, model, grid, freq);
        FocalReport report = make_focal_report(map, layout, exc, target, freq);
        cmp.methods.push_back({std::move(exc), std::move(map), std::move(report)});
    }

    for (std::size_t i = 0; i < cmp.methods.size(); ++i) {
        for (std::size_t j = i + 1; j < cmp.methods.size(); ++j) {
            const auto& a = cmp.methods[i];
            const auto& b = cmp.methods[j];
            PairwiseDelta delta;
            delta.method_a = a.report.method;
            delta.method_b = b.report.method;
            delta.max_normalized_phase_delta =
                max_normalized_phase_delta(a.excitation, b.excitation);
            delta.peak_position_delta = distance(a.report.peak_position, b.report.peak_position);
            const double mag_hi = std::max(a.report.peak_magnitude, b.report.peak_magnitude);
            delta.peak_magnitude_delta_rel =
                mag_hi > 0.0
                    ? std::abs(a.report.peak_magnitude - b.report.peak_magnitude) / mag_hi
                    : 0.0;
            cmp.deltas.push_back(delta);
        }
    }

    const auto& tr = cmp.methods[0].report;
    const auto& ff = cmp.methods[2].report;
    cmp.tr_matches_ray_optic =
        cmp.deltas[0].max_normalized_phase_delta < tr_ray_optic_phase_tolerance;
    cmp.tr_peak_not_farther_than_far_field = tr.peak_position.z <= ff.peak_position.z;
    cmp.tr_peak_magnitude_at_least_far_field = tr.peak_magnitude >= ff.peak_magnitude;
    return cmp;
}

struct SteerResult {
    Vec3 target;
    ExcitationSet excitation;
    FieldMap map;
    FocalReport report;
    double lateral_peak_error = 0.0; // m, |(peak x,y) - (target x,y)|
};

/// Time-reversal synthesis and focal metrics for each steering target.
inline std::vector<SteerResult> steer_sweep(const ArrayLayout& layout,
                                            const std::vector<FocalTarget>& targets,
                                            const FrequencySpec& freq, const ElementModel& model,
                                            const ObservationGrid& grid,
                                            std::optional<int> quantization_bits = {}) {
    if (targets.empty()) {
        throw InvalidInputError("steer_sweep precondition: at least one target");
    }
    std::vector<SteerResult> results;
    results.reserve(targets.size());
    for (const auto& target : targets) {
        ExcitationSet exc = tr_phases(layout, target, freq);
        if (quantization_bits) {
            exc = quantize_phases(exc, *quantization_bits);
        }
        FieldMap map = total_field(layout, exc, model, grid, freq);
        FocalReport report = make_focal_report(map, layout, exc, target, freq);
        const double dx = report.peak_position.x - target.r_s.x;
        const double dy = report.peak_position.y - target.r_s.y;
        results.push_back({target.r_s, std::move(exc), std::move(map), std::move(report),
                           std::hypot(dx, dy)});
    }
    return results;
}

} // namespace nffbeam
