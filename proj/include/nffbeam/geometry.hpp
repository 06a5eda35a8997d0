// SPDX-License-Identifier: Apache-2.0
//
// Operating frequency, array lattice, and observation grids. All spatial
// bookkeeping lives here; every type is immutable after construction and
// safe to share across concurrent workers.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "nffbeam/angles.hpp"
#include "nffbeam/errors.hpp"
#include "nffbeam/vec3.hpp"

namespace nffbeam {

inline constexpr double speed_of_light = 299792458.0;      // m/s
inline constexpr double vacuum_permeability = 4.0e-7 * pi; // H/m

/// Minimum source-observation separation; closer pairs raise
/// SingularityError instead of evaluating the diverging kernel.
inline constexpr double geometric_standoff = 1e-6; // m

/// Operating frequency with its derived spectral quantities.
struct FrequencySpec {
    double f = 0.0;       // Hz
    double lambda0 = 0.0; // m
    double k0 = 0.0;      // rad/m
    double omega = 0.0;   // rad/s
    double c = speed_of_light;
    double mu0 = vacuum_permeability;

    friend constexpr bool operator==(const FrequencySpec&, const FrequencySpec&) = default;
};

inline FrequencySpec build_frequency(double f_hz) {
    if (!std::isfinite(f_hz) || f_hz <= 0.0) {
        throw InvalidInputError("build_frequency: frequency must be positive and finite "
                                "(FrequencySpec invariant: f > 0)");
    }
    FrequencySpec spec;
    spec.f = f_hz;
    spec.lambda0 = speed_of_light / f_hz;
    spec.k0 = two_pi / spec.lambda0;
    spec.omega = two_pi * f_hz;
    return spec;
}

/// One slotted-waveguide column: 10 resonant slots on a 32 mm pitch cut
/// into a 40.4 mm x 19.8 mm guide. Only n_slots and slot_pitch drive the
/// point-source geometry; the remaining dimensions are carried as
/// fabrication metadata.
struct SlotColumnSpec {
    std::size_t n_slots = 10;
    double slot_pitch = 0.032;      // m, centre-to-centre along the guide axis
    double slot_length = 0.0224;    // m
    double slot_width = 0.004;      // m
    double guide_width_a = 0.0404;  // m, broad wall
    double guide_height_b = 0.0198; // m, narrow wall
    double end_gap = 0.010;         // m, last slot to short wall
    double sidewall_offset = 0.011; // m, slot centre to side wall

    friend constexpr bool operator==(const SlotColumnSpec&, const SlotColumnSpec&) = default;
};

inline void validate(const SlotColumnSpec& spec) {
    if (spec.n_slots < 1) {
        throw InvalidInputError("SlotColumnSpec invariant: n_slots >= 1");
    }
    const std::array<std::pair<const char*, double>, 7> lengths{{
        {"slot_pitch", spec.slot_pitch},
        {"slot_length", spec.slot_length},
        {"slot_width", spec.slot_width},
        {"guide_width_a", spec.guide_width_a},
        {"guide_height_b", spec.guide_height_b},
        {"end_gap", spec.end_gap},
        {"sidewall_offset", spec.sidewall_offset},
    }};
    for (const auto& [name, value] : lengths) {
        if (!std::isfinite(value) || value <= 0.0) {
            throw InvalidInputError(std::string("SlotColumnSpec invariant: ") + name + " > 0");
        }
    }
    if (spec.slot_length >= spec.guide_width_a) {
        throw InvalidInputError("SlotColumnSpec invariant: slot_length < guide_width_a");
    }
}

/// Phased-array lattice: n_columns waveguide columns stacked along y, each
/// with a line of slots along x. The layout centroid coincides with the
/// coordinate origin by construction; element phase centers are the
/// centroids of their slot lines.
struct ArrayLayout {
    std::size_t n_columns = 0;
    double column_pitch = 0.0; // m, stacking pitch along y
    SlotColumnSpec column_spec;
    std::vector<Vec3> element_centers;            // one per column
    std::vector<std::vector<Vec3>> slot_centers;  // per column, n_slots entries

    friend bool operator==(const ArrayLayout&, const ArrayLayout&) = default;
};

inline ArrayLayout build_layout(std::size_t n_columns, double column_pitch,
                                const SlotColumnSpec& spec = {}) {
    if (n_columns < 1) {
        throw InvalidInputError("build_layout precondition: n_columns >= 1");
    }
    if (!std::isfinite(column_pitch) || column_pitch <= 0.0) {
        throw InvalidInputError("build_layout precondition: column_pitch > 0");
    }
    validate(spec);

    ArrayLayout layout;
    layout.n_columns = n_columns;
    layout.column_pitch = column_pitch;
    layout.column_spec = spec;
    layout.element_centers.reserve(n_columns);
    layout.slot_centers.reserve(n_columns);

    const auto ns = static_cast<std::ptrdiff_t>(spec.n_slots);
    const auto nc = static_cast<std::ptrdiff_t>(n_columns);
    for (std::ptrdiff_t m = 0; m < nc; ++m) {
        // Integer numerators keep mirrored columns exactly symmetric.
        const double y = static_cast<double>(2 * m - (nc - 1)) * column_pitch / 2.0;
        layout.element_centers.push_back({0.0, y, 0.0});
        std::vector<Vec3> slots;
        slots.reserve(spec.n_slots);
        for (std::ptrdiff_t i = 0; i < ns; ++i) {
            const double x = static_cast<double>(2 * i - (ns - 1)) * spec.slot_pitch / 2.0;
            slots.push_back({x, y, 0.0});
        }
        layout.slot_centers.push_back(std::move(slots));
    }
    return layout;
}

/// Conventional far-field boundary 2 D^2 / lambda, with D the largest
/// aperture extent (max over the slot-line x-span and the column y-span).
/// Targets below this distance sit in the radiating near field.
inline double fraunhofer_distance(const ArrayLayout& layout, const FrequencySpec& freq) {
    if (layout.element_centers.empty() || layout.slot_centers.empty()) {
        throw InvalidInputError("fraunhofer_distance precondition: non-empty layout");
    }
    double x_min = layout.slot_centers.front().front().x;
    double x_max = x_min;
    for (const auto& column : layout.slot_centers) {
        for (const auto& s : column) {
            x_min = std::min(x_min, s.x);
            x_max = std::max(x_max, s.x);
        }
    }
    double y_min = layout.element_centers.front().y;
    double y_max = y_min;
    for (const auto& p : layout.element_centers) {
        y_min = std::min(y_min, p.y);
        y_max = std::max(y_max, p.y);
    }
    const double d = std::max(x_max - x_min, y_max - y_min);
    return 2.0 * d * d / freq.lambda0;
}

/// FNV-1a over the layout geometry; identifies the lattice in output
/// metadata so field maps can be matched to the layout that produced them.
inline std::string layout_hash(const ArrayLayout& layout) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix_bytes = [&h](const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ull;
        }
    };
    auto mix_u64 = [&](std::uint64_t v) { mix_bytes(&v, sizeof(v)); };
    auto mix_f64 = [&](double v) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof(bits));
        mix_u64(bits);
    };
    auto mix_point = [&](const Vec3& p) {
        mix_f64(p.x);
        mix_f64(p.y);
        mix_f64(p.z);
    };

    mix_u64(layout.n_columns);
    mix_f64(layout.column_pitch);
    mix_u64(layout.column_spec.n_slots);
    mix_f64(layout.column_spec.slot_pitch);
    mix_f64(layout.column_spec.slot_length);
    mix_f64(layout.column_spec.slot_width);
    mix_f64(layout.column_spec.guide_width_a);
    mix_f64(layout.column_spec.guide_height_b);
    mix_f64(layout.column_spec.end_gap);
    mix_f64(layout.column_spec.sidewall_offset);
    for (const auto& p : layout.element_centers) {
        mix_point(p);
    }
    for (const auto& column : layout.slot_centers) {
        for (const auto& s : column) {
            mix_point(s);
        }
    }

    static constexpr char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

enum class GridKind { AxialLine, PlaneCut, Box };

enum class PrincipalPlane { E, H }; // E-plane = y-z cut, H-plane = x-z cut

/// Structured observation grid. Points are visited fastest-axis-first:
/// flat index i maps to (i0, i1, i2) with i0 = i % samples[0] on axis 0.
/// Axes with samples == 1 are unswept and carry zero extent.
struct ObservationGrid {
    GridKind kind = GridKind::Box;
    Vec3 origin;                            // corner with minimal axis coordinates
    std::array<Vec3, 3> axes{};             // unit direction per axis
    std::array<double, 3> extents{};        // total length per axis, m
    std::array<std::size_t, 3> samples{1, 1, 1};

    [[nodiscard]] std::size_t size() const { return samples[0] * samples[1] * samples[2]; }

    [[nodiscard]] double step(std::size_t axis) const {
        return samples[axis] > 1 ? extents[axis] / static_cast<double>(samples[axis] - 1) : 0.0;
    }

    [[nodiscard]] std::array<std::size_t, 3> decompose(std::size_t flat) const {
        return {flat % samples[0], (flat / samples[0]) % samples[1],
                flat / (samples[0] * samples[1])};
    }

    [[nodiscard]] Vec3 point(std::size_t flat) const {
        const auto idx = decompose(flat);
        Vec3 p = origin;
        for (std::size_t a = 0; a < 3; ++a) {
            if (samples[a] > 1) {
                const double t = extents[a] * static_cast<double>(idx[a]) /
                                 static_cast<double>(samples[a] - 1);
                p = p + axes[a] * t;
            }
        }
        return p;
    }

    friend bool operator==(const ObservationGrid&, const ObservationGrid&) = default;

    static ObservationGrid axial_line(double z_min, double z_max, std::size_t n_samples,
                                      double offset_x = 0.0, double offset_y = 0.0) {
        if (!std::isfinite(z_min) || z_min <= 0.0) {
            throw InvalidInputError("axial-line grid precondition: z_min > 0");
        }
        if (!std::isfinite(z_max) || z_max <= z_min) {
            throw InvalidInputError("ObservationGrid invariant: extents > 0 (z_max > z_min)");
        }
        if (n_samples < 2) {
            throw InvalidInputError(
                "ObservationGrid invariant: sample counts >= 2 per swept axis");
        }
        ObservationGrid g;
        g.kind = GridKind::AxialLine;
        g.origin = {offset_x, offset_y, z_min};
        g.axes = {Vec3{0.0, 0.0, 1.0}, Vec3{}, Vec3{}};
        g.extents = {z_max - z_min, 0.0, 0.0};
        g.samples = {n_samples, 1, 1};
        return g;
    }

    /// Principal-plane cut through the array center: transverse axis
    /// (y for E-plane, x for H-plane) is the fast axis, z the slow one.
    static ObservationGrid plane_cut(PrincipalPlane plane, double transverse_extent,
                                     double z_min, double z_max, std::size_t transverse_samples,
                                     std::size_t z_samples) {
        if (!std::isfinite(transverse_extent) || transverse_extent <= 0.0) {
            throw InvalidInputError("ObservationGrid invariant: extents > 0 (transverse)");
        }
        if (!std::isfinite(z_min) || z_min < 0.0 || !std::isfinite(z_max) || z_max <= z_min) {
            throw InvalidInputError("plane-cut grid precondition: 0 <= z_min < z_max");
        }
        if (transverse_samples < 2 || z_samples < 2) {
            throw InvalidInputError(
                "ObservationGrid invariant: sample counts >= 2 per swept axis");
        }
        const Vec3 trans =
            plane == PrincipalPlane::E ? Vec3{0.0, 1.0, 0.0} : Vec3{1.0, 0.0, 0.0};
        ObservationGrid g;
        g.kind = GridKind::PlaneCut;
        g.origin = trans * (-transverse_extent / 2.0) + Vec3{0.0, 0.0, z_min};
        g.axes = {trans, Vec3{0.0, 0.0, 1.0}, Vec3{}};
        g.extents = {transverse_extent, z_max - z_min, 0.0};
        g.samples = {transverse_samples, z_samples, 1};
        return g;
    }

    /// Axis-aligned box (or a degenerate point/line/plane when samples are
    /// 1 along some axes). samples == 1 requires a collapsed axis.
    static ObservationGrid box(const Vec3& min_corner, const Vec3& max_corner,
                               const std::array<std::size_t, 3>& samples) {
        if (!is_finite(min_corner) || !is_finite(max_corner)) {
            throw InvalidInputError("box grid precondition: finite corners");
        }
        const std::array<double, 3> ext{max_corner.x - min_corner.x,
                                        max_corner.y - min_corner.y,
                                        max_corner.z - min_corner.z};
        std::size_t total = 1;
        for (std::size_t a = 0; a < 3; ++a) {
            if (samples[a] < 1) {
                throw InvalidInputError("box grid precondition: samples >= 1 per axis");
            }
            if (samples[a] == 1) {
                if (ext[a] != 0.0) {
                    throw InvalidInputError(
                        "box grid precondition: single-sample axis requires equal corners");
                }
            } else if (ext[a] <= 0.0) {
                throw InvalidInputError("ObservationGrid invariant: extents > 0 per swept axis");
            }
            total *= samples[a];
        }
        if (total < 1) {
            throw InvalidInputError("box grid precondition: at least one point");
        }
        ObservationGrid g;
        g.kind = GridKind::Box;
        g.origin = min_corner;
        g.axes = {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}, Vec3{0.0, 0.0, 1.0}};
        g.extents = ext;
        g.samples = samples;
        return g;
    }

    /// Single observation point.
    static ObservationGrid at_point(const Vec3& p) { return box(p, p, {1, 1, 1}); }
};

/// Desired focal point; must lie in front of the aperture.
struct FocalTarget {
    Vec3 r_s;

    explicit FocalTarget(const Vec3& p) : r_s(p) {
        if (!is_finite(p)) {
            throw InvalidInputError("FocalTarget precondition: finite coordinates");
        }
        if (!(p.z > 0.0)) {
            throw InvalidInputError("FocalTarget invariant: r_s.z > 0");
        }
    }

    friend bool operator==(const FocalTarget&, const FocalTarget&) = default;
};

} // namespace nffbeam
