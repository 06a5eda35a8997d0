// SPDX-License-Identifier: Apache-2.0
//
// Shared test utilities: independent oracles for field summation and
// phase synthesis, scenario generators, and filesystem scratch space.
// Oracle code deliberately avoids the library's evaluation path (plain
// left-to-right accumulation, inline kernel formula).

#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "nffbeam/analysis.hpp"
#include "nffbeam/field_engine.hpp"
#include "nffbeam/geometry.hpp"
#include "nffbeam/synthesis.hpp"

namespace nffbeam::test {

// ---------------------------------------------------------------------
// Independent field oracle

/// Naive per-point double loop: elements outer, slots inner, plain
/// sequential accumulation, kernel written out longhand.
inline Complex naive_point_field(const ArrayLayout& layout, const ExcitationSet& exc,
                                 const ElementModel& model, const Vec3& obs, double k0) {
    Complex total{0.0, 0.0};
    for (std::size_t m = 0; m < layout.n_columns; ++m) {
        const Complex weight =
            exc.amplitudes[m] * Complex{std::cos(exc.phases[m]), std::sin(exc.phases[m])};
        if (model.kind == ElementModel::Kind::SlotSubarray) {
            Complex slot_sum{0.0, 0.0};
            for (const auto& s : layout.slot_centers[m]) {
                const double dx = obs.x - s.x;
                const double dy = obs.y - s.y;
                const double dz = obs.z - s.z;
                const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
                if (dz <= 0.0) {
                    continue;
                }
                const double mag = 1.0 / (4.0 * pi * d);
                slot_sum += Complex{mag * std::cos(k0 * d), -mag * std::sin(k0 * d)};
            }
            total += weight * slot_sum / static_cast<double>(layout.slot_centers[m].size());
        } else {
            const Vec3& p = layout.element_centers[m];
            const double dx = obs.x - p.x;
            const double dy = obs.y - p.y;
            const double dz = obs.z - p.z;
            const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
            double pattern = 1.0;
            if (model.kind == ElementModel::Kind::CosineQ) {
                const double cos_theta = dz / d;
                pattern = cos_theta > 0.0 ? std::pow(cos_theta, model.q) : 0.0;
            }
            const double mag = pattern / (4.0 * pi * d);
            total += weight * Complex{mag * std::cos(k0 * d), -mag * std::sin(k0 * d)};
        }
    }
    return total;
}

inline std::vector<Complex> naive_field(const ArrayLayout& layout, const ExcitationSet& exc,
                                        const ElementModel& model, const ObservationGrid& grid,
                                        double k0) {
    std::vector<Complex> values;
    values.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values.push_back(naive_point_field(layout, exc, model, grid.point(i), k0));
    }
    return values;
}

// ---------------------------------------------------------------------
// Closed-form synthesis oracles

inline double oracle_tr_phase(double k0, const Vec3& element, const Vec3& target) {
    return wrap_angle(k0 * distance(element, target) - pi / 2.0);
}

inline double oracle_ray_optic_phase(double k0, const Vec3& element, const Vec3& target) {
    return wrap_angle(k0 * distance(element, target));
}

inline double oracle_far_field_phase(double k0, const Vec3& element, const Vec3& target) {
    const Vec3 u = target * (1.0 / norm(target));
    return wrap_angle(-k0 * dot(u, element));
}

// ---------------------------------------------------------------------
// Map comparison

/// Largest ||a|-|b|| over the map, relative to the larger map's peak |E|.
inline double max_magnitude_delta_rel(const std::vector<Complex>& a,
                                      const std::vector<Complex>& b) {
    double scale = 0.0;
    for (const auto& v : a) {
        scale = std::max(scale, std::abs(v));
    }
    for (const auto& v : b) {
        scale = std::max(scale, std::abs(v));
    }
    if (scale == 0.0) {
        return 0.0;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(std::abs(a[i]) - std::abs(b[i])));
    }
    return worst / scale;
}

// ---------------------------------------------------------------------
// Random scenarios

struct RandomScenario {
    ArrayLayout layout;
    FocalTarget target;
};

inline RandomScenario random_scenario(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> columns(2, 16);
    std::uniform_real_distribution<double> lateral(-0.15, 0.15);
    std::uniform_real_distribution<double> depth(0.2, 1.0);
    ArrayLayout layout = build_layout(columns(rng), 0.0208);
    FocalTarget target(Vec3{lateral(rng), lateral(rng), depth(rng)});
    return {std::move(layout), target};
}

inline ExcitationSet random_excitation(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> phase(-pi, pi);
    ExcitationSet exc;
    exc.method = Method::TimeReversal;
    exc.phases.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        exc.phases.push_back(wrap_angle(phase(rng)));
    }
    exc.amplitudes.assign(n, 1.0);
    return exc;
}

// ---------------------------------------------------------------------
// Scratch directories and environment

class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("nffbeam_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void set_thread_env(const char* value) {
    if (value) {
        ::setenv("NFFBEAM_THREADS", value, 1);
    } else {
        ::unsetenv("NFFBEAM_THREADS");
    }
}

} // namespace nffbeam::test
