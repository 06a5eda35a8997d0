// SPDX-License-Identifier: Apache-2.0
//
// Semi-analytic field engine: superposes element contributions on
// observation grids. Grid evaluation is data-parallel over points with a
// fixed per-point summation order (elements ascending, slots ascending,
// pairwise reduction with a fixed tree), so results are bit-identical
// regardless of the worker count.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "nffbeam/angles.hpp"
#include "nffbeam/errors.hpp"
#include "nffbeam/geometry.hpp"
#include "nffbeam/propagation.hpp"
#include "nffbeam/synthesis.hpp"

namespace nffbeam {

/// Radiating element model. The slot-subarray kind (default) sums the
/// column's slot sources with equal in-phase weights 1/n_slots and
/// captures the H-plane pre-focusing of a slotted column; isotropic is
/// retained for exact alignment invariants. cosine-q and slot-subarray
/// radiate into the forward hemisphere only; isotropic is intentionally
/// unclamped.
struct ElementModel {
    enum class Kind { Isotropic, CosineQ, SlotSubarray };

    Kind kind = Kind::SlotSubarray;
    double q = 1.0; // cosine exponent, used by the CosineQ kind

    static ElementModel isotropic() { return {Kind::Isotropic, 1.0}; }
    static ElementModel cosine_q(double q) {
        if (!std::isfinite(q) || q < 0.0) {
            throw InvalidInputError("ElementModel invariant: q >= 0");
        }
        return {Kind::CosineQ, q};
    }
    static ElementModel slot_subarray() { return {Kind::SlotSubarray, 1.0}; }

    friend bool operator==(const ElementModel&, const ElementModel&) = default;
};

struct FieldMapMeta {
    double frequency_hz = 0.0;
    std::string method;
    std::string layout_hash;

    friend bool operator==(const FieldMapMeta&, const FieldMapMeta&) = default;
};

/// Complex field samples in grid scan order (fastest axis first).
struct FieldMap {
    ObservationGrid grid;
    std::vector<Complex> values;
    FieldMapMeta meta;

    friend bool operator==(const FieldMap&, const FieldMap&) = default;
};

namespace detail {

inline std::atomic<std::uint64_t>& kernel_eval_counter() {
    static std::atomic<std::uint64_t> counter{0};
    return counter;
}

/// Fixed-tree pairwise reduction; the same tree for every evaluation of a
/// given length keeps parallel runs bit-identical.
inline Complex pairwise_sum(std::span<const Complex> xs) {
    const std::size_t n = xs.size();
    if (n == 0) {
        return {};
    }
    if (n <= 4) {
        Complex s = xs[0];
        for (std::size_t i = 1; i < n; ++i) {
            s += xs[i];
        }
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Contribution of element n with a precomputed complex weight
/// a_n e^{j phi_n}. `slot_scratch` is reused across points by the caller.
inline Complex weighted_contribution(const ArrayLayout& layout, std::size_t n, Complex weight,
                                     const ElementModel& model, const Vec3& r_obs, double k0,
                                     std::vector<Complex>& slot_scratch,
                                     std::uint64_t& kernel_evals) {
    switch (model.kind) {
    case ElementModel::Kind::Isotropic: {
        const Vec3 rel = r_obs - layout.element_centers[n];
        const double d = norm(rel);
        check_standoff(d);
        ++kernel_evals;
        return weight * green_at_distance(k0, d);
    }
    case ElementModel::Kind::CosineQ: {
        const Vec3 rel = r_obs - layout.element_centers[n];
        const double d = norm(rel);
        check_standoff(d);
        const double cos_theta = rel.z / d;
        if (cos_theta <= 0.0) {
            return {};
        }
        ++kernel_evals;
        return weight * (green_at_distance(k0, d) * std::pow(cos_theta, model.q));
    }
    case ElementModel::Kind::SlotSubarray: {
        const auto& slots = layout.slot_centers[n];
        slot_scratch.clear();
        for (const auto& s : slots) {
            const Vec3 rel = r_obs - s;
            const double d = norm(rel);
            check_standoff(d);
            if (rel.z <= 0.0) {
                slot_scratch.push_back({});
                continue;
            }
            ++kernel_evals;
            slot_scratch.push_back(green_at_distance(k0, d));
        }
        const Complex sum = pairwise_sum(slot_scratch);
        return weight * (sum * (1.0 / static_cast<double>(slots.size())));
    }
    }
    throw InvalidInputError("element_contribution: unknown element model kind");
}

/// Worker count: NFFBEAM_THREADS caps the pool (0 or unset = hardware
/// auto), and tiny grids run single-threaded.
inline unsigned resolve_worker_count(std::size_t n_points) {
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("NFFBEAM_THREADS")) {
        char* end = nullptr;
        const unsigned long parsed = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && parsed > 0) {
            workers = static_cast<unsigned>(std::min(parsed, 256ul));
        }
    }
    constexpr std::size_t min_points_per_worker = 64;
    const std::size_t cap = std::max<std::size_t>(1, n_points / min_points_per_worker);
    return static_cast<unsigned>(std::min<std::size_t>(workers, cap));
}

} // namespace detail

/// Kernel evaluations performed by the engine since the last reset.
/// Diagnostic hook for performance accounting.
inline std::uint64_t kernel_eval_count() {
    return detail::kernel_eval_counter().load(std::memory_order_relaxed);
}

inline void reset_kernel_eval_count() {
    detail::kernel_eval_counter().store(0, std::memory_order_relaxed);
}

/// Field of element n at a single observation point.
inline Complex element_contribution(const ArrayLayout& layout, std::size_t n,
                                    const ExcitationSet& exc, const ElementModel& model,
                                    const Vec3& r_obs, const FrequencySpec& freq) {
    if (n >= layout.n_columns) {
        throw InvalidInputError("element_contribution precondition: element index in range");
    }
    if (exc.size() != layout.n_columns || exc.amplitudes.size() != layout.n_columns) {
        throw InvalidInputError("element_contribution precondition: excitation size matches "
                                "layout (ExcitationSet invariant)");
    }
    const Complex weight = std::polar(exc.amplitudes[n], exc.phases[n]);
    std::vector<Complex> slot_scratch;
    std::uint64_t evals = 0;
    const Complex value =
        detail::weighted_contribution(layout, n, weight, model, r_obs, freq.k0, slot_scratch, evals);
    detail::kernel_eval_counter().fetch_add(evals, std::memory_order_relaxed);
    return value;
}

/// Total complex field on an observation grid: the pointwise sum of all
/// element contributions. Deterministic: bit-identical output for any
/// worker count. A standoff violation reports the smallest offending grid
/// point index.
inline FieldMap total_field(const ArrayLayout& layout, const ExcitationSet& exc,
                            const ElementModel& model, const ObservationGrid& grid,
                            const FrequencySpec& freq) {
    if (exc.size() != layout.n_columns || exc.amplitudes.size() != layout.n_columns) {
        throw InvalidInputError(
            "total_field precondition: excitation size matches layout (ExcitationSet invariant)");
    }
    const std::size_t n_points = grid.size();
    if (n_points == 0) {
        throw InvalidInputError("total_field precondition: non-empty grid");
    }

    std::vector<Complex> weights;
    weights.reserve(layout.n_columns);
    for (std::size_t m = 0; m < layout.n_columns; ++m) {
        weights.push_back(std::polar(exc.amplitudes[m], exc.phases[m]));
    }

    std::vector<Complex> values(n_points);

    struct Offense {
        std::size_t index;
        std::exception_ptr error;
    };

    const unsigned workers = detail::resolve_worker_count(n_points);
    std::vector<std::optional<Offense>> offenses(workers);

    auto eval_range = [&](unsigned worker, std::size_t begin, std::size_t end) {
        std::vector<Complex> contributions(layout.n_columns);
        std::vector<Complex> slot_scratch;
        std::uint64_t evals = 0;
        for (std::size_t i = begin; i < end; ++i) {
            const Vec3 p = grid.point(i);
            try {
                for (std::size_t m = 0; m < layout.n_columns; ++m) {
                    contributions[m] = detail::weighted_contribution(
                        layout, m, weights[m], model, p, freq.k0, slot_scratch, evals);
                }
            } catch (...) {
                offenses[worker] = Offense{i, std::current_exception()};
                break;
            }
            values[i] = detail::pairwise_sum(contributions);
        }
        detail::kernel_eval_counter().fetch_add(evals, std::memory_order_relaxed);
    };

    if (workers <= 1) {
        eval_range(0, 0, n_points);
    } else {
        const std::size_t chunk = (n_points + workers - 1) / workers;
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min<std::size_t>(w * chunk, n_points);
            const std::size_t end = std::min<std::size_t>(begin + chunk, n_points);
            pool.emplace_back(eval_range, w, begin, end);
        }
    } // jthreads join on scope exit

    // Report the smallest offending index so the error is independent of
    // the worker partition.
    const Offense* first = nullptr;
    for (const auto& o : offenses) {
        if (o && (!first || o->index < first->index)) {
            first = &*o;
        }
    }
    if (first) {
        try {
            std::rethrow_exception(first->error);
        } catch (const SingularityError& err) {
            throw SingularityError("grid point " + std::to_string(first->index) + ": " +
                                   err.what());
        }
    }

    return FieldMap{grid, std::move(values),
                    FieldMapMeta{freq.f, std::string(method_name(exc.method)),
                                 layout_hash(layout)}};
}

/// |E| along a z-directed line through lateral offset (x, y).
inline FieldMap axial_profile(const ArrayLayout& layout, const ExcitationSet& exc,
                              const ElementModel& model, const FrequencySpec& freq,
                              double z_min, double z_max, std::size_t n_samples,
                              double offset_x = 0.0, double offset_y = 0.0) {
    const auto grid = ObservationGrid::axial_line(z_min, z_max, n_samples, offset_x, offset_y);
    return total_field(layout, exc, model, grid, freq);
}

/// Principal-plane map through the array center.
inline FieldMap plane_cut(const ArrayLayout& layout, const ExcitationSet& exc,
                          const ElementModel& model, const FrequencySpec& freq,
                          PrincipalPlane plane, double transverse_extent, double z_min,
                          double z_max, std::size_t transverse_samples, std::size_t z_samples) {
    const auto grid = ObservationGrid::plane_cut(plane, transverse_extent, z_min, z_max,
                                                 transverse_samples, z_samples);
    return total_field(layout, exc, model, grid, freq);
}

} // namespace nffbeam
