// SPDX-License-Identifier: Apache-2.0
//
// Scenario execution: one validated config drives the synth/field/
// compare/steer subcommands, writing artifacts plus a summary.json with
// stable key ordering. Every artifact except the summary's timing_ms
// field is byte-stable across runs and worker counts.

#pragma once

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nffbeam/analysis.hpp"
#include "nffbeam/config.hpp"
#include "nffbeam/errors.hpp"
#include "nffbeam/field_engine.hpp"
#include "nffbeam/geometry.hpp"
#include "nffbeam/io.hpp"
#include "nffbeam/synthesis.hpp"
#include "nffbeam/version.hpp"

namespace nffbeam {

enum class Subcommand { Synth, Field, Compare, Steer };

inline std::string_view subcommand_name(Subcommand s) {
    switch (s) {
    case Subcommand::Synth: return "synth";
    case Subcommand::Field: return "field";
    case Subcommand::Compare: return "compare";
    case Subcommand::Steer: return "steer";
    }
    return "unknown";
}

struct ComparisonSummary {
    std::vector<PairwiseDelta> deltas;
    bool tr_matches_ray_optic = false;
    bool tr_peak_not_farther_than_far_field = false;
    bool tr_peak_magnitude_at_least_far_field = false;
};

struct SummaryEntry {
    FocalReport report;
    std::optional<Vec3> target;                      // steer entries
    std::optional<double> lateral_peak_error;        // steer entries, m
};

struct RunSummary {
    std::string tool;
    std::string subcommand;
    ScenarioConfig config;
    std::string layout_hash;
    double fraunhofer_distance_m = 0.0;
    std::vector<SummaryEntry> reports;
    std::optional<ComparisonSummary> comparison;
    std::vector<std::string> artifacts; // paths relative to the output directory
    double timing_ms = 0.0;
};

namespace detail {

inline OrderedJson focal_report_json(const FocalReport& r) {
    OrderedJson j;
    j["method"] = r.method;
    j["peak_position_m"] = {r.peak_position.x, r.peak_position.y, r.peak_position.z};
    j["peak_magnitude"] = r.peak_magnitude;
    if (r.axial_width_3db) {
        j["axial_width_3db_m"] = r.axial_width_3db->width;
        j["axial_width_truncated"] = r.axial_width_3db->truncated;
    } else {
        j["axial_width_3db_m"] = nullptr;
        j["axial_width_truncated"] = nullptr;
    }
    if (r.lateral_width_3db) {
        j["lateral_width_3db_m"] = r.lateral_width_3db->width;
        j["lateral_width_truncated"] = r.lateral_width_3db->truncated;
    } else {
        j["lateral_width_3db_m"] = nullptr;
        j["lateral_width_truncated"] = nullptr;
    }
    j["focal_shift_m"] = r.focal_shift;
    j["alignment_spread_rad"] = r.alignment_spread;
    return j;
}

inline OrderedJson comparison_json(const ComparisonSummary& c) {
    OrderedJson deltas = OrderedJson::array();
    for (const auto& d : c.deltas) {
        deltas.push_back({{"methods", {d.method_a, d.method_b}},
                          {"max_normalized_phase_delta_rad", d.max_normalized_phase_delta},
                          {"peak_position_delta_m", d.peak_position_delta},
                          {"peak_magnitude_delta_rel", d.peak_magnitude_delta_rel}});
    }
    OrderedJson j;
    j["checks"] = {{"tr_matches_ray_optic", c.tr_matches_ray_optic},
                   {"tr_peak_not_farther_than_far_field", c.tr_peak_not_farther_than_far_field},
                   {"tr_peak_magnitude_at_least_far_field",
                    c.tr_peak_magnitude_at_least_far_field}};
    j["deltas"] = std::move(deltas);
    return j;
}

inline OrderedJson excitation_json(const ExcitationSet& exc,
                                   std::optional<int> quantization_bits) {
    OrderedJson j;
    j["method"] = std::string(method_name(exc.method));
    j["phases_rad"] = exc.phases;
    j["amplitudes"] = exc.amplitudes;
    if (exc.reference_index) {
        j["reference_index"] = *exc.reference_index;
    } else {
        j["reference_index"] = nullptr;
    }
    if (quantization_bits) {
        j["quantization_bits"] = *quantization_bits;
    } else {
        j["quantization_bits"] = nullptr;
    }
    return j;
}

} // namespace detail

/// Summary serialization; timing_ms is the one field that varies between
/// byte-identical runs, and it is always the last key.
inline detail::OrderedJson summary_to_json(const RunSummary& summary,
                                           bool include_timing = true) {
    detail::OrderedJson j;
    j["tool"] = summary.tool;
    j["subcommand"] = summary.subcommand;
    j["config"] = detail::OrderedJson::parse(print_config(summary.config));
    j["layout_hash"] = summary.layout_hash;
    j["fraunhofer_distance_m"] = summary.fraunhofer_distance_m;
    detail::OrderedJson reports = detail::OrderedJson::array();
    for (const auto& entry : summary.reports) {
        detail::OrderedJson r = detail::focal_report_json(entry.report);
        if (entry.target) {
            r["target_m"] = {entry.target->x, entry.target->y, entry.target->z};
        }
        if (entry.lateral_peak_error) {
            r["lateral_peak_error_m"] = *entry.lateral_peak_error;
        }
        reports.push_back(std::move(r));
    }
    j["reports"] = std::move(reports);
    if (summary.comparison) {
        j["comparison"] = detail::comparison_json(*summary.comparison);
    } else {
        j["comparison"] = nullptr;
    }
    j["artifacts"] = summary.artifacts;
    if (include_timing) {
        j["timing_ms"] = summary.timing_ms;
    }
    return j;
}

inline void write_summary(const RunSummary& summary, const std::filesystem::path& path) {
    write_text_file(path, summary_to_json(summary).dump(2) + "\n");
}

/// Execute one subcommand of a validated config. Artifacts land in
/// out_override (or the config's output.directory); summary.json is
/// written last so its artifact list only names files that exist.
inline RunSummary run_scenario(const ScenarioConfig& cfg, Subcommand subcommand,
                               const std::optional<std::filesystem::path>& out_override = {},
                               bool quiet = true) {
    namespace fs = std::filesystem;
    const auto start = std::chrono::steady_clock::now();

    validate_config(cfg);
    if (subcommand != Subcommand::Steer && cfg.targets.size() != 1) {
        throw InvalidInputError(std::string(subcommand_name(subcommand)) +
                                " requires exactly one target (use steer for target lists)");
    }

    const FrequencySpec freq = make_frequency(cfg);
    const ArrayLayout layout = make_layout(cfg);
    const std::vector<FocalTarget> targets = make_targets(cfg);
    const ObservationGrid grid = make_grid(cfg.grid);

    const fs::path out_dir = out_override.value_or(fs::path(cfg.output.directory));
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + out_dir.string() +
                      "': " + ec.message());
    }

    RunSummary summary;
    summary.tool = std::string(tool_name) + " " + std::string(version);
    summary.subcommand = std::string(subcommand_name(subcommand));
    summary.config = cfg;
    summary.layout_hash = layout_hash(layout);
    summary.fraunhofer_distance_m = fraunhofer_distance(layout, freq);

    auto emit = [&](const std::string& name, const std::string& content) {
        write_text_file(out_dir / name, content);
        summary.artifacts.push_back(name);
        if (!quiet) {
            std::cout << "wrote " << (out_dir / name).string() << "\n";
        }
    };

    auto make_excitation = [&](Method method, const FocalTarget& target) {
        ExcitationSet exc = synthesize(method, layout, target, freq);
        if (cfg.quantization_bits) {
            exc = quantize_phases(exc, *cfg.quantization_bits);
        }
        return exc;
    };

    auto emit_field_map = [&](const FieldMap& map, const std::string& stem) {
        if (cfg.output.write_csv) {
            emit(stem + ".csv", field_map_csv(map));
        }
        if (cfg.output.write_json) {
            emit(stem + ".json", field_map_json(map).dump(2) + "\n");
        }
    };

    switch (subcommand) {
    case Subcommand::Synth: {
        for (const Method method : cfg.methods) {
            const ExcitationSet exc = make_excitation(method, targets.front());
            emit("excitation_" + std::string(method_name(method)) + ".json",
                 detail::excitation_json(exc, cfg.quantization_bits).dump(2) + "\n");
        }
        break;
    }
    case Subcommand::Field: {
        for (const Method method : cfg.methods) {
            const ExcitationSet exc = make_excitation(method, targets.front());
            const FieldMap map = total_field(layout, exc, cfg.element_model, grid, freq);
            emit_field_map(map, "field_" + std::string(method_name(method)));
            summary.reports.push_back(
                {make_focal_report(map, layout, exc, targets.front(), freq), {}, {}});
        }
        break;
    }
    case Subcommand::Compare: {
        const ComparisonReport cmp = compare_methods(layout, targets.front(), freq,
                                                     cfg.element_model, grid,
                                                     cfg.quantization_bits);
        detail::OrderedJson cmp_json;
        detail::OrderedJson cmp_reports = detail::OrderedJson::array();
        for (const auto& outcome : cmp.methods) {
            emit("excitation_" + outcome.report.method + ".json",
                 detail::excitation_json(outcome.excitation, cfg.quantization_bits).dump(2) +
                     "\n");
            emit_field_map(outcome.map, "field_" + outcome.report.method);
            summary.reports.push_back({outcome.report, {}, {}});
            cmp_reports.push_back(detail::focal_report_json(outcome.report));
        }
        ComparisonSummary cs{cmp.deltas, cmp.tr_matches_ray_optic,
                             cmp.tr_peak_not_farther_than_far_field,
                             cmp.tr_peak_magnitude_at_least_far_field};
        summary.comparison = cs;
        cmp_json["reports"] = std::move(cmp_reports);
        cmp_json.update(detail::comparison_json(cs));
        emit("comparison.json", cmp_json.dump(2) + "\n");
        break;
    }
    case Subcommand::Steer: {
        const std::vector<SteerResult> results =
            steer_sweep(layout, targets, freq, cfg.element_model, grid, cfg.quantization_bits);
        detail::OrderedJson steer_json = detail::OrderedJson::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
            const auto& res = results[i];
            emit_field_map(res.map, "field_tr_t" + std::to_string(i));
            summary.reports.push_back({res.report, res.target, res.lateral_peak_error});
            detail::OrderedJson entry;
            entry["target_m"] = {res.target.x, res.target.y, res.target.z};
            entry["lateral_peak_error_m"] = res.lateral_peak_error;
            entry["report"] = detail::focal_report_json(res.report);
            steer_json.push_back(std::move(entry));
        }
        emit("steer.json", steer_json.dump(2) + "\n");
        break;
    }
    }

    const auto stop = std::chrono::steady_clock::now();
    summary.timing_ms = std::chrono::duration<double, std::milli>(stop - start).count();

    write_summary(summary, out_dir / "summary.json");
    if (!quiet) {
        std::cout << "wrote " << (out_dir / "summary.json").string() << "\n";
    }
    return summary;
}

} // namespace nffbeam
