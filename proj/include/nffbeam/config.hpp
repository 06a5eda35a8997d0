// SPDX-License-Identifier: Apache-2.0
//
// Scenario configuration: JSON grammar, strict parsing (unknown keys are
// hard errors), defaults, and the canonical printer. Geometry defaults
// echo the reference 5.8 GHz slotted-waveguide design.

#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nffbeam/errors.hpp"
#include "nffbeam/field_engine.hpp"
#include "nffbeam/geometry.hpp"
#include "nffbeam/synthesis.hpp"
#include "nffbeam/vec3.hpp"

namespace nffbeam {

inline std::string_view element_kind_name(ElementModel::Kind kind) {
    switch (kind) {
    case ElementModel::Kind::Isotropic: return "isotropic";
    case ElementModel::Kind::CosineQ: return "cosine-q";
    case ElementModel::Kind::SlotSubarray: return "slot-subarray";
    }
    return "unknown";
}

inline ElementModel::Kind element_kind_from_name(std::string_view name) {
    if (name == "isotropic") return ElementModel::Kind::Isotropic;
    if (name == "cosine-q") return ElementModel::Kind::CosineQ;
    if (name == "slot-subarray") return ElementModel::Kind::SlotSubarray;
    throw InvalidInputError("unknown element model kind '" + std::string(name) +
                            "' (expected isotropic, cosine-q, or slot-subarray)");
}

struct LayoutConfig {
    std::size_t n_columns = 8;
    double column_pitch = 0.0208; // m: 19.8 mm guide height + 1 mm wall allowance
    SlotColumnSpec slots{};

    friend bool operator==(const LayoutConfig&, const LayoutConfig&) = default;
};

struct AxialLineGridConfig {
    double z_min = 0.3;
    double z_max = 1.5;
    std::size_t samples = 481;
    double offset_x = 0.0;
    double offset_y = 0.0;

    friend bool operator==(const AxialLineGridConfig&, const AxialLineGridConfig&) = default;
};

struct PlaneCutGridConfig {
    PrincipalPlane plane = PrincipalPlane::E;
    double transverse_extent = 0.6;
    double z_min = 0.3;
    double z_max = 1.2;
    std::size_t transverse_samples = 201;
    std::size_t z_samples = 201;

    friend bool operator==(const PlaneCutGridConfig&, const PlaneCutGridConfig&) = default;
};

struct BoxGridConfig {
    Vec3 min_corner;
    Vec3 max_corner;
    std::array<std::size_t, 3> samples{2, 2, 2};

    friend bool operator==(const BoxGridConfig&, const BoxGridConfig&) = default;
};

using GridConfig = std::variant<AxialLineGridConfig, PlaneCutGridConfig, BoxGridConfig>;

struct OutputConfig {
    std::string directory = "out";
    bool write_csv = true;
    bool write_json = true;

    friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ScenarioConfig {
    double frequency_hz = 5.8e9;
    LayoutConfig layout{};
    ElementModel element_model = ElementModel::slot_subarray();
    std::vector<Vec3> targets;
    std::vector<Method> methods{Method::TimeReversal, Method::RayOptic, Method::FarField};
    GridConfig grid = PlaneCutGridConfig{};
    std::optional<int> quantization_bits;
    OutputConfig output{};

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline FrequencySpec make_frequency(const ScenarioConfig& cfg) {
    return build_frequency(cfg.frequency_hz);
}

inline ArrayLayout make_layout(const ScenarioConfig& cfg) {
    return build_layout(cfg.layout.n_columns, cfg.layout.column_pitch, cfg.layout.slots);
}

inline std::vector<FocalTarget> make_targets(const ScenarioConfig& cfg) {
    std::vector<FocalTarget> targets;
    targets.reserve(cfg.targets.size());
    for (const auto& t : cfg.targets) {
        targets.emplace_back(t);
    }
    return targets;
}

inline ObservationGrid make_grid(const GridConfig& cfg) {
    return std::visit(
        [](const auto& g) -> ObservationGrid {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, AxialLineGridConfig>) {
                return ObservationGrid::axial_line(g.z_min, g.z_max, g.samples, g.offset_x,
                                                   g.offset_y);
            } else if constexpr (std::is_same_v<T, PlaneCutGridConfig>) {
                return ObservationGrid::plane_cut(g.plane, g.transverse_extent, g.z_min, g.z_max,
                                                  g.transverse_samples, g.z_samples);
            } else {
                return ObservationGrid::box(g.min_corner, g.max_corner, g.samples);
            }
        },
        cfg);
}

/// Re-runs every domain factory so a returned config is known-buildable;
/// errors carry the violated invariant's name.
inline void validate_config(const ScenarioConfig& cfg) {
    make_frequency(cfg);
    make_layout(cfg);
    if (cfg.targets.empty()) {
        throw InvalidInputError("config requires at least one target");
    }
    make_targets(cfg);
    make_grid(cfg.grid);
    if (cfg.element_model.kind == ElementModel::Kind::CosineQ) {
        ElementModel::cosine_q(cfg.element_model.q);
    } else if (!std::isfinite(cfg.element_model.q) || cfg.element_model.q < 0.0) {
        throw InvalidInputError("ElementModel invariant: q >= 0");
    }
    if (cfg.methods.empty()) {
        throw InvalidInputError("config requires at least one synthesis method");
    }
    if (cfg.quantization_bits && (*cfg.quantization_bits < 1 || *cfg.quantization_bits > 16)) {
        throw InvalidInputError("quantize_phases precondition: 1 <= bits <= 16");
    }
    if (!cfg.output.write_csv && !cfg.output.write_json) {
        throw InvalidInputError("config output.formats requires at least one of csv, json");
    }
    if (cfg.output.directory.empty()) {
        throw InvalidInputError("config output.directory must be non-empty");
    }
}

namespace detail {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

inline void require_known_keys(const Json& obj, const char* context,
                               std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw InvalidInputError("unknown key '" + key + "' in " + context);
        }
    }
}

inline const Json* find_member(const Json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

inline double as_number(const Json& value, const char* context, const char* key) {
    if (!value.is_number()) {
        throw InvalidInputError(std::string(context) + "." + key + " must be a number");
    }
    return value.get<double>();
}

inline double get_number(const Json& obj, const char* context, const char* key,
                         double fallback) {
    const Json* v = find_member(obj, key);
    return v ? as_number(*v, context, key) : fallback;
}

inline double require_number(const Json& obj, const char* context, const char* key) {
    const Json* v = find_member(obj, key);
    if (!v) {
        throw InvalidInputError(std::string(context) + "." + key + " is required");
    }
    return as_number(*v, context, key);
}

inline std::size_t as_count(const Json& value, const char* context, const char* key) {
    if (!value.is_number_integer() || value.get<long long>() < 0) {
        throw InvalidInputError(std::string(context) + "." + key +
                                " must be a non-negative integer");
    }
    return value.get<std::size_t>();
}

inline std::size_t get_count(const Json& obj, const char* context, const char* key,
                             std::size_t fallback) {
    const Json* v = find_member(obj, key);
    return v ? as_count(*v, context, key) : fallback;
}

inline std::string as_string(const Json& value, const char* context, const char* key) {
    if (!value.is_string()) {
        throw InvalidInputError(std::string(context) + "." + key + " must be a string");
    }
    return value.get<std::string>();
}

inline Vec3 parse_target(const Json& obj, const char* context) {
    if (!obj.is_object()) {
        throw InvalidInputError(std::string(context) + " must be an object");
    }
    require_known_keys(obj, context, {"x_m", "y_m", "z_m"});
    Vec3 t;
    t.x = get_number(obj, context, "x_m", 0.0);
    t.y = get_number(obj, context, "y_m", 0.0);
    t.z = require_number(obj, context, "z_m");
    return t;
}

inline SlotColumnSpec parse_slots(const Json& obj) {
    require_known_keys(obj, "layout.slots",
                       {"n_slots", "slot_pitch_m", "slot_length_m", "slot_width_m",
                        "guide_width_a_m", "guide_height_b_m", "end_gap_m",
                        "sidewall_offset_m"});
    SlotColumnSpec s;
    s.n_slots = get_count(obj, "layout.slots", "n_slots", s.n_slots);
    s.slot_pitch = get_number(obj, "layout.slots", "slot_pitch_m", s.slot_pitch);
    s.slot_length = get_number(obj, "layout.slots", "slot_length_m", s.slot_length);
    s.slot_width = get_number(obj, "layout.slots", "slot_width_m", s.slot_width);
    s.guide_width_a = get_number(obj, "layout.slots", "guide_width_a_m", s.guide_width_a);
    s.guide_height_b = get_number(obj, "layout.slots", "guide_height_b_m", s.guide_height_b);
    s.end_gap = get_number(obj, "layout.slots", "end_gap_m", s.end_gap);
    s.sidewall_offset = get_number(obj, "layout.slots", "sidewall_offset_m", s.sidewall_offset);
    return s;
}

inline GridConfig parse_grid(const Json& obj) {
    if (!obj.is_object()) {
        throw InvalidInputError("grid must be an object");
    }
    const Json* kind_member = find_member(obj, "kind");
    const std::string kind = kind_member ? as_string(*kind_member, "grid", "kind") : "plane-cut";
    if (kind == "axial-line") {
        require_known_keys(obj, "grid",
                           {"kind", "z_min_m", "z_max_m", "samples", "offset_x_m", "offset_y_m"});
        AxialLineGridConfig g;
        g.z_min = get_number(obj, "grid", "z_min_m", g.z_min);
        g.z_max = get_number(obj, "grid", "z_max_m", g.z_max);
        g.samples = get_count(obj, "grid", "samples", g.samples);
        g.offset_x = get_number(obj, "grid", "offset_x_m", g.offset_x);
        g.offset_y = get_number(obj, "grid", "offset_y_m", g.offset_y);
        return g;
    }
    if (kind == "plane-cut") {
        require_known_keys(obj, "grid",
                           {"kind", "plane", "transverse_extent_m", "z_min_m", "z_max_m",
                            "transverse_samples", "z_samples"});
        PlaneCutGridConfig g;
        if (const Json* plane = find_member(obj, "plane")) {
            const std::string name = as_string(*plane, "grid", "plane");
            if (name == "E") {
                g.plane = PrincipalPlane::E;
            } else if (name == "H") {
                g.plane = PrincipalPlane::H;
            } else {
                throw InvalidInputError("grid.plane must be \"E\" or \"H\"");
            }
        }
        g.transverse_extent = get_number(obj, "grid", "transverse_extent_m", g.transverse_extent);
        g.z_min = get_number(obj, "grid", "z_min_m", g.z_min);
        g.z_max = get_number(obj, "grid", "z_max_m", g.z_max);
        g.transverse_samples = get_count(obj, "grid", "transverse_samples", g.transverse_samples);
        g.z_samples = get_count(obj, "grid", "z_samples", g.z_samples);
        return g;
    }
    if (kind == "box") {
        require_known_keys(obj, "grid",
                           {"kind", "x_min_m", "x_max_m", "y_min_m", "y_max_m", "z_min_m",
                            "z_max_m", "x_samples", "y_samples", "z_samples"});
        BoxGridConfig g;
        g.min_corner = {require_number(obj, "grid", "x_min_m"),
                        require_number(obj, "grid", "y_min_m"),
                        require_number(obj, "grid", "z_min_m")};
        g.max_corner = {require_number(obj, "grid", "x_max_m"),
                        require_number(obj, "grid", "y_max_m"),
                        require_number(obj, "grid", "z_max_m")};
        g.samples = {get_count(obj, "grid", "x_samples", 2),
                     get_count(obj, "grid", "y_samples", 2),
                     get_count(obj, "grid", "z_samples", 2)};
        return g;
    }
    throw InvalidInputError("grid.kind must be one of axial-line, plane-cut, box");
}

} // namespace detail

/// Parse and fully validate a scenario config. Syntax errors carry the
/// parser's line/column; semantic errors name the violated invariant;
/// unknown keys anywhere are hard errors.
inline ScenarioConfig parse_config(std::string_view text) {
    detail::Json root;
    try {
        root = detail::Json::parse(text);
    } catch (const detail::Json::parse_error& err) {
        throw InvalidInputError(std::string("config syntax error: ") + err.what());
    }
    if (!root.is_object()) {
        throw InvalidInputError("config root must be a JSON object");
    }
    detail::require_known_keys(root, "config",
                               {"frequency_hz", "layout", "element_model", "target", "targets",
                                "methods", "grid", "quantization_bits", "output"});

    ScenarioConfig cfg;
    cfg.frequency_hz = detail::get_number(root, "config", "frequency_hz", cfg.frequency_hz);

    if (const auto* layout = detail::find_member(root, "layout")) {
        if (!layout->is_object()) {
            throw InvalidInputError("layout must be an object");
        }
        detail::require_known_keys(*layout, "layout", {"n_columns", "column_pitch_m", "slots"});
        cfg.layout.n_columns =
            detail::get_count(*layout, "layout", "n_columns", cfg.layout.n_columns);
        cfg.layout.column_pitch =
            detail::get_number(*layout, "layout", "column_pitch_m", cfg.layout.column_pitch);
        if (const auto* slots = detail::find_member(*layout, "slots")) {
            if (!slots->is_object()) {
                throw InvalidInputError("layout.slots must be an object");
            }
            cfg.layout.slots = detail::parse_slots(*slots);
        }
    }

    if (const auto* model = detail::find_member(root, "element_model")) {
        if (!model->is_object()) {
            throw InvalidInputError("element_model must be an object");
        }
        detail::require_known_keys(*model, "element_model", {"kind", "q"});
        if (const auto* kind = detail::find_member(*model, "kind")) {
            cfg.element_model.kind =
                element_kind_from_name(detail::as_string(*kind, "element_model", "kind"));
        }
        cfg.element_model.q = detail::get_number(*model, "element_model", "q", 1.0);
    }

    const auto* target = detail::find_member(root, "target");
    const auto* targets = detail::find_member(root, "targets");
    if (target && targets) {
        throw InvalidInputError("config must set either target or targets, not both");
    }
    if (target) {
        cfg.targets.push_back(detail::parse_target(*target, "target"));
    } else if (targets) {
        if (!targets->is_array() || targets->empty()) {
            throw InvalidInputError("targets must be a non-empty array");
        }
        for (const auto& entry : *targets) {
            cfg.targets.push_back(detail::parse_target(entry, "targets[]"));
        }
    }

    if (const auto* methods = detail::find_member(root, "methods")) {
        if (!methods->is_array() || methods->empty()) {
            throw InvalidInputError("methods must be a non-empty array");
        }
        cfg.methods.clear();
        std::set<std::string> seen;
        for (const auto& entry : *methods) {
            const std::string name = detail::as_string(entry, "config", "methods[]");
            if (!seen.insert(name).second) {
                throw InvalidInputError("duplicate method '" + name + "' in methods");
            }
            cfg.methods.push_back(method_from_name(name));
        }
    }

    if (const auto* grid = detail::find_member(root, "grid")) {
        cfg.grid = detail::parse_grid(*grid);
    }

    if (const auto* bits = detail::find_member(root, "quantization_bits")) {
        if (!bits->is_number_integer()) {
            throw InvalidInputError("quantization_bits must be an integer");
        }
        cfg.quantization_bits = bits->get<int>();
    }

    if (const auto* output = detail::find_member(root, "output")) {
        if (!output->is_object()) {
            throw InvalidInputError("output must be an object");
        }
        detail::require_known_keys(*output, "output", {"directory", "formats"});
        if (const auto* dir = detail::find_member(*output, "directory")) {
            cfg.output.directory = detail::as_string(*dir, "output", "directory");
        }
        if (const auto* formats = detail::find_member(*output, "formats")) {
            if (!formats->is_array() || formats->empty()) {
                throw InvalidInputError("output.formats must be a non-empty array");
            }
            cfg.output.write_csv = false;
            cfg.output.write_json = false;
            for (const auto& entry : *formats) {
                const std::string name = detail::as_string(entry, "output", "formats[]");
                if (name == "csv" && !cfg.output.write_csv) {
                    cfg.output.write_csv = true;
                } else if (name == "json" && !cfg.output.write_json) {
                    cfg.output.write_json = true;
                } else {
                    throw InvalidInputError("output.formats entries must be unique and one of "
                                            "csv, json (got '" +
                                            name + "')");
                }
            }
        }
    }

    validate_config(cfg);
    return cfg;
}

/// Canonical JSON form: every default made explicit, stable key order.
/// parse_config(print_config(cfg)) reproduces cfg exactly.
inline std::string print_config(const ScenarioConfig& cfg) {
    using detail::OrderedJson;
    OrderedJson root;
    root["frequency_hz"] = cfg.frequency_hz;
    root["layout"] = {
        {"n_columns", cfg.layout.n_columns},
        {"column_pitch_m", cfg.layout.column_pitch},
        {"slots",
         {{"n_slots", cfg.layout.slots.n_slots},
          {"slot_pitch_m", cfg.layout.slots.slot_pitch},
          {"slot_length_m", cfg.layout.slots.slot_length},
          {"slot_width_m", cfg.layout.slots.slot_width},
          {"guide_width_a_m", cfg.layout.slots.guide_width_a},
          {"guide_height_b_m", cfg.layout.slots.guide_height_b},
          {"end_gap_m", cfg.layout.slots.end_gap},
          {"sidewall_offset_m", cfg.layout.slots.sidewall_offset}}},
    };
    root["element_model"] = {{"kind", std::string(element_kind_name(cfg.element_model.kind))},
                             {"q", cfg.element_model.q}};
    OrderedJson targets = OrderedJson::array();
    for (const auto& t : cfg.targets) {
        targets.push_back({{"x_m", t.x}, {"y_m", t.y}, {"z_m", t.z}});
    }
    root["targets"] = std::move(targets);
    OrderedJson methods = OrderedJson::array();
    for (const Method m : cfg.methods) {
        methods.push_back(std::string(method_name(m)));
    }
    root["methods"] = std::move(methods);

    if (const auto* axial = std::get_if<AxialLineGridConfig>(&cfg.grid)) {
        root["grid"] = {{"kind", "axial-line"},      {"z_min_m", axial->z_min},
                        {"z_max_m", axial->z_max},   {"samples", axial->samples},
                        {"offset_x_m", axial->offset_x}, {"offset_y_m", axial->offset_y}};
    } else if (const auto* plane = std::get_if<PlaneCutGridConfig>(&cfg.grid)) {
        root["grid"] = {{"kind", "plane-cut"},
                        {"plane", plane->plane == PrincipalPlane::E ? "E" : "H"},
                        {"transverse_extent_m", plane->transverse_extent},
                        {"z_min_m", plane->z_min},
                        {"z_max_m", plane->z_max},
                        {"transverse_samples", plane->transverse_samples},
                        {"z_samples", plane->z_samples}};
    } else {
        const auto& box = std::get<BoxGridConfig>(cfg.grid);
        root["grid"] = {{"kind", "box"},
                        {"x_min_m", box.min_corner.x},
                        {"x_max_m", box.max_corner.x},
                        {"y_min_m", box.min_corner.y},
                        {"y_max_m", box.max_corner.y},
                        {"z_min_m", box.min_corner.z},
                        {"z_max_m", box.max_corner.z},
                        {"x_samples", box.samples[0]},
                        {"y_samples", box.samples[1]},
                        {"z_samples", box.samples[2]}};
    }

    if (cfg.quantization_bits) {
        root["quantization_bits"] = *cfg.quantization_bits;
    }
    OrderedJson formats = OrderedJson::array();
    if (cfg.output.write_csv) {
        formats.push_back("csv");
    }
    if (cfg.output.write_json) {
        formats.push_back("json");
    }
    root["output"] = {{"directory", cfg.output.directory}, {"formats", std::move(formats)}};
    return root.dump(2) + "\n";
}

} // namespace nffbeam
