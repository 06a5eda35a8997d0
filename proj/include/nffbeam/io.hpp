// SPDX-License-Identifier: Apache-2.0
//
// Artifact serialization. Field map CSVs carry exactly the columns
// x_m,y_m,z_m,re,im,abs with 17-significant-digit decimal floats and LF
// line endings, so written values round-trip bit-exactly and repeated
// runs diff byte-for-byte.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "nffbeam/errors.hpp"
#include "nffbeam/field_engine.hpp"

namespace nffbeam {

enum class FieldMapFormat { Csv, Json };

/// 17 significant decimal digits: enough to reproduce any double exactly.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.16e", v);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

inline void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) {
        throw IoError("write failed for '" + path.string() + "'");
    }
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) {
        throw IoError("read failed for '" + path.string() + "'");
    }
    return std::move(buffer).str();
}

inline std::string field_map_csv(const FieldMap& map) {
    std::string out = "x_m,y_m,z_m,re,im,abs\n";
    out.reserve(out.size() + map.values.size() * 120);
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        const Vec3 p = map.grid.point(i);
        const Complex v = map.values[i];
        out += format_double(p.x);
        out += ',';
        out += format_double(p.y);
        out += ',';
        out += format_double(p.z);
        out += ',';
        out += format_double(v.real());
        out += ',';
        out += format_double(v.imag());
        out += ',';
        out += format_double(std::abs(v));
        out += '\n';
    }
    return out;
}

namespace detail {

using OrderedJson = nlohmann::ordered_json;

inline const char* grid_kind_name(GridKind kind) {
    switch (kind) {
    case GridKind::AxialLine: return "axial-line";
    case GridKind::PlaneCut: return "plane-cut";
    case GridKind::Box: return "box";
    }
    return "unknown";
}

inline OrderedJson grid_to_json(const ObservationGrid& grid) {
    OrderedJson j;
    j["kind"] = grid_kind_name(grid.kind);
    j["origin_m"] = {grid.origin.x, grid.origin.y, grid.origin.z};
    OrderedJson axes = OrderedJson::array();
    OrderedJson extents = OrderedJson::array();
    OrderedJson samples = OrderedJson::array();
    for (std::size_t a = 0; a < 3; ++a) {
        axes.push_back({grid.axes[a].x, grid.axes[a].y, grid.axes[a].z});
        extents.push_back(grid.extents[a]);
        samples.push_back(grid.samples[a]);
    }
    j["axes"] = std::move(axes);
    j["extents_m"] = std::move(extents);
    j["samples"] = std::move(samples);
    return j;
}

} // namespace detail

inline detail::OrderedJson field_map_json(const FieldMap& map) {
    detail::OrderedJson j;
    j["meta"] = {{"frequency_hz", map.meta.frequency_hz},
                 {"method", map.meta.method},
                 {"layout_hash", map.meta.layout_hash}};
    j["grid"] = detail::grid_to_json(map.grid);
    j["columns"] = {"x_m", "y_m", "z_m", "re", "im", "abs"};
    detail::OrderedJson values = detail::OrderedJson::array();
    for (std::size_t i = 0; i < map.values.size(); ++i) {
        const Vec3 p = map.grid.point(i);
        const Complex v = map.values[i];
        values.push_back({p.x, p.y, p.z, v.real(), v.imag(), std::abs(v)});
    }
    j["values"] = std::move(values);
    return j;
}

inline void write_field_map(const FieldMap& map, const std::filesystem::path& path,
                            FieldMapFormat format) {
    if (map.values.empty()) {
        throw InvalidInputError("refusing to write an empty field map");
    }
    if (format == FieldMapFormat::Csv) {
        write_text_file(path, field_map_csv(map));
    } else {
        write_text_file(path, field_map_json(map).dump(2) + "\n");
    }
}

/// Parse a field map CSV back into its numeric rows (x,y,z,re,im,abs).
inline std::vector<std::array<double, 6>> read_field_csv(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "x_m,y_m,z_m,re,im,abs") {
        throw IoError("'" + path.string() + "' is not a field map CSV (bad header)");
    }
    std::vector<std::array<double, 6>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::array<double, 6> row{};
        const char* cursor = line.c_str();
        for (std::size_t c = 0; c < 6; ++c) {
            char* end = nullptr;
            row[c] = std::strtod(cursor, &end);
            if (end == cursor) {
                throw IoError("'" + path.string() + "': malformed CSV row '" + line + "'");
            }
            cursor = end;
            if (c < 5) {
                if (*cursor != ',') {
                    throw IoError("'" + path.string() + "': malformed CSV row '" + line + "'");
                }
                ++cursor;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace nffbeam
