// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cstring>
#include <random>

#include "helpers.hpp"
#include "nffbeam/io.hpp"

using namespace nffbeam;

namespace {

FieldMap sample_map(std::mt19937_64& rng, std::size_t n = 12) {
    std::uniform_real_distribution<double> re(-1e3, 1e3);
    FieldMap map;
    map.grid = ObservationGrid::axial_line(0.1, 1.5, n, 0.01, -0.02);
    for (std::size_t i = 0; i < n; ++i) {
        map.values.emplace_back(re(rng), re(rng));
    }
    map.meta = {5.8e9, "tr", "deadbeefdeadbeef"};
    return map;
}

bool same_bits(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

} // namespace

TEST_CASE("csv header and shape are exact", "[io]") {
    std::mt19937_64 rng(0x10a01);
    const FieldMap map = sample_map(rng, 3);
    const std::string csv = field_map_csv(map);
    CHECK(csv.rfind("x_m,y_m,z_m,re,im,abs\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4); // header + 3 rows
    CHECK(csv.find('\r') == std::string::npos);           // LF endings only
}

TEST_CASE("csv round-trip is bit exact", "[io][property]") {
    std::mt19937_64 rng(0x10a02);
    test::ScratchDir scratch("io");
    const auto path = scratch.path() / "map.csv";
    for (int round = 0; round < 5; ++round) {
        const FieldMap map = sample_map(rng, 20);
        write_field_map(map, path, FieldMapFormat::Csv);
        const auto rows = read_field_csv(path);
        REQUIRE(rows.size() == map.values.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const Vec3 p = map.grid.point(i);
            CHECK(same_bits(rows[i][0], p.x));
            CHECK(same_bits(rows[i][1], p.y));
            CHECK(same_bits(rows[i][2], p.z));
            CHECK(same_bits(rows[i][3], map.values[i].real()));
            CHECK(same_bits(rows[i][4], map.values[i].imag()));
            CHECK(same_bits(rows[i][5], std::abs(map.values[i])));
        }
    }
}

TEST_CASE("negative zero and extreme magnitudes survive", "[io]") {
    FieldMap map;
    map.grid = ObservationGrid::axial_line(0.1, 0.4, 4);
    map.values = {Complex{-0.0, 0.0}, Complex{5e-324, -5e-324}, Complex{1.7976931348623157e308, 0},
                  Complex{-1.2345678901234567e-100, 9.87654321e99}};
    map.meta = {5.8e9, "tr", "0"};
    test::ScratchDir scratch("io_edge");
    const auto path = scratch.path() / "edge.csv";
    write_field_map(map, path, FieldMapFormat::Csv);
    const auto rows = read_field_csv(path);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(same_bits(rows[i][3], map.values[i].real()));
        CHECK(same_bits(rows[i][4], map.values[i].imag()));
    }
}

TEST_CASE("empty maps are refused before touching the filesystem", "[io]") {
    FieldMap map;
    map.grid = ObservationGrid::axial_line(0.1, 1.0, 5);
    test::ScratchDir scratch("io_empty");
    const auto path = scratch.path() / "never.csv";
    CHECK_THROWS_AS(write_field_map(map, path, FieldMapFormat::Csv), InvalidInputError);
    CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("io failures surface the path", "[io]") {
    std::mt19937_64 rng(0x10a03);
    const FieldMap map = sample_map(rng, 2);
    CHECK_THROWS_AS(write_field_map(map, "/nonexistent_dir_zz/x.csv", FieldMapFormat::Csv),
                    IoError);
    CHECK_THROWS_AS(read_text_file("/nonexistent_dir_zz/x.csv"), IoError);
    CHECK_THROWS_AS(read_field_csv("/nonexistent_dir_zz/x.csv"), IoError);
}

TEST_CASE("field map json mirrors the csv contents", "[io]") {
    std::mt19937_64 rng(0x10a04);
    const FieldMap map = sample_map(rng, 4);
    const auto j = field_map_json(map);
    CHECK(j["meta"]["method"] == "tr");
    CHECK(j["columns"].size() == 6);
    REQUIRE(j["values"].size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(j["values"][i][3].get<double>() == map.values[i].real());
        CHECK(j["values"][i][4].get<double>() == map.values[i].imag());
    }
}

TEST_CASE("rejects a csv with a foreign header", "[io]") {
    test::ScratchDir scratch("io_hdr");
    const auto path = scratch.path() / "bad.csv";
    write_text_file(path, "a,b,c\n1,2,3\n");
    CHECK_THROWS_AS(read_field_csv(path), IoError);
}
