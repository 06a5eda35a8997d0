// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "helpers.hpp"
#include "nffbeam/scenario.hpp"

using namespace nffbeam;
using Catch::Matchers::WithinRel;

namespace {

// Small grids keep the subcommand tests quick.
const char* kSmallCompareConfig = R"({
  "frequency_hz": 5.8e9,
  "target": { "z_m": 0.5 },
  "grid": { "kind": "plane-cut", "plane": "E", "transverse_extent_m": 0.5,
            "z_min_m": 0.3, "z_max_m": 1.0, "transverse_samples": 41, "z_samples": 41 }
})";

std::string strip_timing(std::string text) {
    // timing_ms is the only field that may differ between byte-identical runs.
    const auto pos = text.find("\"timing_ms\"");
    if (pos == std::string::npos) {
        return text;
    }
    const auto line_start = text.rfind('\n', pos);
    const auto line_end = text.find('\n', pos);
    text.erase(line_start, line_end - line_start);
    return text;
}

} // namespace

TEST_CASE("compare subcommand produces artifacts and passing checks", "[scenario]") {
    test::ScratchDir scratch("scen_cmp");
    const ScenarioConfig cfg = parse_config(kSmallCompareConfig);
    const RunSummary summary = run_scenario(cfg, Subcommand::Compare, scratch.path());

    CHECK(summary.subcommand == "compare");
    REQUIRE(summary.comparison.has_value());
    CHECK(summary.comparison->tr_matches_ray_optic);
    CHECK(summary.comparison->tr_peak_not_farther_than_far_field);
    CHECK(summary.comparison->tr_peak_magnitude_at_least_far_field);
    REQUIRE(summary.reports.size() == 3);

    // Every referenced artifact exists.
    for (const auto& artifact : summary.artifacts) {
        CHECK(std::filesystem::exists(scratch.path() / artifact));
    }
    CHECK(std::filesystem::exists(scratch.path() / "summary.json"));
    CHECK(std::count_if(summary.artifacts.begin(), summary.artifacts.end(),
                        [](const std::string& a) { return a.rfind("field_", 0) == 0; }) == 6);

    // Summary parses and mirrors the comparison verdicts.
    const auto parsed =
        nlohmann::json::parse(read_text_file(scratch.path() / "summary.json"));
    CHECK(parsed["comparison"]["checks"]["tr_matches_ray_optic"].get<bool>());
    CHECK(parsed["config"]["frequency_hz"].get<double>() == 5.8e9);
    CHECK(parsed["tool"].get<std::string>() == "nffbeam 0.1.0");
}

TEST_CASE("synth applies quantization to every written set", "[scenario]") {
    test::ScratchDir scratch("scen_synth");
    ScenarioConfig cfg = parse_config(R"({
      "target": { "z_m": 0.5 },
      "quantization_bits": 6,
      "methods": ["tr", "far-field"]
    })");
    const RunSummary summary = run_scenario(cfg, Subcommand::Synth, scratch.path());
    REQUIRE(summary.artifacts.size() == 2);

    const double step = two_pi / 64.0;
    for (const auto& name : {"excitation_tr.json", "excitation_far-field.json"}) {
        const auto j = nlohmann::json::parse(read_text_file(scratch.path() / name));
        CHECK(j["quantization_bits"].get<int>() == 6);
        for (const double phi : j["phases_rad"].get<std::vector<double>>()) {
            const double levels = phi / step;
            CHECK_THAT(levels, Catch::Matchers::WithinAbs(std::round(levels), 1e-9));
        }
    }
}

TEST_CASE("field on a single-point grid reports the aligned sum", "[scenario]") {
    test::ScratchDir scratch("scen_point");
    const ScenarioConfig cfg = parse_config(R"({
      "target": { "z_m": 0.5 },
      "methods": ["tr"],
      "element_model": { "kind": "isotropic" },
      "grid": { "kind": "box", "x_min_m": 0, "x_max_m": 0, "y_min_m": 0, "y_max_m": 0,
                "z_min_m": 0.5, "z_max_m": 0.5, "x_samples": 1, "y_samples": 1,
                "z_samples": 1 }
    })");
    run_scenario(cfg, Subcommand::Field, scratch.path());

    const auto rows = read_field_csv(scratch.path() / "field_tr.csv");
    REQUIRE(rows.size() == 1);

    // Isotropic TR alignment: |E(r_s)| equals the sum of contribution
    // magnitudes, sum over elements of 1/(4 pi d_m).
    const ArrayLayout layout = make_layout(cfg);
    double expected = 0.0;
    for (const auto& p : layout.element_centers) {
        expected += 1.0 / (4.0 * pi * distance(p, Vec3{0.0, 0.0, 0.5}));
    }
    CHECK_THAT(rows[0][5], WithinRel(expected, 1e-12));
}

TEST_CASE("steer writes one report per target", "[scenario]") {
    test::ScratchDir scratch("scen_steer");
    const ScenarioConfig cfg = parse_config(R"({
      "targets": [ { "y_m": -0.05, "z_m": 0.5 }, { "y_m": 0.05, "z_m": 0.5 } ],
      "output": { "formats": ["csv"] },
      "grid": { "kind": "plane-cut", "transverse_extent_m": 0.5,
                "z_min_m": 0.3, "z_max_m": 0.9, "transverse_samples": 61, "z_samples": 31 }
    })");
    const RunSummary summary = run_scenario(cfg, Subcommand::Steer, scratch.path());
    REQUIRE(summary.reports.size() == 2);
    CHECK(summary.reports[0].target.has_value());
    CHECK(summary.reports[0].lateral_peak_error.has_value());

    const auto steer = nlohmann::json::parse(read_text_file(scratch.path() / "steer.json"));
    REQUIRE(steer.size() == 2);
    CHECK(steer[0]["target_m"][1].get<double>() == -0.05);
    CHECK(steer[0]["report"]["method"] == "tr");
    // Mirrored steering targets: equal peak magnitudes.
    CHECK_THAT(steer[0]["report"]["peak_magnitude"].get<double>(),
               WithinRel(steer[1]["report"]["peak_magnitude"].get<double>(), 1e-9));
}

TEST_CASE("multi-target configs are rejected outside steer", "[scenario]") {
    test::ScratchDir scratch("scen_multi");
    const ScenarioConfig cfg = parse_config(R"({
      "targets": [ { "z_m": 0.4 }, { "z_m": 0.6 } ]
    })");
    CHECK_THROWS_AS(run_scenario(cfg, Subcommand::Compare, scratch.path()),
                    InvalidInputError);
    CHECK_THROWS_AS(run_scenario(cfg, Subcommand::Synth, scratch.path()), InvalidInputError);
    CHECK_THROWS_AS(run_scenario(cfg, Subcommand::Field, scratch.path()), InvalidInputError);
    CHECK_NOTHROW(run_scenario(cfg, Subcommand::Steer, scratch.path()));
}

TEST_CASE("golden artifacts are byte-stable across runs and worker counts", "[scenario]") {
    const ScenarioConfig cfg = parse_config(kSmallCompareConfig);

    test::ScratchDir first("scen_gold1");
    test::ScratchDir second("scen_gold2");
    test::ScratchDir third("scen_gold3");

    test::set_thread_env("1");
    const RunSummary a = run_scenario(cfg, Subcommand::Compare, first.path());
    test::set_thread_env("4");
    const RunSummary b = run_scenario(cfg, Subcommand::Compare, second.path());
    test::set_thread_env(nullptr);
    const RunSummary c = run_scenario(cfg, Subcommand::Compare, third.path());

    REQUIRE(a.artifacts == b.artifacts);
    REQUIRE(a.artifacts == c.artifacts);
    for (const auto& artifact : a.artifacts) {
        const std::string bytes_a = read_text_file(first.path() / artifact);
        CHECK(bytes_a == read_text_file(second.path() / artifact));
        CHECK(bytes_a == read_text_file(third.path() / artifact));
    }
    const std::string summary_a = strip_timing(read_text_file(first.path() / "summary.json"));
    CHECK(summary_a == strip_timing(read_text_file(second.path() / "summary.json")));
    CHECK(summary_a == strip_timing(read_text_file(third.path() / "summary.json")));
}

TEST_CASE("singularity inside a run surfaces as SingularityError", "[scenario]") {
    test::ScratchDir scratch("scen_sing");
    // Single-point grid placed exactly on the outermost column center.
    const ScenarioConfig cfg = parse_config(R"({
      "target": { "z_m": 0.5 },
      "methods": ["tr"],
      "element_model": { "kind": "isotropic" },
      "grid": { "kind": "box", "x_min_m": 0, "x_max_m": 0,
                "y_min_m": 0.0728, "y_max_m": 0.0728,
                "z_min_m": 0, "z_max_m": 0, "x_samples": 1, "y_samples": 1, "z_samples": 1 }
    })");
    CHECK_THROWS_AS(run_scenario(cfg, Subcommand::Field, scratch.path()), SingularityError);
}

TEST_CASE("config echo in the summary round-trips", "[scenario]") {
    test::ScratchDir scratch("scen_echo");
    const ScenarioConfig cfg = parse_config(kSmallCompareConfig);
    run_scenario(cfg, Subcommand::Synth, scratch.path());
    const auto parsed =
        nlohmann::json::parse(read_text_file(scratch.path() / "summary.json"));
    const ScenarioConfig echoed = parse_config(parsed["config"].dump());
    CHECK(echoed == cfg);
}
