// SPDX-License-Identifier: Apache-2.0
//
// End-to-end exercises of the installed binary: exit-code contract and
// the machine-readable error record.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <string>

#include <sys/wait.h>

#include "helpers.hpp"
#include "nffbeam/io.hpp"

using namespace nffbeam;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string stderr_text;
};

CliResult run_cli(const test::ScratchDir& scratch, const std::string& args) {
    const auto err_path = scratch.path() / "stderr.txt";
    const std::string command = std::string(NFFBEAM_BIN_PATH) + " " + args + " >/dev/null 2>" +
                                err_path.string();
    const int status = std::system(command.c_str());
    CliResult result;
    if (WIFEXITED(status)) {
        result.exit_code = WEXITSTATUS(status);
    }
    result.stderr_text = read_text_file(err_path);
    return result;
}

void write_config(const test::ScratchDir& scratch, const std::string& name,
                  const std::string& body) {
    write_text_file(scratch.path() / name, body);
}

} // namespace

TEST_CASE("cli success path exits 0", "[cli]") {
    test::ScratchDir scratch("cli_ok");
    write_config(scratch, "ok.json", R"({
      "target": { "z_m": 0.5 },
      "methods": ["tr"],
      "grid": { "kind": "axial-line", "z_min_m": 0.3, "z_max_m": 1.0, "samples": 41 }
    })");
    const auto result = run_cli(scratch, "field --config " + (scratch.path() / "ok.json").string() +
                                             " --out " + (scratch.path() / "out").string() +
                                             " --quiet");
    CHECK(result.exit_code == 0);
    CHECK(result.stderr_text.empty());
    CHECK(std::filesystem::exists(scratch.path() / "out" / "field_tr.csv"));
    CHECK(std::filesystem::exists(scratch.path() / "out" / "summary.json"));
}

TEST_CASE("validation failures exit 2 with an error record", "[cli]") {
    test::ScratchDir scratch("cli_val");
    write_config(scratch, "neg.json", R"({ "frequency_hz": -5.8e9, "target": { "z_m": 0.5 } })");
    auto result = run_cli(scratch, "compare --config " + (scratch.path() / "neg.json").string());
    CHECK(result.exit_code == 2);
    CHECK(result.stderr_text.find("\"class\":\"validation\"") != std::string::npos);
    CHECK(result.stderr_text.find("f > 0") != std::string::npos);

    write_config(scratch, "typo.json", R"({ "target": { "z_m": 0.5 }, "collumns": 8 })");
    result = run_cli(scratch, "synth --config " + (scratch.path() / "typo.json").string());
    CHECK(result.exit_code == 2);
    CHECK(result.stderr_text.find("unknown key") != std::string::npos);

    // Bad command line: unknown flag.
    write_config(scratch, "ok.json", R"({ "target": { "z_m": 0.5 } })");
    result = run_cli(scratch, "synth --config " + (scratch.path() / "ok.json").string() +
                                  " --frobnicate");
    CHECK(result.exit_code == 2);

    // Missing subcommand.
    result = run_cli(scratch, "--config " + (scratch.path() / "ok.json").string());
    CHECK(result.exit_code == 2);
}

TEST_CASE("runtime failures exit 3", "[cli]") {
    test::ScratchDir scratch("cli_rt");
    // Observation point exactly on a column center: singularity.
    write_config(scratch, "sing.json", R"({
      "target": { "z_m": 0.5 },
      "methods": ["tr"],
      "element_model": { "kind": "isotropic" },
      "grid": { "kind": "box", "x_min_m": 0, "x_max_m": 0,
                "y_min_m": 0.0728, "y_max_m": 0.0728,
                "z_min_m": 0, "z_max_m": 0, "x_samples": 1, "y_samples": 1, "z_samples": 1 }
    })");
    auto result = run_cli(scratch, "field --config " + (scratch.path() / "sing.json").string() +
                                       " --out " + (scratch.path() / "out").string());
    CHECK(result.exit_code == 3);
    CHECK(result.stderr_text.find("\"class\":\"runtime\"") != std::string::npos);
    CHECK(result.stderr_text.find("grid point") != std::string::npos);

    // Unreadable config file: runtime I/O failure.
    result = run_cli(scratch, "field --config " + (scratch.path() / "missing.json").string());
    CHECK(result.exit_code == 3);
    CHECK(result.stderr_text.find("\"class\":\"runtime\"") != std::string::npos);
}

TEST_CASE("help exits 0", "[cli]") {
    test::ScratchDir scratch("cli_help");
    const auto result = run_cli(scratch, "--help");
    CHECK(result.exit_code == 0);
}
