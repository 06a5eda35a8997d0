// SPDX-License-Identifier: Apache-2.0
//
// nffbeam CLI: synth | field | compare | steer, each driven by one JSON
// scenario config. Exit codes: 0 success, 2 validation failure, 3 runtime
// (singularity / I/O) failure; failures also emit a one-line JSON error
// record on stderr.

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nffbeam/nffbeam.hpp"

namespace {

void print_error_record(const std::string& error_class, const std::string& message) {
    nlohmann::ordered_json record;
    record["error"] = {{"class", error_class}, {"message", message}};
    std::cerr << record.dump() << "\n";
}

struct SubcommandArgs {
    std::string config_path;
    std::string out_dir;
    bool quiet = false;
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Near-field focused phased-array beamforming simulator"};
    app.require_subcommand(1);

    const std::pair<nffbeam::Subcommand, const char*> subcommands[] = {
        {nffbeam::Subcommand::Synth, "synthesize per-element excitation phase sets"},
        {nffbeam::Subcommand::Field, "compute field maps on the configured grid"},
        {nffbeam::Subcommand::Compare, "run the tr/ray-optic/far-field comparison"},
        {nffbeam::Subcommand::Steer, "sweep time-reversal focusing over the target list"},
    };

    std::optional<nffbeam::Subcommand> selected;
    SubcommandArgs args;
    for (const auto& [sub, description] : subcommands) {
        auto* cmd = app.add_subcommand(std::string(nffbeam::subcommand_name(sub)), description);
        cmd->add_option("--config", args.config_path, "scenario config file (JSON)")
            ->required();
        cmd->add_option("--out", args.out_dir,
                        "output directory (default: the config's output.directory)");
        cmd->add_flag("--quiet", args.quiet, "suppress per-artifact progress lines");
        cmd->callback([&selected, sub] { selected = sub; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        if (err.get_exit_code() == 0) {
            return app.exit(err); // --help and friends
        }
        print_error_record("validation", err.what());
        return 2;
    }

    try {
        const std::string text = nffbeam::read_text_file(args.config_path);
        const nffbeam::ScenarioConfig cfg = nffbeam::parse_config(text);
        std::optional<std::filesystem::path> out_override;
        if (!args.out_dir.empty()) {
            out_override = std::filesystem::path(args.out_dir);
        }
        const nffbeam::RunSummary summary =
            nffbeam::run_scenario(cfg, *selected, out_override, args.quiet);
        if (!args.quiet) {
            std::cout << summary.tool << " " << summary.subcommand << ": "
                      << summary.artifacts.size() << " artifact(s), "
                      << summary.timing_ms << " ms\n";
        }
        return 0;
    } catch (const nffbeam::InvalidInputError& err) {
        print_error_record("validation", err.what());
        return 2;
    } catch (const nffbeam::SingularityError& err) {
        print_error_record("runtime", err.what());
        return 3;
    } catch (const nffbeam::IoError& err) {
        print_error_record("runtime", err.what());
        return 3;
    } catch (const std::exception& err) {
        print_error_record("runtime", err.what());
        return 3;
    }
}
