// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 thz-isac authors

#include "isac/harness/cli.hpp"

#include "isac/errors.hpp"
#include "isac/harness/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <thread>

namespace isac::harness {

namespace {

struct Overrides {
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::size_t workers = 0;
};

void add_common(CLI::App &cmd, Overrides &o)
{
    cmd.add_option("--out", o.out, "CSV output path");
    cmd.add_option("--seed", o.seed, "Override the config seed");
    cmd.add_option("--trials", o.trials, "Override the trial count");
    cmd.add_option("--workers", o.workers, "Worker threads (0 = hardware concurrency)");
}

std::string output_path(const ExperimentConfig &cfg, const Overrides &o)
{
    if (!o.out.empty())
        return o.out;
    std::filesystem::path p = cfg.output.empty() ? std::string(to_string(cfg.experiment)) + ".csv" : cfg.output;
    if (p.is_relative())
        if (const char *dir = std::getenv(kOutputDirEnv); dir && *dir)
            p = std::filesystem::path(dir) / p;
    return p.string();
}

int execute(ExperimentConfig cfg, const Overrides &o, std::ostream &out, std::ostream &err)
{
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.trials)
        cfg.trials = *o.trials;
    cfg.validate();

    std::size_t workers = o.workers;
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());

    const RunResult result = run_experiment(cfg, workers);
    const std::string path = output_path(cfg, o);
    write_file_atomic(path, format_csv(result.records));

    for (const auto &w : result.warnings)
        err << "warning: " << w << '\n';
    for (const auto &line : result.summary)
        out << line << '\n';
    out << "wrote " << result.records.size() << " rows to " << path << '\n';
    return kExitOk;
}

} // namespace

int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Waveform simulator for THz sensing and communication"};
    app.require_subcommand(1);

    Overrides o;
    std::string config_path;
    auto *run = app.add_subcommand("run", "Run an experiment described by a config file");
    run->add_option("config", config_path, "Config file")->required();
    add_common(*run, o);

    std::string preset_name;
    auto *pre = app.add_subcommand("preset", "Run a built-in experiment");
    pre->add_option("name", preset_name, "fig3 (PAPR CCDF) or fig4 (range RMSE)")
        ->required()
        ->check(CLI::IsMember({"fig3", "fig4"}));
    add_common(*pre, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (run->parsed())
            return execute(load_config(config_path), o, out, err);
        return execute(preset(preset_name), o, out, err);
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericError &e) {
        err << "numeric failure: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace isac::harness
