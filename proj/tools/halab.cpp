#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "halab/labcli.hpp"

namespace {

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

int run(const std::string& experiment, const std::string& config_path, const std::optional<std::uint64_t>& seed,
        const std::optional<std::string>& out_dir) {
    halab::Json doc = halab::Json::object();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "halab: cannot open config " << config_path << "\n";
            return 2;
        }
        try {
            doc = halab::Json::parse(in);
        } catch (const halab::Json::parse_error& e) {
            std::cerr << "halab: invalid JSON in " << config_path << ": " << e.what() << "\n";
            return 2;
        }
    }
    halab::ExperimentConfig config;
    try {
        config = halab::ExperimentConfig::from_json(doc);
    } catch (const halab::ConfigError& e) {
        std::cerr << "halab: " << e.what() << "\n";
        return 2;
    }
    if (!config.experiment.empty() && config.experiment != experiment) {
        std::cerr << "halab: config names experiment '" << config.experiment << "' but '" << experiment
                  << "' was requested\n";
        return 2;
    }
    config.experiment = experiment;
    if (seed) config.seed = *seed;

    const auto outcome = halab::run_experiment(config);
    if (!outcome.report) {
        std::cerr << "halab: " << outcome.message << "\n";
        return outcome.exit_code;
    }
    const auto& report = *outcome.report;
    const std::string dir = out_dir.value_or(config.output.value_or("results"));
    halab::write_outputs(report, dir, utc_now());

    std::size_t failures = 0;
    for (const auto& a : report.assertions()) failures += a.pass ? 0 : 1;
    std::cout << experiment << ": " << report.assertions().size() << " assertions, " << failures << " failed\n"
              << "report_hash " << report.hash() << "\n"
              << "wrote " << dir << "/" << experiment << ".json and .csv\n";
    if (outcome.exit_code != 0) std::cerr << "halab: " << outcome.message << "\n";
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"halab: experiments on Wiener norms, moments and dissociated sets"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "List registered experiments, or one experiment's parameters");
    std::string list_name;
    list->add_option("experiment", list_name, "Show the parameters of this experiment");

    auto* run_cmd = app.add_subcommand("run", "Run an experiment");
    std::string experiment, config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    run_cmd->add_option("experiment", experiment, "Experiment name")->required();
    run_cmd->add_option("--config", config_path, "JSON config file");
    run_cmd->add_option("--seed", seed, "64-bit seed, overrides the config");
    run_cmd->add_option("--out", out_dir, "Output directory (default: results)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list->parsed() && !list_name.empty()) {
        const auto* e = halab::find_experiment(list_name);
        if (e == nullptr) {
            std::cerr << "halab: unknown experiment '" << list_name << "'\n";
            return 2;
        }
        std::cout << e->name << ": " << e->summary << "\n";
        for (const auto& p : e->schema) {
            std::cout << "  " << std::left << std::setw(18) << p.name << std::setw(28) << p.fallback.dump() << p.help
                      << "\n";
        }
        return 0;
    }
    if (list->parsed()) {
        for (const auto& e : halab::registry()) {
            std::cout << std::left << std::setw(22) << e.name << e.summary << "\n";
        }
        return 0;
    }
    try {
        return run(experiment, config_path, seed, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "halab: " << e.what() << "\n";
        return 1;
    }
}
