// dtc.cpp — Command-line front end: run configs, verify suites, print the schema

#include "dtc/experiment.hpp"
#include "dtc/hilbert.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

int cmd_run(const std::string& path, int threads, const std::string& out_dir) {
    dtc::ExperimentConfig cfg;
    try {
        cfg = dtc::load_config(path);
    } catch (const dtc::ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        const auto set = dtc::run_experiment(cfg, out_dir, threads);
        for (const auto& r : set.results) {
            std::printf("%-28s %-18s %6zu rows %9.2f s\n", r.name.c_str(), dtc::to_string(r.experiment).c_str(),
                        r.table.rows.size(), r.wall_seconds);
            for (const auto& d : r.diagnostics) std::printf("  note: %s\n", d.c_str());
        }
        for (const auto& f : set.files) std::printf("wrote %s\n", f.c_str());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int cmd_verify(const std::string& suite) {
    std::vector<std::string> names;
    if (suite == "all") names = dtc::verify_suite_names();
    else names.push_back(suite);
    bool ok = true;
    for (const auto& n : names) {
        try {
            const auto rep = dtc::verify_suite(n);
            std::cout << rep.format();
            ok = ok && rep.passed();
        } catch (const dtc::ConfigError& e) {
            std::cerr << e.what() << "\n";
            return kExitConfig;
        } catch (const std::exception& e) {
            std::cerr << "suite " << n << " aborted: " << e.what() << "\n";
            return kExitNumerical;
        }
    }
    return ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dtc: driven Tavis-Cummings criticality and sensing experiments"};
    app.require_subcommand(1);
    app.set_version_flag("--version", dtc::library_version());

    std::string config_path, out_dir;
    int threads = 0;
    auto* run = app.add_subcommand("run", "Run an experiment config and write CSV, plot data and metadata");
    run->add_option("config", config_path, "Config JSON file")->required();
    run->add_option("--threads", threads, "Worker threads (default: hardware concurrency)")->check(CLI::NonNegativeNumber);
    run->add_option("--out", out_dir, "Output directory (default: output.directory from the config)");

    std::string suite;
    auto* verify = app.add_subcommand("verify", "Run an oracle suite and print measured residuals");
    std::vector<std::string> choices = dtc::verify_suite_names();
    choices.push_back("all");
    verify->add_option("suite", suite, "operators, phases, geometry, metrology, scaling or all")
        ->required()
        ->check(CLI::IsMember(choices));

    auto* schema = app.add_subcommand("schema", "Print the JSON Schema of the config format");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (*run) return cmd_run(config_path, threads, out_dir);
    if (*verify) return cmd_verify(suite);
    if (*schema) {
        std::cout << dtc::config_schema();
        return kExitOk;
    }
    return kExitConfig;
}
