// experiment.hpp — JSON-configured experiment runs, tabular output, and oracle suites

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dtc {

// Invalid or unreadable configuration (CLI exit code 1).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class ExperimentKind { ground_energy, metric_scan, qfi_time, inverted_variance, ratio_beta, ratio_N, identity_checks };
std::string to_string(ExperimentKind k);
ExperimentKind parse_experiment_kind(const std::string& name);

enum class SweepScale { linear, log };

struct ModelBlock {
    double omega{1.0};
    double Omega{20.0};
    double G{0.1};
    double g{0.96};                       // used when g is not the sweep axis
    std::array<double, 2> xi{0.0, 3.0};   // (Re ξ, Im ξ)

    bool operator==(const ModelBlock&) const = default;
};

struct PanelSpec {
    std::string label;
    int N{1};
    double K{1.0};
    std::optional<std::array<double, 2>> xi;  // overrides model.xi
    std::optional<double> beta;               // ratio_N panels; overrides model.Omega/omega

    bool operator==(const PanelSpec&) const = default;
};

struct SweepSpec {
    std::string axis{"g"};  // g, t, t_over_tau, beta, N
    double min{0.0};
    double max{0.0};
    int points{0};
    SweepScale scale{SweepScale::linear};
    std::vector<double> values;  // explicit values override min/max/points

    bool operator==(const SweepSpec&) const = default;
    std::vector<double> resolve() const;
};

struct NumericsBlock {
    int fock_cutoff{0};  // 0 picks a per-experiment default
    double truncation_tol{1e-6};
    double rel_step{0.0};  // 0 keeps the module default
    std::uint64_t seed{1};
    long long shots{0};    // > 0 adds homodyne estimates where supported
    int threads{0};        // 0 = hardware concurrency
    std::vector<std::string> engines;       // metric_scan: closed_form, sum_over_states, overlap_fd
    std::string metric_model{"effective"};  // effective or full
    std::string qfi_method{"gaussian"};     // gaussian, fock, generator
    std::string energy_branch{"full"};      // full or approximate
    std::string finite_beta_model{"hp"};    // full, hp, corrected
    bool wrt_g{true};
    int revival{1};

    bool operator==(const NumericsBlock&) const = default;
};

struct RunSpec {
    std::string name;
    ExperimentKind experiment{ExperimentKind::ground_energy};
    ModelBlock model;
    std::vector<PanelSpec> panels;
    SweepSpec sweep;
    NumericsBlock numerics;

    bool operator==(const RunSpec&) const = default;
};

struct OutputBlock {
    std::string directory{"out"};
    std::vector<std::string> formats{"csv", "plot"};

    bool operator==(const OutputBlock&) const = default;
};

struct ExperimentConfig {
    std::string name;
    std::vector<RunSpec> runs;
    OutputBlock output;

    bool operator==(const ExperimentConfig&) const = default;
};

// Parses and validates; unknown keys, wrong types, and out-of-domain values throw ConfigError.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
// Canonical JSON with every field written out; parse_config(dump_config(c)) == c.
std::string dump_config(const ExperimentConfig& c);
// JSON Schema (draft 2020-12) for the configuration format.
std::string config_schema();

using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row);
};

// 17 significant digits, scientific notation; nan/inf spelled out.
std::string format_number(double v);
std::string to_csv(const Table& t);
// Whitespace-separated columns with a '#' header, for external plotting tools.
std::string to_plot_data(const Table& t);

struct RunResult {
    std::string name;
    ExperimentKind experiment{ExperimentKind::ground_energy};
    Table table;                          // first column is the panel label
    std::vector<std::string> diagnostics; // truncation and calibration notes
    double wall_seconds{0.0};
};

RunResult execute_run(const RunSpec& run, int threads);

struct ArtifactSet {
    std::vector<std::string> files;
    std::vector<RunResult> results;
    double wall_seconds{0.0};
};

// Runs every entry and writes <run>.csv, <run>_<panel>.dat and metadata.json under out_dir.
ArtifactSet run_experiment(const ExperimentConfig& c, const std::string& out_dir, int threads);

struct CheckResult {
    std::string name;
    double measured{0.0};
    double threshold{0.0};
    std::string relation{"<"};  // "<" bounds measured from above, ">" from below
    bool passed{false};
};

struct VerifyReport {
    std::string suite;
    std::vector<CheckResult> checks;

    bool passed() const;
    std::string format() const;
};

// Suites: operators, phases, geometry, metrology, scaling.
VerifyReport verify_suite(const std::string& suite);
std::vector<std::string> verify_suite_names();

std::string library_version();

}  // namespace dtc
