#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "slkl/optimizer.hpp"

namespace slkl::bench {

/// Invalid or inconsistent experiment configuration (exit code 1).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Method { slkl, krrn, krrm, unif };

std::string_view to_string(Method method);
Method parse_method(std::string_view text);

/// One experiment. Every field has a key of the same spelling as its CLI
/// flag (`m-values`, `newton-denominator`, ...), see apply_setting().
struct ExperimentConfig {
    std::string name;
    std::string dataset = "sinc";
    std::filesystem::path data_file;
    long target_col = -1;
    char delimiter = ',';
    bool header = false;
    std::vector<std::size_t> categorical_cols;
    std::size_t n_train = 1000;
    std::optional<std::size_t> n_test;
    double snr_db = 10.0;
    double sigma2 = 1.0;
    std::vector<Method> methods{Method::slkl, Method::krrn, Method::krrm, Method::unif};
    std::vector<std::size_t> m_values{256, 512, 1000};
    double nu = 0.01;
    std::vector<double> nu_values;
    double lambda = 1.0;
    double epsilon = 1e-4;
    std::size_t runs = 20;
    std::uint64_t seed = 0;
    std::size_t max_iters = 0;
    ColumnMode column_mode = ColumnMode::precompute;
    NewtonDenominator newton_denominator = NewtonDenominator::second_derivative;
    std::filesystem::path outdir = "results";
    std::size_t jobs = 1;
    std::size_t krrn_cap = default_dense_cap;

    void validate() const;
};

/// Applies `key = value`. Throws ConfigError for unknown keys or bad values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

struct ConfigSection {
    std::string name;
    std::map<std::string, std::string> entries;
};

/// Flat `key = value` text. `[name]` starts a section; keys above the first
/// section are defaults for every section. `#` starts a comment.
std::vector<ConfigSection> parse_config_text(const std::string& text);
std::vector<ConfigSection> parse_config_file(const std::filesystem::path& path);

/// Resolves sections into configs: defaults, then section keys, then `overrides`.
std::vector<ExperimentConfig> resolve_configs(const std::vector<ConfigSection>& sections,
                                              const std::map<std::string, std::string>& overrides);

struct RunRecord {
    std::uint64_t seed = 0;
    Method method = Method::slkl;
    std::size_t M = 0;
    double nu = 0.0;
    double lambda = 0.0;
    double mse = 0.0;
    std::size_t m0 = 0;
    std::size_t iterations = 0;
    double wall_seconds = 0.0;
    bool skipped = false;
    std::string stop_reason;
};

struct CellSummary {
    Method method = Method::slkl;
    std::size_t M = 0;
    std::size_t runs = 0;
    double mse_mean = 0.0;
    double mse_std = 0.0;
    double m0_mean = 0.0;
    double m0_std = 0.0;
    double iterations_mean = 0.0;
    bool skipped = false;
};

struct RunTrace {
    Method method = Method::slkl;
    std::size_t M = 0;
    std::uint64_t seed = 0;
    TrainTrace trace;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<RunRecord> records;
    std::vector<CellSummary> cells;
    std::vector<RunTrace> traces;
};

/// Mean and sample standard deviation per (method, M) over non-skipped records.
std::vector<CellSummary> aggregate(const std::vector<RunRecord>& records);

/// Executes runs x methods x M trainings, run r using seed base + r.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// summary.csv, runs.csv, runs/<method>_<M>_<seed>.csv and report.txt under config.outdir.
void write_report(const ExperimentReport& report);

std::string format_summary_csv(const std::vector<CellSummary>& cells);
std::string format_runs_csv(const std::vector<RunRecord>& records);
std::string format_trace_csv(const TrainTrace& trace);
std::string format_table(const ExperimentReport& report);

struct SweepCell {
    double nu = 0.0;
    std::size_t M = 0;
    std::size_t runs = 0;
    double m0_mean = 0.0;
};

struct SweepReport {
    std::vector<RunRecord> records;
    std::vector<SweepCell> cells;
    std::vector<std::string> trend_notes;
};

/// Mean final support size of SLKL over the (nu, M) grid.
SweepReport sweep_m0(const ExperimentConfig& config, const std::vector<std::size_t>& m_grid,
                     const std::vector<double>& nu_grid);
std::vector<SweepCell> aggregate_sweep(const std::vector<RunRecord>& records);
void write_sweep(const SweepReport& report, const std::filesystem::path& outdir);

} // namespace slkl::bench
