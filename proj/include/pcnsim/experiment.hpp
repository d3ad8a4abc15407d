#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pcnsim/sim.hpp"

namespace pcnsim {

/// Cross product of experiment parameters. Every multipath (d, k) pair is
/// combined with every fee policy, scale factor and distribution choice.
struct ExperimentMatrix {
    std::string name = "experiment";
    std::vector<FeeKind> fee_policies{FeeKind::lightning, FeeKind::distasi, FeeKind::merchant_v1,
                                      FeeKind::merchant_v2};
    std::vector<RouterKind> routers{RouterKind::multipath};
    std::vector<int> d{10};
    std::vector<int> k{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::vector<int> original_d;  // extra multipath cells with k == d
    std::vector<double> x_tx{0.05};
    std::vector<Distribution> balance_dists{Distribution::exponential};
    std::vector<Distribution> tx_dists{Distribution::exponential};

    FeePolicy fee_params;  // base fee, rates and factor shared by all cells
    TopologySpec topology;
    Amount init = 2'400'000;
    double balance_sd_fraction = 0.25;
    double tx_sd_fraction = 0.25;
    Amount tx_floor = 1.0;
    std::size_t transactions = 20'000;
    std::size_t window_size = 1000;
    std::uint64_t seed = 1;
    int repetitions = 1;
    int jobs = 1;
    std::string format = "csv";
    std::filesystem::path out_dir = "results";

    /// Applies one `key = value` setting. Throws ConfigError on unknown keys
    /// or malformed values.
    void set(const std::string& key, const std::string& value);
    void validate() const;
    /// Multipath (d, k) pairs in output order, deduplicated.
    std::vector<std::pair<int, int>> dk_pairs() const;
};

/// Parses `key = value` lines; '#' starts a comment. Lists are
/// comma-separated and integer lists accept `a..b` ranges.
ExperimentMatrix parse_config(std::istream& in);
ExperimentMatrix load_config(const std::filesystem::path& path);

struct MatrixCell {
    std::string id;
    RunConfig config;
};

std::vector<MatrixCell> expand(const ExperimentMatrix& matrix);

struct CellResult {
    MatrixCell cell;
    BatchResult batch;
};

std::vector<CellResult> run_matrix(const ExperimentMatrix& matrix);

/// Formats with nine significant digits, the precision used in every CSV.
std::string format_number(double v);

/// Summary table: one row per cell.
void write_success_csv(std::ostream& out, const std::vector<CellResult>& results);
/// Long-format companion: one row per (cell, window).
void write_windows_csv(std::ostream& out, const std::vector<CellResult>& results);
/// Message overhead per cell.
void write_overhead_csv(std::ostream& out, const std::vector<CellResult>& results);
/// JSON summary with per-run raw values. `timestamp` goes into the metadata
/// block only.
void write_summary_json(std::ostream& out, const ExperimentMatrix& matrix,
                        const std::vector<CellResult>& results, const std::string& timestamp);

/// Writes the result files into `dir` and returns their paths. "csv" writes
/// the three tables plus the JSON summary, "json" only the summary.
std::vector<std::filesystem::path> emit_results(const ExperimentMatrix& matrix,
                                                const std::vector<CellResult>& results,
                                                const std::string& format,
                                                const std::filesystem::path& dir,
                                                const std::string& timestamp);

void print_table(std::ostream& out, const std::vector<CellResult>& results);
void print_matrix(std::ostream& out, const ExperimentMatrix& matrix);

}  // namespace pcnsim
