// pcnsim: run a payment channel network experiment matrix and write result
// tables.
//
//   pcnsim --config configs/fig1.cfg --out results/
//   pcnsim --config configs/fig1.cfg --validate-only

#include <chrono>
#include <ctime>
#include <iostream>

#include "CLI11.hpp"
#include "pcnsim/experiment.hpp"

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Payment channel network fee-policy simulator"};
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string format;
    int repetitions = 0;
    int jobs = 0;
    bool validate_only = false;
    std::vector<std::string> overrides;

    app.add_option("--config", config_path, "Experiment config file (key = value lines)")
        ->check(CLI::ExistingFile);
    auto* seed_opt = app.add_option("--seed", seed, "Base seed (overrides config)")
                         ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    auto* out_opt = app.add_option("--out", out_dir, "Output directory");
    auto* format_opt = app.add_option("--format", format, "Output format")
                           ->check(CLI::IsMember({"csv", "json"}));
    auto* reps_opt = app.add_option("--repetitions", repetitions, "Runs per cell")
                         ->check(CLI::PositiveNumber);
    auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    app.add_option("--set", overrides, "Extra key=value overrides, applied after the config");
    app.add_flag("--validate-only", validate_only, "Print the expanded matrix and exit");
    CLI11_PARSE(app, argc, argv);

    try {
        pcnsim::ExperimentMatrix matrix;
        if (!config_path.empty()) matrix = pcnsim::load_config(config_path);
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw pcnsim::ConfigError("--set expects key=value, got '" + kv + "'");
            matrix.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (*seed_opt) matrix.seed = seed;
        if (*out_opt) matrix.out_dir = out_dir;
        if (*format_opt) matrix.format = format;
        if (*reps_opt) matrix.repetitions = repetitions;
        if (*jobs_opt) matrix.jobs = jobs;
        matrix.validate();

        if (validate_only) {
            pcnsim::print_matrix(std::cout, matrix);
            return 0;
        }
        const auto results = pcnsim::run_matrix(matrix);
        pcnsim::print_table(std::cout, results);
        for (const auto& path :
             pcnsim::emit_results(matrix, results, matrix.format, matrix.out_dir, utc_timestamp()))
            std::cout << "wrote " << path.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "pcnsim: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
