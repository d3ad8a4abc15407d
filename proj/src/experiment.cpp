#include "pcnsim/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace pcnsim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ',');) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

long long to_integer(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw ConfigError("'" + key + "': expected an integer, got '" + s + "'");
    return v;
}

double to_real(const std::string& key, const std::string& s) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size())
        throw ConfigError("'" + key + "': expected a number, got '" + s + "'");
    return v;
}

std::size_t to_count(const std::string& key, const std::string& s) {
    const long long v = to_integer(key, s);
    if (v < 0) throw ConfigError("'" + key + "' must be non-negative");
    return static_cast<std::size_t>(v);
}

std::vector<int> int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    for (const auto& item : split_list(value)) {
        if (auto dots = item.find(".."); dots != std::string::npos) {
            const long long lo = to_integer(key, trim(item.substr(0, dots)));
            const long long hi = to_integer(key, trim(item.substr(dots + 2)));
            if (hi < lo) throw ConfigError("'" + key + "': empty range " + item);
            for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
        } else {
            out.push_back(static_cast<int>(to_integer(key, item)));
        }
    }
    return out;
}

template <typename T, typename F>
std::vector<T> parsed_list(const std::string& value, F parse) {
    std::vector<T> out;
    for (const auto& item : split_list(value)) out.push_back(parse(item));
    return out;
}

const char* csv_header_prefix =
    "experiment_id,fee_policy,router,d,k,x_tx,balance_dist,tx_dist";

void write_cell_prefix(std::ostream& out, const CellResult& r) {
    const auto& c = r.cell.config;
    out << r.cell.id << ',' << to_string(c.policy.kind) << ',' << to_string(c.router.kind) << ','
        << c.router.d << ',' << c.router.k << ',' << format_number(c.transactions.scale) << ','
        << to_string(c.balances.distribution) << ',' << to_string(c.transactions.distribution);
}

}  // namespace

void ExperimentMatrix::set(const std::string& key, const std::string& raw) {
    const std::string value = trim(raw);
    if (key == "name") {
        if (value.empty() || value.find_first_of("/\\ ") != std::string::npos)
            throw ConfigError("'name' must be a non-empty word");
        name = value;
    } else if (key == "fee_policies") {
        fee_policies = parsed_list<FeeKind>(value, parse_fee_kind);
    } else if (key == "routers") {
        routers = parsed_list<RouterKind>(value, parse_router_kind);
    } else if (key == "d") {
        d = int_list(key, value);
    } else if (key == "k") {
        k = int_list(key, value);
    } else if (key == "original_d") {
        original_d = int_list(key, value);
    } else if (key == "x_tx") {
        x_tx = parsed_list<double>(value, [&](const std::string& s) { return to_real(key, s); });
    } else if (key == "balance_dist") {
        balance_dists = parsed_list<Distribution>(value, parse_distribution);
    } else if (key == "tx_dist") {
        tx_dists = parsed_list<Distribution>(value, parse_distribution);
    } else if (key == "topology") {
        if (value == "ba" || value == "barabasi_albert")
            topology.kind = TopologyKind::barabasi_albert;
        else if (value == "snapshot")
            topology.kind = TopologyKind::snapshot_file;
        else
            throw ConfigError("'topology' must be ba or snapshot");
    } else if (key == "nodes") {
        topology.node_count = to_count(key, value);
    } else if (key == "attach") {
        topology.attach_count = to_count(key, value);
    } else if (key == "snapshot_path") {
        topology.path = value;
    } else if (key == "init") {
        init = to_real(key, value);
    } else if (key == "balance_sd_fraction") {
        balance_sd_fraction = to_real(key, value);
    } else if (key == "tx_sd_fraction") {
        tx_sd_fraction = to_real(key, value);
    } else if (key == "tx_floor") {
        tx_floor = to_real(key, value);
    } else if (key == "transactions") {
        transactions = to_count(key, value);
    } else if (key == "window_size") {
        window_size = to_count(key, value);
    } else if (key == "seed") {
        seed = static_cast<std::uint64_t>(to_integer(key, value));
    } else if (key == "repetitions") {
        repetitions = static_cast<int>(to_integer(key, value));
    } else if (key == "jobs") {
        jobs = static_cast<int>(to_integer(key, value));
    } else if (key == "format") {
        format = value;
    } else if (key == "out") {
        out_dir = value;
    } else if (key == "base_fee" || key == "lightning_base") {
        fee_params.base_fee = to_real(key, value);
    } else if (key == "lightning_rate") {
        fee_params.rate = to_real(key, value);
    } else if (key == "distasi_r1") {
        fee_params.rate_low = to_real(key, value);
    } else if (key == "distasi_r2") {
        fee_params.rate_high = to_real(key, value);
    } else if (key == "merchant_factor") {
        fee_params.factor = to_real(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

std::vector<std::pair<int, int>> ExperimentMatrix::dk_pairs() const {
    std::vector<std::pair<int, int>> out;
    auto add = [&](int dd, int kk) {
        if (std::find(out.begin(), out.end(), std::pair{dd, kk}) == out.end()) out.emplace_back(dd, kk);
    };
    for (int od : original_d) add(od, od);
    for (int dd : d)
        for (int kk : k)
            if (kk <= dd) add(dd, kk);
    return out;
}

void ExperimentMatrix::validate() const {
    if (fee_policies.empty()) throw ConfigError("no fee policies configured");
    if (routers.empty()) throw ConfigError("no routers configured");
    if (x_tx.empty() || balance_dists.empty() || tx_dists.empty())
        throw ConfigError("x_tx, balance_dist and tx_dist must be non-empty");
    for (double x : x_tx)
        if (!(x > 0)) throw ConfigError("x_tx values must be positive");
    for (int v : d)
        if (v < 1) throw ConfigError("d values must be at least 1");
    for (int v : k)
        if (v < 1) throw ConfigError("k values must be at least 1");
    for (int v : original_d)
        if (v < 1) throw ConfigError("original_d values must be at least 1");
    const bool multipath = std::count(routers.begin(), routers.end(), RouterKind::multipath) > 0;
    if (multipath && dk_pairs().empty()) throw ConfigError("no (d, k) pair with k <= d");
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    if (topology.kind == TopologyKind::snapshot_file && topology.path.empty())
        throw ConfigError("snapshot topology needs snapshot_path");
    for (auto kind : fee_policies) {
        FeePolicy p = fee_params;
        p.kind = kind;
        p.validate();
    }
}

ExperimentMatrix parse_config(std::istream& in) {
    ExperimentMatrix m;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        try {
            m.set(trim(line.substr(0, eq)), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return m;
}

ExperimentMatrix load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    return parse_config(in);
}

std::vector<MatrixCell> expand(const ExperimentMatrix& matrix) {
    matrix.validate();
    std::vector<RouterSpec> routers;
    for (auto kind : matrix.routers) {
        if (kind == RouterKind::multipath) {
            for (auto [dd, kk] : matrix.dk_pairs()) routers.push_back({kind, dd, kk});
        } else {
            routers.push_back({kind, 1, 1});
        }
    }
    std::vector<MatrixCell> cells;
    for (double x : matrix.x_tx)
        for (auto bd : matrix.balance_dists)
            for (auto td : matrix.tx_dists)
                for (const auto& router : routers)
                    for (auto kind : matrix.fee_policies) {
                        RunConfig c;
                        c.router = router;
                        c.policy = matrix.fee_params;
                        c.policy.kind = kind;
                        c.topology = matrix.topology;
                        c.balances.distribution = bd;
                        c.balances.mean = matrix.init;
                        c.balances.normal_sd_fraction = matrix.balance_sd_fraction;
                        c.transactions.count = matrix.transactions;
                        c.transactions.distribution = td;
                        c.transactions.scale = x;
                        c.transactions.normal_sd_fraction = matrix.tx_sd_fraction;
                        c.transactions.floor = matrix.tx_floor;
                        c.seed = matrix.seed;
                        c.window_size = matrix.window_size;
                        c.keep_records = false;
                        char id[32];
                        std::snprintf(id, sizeof id, "%04zu", cells.size());
                        cells.push_back({matrix.name + "-" + id, c});
                    }
    return cells;
}

std::vector<CellResult> run_matrix(const ExperimentMatrix& matrix) {
    const auto cells = expand(matrix);
    std::vector<RunConfig> configs;
    configs.reserve(cells.size());
    for (const auto& c : cells) configs.push_back(c.config);
    auto batches = run_batch(configs, matrix.repetitions, matrix.jobs);
    std::vector<CellResult> out;
    for (std::size_t i = 0; i < cells.size(); ++i) out.push_back({cells[i], std::move(batches[i])});
    return out;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_success_csv(std::ostream& out, const std::vector<CellResult>& results) {
    out << csv_header_prefix
        << ",runs,mean_success,stddev_success,mean_messages,stddev_messages,mean_messages_success\n";
    for (const auto& r : results) {
        write_cell_prefix(out, r);
        const auto& b = r.batch;
        out << ',' << b.runs.size() << ',' << format_number(b.mean_success) << ','
            << format_number(b.stddev_success) << ',' << format_number(b.mean_messages) << ','
            << format_number(b.stddev_messages) << ',' << format_number(b.mean_messages_success)
            << '\n';
    }
}

void write_windows_csv(std::ostream& out, const std::vector<CellResult>& results) {
    out << csv_header_prefix << ",window,first_tx,mean_success,stddev_success\n";
    for (const auto& r : results) {
        const auto& b = r.batch;
        for (std::size_t w = 0; w < b.windowed_mean.size(); ++w) {
            write_cell_prefix(out, r);
            out << ',' << w << ',' << w * r.cell.config.window_size << ','
                << format_number(b.windowed_mean[w]) << ','
                << format_number(w < b.windowed_stddev.size() ? b.windowed_stddev[w] : 0.0) << '\n';
        }
    }
}

void write_overhead_csv(std::ostream& out, const std::vector<CellResult>& results) {
    out << csv_header_prefix
        << ",mean_messages_success,stddev_messages_success,mean_messages,stddev_messages\n";
    for (const auto& r : results) {
        write_cell_prefix(out, r);
        const auto& b = r.batch;
        out << ',' << format_number(b.mean_messages_success) << ','
            << format_number(b.stddev_messages_success) << ',' << format_number(b.mean_messages)
            << ',' << format_number(b.stddev_messages) << '\n';
    }
}

void write_summary_json(std::ostream& out, const ExperimentMatrix& matrix,
                        const std::vector<CellResult>& results, const std::string& timestamp) {
    using nlohmann::json;
    json doc;
    doc["metadata"] = {{"tool", "pcnsim"}, {"generated_at", timestamp}};
    json cfg;
    cfg["name"] = matrix.name;
    cfg["seed"] = matrix.seed;
    cfg["repetitions"] = matrix.repetitions;
    cfg["transactions"] = matrix.transactions;
    cfg["window_size"] = matrix.window_size;
    cfg["init"] = matrix.init;
    cfg["nodes"] = matrix.topology.node_count;
    cfg["attach"] = matrix.topology.attach_count;
    cfg["topology"] = matrix.topology.kind == TopologyKind::barabasi_albert ? "ba" : "snapshot";
    doc["config"] = cfg;
    json cells = json::array();
    for (const auto& r : results) {
        const auto& c = r.cell.config;
        const auto& b = r.batch;
        json cell;
        cell["experiment_id"] = r.cell.id;
        cell["fee_policy"] = to_string(c.policy.kind);
        cell["router"] = to_string(c.router.kind);
        cell["d"] = c.router.d;
        cell["k"] = c.router.k;
        cell["x_tx"] = c.transactions.scale;
        cell["balance_dist"] = to_string(c.balances.distribution);
        cell["tx_dist"] = to_string(c.transactions.distribution);
        cell["mean_success"] = b.mean_success;
        cell["stddev_success"] = b.stddev_success;
        cell["mean_messages"] = b.mean_messages;
        cell["stddev_messages"] = b.stddev_messages;
        cell["mean_messages_success"] = b.mean_messages_success;
        json runs = json::array();
        for (std::size_t i = 0; i < b.runs.size(); ++i) {
            const auto& m = b.runs[i];
            runs.push_back({{"seed", c.seed + i},
                            {"success_ratio", m.overall_success_ratio},
                            {"successes", m.successes},
                            {"routing_failures", m.routing_failures},
                            {"capacity_failures", m.capacity_failures},
                            {"mean_messages", m.mean_messages},
                            {"mean_messages_success", m.mean_messages_success},
                            {"mean_fee_success", m.mean_fee_success},
                            {"windowed_success", m.windowed_success}});
        }
        cell["runs"] = std::move(runs);
        cells.push_back(std::move(cell));
    }
    doc["cells"] = std::move(cells);
    out << doc.dump(2) << '\n';
}

std::vector<std::filesystem::path> emit_results(const ExperimentMatrix& matrix,
                                                const std::vector<CellResult>& results,
                                                const std::string& format,
                                                const std::filesystem::path& dir,
                                                const std::string& timestamp) {
    if (format != "csv" && format != "json") throw ConfigError("format must be csv or json");
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> written;
    auto emit = [&](const std::string& suffix, auto&& writer) {
        const auto path = dir / (matrix.name + suffix);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
        writer(out);
        if (!out) throw std::runtime_error("error while writing '" + path.string() + "'");
        written.push_back(path);
    };
    if (format == "csv") {
        emit("_success.csv", [&](std::ostream& o) { write_success_csv(o, results); });
        emit("_windows.csv", [&](std::ostream& o) { write_windows_csv(o, results); });
        emit("_overhead.csv", [&](std::ostream& o) { write_overhead_csv(o, results); });
    }
    emit("_summary.json", [&](std::ostream& o) { write_summary_json(o, matrix, results, timestamp); });
    return written;
}

void print_table(std::ostream& out, const std::vector<CellResult>& results) {
    out << std::left << std::setw(18) << "cell" << std::setw(13) << "fee_policy" << std::setw(15)
        << "router" << std::setw(4) << "d" << std::setw(4) << "k" << std::setw(8) << "x_tx"
        << std::setw(12) << "success" << std::setw(10) << "stddev" << "messages\n";
    for (const auto& r : results) {
        const auto& c = r.cell.config;
        out << std::left << std::setw(18) << r.cell.id << std::setw(13) << to_string(c.policy.kind)
            << std::setw(15) << to_string(c.router.kind) << std::setw(4) << c.router.d
            << std::setw(4) << c.router.k << std::setw(8) << format_number(c.transactions.scale)
            << std::setw(12) << format_number(r.batch.mean_success) << std::setw(10)
            << std::setprecision(3) << r.batch.stddev_success << format_number(r.batch.mean_messages_success)
            << '\n';
    }
}

void print_matrix(std::ostream& out, const ExperimentMatrix& matrix) {
    const auto cells = expand(matrix);
    out << "experiment " << matrix.name << ": " << cells.size() << " cell(s) x "
        << matrix.repetitions << " repetition(s), " << matrix.transactions
        << " transactions each, seed " << matrix.seed << '\n';
    for (const auto& c : cells) {
        const auto& cfg = c.config;
        out << c.id << ' ' << to_string(cfg.policy.kind) << ' ' << to_string(cfg.router.kind)
            << " d=" << cfg.router.d << " k=" << cfg.router.k
            << " x_tx=" << format_number(cfg.transactions.scale)
            << " balances=" << to_string(cfg.balances.distribution)
            << " values=" << to_string(cfg.transactions.distribution) << '\n';
    }
}

}  // namespace pcnsim
