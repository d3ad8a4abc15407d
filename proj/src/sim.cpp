#include "pcnsim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "pcnsim/rng.hpp"

namespace pcnsim {

std::string_view to_string(RouterKind kind) {
    return kind == RouterKind::multipath ? "multipath" : "cheapest_path";
}

RouterKind parse_router_kind(std::string_view name) {
    if (name == "multipath" || name == "speedymurmurs") return RouterKind::multipath;
    if (name == "cheapest_path" || name == "cheapest") return RouterKind::cheapest_path;
    throw ConfigError("unknown router '" + std::string(name) + "'");
}

std::string_view to_string(Outcome outcome) {
    switch (outcome) {
        case Outcome::success: return "success";
        case Outcome::routing_failure: return "routing_failure";
        case Outcome::capacity_failure: return "capacity_failure";
    }
    return "unknown";
}

void RunConfig::validate() const {
    policy.validate();
    if (router.kind == RouterKind::multipath) {
        if (router.k < 1 || router.k > router.d)
            throw ConfigError("multipath routing needs 1 <= k <= d");
        if (router.d > trees_to_build()) throw ConfigError("d exceeds the tree budget");
    }
    if (window_size < 1) throw ConfigError("window size must be at least 1");
    if (topology.kind == TopologyKind::barabasi_albert &&
        !(topology.attach_count >= 1 && topology.node_count > topology.attach_count))
        throw ConfigError("Barabasi-Albert needs node_count > attach_count >= 1");
    if (!(balances.mean > 0)) throw ConfigError("init must be positive");
    if (transactions.count < 1) throw ConfigError("transaction count must be positive");
    if (!(transactions.scale > 0)) throw ConfigError("x_tx must be positive");
}

Simulation::Simulation(const RunConfig& config) : config_(config) {
    config_.validate();
    const EdgeList edges = load_topology(config_.topology, config_.seed);
    network_ = init_balances(edges, config_.balances, config_.seed);
    const auto members = giant_component(network_);
    std::vector<NodeId> ids;
    for (NodeId u = 0; u < network_.node_count(); ++u)
        if (members[u]) ids.push_back(u);
    transactions_ = generate_transactions(ids, config_.transactions, config_.balances.mean, config_.seed);
    prepare_trees();
}

Simulation::Simulation(const RunConfig& config, PaymentNetwork network,
                       std::vector<Transaction> transactions)
    : config_(config), network_(std::move(network)), transactions_(std::move(transactions)) {
    config_.policy.validate();
    if (config_.window_size < 1) throw ConfigError("window size must be at least 1");
    prepare_trees();
}

void Simulation::prepare_trees() {
    if (config_.router.kind == RouterKind::multipath) {
        if (config_.router.k < 1 || config_.router.k > config_.router.d ||
            config_.router.d > config_.trees_to_build())
            throw ConfigError("multipath routing needs 1 <= k <= d <= tree budget");
        trees_ = build_trees(network_, config_.trees_to_build(), config_.seed);
    }
    const auto members = giant_component(network_);
    excluded_ = static_cast<std::size_t>(std::count(members.begin(), members.end(), false));
    initial_capacity_ = network_.total_capacity();
    if (config_.keep_records) records_.reserve(transactions_.size());
}

RoutePlan Simulation::route(const Transaction& tx) const {
    if (config_.router.kind == RouterKind::multipath)
        return route_multipath(network_, trees_, config_.policy, tx.source, tx.dest, tx.value,
                               config_.router.d, config_.router.k);
    return route_cheapest_path(network_, config_.policy, tx.source, tx.dest, tx.value);
}

TransactionRecord Simulation::step() {
    const Transaction& tx = transactions_.at(next_);
    TransactionRecord rec;
    rec.index = next_++;
    rec.source = tx.source;
    rec.dest = tx.dest;
    rec.value = tx.value;

    RoutePlan plan = route(tx);
    rec.messages = plan.messages;
    rec.route_status = plan.status;
    if (!plan.ok()) {
        rec.outcome = Outcome::routing_failure;
    } else if (network_.apply_payment(plan).committed) {
        rec.outcome = Outcome::success;
        rec.total_fee = plan.total_fee;
        rec.paths_used = static_cast<int>(plan.selected.size());
    } else {
        rec.outcome = Outcome::capacity_failure;
    }
    records_.push_back(rec);
    return rec;
}

RunMetrics Simulation::finish() {
    RunMetrics m;
    m.count = records_.size();
    m.initial_capacity = initial_capacity_;
    m.final_capacity = network_.total_capacity();
    m.excluded_nodes = excluded_;
    double messages = 0;
    double messages_success = 0;
    double fees = 0;
    std::size_t window_hits = 0;
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        messages += static_cast<double>(r.messages);
        switch (r.outcome) {
            case Outcome::success:
                ++m.successes;
                ++window_hits;
                messages_success += static_cast<double>(r.messages);
                fees += r.total_fee;
                break;
            case Outcome::routing_failure: ++m.routing_failures; break;
            case Outcome::capacity_failure: ++m.capacity_failures; break;
        }
        const bool window_end = (i + 1) % config_.window_size == 0 || i + 1 == records_.size();
        if (window_end) {
            const std::size_t len = i % config_.window_size + 1;
            m.windowed_success.push_back(static_cast<double>(window_hits) / static_cast<double>(len));
            window_hits = 0;
        }
    }
    if (m.count) {
        m.overall_success_ratio = static_cast<double>(m.successes) / static_cast<double>(m.count);
        m.mean_messages = messages / static_cast<double>(m.count);
    }
    if (m.successes) {
        m.mean_messages_success = messages_success / static_cast<double>(m.successes);
        m.mean_fee_success = fees / static_cast<double>(m.successes);
    }
    if (config_.keep_records) m.records = records_;
    return m;
}

RunMetrics run(const RunConfig& config) {
    RunConfig c = config;
    c.keep_records = true;
    Simulation sim(c);
    // Records are needed for the metrics; drop them afterwards if unwanted.
    while (!sim.done()) sim.step();
    auto m = sim.finish();
    if (!config.keep_records) m.records.clear();
    return m;
}

RunMetrics run(const RunConfig& config, PaymentNetwork network, std::vector<Transaction> transactions) {
    RunConfig c = config;
    c.keep_records = true;
    Simulation sim(c, std::move(network), std::move(transactions));
    while (!sim.done()) sim.step();
    auto m = sim.finish();
    if (!config.keep_records) m.records.clear();
    return m;
}

std::pair<double, double> mean_stddev(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    if (values.size() < 2) return {mean, 0.0};
    double ss = 0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

std::vector<BatchResult> run_batch(const std::vector<RunConfig>& configs, int repetitions, int jobs) {
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    const std::size_t reps = static_cast<std::size_t>(repetitions);
    std::vector<BatchResult> out(configs.size());
    for (std::size_t c = 0; c < configs.size(); ++c) {
        configs[c].validate();
        out[c].config = configs[c];
        out[c].runs.resize(reps);
    }

    const std::size_t total = configs.size() * reps;
    auto work = [&](std::size_t task) {
        const std::size_t c = task / reps;
        const std::size_t r = task % reps;
        RunConfig cfg = configs[c];
        cfg.seed = configs[c].seed + r;
        cfg.keep_records = false;
        out[c].runs[r] = run(cfg);
    };
    if (jobs <= 1) {
        for (std::size_t t = 0; t < total; ++t) work(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                for (std::size_t t; (t = next.fetch_add(1)) < total;) work(t);
            });
        for (auto& t : pool) t.join();
    }

    for (auto& b : out) {
        std::vector<double> succ, msgs, msgs_ok;
        for (const auto& r : b.runs) {
            succ.push_back(r.overall_success_ratio);
            msgs.push_back(r.mean_messages);
            msgs_ok.push_back(r.mean_messages_success);
        }
        std::tie(b.mean_success, b.stddev_success) = mean_stddev(succ);
        std::tie(b.mean_messages, b.stddev_messages) = mean_stddev(msgs);
        std::tie(b.mean_messages_success, b.stddev_messages_success) = mean_stddev(msgs_ok);
        const std::size_t windows = b.runs.front().windowed_success.size();
        for (std::size_t w = 0; w < windows; ++w) {
            std::vector<double> col;
            for (const auto& r : b.runs) col.push_back(r.windowed_success.at(w));
            auto [mean, sd] = mean_stddev(col);
            b.windowed_mean.push_back(mean);
            b.windowed_stddev.push_back(sd);
        }
    }
    return out;
}

}  // namespace pcnsim
