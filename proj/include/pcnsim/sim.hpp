#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pcnsim/fees.hpp"
#include "pcnsim/network.hpp"
#include "pcnsim/routing.hpp"
#include "pcnsim/workload.hpp"

namespace pcnsim {

enum class RouterKind { multipath, cheapest_path };

std::string_view to_string(RouterKind kind);
RouterKind parse_router_kind(std::string_view name);

struct RouterSpec {
    RouterKind kind = RouterKind::multipath;
    int d = 10;
    int k = 1;
};

struct RunConfig {
    RouterSpec router;
    FeePolicy policy;
    TopologySpec topology;
    BalanceSpec balances;
    TransactionSpec transactions;
    std::uint64_t seed = 1;
    std::size_t window_size = 1000;
    int tree_budget = 0;  // trees to build; 0 means router.d
    bool keep_records = true;

    int trees_to_build() const { return tree_budget > 0 ? tree_budget : router.d; }
    /// Throws ConfigError when an invariant does not hold.
    void validate() const;
};

enum class Outcome : std::uint8_t { success, routing_failure, capacity_failure };

std::string_view to_string(Outcome outcome);

struct TransactionRecord {
    std::size_t index = 0;
    NodeId source = 0;
    NodeId dest = 0;
    Amount value = 0;
    Outcome outcome = Outcome::routing_failure;
    RouteStatus route_status = RouteStatus::ok;
    Amount total_fee = 0;  // zero unless the payment was committed
    std::int64_t messages = 0;
    int paths_used = 0;
};

struct RunMetrics {
    std::size_t count = 0;
    std::size_t successes = 0;
    std::size_t routing_failures = 0;
    std::size_t capacity_failures = 0;
    double overall_success_ratio = 0;
    std::vector<double> windowed_success;  // disjoint windows of window_size
    double mean_messages = 0;              // over all transactions
    double mean_messages_success = 0;      // over successful transactions
    double mean_fee_success = 0;
    Amount initial_capacity = 0;
    Amount final_capacity = 0;
    std::size_t excluded_nodes = 0;
    std::vector<TransactionRecord> records;
};

/// Sequential transaction loop over a privately owned network. State
/// persists between transactions, so depletion accumulates.
class Simulation {
 public:
    explicit Simulation(const RunConfig& config);
    Simulation(const RunConfig& config, PaymentNetwork network, std::vector<Transaction> transactions);

    bool done() const { return next_ >= transactions_.size(); }
    std::size_t position() const { return next_; }
    const Transaction& peek() const { return transactions_.at(next_); }

    /// Routes and, on success, commits the next transaction.
    TransactionRecord step();
    /// Routes a transaction against the current state without committing.
    RoutePlan route(const Transaction& tx) const;
    RunMetrics finish();

    const PaymentNetwork& network() const { return network_; }
    const std::vector<TreeEmbedding>& trees() const { return trees_; }
    const std::vector<Transaction>& transactions() const { return transactions_; }
    const RunConfig& config() const { return config_; }

 private:
    void prepare_trees();

    RunConfig config_;
    PaymentNetwork network_;
    std::vector<TreeEmbedding> trees_;
    std::vector<Transaction> transactions_;
    std::size_t next_ = 0;
    std::size_t excluded_ = 0;
    Amount initial_capacity_ = 0;
    std::vector<TransactionRecord> records_;
};

RunMetrics run(const RunConfig& config);
RunMetrics run(const RunConfig& config, PaymentNetwork network, std::vector<Transaction> transactions);

struct BatchResult {
    RunConfig config;
    std::vector<RunMetrics> runs;  // records dropped
    double mean_success = 0;
    double stddev_success = 0;
    double mean_messages = 0;
    double stddev_messages = 0;
    double mean_messages_success = 0;
    double stddev_messages_success = 0;
    std::vector<double> windowed_mean;
    std::vector<double> windowed_stddev;
};

/// Sample mean and standard deviation (n - 1 denominator; 0 for n == 1).
std::pair<double, double> mean_stddev(const std::vector<double>& values);

/// Runs every config with seeds seed+0 .. seed+repetitions-1 and aggregates.
/// `jobs > 1` runs independent repetitions on worker threads; results do not
/// depend on it.
std::vector<BatchResult> run_batch(const std::vector<RunConfig>& configs, int repetitions, int jobs = 1);

}  // namespace pcnsim
