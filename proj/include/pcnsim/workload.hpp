#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcnsim/network.hpp"
#include "pcnsim/types.hpp"

namespace pcnsim {

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    std::optional<Amount> capacity;  // total capacity, when known

    bool operator==(const Edge&) const = default;
};

struct EdgeList {
    std::size_t node_count = 0;
    std::vector<Edge> edges;
    std::size_t dropped_self_loops = 0;
    std::size_t dropped_duplicates = 0;

    double average_degree() const {
        return node_count ? 2.0 * static_cast<double>(edges.size()) / static_cast<double>(node_count) : 0.0;
    }
    std::size_t warnings() const { return dropped_self_loops + dropped_duplicates; }
};

enum class TopologyKind { barabasi_albert, snapshot_file };
enum class Distribution { exponential, normal };

std::string_view to_string(Distribution d);
Distribution parse_distribution(std::string_view name);

struct TopologySpec {
    TopologyKind kind = TopologyKind::barabasi_albert;
    std::size_t node_count = 1000;
    std::size_t attach_count = 5;
    std::filesystem::path path;
};

struct BalanceSpec {
    Distribution distribution = Distribution::exponential;
    Amount mean = 2'400'000;  // expected total capacity per channel
    double normal_sd_fraction = 0.25;  // sd as a fraction of the per-direction mean
};

struct TransactionSpec {
    std::size_t count = 100'000;
    Distribution distribution = Distribution::exponential;
    double scale = 0.05;               // expected value = scale * init
    double normal_sd_fraction = 0.25;
    Amount floor = 1.0;                // minimum value for normal draws
};

struct Transaction {
    NodeId source = 0;
    NodeId dest = 0;
    Amount value = 0;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line_no)
        : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
    std::size_t line;
};

/// Preferential attachment: node m links to the m seed nodes, then every new
/// node attaches to m distinct targets drawn proportionally to degree.
/// Produces exactly (n - m) * m edges.
EdgeList generate_ba(std::size_t node_count, std::size_t attach_count, std::uint64_t seed);

/// Reads "u v [capacity]" lines; '#' starts a comment. Self-loops and
/// duplicate edges are dropped and counted.
EdgeList load_snapshot(const std::filesystem::path& path);
EdgeList parse_snapshot(std::istream& in);

EdgeList load_topology(const TopologySpec& spec, std::uint64_t seed);

/// Draws both directed balances of every channel. Without a known capacity
/// each direction has mean spec.mean / 2; with one, a uniform fraction of it
/// goes to the forward direction. Reference points sit at half capacity.
PaymentNetwork init_balances(const EdgeList& edges, const BalanceSpec& spec, std::uint64_t seed);

/// Uniform distinct endpoint pairs drawn from `node_ids`; values have mean
/// spec.scale * init.
std::vector<Transaction> generate_transactions(std::span<const NodeId> node_ids,
                                               const TransactionSpec& spec, Amount init,
                                               std::uint64_t seed);

}  // namespace pcnsim
