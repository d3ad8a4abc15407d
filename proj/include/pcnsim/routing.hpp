#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pcnsim/fees.hpp"
#include "pcnsim/network.hpp"
#include "pcnsim/route_plan.hpp"

namespace pcnsim {

/// Spanning tree with prefix coordinates: the root has the empty coordinate
/// and each child extends its parent's coordinate by its child index.
struct TreeEmbedding {
    int tree_index = 0;
    NodeId root = kNoNode;
    std::vector<NodeId> parent;                  // kNoNode for root / unembedded
    std::vector<std::vector<std::uint32_t>> coordinate;
    std::vector<bool> embedded;

    bool contains(NodeId u) const { return u < embedded.size() && embedded[u]; }
    std::size_t edge_count() const;
};

struct DisconnectedNetwork : std::runtime_error {
    DisconnectedNetwork(std::vector<NodeId> excluded_nodes);
    std::vector<NodeId> excluded;
};

/// Node membership of the largest connected component (lowest id wins ties).
std::vector<bool> giant_component(const PaymentNetwork& net);

/// BFS spanning tree from `root` over the nodes flagged in `members`.
/// Neighbour order at every node is shuffled by `seed`, which decides ties
/// between equal-depth attachments.
TreeEmbedding build_tree(const PaymentNetwork& net, NodeId root, std::uint64_t seed,
                         int tree_index = 0, const std::vector<bool>* members = nullptr);

/// Builds d BFS trees with seed-chosen roots. Tree i depends only on
/// (net, seed, i), so the first d' trees of a d-tree build equal a d'-tree
/// build. Nodes outside the giant component stay unembedded; with
/// `allow_disconnected == false` they raise DisconnectedNetwork instead.
std::vector<TreeEmbedding> build_trees(const PaymentNetwork& net, int d, std::uint64_t seed,
                                       bool allow_disconnected = true);

/// Hop distance in the tree: |c(u)| + |c(v)| - 2 * common prefix length.
int tree_distance(const TreeEmbedding& emb, NodeId u, NodeId v);

struct TreeProbe {
    std::optional<CandidatePath> path;
    RouteStatus status = RouteStatus::ok;
    std::int64_t messages = 0;
};

/// Greedy coordinate walk in one tree carrying `amount` to `dest`.
TreeProbe route_tree(const PaymentNetwork& net, const TreeEmbedding& emb,
                     const FeePolicy& policy, NodeId source, NodeId dest, Amount amount);

/// Keeps the k cheapest candidates, ties broken by lower tree index.
/// Requires candidates.size() >= k.
std::vector<CandidatePath> select_cheapest(std::vector<CandidatePath> candidates, int k);

/// k-of-d routing: probe the first `d` trees with tx/k each and keep the k
/// cheapest successful candidates.
RoutePlan route_multipath(const PaymentNetwork& net, std::span<const TreeEmbedding> embeddings,
                          const FeePolicy& policy, NodeId source, NodeId dest, Amount tx, int d,
                          int k);

/// Source-routed cheapest path. Searches backwards from `dest` so fees can
/// be priced on the accumulated load, and skips channels whose total
/// capacity is below that load. Directed balances are not consulted.
RoutePlan route_cheapest_path(const PaymentNetwork& net, const FeePolicy& policy, NodeId source,
                              NodeId dest, Amount tx);

}  // namespace pcnsim
