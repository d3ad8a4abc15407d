#include "pcnsim/routing.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "pcnsim/rng.hpp"

namespace pcnsim {

namespace {

std::string describe_excluded(const std::vector<NodeId>& nodes) {
    std::ostringstream s;
    s << nodes.size() << " node(s) outside the giant component:";
    for (std::size_t i = 0; i < nodes.size() && i < 10; ++i) s << ' ' << nodes[i];
    if (nodes.size() > 10) s << " ...";
    return s.str();
}

}  // namespace

DisconnectedNetwork::DisconnectedNetwork(std::vector<NodeId> excluded_nodes)
    : std::runtime_error(describe_excluded(excluded_nodes)), excluded(std::move(excluded_nodes)) {}

std::size_t TreeEmbedding::edge_count() const {
    std::size_t n = 0;
    for (NodeId p : parent)
        if (p != kNoNode) ++n;
    return n;
}

std::vector<bool> giant_component(const PaymentNetwork& net) {
    const std::size_t n = net.node_count();
    std::vector<int> comp(n, -1);
    std::vector<std::size_t> sizes;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] != -1) continue;
        const int c = static_cast<int>(sizes.size());
        sizes.push_back(0);
        comp[s] = c;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            ++sizes[c];
            for (const auto& nb : net.neighbors(u)) {
                if (comp[nb.node] == -1) {
                    comp[nb.node] = c;
                    stack.push_back(nb.node);
                }
            }
        }
    }
    std::vector<bool> member(n, false);
    if (sizes.empty()) return member;
    const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    for (NodeId u = 0; u < n; ++u) member[u] = comp[u] == best;
    return member;
}

TreeEmbedding build_tree(const PaymentNetwork& net, NodeId root, std::uint64_t seed,
                         int tree_index, const std::vector<bool>* members) {
    const std::size_t n = net.node_count();
    if (root >= n) throw std::out_of_range("tree root outside the node range");
    TreeEmbedding emb;
    emb.tree_index = tree_index;
    emb.root = root;
    emb.parent.assign(n, kNoNode);
    emb.coordinate.assign(n, {});
    emb.embedded.assign(n, false);

    Rng rng(seed);
    std::vector<std::uint32_t> children(n, 0);
    std::vector<NodeId> order;
    std::queue<NodeId> queue;
    emb.embedded[root] = true;
    queue.push(root);
    while (!queue.empty()) {
        const NodeId u = queue.front();
        queue.pop();
        order.clear();
        for (const auto& nb : net.neighbors(u)) order.push_back(nb.node);
        std::sort(order.begin(), order.end());
        std::shuffle(order.begin(), order.end(), rng);
        for (NodeId v : order) {
            if (emb.embedded[v]) continue;
            if (members && !(*members)[v]) continue;
            emb.embedded[v] = true;
            emb.parent[v] = u;
            emb.coordinate[v] = emb.coordinate[u];
            emb.coordinate[v].push_back(children[u]++);
            queue.push(v);
        }
    }
    return emb;
}

std::vector<TreeEmbedding> build_trees(const PaymentNetwork& net, int d, std::uint64_t seed,
                                       bool allow_disconnected) {
    if (d < 1) throw ConfigError("need at least one tree");
    if (net.node_count() == 0) throw ConfigError("cannot embed an empty network");
    const auto members = giant_component(net);
    std::vector<NodeId> candidates;
    std::vector<NodeId> excluded;
    for (NodeId u = 0; u < net.node_count(); ++u) (members[u] ? candidates : excluded).push_back(u);
    if (!excluded.empty() && !allow_disconnected) throw DisconnectedNetwork(std::move(excluded));

    std::vector<TreeEmbedding> trees;
    trees.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const std::uint64_t tree_seed = derive_seed(seed, Stream::trees, static_cast<std::uint64_t>(i));
        Rng pick(tree_seed);
        std::uniform_int_distribution<std::size_t> dist(0, candidates.size() - 1);
        const NodeId root = candidates[dist(pick)];
        trees.push_back(build_tree(net, root, mix_seed(tree_seed), i, &members));
    }
    return trees;
}

int tree_distance(const TreeEmbedding& emb, NodeId u, NodeId v) {
    const auto& cu = emb.coordinate[u];
    const auto& cv = emb.coordinate[v];
    const std::size_t m = std::min(cu.size(), cv.size());
    std::size_t common = 0;
    while (common < m && cu[common] == cv[common]) ++common;
    return static_cast<int>(cu.size() + cv.size() - 2 * common);
}

TreeProbe route_tree(const PaymentNetwork& net, const TreeEmbedding& emb, const FeePolicy& policy,
                     NodeId source, NodeId dest, Amount amount) {
    TreeProbe probe;
    if (!(amount > 0)) throw std::invalid_argument("payment amount must be positive");
    if (source == dest) {
        CandidatePath p;
        p.nodes = {source};
        p.amount = amount;
        p.tree_index = emb.tree_index;
        probe.path = std::move(p);
        return probe;
    }
    if (!emb.contains(source) || !emb.contains(dest)) {
        probe.status = RouteStatus::not_embedded;
        return probe;
    }

    CandidatePath path;
    path.nodes.push_back(source);
    std::vector<HopState> hops;
    NodeId cur = source;
    int cur_dist = tree_distance(emb, cur, dest);
    const std::size_t hop_cap = net.node_count();
    while (cur != dest) {
        if (hops.size() >= hop_cap) {
            probe.status = RouteStatus::hop_cap;
            return probe;
        }
        const Neighbor* best = nullptr;
        int best_dist = cur_dist;
        for (const auto& nb : net.neighbors(cur)) {
            if (!emb.contains(nb.node)) continue;
            if (net.balance(nb) < amount) continue;
            const int dist = tree_distance(emb, nb.node, dest);
            if (dist < best_dist || (best && dist == best_dist && nb.node < best->node)) {
                best = &nb;
                best_dist = dist;
            }
        }
        if (!best) {
            probe.status = RouteStatus::dead_end;
            return probe;
        }
        ++probe.messages;
        hops.push_back(net.hop_state(*best));
        path.nodes.push_back(best->node);
        cur = best->node;
        cur_dist = best_dist;
    }

    auto priced = path_fees(policy, hops, amount);
    for (std::size_t j = 0; j < hops.size(); ++j) {
        if (priced.loads[j] > hops[j].c_minus) {
            probe.status = RouteStatus::infeasible_load;
            return probe;
        }
    }
    path.loads = std::move(priced.loads);
    path.fees = std::move(priced.fees);
    path.path_fee = priced.total;
    path.amount = amount;
    path.tree_index = emb.tree_index;
    probe.path = std::move(path);
    return probe;
}

std::vector<CandidatePath> select_cheapest(std::vector<CandidatePath> candidates, int k) {
    if (k < 0 || static_cast<std::size_t>(k) > candidates.size())
        throw std::invalid_argument("fewer candidates than requested paths");
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const CandidatePath& a, const CandidatePath& b) {
                         if (a.path_fee != b.path_fee) return a.path_fee < b.path_fee;
                         return a.tree_index < b.tree_index;
                     });
    candidates.resize(static_cast<std::size_t>(k));
    return candidates;
}

RoutePlan route_multipath(const PaymentNetwork& net, std::span<const TreeEmbedding> embeddings,
                          const FeePolicy& policy, NodeId source, NodeId dest, Amount tx, int d,
                          int k) {
    if (!(tx > 0)) throw std::invalid_argument("payment amount must be positive");
    if (k < 1 || k > d || static_cast<std::size_t>(d) > embeddings.size())
        throw ConfigError("multipath routing needs 1 <= k <= d <= number of trees");

    RoutePlan plan;
    const Amount share = tx / k;
    std::vector<CandidatePath> found;
    for (int i = 0; i < d; ++i) {
        auto probe = route_tree(net, embeddings[static_cast<std::size_t>(i)], policy, source, dest, share);
        plan.messages += probe.messages;
        ++plan.candidates_probed;
        if (probe.path) found.push_back(std::move(*probe.path));
    }
    plan.candidates_found = static_cast<int>(found.size());
    if (found.size() < static_cast<std::size_t>(k)) {
        plan.status = RouteStatus::too_few_paths;
        return plan;
    }
    found = select_cheapest(std::move(found), k);

    // Aggregated load per directed channel against start-of-payment balances.
    std::unordered_map<std::uint64_t, Amount> load;
    for (const auto& p : found) {
        for (std::size_t j = 0; j < p.hop_count(); ++j) {
            const NodeId u = p.nodes[j];
            const NodeId v = p.nodes[j + 1];
            load[(static_cast<std::uint64_t>(u) << 32) | v] += p.loads[j];
        }
    }
    for (const auto& [key, amount] : load) {
        const auto u = static_cast<NodeId>(key >> 32);
        const auto v = static_cast<NodeId>(key & 0xffffffffU);
        if (amount > net.balance(u, v)) {
            plan.status = RouteStatus::capacity_violation;
            return plan;
        }
    }
    plan.selected = std::move(found);
    plan.total_fee = 0;
    for (const auto& p : plan.selected) plan.total_fee += p.path_fee;
    return plan;
}

RoutePlan route_cheapest_path(const PaymentNetwork& net, const FeePolicy& policy, NodeId source,
                              NodeId dest, Amount tx) {
    if (!(tx > 0)) throw std::invalid_argument("payment amount must be positive");
    RoutePlan plan;
    plan.candidates_probed = 1;
    const std::size_t n = net.node_count();
    if (source >= n || dest >= n) throw std::out_of_range("endpoint outside the node range");
    if (source == dest) {
        CandidatePath p;
        p.nodes = {source};
        p.amount = tx;
        plan.selected.push_back(std::move(p));
        plan.candidates_found = 1;
        return plan;
    }

    // arrive[v]: value that must reach v for tx to be delivered from v onward.
    constexpr Amount inf = std::numeric_limits<Amount>::infinity();
    std::vector<Amount> arrive(n, inf);
    std::vector<NodeId> next(n, kNoNode);
    std::vector<bool> settled(n, false);
    using Entry = std::pair<Amount, NodeId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    arrive[dest] = tx;
    queue.push({tx, dest});
    while (!queue.empty()) {
        const auto [value, v] = queue.top();
        queue.pop();
        if (settled[v]) continue;
        settled[v] = true;
        if (v == source) break;
        for (const auto& nb : net.neighbors(v)) {
            const NodeId u = nb.node;
            if (settled[u]) continue;
            const auto& c = net.channel(nb.channel);
            if (c.capacity < value) continue;
            Amount cost = value;
            if (u != source) {
                // Direction u -> v: u is `a` exactly when v's entry is not forward.
                const bool u_is_a = !nb.forward;
                const HopState h = u_is_a ? HopState{c.balance_fwd, c.balance_rev, c.reference}
                                          : HopState{c.balance_rev, c.balance_fwd,
                                                     c.capacity - c.reference};
                cost += fee_unchecked(policy, {h.c_minus, h.c_plus, h.ref, value});
            }
            if (cost < arrive[u]) {
                arrive[u] = cost;
                next[u] = v;
                queue.push({cost, u});
            }
        }
    }
    if (!settled[source]) {
        plan.status = RouteStatus::no_path;
        return plan;
    }

    CandidatePath path;
    std::vector<HopState> hops;
    for (NodeId u = source; u != dest; u = next[u]) {
        path.nodes.push_back(u);
        hops.push_back(net.hop_state(u, next[u]));
    }
    path.nodes.push_back(dest);
    auto priced = path_fees(policy, hops, tx);
    path.loads = std::move(priced.loads);
    path.fees = std::move(priced.fees);
    path.path_fee = priced.total;
    path.amount = tx;
    plan.messages = static_cast<std::int64_t>(path.hop_count());
    plan.total_fee = path.path_fee;
    plan.candidates_found = 1;
    plan.selected.push_back(std::move(path));
    return plan;
}

}  // namespace pcnsim
