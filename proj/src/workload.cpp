#include "pcnsim/workload.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "pcnsim/rng.hpp"

namespace pcnsim {

std::string_view to_string(Distribution d) {
    return d == Distribution::exponential ? "exponential" : "normal";
}

Distribution parse_distribution(std::string_view name) {
    if (name == "exponential" || name == "exp") return Distribution::exponential;
    if (name == "normal") return Distribution::normal;
    throw ConfigError("unknown distribution '" + std::string(name) + "'");
}

EdgeList generate_ba(std::size_t node_count, std::size_t attach_count, std::uint64_t seed) {
    if (attach_count < 1 || node_count <= attach_count)
        throw ConfigError("Barabasi-Albert needs node_count > attach_count >= 1");
    Rng rng(seed);
    EdgeList out;
    out.node_count = node_count;
    out.edges.reserve((node_count - attach_count) * attach_count);

    std::vector<NodeId> targets(attach_count);
    for (std::size_t i = 0; i < attach_count; ++i) targets[i] = static_cast<NodeId>(i);
    // Every endpoint occurrence, so a uniform draw is degree-proportional.
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * out.edges.capacity());
    std::vector<NodeId> picked;
    for (std::size_t src = attach_count; src < node_count; ++src) {
        const auto s = static_cast<NodeId>(src);
        for (NodeId t : targets) {
            out.edges.push_back({t, s, std::nullopt});
            endpoints.push_back(t);
            endpoints.push_back(s);
        }
        if (src + 1 == node_count) break;
        picked.clear();
        std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
        while (picked.size() < attach_count) {
            const NodeId t = endpoints[pick(rng)];
            if (std::find(picked.begin(), picked.end(), t) == picked.end()) picked.push_back(t);
        }
        targets = picked;
    }
    return out;
}

EdgeList parse_snapshot(std::istream& in) {
    EdgeList out;
    std::set<std::pair<NodeId, NodeId>> seen;
    std::string line;
    std::size_t line_no = 0;
    std::size_t max_id = 0;
    bool any = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        if (tok.size() != 2 && tok.size() != 3)
            throw ParseError("expected 'u v' or 'u v capacity'", line_no);

        auto parse_id = [&](const std::string& t) {
            unsigned long long v = 0;
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (ec != std::errc() || ptr != t.data() + t.size() || v >= kNoNode)
                throw ParseError("invalid node id '" + t + "'", line_no);
            return static_cast<NodeId>(v);
        };
        const NodeId u = parse_id(tok[0]);
        const NodeId v = parse_id(tok[1]);
        std::optional<Amount> cap;
        if (tok.size() == 3) {
            std::size_t used = 0;
            double c = 0;
            try {
                c = std::stod(tok[2], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok[2].size() || !(c > 0))
                throw ParseError("invalid capacity '" + tok[2] + "'", line_no);
            cap = c;
        }
        any = true;
        max_id = std::max<std::size_t>(max_id, std::max(u, v));
        if (u == v) {
            ++out.dropped_self_loops;
            continue;
        }
        if (!seen.insert({std::min(u, v), std::max(u, v)}).second) {
            ++out.dropped_duplicates;
            continue;
        }
        out.edges.push_back({u, v, cap});
    }
    out.node_count = any ? max_id + 1 : 0;
    return out;
}

EdgeList load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open snapshot '" + path.string() + "'");
    return parse_snapshot(in);
}

EdgeList load_topology(const TopologySpec& spec, std::uint64_t seed) {
    if (spec.kind == TopologyKind::snapshot_file) return load_snapshot(spec.path);
    return generate_ba(spec.node_count, spec.attach_count, derive_seed(seed, Stream::topology));
}

namespace {

Amount draw_positive(Rng& rng, Distribution dist, Amount mean, double sd_fraction, Amount floor) {
    if (dist == Distribution::exponential) {
        std::exponential_distribution<double> d(1.0 / mean);
        for (;;) {
            const Amount v = d(rng);
            if (v >= floor) return v;
        }
    }
    std::normal_distribution<double> d(mean, sd_fraction * mean);
    for (;;) {
        const Amount v = d(rng);
        if (v >= floor) return v;
    }
}

}  // namespace

PaymentNetwork init_balances(const EdgeList& edges, const BalanceSpec& spec, std::uint64_t seed) {
    if (!(spec.mean > 0)) throw ConfigError("balance mean must be positive");
    Rng rng(derive_seed(seed, Stream::balances));
    PaymentNetwork net(edges.node_count);
    const Amount half = spec.mean / 2;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& e : edges.edges) {
        Amount fwd = 0;
        Amount rev = 0;
        if (e.capacity) {
            fwd = unit(rng) * *e.capacity;
            rev = *e.capacity - fwd;
        } else {
            do {
                fwd = draw_positive(rng, spec.distribution, half, spec.normal_sd_fraction, 0.0);
                rev = draw_positive(rng, spec.distribution, half, spec.normal_sd_fraction, 0.0);
            } while (!(fwd + rev > 0));
        }
        net.add_channel(e.u, e.v, fwd, rev);
    }
    return net;
}

std::vector<Transaction> generate_transactions(std::span<const NodeId> node_ids,
                                               const TransactionSpec& spec, Amount init,
                                               std::uint64_t seed) {
    if (node_ids.size() < 2) throw ConfigError("transactions need at least two nodes");
    if (spec.count < 1) throw ConfigError("transaction count must be positive");
    if (!(spec.scale > 0)) throw ConfigError("transaction scale factor must be positive");
    Rng rng(derive_seed(seed, Stream::transactions));
    const Amount mean = spec.scale * init;
    std::uniform_int_distribution<std::size_t> pick(0, node_ids.size() - 1);
    std::uniform_int_distribution<std::size_t> pick_other(0, node_ids.size() - 2);
    std::vector<Transaction> out;
    out.reserve(spec.count);
    for (std::size_t i = 0; i < spec.count; ++i) {
        const std::size_t s = pick(rng);
        std::size_t d = pick_other(rng);
        if (d >= s) ++d;
        // Exponential draws are only rejected at exactly zero.
        const Amount floor = spec.distribution == Distribution::normal
                                 ? spec.floor
                                 : std::numeric_limits<Amount>::min();
        const Amount value = draw_positive(rng, spec.distribution, mean, spec.normal_sd_fraction, floor);
        out.push_back({node_ids[s], node_ids[d], value});
    }
    return out;
}

}  // namespace pcnsim
