#include "pcnsim/network.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace pcnsim {

const char* to_string(RouteStatus status) {
    switch (status) {
        case RouteStatus::ok: return "ok";
        case RouteStatus::not_embedded: return "not_embedded";
        case RouteStatus::dead_end: return "dead_end";
        case RouteStatus::hop_cap: return "hop_cap";
        case RouteStatus::infeasible_load: return "infeasible_load";
        case RouteStatus::too_few_paths: return "too_few_paths";
        case RouteStatus::capacity_violation: return "capacity_violation";
        case RouteStatus::no_path: return "no_path";
    }
    return "unknown";
}

Amount RoutePlan::source_outflow() const {
    Amount out = 0;
    for (const auto& p : selected) out += p.carried_value();
    return out;
}

Amount total_fee(const RoutePlan& plan) {
    Amount f = 0;
    for (const auto& p : plan.selected)
        for (std::size_t j = 1; j < p.fees.size(); ++j) f += p.fees[j];
    return f;
}

PaymentNetwork::PaymentNetwork(std::size_t node_count) : adjacency_(node_count) {}

std::uint64_t PaymentNetwork::key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

ChannelId PaymentNetwork::add_channel(NodeId u, NodeId v, Amount balance_uv, Amount balance_vu,
                                      std::optional<Amount> reference_uv) {
    if (u >= node_count() || v >= node_count())
        throw std::out_of_range("channel endpoint outside the node range");
    if (u == v) throw std::invalid_argument("self-loop channel");
    if (!(balance_uv >= 0) || !(balance_vu >= 0))
        throw std::invalid_argument("negative channel balance");
    const Amount total = balance_uv + balance_vu;
    if (!(total > 0)) throw std::invalid_argument("channel with zero total capacity");
    const Amount ref_uv = reference_uv.value_or(total / 2);
    if (!(ref_uv >= 0 && ref_uv <= total))
        throw std::invalid_argument("reference point outside [0, capacity]");
    const auto k = key(u, v);
    if (index_.contains(k)) throw std::invalid_argument("duplicate channel");

    ChannelState c;
    const bool u_is_a = u < v;
    c.a = u_is_a ? u : v;
    c.b = u_is_a ? v : u;
    c.balance_fwd = u_is_a ? balance_uv : balance_vu;
    c.balance_rev = u_is_a ? balance_vu : balance_uv;
    c.reference = u_is_a ? ref_uv : total - ref_uv;
    c.capacity = total;

    const auto id = static_cast<ChannelId>(channels_.size());
    channels_.push_back(c);
    index_.emplace(k, id);
    adjacency_[c.a].push_back({c.b, id, true});
    adjacency_[c.b].push_back({c.a, id, false});
    return id;
}

std::optional<ChannelId> PaymentNetwork::find_channel(NodeId u, NodeId v) const {
    auto it = index_.find(key(u, v));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Amount PaymentNetwork::balance(NodeId u, NodeId v) const {
    auto id = find_channel(u, v);
    if (!id) throw MissingChannel(u, v);
    const auto& c = channels_[*id];
    return u == c.a ? c.balance_fwd : c.balance_rev;
}

Amount PaymentNetwork::capacity(NodeId u, NodeId v) const {
    auto id = find_channel(u, v);
    if (!id) throw MissingChannel(u, v);
    return channels_[*id].capacity;
}

Amount PaymentNetwork::reference(NodeId u, NodeId v) const {
    auto id = find_channel(u, v);
    if (!id) throw MissingChannel(u, v);
    const auto& c = channels_[*id];
    return u == c.a ? c.reference : c.capacity - c.reference;
}

HopState PaymentNetwork::hop_state(NodeId u, NodeId v) const {
    auto id = find_channel(u, v);
    if (!id) throw MissingChannel(u, v);
    const auto& c = channels_[*id];
    if (u == c.a) return {c.balance_fwd, c.balance_rev, c.reference};
    return {c.balance_rev, c.balance_fwd, c.capacity - c.reference};
}

HopState PaymentNetwork::hop_state(const Neighbor& n) const {
    const auto& c = channels_[n.channel];
    if (n.forward) return {c.balance_fwd, c.balance_rev, c.reference};
    return {c.balance_rev, c.balance_fwd, c.capacity - c.reference};
}

void PaymentNetwork::apply_transfer(NodeId u, NodeId v, Amount amount) {
    auto id = find_channel(u, v);
    if (!id) throw MissingChannel(u, v);
    if (!(amount > 0)) throw std::invalid_argument("transfer amount must be positive");
    auto& c = channels_[*id];
    Amount& from = u == c.a ? c.balance_fwd : c.balance_rev;
    Amount& to = u == c.a ? c.balance_rev : c.balance_fwd;
    if (amount > from) {
        std::ostringstream msg;
        msg << "transfer of " << amount << " exceeds balance " << from << " on " << u << "->" << v;
        throw InsufficientBalance(msg.str());
    }
    from -= amount;
    // Derive the other side from the fixed capacity so rounding cannot accumulate.
    to = c.capacity - from;
}

PaymentResult PaymentNetwork::apply_payment(const RoutePlan& plan) {
    // Staged balances for every touched channel; written back only on success.
    struct Staged {
        ChannelId id;
        Amount fwd;
        Amount rev;
    };
    std::vector<Staged> staged;
    auto stage = [&](ChannelId id) -> Staged& {
        for (auto& s : staged)
            if (s.id == id) return s;
        staged.push_back({id, channels_[id].balance_fwd, channels_[id].balance_rev});
        return staged.back();
    };

    for (std::size_t p = 0; p < plan.selected.size(); ++p) {
        const auto& path = plan.selected[p];
        if (path.loads.size() != path.hop_count())
            throw std::invalid_argument("path loads do not match its hops");
        for (std::size_t j = 0; j < path.hop_count(); ++j) {
            const NodeId u = path.nodes[j];
            const NodeId v = path.nodes[j + 1];
            auto id = find_channel(u, v);
            if (!id) throw MissingChannel(u, v);
            auto& s = stage(*id);
            const bool fwd = u == channels_[*id].a;
            Amount& from = fwd ? s.fwd : s.rev;
            Amount& to = fwd ? s.rev : s.fwd;
            const Amount amount = path.loads[j];
            if (!(amount > 0) || amount > from)
                return {false, FailedHop{p, j, u, v, amount, from}};
            from -= amount;
            to = channels_[*id].capacity - from;
        }
    }
    for (const auto& s : staged) {
        channels_[s.id].balance_fwd = s.fwd;
        channels_[s.id].balance_rev = s.rev;
    }
    return {true, std::nullopt};
}

Amount PaymentNetwork::total_capacity() const {
    Amount sum = 0;
    for (const auto& c : channels_) sum += c.total();
    return sum;
}

std::uint64_t PaymentNetwork::state_hash() const {
    // FNV-1a over the raw bits of every directed balance.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xffU;
            h *= 1099511628211ULL;
        }
    };
    for (const auto& c : channels_) {
        mix(std::bit_cast<std::uint64_t>(c.balance_fwd));
        mix(std::bit_cast<std::uint64_t>(c.balance_rev));
    }
    return h;
}

}  // namespace pcnsim
