#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "pcnsim/route_plan.hpp"
#include "pcnsim/types.hpp"

namespace pcnsim {

/// Both directed balances of one channel. `a < b` always; "fwd" means a -> b.
/// `reference` is the preferred a -> b balance; the b -> a reference is the
/// complement with respect to the total capacity.
struct ChannelState {
    NodeId a = 0;
    NodeId b = 0;
    Amount balance_fwd = 0;
    Amount balance_rev = 0;
    Amount reference = 0;
    Amount capacity = 0;  // fixed at creation

    Amount total() const { return balance_fwd + balance_rev; }
};

/// Channel state as seen by a payment going u -> v.
struct HopState {
    Amount c_minus = 0;  // balance in payment direction
    Amount c_plus = 0;   // balance in reverse direction
    Amount ref = 0;      // reference point for the payment direction
};

struct Neighbor {
    NodeId node;
    ChannelId channel;
    bool forward;  // true if the owning node is the channel's `a` endpoint
};

struct FailedHop {
    std::size_t path = 0;
    std::size_t hop = 0;
    NodeId from = 0;
    NodeId to = 0;
    Amount required = 0;
    Amount available = 0;
};

struct PaymentResult {
    bool committed = false;
    std::optional<FailedHop> failure;
};

class PaymentNetwork {
 public:
    PaymentNetwork() = default;
    explicit PaymentNetwork(std::size_t node_count);

    /// Opens a channel with directed balances u->v and v->u. The reference
    /// point for u->v defaults to half the total capacity.
    ChannelId add_channel(NodeId u, NodeId v, Amount balance_uv, Amount balance_vu,
                          std::optional<Amount> reference_uv = std::nullopt);

    std::size_t node_count() const { return adjacency_.size(); }
    std::size_t channel_count() const { return channels_.size(); }

    std::optional<ChannelId> find_channel(NodeId u, NodeId v) const;
    bool has_channel(NodeId u, NodeId v) const { return find_channel(u, v).has_value(); }

    const ChannelState& channel(ChannelId id) const { return channels_.at(id); }
    std::span<const ChannelState> channels() const { return channels_; }
    std::span<const Neighbor> neighbors(NodeId u) const { return adjacency_.at(u); }

    Amount balance(NodeId u, NodeId v) const;
    Amount capacity(NodeId u, NodeId v) const;
    Amount reference(NodeId u, NodeId v) const;
    HopState hop_state(NodeId u, NodeId v) const;

    Amount balance(const Neighbor& n) const {
        const auto& c = channels_[n.channel];
        return n.forward ? c.balance_fwd : c.balance_rev;
    }
    HopState hop_state(const Neighbor& n) const;

    /// Moves `amount` from the u side to the v side of channel (u, v).
    void apply_transfer(NodeId u, NodeId v, Amount amount);

    /// Executes every path of the plan hop by hop. Either all transfers are
    /// committed or the network is left bit-for-bit untouched.
    PaymentResult apply_payment(const RoutePlan& plan);

    Amount total_capacity() const;
    /// Hash over every directed balance's bit pattern.
    std::uint64_t state_hash() const;

 private:
    static std::uint64_t key(NodeId u, NodeId v);

    std::vector<ChannelState> channels_;
    std::vector<std::vector<Neighbor>> adjacency_;
    std::unordered_map<std::uint64_t, ChannelId> index_;
};

}  // namespace pcnsim
