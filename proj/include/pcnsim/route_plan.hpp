#pragma once

#include <cstdint>
#include <vector>

#include "pcnsim/types.hpp"

namespace pcnsim {

/// One path of a payment together with its hop-by-hop fee breakdown.
///
/// `nodes` runs from source to destination, so hop j is the channel
/// nodes[j] -> nodes[j+1]. `loads[j]` is the value pushed through hop j and
/// `fees[j]` the fee retained by nodes[j] for forwarding on it; fees[0] is
/// always zero because the sender owns the first channel.
struct CandidatePath {
    std::vector<NodeId> nodes;
    std::vector<Amount> loads;
    std::vector<Amount> fees;
    Amount amount = 0;    // value delivered to the destination
    Amount path_fee = 0;  // sum of fees
    int tree_index = -1;  // -1 for source-routed paths

    std::size_t hop_count() const { return nodes.empty() ? 0 : nodes.size() - 1; }
    Amount carried_value() const { return loads.empty() ? 0 : loads.front(); }
};

enum class RouteStatus : std::uint8_t {
    ok,
    not_embedded,       // source or destination outside the tree
    dead_end,           // no closer neighbour with enough balance
    hop_cap,            // walk exceeded the node count
    infeasible_load,    // fee-inflated load exceeds a hop's balance
    too_few_paths,      // fewer than k probes succeeded
    capacity_violation, // aggregated loads of the selected paths exceed a balance
    no_path,            // source router found nothing under the capacity filter
};

const char* to_string(RouteStatus status);

struct RoutePlan {
    std::vector<CandidatePath> selected;
    int candidates_probed = 0;
    int candidates_found = 0;
    Amount total_fee = 0;
    std::int64_t messages = 0;
    RouteStatus status = RouteStatus::ok;

    bool ok() const { return status == RouteStatus::ok; }
    /// Sum of first-hop loads, i.e. everything leaving the source.
    Amount source_outflow() const;
};

/// Sum over paths and hops of the per-hop fees.
Amount total_fee(const RoutePlan& plan);

}  // namespace pcnsim
