#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace pcnsim {

/// Dense node index, contiguous 0..N-1 within one network.
using NodeId = std::uint32_t;
using ChannelId = std::uint32_t;

/// Coin amounts in satoshi. Real-valued: fee rates produce fractional amounts
/// and no rounding is applied anywhere.
using Amount = double;

inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

struct MissingChannel : std::out_of_range {
    MissingChannel(NodeId u, NodeId v)
        : std::out_of_range("no channel between " + std::to_string(u) + " and " +
                            std::to_string(v)) {}
};

struct InsufficientBalance : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace pcnsim
