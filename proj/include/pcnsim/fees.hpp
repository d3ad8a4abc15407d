#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pcnsim/network.hpp"
#include "pcnsim/types.hpp"

namespace pcnsim {

/// The four fee inputs: balance in payment direction, balance in reverse
/// direction, reference point, and the value forwarded on the channel.
struct FeeInput {
    Amount c_minus = 0;
    Amount c_plus = 0;
    Amount ref = 0;
    Amount x = 0;
};

/// True iff the input lies in the fee domain: all components non-negative,
/// positive total capacity, x <= c_minus and ref <= c_minus + c_plus.
bool in_fee_domain(const FeeInput& in);

enum class FeeKind { lightning, distasi, merchant_v1, merchant_v2 };

std::string_view to_string(FeeKind kind);
FeeKind parse_fee_kind(std::string_view name);

struct FeePolicy {
    FeeKind kind = FeeKind::lightning;
    Amount base_fee = 1.0;  // Lightning and di Stasi
    double rate = 1e-6;     // Lightning
    double rate_low = 0.01; // di Stasi, non-deteriorating part
    double rate_high = 0.03;
    double factor = 1.0;    // Merchant F

    static FeePolicy lightning(Amount base = 1.0, double rate = 1e-6);
    static FeePolicy distasi(Amount base = 1.0, double r1 = 0.01, double r2 = 0.03);
    static FeePolicy merchant_v1(double factor = 1.0);
    static FeePolicy merchant_v2(double factor = 1.0);
    static FeePolicy of_kind(FeeKind kind);

    /// Throws ConfigError on negative parameters or r2 <= r1.
    void validate() const;
};

// Checked evaluators. The balance-aware ones throw std::domain_error outside
// the fee domain.
Amount fee_lightning(const FeePolicy& policy, Amount x);
Amount fee_distasi(const FeePolicy& policy, const FeeInput& in);
Amount fee_merchant_v1(const FeePolicy& policy, const FeeInput& in);
Amount fee_merchant_v2(const FeePolicy& policy, const FeeInput& in);

/// Dispatches on policy.kind with domain checking.
Amount fee(const FeePolicy& policy, const FeeInput& in);

/// Dispatches without domain checking. Routers use this to price loads that
/// may exceed the balance before feasibility is decided.
Amount fee_unchecked(const FeePolicy& policy, const FeeInput& in);

struct PathFees {
    std::vector<Amount> fees;   // fees[0] == 0
    std::vector<Amount> loads;  // value pushed through each hop
    Amount total = 0;
};

/// Backward fee recursion along a path. The last hop carries `tx`; each
/// earlier hop carries `tx` plus all fees charged downstream of it. The
/// sender's own channel carries no fee.
PathFees path_fees(const FeePolicy& policy, std::span<const HopState> hops, Amount tx);

}  // namespace pcnsim
