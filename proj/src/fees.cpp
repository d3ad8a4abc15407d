#include "pcnsim/fees.hpp"

#include <cmath>
#include <stdexcept>

namespace pcnsim {

bool in_fee_domain(const FeeInput& in) {
    const Amount total = in.c_minus + in.c_plus;
    return in.c_minus >= 0 && in.c_plus >= 0 && in.ref >= 0 && in.x >= 0 && total > 0 &&
           in.x <= in.c_minus && in.ref <= total;
}

std::string_view to_string(FeeKind kind) {
    switch (kind) {
        case FeeKind::lightning: return "lightning";
        case FeeKind::distasi: return "distasi";
        case FeeKind::merchant_v1: return "merchant_v1";
        case FeeKind::merchant_v2: return "merchant_v2";
    }
    return "unknown";
}

FeeKind parse_fee_kind(std::string_view name) {
    if (name == "lightning") return FeeKind::lightning;
    if (name == "distasi" || name == "di_stasi") return FeeKind::distasi;
    if (name == "merchant_v1" || name == "merchant1") return FeeKind::merchant_v1;
    if (name == "merchant_v2" || name == "merchant2") return FeeKind::merchant_v2;
    throw ConfigError("unknown fee policy '" + std::string(name) + "'");
}

FeePolicy FeePolicy::lightning(Amount base, double rate) {
    FeePolicy p;
    p.kind = FeeKind::lightning;
    p.base_fee = base;
    p.rate = rate;
    return p;
}

FeePolicy FeePolicy::distasi(Amount base, double r1, double r2) {
    FeePolicy p;
    p.kind = FeeKind::distasi;
    p.base_fee = base;
    p.rate_low = r1;
    p.rate_high = r2;
    return p;
}

FeePolicy FeePolicy::merchant_v1(double factor) {
    FeePolicy p;
    p.kind = FeeKind::merchant_v1;
    p.factor = factor;
    return p;
}

FeePolicy FeePolicy::merchant_v2(double factor) {
    FeePolicy p;
    p.kind = FeeKind::merchant_v2;
    p.factor = factor;
    return p;
}

FeePolicy FeePolicy::of_kind(FeeKind kind) {
    FeePolicy p;
    p.kind = kind;
    return p;
}

void FeePolicy::validate() const {
    if (base_fee < 0 || rate < 0 || rate_low < 0 || rate_high < 0)
        throw ConfigError("fee parameters must be non-negative");
    if (kind == FeeKind::distasi && !(rate_high > rate_low))
        throw ConfigError("di Stasi fees need rate_high > rate_low");
    if ((kind == FeeKind::merchant_v1 || kind == FeeKind::merchant_v2) && !(factor > 0))
        throw ConfigError("merchant factor must be positive");
}

namespace {

void require_domain(const FeeInput& in) {
    if (!in_fee_domain(in)) throw std::domain_error("fee input outside the fee domain");
}

Amount distasi_raw(const FeePolicy& p, const FeeInput& in) {
    const Amount half = (in.c_minus + in.c_plus) / 2;
    Amount low = 0;
    if (in.c_minus < half)
        low = 0;
    else if (in.c_minus - in.x >= half)
        low = in.x;
    else
        low = in.c_minus - half;
    const Amount high = in.x - low;
    return p.base_fee + low * p.rate_low + high * p.rate_high;
}

// Change of distance to the reference point, normalised by total capacity.
double imbalance_delta(const FeeInput& in) {
    return (std::abs(in.c_minus - in.x - in.ref) - std::abs(in.c_minus - in.ref)) /
           (in.c_minus + in.c_plus);
}

Amount merchant_v1_raw(const FeePolicy& p, const FeeInput& in) {
    return (1.0 + imbalance_delta(in)) * p.factor;
}

Amount merchant_v2_raw(const FeePolicy& p, const FeeInput& in) {
    if (std::abs(in.c_minus - in.x - in.ref) <= std::abs(in.c_minus - in.ref)) return 0;
    return imbalance_delta(in) * p.factor;
}

}  // namespace

Amount fee_lightning(const FeePolicy& policy, Amount x) {
    if (!(x >= 0)) throw std::domain_error("negative payment value");
    return policy.base_fee + policy.rate * x;
}

Amount fee_distasi(const FeePolicy& policy, const FeeInput& in) {
    require_domain(in);
    return distasi_raw(policy, in);
}

Amount fee_merchant_v1(const FeePolicy& policy, const FeeInput& in) {
    require_domain(in);
    return merchant_v1_raw(policy, in);
}

Amount fee_merchant_v2(const FeePolicy& policy, const FeeInput& in) {
    require_domain(in);
    return merchant_v2_raw(policy, in);
}

Amount fee(const FeePolicy& policy, const FeeInput& in) {
    switch (policy.kind) {
        case FeeKind::lightning: return fee_lightning(policy, in.x);
        case FeeKind::distasi: return fee_distasi(policy, in);
        case FeeKind::merchant_v1: return fee_merchant_v1(policy, in);
        case FeeKind::merchant_v2: return fee_merchant_v2(policy, in);
    }
    throw std::logic_error("unhandled fee kind");
}

Amount fee_unchecked(const FeePolicy& policy, const FeeInput& in) {
    switch (policy.kind) {
        case FeeKind::lightning: return policy.base_fee + policy.rate * in.x;
        case FeeKind::distasi: return distasi_raw(policy, in);
        case FeeKind::merchant_v1: return merchant_v1_raw(policy, in);
        case FeeKind::merchant_v2: return merchant_v2_raw(policy, in);
    }
    throw std::logic_error("unhandled fee kind");
}

PathFees path_fees(const FeePolicy& policy, std::span<const HopState> hops, Amount tx) {
    PathFees out;
    const std::size_t n = hops.size();
    out.fees.assign(n, 0.0);
    out.loads.assign(n, 0.0);
    Amount downstream = 0;
    for (std::size_t j = n; j-- > 0;) {
        out.loads[j] = tx + downstream;
        if (j == 0) break;
        const auto& h = hops[j];
        const Amount f = fee_unchecked(policy, {h.c_minus, h.c_plus, h.ref, out.loads[j]});
        out.fees[j] = f;
        downstream += f;
    }
    out.total = downstream;
    return out;
}

}  // namespace pcnsim
