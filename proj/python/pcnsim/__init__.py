"""Payment channel network simulator with balance-incentive fee policies."""

from ._core import (
    ConfigError,
    FeeInput,
    FeeKind,
    FeePolicy,
    InsufficientBalance,
    PaymentNetwork,
    fee,
    fee_distasi,
    fee_lightning,
    fee_merchant_v1,
    fee_merchant_v2,
    generate_ba,
    in_fee_domain,
    load_snapshot,
    path_fees,
    run,
    run_config,
    tree_distance,
)

__all__ = [
    "ConfigError",
    "FeeInput",
    "FeeKind",
    "FeePolicy",
    "InsufficientBalance",
    "PaymentNetwork",
    "fee",
    "fee_distasi",
    "fee_lightning",
    "fee_merchant_v1",
    "fee_merchant_v2",
    "generate_ba",
    "in_fee_domain",
    "load_snapshot",
    "path_fees",
    "run",
    "run_config",
    "tree_distance",
]
