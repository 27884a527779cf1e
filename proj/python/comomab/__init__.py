"""Combinatorial multi-objective bandits (C++ core)."""

from ._comomab import (
    ConfigurationError,
    DimensionError,
    compute_pareto_front,
    compute_spf,
    dominates,
    environment_from_config,
    hoeffding_violation_bound,
    incomparable,
    lambert_w,
    outage_probability,
    paper6_environment,
    psg,
    psg_oracle,
    run_config,
    super_dominates,
    theorem1_bound,
    weakly_dominates,
)

__all__ = [
    "ConfigurationError",
    "DimensionError",
    "compute_pareto_front",
    "compute_spf",
    "dominates",
    "environment_from_config",
    "hoeffding_violation_bound",
    "incomparable",
    "lambert_w",
    "outage_probability",
    "paper6_environment",
    "psg",
    "psg_oracle",
    "run_config",
    "super_dominates",
    "theorem1_bound",
    "weakly_dominates",
]
