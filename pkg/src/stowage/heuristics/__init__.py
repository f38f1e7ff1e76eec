"""Population metaheuristics over a shared swap/relocate neighbourhood."""

from __future__ import annotations

import random

from ..model import Instance, random_feasible_solution
from .annealing import metropolis_probability, run_sa, sa_accept_probability
from .chicken import run_lca
from .moves import (
    GUIDE_RATE,
    MAX_RETRIES,
    Plan,
    TabuList,
    generate_population_near,
    perturb,
    perturb_plan,
)
from .params import (
    ITERATION_FIELD,
    PARAM_TYPES,
    LCAParams,
    MVAParams,
    SAParams,
    TSParams,
    VEAParams,
)
from .trace import RunTrace
from .twophase import run_mva, run_ts, run_vea

ALGORITHMS = {
    "sa": run_sa,
    "ts": run_ts,
    "lca": run_lca,
    "vea": run_vea,
    "mva": run_mva,
}


def make_params(algorithm: str, iterations: int | None = None, **overrides):
    cls = PARAM_TYPES[algorithm]
    if iterations is not None:
        overrides[ITERATION_FIELD[algorithm]] = iterations
    return cls(**overrides)


def solve(instance: Instance, algorithm: str, params=None, seed: int = 0) -> RunTrace:
    """Run one algorithm from a fresh generator seeded with ``seed``."""
    if algorithm not in ALGORITHMS:
        raise KeyError(f"unknown algorithm {algorithm!r}; expected one of {sorted(ALGORITHMS)}")
    if params is None:
        params = PARAM_TYPES[algorithm]()
    return ALGORITHMS[algorithm](instance, params, random.Random(seed), seed=seed)


__all__ = [
    "ALGORITHMS",
    "GUIDE_RATE",
    "ITERATION_FIELD",
    "LCAParams",
    "MAX_RETRIES",
    "MVAParams",
    "PARAM_TYPES",
    "Plan",
    "RunTrace",
    "SAParams",
    "TSParams",
    "TabuList",
    "VEAParams",
    "generate_population_near",
    "make_params",
    "metropolis_probability",
    "perturb",
    "perturb_plan",
    "random_feasible_solution",
    "run_lca",
    "run_mva",
    "run_sa",
    "run_ts",
    "run_vea",
    "sa_accept_probability",
    "solve",
]
