"""Stowage planning for RoRo vessels: model, metaheuristics, exact oracle and benchmarks."""

from .heuristics import (
    ALGORITHMS,
    LCAParams,
    MVAParams,
    RunTrace,
    SAParams,
    TSParams,
    VEAParams,
    solve,
)
from .instances import (
    InstanceSpec,
    builtin_benchmark_suite,
    generate_instance,
    load_instance,
    parse_instance,
    serialize_instance,
)
from .model import (
    Cargo,
    Cell,
    Deck,
    FeasibilityReport,
    Instance,
    Relocate,
    Solution,
    Swap,
    check_feasibility,
    deck_load,
    delta_objective,
    evaluate_objective,
    random_feasible_solution,
    unload_time,
)
from .oracle import assignment_lower_bound, brute_force_optimal

__version__ = "0.1.0"
