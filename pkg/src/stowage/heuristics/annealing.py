"""Population simulated annealing with max-probability selection.

Each iteration samples a population around the incumbent, scores every
member with the modified acceptance probability and moves the incumbent to
the highest-scoring member, even when that member is worse.
"""

from __future__ import annotations

import math
import random
import time

from ..model import Instance
from .moves import Plan, population_near
from .params import SAParams
from .trace import BestTracker, RunTrace


def metropolis_probability(delta_c: float, temperature: float) -> float:
    """Textbook acceptance rule; kept for comparison, not used by :func:`run_sa`."""
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if delta_c <= 0:
        return 1.0
    return math.exp(-delta_c / temperature)


def sa_accept_probability(delta_c: float, temperature: float, divisor_M: float) -> float:
    """Score of a candidate that changes the objective by ``delta_c``.

    Strict improvements score ``exp(1/delta_c)``, which tends to 1 as the
    improvement grows. Everything else, ties included, scores
    ``exp(-delta_c/t) / M`` and so never exceeds ``1/M``.
    """
    if temperature <= 0:
        raise ValueError("temperature must be positive")
    if divisor_M <= 1:
        raise ValueError("divisor_M must be > 1")
    if delta_c < 0:
        return math.exp(1.0 / delta_c)
    return math.exp(-delta_c / temperature) / divisor_M


def run_sa(instance: Instance, params: SAParams, rng: random.Random, seed=None) -> RunTrace:
    p = params.resolved(instance)
    start = time.perf_counter()
    incumbent = Plan.random(instance, rng)
    tracker = BestTracker(incumbent)
    temperature = p.initial_temperature
    for _ in range(p.iterations):
        population = population_near(
            incumbent, p.population_size, p.neighborhood_radius, rng, p.guide_rate
        )
        # highest probability, then lowest objective, then lowest index
        chosen = max(
            range(len(population)),
            key=lambda k: (
                sa_accept_probability(population[k].value - incumbent.value, temperature, p.divisor_M),
                -population[k].value,
                -k,
            ),
        )
        incumbent = population[chosen]
        tracker.offer(incumbent)
        tracker.close_iteration()
        temperature *= p.cooling_factor
    return RunTrace(
        "sa", seed, tracker.values, tracker.plan.to_solution(), p.as_dict(),
        time.perf_counter() - start,
    )
