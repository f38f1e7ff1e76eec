"""Tabu search, volcano eruption and multiverse search.

The three share one skeleton. A scatter phase lets every member of one or
more populations ("universes") take a random step per round and records the
round's best ``X_t``. A refinement phase samples around the better of
``X_t`` and the previous refinement best ``Y_{t-1}`` and records ``Y_t``.

Each phase draws from its own random stream (the refinement stream is
seeded from the run's generator before anything else), so running round
``t`` of both phases back to back gives the same result as running all
scatter rounds first. One trace entry is written per round.

Tabu search additionally forbids undoing the moves that produced ``X_t``
and ``Y_t`` for ``tabu_tenure`` rounds, unless the move beats the global
best.
"""

from __future__ import annotations

import random
import time

from ..model import Instance
from .moves import Plan, TabuList, perturb_plan
from .params import MVAParams, TSParams, VEAParams
from .trace import BestTracker, RunTrace


def step_size(rng: random.Random, size: int, usable: int, max_radius: int) -> int:
    """Draw ``Rand`` in ``1..size``, rescale to the usable cell count, clamp to ``1..max_radius``."""
    rand = rng.randint(1, size)
    return min(max_radius, max(1, rand * usable // size))


def _best_index(plans) -> int:
    return min(range(len(plans)), key=lambda k: (plans[k].value, k))


def _run(
    tag: str,
    instance: Instance,
    rng: random.Random,
    universes: int,
    members: int,
    rounds: int,
    size: int,
    max_radius: int,
    guide_rate: float,
    tenure: int,
    params: dict,
    seed,
) -> RunTrace:
    start = time.perf_counter()
    refine_rng = random.Random(rng.getrandbits(64))
    usable = max(1, instance.problem_size)
    tabu = TabuList(tenure)

    worlds = [[Plan.random(instance, rng) for _ in range(members)] for _ in range(universes)]
    flat = [plan for world in worlds for plan in world]
    tracker = BestTracker(flat[_best_index(flat)])
    previous = None

    for t in range(1, rounds + 1):
        tabu.prune(t)
        aspiration = tracker.plan.value
        round_best, round_moves = None, None
        for world in worlds:
            applied = []
            for k in range(members):
                mag = step_size(rng, size, usable, max_radius)
                world[k], moves = perturb_plan(
                    world[k], mag, rng, guide_rate, tabu, t, aspiration
                )
                applied.append(moves)
            b = _best_index(world)
            if round_best is None or world[b].value < round_best.value:
                round_best, round_moves = world[b], applied[b]
        x_t = round_best
        tabu.record(round_moves, t)
        tracker.offer(x_t)

        center = previous if previous is not None and previous.value < x_t.value else x_t
        aspiration = tracker.plan.value
        samples = []
        for _ in range(members):
            mag = step_size(refine_rng, size, usable, max_radius)
            samples.append(
                perturb_plan(center, mag, refine_rng, guide_rate, tabu, t, aspiration)
            )
        b = _best_index([s[0] for s in samples])
        y_t, moves = samples[b]
        tabu.record(moves, t)
        tracker.offer(y_t)
        previous = y_t
        tracker.close_iteration()

    return RunTrace(
        tag, seed, tracker.values, tracker.plan.to_solution(), params,
        time.perf_counter() - start,
    )


def run_ts(instance: Instance, params: TSParams, rng: random.Random, seed=None) -> RunTrace:
    p = params.resolved(instance)
    return _run(
        "ts", instance, rng, 1, p.population_size, p.outer_iterations, p.problem_size,
        p.max_radius, p.guide_rate, p.tabu_tenure, p.as_dict(), seed,
    )


def run_vea(instance: Instance, params: VEAParams, rng: random.Random, seed=None) -> RunTrace:
    p = params.resolved(instance)
    return _run(
        "vea", instance, rng, 1, p.population_size, p.outer_iterations, p.problem_size,
        p.max_radius, p.guide_rate, 0, p.as_dict(), seed,
    )


def run_mva(instance: Instance, params: MVAParams, rng: random.Random, seed=None) -> RunTrace:
    p = params.resolved(instance)
    return _run(
        "mva", instance, rng, p.universe_count, p.next_population_size, p.outer_iterations,
        p.problem_size, p.max_radius, p.guide_rate, 0, p.as_dict(), seed,
    )
