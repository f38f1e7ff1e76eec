"""Laying chicken search: eggs that fail to beat the incumbent are re-laid next to it."""

from __future__ import annotations

import random
import time

from ..model import Instance
from .moves import Plan, perturb_plan, population_near
from .params import LCAParams
from .trace import BestTracker, RunTrace


def run_lca(instance: Instance, params: LCAParams, rng: random.Random, seed=None) -> RunTrace:
    p = params.resolved(instance)
    start = time.perf_counter()
    incumbent = Plan.random(instance, rng)
    tracker = BestTracker(incumbent)
    eggs = population_near(incumbent, p.population_size, p.alpha, rng, p.guide_rate)
    for _ in range(p.iterations):
        for k, egg in enumerate(eggs):
            if not egg.value < incumbent.value:
                egg, _ = perturb_plan(incumbent, p.alpha, rng, p.guide_rate)
            eggs[k], _ = perturb_plan(egg, 1, rng, p.guide_rate)
        hatched = min(range(len(eggs)), key=lambda k: (eggs[k].value, k))
        if eggs[hatched].value < incumbent.value:
            incumbent = eggs[hatched].copy()
        tracker.offer(incumbent)
        tracker.close_iteration()
    return RunTrace(
        "lca", seed, tracker.values, tracker.plan.to_solution(), p.as_dict(),
        time.perf_counter() - start,
    )
