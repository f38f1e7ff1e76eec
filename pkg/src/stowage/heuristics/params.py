"""Parameter records for the five algorithms.

Size-dependent defaults (``None``) are resolved against an instance with
``resolved(instance)``; the result is a fully populated copy.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any

from ..model import Instance
from .moves import GUIDE_RATE


def default_radius(size: int) -> int:
    return max(1, size // 10)


class _Params:
    def resolved(self, instance: Instance):
        return self

    def replace(self, **changes: Any):
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    def _check_guide(self):
        if not 0.0 <= self.guide_rate <= 1.0:
            raise ValueError("guide_rate must lie in [0, 1]")


@dataclass(frozen=True)
class SAParams(_Params):
    population_size: int = 20
    iterations: int = 100
    divisor_M: float = 2.0
    initial_temperature: float | None = None  # None: T + Q
    cooling_factor: float = 0.95
    neighborhood_radius: int | None = None
    guide_rate: float = GUIDE_RATE

    def __post_init__(self):
        if self.divisor_M <= 1:
            raise ValueError("divisor_M must be > 1")
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.initial_temperature is not None and self.initial_temperature <= 0:
            raise ValueError("initial_temperature must be > 0")
        if not 0 < self.cooling_factor < 1:
            raise ValueError("cooling_factor must lie in (0, 1)")
        if self.neighborhood_radius is not None and self.neighborhood_radius < 1:
            raise ValueError("neighborhood_radius must be >= 1")
        self._check_guide()

    def resolved(self, instance: Instance) -> SAParams:
        temp = self.initial_temperature
        if temp is None:
            temp = float(max(instance.base_time + instance.penalty, 1))
        radius = self.neighborhood_radius or default_radius(instance.problem_size)
        return self.replace(initial_temperature=temp, neighborhood_radius=radius)


@dataclass(frozen=True)
class TSParams(_Params):
    population_size: int = 20
    outer_iterations: int = 100
    problem_size: int | None = None  # s; None: number of usable cells
    tabu_tenure: int = 7
    max_radius: int | None = None
    guide_rate: float = GUIDE_RATE

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.outer_iterations < 0:
            raise ValueError("outer_iterations must be >= 0")
        if self.tabu_tenure < 0:
            raise ValueError("tabu_tenure must be >= 0")
        if self.outer_iterations and self.tabu_tenure > self.outer_iterations * self.population_size:
            raise ValueError("tabu_tenure must not exceed outer_iterations * population_size")
        _check_size(self)
        self._check_guide()

    def resolved(self, instance: Instance) -> TSParams:
        return _resolve_size(self, instance)


@dataclass(frozen=True)
class LCAParams(_Params):
    population_size: int = 20
    iterations: int = 100
    alpha: int | None = None
    guide_rate: float = GUIDE_RATE

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.alpha is not None and self.alpha < 1:
            raise ValueError("alpha must be a positive integer")
        self._check_guide()

    def resolved(self, instance: Instance) -> LCAParams:
        size = instance.problem_size
        alpha = self.alpha or default_radius(size)
        if size > 1 and alpha >= size:
            raise ValueError(f"alpha must be below the problem size {size}")
        return self.replace(alpha=alpha)


@dataclass(frozen=True)
class VEAParams(_Params):
    population_size: int = 20
    outer_iterations: int = 100
    problem_size: int | None = None
    max_radius: int | None = None
    guide_rate: float = GUIDE_RATE

    def __post_init__(self):
        if self.population_size < 1:
            raise ValueError("population_size must be >= 1")
        if self.outer_iterations < 0:
            raise ValueError("outer_iterations must be >= 0")
        _check_size(self)
        self._check_guide()

    def resolved(self, instance: Instance) -> VEAParams:
        return _resolve_size(self, instance)


@dataclass(frozen=True)
class MVAParams(_Params):
    universe_count: int = 5
    next_population_size: int = 4
    outer_iterations: int = 100
    problem_size: int | None = None
    max_radius: int | None = None
    guide_rate: float = GUIDE_RATE

    def __post_init__(self):
        if self.universe_count < 1 or self.next_population_size < 1:
            raise ValueError("universe_count and next_population_size must be >= 1")
        if self.next_population_size > self.universe_count:
            raise ValueError("next_population_size must not exceed universe_count")
        if self.outer_iterations < 0:
            raise ValueError("outer_iterations must be >= 0")
        _check_size(self)
        self._check_guide()

    def resolved(self, instance: Instance) -> MVAParams:
        return _resolve_size(self, instance)


def _check_size(params) -> None:
    if params.problem_size is not None and params.problem_size < 1:
        raise ValueError("problem_size must be >= 1")
    if params.max_radius is not None and params.max_radius < 1:
        raise ValueError("max_radius must be >= 1")


def _resolve_size(params, instance: Instance):
    size = params.problem_size or max(1, instance.problem_size)
    radius = params.max_radius or default_radius(size)
    return params.replace(problem_size=size, max_radius=radius)


PARAM_TYPES = {
    "sa": SAParams,
    "ts": TSParams,
    "lca": LCAParams,
    "vea": VEAParams,
    "mva": MVAParams,
}

# name of the main-loop counter per algorithm, set by ``--iterations``
ITERATION_FIELD = {
    "sa": "iterations",
    "ts": "outer_iterations",
    "lca": "iterations",
    "vea": "outer_iterations",
    "mva": "outer_iterations",
}
