"""Discrete neighbourhood shared by all algorithms.

Every move has the form "cargo ``i`` goes to cell ``c``": if ``c`` is empty
it is a relocate, otherwise the occupant of ``c`` takes the old cell of ``i``
(a swap). The pseudocode's continuous step ``X + Rand * X/||X||`` becomes a
sequence of ``magnitude`` such moves.

Moves are drawn either uniformly or *guided*: a guided draw takes a cargo
sitting in a cell of another category and sends it to a random cell of its
own category. A guided move never increases the objective; uniform draws
keep the walk able to reach any assignment.
"""

from __future__ import annotations

import random
from typing import Sequence

from ..model import (
    Instance,
    InvalidMoveError,
    Move,
    Relocate,
    Solution,
    Swap,
    random_cell_positions,
)

MAX_RETRIES = 50
GUIDE_RATE = 0.9


class Plan:
    """Mutable working copy of a feasible assignment, indexed by positions.

    ``cell_of[i]`` is the cell position of cargo position ``i`` and
    ``occupant[j]`` the cargo position in cell ``j`` (or -1). ``misfits`` holds
    the cargos whose category differs from their cell's, with ``misfit_at``
    giving each one's slot in that list.
    """

    __slots__ = ("inst", "cell_of", "occupant", "load", "value", "misfits", "misfit_at")

    def __init__(self, inst: Instance, cell_of: Sequence[int]):
        self.inst = inst
        self.cell_of = list(cell_of)
        self.occupant = [-1] * len(inst.cells)
        self.load = [0] * len(inst.decks)
        self.misfits: list[int] = []
        self.misfit_at = [-1] * inst.k
        value = 0
        for i, j in enumerate(self.cell_of):
            self.occupant[j] = i
            self.load[inst.cell_deck[j]] += inst.weights[i]
            value += inst.cost(i, j)
            if inst.cargo_cat[i] != inst.cell_cat[j]:
                self.misfit_at[i] = len(self.misfits)
                self.misfits.append(i)
        self.value = value

    @classmethod
    def from_solution(cls, inst: Instance, solution: Solution) -> Plan:
        return cls(inst, [inst.cell_pos[solution[c.id]] for c in inst.cargos])

    @classmethod
    def random(cls, inst: Instance, rng: random.Random) -> Plan:
        return cls(inst, random_cell_positions(inst, rng))

    def copy(self) -> Plan:
        new = Plan.__new__(Plan)
        new.inst = self.inst
        new.cell_of = self.cell_of[:]
        new.occupant = self.occupant[:]
        new.load = self.load[:]
        new.value = self.value
        new.misfits = self.misfits[:]
        new.misfit_at = self.misfit_at[:]
        return new

    def to_solution(self) -> Solution:
        inst = self.inst
        return Solution(
            {inst.cargos[i].id: inst.cells[j].id for i, j in enumerate(self.cell_of)}
        )

    def delta(self, i: int, c: int) -> int:
        inst = self.inst
        old = self.cell_of[i]
        d = inst.cost(i, c) - inst.cost(i, old)
        j = self.occupant[c]
        if j >= 0:
            d += inst.cost(j, old) - inst.cost(j, c)
        return d

    def fits(self, i: int, c: int) -> bool:
        """Whether moving cargo ``i`` to cell ``c`` keeps both decks within limits."""
        inst = self.inst
        src, dst = inst.cell_deck[self.cell_of[i]], inst.cell_deck[c]
        if src == dst:
            return True
        j = self.occupant[c]
        shift = inst.weights[i] - (inst.weights[j] if j >= 0 else 0)
        if shift > 0:
            return self.load[dst] + shift <= inst.limits[dst]
        return self.load[src] - shift <= inst.limits[src]

    def _mark(self, i: int) -> None:
        inst = self.inst
        bad = inst.cargo_cat[i] != inst.cell_cat[self.cell_of[i]]
        at = self.misfit_at[i]
        if bad and at < 0:
            self.misfit_at[i] = len(self.misfits)
            self.misfits.append(i)
        elif not bad and at >= 0:
            last = self.misfits.pop()
            if last != i:
                self.misfits[at] = last
                self.misfit_at[last] = at
            self.misfit_at[i] = -1

    def move(self, i: int, c: int) -> tuple[int, int, int]:
        """Send cargo ``i`` to cell ``c``; returns ``(old cell, displaced cargo, delta)``."""
        inst = self.inst
        old = self.cell_of[i]
        j = self.occupant[c]
        d = self.delta(i, c)
        src, dst = inst.cell_deck[old], inst.cell_deck[c]
        wi = inst.weights[i]
        self.load[src] -= wi
        self.load[dst] += wi
        self.cell_of[i] = c
        self.occupant[c] = i
        if j >= 0:
            wj = inst.weights[j]
            self.load[dst] -= wj
            self.load[src] += wj
            self.cell_of[j] = old
            self.occupant[old] = j
        else:
            self.occupant[old] = -1
        self.value += d
        self._mark(i)
        if j >= 0:
            self._mark(j)
        return old, j, d


class TabuList:
    """Attribute-based tabu memory.

    Applying a move forbids, for ``tenure`` iterations, every move that would
    put a touched cargo back into the cell it just left.
    """

    def __init__(self, tenure: int):
        self.tenure = tenure
        self._expiry: dict[tuple[int, int], int] = {}

    def __len__(self):
        return len(self._expiry)

    def record(self, moves: Sequence[tuple[int, int, int, int]], now: int) -> None:
        """Register applied moves ``(cargo, target cell, old cell, displaced)``."""
        if self.tenure <= 0:
            return
        until = now + self.tenure
        for i, c, old, j in moves:
            self._expiry[(i, old)] = until
            if j >= 0:
                self._expiry[(j, c)] = until

    def forbids(self, plan: Plan, i: int, c: int, now: int) -> bool:
        if not self._expiry:
            return False
        exp = self._expiry
        if exp.get((i, c), -1) > now:
            return True
        j = plan.occupant[c]
        return j >= 0 and exp.get((j, plan.cell_of[i]), -1) > now

    def prune(self, now: int) -> None:
        self._expiry = {key: t for key, t in self._expiry.items() if t > now}


def _draw(plan: Plan, rng: random.Random, guide_rate: float) -> tuple[int, int]:
    inst = plan.inst
    if plan.misfits and rng.random() < guide_rate:
        i = plan.misfits[rng.randrange(len(plan.misfits))]
        targets = inst.usable_by_cat[inst.cargo_cat[i]]
        if targets:
            return i, targets[rng.randrange(len(targets))]
    usable = inst.usable_cells
    i = rng.randrange(inst.k)
    c = usable[rng.randrange(len(usable))]
    return i, c


def perturb_plan(
    plan: Plan,
    magnitude: int,
    rng: random.Random,
    guide_rate: float = GUIDE_RATE,
    tabu: TabuList | None = None,
    now: int = 0,
    aspiration: float | None = None,
) -> tuple[Plan, list[tuple[int, int, int, int]]]:
    """Return a perturbed copy of ``plan`` and the moves applied to it.

    Each of the ``magnitude`` steps resamples up to ``MAX_RETRIES`` times a
    move that is a no-op, overloads a deck, or is tabu without beating
    ``aspiration``. A step that exhausts its retries ends the perturbation
    early, so the result stays feasible and never exceeds ``magnitude`` moves.
    """
    out = plan.copy()
    applied: list[tuple[int, int, int, int]] = []
    if out.inst.k == 0:
        return out, applied
    for _ in range(magnitude):
        for _attempt in range(MAX_RETRIES):
            i, c = _draw(out, rng, guide_rate)
            if out.cell_of[i] == c or not out.fits(i, c):
                continue
            if tabu is not None and tabu.forbids(out, i, c, now):
                if aspiration is None or out.value + out.delta(i, c) >= aspiration:
                    continue
            old, j, _ = out.move(i, c)
            applied.append((i, c, old, j))
            break
        else:
            break
    return out, applied


def perturb(
    solution: Solution,
    magnitude: int,
    rng: random.Random,
    instance: Instance,
    guide_rate: float = GUIDE_RATE,
) -> Solution:
    """Apply at most ``magnitude`` feasibility-preserving random moves."""
    if magnitude < 0:
        raise ValueError("magnitude must be nonnegative")
    plan, _ = perturb_plan(Plan.from_solution(instance, solution), magnitude, rng, guide_rate)
    return plan.to_solution()


def population_near(
    center: Plan, count: int, radius: int, rng: random.Random, guide_rate: float = GUIDE_RATE
) -> list[Plan]:
    members = []
    for _ in range(count):
        magnitude = rng.randint(1, radius) if radius > 0 else 0
        members.append(perturb_plan(center, magnitude, rng, guide_rate)[0])
    return members


def generate_population_near(
    center: Solution,
    count: int,
    radius: int,
    rng: random.Random,
    instance: Instance,
    guide_rate: float = GUIDE_RATE,
) -> list[Solution]:
    """``count`` feasible solutions, each at most ``radius`` moves from ``center``."""
    plan = Plan.from_solution(instance, center)
    return [p.to_solution() for p in population_near(plan, count, radius, rng, guide_rate)]


def to_move(plan: Plan, i: int, c: int) -> Move:
    """Express the position-level step ``i -> c`` as a public move."""
    inst = plan.inst
    if plan.cell_of[i] == c:
        raise InvalidMoveError("cargo already in target cell")
    j = plan.occupant[c]
    if j >= 0:
        return Swap(inst.cargos[i].id, inst.cargos[j].id)
    return Relocate(inst.cargos[i].id, inst.cells[c].id)
