"""Exact and bounding references for small instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .model import InfeasibleInstanceError, Instance, Solution, StowageError, unload_time

MAX_CARGOS = 8
MAX_USABLE_CELLS = 12


class OracleGuardError(StowageError):
    def __init__(self, instance: Instance):
        super().__init__(
            f"exact oracle limited to k <= {MAX_CARGOS} and usable cells <= {MAX_USABLE_CELLS}; "
            f"got k = {instance.k}, usable cells = {instance.problem_size}"
        )


@dataclass(frozen=True)
class OracleResult:
    optimal_value: int
    optimal_solution: Solution
    nodes_explored: int


def within_guard(instance: Instance) -> bool:
    return instance.k <= MAX_CARGOS and instance.problem_size <= MAX_USABLE_CELLS


def brute_force_optimal(instance: Instance) -> OracleResult:
    """Enumerate every injective cargo-to-usable-cell assignment.

    Cargos are placed in order, cells tried in ascending position, so the
    first minimum found is the lexicographically smallest optimal
    assignment. Branches are cut when the deck limit is exceeded or when the
    partial cost plus ``T`` per unplaced cargo cannot beat the incumbent.
    """
    if not within_guard(instance):
        raise OracleGuardError(instance)
    k = instance.k
    usable = instance.usable_cells
    decks = instance.cell_deck
    room = list(instance.limits)
    weights = instance.weights
    cost = [[instance.cost(i, j) for j in usable] for i in range(k)]
    floor_t = instance.base_time
    taken = [False] * len(usable)
    chosen = [0] * k
    best_value = None
    best_choice: list[int] = []
    nodes = 0

    def descend(i: int, partial: int) -> None:
        nonlocal best_value, best_choice, nodes
        nodes += 1
        if i == k:
            if best_value is None or partial < best_value:
                best_value = partial
                best_choice = chosen[:]
            return
        if best_value is not None and partial + (k - i) * floor_t >= best_value:
            return
        w = weights[i]
        for u, j in enumerate(usable):
            if taken[u]:
                continue
            p = decks[j]
            if room[p] < w:
                continue
            taken[u] = True
            room[p] -= w
            chosen[i] = u
            descend(i + 1, partial + cost[i][u])
            room[p] += w
            taken[u] = False

    descend(0, 0)
    if best_value is None:
        raise InfeasibleInstanceError("no assignment satisfies the deck weight limits")
    solution = Solution(
        {instance.cargos[i].id: instance.cells[usable[u]].id for i, u in enumerate(best_choice)}
    )
    return OracleResult(best_value, solution, nodes)


def assignment_lower_bound(instance: Instance) -> int:
    """Optimal value with the deck weight limits dropped (rectangular assignment)."""
    if instance.k == 0:
        return 0
    costs = np.array(
        [[instance.cost(i, j) for j in instance.usable_cells] for i in range(instance.k)],
        dtype=np.int64,
    )
    rows, cols = linear_sum_assignment(costs)
    return int(costs[rows, cols].sum())


def to_lp(instance: Instance) -> str:
    """Export the model in CPLEX LP format.

    Variables ``x_<cargo>_<cell>`` (usable cells only) and ``y_<cargo>_<deck>``
    are binary; ``y`` is tied to ``x`` by ``link`` rows. Constraint families:
    ``cargo_<i>`` (each cargo placed once), ``cell_<j>`` (at most one cargo),
    ``deck_<p>`` (weight limit).
    """
    usable = [instance.cells[j] for j in instance.usable_cells]
    lines = [f"\\ stowage instance {instance.name or '(unnamed)'}", "Minimize", " obj:"]
    terms = [
        f"{unload_time(cargo, cell, instance)} x_{cargo.id}_{cell.id}"
        for cargo in instance.cargos
        for cell in usable
    ]
    lines.extend(_wrap(terms))
    lines.append("Subject To")
    for cargo in instance.cargos:
        lhs = [f"x_{cargo.id}_{cell.id}" for cell in usable]
        lines.append(f" cargo_{cargo.id}: " + " + ".join(lhs) + " = 1")
    for cell in usable:
        lhs = [f"x_{cargo.id}_{cell.id}" for cargo in instance.cargos]
        if lhs:
            lines.append(f" cell_{cell.id}: " + " + ".join(lhs) + " <= 1")
    for cargo in instance.cargos:
        for deck in instance.decks:
            on_deck = [f"x_{cargo.id}_{cell.id}" for cell in usable if cell.deck == deck.index]
            lines.append(
                f" link_{cargo.id}_{deck.index}: y_{cargo.id}_{deck.index}"
                + "".join(f" - {v}" for v in on_deck)
                + " = 0"
            )
    for deck in instance.decks:
        lhs = [f"{cargo.weight} y_{cargo.id}_{deck.index}" for cargo in instance.cargos]
        if lhs:
            lines.append(f" deck_{deck.index}: " + " + ".join(lhs) + f" <= {deck.weight_limit}")
    lines.append("Binary")
    lines.extend(f" x_{cargo.id}_{cell.id}" for cargo in instance.cargos for cell in usable)
    lines.extend(f" y_{cargo.id}_{deck.index}" for cargo in instance.cargos for deck in instance.decks)
    lines.append("End")
    return "\n".join(lines) + "\n"


def _wrap(terms: list[str], width: int = 8) -> list[str]:
    if not terms:
        return ["  0 x_dummy"]
    out = []
    for n in range(0, len(terms), width):
        chunk = " + ".join(terms[n : n + width])
        out.append(("   " if n == 0 else "   + ") + chunk)
    return out
