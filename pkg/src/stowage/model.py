"""Problem data model for RoRo stowage: instances, solutions, objective and feasibility.

A stowage plan assigns every cargo to exactly one usable cell, no cell holds
more than one cargo, and the cargo weight on each deck stays within that
deck's limit. Handling a cargo costs ``T`` when its category matches the
category of its cell and ``T + Q`` otherwise; the objective is the total over
all assigned cargos.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

__all__ = [
    "CARGO_UNASSIGNED",
    "CELL_CONFLICT",
    "Cargo",
    "Cell",
    "DECK_OVERWEIGHT",
    "Deck",
    "FeasibilityReport",
    "InfeasibleInstanceError",
    "InstanceError",
    "Instance",
    "InvalidMoveError",
    "MalformedSolutionError",
    "Move",
    "Relocate",
    "Solution",
    "StowageError",
    "Swap",
    "UNUSABLE_CELL",
    "Violation",
    "apply_move",
    "check_feasibility",
    "deck_load",
    "delta_objective",
    "evaluate_objective",
    "random_feasible_solution",
    "solution_from_positions",
    "unload_time",
]

CELL_CONFLICT = "CELL_CONFLICT"
CARGO_UNASSIGNED = "CARGO_UNASSIGNED"
UNUSABLE_CELL = "UNUSABLE_CELL"
DECK_OVERWEIGHT = "DECK_OVERWEIGHT"

GREEDY_RESTARTS = 100


class StowageError(Exception):
    """Base class for all errors raised by this package."""


class InstanceError(StowageError, ValueError):
    """Invalid instance data. ``location`` names the offending field."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class MalformedSolutionError(StowageError, ValueError):
    pass


class InvalidMoveError(StowageError, ValueError):
    pass


class InfeasibleInstanceError(StowageError):
    """No assignment satisfying every constraint could be constructed."""


@dataclass(frozen=True)
class Deck:
    index: int
    weight_limit: int


@dataclass(frozen=True)
class Cell:
    id: int
    deck: int
    row: int
    col: int
    usable: bool
    category: str


@dataclass(frozen=True)
class Cargo:
    id: int
    weight: int
    category: str


@dataclass(frozen=True, eq=False)
class Instance:
    """An immutable stowage problem.

    Cells reference decks by ``Deck.index``. Besides the public fields, a few
    positional lookup tables are derived lazily; the heuristics work on cargo
    and cell *positions* (indices into ``cargos`` and ``cells``) rather than
    ids.
    """

    rows: int
    cols: int
    decks: tuple[Deck, ...]
    cells: tuple[Cell, ...]
    cargos: tuple[Cargo, ...]
    base_time: int
    penalty: int
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "decks", tuple(self.decks))
        object.__setattr__(self, "cells", tuple(self.cells))
        object.__setattr__(self, "cargos", tuple(self.cargos))
        self._validate()

    def _validate(self) -> None:
        if self.rows < 1:
            raise InstanceError("must be a positive integer", "rows")
        if self.cols < 1:
            raise InstanceError("must be a positive integer", "cols")
        if self.base_time < 0:
            raise InstanceError("must be nonnegative", "meta.T")
        if self.penalty < 0:
            raise InstanceError("must be nonnegative", "meta.Q")
        deck_seen: set[int] = set()
        for pos, deck in enumerate(self.decks):
            if deck.index in deck_seen:
                raise InstanceError(f"duplicate deck index {deck.index}", f"decks[{pos}].index")
            if deck.weight_limit < 0:
                raise InstanceError("must be nonnegative", f"decks[{pos}].weight_limit")
            deck_seen.add(deck.index)
        cell_seen: set[int] = set()
        slots: set[tuple[int, int, int]] = set()
        for pos, cell in enumerate(self.cells):
            where = f"cells[{pos}]"
            if cell.id in cell_seen:
                raise InstanceError(f"duplicate cell id {cell.id}", f"{where}.id")
            cell_seen.add(cell.id)
            if cell.deck not in deck_seen:
                raise InstanceError(f"unknown deck {cell.deck}", f"{where}.deck")
            if not (0 <= cell.row < self.rows):
                raise InstanceError(f"row {cell.row} outside 0..{self.rows - 1}", f"{where}.row")
            if not (0 <= cell.col < self.cols):
                raise InstanceError(f"col {cell.col} outside 0..{self.cols - 1}", f"{where}.col")
            slot = (cell.deck, cell.row, cell.col)
            if slot in slots:
                raise InstanceError(f"deck/row/col {slot} used twice", where)
            slots.add(slot)
        cargo_seen: set[int] = set()
        for pos, cargo in enumerate(self.cargos):
            if cargo.id in cargo_seen:
                raise InstanceError(f"duplicate cargo id {cargo.id}", f"cargos[{pos}].id")
            if cargo.weight < 0:
                raise InstanceError("must be nonnegative", f"cargos[{pos}].weight")
            cargo_seen.add(cargo.id)
        usable = sum(1 for c in self.cells if c.usable)
        if len(self.cargos) > usable:
            raise InstanceError(
                f"{len(self.cargos)} cargos but only {usable} usable cells", "cargos"
            )

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def _key(self):
        return (
            self.name, self.rows, self.cols, self.decks, self.cells, self.cargos,
            self.base_time, self.penalty,
        )

    @property
    def k(self) -> int:
        return len(self.cargos)

    @cached_property
    def cargo_pos(self) -> dict[int, int]:
        return {c.id: i for i, c in enumerate(self.cargos)}

    @cached_property
    def cell_pos(self) -> dict[int, int]:
        return {c.id: j for j, c in enumerate(self.cells)}

    @cached_property
    def deck_pos(self) -> dict[int, int]:
        return {d.index: p for p, d in enumerate(self.decks)}

    @cached_property
    def usable_cells(self) -> tuple[int, ...]:
        """Positions of usable cells, in cell order."""
        return tuple(j for j, c in enumerate(self.cells) if c.usable)

    @property
    def problem_size(self) -> int:
        return len(self.usable_cells)

    @cached_property
    def categories(self) -> tuple[str, ...]:
        """Every category label in the instance, sorted."""
        labels = {c.category for c in self.cells} | {c.category for c in self.cargos}
        return tuple(sorted(labels))

    @cached_property
    def cell_deck(self) -> tuple[int, ...]:
        return tuple(self.deck_pos[c.deck] for c in self.cells)

    @cached_property
    def cell_cat(self) -> tuple[int, ...]:
        code = {c: n for n, c in enumerate(self.categories)}
        return tuple(code[c.category] for c in self.cells)

    @cached_property
    def cargo_cat(self) -> tuple[int, ...]:
        code = {c: n for n, c in enumerate(self.categories)}
        return tuple(code[c.category] for c in self.cargos)

    @cached_property
    def weights(self) -> tuple[int, ...]:
        return tuple(c.weight for c in self.cargos)

    @cached_property
    def limits(self) -> tuple[int, ...]:
        return tuple(d.weight_limit for d in self.decks)

    @cached_property
    def usable_by_cat(self) -> tuple[tuple[int, ...], ...]:
        """Usable cell positions grouped by category code."""
        groups: list[list[int]] = [[] for _ in self.categories]
        for j in self.usable_cells:
            groups[self.cell_cat[j]].append(j)
        return tuple(tuple(g) for g in groups)

    def cost(self, i: int, j: int) -> int:
        """Handling time of cargo position ``i`` in cell position ``j``."""
        if self.cargo_cat[i] == self.cell_cat[j]:
            return self.base_time
        return self.base_time + self.penalty

    def cell(self, cell_id: int) -> Cell:
        return self.cells[self.cell_pos[cell_id]]

    def cargo(self, cargo_id: int) -> Cargo:
        return self.cargos[self.cargo_pos[cargo_id]]


@dataclass(frozen=True, eq=False)
class Solution:
    """Assignment of cargo ids to cell ids (the sparse form of ``x_ij``).

    Construction does not validate; use :func:`check_feasibility` to
    diagnose a possibly broken assignment.
    """

    assignment: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))

    def __eq__(self, other):
        if not isinstance(other, Solution):
            return NotImplemented
        return self.assignment == other.assignment

    def __hash__(self):
        return hash(frozenset(self.assignment.items()))

    def __len__(self):
        return len(self.assignment)

    def __getitem__(self, cargo_id: int) -> int:
        return self.assignment[cargo_id]

    @cached_property
    def occupant(self) -> dict[int, int]:
        """Cell id to cargo id. Only meaningful for injective assignments."""
        return {cell: cargo for cargo, cell in self.assignment.items()}

    def differing_cargos(self, other: Solution) -> set[int]:
        return {c for c, j in self.assignment.items() if other.assignment.get(c) != j}


@dataclass(frozen=True)
class Swap:
    a: int
    b: int


@dataclass(frozen=True)
class Relocate:
    cargo: int
    cell: int


Move = Swap | Relocate


@dataclass(frozen=True)
class Violation:
    tag: str
    ids: tuple[int, ...]
    magnitude: int = 1


@dataclass(frozen=True)
class FeasibilityReport:
    violations: tuple[Violation, ...] = ()

    @property
    def feasible(self) -> bool:
        return not self.violations

    def tags(self) -> set[str]:
        return {v.tag for v in self.violations}


def unload_time(cargo: Cargo, cell: Cell, instance: Instance) -> int:
    if cargo.category == cell.category:
        return instance.base_time
    return instance.base_time + instance.penalty


def _require_well_formed(solution: Solution, instance: Instance) -> None:
    assignment = solution.assignment
    if set(assignment) != set(instance.cargo_pos):
        missing = sorted(set(instance.cargo_pos) - set(assignment))
        extra = sorted(set(assignment) - set(instance.cargo_pos))
        raise MalformedSolutionError(f"assignment not total: missing {missing}, unknown {extra}")
    if len(set(assignment.values())) != len(assignment):
        raise MalformedSolutionError("assignment not injective: a cell holds several cargos")
    for cell_id in assignment.values():
        if cell_id not in instance.cell_pos:
            raise MalformedSolutionError(f"unknown cell id {cell_id}")


def evaluate_objective(solution: Solution, instance: Instance) -> int:
    """Total handling time over all assigned (cargo, cell) pairs."""
    _require_well_formed(solution, instance)
    return sum(
        unload_time(instance.cargo(cargo_id), instance.cell(cell_id), instance)
        for cargo_id, cell_id in solution.assignment.items()
    )


def deck_load(solution: Solution, deck: Deck, instance: Instance) -> int:
    return sum(
        instance.cargo(cargo_id).weight
        for cargo_id, cell_id in solution.assignment.items()
        if instance.cell(cell_id).deck == deck.index
    )


def _move_endpoints(solution: Solution, move: Move, instance: Instance):
    """Resolve a move to (cargo a, cell of a, target cell, occupant b or None)."""
    asg = solution.assignment
    if isinstance(move, Swap):
        if move.a == move.b:
            raise InvalidMoveError("swap endpoints must be distinct")
        if move.a not in asg or move.b not in asg:
            raise InvalidMoveError(f"swap of unassigned cargo {move}")
        return move.a, asg[move.a], asg[move.b], move.b
    if isinstance(move, Relocate):
        if move.cargo not in asg:
            raise InvalidMoveError(f"relocate of unassigned cargo {move.cargo}")
        if move.cell not in instance.cell_pos:
            raise InvalidMoveError(f"unknown cell {move.cell}")
        if not instance.cell(move.cell).usable:
            raise InvalidMoveError(f"cell {move.cell} is unusable")
        if move.cell in solution.occupant:
            raise InvalidMoveError(f"cell {move.cell} is occupied")
        return move.cargo, asg[move.cargo], move.cell, None
    raise InvalidMoveError(f"not a move: {move!r}")


def apply_move(solution: Solution, move: Move, instance: Instance) -> Solution:
    a, cell_a, target, b = _move_endpoints(solution, move, instance)
    asg = dict(solution.assignment)
    asg[a] = target
    if b is not None:
        asg[b] = cell_a
    return Solution(asg)


def delta_objective(solution: Solution, move: Move, instance: Instance) -> int:
    """Objective change caused by ``move``, computed from the touched pairs only."""
    a, cell_a, target, b = _move_endpoints(solution, move, instance)
    cargo_a = instance.cargo(a)
    old_cell, new_cell = instance.cell(cell_a), instance.cell(target)
    delta = unload_time(cargo_a, new_cell, instance) - unload_time(cargo_a, old_cell, instance)
    if b is not None:
        cargo_b = instance.cargo(b)
        delta += unload_time(cargo_b, old_cell, instance) - unload_time(cargo_b, new_cell, instance)
    return delta


def check_feasibility(solution: Solution, instance: Instance) -> FeasibilityReport:
    """List every violated constraint of the assignment.

    Raises :class:`MalformedSolutionError` for unknown cargo or cell ids.
    """
    asg = solution.assignment
    for cargo_id, cell_id in asg.items():
        if cargo_id not in instance.cargo_pos:
            raise MalformedSolutionError(f"unknown cargo id {cargo_id}")
        if cell_id not in instance.cell_pos:
            raise MalformedSolutionError(f"unknown cell id {cell_id}")

    violations: list[Violation] = []
    for cargo in instance.cargos:
        if cargo.id not in asg:
            violations.append(Violation(CARGO_UNASSIGNED, (cargo.id,)))

    by_cell: dict[int, list[int]] = {}
    for cargo_id, cell_id in asg.items():
        by_cell.setdefault(cell_id, []).append(cargo_id)
    for cell_id in sorted(by_cell):
        holders = sorted(by_cell[cell_id])
        if len(holders) > 1:
            violations.append(Violation(CELL_CONFLICT, (cell_id, *holders), len(holders) - 1))
        if not instance.cell(cell_id).usable:
            for cargo_id in holders:
                violations.append(Violation(UNUSABLE_CELL, (cargo_id, cell_id)))

    loads = Counter()
    for cargo_id, cell_id in asg.items():
        loads[instance.cell(cell_id).deck] += instance.cargo(cargo_id).weight
    for deck in instance.decks:
        excess = loads[deck.index] - deck.weight_limit
        if excess > 0:
            violations.append(Violation(DECK_OVERWEIGHT, (deck.index,), excess))
    return FeasibilityReport(tuple(violations))


def _greedy_attempt(instance: Instance, rng: random.Random, heavy_first: bool) -> list[int] | None:
    order = list(range(instance.k))
    rng.shuffle(order)
    if heavy_first:
        order.sort(key=lambda i: -instance.weights[i])
    free = [[] for _ in instance.decks]
    for j in instance.usable_cells:
        free[instance.cell_deck[j]].append(j)
    room = list(instance.limits)
    cell_of = [-1] * instance.k
    for i in order:
        w = instance.weights[i]
        open_decks = [p for p, cells in enumerate(free) if cells and room[p] >= w]
        if not open_decks:
            return None
        # weight decks by free cells so every usable cell is equally likely
        total = sum(len(free[p]) for p in open_decks)
        pick = rng.randrange(total)
        for p in open_decks:
            if pick < len(free[p]):
                break
            pick -= len(free[p])
        cells = free[p]
        cells[pick], cells[-1] = cells[-1], cells[pick]
        cell_of[i] = cells.pop()
        room[p] -= w
    return cell_of


def random_cell_positions(instance: Instance, rng: random.Random) -> list[int]:
    """Randomized greedy construction; returns the cell position of each cargo.

    Alternates between random cargo order and heaviest-first order across
    up to ``GREEDY_RESTARTS`` attempts.
    """
    for attempt in range(GREEDY_RESTARTS):
        cell_of = _greedy_attempt(instance, rng, heavy_first=bool(attempt % 2))
        if cell_of is not None:
            return cell_of
    raise InfeasibleInstanceError(
        f"no feasible assignment found in {GREEDY_RESTARTS} randomized greedy restarts"
    )


def random_feasible_solution(instance: Instance, rng: random.Random) -> Solution:
    cell_of = random_cell_positions(instance, rng)
    return Solution(
        {instance.cargos[i].id: instance.cells[j].id for i, j in enumerate(cell_of)}
    )


def solution_from_positions(instance: Instance, cell_of: Iterable[int]) -> Solution:
    return Solution({instance.cargos[i].id: instance.cells[j].id for i, j in enumerate(cell_of)})
