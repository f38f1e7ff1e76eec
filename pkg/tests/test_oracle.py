import itertools
import random
import re

import numpy as np
import pytest
from scipy.optimize import Bounds, LinearConstraint, milp

from stowage.model import InfeasibleInstanceError, check_feasibility, evaluate_objective
from stowage.oracle import (
    MAX_CARGOS,
    OracleGuardError,
    assignment_lower_bound,
    brute_force_optimal,
    to_lp,
)

from conftest import make_instance, random_instance


def relaxed_by_enumeration(instance):
    """Assignment optimum without deck limits, by plain enumeration."""
    usable = instance.usable_cells
    best = None
    for cells in itertools.permutations(usable, instance.k):
        value = sum(instance.cost(i, j) for i, j in enumerate(cells))
        best = value if best is None else min(best, value)
    return best


def solve_lp_text(text):
    """Solve an exported LP file with HiGHS through a minimal reader for our own layout."""
    section, objective, rows = None, [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line in ("Minimize", "Subject To", "Binary", "End"):
            section = line
            continue
        if section == "Minimize":
            objective.append(line.removeprefix("obj:"))
        elif section == "Subject To":
            name, _, body = line.partition(":")
            m = re.fullmatch(r"(.*?)\s*(<=|=)\s*(-?\d+)", body.strip())
            rows.append((m.group(1), m.group(2), int(m.group(3))))

    names: dict[str, int] = {}

    def terms(expr):
        out = []
        for sign, coef, var in re.findall(r"([+-]?)\s*(\d+)?\s*([xy]_\d+_\d+)", expr):
            value = int(coef) if coef else 1
            out.append((-value if sign == "-" else value, names.setdefault(var, len(names))))
        return out

    obj_terms = terms(" ".join(objective))
    row_terms = [(terms(lhs), op, rhs) for lhs, op, rhs in rows]
    n = len(names)
    c = np.zeros(n)
    for coef, j in obj_terms:
        c[j] += coef
    a = np.zeros((len(row_terms), n))
    lo, hi = np.zeros(len(row_terms)), np.zeros(len(row_terms))
    for r, (ts, op, rhs) in enumerate(row_terms):
        for coef, j in ts:
            a[r, j] += coef
        lo[r] = rhs if op == "=" else -np.inf
        hi[r] = rhs
    res = milp(c, constraints=LinearConstraint(a, lo, hi), integrality=np.ones(n), bounds=Bounds(0, 1))
    return res


class TestBruteForce:
    def test_single_cargo_two_cells(self):
        inst = make_instance([(1, True, "B"), (1, True, "A")], [(1, "A")])
        result = brute_force_optimal(inst)
        assert result.optimal_value == 10
        assert result.optimal_solution.assignment == {0: 1}

    def test_cross_assignment(self):
        inst = make_instance([(1, True, "B"), (1, True, "A")], [(1, "A"), (1, "B")])
        result = brute_force_optimal(inst)
        assert result.optimal_value == 20
        assert result.optimal_solution.assignment == {0: 1, 1: 0}

    def test_weight_limit_displaces_cargo(self):
        # both cargos belong on deck 1, which only carries one of them
        inst = make_instance(
            [(1, True, "A"), (1, True, "A"), (2, True, "B"), (2, True, "B")],
            [(5, "A"), (5, "A")],
            limits=(5, 10),
        )
        result = brute_force_optimal(inst)
        assert result.optimal_value == 10 + 110
        assert check_feasibility(result.optimal_solution, inst).feasible

    def test_lexicographic_tie_break(self):
        inst = make_instance([(1, True, "A")] * 3, [(1, "A"), (1, "A")])
        assert brute_force_optimal(inst).optimal_solution.assignment == {0: 0, 1: 1}

    def test_guard(self, suite):
        with pytest.raises(OracleGuardError):
            brute_force_optimal(suite[0])
        inst = make_instance([(1, True, "A")] * 9, [(1, "A")] * (MAX_CARGOS + 1))
        with pytest.raises(OracleGuardError):
            brute_force_optimal(inst)

    def test_no_feasible_assignment(self):
        inst = make_instance([(1, True, "A")] * 2, [(5, "A")], limits=(4,))
        with pytest.raises(InfeasibleInstanceError):
            brute_force_optimal(inst)

    def test_result_consistent(self, tiny_instances):
        for inst in tiny_instances:
            result = brute_force_optimal(inst)
            assert check_feasibility(result.optimal_solution, inst).feasible
            assert evaluate_objective(result.optimal_solution, inst) == result.optimal_value

    def test_matches_milp_solver(self, tiny_instances):
        for inst in tiny_instances:
            res = solve_lp_text(to_lp(inst))
            assert res.success
            assert round(res.fun) == brute_force_optimal(inst).optimal_value

    def test_cargo_relabeling_invariant(self, tiny_instances):
        from stowage.model import Instance

        for inst in tiny_instances[:8]:
            reversed_cargos = tuple(reversed(inst.cargos))
            twin = Instance(inst.rows, inst.cols, inst.decks, inst.cells, reversed_cargos, inst.base_time, inst.penalty)
            assert brute_force_optimal(twin).optimal_value == brute_force_optimal(inst).optimal_value

    def test_cell_relabeling_invariant(self, tiny_instances):
        from stowage.model import Cell, Instance

        for inst in tiny_instances[:8]:
            n = len(inst.cells)
            cells = tuple(Cell(n - 1 - c.id, c.deck, c.row, c.col, c.usable, c.category) for c in inst.cells)
            twin = Instance(inst.rows, inst.cols, inst.decks, cells[::-1], inst.cargos, inst.base_time, inst.penalty)
            assert brute_force_optimal(twin).optimal_value == brute_force_optimal(inst).optimal_value


class TestLowerBound:
    def test_enough_matching_cells(self):
        inst = make_instance([(1, True, "A"), (1, True, "B"), (1, True, "A")], [(1, "A"), (1, "B")])
        assert assignment_lower_bound(inst) == 2 * 10

    def test_no_matching_cells(self):
        inst = make_instance([(1, True, "C")] * 4, [(1, "A"), (1, "B"), (1, "A")])
        assert assignment_lower_bound(inst) == 3 * 110

    def test_empty(self):
        inst = make_instance([(1, True, "A")], [])
        assert assignment_lower_bound(inst) == 0

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_relaxed_enumeration(self, seed):
        rng = random.Random(seed)
        cells = [(rng.randint(1, 2), rng.random() > 0.2, rng.choice("ABC")) for _ in range(rng.randint(5, 8))]
        cells[0] = (cells[0][0], True, cells[0][2])
        usable = sum(u for _, u, _ in cells)
        cargos = [(rng.randint(1, 5), rng.choice("ABC")) for _ in range(rng.randint(1, min(5, usable)))]
        inst = make_instance(cells, cargos, limits=(100, 100), T=rng.randint(1, 20), Q=rng.randint(0, 50))
        assert assignment_lower_bound(inst) == relaxed_by_enumeration(inst)

    def test_sandwich_on_tiny(self, tiny_instances):
        for inst in tiny_instances:
            bound = assignment_lower_bound(inst)
            optimum = brute_force_optimal(inst).optimal_value
            assert inst.k * inst.base_time <= bound <= optimum

    def test_equal_when_limits_slack(self):
        for seed in range(10):
            inst = random_instance(seed, k=5, decks=2)
            loose = inst.__class__(
                inst.rows, inst.cols,
                tuple(d.__class__(d.index, 10**6) for d in inst.decks),
                inst.cells, inst.cargos, inst.base_time, inst.penalty,
            )
            if loose.problem_size > 12:
                continue
            assert assignment_lower_bound(loose) == brute_force_optimal(loose).optimal_value


class TestLpExport:
    def test_sections_and_counts(self, tiny_golden):
        text = to_lp(tiny_golden)
        assert text.splitlines()[1] == "Minimize"
        assert text.rstrip().endswith("End")
        k, s, l = tiny_golden.k, tiny_golden.problem_size, len(tiny_golden.decks)
        assert sum(line.startswith(" cargo_") for line in text.splitlines()) == k
        assert sum(line.startswith(" cell_") for line in text.splitlines()) == s
        assert sum(line.startswith(" deck_") for line in text.splitlines()) == l
        binaries = text.split("Binary\n")[1].split("End")[0].split()
        assert len(binaries) == k * s + k * l

    def test_deterministic(self, tiny_golden):
        assert to_lp(tiny_golden) == to_lp(tiny_golden)
