import dataclasses
import random
from pathlib import Path

import pytest

from stowage.instances import (
    InstanceSpec,
    builtin_benchmark_suite,
    generate_instance,
    load_instance,
    tiny_spec,
)
from stowage.model import Cargo, Cell, Deck, InfeasibleInstanceError, Instance

ROOT = Path(__file__).resolve().parents[1]
BENCHMARKS = ROOT / "benchmarks"
TINY_GOLDEN = BENCHMARKS / "tiny" / "tiny3.json"


def make_instance(cells, cargos, limits=(1000,), rows=None, cols=None, T=10, Q=100):
    """Build an instance from ``(deck, usable, category)`` cells laid out in one row per deck."""
    decks = tuple(Deck(p + 1, w) for p, w in enumerate(limits))
    built, col_of = [], {}
    for n, (deck, usable, cat) in enumerate(cells):
        col = col_of.get(deck, 0)
        col_of[deck] = col + 1
        built.append(Cell(n, deck, 0, col, usable, cat))
    cols = cols or max(col_of.values())
    return Instance(
        rows=rows or 1,
        cols=cols,
        decks=decks,
        cells=tuple(built),
        cargos=tuple(Cargo(i, w, cat) for i, (w, cat) in enumerate(cargos)),
        base_time=T,
        penalty=Q,
    )


def random_instance(seed, k=None, decks=None):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 3), rng.randint(2, 4)
    decks = decks or rng.randint(1, 3)
    spec = InstanceSpec(
        seed=seed,
        rows=rows,
        cols=cols,
        decks=decks,
        unusable_fraction=rng.choice([0.0, 0.1, 0.25]),
        cargo_count=0,
        categories=tuple("ABCD"[: rng.randint(1, 4)]),
        weight_range=(1, 9),
        deck_limit_factor=rng.choice([1.1, 1.5, 3.0]),
        base_time=rng.randint(0, 20),
        penalty=rng.randint(0, 200),
    )
    usable = spec.usable_count
    k = min(usable, k if k is not None else rng.randint(1, usable))
    spec = dataclasses.replace(spec, cargo_count=k)
    try:
        return generate_instance(spec)
    except InfeasibleInstanceError:
        return generate_instance(dataclasses.replace(spec, deck_limit_factor=3.0))


@pytest.fixture(scope="session")
def suite():
    return builtin_benchmark_suite()


@pytest.fixture(scope="session")
def tiny_instances():
    return [generate_instance(tiny_spec(seed)) for seed in range(20)]


@pytest.fixture
def tiny_golden():
    return load_instance(TINY_GOLDEN)
