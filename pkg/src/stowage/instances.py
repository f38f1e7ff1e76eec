"""Instance file format, random generator and the built-in benchmark suite.

Instance files are JSON documents::

    {
      "format_version": 1,
      "name": "Inst0",
      "meta": {"T": 10, "Q": 100, "rows": 10, "cols": 8},
      "decks": [{"index": 1, "weight_limit": 480}, ...],
      "cells": [{"id": 0, "deck": 1, "row": 0, "col": 0, "usable": true, "category": "A"}, ...],
      "cargos": [{"id": 0, "weight": 7, "category": "C"}, ...]
    }

Serialization is canonical: fixed key order, one cell or cargo per line.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from pathlib import Path

from .model import (
    Cargo,
    Cell,
    Deck,
    InfeasibleInstanceError,
    Instance,
    InstanceError,
    Solution,
    random_cell_positions,
)

FORMAT_VERSION = 1

SUITE_NAMES = tuple(f"Inst{i}" for i in range(6))
SUITE_SEEDS = (0, 1, 2, 3, 4, 5)


@dataclass(frozen=True)
class InstanceSpec:
    seed: int = 0
    rows: int = 10
    cols: int = 8
    decks: int = 4
    unusable_fraction: float = 0.08
    cargo_count: int = 288
    categories: tuple[str, ...] = ("A", "B", "C", "D", "E", "F", "G", "H")
    weight_range: tuple[int, int] = (1, 10)
    deck_limit_factor: float = 1.2
    base_time: int = 10
    penalty: int = 100
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "categories", tuple(self.categories))
        object.__setattr__(self, "weight_range", tuple(self.weight_range))
        if min(self.rows, self.cols, self.decks) < 1:
            raise InstanceError("rows, cols and decks must be positive", "spec")
        if not 0 <= self.unusable_fraction < 1:
            raise InstanceError("must lie in [0, 1)", "spec.unusable_fraction")
        if not self.categories:
            raise InstanceError("at least one category required", "spec.categories")
        lo, hi = self.weight_range
        if lo < 0 or hi < lo:
            raise InstanceError("need 0 <= low <= high", "spec.weight_range")
        if self.deck_limit_factor <= 0:
            raise InstanceError("must be positive", "spec.deck_limit_factor")
        if self.cargo_count < 0:
            raise InstanceError("must be nonnegative", "spec.cargo_count")
        if self.cargo_count > self.usable_count:
            raise InstanceError(
                f"{self.cargo_count} cargos exceed {self.usable_count} usable cells",
                "spec.cargo_count",
            )

    @property
    def cell_count(self) -> int:
        return self.rows * self.cols * self.decks

    @property
    def unusable_count(self) -> int:
        return math.floor(self.unusable_fraction * self.cell_count)

    @property
    def usable_count(self) -> int:
        return self.cell_count - self.unusable_count


def _block_out(spec: InstanceSpec, rng: random.Random) -> set[int]:
    """Choose unusable cell ids as small rectangular blocks."""
    per_deck = spec.rows * spec.cols
    blocked: set[int] = set()
    while len(blocked) < spec.unusable_count:
        deck = rng.randrange(spec.decks)
        h = rng.randint(1, min(3, spec.rows))
        w = rng.randint(1, min(3, spec.cols))
        r0 = rng.randrange(spec.rows - h + 1)
        c0 = rng.randrange(spec.cols - w + 1)
        for r in range(r0, r0 + h):
            for c in range(c0, c0 + w):
                if len(blocked) < spec.unusable_count:
                    blocked.add(deck * per_deck + r * spec.cols + c)
    return blocked


def generate_instance(spec: InstanceSpec) -> Instance:
    """Build a random instance; a pure function of ``spec``.

    Cell ids run deck-major then row-major. Usable cells are split into
    contiguous category bands (walking decks, then columns, then rows).
    Cargo categories are copied from a random sample of usable cells, so a
    category-perfect plan exists whenever the weights allow it. Each deck's
    limit is ``deck_limit_factor`` times its share of the total cargo weight,
    proportional to its usable cells.
    """
    rng = random.Random(spec.seed)
    blocked = _block_out(spec, rng)
    per_deck = spec.rows * spec.cols

    usable_ids = [
        d * per_deck + r * spec.cols + c
        for d in range(spec.decks)
        for c in range(spec.cols)
        for r in range(spec.rows)
        if d * per_deck + r * spec.cols + c not in blocked
    ]
    n_cat = len(spec.categories)
    category_of: dict[int, str] = {}
    for pos, cell_id in enumerate(usable_ids):
        category_of[cell_id] = spec.categories[pos * n_cat // len(usable_ids)]

    cells = []
    for d in range(spec.decks):
        for r in range(spec.rows):
            for c in range(spec.cols):
                cell_id = d * per_deck + r * spec.cols + c
                usable = cell_id not in blocked
                # unusable cells keep the category of the band they interrupt
                label = category_of.get(cell_id) or spec.categories[
                    min(n_cat - 1, (d * spec.cols + c) * n_cat // (spec.decks * spec.cols))
                ]
                cells.append(Cell(cell_id, d + 1, r, c, usable, label))

    lo, hi = spec.weight_range
    sample = rng.sample(usable_ids, spec.cargo_count)
    cargos = [
        Cargo(i, rng.randint(lo, hi), category_of[cell_id]) for i, cell_id in enumerate(sample)
    ]
    total = sum(c.weight for c in cargos)
    usable_on = [0] * spec.decks
    for cell_id in usable_ids:
        usable_on[cell_id // per_deck] += 1
    decks = [
        Deck(d + 1, math.ceil(spec.deck_limit_factor * total * usable_on[d] / len(usable_ids)))
        for d in range(spec.decks)
    ]
    instance = Instance(
        rows=spec.rows,
        cols=spec.cols,
        decks=tuple(decks),
        cells=tuple(cells),
        cargos=tuple(cargos),
        base_time=spec.base_time,
        penalty=spec.penalty,
        name=spec.name,
    )
    try:
        random_cell_positions(instance, random.Random(spec.seed))
    except InfeasibleInstanceError as exc:
        raise InfeasibleInstanceError(f"generated instance admits no feasible plan: {exc}") from exc
    return instance


def builtin_benchmark_suite() -> list[Instance]:
    """The six benchmark-scale instances Inst0..Inst5 (they differ by seed only)."""
    return [
        generate_instance(InstanceSpec(seed=seed, name=name))
        for name, seed in zip(SUITE_NAMES, SUITE_SEEDS)
    ]


def tiny_spec(seed: int) -> InstanceSpec:
    """Desk-scale spec: 2 decks of 2x3 cells, 9 usable, 6 cargos, binding deck limits."""
    return InstanceSpec(
        seed=seed,
        rows=2,
        cols=3,
        decks=2,
        unusable_fraction=0.25,
        cargo_count=6,
        categories=("A", "B", "C"),
        weight_range=(1, 10),
        deck_limit_factor=1.1,
        name=f"tiny{seed}",
    )


# ---------------------------------------------------------------- file format


def _to_document(instance: Instance) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "name": instance.name,
        "meta": {
            "T": instance.base_time,
            "Q": instance.penalty,
            "rows": instance.rows,
            "cols": instance.cols,
        },
        "decks": [{"index": d.index, "weight_limit": d.weight_limit} for d in instance.decks],
        "cells": [
            {
                "id": c.id,
                "deck": c.deck,
                "row": c.row,
                "col": c.col,
                "usable": c.usable,
                "category": c.category,
            }
            for c in instance.cells
        ],
        "cargos": [{"id": c.id, "weight": c.weight, "category": c.category} for c in instance.cargos],
    }


def serialize_instance(instance: Instance) -> str:
    doc = _to_document(instance)
    dumps = lambda obj: json.dumps(obj, ensure_ascii=False)  # noqa: E731
    lines = ["{"]
    lines.append(f'  "format_version": {doc["format_version"]},')
    lines.append(f'  "name": {dumps(doc["name"])},')
    lines.append(f'  "meta": {dumps(doc["meta"])},')
    for key in ("decks", "cells", "cargos"):
        items = doc[key]
        tail = "," if key != "cargos" else ""
        if not items:
            lines.append(f'  "{key}": []{tail}')
            continue
        lines.append(f'  "{key}": [')
        lines.extend(
            f"    {dumps(item)}{',' if n < len(items) - 1 else ''}" for n, item in enumerate(items)
        )
        lines.append(f"  ]{tail}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _field(obj: dict, key: str, kind, where: str):
    if not isinstance(obj, dict):
        raise InstanceError("expected an object", where)
    if key not in obj:
        raise InstanceError(f"missing field '{key}'", where)
    value = obj[key]
    if kind is int:
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif kind is bool:
        ok = isinstance(value, bool)
    else:
        ok = isinstance(value, kind)
    if not ok:
        raise InstanceError(f"expected {kind.__name__}, got {type(value).__name__}", f"{where}.{key}")
    return value


def _items(doc: dict, key: str) -> list:
    return _field(doc, key, list, "$")


def parse_instance(text: str) -> Instance:
    """Parse and validate an instance document; errors name the offending field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc.msg} (line {exc.lineno})", "$") from exc
    if not isinstance(doc, dict):
        raise InstanceError("expected an object", "$")
    version = _field(doc, "format_version", int, "$")
    if version != FORMAT_VERSION:
        raise InstanceError(f"unsupported version {version}", "format_version")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise InstanceError("expected str", "name")
    meta = _field(doc, "meta", dict, "$")
    decks = [
        Deck(_field(d, "index", int, f"decks[{n}]"), _field(d, "weight_limit", int, f"decks[{n}]"))
        for n, d in enumerate(_items(doc, "decks"))
    ]
    cells = []
    for n, c in enumerate(_items(doc, "cells")):
        where = f"cells[{n}]"
        cells.append(
            Cell(
                _field(c, "id", int, where),
                _field(c, "deck", int, where),
                _field(c, "row", int, where),
                _field(c, "col", int, where),
                _field(c, "usable", bool, where),
                _field(c, "category", str, where),
            )
        )
    cargos = [
        Cargo(
            _field(c, "id", int, f"cargos[{n}]"),
            _field(c, "weight", int, f"cargos[{n}]"),
            _field(c, "category", str, f"cargos[{n}]"),
        )
        for n, c in enumerate(_items(doc, "cargos"))
    ]
    return Instance(
        rows=_field(meta, "rows", int, "meta"),
        cols=_field(meta, "cols", int, "meta"),
        decks=tuple(decks),
        cells=tuple(cells),
        cargos=tuple(cargos),
        base_time=_field(meta, "T", int, "meta"),
        penalty=_field(meta, "Q", int, "meta"),
        name=name,
    )


def load_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def save_instance(instance: Instance, path: str | Path) -> None:
    Path(path).write_text(serialize_instance(instance), encoding="utf-8")


def resolve_suite(selector: str) -> list[Instance]:
    """``builtin``, a directory of ``*.json`` instance files, or a single file."""
    if selector == "builtin":
        return builtin_benchmark_suite()
    path = Path(selector)
    if path.is_dir():
        return [load_instance(p) for p in sorted(path.glob("*.json"))]
    return [load_instance(path)]


# ---------------------------------------------------------------- solution files


def serialize_solution(solution: Solution, instance_name: str = "") -> str:
    """``{"format_version": 1, "instance": ..., "assignment": [[cargo, cell], ...]}``."""
    pairs = sorted(solution.assignment.items())
    body = ",\n".join(f"    [{cargo}, {cell}]" for cargo, cell in pairs)
    return (
        "{\n"
        f'  "format_version": {FORMAT_VERSION},\n'
        f'  "instance": {json.dumps(instance_name)},\n'
        + ('  "assignment": [\n' + body + "\n  ]\n" if pairs else '  "assignment": []\n')
        + "}\n"
    )


def parse_solution(text: str) -> Solution:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"invalid JSON: {exc.msg} (line {exc.lineno})", "$") from exc
    pairs = _field(doc, "assignment", list, "$")
    assignment: dict[int, int] = {}
    for n, pair in enumerate(pairs):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in pair)
        ):
            raise InstanceError("expected [cargo id, cell id]", f"assignment[{n}]")
        if pair[0] in assignment:
            raise InstanceError(f"cargo {pair[0]} assigned twice", f"assignment[{n}]")
        assignment[pair[0]] = pair[1]
    return Solution(assignment)
