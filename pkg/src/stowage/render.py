"""Deck grid images: binary PPM (P6) raster and SVG.

Colours: unusable cells dark blue, empty usable cells light grey, occupied
cells the colour of the occupying cargo's category (``PALETTE`` order over
the instance's sorted category labels, cycling if there are more than 12).
Cells are ``scale`` pixels square, separated by 1-pixel grid lines.
"""

from __future__ import annotations

from pathlib import Path

from .model import Instance, MalformedSolutionError, Solution, check_feasibility

UNUSABLE = (0, 0, 139)
EMPTY = (230, 230, 230)
GRID = (120, 120, 120)
PALETTE = (
    (230, 25, 75),
    (60, 180, 75),
    (255, 225, 25),
    (245, 130, 48),
    (145, 30, 180),
    (70, 240, 240),
    (240, 50, 230),
    (210, 245, 60),
    (250, 190, 212),
    (0, 128, 128),
    (170, 110, 40),
    (128, 0, 0),
)


def category_colors(instance: Instance) -> dict[str, tuple[int, int, int]]:
    return {cat: PALETTE[n % len(PALETTE)] for n, cat in enumerate(instance.categories)}


def cell_colors(instance: Instance, solution: Solution | None = None) -> dict[int, tuple[int, int, int]]:
    """Colour of every cell id."""
    if solution is not None:
        report = check_feasibility(solution, instance)
        if not report.feasible:
            raise MalformedSolutionError(f"solution is infeasible for this instance: {report.violations[0]}")
    colors = category_colors(instance)
    occupant = solution.occupant if solution is not None else {}
    out = {}
    for cell in instance.cells:
        if not cell.usable:
            out[cell.id] = UNUSABLE
        elif cell.id in occupant:
            out[cell.id] = colors[instance.cargo(occupant[cell.id]).category]
        else:
            out[cell.id] = EMPTY
    return out


def deck_raster(instance: Instance, deck_index: int, colors, scale: int = 16) -> tuple[int, int, bytes]:
    """Return ``(width, height, rgb bytes)`` of one deck's grid."""
    width = instance.cols * (scale + 1) + 1
    height = instance.rows * (scale + 1) + 1
    pixels = bytearray(bytes(GRID) * (width * height))
    for cell in instance.cells:
        if cell.deck != deck_index:
            continue
        rgb = bytes(colors[cell.id])
        x0 = cell.col * (scale + 1) + 1
        for y in range(cell.row * (scale + 1) + 1, (cell.row + 1) * (scale + 1)):
            start = (y * width + x0) * 3
            pixels[start : start + 3 * scale] = rgb * scale
    return width, height, bytes(pixels)


def ppm_bytes(width: int, height: int, rgb: bytes) -> bytes:
    return f"P6\n{width} {height}\n255\n".encode("ascii") + rgb


def deck_svg(instance: Instance, deck_index: int, colors, scale: int = 16) -> str:
    width = instance.cols * (scale + 1) + 1
    height = instance.rows * (scale + 1) + 1
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="rgb{GRID}"/>',
    ]
    for cell in instance.cells:
        if cell.deck != deck_index:
            continue
        x = cell.col * (scale + 1) + 1
        y = cell.row * (scale + 1) + 1
        r, g, b = colors[cell.id]
        parts.append(
            f'<rect x="{x}" y="{y}" width="{scale}" height="{scale}" fill="rgb({r},{g},{b})"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render(
    instance: Instance,
    out_prefix: str | Path,
    solution: Solution | None = None,
    scale: int = 16,
    svg: bool = False,
) -> list[Path]:
    """Write one image per deck as ``<prefix>_deck<index>.ppm`` (and ``.svg``)."""
    colors = cell_colors(instance, solution)
    prefix = Path(out_prefix)
    written = []
    for deck in instance.decks:
        w, h, rgb = deck_raster(instance, deck.index, colors, scale)
        path = prefix.with_name(f"{prefix.name}_deck{deck.index}.ppm")
        path.write_bytes(ppm_bytes(w, h, rgb))
        written.append(path)
        if svg:
            svg_path = path.with_suffix(".svg")
            svg_path.write_text(deck_svg(instance, deck.index, colors, scale), encoding="utf-8")
            written.append(svg_path)
    return written


def read_ppm(data: bytes) -> tuple[int, int, bytes]:
    """Parse the P6 files written by :func:`render`."""
    header, _, rest = data.partition(b"\n")
    if header != b"P6":
        raise ValueError("not a binary PPM")
    dims, _, rest = rest.partition(b"\n")
    maxval, _, rgb = rest.partition(b"\n")
    width, height = map(int, dims.split())
    if int(maxval) != 255 or len(rgb) != width * height * 3:
        raise ValueError("unexpected PPM payload")
    return width, height, rgb
