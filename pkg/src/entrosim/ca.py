"""Deterministic cellular-automaton substrate.

Elementary one-dimensional automata under Wolfram rule numbering, plus a
two-dimensional lattice with Moore neighborhoods that the segregation and
consumer models build on.  All stepping is pure: functions take a lattice
and return a new one, so snapshots can be shared freely between threads
and parameter sweeps parallelize by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

__all__ = [
    "Boundary1D",
    "Boundary2D",
    "CellState",
    "RuleTable",
    "Row1D",
    "Grid2D",
    "rule_table",
    "step_1d",
    "evolve_1d",
    "single_seed_row",
    "random_row",
    "moore_neighbors",
]


class Boundary1D(Enum):
    """Edge handling for a 1D row: wrap around, or read zeros past the ends."""

    TOROIDAL = "toroidal"
    FIXED_ZERO = "fixed-zero"


class Boundary2D(Enum):
    """Edge handling for a 2D lattice: wrap around, or truncate at the edges."""

    TOROIDAL = "toroidal"
    BOUNDED = "bounded"


class CellState(IntEnum):
    """Contents of one lattice cell.

    EMPTY is a vacancy, TYPE_A and TYPE_B are the two agent kinds, and
    PREFERRED marks a vacated cell that a satisfied agent once occupied
    (used by the consumer model's growing preferred region).
    """

    EMPTY = 0
    TYPE_A = 1
    TYPE_B = 2
    PREFERRED = 3


@dataclass(frozen=True, slots=True)
class RuleTable:
    """Lookup table for an elementary CA rule.

    ``outputs[v]`` is the next state of a cell whose (left, center, right)
    neighborhood encodes to ``v = 4*left + 2*center + right``; by the
    Wolfram numbering convention that output equals bit ``v`` of
    ``rule_number``.
    """

    rule_number: int
    outputs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 0 <= self.rule_number <= 255:
            raise ValueError(f"rule number must be in [0, 255], got {self.rule_number}")
        if len(self.outputs) != 8 or any(o not in (0, 1) for o in self.outputs):
            raise ValueError("outputs must be 8 binary values")
        if any(o != (self.rule_number >> v) & 1 for v, o in enumerate(self.outputs)):
            raise ValueError("outputs inconsistent with rule number")


def rule_table(rule_number: int) -> RuleTable:
    """Expand a Wolfram rule number into its 8-entry lookup table."""
    if not 0 <= rule_number <= 255:
        raise ValueError(f"rule number must be in [0, 255], got {rule_number}")
    return RuleTable(
        rule_number=rule_number,
        outputs=tuple((rule_number >> v) & 1 for v in range(8)),
    )


@dataclass(frozen=True, slots=True)
class Row1D:
    """One generation of an elementary CA: binary cells plus edge handling."""

    cells: tuple[int, ...]
    boundary: Boundary1D = Boundary1D.TOROIDAL

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("row must be nonempty")
        if any(c not in (0, 1) for c in self.cells):
            raise ValueError("cells must be binary")

    @property
    def width(self) -> int:
        return len(self.cells)


def single_seed_row(width: int, boundary: Boundary1D = Boundary1D.TOROIDAL) -> Row1D:
    """A row of zeros with a single 1 at the center cell (index width//2)."""
    if width < 1:
        raise ValueError("width must be positive")
    cells = [0] * width
    cells[width // 2] = 1
    return Row1D(cells=tuple(cells), boundary=boundary)


def random_row(width: int, rng, boundary: Boundary1D = Boundary1D.TOROIDAL) -> Row1D:
    """A row of independent fair bits drawn from ``rng``."""
    if width < 1:
        raise ValueError("width must be positive")
    return Row1D(cells=tuple(rng.below(2) for _ in range(width)), boundary=boundary)


def step_1d(row: Row1D, rule: RuleTable) -> Row1D:
    """Advance a row one generation under the rule's lookup table."""
    cells = row.cells
    w = len(cells)
    out = [0] * w
    outputs = rule.outputs
    if row.boundary is Boundary1D.TOROIDAL:
        for i in range(w):
            v = 4 * cells[i - 1] + 2 * cells[i] + cells[(i + 1) % w]
            out[i] = outputs[v]
    else:
        for i in range(w):
            left = cells[i - 1] if i > 0 else 0
            right = cells[i + 1] if i + 1 < w else 0
            out[i] = outputs[4 * left + 2 * cells[i] + right]
    return Row1D(cells=tuple(out), boundary=row.boundary)


def evolve_1d(row: Row1D, rule: RuleTable, steps: int) -> list[Row1D]:
    """Return the steps+1 generations starting from ``row`` inclusive."""
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    history = [row]
    for _ in range(steps):
        row = step_1d(row, rule)
        history.append(row)
    return history


@dataclass(frozen=True, slots=True)
class Grid2D:
    """Row-major 2D lattice of cell states with explicit edge handling."""

    width: int
    height: int
    cells: tuple[CellState, ...]
    boundary: Boundary2D = Boundary2D.TOROIDAL

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        if len(self.cells) != self.width * self.height:
            raise ValueError(
                f"expected {self.width * self.height} cells, got {len(self.cells)}"
            )

    def index(self, x: int, y: int) -> int:
        """Row-major index of (x, y); raises on out-of-bounds coordinates."""
        if not (0 <= x < self.width and 0 <= y < self.height):
            raise IndexError(f"({x}, {y}) outside {self.width}x{self.height} grid")
        return y * self.width + x

    def get(self, x: int, y: int) -> CellState:
        return self.cells[self.index(x, y)]


def moore_neighbors(grid: Grid2D, x: int, y: int, r: int = 1) -> list[CellState]:
    """Cell states within Chebyshev distance ``r`` of (x, y), center excluded.

    Toroidal grids wrap, so the result always has (2r+1)^2 - 1 entries;
    bounded grids truncate at the edges.  Entries are ordered row-major
    over the offset window.
    """
    if r < 1:
        raise ValueError("radius must be positive")
    grid.index(x, y)  # bounds check
    cells = grid.cells
    w, h = grid.width, grid.height
    out: list[CellState] = []
    if grid.boundary is Boundary2D.TOROIDAL:
        for dy in range(-r, r + 1):
            ny = (y + dy) % h
            base = ny * w
            for dx in range(-r, r + 1):
                if dx == 0 and dy == 0:
                    continue
                out.append(cells[base + (x + dx) % w])
    else:
        for dy in range(-r, r + 1):
            ny = y + dy
            if not 0 <= ny < h:
                continue
            base = ny * w
            for dx in range(-r, r + 1):
                if dx == 0 and dy == 0:
                    continue
                nx = x + dx
                if 0 <= nx < w:
                    out.append(cells[base + nx])
    return out
