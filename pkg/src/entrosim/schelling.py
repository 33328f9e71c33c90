"""Schelling segregation dynamic on a 2D lattice.

Agents of two types are satisfied when at most tolerance_m of their
occupied Moore-radius-r neighbors have the other type.  Each sweep
evaluates every agent synchronously against the current grid, then
relocates the unsatisfied ones in seeded-random order: to a uniformly
chosen empty cell when one exists, otherwise by swapping with another
not-yet-relocated unsatisfied agent of the other type.  Every agent is
relocated at most once per sweep, so type counts are conserved exactly.

Placement and relocation randomness come from decorrelated substreams of
the same seed, making whole runs reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from entrosim.ca import Boundary2D, CellState, Grid2D, moore_neighbors
from entrosim.exchange import EntropyTrace, shannon_entropy
from entrosim.rng import Xoshiro256

__all__ = [
    "SchellingConfig",
    "SchellingState",
    "SchellingRun",
    "utility",
    "init",
    "sweep",
    "run",
]

_AGENTS = (CellState.TYPE_A, CellState.TYPE_B)


@dataclass(frozen=True, slots=True)
class SchellingConfig:
    """Lattice shape, tolerance and population parameters for one run."""

    width: int
    height: int
    tolerance_m: int
    radius_r: int = 1
    density: float = 0.9
    type_split: float = 0.5
    seed: int = 0
    max_sweeps: int = 200
    boundary: Boundary2D = Boundary2D.TOROIDAL

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise ValueError("grid dimensions must be positive")
        if self.radius_r < 1:
            raise ValueError("radius_r must be positive")
        window = (2 * self.radius_r + 1) ** 2 - 1
        if not 0 <= self.tolerance_m <= window:
            raise ValueError(
                f"tolerance_m must be in [0, {window}] for radius {self.radius_r}"
            )
        if not 0 < self.density <= 1:
            raise ValueError("density must be in (0, 1]")
        if not 0 < self.type_split < 1:
            raise ValueError("type_split must be in (0, 1)")
        if self.density * self.width * self.height < 2:
            raise ValueError("need room for at least 2 agents")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be positive")


@dataclass(frozen=True, slots=True)
class SchellingState:
    """Immutable snapshot of the lattice after `step` sweeps."""

    grid: Grid2D
    step: int
    satisfied_count: int
    config: SchellingConfig

    @property
    def agent_count(self) -> int:
        return sum(1 for c in self.grid.cells if c in _AGENTS)

    @property
    def unsatisfied_count(self) -> int:
        return self.agent_count - self.satisfied_count


@dataclass(frozen=True, slots=True)
class SchellingRun:
    """Outcome of `run`: final state plus the per-sweep entropy trace."""

    final: SchellingState
    trace: EntropyTrace
    converged: bool
    unsatisfied_per_step: tuple[int, ...]


def utility(state: SchellingState, x: int, y: int) -> int:
    """1 if the agent at (x, y) tolerates its neighborhood, else 0.

    The agent counts occupied neighbors of the other type within
    Chebyshev radius r; vacancies contribute nothing.  Raises on an
    unoccupied cell.
    """
    own = state.grid.get(x, y)
    if own not in _AGENTS:
        raise ValueError(f"cell ({x}, {y}) holds no agent")
    unlike = 0
    for neighbor in moore_neighbors(state.grid, x, y, state.config.radius_r):
        if neighbor in _AGENTS and neighbor != own:
            unlike += 1
    return 1 if unlike <= state.config.tolerance_m else 0


def _count_satisfied(grid: Grid2D, config: SchellingConfig) -> tuple[int, list[int]]:
    """(satisfied count, row-major indices of unsatisfied agents)."""
    unsatisfied: list[int] = []
    satisfied = 0
    width = grid.width
    for idx, cell in enumerate(grid.cells):
        if cell not in _AGENTS:
            continue
        x, y = idx % width, idx // width
        unlike = 0
        for neighbor in moore_neighbors(grid, x, y, config.radius_r):
            if neighbor in _AGENTS and neighbor != cell:
                unlike += 1
        if unlike <= config.tolerance_m:
            satisfied += 1
        else:
            unsatisfied.append(idx)
    return satisfied, unsatisfied


def init(config: SchellingConfig) -> SchellingState:
    """Seeded random placement of the two populations at the given density."""
    n_cells = config.width * config.height
    n_occupied = math.floor(config.density * n_cells)
    n_a = round(config.type_split * n_occupied)
    n_b = n_occupied - n_a
    if n_a < 1 or n_b < 1:
        raise ValueError("both agent types must be represented")
    rng = Xoshiro256(config.seed)
    sites = list(range(n_cells))
    rng.shuffle(sites)
    cells = [CellState.EMPTY] * n_cells
    for idx in sites[:n_a]:
        cells[idx] = CellState.TYPE_A
    for idx in sites[n_a:n_occupied]:
        cells[idx] = CellState.TYPE_B
    grid = Grid2D(
        width=config.width,
        height=config.height,
        cells=tuple(cells),
        boundary=config.boundary,
    )
    satisfied, _ = _count_satisfied(grid, config)
    return SchellingState(grid=grid, step=0, satisfied_count=satisfied, config=config)


def sweep(state: SchellingState, rng: Xoshiro256) -> SchellingState:
    """One synchronous evaluation pass followed by seeded-order relocation.

    A sweep with no unsatisfied agents returns the same grid with the
    step counter advanced (fixed point).  An unsatisfied agent with no
    vacancy and no eligible swap partner stays put.
    """
    config = state.config
    _, unsatisfied = _count_satisfied(state.grid, config)
    if not unsatisfied:
        return replace(state, step=state.step + 1)

    cells = list(state.grid.cells)
    empties = [i for i, c in enumerate(cells) if c not in _AGENTS]
    order = list(unsatisfied)
    rng.shuffle(order)
    consumed: set[int] = set()
    for i, pos in enumerate(order):
        if pos in consumed:
            continue  # already relocated as a swap partner
        own = cells[pos]
        if empties:
            k = rng.below(len(empties))
            target = empties[k]
            cells[target] = own
            cells[pos] = CellState.EMPTY
            empties[k] = pos  # vacated cell joins the pool in place
        else:
            partners = [
                q for q in order[i + 1:] if q not in consumed and cells[q] != own
            ]
            if not partners:
                continue
            q = partners[rng.below(len(partners))]
            cells[pos], cells[q] = cells[q], cells[pos]
            consumed.add(q)

    grid = replace(state.grid, cells=tuple(cells))
    satisfied, _ = _count_satisfied(grid, config)
    return SchellingState(
        grid=grid, step=state.step + 1, satisfied_count=satisfied, config=config
    )


def run(config: SchellingConfig) -> SchellingRun:
    """Sweep until every agent is satisfied or max_sweeps is exhausted.

    The trace records the Shannon entropy of the (satisfied, unsatisfied)
    frequency pair at step 0 and after every executed sweep.
    Non-convergence is reported through the `converged` flag, not raised.
    """
    state = init(config)
    rng = Xoshiro256(config.seed).jumped()
    agents = state.agent_count

    def entropy_of(s: SchellingState) -> float:
        return shannon_entropy([s.satisfied_count / agents, s.unsatisfied_count / agents])

    samples = [(0, entropy_of(state))]
    unsatisfied = [state.unsatisfied_count]
    converged = state.unsatisfied_count == 0
    while not converged and state.step < config.max_sweeps:
        state = sweep(state, rng)
        samples.append((state.step, entropy_of(state)))
        unsatisfied.append(state.unsatisfied_count)
        converged = state.unsatisfied_count == 0
    return SchellingRun(
        final=state,
        trace=EntropyTrace(tuple(samples)),
        converged=converged,
        unsatisfied_per_step=tuple(unsatisfied),
    )
