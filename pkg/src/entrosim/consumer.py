"""Composite consumer model on a quantized prices-by-goods lattice.

Each cell of the lattice is one rent state (a price level paired with a
goods level).  Two consumer populations move under the Schelling dynamic,
and every cell a satisfied agent occupies is marked preferred, growing a
monotone region of visited states out of the initial rent cell.  A
two-player money-exchange lottery runs alongside as the stochastic layer,
while the per-step entropy trace measures the satisfied/unsatisfied
split of the agent population.

The Schelling layer, the lottery and the initial placement draw from
decorrelated substreams of the one configured seed, so disabling the
lottery leaves the lattice trajectory untouched and full runs reproduce
byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from entrosim.ca import Boundary2D, CellState, Grid2D
from entrosim.exchange import EntropyTrace, WealthVector, exchange_step, shannon_entropy
from entrosim.rng import Xoshiro256
from entrosim.schelling import SchellingConfig, SchellingState, _count_satisfied, sweep

__all__ = [
    "GIBBS_PLAYERS",
    "ConsumerConfig",
    "ConsumerState",
    "ConsumerRun",
    "init_consumer",
    "consumer_step",
    "run_consumer",
]

GIBBS_PLAYERS = 2  # the lottery layer is a two-player game by construction

_AGENTS = (CellState.TYPE_A, CellState.TYPE_B)


@dataclass(frozen=True, slots=True)
class ConsumerConfig:
    """Lattice geometry, Schelling parameters and lottery parameters.

    good_levels is the width (quantized goods axis) and price_levels the
    height (quantized price axis); the initial rent cell defaults to the
    upper-left corner and is kept vacant at placement so it is visible as
    the seed of the preferred region.
    """

    price_levels: int = 16
    good_levels: int = 16
    tolerance_m: int = 3
    radius_r: int = 1
    steps: int = 135
    seed: int = 0
    initial_rent_cell: tuple[int, int] = (0, 0)
    gibbs_delta_m: float = 1.0
    gibbs_initial_money: float = 1.0
    density: float = 0.5
    type_split: float = 0.5
    snapshot_steps: tuple[int, ...] = (57, 70, 91, 135)
    boundary: Boundary2D = Boundary2D.BOUNDED

    def __post_init__(self) -> None:
        if self.price_levels < 1 or self.good_levels < 1:
            raise ValueError("grid dimensions must be positive")
        window = (2 * self.radius_r + 1) ** 2 - 1
        if self.radius_r < 1:
            raise ValueError("radius_r must be positive")
        if not 0 <= self.tolerance_m <= window:
            raise ValueError(
                f"tolerance_m must be in [0, {window}] for radius {self.radius_r}"
            )
        if self.steps < 1:
            raise ValueError("steps must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        x, y = self.initial_rent_cell
        if not (0 <= x < self.good_levels and 0 <= y < self.price_levels):
            raise ValueError("initial_rent_cell out of bounds")
        if self.gibbs_delta_m <= 0:
            raise ValueError("gibbs_delta_m must be positive")
        if self.gibbs_initial_money < 0:
            raise ValueError("gibbs_initial_money must be nonnegative")
        if not 0 < self.density < 1:
            raise ValueError("density must be in (0, 1)")
        if not 0 < self.type_split < 1:
            raise ValueError("type_split must be in (0, 1)")
        n_cells = self.price_levels * self.good_levels
        if math.floor(self.density * n_cells) < 2:
            raise ValueError("grid cannot host two agent populations")
        if any(s < 0 for s in self.snapshot_steps):
            raise ValueError("snapshot steps must be nonnegative")

    def schelling_config(self) -> SchellingConfig:
        """The Schelling parameters driving the agent layer."""
        return SchellingConfig(
            width=self.good_levels,
            height=self.price_levels,
            tolerance_m=self.tolerance_m,
            radius_r=self.radius_r,
            density=self.density,
            type_split=self.type_split,
            seed=self.seed,
            boundary=self.boundary,
        )


@dataclass(frozen=True, slots=True)
class ConsumerState:
    """Immutable snapshot: agent lattice, visited set, lottery balances."""

    grid: Grid2D
    preferred: frozenset[int]
    step: int
    satisfaction_counts: tuple[int, int]
    lottery: WealthVector

    @property
    def occupancy(self) -> Grid2D:
        """Rendered view: agents as placed, vacant visited cells PREFERRED."""
        cells = list(self.grid.cells)
        for idx in self.preferred:
            if cells[idx] == CellState.EMPTY:
                cells[idx] = CellState.PREFERRED
        return replace(self.grid, cells=tuple(cells))


@dataclass(frozen=True, slots=True)
class ConsumerRun:
    """Outcome of `run_consumer`."""

    final: ConsumerState
    trace: EntropyTrace
    snapshots: tuple[tuple[int, Grid2D], ...]
    counts_per_step: tuple[tuple[int, int], ...]


def _entropy_of(counts: tuple[int, int]) -> float:
    total = counts[0] + counts[1]
    return shannon_entropy([counts[0] / total, counts[1] / total])


def init_consumer(config: ConsumerConfig) -> ConsumerState:
    """Seeded placement of both populations; the rent cell starts preferred."""
    n_cells = config.price_levels * config.good_levels
    n_occupied = math.floor(config.density * n_cells)
    n_a = round(config.type_split * n_occupied)
    n_b = n_occupied - n_a
    if n_a < 1 or n_b < 1:
        raise ValueError("both agent types must be represented")
    x, y = config.initial_rent_cell
    rent_idx = y * config.good_levels + x
    rng = Xoshiro256(config.seed)
    sites = [i for i in range(n_cells) if i != rent_idx]
    if n_occupied > len(sites):
        raise ValueError("no room for the populations beside the rent cell")
    rng.shuffle(sites)
    cells = [CellState.EMPTY] * n_cells
    for idx in sites[:n_a]:
        cells[idx] = CellState.TYPE_A
    for idx in sites[n_a:n_occupied]:
        cells[idx] = CellState.TYPE_B
    grid = Grid2D(
        width=config.good_levels,
        height=config.price_levels,
        cells=tuple(cells),
        boundary=config.boundary,
    )
    satisfied, _ = _count_satisfied(grid, config.schelling_config())
    per_player = config.gibbs_initial_money
    return ConsumerState(
        grid=grid,
        preferred=frozenset({rent_idx}),
        step=0,
        satisfaction_counts=(satisfied, n_occupied - satisfied),
        lottery=WealthVector((per_player,) * GIBBS_PLAYERS),
    )


def consumer_step(
    state: ConsumerState,
    config: ConsumerConfig,
    rng: Xoshiro256,
    lottery_rng: Xoshiro256 | None = None,
) -> ConsumerState:
    """One composite step.

    Runs one Schelling sweep over the agent layer, marks the cells held
    by satisfied agents as preferred, advances the two-player lottery
    (skipped when lottery_rng is None, which provably cannot disturb the
    lattice trajectory since the layers draw from separate streams), and
    recomputes the satisfaction counts.
    """
    sch_config = config.schelling_config()
    sch_state = SchellingState(
        grid=state.grid,
        step=state.step,
        satisfied_count=state.satisfaction_counts[0],
        config=sch_config,
    )
    swept = sweep(sch_state, rng)

    satisfied, unsatisfied = _count_satisfied(swept.grid, sch_config)
    blocked = set(unsatisfied)
    preferred = set(state.preferred)
    for idx, cell in enumerate(swept.grid.cells):
        if cell in _AGENTS and idx not in blocked:
            preferred.add(idx)

    lottery = state.lottery
    if lottery_rng is not None:
        lottery = exchange_step(lottery, config.gibbs_delta_m, lottery_rng)

    agents = len(swept.grid.cells) - swept.grid.cells.count(CellState.EMPTY)
    return ConsumerState(
        grid=swept.grid,
        preferred=frozenset(preferred),
        step=state.step + 1,
        satisfaction_counts=(satisfied, agents - satisfied),
        lottery=lottery,
    )


def run_consumer(config: ConsumerConfig) -> ConsumerRun:
    """Iterate consumer_step for the configured number of steps.

    The trace holds one entropy sample per step including step 0, each
    the Shannon entropy of the normalized (satisfied, unsatisfied) pair;
    occupancy snapshots are captured at the configured step indices.
    """
    state = init_consumer(config)
    rng = Xoshiro256(config.seed).jumped()
    lottery_rng = rng.jumped()

    wanted = set(config.snapshot_steps)
    snapshots: list[tuple[int, Grid2D]] = []
    if 0 in wanted:
        snapshots.append((0, state.occupancy))
    samples = [(0, _entropy_of(state.satisfaction_counts))]
    counts = [state.satisfaction_counts]
    for _ in range(config.steps):
        state = consumer_step(state, config, rng, lottery_rng)
        samples.append((state.step, _entropy_of(state.satisfaction_counts)))
        counts.append(state.satisfaction_counts)
        if state.step in wanted:
            snapshots.append((state.step, state.occupancy))
    return ConsumerRun(
        final=state,
        trace=EntropyTrace(tuple(samples)),
        snapshots=tuple(snapshots),
        counts_per_step=tuple(counts),
    )
