"""Entropy as a macroeconomic production function.

A macro system observed over years is summarized per period by capital E
(GDP), active worker population V, capital stock W, and agent count N.
The production-function entropy of one period is

    S(E, V) = 2*alpha*N*ln(E) + W*ln(V)  =  ln(E^(2*alpha*N) * V^W)

evaluated entirely in log space (the quantity xi = E^(2aN) * V^W
overflows for any realistic GDP, so it is never materialized). Year-over-
year behavior is summarized by the entropic elasticity -- the relative
entropy change per relative changes in capital and worker population,
discretized as one-period forward differences anchored at the earlier
observation -- and by the sign of the entropy change: a positive change
reads as goods and services being distributed (disorder created), a
negative one as products and money being collected (order created).

The multinomial form ln P(N_1..N_k) over goods categories is the
discrete counterpart and is computed through log-gamma, never through
raw factorials.

Economic temperature T (E = alpha*N*T, money per agent) and economic
pressure p = W/V are derived notes, not stored fields; they are exposed
as properties on MacroObservation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "MacroObservation",
    "MacroSeries",
    "CategoryCounts",
    "Direction",
    "EntropyReport",
    "production_entropy",
    "entropic_elasticity",
    "multinomial_entropy",
    "analyze_series",
]

# |dS| below this is classified Neutral; the sign is otherwise exact.
DIRECTION_TOLERANCE = 1e-12


@dataclass(frozen=True)
class MacroObservation:
    """One year of a macro system."""

    period: int
    capital_E: float  # monetary units (GDP)
    volume_V: float  # persons (active worker population)
    work_W: float  # monetary units (capital stock)
    agents_N: int = 1
    alpha: float = 1.0  # calibration constant relating temperature to capital

    def __post_init__(self):
        if not self.capital_E > 0:
            raise ValueError(f"capital_E must be > 0, got {self.capital_E}")
        if not self.volume_V > 0:
            raise ValueError(f"volume_V must be > 0, got {self.volume_V}")
        if self.work_W < 0:
            raise ValueError(f"work_W must be >= 0, got {self.work_W}")
        if self.agents_N < 1:
            raise ValueError(f"agents_N must be >= 1, got {self.agents_N}")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")

    @property
    def pressure(self) -> float:
        """Economic pressure p = W/V (capital stock per worker)."""
        return self.work_W / self.volume_V

    @property
    def temperature(self) -> float:
        """Economic temperature T from E = alpha*N*T (money per agent)."""
        return self.capital_E / (self.alpha * self.agents_N)


@dataclass(frozen=True)
class MacroSeries:
    """Chronologically ordered macro observations (strictly increasing periods)."""

    observations: tuple[MacroObservation, ...]

    def __post_init__(self):
        obs = tuple(self.observations)
        object.__setattr__(self, "observations", obs)
        if not obs:
            raise ValueError("series must contain at least one observation")
        for prev, curr in zip(obs, obs[1:]):
            if curr.period <= prev.period:
                raise ValueError(
                    f"periods must be strictly increasing: "
                    f"{prev.period} followed by {curr.period}"
                )


@dataclass(frozen=True)
class CategoryCounts:
    """Category occupation counts N_1..N_k with their probabilities q_1..q_k."""

    counts: tuple[int, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self):
        counts = tuple(self.counts)
        probs = tuple(self.probabilities)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "probabilities", probs)
        if len(counts) != len(probs):
            raise ValueError(
                f"counts and probabilities differ in length: "
                f"{len(counts)} vs {len(probs)}"
            )
        if any(c < 0 for c in counts):
            raise ValueError("counts must be nonnegative")
        if any(not 0 < q <= 1 for q in probs):
            raise ValueError("probabilities must lie in (0, 1]")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1, got {sum(probs)}")

    @property
    def total(self) -> int:
        """N_0 = sum of category counts."""
        return sum(self.counts)


class Direction(Enum):
    """Reading of the entropy change over one period."""

    ORDER_CREATING = "order"  # entropy fell: products and money collected
    DISORDER_CREATING = "disorder"  # entropy rose: goods and services distributed
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class EntropyReport:
    """Per-period analysis row."""

    period: int
    entropy: float
    log_xi: float  # ln(xi) = ln(E^(2aN) * V^W); equals entropy, kept in log space
    elasticity: float | None  # absent for the first period
    direction: Direction


def production_entropy(obs: MacroObservation) -> float:
    """Production-function entropy 2*alpha*N*ln(E) + W*ln(V) of one period."""
    if not obs.capital_E > 0 or not obs.volume_V > 0:
        raise ValueError("production entropy needs E > 0 and V > 0")
    return (
        2.0 * obs.alpha * obs.agents_N * math.log(obs.capital_E)
        + obs.work_W * math.log(obs.volume_V)
    )


def entropic_elasticity(prev: MacroObservation, curr: MacroObservation) -> float:
    """Relative entropy change per relative (dE, dV), anchored at `prev`.

    Forward differences over one period:

        (1/S_prev) * [2*alpha*N*dE/E_prev + W_prev*dV/V_prev]

    with alpha, N and W taken from the earlier observation.
    """
    if curr.period <= prev.period:
        raise ValueError(
            f"observations out of order: {prev.period} then {curr.period}"
        )
    s_prev = production_entropy(prev)
    if s_prev == 0.0:
        raise ZeroDivisionError(
            "elasticity undefined at unit-entropy point (ln xi = 0)"
        )
    d_capital = (curr.capital_E - prev.capital_E) / prev.capital_E
    d_volume = (curr.volume_V - prev.volume_V) / prev.volume_V
    bracket = 2.0 * prev.alpha * prev.agents_N * d_capital + prev.work_W * d_volume
    return bracket / s_prev


def multinomial_entropy(c: CategoryCounts) -> float:
    """ln of the multinomial probability of the category counts.

    ln N_0! - sum ln N_i! + sum N_i ln q_i, via log-gamma. Always <= 0;
    equals 0 only for a single category with q = 1.
    """
    if any(q <= 0 for q in c.probabilities):
        raise ValueError("probabilities must be positive")
    n0 = c.total
    result = math.lgamma(n0 + 1)
    for n_i, q_i in zip(c.counts, c.probabilities):
        result -= math.lgamma(n_i + 1)
        result += n_i * math.log(q_i)
    return result


def analyze_series(series: MacroSeries) -> list[EntropyReport]:
    """One report per observation: entropy, elasticity, order/disorder label.

    The first period carries no elasticity and is classified Neutral.
    Later periods are DisorderCreating when entropy rose by more than the
    neutral band, OrderCreating when it fell by more, Neutral otherwise.
    """
    reports: list[EntropyReport] = []
    prev_obs: MacroObservation | None = None
    prev_entropy = 0.0
    for obs in series.observations:
        try:
            entropy = production_entropy(obs)
            if prev_obs is None:
                elasticity = None
                direction = Direction.NEUTRAL
            else:
                elasticity = entropic_elasticity(prev_obs, obs)
                delta = entropy - prev_entropy
                if delta > DIRECTION_TOLERANCE:
                    direction = Direction.DISORDER_CREATING
                elif delta < -DIRECTION_TOLERANCE:
                    direction = Direction.ORDER_CREATING
                else:
                    direction = Direction.NEUTRAL
        except (ValueError, ZeroDivisionError) as exc:
            raise type(exc)(f"period {obs.period}: {exc}") from exc
        reports.append(
            EntropyReport(
                period=obs.period,
                entropy=entropy,
                log_xi=entropy,
                elasticity=elasticity,
                direction=direction,
            )
        )
        prev_obs = obs
        prev_entropy = entropy
    return reports
