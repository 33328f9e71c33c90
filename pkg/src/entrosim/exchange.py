"""Random money-exchange lottery among N conserved-wealth players.

The Dragulescu-Yakovenko game: repeatedly pick a pair of players and a
fixed quantum delta_m changes hands from a uniformly chosen loser to the
other player, unless the loser cannot afford it (the play is canceled, so
balances never go negative and total money is conserved exactly).  The
stationary wealth distribution is the Gibbs form P(m) = A*exp(-beta*m)
with beta = N/M, which `gibbs_fit` pins rather than re-estimates.

Long runs dispatch to the compiled kernel lane when available (see
`entrosim.kernels`); `exchange_step` is the single-step reference that
consumes the identical random stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from entrosim import kernels
from entrosim.rng import Xoshiro256

__all__ = [
    "WealthVector",
    "ExchangeConfig",
    "GibbsFit",
    "EntropyTrace",
    "ExchangeResult",
    "exchange_step",
    "run_exchange",
    "shannon_entropy",
    "wealth_histogram",
    "gibbs_fit",
]

TRACE_SAMPLES = 64  # target sample count for the logarithmic schedule


@dataclass(frozen=True, slots=True)
class WealthVector:
    """Balances of all players; immutable snapshot with cached total.

    Balances may be ints or floats.  When the exchange quantum and the
    initial balances are both integral the whole simulation stays in
    integer arithmetic and conservation is exact rather than approximate.
    """

    balances: tuple[float, ...]
    total_M: float = field(init=False)

    def __post_init__(self) -> None:
        if len(self.balances) < 2:
            raise ValueError("need at least 2 players")
        if any(b < 0 for b in self.balances):
            raise ValueError("balances must be nonnegative")
        object.__setattr__(self, "total_M", sum(self.balances))

    @property
    def players_N(self) -> int:
        return len(self.balances)


@dataclass(frozen=True, slots=True)
class ExchangeConfig:
    """Run parameters for the exchange game."""

    players_N: int
    initial_money_per_agent: float = 1.0
    delta_m: float = 1.0
    steps: int = 10_000
    seed: int = 0
    histogram_bins: int = 50
    trace_stride: int | None = None  # None selects the logarithmic schedule
    concentrated: bool = False  # all money on player 0 instead of uniform

    def __post_init__(self) -> None:
        if self.players_N < 2:
            raise ValueError("players_N must be at least 2")
        if self.initial_money_per_agent < 0:
            raise ValueError("initial money must be nonnegative")
        if self.delta_m <= 0:
            raise ValueError("delta_m must be positive")
        if self.steps < 0:
            raise ValueError("steps must be nonnegative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.histogram_bins < 1:
            raise ValueError("histogram_bins must be positive")
        if self.trace_stride is not None and self.trace_stride < 1:
            raise ValueError("trace_stride must be positive")


@dataclass(frozen=True, slots=True)
class GibbsFit:
    """Gibbs-distribution parameters for a wealth snapshot.

    The temperature is money per player by definition, T = M/N and
    beta = 1/T = N/M; the log-linear regression against the histogram
    measures goodness of fit only, it does not re-estimate beta.
    fit_error is the RMS residual over nonempty log-bins, +inf when
    fewer than two bins are occupied.  ln_total_money = ln(M) is carried
    as an annotation alongside the distribution-level quantities.
    """

    temperature_T: float
    beta: float
    amplitude_A: float
    fit_error: float
    ln_total_money: float

    def __post_init__(self) -> None:
        if self.temperature_T <= 0 or self.beta <= 0 or self.amplitude_A <= 0:
            raise ValueError("temperature, beta and amplitude must be positive")
        if abs(self.beta * self.temperature_T - 1.0) > 1e-12:
            raise ValueError("beta must be the reciprocal of temperature_T")
        if self.fit_error < 0:
            raise ValueError("fit_error must be nonnegative")


@dataclass(frozen=True, slots=True)
class EntropyTrace:
    """Entropy samples (step, S) at strictly increasing step indices."""

    samples: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        for (s0, _), (s1, _) in zip(self.samples, self.samples[1:]):
            if s1 <= s0:
                raise ValueError("trace steps must be strictly increasing")
        if any(s < 0 for s, _ in self.samples):
            raise ValueError("trace steps must be nonnegative")
        if any(e < 0 for _, e in self.samples):
            raise ValueError("entropy samples must be nonnegative")

    @property
    def steps(self) -> tuple[int, ...]:
        return tuple(s for s, _ in self.samples)

    @property
    def entropies(self) -> tuple[float, ...]:
        return tuple(e for _, e in self.samples)


@dataclass(frozen=True, slots=True)
class ExchangeResult:
    final: WealthVector
    trace: EntropyTrace
    fit: GibbsFit | None


def exchange_step(w: WealthVector, delta_m: float, rng: Xoshiro256) -> WealthVector:
    """One lottery round: uniform loser, uniform winner among the rest.

    Returns ``w`` unchanged when the loser cannot cover delta_m (canceled
    play).  Consumes exactly the draws the batch kernels consume, so a
    step-by-step replay matches a kernel run on the same stream.
    """
    if delta_m <= 0:
        raise ValueError("delta_m must be positive")
    n = len(w.balances)
    loser = rng.below(n)
    winner = rng.below(n - 1)
    if winner >= loser:
        winner += 1
    if w.balances[loser] < delta_m:
        return w
    balances = list(w.balances)
    balances[loser] -= delta_m
    balances[winner] += delta_m
    return WealthVector(tuple(balances))


def shannon_entropy(probabilities: Sequence[float]) -> float:
    """Shannon entropy -sum(p*ln p) in nats, with 0*ln 0 = 0."""
    total = 0.0
    acc = 0.0
    for p in probabilities:
        if p < 0:
            raise ValueError(f"negative probability {p}")
        total += p
        if p > 0:
            acc -= p * math.log(p)
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"probabilities sum to {total}, expected 1")
    return acc


def _bin_counts(values: np.ndarray, bins: int) -> tuple[list[int], float]:
    """Equal-width bin counts over [0, max(values)], top edge clamped in."""
    top = float(values.max())
    counts = [0] * bins
    if top <= 0.0:
        counts[0] = len(values)
        return counts, top
    width = top / bins
    idx = np.minimum((values / width).astype(np.int64), bins - 1)
    for k, c in zip(*np.unique(idx, return_counts=True)):
        counts[int(k)] = int(c)
    return counts, top


def wealth_histogram(
    w: WealthVector, bins: int
) -> list[tuple[float, float, int]]:
    """Equal-width histogram rows (bin_lo, bin_hi, count); counts sum to N."""
    if bins < 1:
        raise ValueError("bins must be positive")
    counts, top = _bin_counts(np.asarray(w.balances, dtype=np.float64), bins)
    width = top / bins
    return [(k * width, (k + 1) * width, counts[k]) for k in range(bins)]


def gibbs_fit(w: WealthVector, bins: int) -> GibbsFit | None:
    """Pin T = M/N, beta = N/M, A = beta, and score the log-linear fit.

    Returns None when total money is zero (no temperature to speak of).
    The residual at each nonempty bin compares the empirical density
    count/(N*bin_width) against A*exp(-beta*m) at the bin center.
    """
    total = float(w.total_M)
    if total <= 0.0:
        return None
    n = w.players_N
    temperature = total / n
    beta = n / total
    counts, top = _bin_counts(np.asarray(w.balances, dtype=np.float64), bins)
    width = top / bins
    occupied = [(k, c) for k, c in enumerate(counts) if c > 0]
    if len(occupied) <= 1 or width <= 0.0:
        error = math.inf
    else:
        sq = 0.0
        for k, c in occupied:
            center = (k + 0.5) * width
            residual = math.log(c / (n * width)) - (math.log(beta) - beta * center)
            sq += residual * residual
        error = math.sqrt(sq / len(occupied))
    return GibbsFit(
        temperature_T=temperature,
        beta=beta,
        amplitude_A=beta,
        fit_error=error,
        ln_total_money=math.log(total),
    )


def _sample_schedule(steps: int, stride: int | None) -> list[int]:
    if steps == 0:
        return [0]
    if stride is not None:
        points = list(range(0, steps + 1, stride))
        if points[-1] != steps:
            points.append(steps)
        return points
    points = {0, steps}
    for k in range(1, TRACE_SAMPLES):
        points.add(round(steps ** (k / (TRACE_SAMPLES - 1))))
    return sorted(points)


def run_exchange(config: ExchangeConfig) -> ExchangeResult:
    """Run the lottery from the configured initial condition.

    Samples binned-distribution entropy on a fixed stride when
    trace_stride is set, otherwise on a roughly logarithmic schedule.
    Work between sample points goes through the kernel lane.
    """
    n = config.players_N
    integral = (
        float(config.delta_m).is_integer()
        and float(config.initial_money_per_agent).is_integer()
    )
    if integral:
        per = int(config.initial_money_per_agent)
        delta = int(config.delta_m)
        dtype = np.int64
    else:
        per = float(config.initial_money_per_agent)
        delta = float(config.delta_m)
        dtype = np.float64
    if config.concentrated:
        balances = np.zeros(n, dtype=dtype)
        balances[0] = per * n
    else:
        balances = np.full(n, per, dtype=dtype)
    total = per * n

    state = np.array(Xoshiro256(config.seed).getstate(), dtype=np.uint64)
    bins = config.histogram_bins
    samples: list[tuple[int, float]] = []
    reached = 0
    for point in _sample_schedule(config.steps, config.trace_stride):
        if point > reached:
            kernels.exchange_steps(balances, delta, point - reached, state)
            reached = point
        counts, _ = _bin_counts(balances, bins)
        samples.append((point, shannon_entropy([c / n for c in counts])))

    final = WealthVector(tuple(balances.tolist()))
    if integral:
        if final.total_M != total:
            raise RuntimeError("money conservation violated in integer mode")
    elif abs(final.total_M - total) > 1e-9 * max(total, 1.0):
        raise RuntimeError("money conservation drifted beyond tolerance")
    return ExchangeResult(
        final=final,
        trace=EntropyTrace(tuple(samples)),
        fit=gibbs_fit(final, bins),
    )
