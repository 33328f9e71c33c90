"""Tests for the money-exchange lottery and its measurement helpers."""

import math

import numpy as np
import pytest

from entrosim import kernels
from entrosim.exchange import (
    EntropyTrace,
    ExchangeConfig,
    GibbsFit,
    WealthVector,
    exchange_step,
    gibbs_fit,
    run_exchange,
    shannon_entropy,
    wealth_histogram,
)
from entrosim.rng import Xoshiro256


# ----------------------------------------------------------------- types


def test_wealth_vector_total_and_validation():
    w = WealthVector((3, 4, 5))
    assert w.total_M == 12
    assert isinstance(w.total_M, int)
    assert w.players_N == 3
    with pytest.raises(ValueError):
        WealthVector((1,))
    with pytest.raises(ValueError):
        WealthVector((1, -1))


def test_config_validation():
    ExchangeConfig(players_N=2, steps=0)  # zero steps allowed
    with pytest.raises(ValueError):
        ExchangeConfig(players_N=1)
    with pytest.raises(ValueError):
        ExchangeConfig(players_N=2, delta_m=0)
    with pytest.raises(ValueError):
        ExchangeConfig(players_N=2, steps=-1)
    with pytest.raises(ValueError):
        ExchangeConfig(players_N=2, trace_stride=0)
    with pytest.raises(ValueError):
        ExchangeConfig(players_N=2, seed=2**64)


def test_entropy_trace_validation():
    EntropyTrace(((0, 0.0), (5, 1.2)))
    with pytest.raises(ValueError):
        EntropyTrace(((5, 0.0), (5, 0.1)))
    with pytest.raises(ValueError):
        EntropyTrace(((0, -0.5),))


def test_gibbs_fit_invariant():
    GibbsFit(
        temperature_T=100.0,
        beta=0.01,
        amplitude_A=0.01,
        fit_error=0.0,
        ln_total_money=math.log(10000),
    )
    with pytest.raises(ValueError):
        GibbsFit(
            temperature_T=100.0,
            beta=0.02,
            amplitude_A=0.02,
            fit_error=0.0,
            ln_total_money=0.0,
        )


# ------------------------------------------------------------------ step


def test_exchange_step_conserves_and_moves_one_quantum():
    outcomes = set()
    for seed in range(24):
        w = exchange_step(WealthVector((5, 5)), 1, Xoshiro256(seed))
        assert sum(w.balances) == 10
        outcomes.add(w.balances)
    assert outcomes == {(6, 4), (4, 6)}


def test_exchange_step_cancellation():
    saw_cancel = saw_transfer = False
    for seed in range(24):
        probe = Xoshiro256(seed)
        loser = probe.below(2)
        w = exchange_step(WealthVector((0, 10)), 1, Xoshiro256(seed))
        if loser == 0:
            assert w.balances == (0, 10)  # canceled: loser cannot pay
            saw_cancel = True
        else:
            assert w.balances == (1, 9)
            saw_transfer = True
    assert saw_cancel and saw_transfer


def test_exchange_step_never_negative():
    rng = Xoshiro256(99)
    w = WealthVector((0, 1, 2))
    for _ in range(500):
        w = exchange_step(w, 1, rng)
        assert all(b >= 0 for b in w.balances)
        assert sum(w.balances) == 3


def test_exchange_step_rejects_bad_quantum():
    with pytest.raises(ValueError):
        exchange_step(WealthVector((1, 1)), 0, Xoshiro256(0))


@pytest.mark.parametrize(
    "dtype,start,delta",
    [(np.int64, 10, 1), (np.float64, 2.5, 0.25)],
)
def test_step_replay_matches_kernel(dtype, start, delta):
    n, steps, seed = 7, 500, 1234
    rng = Xoshiro256(seed)
    w = WealthVector((start,) * n)
    for _ in range(steps):
        w = exchange_step(w, delta, rng)

    balances = np.full(n, start, dtype=dtype)
    state = np.array(Xoshiro256(seed).getstate(), dtype=np.uint64)
    kernels.exchange_steps(balances, delta, steps, state)

    assert tuple(balances.tolist()) == w.balances
    assert tuple(int(x) for x in state) == rng.getstate()


# --------------------------------------------------------------- entropy


def test_shannon_entropy_examples():
    assert shannon_entropy([1.0]) == 0.0
    assert shannon_entropy([0.5, 0.5]) == pytest.approx(math.log(2), rel=1e-12)
    # -0.9 ln 0.9 - 0.1 ln 0.1 = 0.32508297339144824 (mpmath, 40 dps)
    assert shannon_entropy([0.9, 0.1]) == pytest.approx(0.32508297339144824, rel=1e-12)
    assert shannon_entropy([0.0, 1.0]) == 0.0


def test_shannon_entropy_domain_errors():
    with pytest.raises(ValueError):
        shannon_entropy([-0.1, 1.1])
    with pytest.raises(ValueError):
        shannon_entropy([0.5, 0.6])


def test_shannon_entropy_max_at_uniform():
    for k in (2, 5, 50):
        assert shannon_entropy([1 / k] * k) == pytest.approx(math.log(k), rel=1e-12)


# ------------------------------------------------------------- histogram


def test_histogram_equal_balances_single_bin():
    rows = wealth_histogram(WealthVector((7.0, 7.0, 7.0)), 5)
    assert len(rows) == 5
    assert [c for _, _, c in rows] == [0, 0, 0, 0, 3]
    assert sum(c for _, _, c in rows) == 3


def test_histogram_unit_spread():
    rows = wealth_histogram(WealthVector(tuple(range(10))), 10)
    assert [c for _, _, c in rows] == [1] * 10


def test_histogram_two_bins():
    rows = wealth_histogram(WealthVector((0, 0, 3, 3)), 2)
    assert [(lo, hi) for lo, hi, _ in rows] == [(0.0, 1.5), (1.5, 3.0)]
    assert [c for _, _, c in rows] == [2, 2]


def test_histogram_all_zero_balances():
    rows = wealth_histogram(WealthVector((0, 0, 0)), 4)
    assert [c for _, _, c in rows] == [3, 0, 0, 0]


def test_histogram_rejects_bad_bins():
    with pytest.raises(ValueError):
        wealth_histogram(WealthVector((1, 2)), 0)


# ------------------------------------------------------------- gibbs fit


def test_gibbs_fit_pins_temperature():
    fit = gibbs_fit(WealthVector((100,) * 100), 50)
    assert fit.temperature_T == pytest.approx(100.0)
    assert fit.beta == pytest.approx(0.01)
    assert fit.amplitude_A == fit.beta
    assert fit.beta * fit.temperature_T == pytest.approx(1.0, abs=1e-15)
    assert fit.ln_total_money == pytest.approx(math.log(10000))
    assert fit.fit_error == math.inf  # all mass in one bin


def test_gibbs_fit_zero_money_is_none():
    assert gibbs_fit(WealthVector((0, 0, 0)), 10) is None


def test_gibbs_fit_scores_exponential_sample():
    # inverse-CDF sample of Exp(beta=1): dense log-linear histogram
    rng = Xoshiro256(5150)
    balances = tuple(-math.log(1.0 - rng.random()) for _ in range(4000))
    fit = gibbs_fit(WealthVector(balances), 20)
    assert fit.temperature_T == pytest.approx(sum(balances) / 4000)
    assert math.isfinite(fit.fit_error)
    assert fit.fit_error < 1.0


# ------------------------------------------------------------------- run


def test_run_zero_steps_uniform_start():
    result = run_exchange(ExchangeConfig(players_N=10, steps=0))
    assert result.trace.samples == ((0, 0.0),)
    assert result.final.balances == (1,) * 10


def test_run_integer_mode_exact_conservation():
    config = ExchangeConfig(players_N=50, initial_money_per_agent=10, steps=100_000, seed=9)
    result = run_exchange(config)
    assert result.final.total_M == 500
    assert all(isinstance(b, int) for b in result.final.balances)
    assert all(b >= 0 for b in result.final.balances)


def test_run_float_mode_conservation():
    config = ExchangeConfig(
        players_N=30, initial_money_per_agent=1.5, delta_m=0.125, steps=50_000, seed=4
    )
    result = run_exchange(config)
    assert result.final.total_M == pytest.approx(45.0, abs=1e-9)
    assert all(b >= 0 for b in result.final.balances)


def test_run_trace_respects_bin_ceiling():
    config = ExchangeConfig(
        players_N=64, initial_money_per_agent=4, steps=20_000, seed=11, histogram_bins=16
    )
    result = run_exchange(config)
    assert len(result.trace.samples) > 10
    for _, entropy in result.trace.samples:
        assert 0.0 <= entropy <= math.log(16) + 1e-12


def test_run_stride_schedule():
    config = ExchangeConfig(players_N=8, steps=1000, trace_stride=250, seed=2)
    result = run_exchange(config)
    assert result.trace.steps == (0, 250, 500, 750, 1000)


def test_run_log_schedule_covers_endpoints():
    config = ExchangeConfig(players_N=8, steps=12345, seed=2)
    result = run_exchange(config)
    assert result.trace.steps[0] == 0
    assert result.trace.steps[-1] == 12345


def test_run_deterministic():
    config = ExchangeConfig(players_N=25, steps=30_000, seed=777)
    a = run_exchange(config)
    b = run_exchange(config)
    assert a.final == b.final
    assert a.trace == b.trace


def test_run_entropy_grows_from_concentrated_start():
    wins = 0
    for seed in range(20):
        config = ExchangeConfig(
            players_N=100,
            initial_money_per_agent=10,
            steps=20_000,
            seed=seed,
            concentrated=True,
        )
        result = run_exchange(config)
        entropies = result.trace.entropies
        tail = entropies[-max(1, len(entropies) // 10):]
        if sum(tail) / len(tail) > entropies[0]:
            wins += 1
    assert wins >= 19


def test_two_player_occupancy_sanity():
    # N=2, M=2: agent-0 balance is a 3-state chain with uniform stationary law
    balances = np.array([1, 1], dtype=np.int64)
    state = np.array(Xoshiro256(31337).getstate(), dtype=np.uint64)
    counts = np.zeros(3, dtype=np.int64)
    steps = 200_000
    kernels.exchange_occupancy(balances, 1, steps, state, counts)
    assert counts.sum() == steps
    for c in counts:
        assert abs(c / steps - 1 / 3) < 0.01
