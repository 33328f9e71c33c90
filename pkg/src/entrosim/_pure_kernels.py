"""Pure-Python twins of the compiled exchange kernels.

Same xoshiro256** state machine, same Lemire bounded draws, same draw
order per step as ``entrosim._speedups``; a run is bit-identical on
either lane. The generator is inlined into local variables because these
loops are the fallback for multi-million-step runs -- method dispatch on
``rng.Xoshiro256`` would roughly double the runtime. Keep in lockstep
with _speedups.pyx (enforced by tests/test_kernels.py).
"""

_MASK64 = (1 << 64) - 1


def _as_python_list(buf):
    # numpy scalars are slow inside Python loops; work on plain ints/floats
    return buf.tolist() if hasattr(buf, "tolist") else list(buf)


def _run(balances, delta_m, steps, state, counts):
    s0, s1, s2, s3 = (int(w) for w in state)
    bal = _as_python_list(balances)
    tally = _as_python_list(counts) if counts is not None else None
    n = len(bal)
    dm = delta_m
    for _ in range(steps):
        pair = []
        for bound in (n, n - 1):
            if bound == 1:
                pair.append(0)
                continue
            while True:
                x = (s1 * 5) & _MASK64
                out = ((((x << 7) | (x >> 57)) & _MASK64) * 9) & _MASK64
                t = (s1 << 17) & _MASK64
                s2 ^= s0
                s3 ^= s1
                s1 ^= s2
                s0 ^= s3
                s2 ^= t
                s3 = ((s3 << 45) | (s3 >> 19)) & _MASK64
                m = out * bound
                low = m & _MASK64
                # accept unless Lemire rejection hits: threshold = 2^64 mod bound
                if low >= bound or low >= ((1 << 64) - bound) % bound:
                    pair.append(m >> 64)
                    break
        a, b = pair
        if b >= a:
            b += 1
        if bal[a] >= dm:
            bal[a] -= dm
            bal[b] += dm
        if tally is not None:
            tally[bal[0]] += 1
    balances[:] = bal
    if tally is not None:
        counts[:] = tally
    state[0], state[1], state[2], state[3] = s0, s1, s2, s3


def exchange_steps(balances, delta_m, steps, state):
    """Run `steps` pairwise exchanges in place; advances `state` in place.

    Per step: draw loser a uniform over N, winner b uniform over the
    remaining N-1; transfer delta_m unless the loser cannot afford it
    (canceled play).
    """
    _run(balances, delta_m, steps, state, None)


def exchange_occupancy(balances, delta_m, steps, state, counts):
    """Like exchange_steps (integer mode) but tallies, after every step,
    the balance of agent 0 into `counts` (indexed by balance; caller
    sizes it to total money + 1)."""
    _run(balances, delta_m, steps, state, counts)
