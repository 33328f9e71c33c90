# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops for the random money-exchange game.

C twin of ``entrosim._pure_kernels``: identical xoshiro256** state
machine, identical Lemire bounded draws, identical draw order per step,
so a run produces the same balances and final generator state on either
lane. Keep the two files in lockstep -- the equivalence is enforced by
tests/test_kernels.py.
"""

from libc.stdint cimport uint64_t, int64_t

cdef extern from *:
    """
    #include <stdint.h>

    static inline uint64_t es_rotl(const uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    /* 64x64 -> 128 multiply; returns high word, stores low word. */
    static inline uint64_t es_mulhilo(uint64_t x, uint64_t n, uint64_t *lo) {
        unsigned __int128 m = (unsigned __int128)x * (unsigned __int128)n;
        *lo = (uint64_t)m;
        return (uint64_t)(m >> 64);
    }
    """
    uint64_t es_rotl(uint64_t x, int k) nogil
    uint64_t es_mulhilo(uint64_t x, uint64_t n, uint64_t* lo) nogil


ctypedef fused balance_t:
    double
    int64_t


cdef inline uint64_t xs_next(uint64_t* s) nogil:
    cdef uint64_t result = es_rotl(s[1] * 5UL, 7) * 9UL
    cdef uint64_t t = s[1] << 17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = es_rotl(s[3], 45)
    return result


cdef inline uint64_t xs_below(uint64_t* s, uint64_t n) nogil:
    # Lemire debiased bounded draw; n == 1 draws nothing (matches rng.py).
    cdef uint64_t lo, hi, threshold
    if n == 1:
        return 0
    hi = es_mulhilo(xs_next(s), n, &lo)
    if lo < n:
        threshold = (0UL - n) % n
        while lo < threshold:
            hi = es_mulhilo(xs_next(s), n, &lo)
    return hi


def exchange_steps(balance_t[::1] balances, balance_t delta_m,
                   long long steps, unsigned long long[::1] state):
    """Run `steps` pairwise exchanges in place; advances `state` in place.

    Per step: draw loser a uniform over N, winner b uniform over the
    remaining N-1; transfer delta_m unless the loser cannot afford it
    (canceled play).
    """
    cdef uint64_t s[4]
    cdef uint64_t n = <uint64_t> balances.shape[0]
    cdef uint64_t a, b
    cdef long long k
    s[0] = state[0]; s[1] = state[1]; s[2] = state[2]; s[3] = state[3]
    with nogil:
        for k in range(steps):
            a = xs_below(s, n)
            b = xs_below(s, n - 1)
            if b >= a:
                b += 1
            if balances[a] >= delta_m:
                balances[a] -= delta_m
                balances[b] += delta_m
    state[0] = s[0]; state[1] = s[1]; state[2] = s[2]; state[3] = s[3]


def exchange_occupancy(int64_t[::1] balances, int64_t delta_m,
                       long long steps, unsigned long long[::1] state,
                       int64_t[::1] counts):
    """Like exchange_steps (integer mode) but tallies, after every step,
    the balance of agent 0 into `counts` (indexed by balance; caller
    sizes it to total money + 1)."""
    cdef uint64_t s[4]
    cdef uint64_t n = <uint64_t> balances.shape[0]
    cdef uint64_t a, b
    cdef long long k
    s[0] = state[0]; s[1] = state[1]; s[2] = state[2]; s[3] = state[3]
    with nogil:
        for k in range(steps):
            a = xs_below(s, n)
            b = xs_below(s, n - 1)
            if b >= a:
                b += 1
            if balances[a] >= delta_m:
                balances[a] -= delta_m
                balances[b] += delta_m
            counts[balances[0]] += 1
    state[0] = s[0]; state[1] = s[1]; state[2] = s[2]; state[3] = s[3]
