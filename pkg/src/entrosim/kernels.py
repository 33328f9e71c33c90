"""Kernel lane selection.

The compiled extension (``entrosim._speedups``) is used when it was
built; otherwise the pure-Python twins take over with identical
semantics and random streams. Set ``ENTROSIM_PURE=1`` in the environment
to force the fallback (used by the lane-equivalence tests and the
benchmark).
"""

import os

if os.environ.get("ENTROSIM_PURE"):
    from entrosim import _pure_kernels as _impl

    COMPILED = False
else:
    try:
        from entrosim import _speedups as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from entrosim import _pure_kernels as _impl

        COMPILED = False

LANE = "compiled" if COMPILED else "pure"

exchange_steps = _impl.exchange_steps
exchange_occupancy = _impl.exchange_occupancy
