"""Kernel dispatch: numba-compiled scans by default, pure numpy on demand.

Set SNSPLIT_NO_NUMBA=1 to force the pure-numpy path (also used
automatically when numba is not importable).  Both paths implement the
same algebra; tests assert their agreement.
"""

import os

USING_NUMBA = os.environ.get("SNSPLIT_NO_NUMBA", "") not in ("1", "true", "yes")

if USING_NUMBA:
    try:
        from ._numba import (  # noqa: F401
            multi_scan_batch,
            multi_scan_pairs,
            sn_ratios,
            sn_stat_batch,
        )
    except ImportError:
        USING_NUMBA = False

if not USING_NUMBA:
    from ._numpy import (  # noqa: F401
        multi_scan_batch,
        multi_scan_pairs,
        sn_ratios,
        sn_stat_batch,
    )


def set_threads(n: int):
    """Set the worker count for batched kernels (0 = all cores).

    Only affects wall time; every batch row is computed independently, so
    results are identical for any thread count.
    """
    if USING_NUMBA:
        import numba

        numba.set_num_threads(n if n > 0 else numba.config.NUMBA_NUM_THREADS)
