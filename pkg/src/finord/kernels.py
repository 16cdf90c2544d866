"""Kernel dispatch: compiled extension when available, pure Python otherwise.

The compiled kernels use 64-bit masks, so they only apply when every mask
fits in 64 bits; wider problems always take the pure path, which uses
arbitrary-precision ints.  Set FINORD_PURE_KERNELS=1 to force the pure
implementation regardless.
"""

import os

from finord import _kernels_pure as _pure

if os.environ.get("FINORD_PURE_KERNELS") == "1":
    _fast = None
else:
    try:
        from finord import _kernels_c as _fast
    except ImportError:
        _fast = None

ACTIVE = _fast.IMPL if _fast is not None else _pure.IMPL


def antichains(n, comp, min_size=0, limit=None):
    if _fast is not None and n <= 64:
        return _fast.antichains(n, comp, min_size, limit)
    return _pure.antichains(n, comp, min_size, limit)


def enumerate_maps(n_p, n_q, p_down, p_up, q_down, q_up, allowed, require_open,
                   node_budget=10_000_000):
    if _fast is not None and n_p <= 64 and n_q <= 64:
        return _fast.enumerate_maps(n_p, n_q, p_down, p_up, q_down, q_up,
                                    allowed, require_open, node_budget)
    return _pure.enumerate_maps(n_p, n_q, p_down, p_up, q_down, q_up,
                                allowed, require_open, node_budget)
