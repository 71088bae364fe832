"""Bilinear product kernels on dense blade-bitmask coefficient arrays.

Every product in the library goes through :func:`product`, which computes the
geometric product of two coefficient vectors and keeps only the basis pairs
whose result grade matches ``mode``.  Two interchangeable implementations
exist: a numba-compiled double loop and a vectorised numpy version.  Setting
``GAUSSCALC_DISABLE_NUMBA=1`` (or running without numba installed) selects the
numpy path.
"""
from __future__ import annotations

import os

import numpy as np

GEOMETRIC = 0
WEDGE = 1
LEFT = 2
RIGHT = 3
SCALAR = 4

_FLAG = os.environ.get("GAUSSCALC_DISABLE_NUMBA", "").strip().lower()
NUMBA_DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorator(func):
            return func

        return decorator


USE_NUMBA = HAS_NUMBA and not NUMBA_DISABLED


def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def _reorder_sign(i, j):
    # parity of transpositions needed to merge blade i in front of blade j
    swaps = 0
    i >>= 1
    while i:
        swaps += _popcount(i & j)
        i >>= 1
    return -1.0 if swaps & 1 else 1.0


def _keep(gi, gj, gk, mode):
    if mode == GEOMETRIC:
        return True
    if mode == WEDGE:
        return gk == gi + gj
    if mode == LEFT:
        return gk == gj - gi
    if mode == RIGHT:
        return gk == gi - gj
    return gk == 0


def _product_loops(a, b, mode):
    n = a.shape[0]
    out = np.zeros(n)
    for i in range(n):
        ai = a[i]
        if ai == 0.0:
            continue
        gi = _popcount(i)
        for j in range(n):
            bj = b[j]
            if bj == 0.0:
                continue
            k = i ^ j
            if not _keep(gi, _popcount(j), _popcount(k), mode):
                continue
            out[k] += _reorder_sign(i, j) * ai * bj
    return out


if HAS_NUMBA:
    _popcount_jit = njit(cache=True, inline="always")(_popcount)

    @njit(cache=True, inline="always")
    def _reorder_sign_jit(i, j):
        swaps = 0
        i >>= 1
        while i:
            swaps += _popcount_jit(i & j)
            i >>= 1
        return -1.0 if swaps & 1 else 1.0

    @njit(cache=True, inline="always")
    def _keep_jit(gi, gj, gk, mode):
        if mode == 0:
            return True
        if mode == 1:
            return gk == gi + gj
        if mode == 2:
            return gk == gj - gi
        if mode == 3:
            return gk == gi - gj
        return gk == 0

    @njit(cache=True)
    def product_numba(a, b, mode):
        n = a.shape[0]
        out = np.zeros(n)
        for i in range(n):
            ai = a[i]
            if ai == 0.0:
                continue
            gi = _popcount_jit(i)
            for j in range(n):
                bj = b[j]
                if bj == 0.0:
                    continue
                k = i ^ j
                if not _keep_jit(gi, _popcount_jit(j), _popcount_jit(k), mode):
                    continue
                out[k] += _reorder_sign_jit(i, j) * ai * bj
        return out
else:  # pragma: no cover
    product_numba = _product_loops


def _swap_parity(i, j, nbits):
    swaps = np.zeros(np.broadcast(i, j).shape, dtype=np.int64)
    for s in range(1, nbits):
        swaps += np.bitwise_count((i >> s) & j)
    return swaps & 1


def product_numpy(a, b, mode):
    """Vectorised twin of :func:`product_numba` over the nonzero coefficients."""
    n = a.shape[0]
    ia = np.flatnonzero(a)
    ib = np.flatnonzero(b)
    if ia.size == 0 or ib.size == 0:
        return np.zeros(n)
    I = ia[:, None]
    J = ib[None, :]
    K = I ^ J
    terms = np.outer(a[ia], b[ib])
    terms[_swap_parity(I, J, n.bit_length()).astype(bool)] *= -1.0
    if mode != GEOMETRIC:
        gi = np.bitwise_count(I).astype(np.int64)
        gj = np.bitwise_count(J).astype(np.int64)
        gk = np.bitwise_count(K).astype(np.int64)
        if mode == WEDGE:
            keep = gk == gi + gj
        elif mode == LEFT:
            keep = gk == gj - gi
        elif mode == RIGHT:
            keep = gk == gi - gj
        else:
            keep = gk == 0
        terms = np.where(keep, terms, 0.0)
    return np.bincount(K.ravel(), weights=terms.ravel(), minlength=n)


product = product_numba if USE_NUMBA else product_numpy


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
