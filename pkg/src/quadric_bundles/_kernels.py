"""Integer hot loops, with numba and pure-numpy implementations.

The backend is picked once at import time.  Set
``QUADRIC_BUNDLES_BACKEND=numpy`` to force the numpy path (also used
automatically when numba is missing).  Both paths are always importable
by name (``*_numba`` / ``*_numpy``) so they can be compared directly.

Verdict codes shared by both paths::

    0 Stable, 1 Polystable, 2 StrictlySemistable, 3 Unstable
"""

from __future__ import annotations

import os

import numpy as np

STABLE, POLYSTABLE, STRICTLY_SEMISTABLE, UNSTABLE = 0, 1, 2, 3

#: Mersenne prime 2^31 - 1; products of two residues fit in int64.
PRIME = 2_147_483_647

_requested = os.environ.get("QUADRIC_BUNDLES_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"QUADRIC_BUNDLES_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False

BACKEND = "numba" if (_requested == "numba" and NUMBA_AVAILABLE) else "numpy"


# ---------------------------------------------------------------- numpy path


def rank_mod_p_numpy(mat: np.ndarray, p: int = PRIME) -> int:
    """Rank of an integer matrix over GF(p) by row reduction."""
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + nz[0]
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), p - 2, p)
        a[rank] = (a[rank] * inv) % p
        below = a[rank + 1 :, c].copy()
        if below.any():
            a[rank + 1 :] = (a[rank + 1 :] - (below[:, None] * a[rank]) % p) % p
        rank += 1
    return rank


def verdict_codes_numpy(
    c0: np.ndarray,
    c1: np.ndarray,
    decomposable: np.ndarray,
    degree: np.ndarray,
    n: int,
    num: np.ndarray,
    den: np.ndarray,
) -> np.ndarray:
    """Classify a batch of bundles at a batch of parameters.

    ``c0, c1`` have shape (B, K): subobject k of bundle b has slack
    proportional to ``c0 + c1*alpha`` (positive factor).  ``num/den``
    have shape (B, S) with ``den > 0``.  ``decomposable`` has shape (K,).
    Returns int8 codes of shape (B, S).
    """
    s = c0[:, None, :] * den[:, :, None] + c1[:, None, :] * num[:, :, None]
    neg = (s < 0).any(axis=2)
    zero = s == 0
    any_zero = zero.any(axis=2)
    bad_zero = (zero & ~decomposable[None, None, :]).any(axis=2)
    above = n * num > degree[:, None] * den
    out = np.where(bad_zero, STRICTLY_SEMISTABLE, np.where(any_zero, POLYSTABLE, STABLE))
    out = np.where(neg | above, UNSTABLE, out)
    return out.astype(np.int8)


def zero_slack_numpy(c0: np.ndarray, c1: np.ndarray, num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """(B, W) flags: does bundle b have a subobject with zero slack at its w-th parameter."""
    s = c0[:, None, :] * den[:, :, None] + c1[:, None, :] * num[:, :, None]
    return (s == 0).any(axis=2)


# ---------------------------------------------------------------- numba path

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _powmod(base, exp, p):
        result = 1
        base %= p
        while exp > 0:
            if exp & 1:
                result = (result * base) % p
            base = (base * base) % p
            exp >>= 1
        return result

    @njit(cache=True)
    def _rank_mod_p_jit(a, p):
        rows, cols = a.shape
        for i in range(rows):
            for j in range(cols):
                a[i, j] %= p
        rank = 0
        for c in range(cols):
            if rank == rows:
                break
            piv = -1
            for i in range(rank, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for j in range(cols):
                    t = a[rank, j]
                    a[rank, j] = a[piv, j]
                    a[piv, j] = t
            inv = _powmod(a[rank, c], p - 2, p)
            for j in range(cols):
                a[rank, j] = (a[rank, j] * inv) % p
            for i in range(rank + 1, rows):
                f = a[i, c]
                if f != 0:
                    for j in range(cols):
                        a[i, j] = (a[i, j] - f * a[rank, j]) % p
            rank += 1
        return rank

    @njit(cache=True)
    def _verdict_codes_jit(c0, c1, decomposable, degree, n, num, den):
        nb, k = c0.shape
        ns = num.shape[1]
        out = np.empty((nb, ns), dtype=np.int8)
        for b in range(nb):
            for s in range(ns):
                q = den[b, s]
                p = num[b, s]
                if n * p > degree[b] * q:
                    out[b, s] = 3
                    continue
                code = 0
                for j in range(k):
                    v = c0[b, j] * q + c1[b, j] * p
                    if v < 0:
                        code = 3
                        break
                    if v == 0:
                        if not decomposable[j]:
                            code = 2
                        elif code == 0:
                            code = 1
                out[b, s] = code
        return out

    @njit(cache=True)
    def _zero_slack_jit(c0, c1, num, den):
        nb, k = c0.shape
        nw = num.shape[1]
        out = np.zeros((nb, nw), dtype=np.bool_)
        for b in range(nb):
            for w in range(nw):
                for j in range(k):
                    if c0[b, j] * den[b, w] + c1[b, j] * num[b, w] == 0:
                        out[b, w] = True
                        break
        return out

    def rank_mod_p_numba(mat: np.ndarray, p: int = PRIME) -> int:
        return int(_rank_mod_p_jit(np.array(mat, dtype=np.int64), np.int64(p)))

    def verdict_codes_numba(c0, c1, decomposable, degree, n, num, den) -> np.ndarray:
        return _verdict_codes_jit(
            np.ascontiguousarray(c0, dtype=np.int64),
            np.ascontiguousarray(c1, dtype=np.int64),
            np.ascontiguousarray(decomposable, dtype=np.bool_),
            np.ascontiguousarray(degree, dtype=np.int64),
            np.int64(n),
            np.ascontiguousarray(num, dtype=np.int64),
            np.ascontiguousarray(den, dtype=np.int64),
        )

    def zero_slack_numba(c0, c1, num, den) -> np.ndarray:
        return _zero_slack_jit(
            np.ascontiguousarray(c0, dtype=np.int64),
            np.ascontiguousarray(c1, dtype=np.int64),
            np.ascontiguousarray(num, dtype=np.int64),
            np.ascontiguousarray(den, dtype=np.int64),
        )


if BACKEND == "numba":
    rank_mod_p = rank_mod_p_numba
    verdict_codes = verdict_codes_numba
    zero_slack = zero_slack_numba
else:
    rank_mod_p = rank_mod_p_numpy
    verdict_codes = verdict_codes_numpy
    zero_slack = zero_slack_numpy
