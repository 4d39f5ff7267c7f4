"""Brute-force grid kernels for the fixed-point oracle.

Every point of the grid ``(k1/q, ..., kn/q)``, ``0 <= ki < q``, is tested in
pure integer arithmetic.  Grid index ``i`` encodes ``k`` in base ``q`` with
coordinate 1 most significant, so both backends produce identical masks.

Two implementations exist for each kernel: a numba ``@njit`` loop and a
vectorised numpy version.  Setting ``G2MIRROR_DISABLE_NUMBA=1`` (or running
without numba installed) selects the numpy path.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

_DISABLED = os.environ.get("G2MIRROR_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}
HAVE_NUMBA = numba is not None
BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"

MAX_GRID_POINTS = 1 << 24


def grid_points(n: int, q: int) -> np.ndarray:
    """All grid numerators as an ``(q**n, n)`` int64 array, in mask order."""
    idx = np.arange(q**n, dtype=np.int64)
    out = np.empty((idx.size, n), dtype=np.int64)
    for j in range(n - 1, -1, -1):
        out[:, j] = idx % q
        idx //= q
    return out


def _check_size(n: int, q: int):
    if q < 1:
        raise ValueError("grid denominator must be positive")
    if q**n > MAX_GRID_POINTS:
        raise ValueError(f"grid of {q}^{n} points is too large")


# numpy path -----------------------------------------------------------------


def fixed_mask_numpy(linear: np.ndarray, shift_num: np.ndarray, q: int) -> np.ndarray:
    """Mask of grid points with ``L k + t == k (mod q)``; ``t = q * shift``."""
    n = linear.shape[0]
    _check_size(n, q)
    k = grid_points(n, q)
    resid = k @ linear.T + shift_num - k
    return np.all(resid % q == 0, axis=1)


def subtorus_mask_numpy(
    annihilator: np.ndarray, offset: np.ndarray, mult: int, modulus: int, n: int, q: int
) -> np.ndarray:
    """Mask of grid points with ``mult * W k == offset (mod modulus)``."""
    _check_size(n, q)
    k = grid_points(n, q)
    if annihilator.shape[0] == 0:
        return np.ones(k.shape[0], dtype=np.bool_)
    resid = mult * (k @ annihilator.T) - offset
    return np.all(resid % modulus == 0, axis=1)


# numba path -----------------------------------------------------------------

if HAVE_NUMBA:

    @numba.njit(cache=True, nogil=True)
    def _fixed_mask_jit(linear, shift_num, q):
        n = linear.shape[0]
        total = q**n
        out = np.zeros(total, dtype=np.bool_)
        k = np.zeros(n, dtype=np.int64)
        for idx in range(total):
            r = idx
            for j in range(n - 1, -1, -1):
                k[j] = r % q
                r //= q
            ok = True
            for i in range(n):
                s = shift_num[i] - k[i]
                for j in range(n):
                    s += linear[i, j] * k[j]
                if s % q != 0:
                    ok = False
                    break
            out[idx] = ok
        return out

    @numba.njit(cache=True, nogil=True)
    def _subtorus_mask_jit(annihilator, offset, mult, modulus, n, q):
        total = q**n
        rows = annihilator.shape[0]
        out = np.zeros(total, dtype=np.bool_)
        k = np.zeros(n, dtype=np.int64)
        for idx in range(total):
            r = idx
            for j in range(n - 1, -1, -1):
                k[j] = r % q
                r //= q
            ok = True
            for i in range(rows):
                s = -offset[i]
                for j in range(n):
                    s += mult * annihilator[i, j] * k[j]
                if s % modulus != 0:
                    ok = False
                    break
            out[idx] = ok
        return out


def fixed_mask_numba(linear: np.ndarray, shift_num: np.ndarray, q: int) -> np.ndarray:
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _check_size(linear.shape[0], q)
    return _fixed_mask_jit(
        np.ascontiguousarray(linear, dtype=np.int64),
        np.ascontiguousarray(shift_num, dtype=np.int64),
        np.int64(q),
    )


def subtorus_mask_numba(annihilator, offset, mult, modulus, n, q):
    if not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _check_size(n, q)
    w = np.ascontiguousarray(annihilator, dtype=np.int64).reshape(-1, n)
    return _subtorus_mask_jit(
        w,
        np.ascontiguousarray(offset, dtype=np.int64),
        np.int64(mult),
        np.int64(modulus),
        np.int64(n),
        np.int64(q),
    )


def fixed_mask(linear, shift_num, q: int, backend: str | None = None) -> np.ndarray:
    backend = backend or BACKEND
    linear = np.asarray(linear, dtype=np.int64)
    shift_num = np.asarray(shift_num, dtype=np.int64)
    if backend == "numba":
        return fixed_mask_numba(linear, shift_num, q)
    if backend == "numpy":
        return fixed_mask_numpy(linear, shift_num, q)
    raise ValueError(f"unknown backend {backend!r}")


def subtorus_mask(annihilator, offset, mult: int, modulus: int, n: int, q: int,
                  backend: str | None = None) -> np.ndarray:
    backend = backend or BACKEND
    w = np.asarray(annihilator, dtype=np.int64).reshape(-1, n)
    offset = np.asarray(offset, dtype=np.int64)
    if backend == "numba":
        return subtorus_mask_numba(w, offset, mult, modulus, n, q)
    if backend == "numpy":
        return subtorus_mask_numpy(w, offset, mult, modulus, n, q)
    raise ValueError(f"unknown backend {backend!r}")
