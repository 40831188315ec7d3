"""Dense m x m block primitives.

Blocks are plain float64 numpy arrays of shape ``(m, m)`` and small vectors
have shape ``(m,)``. The elimination kernels below are shared by the
cyclic solver and compiled with numba when it is available.
"""

import numpy as np

from ._compat import jit
from .exceptions import SingularBlockError

EPS = np.finfo(np.float64).eps
#: Relative pivot tolerance used by every block inversion.
DEFAULT_PIVOT_TOL = 1e2 * EPS


def as_block(a, m=None):
    """Validate ``a`` as a finite square float64 block and return it."""
    arr = np.ascontiguousarray(a, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError(f"expected a square block, got shape {arr.shape}")
    if m is not None and arr.shape[0] != m:
        raise ValueError(f"expected block dimension {m}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("block entries must be finite")
    return arr


def as_small_vec(v, m=None):
    """Validate ``v`` as a finite 1-d float64 vector and return it."""
    arr = np.ascontiguousarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise ValueError(f"expected a non-empty vector, got shape {arr.shape}")
    if m is not None and arr.shape[0] != m:
        raise ValueError(f"expected vector dimension {m}, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector entries must be finite")
    return arr


@jit
def norm_inf(a):
    """Maximum absolute row sum of a 2-d array."""
    best = 0.0
    for i in range(a.shape[0]):
        s = np.sum(np.abs(a[i]))
        if s > best:
            best = s
    return best


@jit
def lu_factor(a, pivot_tol, scale=0.0):
    """
    Row-pivoted LU factorization of a small square matrix.

    Parameters
    ----------
    a : numpy.ndarray, shape (m, m)
        Matrix to factor; not modified.
    pivot_tol : float
        A pivot with magnitude ``<= pivot_tol * max(||a||_inf, scale)``
        counts as zero.
    scale : float, optional
        Magnitude of the terms `a` was computed from. Passing it lets a
        block that cancelled down to rounding noise register as singular.

    Returns
    -------
    lu : numpy.ndarray, shape (m, m)
        Unit lower triangle (below the diagonal) and upper triangle packed
        together.
    perm : numpy.ndarray, shape (m,)
        Row permutation, ``a[perm] == L @ U``.
    int
        0 on success, otherwise the 1-based column of the failing pivot.
    """
    m = a.shape[0]
    lu = a.copy()
    perm = np.arange(m)
    thresh = pivot_tol * max(norm_inf(a), scale)
    for j in range(m):
        p = j + np.argmax(np.abs(lu[j:, j]))
        if not abs(lu[p, j]) > thresh:
            return lu, perm, j + 1
        if p != j:
            row = lu[j].copy()
            lu[j] = lu[p]
            lu[p] = row
            t = perm[j]
            perm[j] = perm[p]
            perm[p] = t
        for i in range(j + 1, m):
            lu[i, j] /= lu[j, j]
            lu[i, j + 1:] -= lu[i, j] * lu[j, j + 1:]
    return lu, perm, 0


@jit
def lu_solve(lu, perm, b):
    """Solve with factors from `lu_factor`; `b` is (m,) or (m, k)."""
    m = lu.shape[0]
    x = b[perm].copy()
    for j in range(m):
        for i in range(j + 1, m):
            x[i] -= lu[i, j] * x[j]
    for j in range(m - 1, -1, -1):
        x[j] /= lu[j, j]
        for i in range(j):
            x[i] -= lu[i, j] * x[j]
    return x


@jit
def invert(a, pivot_tol, scale=0.0):
    """Explicit inverse via `lu_factor`; returns ``(inverse, status)``."""
    lu, perm, status = lu_factor(a, pivot_tol, scale)
    if status != 0:
        return np.zeros_like(a), status
    return lu_solve(lu, perm, np.eye(a.shape[0])), 0


def mat_mul(a, b):
    """Product of two blocks of equal dimension."""
    a = as_block(a)
    b = as_block(b, a.shape[0])
    return a @ b


def mat_invert(a, pivot_tol=DEFAULT_PIVOT_TOL):
    """
    Invert a block by row-pivoted elimination.

    Raises
    ------
    SingularBlockError
        If a pivot falls below ``pivot_tol`` times the infinity norm of `a`.
    """
    a = as_block(a)
    inv, status = invert(a, pivot_tol)
    if status != 0:
        raise SingularBlockError(f"block is singular (pivot {status} vanished)")
    return inv


def circulant(first_row):
    """Circulant block whose row ``i`` is `first_row` rotated right by ``i``.

    >>> circulant([1.0, 2.0, 3.0])
    array([[1., 2., 3.],
           [3., 1., 2.],
           [2., 3., 1.]])
    """
    r = as_small_vec(first_row)
    m = r.shape[0]
    idx = (np.arange(m)[None, :] - np.arange(m)[:, None]) % m
    return r[idx]


def inf_norm_vec(v):
    """Largest absolute entry of `v` (any shape); 0 for an empty input."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))
