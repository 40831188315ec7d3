"""Dense reference solver.

Plain Gaussian elimination with partial pivoting on the full matrix. It
shares no code with the block recurrences and is meant for verification
only, not for large systems.
"""

import numpy as np

from .exceptions import SingularSystemError


def dense_solve(a, b, pivot_tol=1e2 * np.finfo(np.float64).eps):
    """Solve ``a x = b`` for a dense square `a` and flat `b`."""
    a = np.array(a, dtype=np.float64)
    x = np.array(b, dtype=np.float64).ravel()
    size = a.shape[0]
    if a.ndim != 2 or a.shape[1] != size:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if x.shape[0] != size:
        raise ValueError(f"right-hand side has {x.shape[0]} entries, expected {size}")
    thresh = pivot_tol * np.max(np.sum(np.abs(a), axis=1), initial=0.0)
    for j in range(size):
        p = j + int(np.argmax(np.abs(a[j:, j])))
        if not abs(a[p, j]) > thresh:
            raise SingularSystemError(f"matrix is singular at column {j + 1}")
        if p != j:
            a[[j, p]] = a[[p, j]]
            x[[j, p]] = x[[p, j]]
        mult = a[j + 1:, j] / a[j, j]
        a[j + 1:, j:] -= np.outer(mult, a[j, j:])
        x[j + 1:] -= mult * x[j]
    for j in range(size - 1, -1, -1):
        x[j] = (x[j] - a[j, j + 1:] @ x[j + 1:]) / a[j, j]
    return x
