"""Recurrence kernels of the cyclic block penta-diagonal solver.

Bands are ``(n, m, m)`` arrays indexed from zero. After `factor_bands` the
band arrays hold the factors in place::

    B[k] -> H_k,  C[k] -> F_k (inverted pivot),  D[k] -> P_k,  E[k] -> Q_k

`forward`, `back_substitute` and `corner_terms` accept a stack of vectors
``(n, m)`` or of blocks ``(n, m, m)`` alike, so the same code handles the
right-hand side and the two correction columns.
"""

import numpy as np

from ._compat import jit
from .blocks import invert, lu_factor, lu_solve, norm_inf


@jit
def modify_boundary(A, B, C, D, E, alpha, beta, gamma, delta):
    """Fold the corner blocks into the six boundary blocks, in place."""
    n = C.shape[0]
    lam = beta / alpha
    sig = delta / gamma
    C[0] -= lam * D[n - 1]
    D[0] -= lam * E[n - 1]
    B[1] -= sig * E[n - 2]
    D[n - 2] -= (1.0 / sig) * A[1]
    B[n - 1] -= (1.0 / lam) * A[0]
    C[n - 1] -= (1.0 / lam) * B[0]


@jit
def factor_bands(A, B, C, D, E, pivot_tol):
    """Block LU sweep over a (non-cyclic) penta-diagonal matrix, in place.

    Pivot blocks are tested against the size of the terms they are formed
    from, so a block that cancels to rounding noise counts as singular.
    Returns 0, or the 1-based block row whose pivot block is singular.
    """
    n = C.shape[0]
    inv, status = invert(C[0], pivot_tol)
    if status != 0:
        return 1
    C[0] = inv
    D[0] = C[0] @ D[0]
    E[0] = C[0] @ E[0]
    BD = B[1] @ D[0]
    inv, status = invert(C[1] - BD, pivot_tol, max(norm_inf(C[1]), norm_inf(BD)))
    if status != 0:
        return 2
    C[1] = inv
    D[1] = C[1] @ (D[1] - B[1] @ E[0])
    E[1] = C[1] @ E[1]
    for k in range(2, n):
        B[k] = B[k] - A[k] @ D[k - 2]
        HP = B[k] @ D[k - 1]
        AQ = A[k] @ E[k - 2]
        scale = max(norm_inf(C[k]), norm_inf(HP), norm_inf(AQ))
        inv, status = invert(C[k] - HP - AQ, pivot_tol, scale)
        if status != 0:
            return k + 1
        C[k] = inv
        if k < n - 1:
            D[k] = C[k] @ (D[k] - B[k] @ E[k - 1])
        if k < n - 2:
            E[k] = C[k] @ E[k]
    return 0


@jit
def forward(A, H, F, f):
    """Intermediate solution ``g`` for a stack of right-hand sides."""
    n = F.shape[0]
    g = np.empty_like(f)
    g[0] = F[0] @ f[0]
    g[1] = F[1] @ (f[1] - H[1] @ g[0])
    for k in range(2, n):
        g[k] = F[k] @ (f[k] - H[k] @ g[k - 1] - A[k] @ g[k - 2])
    return g


@jit
def back_substitute(P, Q, y):
    """Upper-triangular sweep ``y_k -= P_k y_{k+1} + Q_k y_{k+2}``, in place."""
    n = y.shape[0]
    y[n - 2] -= P[n - 2] @ y[n - 1]
    for k in range(n - 3, -1, -1):
        y[k] -= P[k] @ y[k + 1] + Q[k] @ y[k + 2]
    return y


@jit
def correction_columns(A, H, F, P, Q, alpha, beta, gamma, delta):
    """Solve for the two block columns U, V of the ansatz.

    The right-hand sides are identity blocks scaled by ``1/alpha`` and
    ``1/beta`` at rows 1 and n (for U) and ``1/gamma``, ``1/delta`` at rows
    2 and n-1 (for V).
    """
    n = F.shape[0]
    U = np.empty_like(F)
    V = np.empty_like(F)
    U[0] = F[0] / alpha
    U[1] = -(F[1] @ (H[1] @ U[0]))
    V[0] = 0.0
    V[1] = F[1] / gamma
    for k in range(2, n):
        U[k] = -(F[k] @ (H[k] @ U[k - 1] + A[k] @ U[k - 2]))
        V[k] = -(F[k] @ (H[k] @ V[k - 1] + A[k] @ V[k - 2]))
        if k == n - 1:
            U[k] += F[k] / beta
        if k == n - 2:
            V[k] += F[k] / delta
    back_substitute(P, Q, U)
    back_substitute(P, Q, V)
    return U, V


@jit
def corner_terms(A1, B1, Dn, En, A2, En1, Y, alpha, beta, gamma, delta):
    """Apply the corner coupling to a stack ``Y``.

    Returns ``alpha (A_1 Y_{n-1} + B_1 Y_n) + beta (D_n Y_1 + E_n Y_2)`` and
    ``gamma A_2 Y_n + delta E_{n-1} Y_1``.
    """
    n = Y.shape[0]
    top = alpha * (A1 @ Y[n - 2] + B1 @ Y[n - 1]) + beta * (Dn @ Y[0] + En @ Y[1])
    bottom = gamma * (A2 @ Y[n - 1]) + delta * (En1 @ Y[0])
    return top, bottom


@jit
def auxiliary_matrix(A1, B1, Dn, En, A2, En1, U, V, alpha, beta, gamma, delta):
    m = U.shape[1]
    S = np.eye(2 * m)
    ut, ub = corner_terms(A1, B1, Dn, En, A2, En1, U, alpha, beta, gamma, delta)
    vt, vb = corner_terms(A1, B1, Dn, En, A2, En1, V, alpha, beta, gamma, delta)
    S[:m, :m] += ut
    S[:m, m:] = vt
    S[m:, :m] = ub
    S[m:, m:] += vb
    return S


@jit
def aux_scale(S):
    return max(1.0, norm_inf(S - np.eye(S.shape[0])))


@jit
def factorize_kernel(A, B, C, D, E, alpha, beta, gamma, delta, pivot_tol):
    """Factor-once path. `B`, `C`, `D`, `E` must be working copies.

    Returns ``(U, V, aux_lu, aux_perm, row_status, aux_status)``.
    """
    n = C.shape[0]
    m = C.shape[1]
    B1 = B[0].copy()
    modify_boundary(A, B, C, D, E, alpha, beta, gamma, delta)
    row_status = factor_bands(A, B, C, D, E, pivot_tol)
    if row_status != 0:
        empty = np.zeros((0, m, m))
        return empty, empty, np.zeros((0, 0)), np.zeros(0, dtype=np.int64), row_status, 0
    U, V = correction_columns(A, B, C, D, E, alpha, beta, gamma, delta)
    S = auxiliary_matrix(A[0], B1, D[n - 1], E[n - 1], A[1], E[n - 2], U, V,
                         alpha, beta, gamma, delta)
    lu, perm, aux_status = lu_factor(S, pivot_tol, aux_scale(S))
    return U, V, lu, perm, 0, aux_status


@jit
def solve_kernel(A, H, F, P, Q, U, V, A1, B1, Dn, En, A2, En1, aux_lu, aux_perm, f,
                 alpha, beta, gamma, delta):
    """Solve-many path; no block inversions. Returns ``(x, u, v)``."""
    m = F.shape[1]
    y = forward(A, H, F, f)
    back_substitute(P, Q, y)
    top, bottom = corner_terms(A1, B1, Dn, En, A2, En1, y, alpha, beta, gamma, delta)
    rhs = np.empty(2 * m)
    rhs[:m] = top
    rhs[m:] = bottom
    uv = lu_solve(aux_lu, aux_perm, rhs)
    u = uv[:m].copy()
    v = uv[m:].copy()
    for k in range(y.shape[0]):
        y[k] -= U[k] @ u + V[k] @ v
    return y, u, v


@jit
def inplace_factor(A, B, C, D, E, alpha, beta, gamma, delta, pivot_tol):
    """Boundary modification and factorization over the caller's bands.

    Returns ``(copy of B_1, row_status)``; this copy is the only extra block
    the single right-hand-side path keeps.
    """
    B1 = B[0].copy()
    modify_boundary(A, B, C, D, E, alpha, beta, gamma, delta)
    return B1, factor_bands(A, B, C, D, E, pivot_tol)


@jit
def inplace_solve(A, B, C, D, E, B1, f, alpha, beta, gamma, delta, pivot_tol):
    """Single right-hand-side solve reusing the factored bands as storage.

    ``f`` becomes ``g``, then ``y``, then ``x``; ``C`` becomes W then U and
    ``B`` becomes Z then V. Returns ``(u, v, aux_status)``.
    """
    n = C.shape[0]
    m = C.shape[1]
    f[0] = C[0] @ f[0]
    C[0] = C[0] / alpha
    B[0] = 0.0
    T = C[1].copy()
    f[1] = T @ (f[1] - B[1] @ f[0])
    C[1] = -(T @ (B[1] @ C[0]))
    B[1] = T / gamma
    for k in range(2, n):
        T = C[k].copy()
        f[k] = T @ (f[k] - B[k] @ f[k - 1] - A[k] @ f[k - 2])
        C[k] = -(T @ (B[k] @ C[k - 1] + A[k] @ C[k - 2]))
        B[k] = -(T @ (B[k] @ B[k - 1] + A[k] @ B[k - 2]))
        if k == n - 1:
            C[k] += T / beta
        if k == n - 2:
            B[k] += T / delta
    back_substitute(D, E, f)
    back_substitute(D, E, C)
    back_substitute(D, E, B)
    S = auxiliary_matrix(A[0], B1, D[n - 1], E[n - 1], A[1], E[n - 2], C, B,
                         alpha, beta, gamma, delta)
    lu, perm, aux_status = lu_factor(S, pivot_tol, aux_scale(S))
    if aux_status != 0:
        return np.zeros(m), np.zeros(m), aux_status
    top, bottom = corner_terms(A[0], B1, D[n - 1], E[n - 1], A[1], E[n - 2], f,
                               alpha, beta, gamma, delta)
    rhs = np.empty(2 * m)
    rhs[:m] = top
    rhs[m:] = bottom
    uv = lu_solve(lu, perm, rhs)
    u = uv[:m].copy()
    v = uv[m:].copy()
    for k in range(n):
        f[k] -= C[k] @ u + B[k] @ v
    return u, v, 0
