"""Direct solver for cyclic block penta-diagonal systems.

The corner coupling is removed by introducing two auxiliary m-vectors

    u = alpha (A_1 x_{n-1} + B_1 x_n) + beta (D_n x_1 + E_n x_2)
    v = gamma A_2 x_n + delta E_{n-1} x_1

which turns the cyclic system into a plain block penta-diagonal one with
three right-hand sides (f and two block columns). The solution is written
as ``x = y - U u - V v`` and ``(u, v)`` follow from a 2m x 2m system.

Two entry points are offered: `factorize` followed by any number of
`solve` calls, and `solve_in_place`, which works inside the caller's arrays
for a single right-hand side.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .blocks import DEFAULT_PIVOT_TOL
from .exceptions import SingularAuxiliaryError, SingularBlockError
from .matrix import as_block_vector, residual_inf


@dataclass(frozen=True)
class SolverParams:
    """Auxiliary scalars; any non-zero values give the same exact solution."""

    alpha: float = 1.0
    beta: float = -1.0
    gamma: float = 1.0
    delta: float = -1.0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value == 0.0:
                raise ValueError(f"{name} must be finite and non-zero, got {value}")
            object.__setattr__(self, name, value)

    @property
    def lam(self):
        return self.beta / self.alpha

    @property
    def sigma(self):
        return self.delta / self.gamma

    def astuple(self):
        return self.alpha, self.beta, self.gamma, self.delta


@dataclass(frozen=True, eq=False)
class Factorization:
    """Everything `solve` needs; immutable once built.

    `H`, `F`, `P`, `Q` are the per-row factors (``F_k`` already inverted),
    `U` and `V` the correction columns, and `aux_lu`/`aux_perm` the
    row-pivoted LU factors of the 2m x 2m corner system.
    """

    params: SolverParams
    A: np.ndarray
    H: np.ndarray
    F: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    U: np.ndarray
    V: np.ndarray
    A1: np.ndarray
    B1: np.ndarray
    Dn: np.ndarray
    En: np.ndarray
    A2: np.ndarray
    En1: np.ndarray
    aux_lu: np.ndarray
    aux_perm: np.ndarray
    seconds: float = 0.0
    system: object = field(default=None, repr=False)

    @property
    def n(self):
        return self.F.shape[0]

    @property
    def m(self):
        return self.F.shape[1]

    def solve(self, f, exact=None):
        return solve(self, f, exact=exact)


@dataclass
class SolveReport:
    """Solution plus diagnostics.

    `res` is ``||f - A x||_inf``; it is None for `solve_in_place`, where the
    original matrix no longer exists. `err` is only set when an exact
    solution was supplied.
    """

    x: np.ndarray
    u: np.ndarray
    v: np.ndarray
    res: float = None
    err: float = None
    factor_seconds: float = 0.0
    solve_seconds: float = 0.0


def _check_params(params):
    if params is None:
        return SolverParams()
    if isinstance(params, SolverParams):
        return params
    return SolverParams(*params)


def _raise_row(status):
    raise SingularBlockError(
        f"pivot block of row {status} is singular; "
        "bad parameter choice or singular system",
        stage=status,
    )


def _raise_aux():
    raise SingularAuxiliaryError(
        "auxiliary 2m x 2m system is singular; bad parameter choice or singular system"
    )


def factorize(mat, params=None, pivot_tol=DEFAULT_PIVOT_TOL):
    """
    Factor a cyclic block penta-diagonal matrix for repeated solves.

    Parameters
    ----------
    mat : BlockPentaCyclic
        The system matrix; it is not modified.
    params : SolverParams or tuple of 4 floats, optional
        ``(alpha, beta, gamma, delta)``. Defaults to ``(1, -1, 1, -1)``.
    pivot_tol : float, optional
        Relative pivot tolerance for every inversion.

    Returns
    -------
    Factorization

    Raises
    ------
    SingularBlockError
        A pivot block ``F_k`` could not be inverted; ``stage`` holds k.
    SingularAuxiliaryError
        The corner system could not be factored.
    """
    params = _check_params(params)
    t0 = time.perf_counter()
    A = mat.A
    H, F, P, Q = mat.B.copy(), mat.C.copy(), mat.D.copy(), mat.E.copy()
    U, V, aux_lu, aux_perm, row_status, aux_status = _kernels.factorize_kernel(
        A, H, F, P, Q, *params.astuple(), pivot_tol
    )
    if row_status != 0:
        _raise_row(row_status)
    if aux_status != 0:
        _raise_aux()
    if not (np.all(np.isfinite(U)) and np.all(np.isfinite(V))):
        raise SingularBlockError("factorization produced non-finite values")
    n = mat.n
    seconds = time.perf_counter() - t0
    for arr in (H, F, P, Q, U, V, aux_lu, aux_perm):
        arr.flags.writeable = False
    return Factorization(
        params=params, A=A, H=H, F=F, P=P, Q=Q, U=U, V=V,
        A1=mat.A[0], B1=mat.B[0], Dn=mat.D[n - 1], En=mat.E[n - 1],
        A2=mat.A[1], En1=mat.E[n - 2],
        aux_lu=aux_lu, aux_perm=aux_perm, seconds=seconds, system=mat,
    )


def solve(fac, f, exact=None):
    """Solve ``A x = f`` with a precomputed factorization.

    The residual is computed against the factorized matrix. If `exact` is
    given, ``err = ||x - exact||_inf`` is filled in as well.
    """
    f = as_block_vector(f, fac.m, fac.n)
    t0 = time.perf_counter()
    x, u, v = _kernels.solve_kernel(
        fac.A, fac.H, fac.F, fac.P, fac.Q, fac.U, fac.V,
        fac.A1, fac.B1, fac.Dn, fac.En, fac.A2, fac.En1,
        fac.aux_lu, fac.aux_perm, f, *fac.params.astuple(),
    )
    seconds = time.perf_counter() - t0
    report = SolveReport(x=x, u=u, v=v, factor_seconds=fac.seconds, solve_seconds=seconds)
    if fac.system is not None:
        report.res = residual_inf(fac.system, x, f)
    if exact is not None:
        report.err = float(np.max(np.abs(x - as_block_vector(exact, fac.m, fac.n))))
    return report


def solve_multi(fac, fs, exact=None):
    """Apply `solve` to each right-hand side in `fs`."""
    return [solve(fac, f, exact=exact) for f in fs]


def solve_system(mat, f, params=None, exact=None, pivot_tol=DEFAULT_PIVOT_TOL):
    """Convenience wrapper: factorize then solve one right-hand side."""
    return solve(factorize(mat, params, pivot_tol), f, exact=exact)


def solve_in_place(mat, f, params=None, exact=None, pivot_tol=DEFAULT_PIVOT_TOL):
    """
    Memory-minimal single right-hand-side solve.

    The bands of `mat` and the array `f` are consumed: on return ``f``
    holds the solution (``report.x`` is the same array) and the bands hold
    intermediate data. Apart from them only a copy of ``B_1`` and the
    2m x 2m corner system are allocated. Both arguments must be writeable
    float64 C-contiguous arrays; `mat` must not be used afterwards.
    """
    params = _check_params(params)
    if not (isinstance(f, np.ndarray) and f.dtype == np.float64
            and f.flags.c_contiguous and f.shape == (mat.n, mat.m)):
        raise ValueError(f"f must be a C-contiguous float64 array of shape ({mat.n}, {mat.m})")
    t0 = time.perf_counter()
    B1, row_status = _kernels.inplace_factor(*mat.bands(), *params.astuple(), pivot_tol)
    if row_status != 0:
        _raise_row(row_status)
    t1 = time.perf_counter()
    u, v, aux_status = _kernels.inplace_solve(
        *mat.bands(), B1, f, *params.astuple(), pivot_tol
    )
    if aux_status != 0:
        _raise_aux()
    t2 = time.perf_counter()
    report = SolveReport(x=f, u=u, v=v, factor_seconds=t1 - t0, solve_seconds=t2 - t1)
    if exact is not None:
        report.err = float(np.max(np.abs(f - exact)))
    return report
