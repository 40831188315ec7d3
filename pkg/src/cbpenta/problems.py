"""Test problems and error metrics.

Random systems use numpy's ``default_rng`` (PCG64) seeded with the given
integer or tuple of integers. All five bands are drawn in a single call of
shape ``(5, n, m, m)`` in the band order A, B, C, D, E, uniform on [0, 1).
"""

from dataclasses import dataclass

import numpy as np

from .blocks import circulant
from .matrix import BlockPentaCyclic, matvec
from .solver import factorize, solve


def worked_example():
    """The m=2, n=5 system with ``f_k = (10, 10)`` and solution all ones."""
    mat = BlockPentaCyclic.constant(
        5,
        [[1, 1], [1, -1]],
        [[-1, 1], [1, 1]],
        [[1, 5], [5, 1]],
        [[1, -1], [1, 1]],
        [[1, 1], [-1, 1]],
    )
    return mat, np.full((5, 2), 10.0), np.ones((5, 2))


def gen_random(m, n, shift=None, seed=0):
    """Random system with ``shift`` added to the diagonal of every ``C_k``.

    `shift` defaults to ``4 m``. The exact solution is all ones.
    """
    if shift is None:
        shift = 4.0 * m
    rng = np.random.default_rng(seed)
    bands = rng.random((5, n, m, m))
    bands[2] += shift * np.eye(m)
    mat = BlockPentaCyclic(*bands)
    x = np.ones((n, m))
    return mat, matvec(mat, x), x


def gen_circulant(m, n):
    """Symmetric circulant-block system with ``A = E = I`` and ``B = D``."""
    if m < 3:
        raise ValueError(f"circulant example needs m >= 3, got m={m}")
    c_row = np.ones(m)
    c_row[0], c_row[1], c_row[-1] = 22.0, -8.0, -8.0
    b_row = np.full(m, 1.8)
    b_row[0] = -7.2
    eye = np.eye(m)
    b = circulant(b_row)
    mat = BlockPentaCyclic.constant(n, eye, b, circulant(c_row), b, eye)
    x = np.ones((n, m))
    return mat, matvec(mat, x), x


@dataclass(frozen=True)
class BvpProblem:
    """Uniform periodic grid on [0, 1) with `n_intervals` points."""

    n_intervals: int

    def __post_init__(self):
        if self.n_intervals < 5:
            raise ValueError(f"need at least 5 intervals, got {self.n_intervals}")

    @property
    def h(self):
        return 1.0 / self.n_intervals

    @property
    def grid(self):
        return np.arange(self.n_intervals) * self.h


def gen_bvp(n):
    """Fourth-order periodic discretization of the coupled ODE pair

        y1'' + y2 = cos 2 pi x - 4 pi^2 sin 2 pi x
        y2'' + y1 = sin 2 pi x - 4 pi^2 cos 2 pi x

    with exact solution ``(sin 2 pi x, cos 2 pi x)``. Every equation is scaled
    by ``12 h^2``. Returns ``(matrix, f, exact samples)``.
    """
    prob = BvpProblem(n)
    h, x = prob.h, prob.grid
    c = 12.0 * h * h
    eye = np.eye(2)
    mat = BlockPentaCyclic.constant(
        n, -eye, 16.0 * eye, [[-30.0, c], [c, -30.0]], 16.0 * eye, -eye
    )
    s, co = np.sin(2 * np.pi * x), np.cos(2 * np.pi * x)
    four_pi2 = 4 * np.pi**2
    f = c * np.column_stack([co - four_pi2 * s, s - four_pi2 * co])
    return mat, f, np.column_stack([s, co])


def avg_error(x, x_exact, per_unknown=False):
    """Average absolute error of a block vector.

    By default the summed absolute error of all components is divided by
    the number of block rows ``n``. With ``per_unknown=True`` it is divided
    by ``n * m`` instead, i.e. the plain mean over all unknowns; this is the
    normalization behind the published BVP error table and the one used in
    benchmark reports.
    """
    x = np.asarray(x, dtype=np.float64)
    x_exact = np.asarray(x_exact, dtype=np.float64)
    if x.shape != x_exact.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {x_exact.shape}")
    total = float(np.sum(np.abs(x - x_exact)))
    return total / (x.size if per_unknown else x.shape[0])


@dataclass
class ExperimentRow:
    n: int
    m: int
    err: float
    res: float
    avg_err: float
    factor_seconds: float
    solve_seconds: float


def generate(kind, n, m=None, seed=0, shift=None):
    """Dispatch to one of the generators by name."""
    if kind == "random":
        return gen_random(m if m is not None else 2, n, shift=shift, seed=seed)
    if kind == "circulant":
        return gen_circulant(m if m is not None else 7, n)
    if kind == "bvp":
        if m not in (None, 2):
            raise ValueError("the bvp example has m = 2")
        return gen_bvp(n)
    raise ValueError(f"unknown example {kind!r}")


def run_experiment(kind, n, m=None, seed=0, shift=None, params=None):
    """Build, factor and solve one example; returns an `ExperimentRow`."""
    mat, f, exact = generate(kind, n, m=m, seed=seed, shift=shift)
    report = solve(factorize(mat, params), f, exact=exact)
    return ExperimentRow(
        n=mat.n, m=mat.m, err=report.err, res=report.res,
        avg_err=avg_error(report.x, exact, per_unknown=True),
        factor_seconds=report.factor_seconds, solve_seconds=report.solve_seconds,
    )
