import threading

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cbpenta.exceptions import SingularAuxiliaryError, SingularBlockError
from cbpenta.matrix import BlockPentaCyclic, matvec, residual_inf, to_dense
from cbpenta.oracle import dense_solve
from cbpenta.problems import gen_random
from cbpenta.solver import (
    SolverParams, factorize, solve, solve_in_place, solve_multi, solve_system,
)

WORKED_PARAMS = [(1, -1, 1, -1), (1, 1, 1, 1), (2, -3, 1, 5), (2, 6, 1, 5)]


def oracle(mat, f):
    return dense_solve(to_dense(mat), np.ravel(f)).reshape(mat.n, mat.m)


def test_params_defaults_and_validation():
    p = SolverParams()
    assert p.astuple() == (1.0, -1.0, 1.0, -1.0)
    assert p.lam == -1.0 and p.sigma == -1.0
    with pytest.raises(ValueError):
        SolverParams(0.0, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        SolverParams(1.0, np.inf, 1.0, 1.0)


def test_worked_example_defaults(worked):
    mat, f, x = worked
    report = solve(factorize(mat), f)
    assert np.max(np.abs(report.x - x)) <= 1e-12
    assert report.res <= 1e-12


@pytest.mark.parametrize("params", WORKED_PARAMS)
def test_worked_example_uv_closed_form(worked, params):
    mat, f, x = worked
    alpha, beta, gamma, delta = params
    report = solve(factorize(mat, params), f)
    lam, sig = beta / alpha, delta / gamma
    np.testing.assert_allclose(report.u, 2 * alpha * (1 + lam) * np.ones(2), atol=1e-10)
    np.testing.assert_allclose(report.v, 2 * gamma * (1 + sig) * np.array([1.0, 0.0]), atol=1e-10)
    np.testing.assert_allclose(report.x, x, atol=1e-12)


def test_worked_example_uv_zero_at_default(worked):
    mat, f, _ = worked
    report = solve(factorize(mat, (1, -1, 1, -1)), f)
    assert np.max(np.abs(report.u)) <= 1e-10 and np.max(np.abs(report.v)) <= 1e-10


def test_parameter_invariance_worked(worked):
    mat, f, _ = worked
    xs = [solve(factorize(mat, p), f).x for p in WORKED_PARAMS[:3]]
    for a in xs:
        for b in xs:
            assert np.max(np.abs(a - b)) <= 1e-10


@pytest.mark.parametrize("lam", [-3.0, 4.0])
def test_forbidden_lambda(worked, lam):
    mat, f, _ = worked
    with pytest.raises(SingularBlockError) as info:
        factorize(mat, (1.0, lam, 1.0, 1.0))
    assert info.value.stage == 1


def test_singular_system_detected_in_band():
    # periodic fourth-order Laplacian: constants span the null space
    mat = BlockPentaCyclic.constant(8, -1, 16, -30, 16, -1)
    with pytest.raises(SingularBlockError) as info:
        factorize(mat)
    assert info.value.stage == 8


def test_singular_system_detected_in_auxiliary():
    mat = BlockPentaCyclic.constant(8, -1, 16, -30, 16, -1)
    with pytest.raises(SingularAuxiliaryError):
        factorize(mat, (1, 1, 1, 1))


def test_singular_in_place():
    mat = BlockPentaCyclic.constant(8, -1, 16, -30, 16, -1)
    with pytest.raises(SingularAuxiliaryError):
        solve_in_place(mat, np.ones((8, 1)), (1, 1, 1, 1))


def test_decoupled_diagonal():
    mat = BlockPentaCyclic.constant(5, 0, 0, 2, 0, 0)
    f = np.arange(1.0, 6.0).reshape(5, 1)
    for params in [(1, -1, 1, -1), (1, 2, 3, 4)]:
        np.testing.assert_allclose(solve_system(mat, f, params).x, f / 2, rtol=1e-14)


@pytest.mark.parametrize("m", [1, 3])
def test_identity_system(m):
    zero = np.zeros((m, m))
    mat = BlockPentaCyclic.constant(7, zero, zero, np.eye(m), zero, zero)
    f = np.random.default_rng(m).uniform(-5, 5, (7, m))
    for params in [(1, -1, 1, -1), (1, 1, 1, 1), (0.5, 3, -2, 1)]:
        assert np.max(np.abs(solve_system(mat, f, params).x - f)) <= 1e-13


def test_solve_does_not_modify_inputs():
    mat, f, _ = gen_random(3, 9, seed=4)
    before = [b.copy() for b in mat.bands()], f.copy()
    solve(factorize(mat), f)
    for a, b in zip(before[0], mat.bands()):
        np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(before[1], f)


def test_factorization_is_read_only():
    fac = factorize(gen_random(2, 6, seed=0)[0])
    with pytest.raises(ValueError):
        fac.U[0, 0, 0] = 1.0


def test_solve_multi_identical():
    mat, f, _ = gen_random(3, 10, seed=8)
    fac = factorize(mat)
    f2 = np.random.default_rng(1).random((10, 3))
    reports = solve_multi(fac, [f, f, f2])
    np.testing.assert_array_equal(reports[0].x, reports[1].x)
    np.testing.assert_array_equal(reports[2].x, solve(fac, f2).x)


def test_solve_multi_against_oracle():
    mat, _, _ = gen_random(8, 8, seed=21)
    fac = factorize(mat)
    fs = list(np.random.default_rng(2).uniform(-1, 1, (10, 8, 8)))
    for f, report in zip(fs, solve_multi(fac, fs)):
        ref = oracle(mat, f)
        assert np.max(np.abs(report.x - ref)) <= 1e-9 * np.max(np.abs(ref))


def test_concurrent_solves_do_not_interfere():
    mat, _, _ = gen_random(4, 200, seed=2)
    fac = factorize(mat)
    fs = np.random.default_rng(3).random((8, 200, 4))
    expected = [solve(fac, f).x for f in fs]
    results = [None] * len(fs)

    def work(i):
        for _ in range(20):
            results[i] = solve(fac, fs[i]).x

    threads = [threading.Thread(target=work, args=(i,)) for i in range(len(fs))]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    for got, want in zip(results, expected):
        np.testing.assert_array_equal(got, want)


def test_exact_and_timings_reported(worked):
    mat, f, x = worked
    report = solve(factorize(mat), f, exact=x)
    assert report.err <= 1e-12
    assert report.factor_seconds >= 0 and report.solve_seconds >= 0


def test_dimension_mismatch():
    fac = factorize(gen_random(2, 6, seed=0)[0])
    with pytest.raises(ValueError):
        solve(fac, np.ones((6, 3)))


def test_in_place_worked_example(worked):
    mat, f, x = worked
    ref = solve(factorize(mat), f).x
    work_mat, work_f = mat.copy(), f.copy()
    report = solve_in_place(work_mat, work_f)
    assert report.x is work_f
    assert np.max(np.abs(report.x - x)) <= 1e-12
    assert np.max(np.abs(report.x - ref)) <= 1e-12


def test_in_place_storage_contract():
    mat, f, _ = gen_random(3, 9, seed=11)
    work = mat.copy()
    kept = [work.A.copy(), work.D[-1].copy(), work.E[-2:].copy()]
    solve_in_place(work, f.copy())
    # A, D_n, E_{n-1}, E_n are never overwritten
    np.testing.assert_array_equal(work.A, kept[0])
    np.testing.assert_array_equal(work.D[-1], kept[1])
    np.testing.assert_array_equal(work.E[-2:], kept[2])
    # C ends as U and B as V; both match the factor-once correction columns
    fac = factorize(mat)
    np.testing.assert_array_equal(work.C, fac.U)
    np.testing.assert_array_equal(work.B, fac.V)


def test_in_place_requires_float_array():
    mat, f, _ = gen_random(2, 6, seed=0)
    with pytest.raises(ValueError):
        solve_in_place(mat, f.tolist())


def test_in_place_matches_two_phase_50_instances():
    for seed in range(50):
        rng = np.random.default_rng(seed)
        m, n = int(rng.integers(1, 5)), int(rng.integers(5, 30))
        mat, f, _ = gen_random(m, n, seed=seed)
        two_phase = solve(factorize(mat), f).x
        in_place = solve_in_place(mat.copy(), f.copy()).x
        assert np.max(np.abs(two_phase - in_place)) <= 1e-12


@given(st.integers(1, 4), st.integers(5, 12), st.integers(0, 2**32 - 1))
def test_oracle_equivalence(m, n, seed):
    mat, f, _ = gen_random(m, n, seed=seed)
    report = solve(factorize(mat), f)
    ref = oracle(mat, f)
    assert np.max(np.abs(report.x - ref)) <= 1e-9 * np.max(np.abs(ref))
    a_norm = np.max(np.sum(np.abs(to_dense(mat)), axis=1))
    bound = 1e-9 * (np.max(np.abs(f)) + a_norm * np.max(np.abs(report.x)))
    assert residual_inf(mat, report.x, f) <= bound


@given(st.integers(1, 4), st.integers(5, 12), st.integers(0, 2**32 - 1))
def test_general_random_rhs(m, n, seed):
    rng = np.random.default_rng(seed)
    mat = BlockPentaCyclic(*rng.uniform(-1, 1, (5, n, m, m)) + 8 * m * np.eye(m) * (
        np.arange(5) == 2)[:, None, None, None])
    x0 = rng.uniform(-1, 1, (n, m))
    x = solve_system(mat, matvec(mat, x0)).x
    assert np.max(np.abs(x - x0)) <= 1e-10
