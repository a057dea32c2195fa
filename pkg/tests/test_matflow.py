import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from azeta.errors import DomainError, NotPositiveSpectrumError
from azeta.matflow import (
    GeneratorMatrix,
    matrix_power,
    polar_decompose,
    solve_lyapunov,
    spectral_bounds,
)


def test_identity_generator_spectral_data():
    g = GeneratorMatrix(np.eye(2))
    assert g.alpha == 2.0
    assert g.gamma == pytest.approx(1.0)
    assert g.beta == pytest.approx(1.0)
    # flow of the identity is exact scaling, so the sampled constants must
    # bracket 1 (they carry a deliberate safety factor, so not equal 1)
    assert 0.0 < g.c1 <= 1.0 <= g.c2
    assert not g.defective
    assert g.is_diagonal


def test_alpha_is_trace():
    g = GeneratorMatrix([[0.5, 0.1], [0.0, 1.0 / 3.0]])
    assert g.alpha == pytest.approx(0.5 + 1.0 / 3.0)


def test_flow_group_law():
    g = GeneratorMatrix([[0.5, 0.2], [0.0, 0.25]])
    lhs = matrix_power(g, 2.0) @ matrix_power(g, 3.0)
    rhs = matrix_power(g, 6.0)
    assert np.allclose(lhs, rhs, rtol=1e-12)


def test_flow_at_one_is_identity():
    g = GeneratorMatrix([[1.0, 0.3], [-0.1, 0.8]])
    assert np.allclose(g.flow(1.0), np.eye(2), atol=1e-14)


def test_nonpositive_spectrum_rejected():
    with pytest.raises(NotPositiveSpectrumError):
        GeneratorMatrix([[1.0, 0.0], [0.0, -0.5]])
    with pytest.raises(NotPositiveSpectrumError):
        GeneratorMatrix([[0.0]])


def test_defective_generator_flagged_and_flows():
    g = GeneratorMatrix([[1.0, 1.0], [0.0, 1.0]])
    assert g.defective
    # t^A = t * [[1, log t], [0, 1]] for the Jordan block
    t = 3.0
    want = t * np.array([[1.0, math.log(t)], [0.0, 1.0]])
    assert np.allclose(g.flow(t), want, rtol=1e-12)


def test_lyapunov_solves_equation():
    a = np.array([[0.7, 0.2], [-0.1, 1.1]])
    ell = solve_lyapunov(a)
    assert np.allclose(a.T @ ell + ell @ a, np.eye(2), atol=1e-12)
    assert np.min(np.linalg.eigvalsh(ell)) > 0.0


def test_spectral_bounds_straddle_eigenvalues():
    gamma, beta, c1, c2 = spectral_bounds(np.diag([0.5, 2.0]))
    assert gamma == pytest.approx(0.5)
    assert beta == pytest.approx(2.0)
    assert 0.0 < c1 <= c2


def test_spectral_bounds_certificate_holds_on_samples():
    entries = np.array([[0.7, 0.2], [0.0, 1.3]])
    g = GeneratorMatrix(entries)
    rng = np.random.default_rng(5)
    x = rng.normal(size=(64, 2))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    for t in (0.05, 0.4, 3.0, 40.0):
        norms = np.linalg.norm(g.apply_flow(t, x), axis=1)
        lo = g.c1 * min(t**g.gamma, t**g.beta)
        hi = g.c2 * max(t**g.gamma, t**g.beta)
        assert np.all(norms >= lo * (1.0 - 1e-12))
        assert np.all(norms <= hi * (1.0 + 1e-12))


def test_polar_decompose_round_trip():
    g = GeneratorMatrix([[0.5, 0.0], [0.0, 1.0 / 3.0]])
    x = np.array([2.0, -3.0])
    t, xbar = polar_decompose(g, x)
    assert t > 0.0
    assert g.lyapunov_radius(xbar)[0] == pytest.approx(1.0, abs=1e-11)
    assert np.allclose(g.apply_flow(t, xbar)[0], x, rtol=1e-10)


def test_polar_decompose_rejects_origin():
    g = GeneratorMatrix(np.eye(2))
    with pytest.raises(DomainError):
        polar_decompose(g, np.zeros(2))


def test_transpose_shares_spectrum():
    g = GeneratorMatrix([[0.5, 0.2], [0.0, 0.25]])
    gt = g.transpose()
    assert gt.alpha == pytest.approx(g.alpha)
    assert gt.gamma == pytest.approx(g.gamma)
    assert np.allclose(gt.entries, g.entries.T)


def test_entries_read_only():
    g = GeneratorMatrix(np.eye(2))
    with pytest.raises(ValueError):
        g.entries[0, 0] = 5.0


@settings(max_examples=25, deadline=None)
@given(
    d1=st.floats(0.2, 3.0),
    d2=st.floats(0.2, 3.0),
    x=st.floats(-8.0, 8.0),
    y=st.floats(-8.0, 8.0),
)
def test_polar_round_trip_diagonal(d1, d2, x, y):
    if abs(x) < 1e-3 and abs(y) < 1e-3:
        return
    g = GeneratorMatrix(np.diag([d1, d2]))
    t, u = g.polar_many(np.array([[x, y]]))
    back = g.apply_flow(float(t[0]), u[0])[0]
    assert np.allclose(back, [x, y], rtol=1e-9, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(t1=st.floats(0.1, 10.0), t2=st.floats(0.1, 10.0))
def test_group_law_random_times(t1, t2):
    g = GeneratorMatrix([[0.8, 0.3], [0.0, 0.6]])
    lhs = g.flow(t1) @ g.flow(t2)
    rhs = g.flow(t1 * t2)
    assert np.allclose(lhs, rhs, rtol=1e-10)
