import math

import numpy as np
import pytest

from azeta.errors import DivergenceError, DomainError
from azeta.homog import PNorm
from azeta.kernel import Kernel, fourier_transform
from azeta.zeta import (
    default_power,
    growth_scan,
    residue_at_alpha,
    xi_full,
    zeta_at_zero,
    zeta_continued,
    zeta_direct,
    zeta_negative_integers,
)

from oracles import dirichlet_beta, riemann_zeta
from shapes import ABSVAL, DISC, SUPERELLIPSE


# frozen from the alternating-series oracle (tests/oracles.py):
# 2*zeta(2) = pi^2/3, 2*zeta(3), 2*zeta(1/2), 2*zeta(-1) = -1/6, 2*zeta(-3) = 1/60
TWO_ZETA = {
    2.0: math.pi**2 / 3.0,
    3.0: 2.4041138063191886,
    0.5: -2.9207090176191736,
    -1.0: -1.0 / 6.0,
    -3.0: 1.0 / 60.0,
}

# frozen: sum over Z^2 of (x^2+y^2)^{-3} = 4 zeta(3) beta(3), beta(3) = pi^3/32
DISC_S3 = 4.658913615603843


def absval():
    return ABSVAL


def disc():
    return DISC


def test_frozen_constants_match_oracle():
    assert TWO_ZETA[3.0] == pytest.approx(2.0 * riemann_zeta(3.0).real, abs=1e-14)
    assert TWO_ZETA[0.5] == pytest.approx(2.0 * riemann_zeta(0.5).real, abs=1e-14)
    assert DISC_S3 == pytest.approx(
        4.0 * riemann_zeta(3.0).real * dirichlet_beta(3.0).real, abs=1e-14
    )


def test_direct_1d_riemann_values():
    phi = absval()
    for s in (2.0, 3.0):
        got = zeta_direct(phi, s, target=1e-11)
        assert got.value.real == pytest.approx(TWO_ZETA[s], abs=1e-10)
        assert abs(got.value - TWO_ZETA[s]) <= max(got.error, 1e-12)


def test_continued_1d_riemann_values():
    phi = absval()
    for s in (2.0, 0.5, -1.0):
        got = zeta_continued(phi, s)
        assert got.value.real == pytest.approx(TWO_ZETA[s], abs=1e-8)


def test_continued_matches_direct_on_overlap_disc():
    phi = disc()
    d = zeta_direct(phi, 3.0)
    c = zeta_continued(phi, 3.0)
    assert d.value.real == pytest.approx(DISC_S3, abs=2e-7)
    assert abs(d.value - DISC_S3) <= d.error
    assert c.value.real == pytest.approx(DISC_S3, abs=1e-10)


def test_direct_rejects_divergent_strip():
    with pytest.raises(DivergenceError):
        zeta_direct(absval(), 0.5)
    with pytest.raises(DivergenceError):
        zeta_direct(disc(), 1.0)


def test_exact_pole_raises():
    with pytest.raises(DomainError):
        zeta_continued(absval(), 1.0)


def test_near_pole_carries_laurent_data():
    got = zeta_continued(absval(), 1.0 + 1e-8)
    assert got.near_pole is not None
    pole, dist, residue, _ = got.near_pole
    assert pole == pytest.approx(1.0)
    assert dist == pytest.approx(1e-8)
    assert residue == pytest.approx(2.0, abs=1e-4)
    # the Laurent model dominates: value ~ residue / (s - pole)
    assert got.value.real == pytest.approx(2.0e8, rel=1e-4)


def test_zeta_at_zero_is_minus_one():
    for phi in (absval(), disc()):
        got = zeta_at_zero(phi)
        assert got.value.real == pytest.approx(-1.0, abs=1e-4)


def test_residue_closed_forms():
    got = residue_at_alpha(absval())
    assert got.value == pytest.approx(2.0, abs=1e-6)
    got = residue_at_alpha(disc())
    assert got.value == pytest.approx(math.pi, abs=1e-4)


def test_negative_integers_1d():
    phi = absval()
    want = {1: -1.0 / 6.0, 2: 0.0, 3: 1.0 / 60.0}
    for k, target in want.items():
        got = zeta_negative_integers(phi, k)
        assert got.value.real == pytest.approx(target, abs=1e-6)


def test_scaling_law():
    phi = disc()
    s = 2.25 + 0.75j
    base = zeta_continued(phi, s)
    for a in (2.0, 1.0 / 3.0):
        scaled = zeta_continued(phi.scale(a), s)
        want = a ** (-s) * base.value
        assert scaled.value == pytest.approx(want, abs=1e-8)


def test_conjugate_symmetry():
    phi = absval()
    s = 1.75 + 1.25j
    a = zeta_continued(phi, s)
    b = zeta_continued(phi, np.conj(s))
    assert b.value == pytest.approx(np.conj(a.value), abs=1e-10)


def test_explicit_power_gamma_pole_rejected():
    with pytest.raises(DomainError):
        zeta_continued(absval(), -2.0, power=2.0)


def test_functional_equation_strip_points():
    phi = absval()
    k = Kernel(phi, power=default_power(phi))
    khat = fourier_transform(k)
    khathat = khat.transform()
    alpha = phi.alpha
    for s in (0.4 + 0.6j, 0.55 - 1.2j, 0.7 + 0.0j):
        lhs = xi_full(k.generator, k, khat, s)
        rhs = xi_full(k.generator.transpose(), khat, khathat, alpha - s)
        assert abs(lhs.value - rhs.value) <= lhs.error + rhs.error


def test_growth_scan_1d_decay_rate():
    rows, rate, threshold, passed = growth_scan(absval())
    assert passed
    assert rate >= math.pi / 2.0 - 0.2
    assert len(rows) >= 3


def test_superellipse_overlap():
    phi = SUPERELLIPSE
    s = 1.6
    d = zeta_direct(phi, s)
    c = zeta_continued(phi, s)
    assert abs(d.value - c.value) <= d.error + c.error
    assert abs(d.value - c.value) < 1e-6
