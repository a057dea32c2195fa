import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from azeta.errors import DomainError
from azeta.homog import (
    AnisotropicSuperellipse,
    HomogeneousPolynomial,
    PNorm,
    Profile,
    QuadraticForm,
    evaluate,
    growth_bounds,
    sandwich_smooth,
    unit_ball_membership,
)

from oracles import brute_count, lattice_points


def euclid2():
    return PNorm(2, 2.0)


def superellipse():
    return AnisotropicSuperellipse([12.0, 18.0], 6.0)


def test_pnorm_evaluates_as_p_norm():
    phi = PNorm(2, 3.0)
    assert evaluate(phi, (1.0, 0.0)) == pytest.approx(1.0)
    assert evaluate(phi, (1.0, 1.0)) == pytest.approx(2.0 ** (1.0 / 3.0))


def test_membership_boundary_is_excluded():
    phi = euclid2()
    assert unit_ball_membership(phi, (0.0, 0.0), 1.0)
    assert not unit_ball_membership(phi, (1.0, 0.0), 1.0)


def test_quadratic_form_is_the_form_not_its_root():
    phi = QuadraticForm([[2.0, 0.5], [0.5, 1.0]])
    assert evaluate(phi, (1.0, 0.0)) == pytest.approx(2.0)
    assert evaluate(phi, (1.0, 1.0)) == pytest.approx(2.0 + 1.0 + 1.0)
    assert phi.alpha == pytest.approx(1.0)  # A = I/2 in dimension 2


def test_quadratic_form_rejects_indefinite():
    with pytest.raises(DomainError):
        QuadraticForm([[1.0, 0.0], [0.0, -1.0]])


def test_polynomial_matches_quadratic_form():
    poly = HomogeneousPolynomial(2, {(2, 0): 1.0, (0, 2): 1.0})
    form = QuadraticForm(np.eye(2))
    pts = np.array([[1.0, 2.0], [-3.0, 0.5], [0.25, -0.75]])
    assert np.allclose(poly(pts), form(pts), rtol=1e-14)
    assert poly.alpha == pytest.approx(1.0)


def test_quartic_polynomial_alpha():
    poly = HomogeneousPolynomial(
        2, {(4, 0): 1.0, (2, 2): 1.0, (0, 4): 1.0}
    )
    assert poly.alpha == pytest.approx(0.5)  # A = I/4 in dimension 2


def test_superellipse_generator_and_alpha():
    phi = superellipse()
    assert np.allclose(
        phi.generator.entries, np.diag([0.5, 1.0 / 3.0]), atol=1e-15
    )
    assert phi.alpha == pytest.approx(5.0 / 6.0)
    assert evaluate(phi, (1.0, 1.0)) == pytest.approx(2.0 ** (1.0 / 6.0))


def test_homogeneity_identity_each_variant():
    variants = [
        euclid2(),
        QuadraticForm([[2.0, 0.5], [0.5, 1.0]]),
        superellipse(),
        HomogeneousPolynomial(2, {(4, 0): 1.0, (2, 2): 0.5, (0, 4): 2.0}),
    ]
    rng = np.random.default_rng(3)
    pts = rng.normal(size=(32, 2)) * 3.0
    for phi in variants:
        base = phi(pts)
        for t in (0.3, 1.7, 9.0):
            moved = phi.generator.apply_flow(t, pts)
            assert np.allclose(phi(moved), t * base, rtol=1e-10)


def test_scale_multiplies_values():
    phi = euclid2()
    doubled = phi.scale(2.0)
    pts = np.array([[1.0, 2.0], [0.5, -0.25]])
    assert np.allclose(doubled(pts), 2.0 * phi(pts), rtol=1e-15)
    assert doubled.alpha == pytest.approx(phi.alpha)


def test_growth_bounds_bracket_euclidean():
    c1, c2, c3, c4 = growth_bounds(euclid2())
    # exact constants are all 1; the certificate may widen but must bracket
    assert c3 <= 1.0 <= c4
    assert c1 <= 1.0 <= c2


def test_growth_certificate_holds_on_samples():
    phi = superellipse()
    _, _, c3, c4 = phi.growth()
    g = phi.generator
    rng = np.random.default_rng(8)
    pts = rng.normal(size=(200, 2)) * 4.0
    pts = pts[np.linalg.norm(pts, axis=1) > 1e-3]
    vals = phi(pts)
    norms = np.linalg.norm(pts, axis=1)
    lower = c3 * np.minimum(norms ** (1.0 / g.beta), norms ** (1.0 / g.gamma))
    upper = c4 * np.maximum(norms ** (1.0 / g.beta), norms ** (1.0 / g.gamma))
    assert np.all(vals >= lower * (1.0 - 1e-12))
    assert np.all(vals <= upper * (1.0 + 1e-12))


def test_lattice_box_contains_sublevel_set():
    for phi, r in ((euclid2(), 7.3), (superellipse(), 3.0)):
        box = phi.lattice_box(r)
        pts = lattice_points(2, int(max(box)) + 2)
        inside = pts[phi(pts) < r]
        assert np.all(np.abs(inside) <= box[None, :])


def test_sandwich_smooth_orders_pointwise():
    phi = superellipse()
    lo, hi = sandwich_smooth(phi, 0.2)
    rng = np.random.default_rng(11)
    pts = rng.normal(size=(100, 2)) * 2.0
    assert np.all(lo(pts) <= phi(pts) * (1.0 + 1e-12))
    assert np.all(phi(pts) <= hi(pts) * (1.0 + 1e-12))


def test_profile_round_trips_smooth_function():
    base = PNorm(2, 4.0)
    prof = Profile.from_function(
        base.generator, lambda pts: base(pts), resolution=256
    )
    rng = np.random.default_rng(4)
    pts = rng.normal(size=(50, 2)) * 3.0
    assert np.allclose(prof(pts), base(pts), rtol=1e-5)


def test_profile_needs_enough_samples():
    g = euclid2().generator
    with pytest.raises(DomainError):
        Profile(g, np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([1.0, 1.0]))


def test_count_strict_matches_brute_force_integer_form():
    phi = QuadraticForm(np.eye(2))
    pts = lattice_points(2, 12)
    vals = (pts**2).sum(axis=1)
    grid = np.vstack([pts, np.zeros((1, 2))])
    for r in (2.0, 5.0, 25.0, 100.0):
        assert phi.count_strict(grid, r) == brute_count(vals, r)


@settings(max_examples=25, deadline=None)
@given(
    r=st.floats(0.5, 6.0),
    p=st.sampled_from([1.0, 2.0, 3.0, 4.0]),
)
def test_count_strict_matches_brute_force_pnorm(r, p):
    phi = PNorm(2, p)
    pts = lattice_points(2, 8)
    grid = np.vstack([pts, np.zeros((1, 2))])
    vals = np.sum(np.abs(pts) ** p, axis=1) ** (1.0 / p)
    assert phi.count_strict(grid, r) == brute_count(vals, r)


def test_superellipse_exact_boundary_exclusion():
    # (3,4) lies exactly on the r=5 boundary of x^2+y^2 under root 2;
    # the strict count must exclude it whatever the float rounding says
    phi = AnisotropicSuperellipse([2.0, 2.0], 2.0)
    pts = np.array([[3.0, 4.0], [3.0, -4.0], [1.0, 1.0]])
    assert phi.count_strict(pts, 5.0) == 1
