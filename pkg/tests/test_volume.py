import math

import numpy as np
import pytest

from azeta.errors import BudgetExceededError, DomainError
from azeta.volume import (
    counting_limit_scan,
    lattice_count,
    volume_exp_integral,
    volume_monte_carlo,
)
from oracles import brute_count, lattice_points
from shapes import ABSVAL, DISC, SUPERELLIPSE

# 4 * int_0^1 (1 - x^12)^(1/18) dx, as a beta function
SUPERELLIPSE_VOLUME = (
    math.gamma(1 / 12) * math.gamma(19 / 18) / math.gamma(1 / 12 + 19 / 18) / 3.0
)


def test_exp_integral_interval():
    got = volume_exp_integral(ABSVAL)
    assert abs(got.value - 2.0) <= max(got.error, 1e-9)


def test_exp_integral_disc():
    got = volume_exp_integral(DISC)
    assert abs(got.value - math.pi) <= max(got.error, 1e-8)


def test_exp_integral_superellipse():
    got = volume_exp_integral(SUPERELLIPSE)
    assert abs(got.value - SUPERELLIPSE_VOLUME) <= max(got.error, 1e-6)


def test_monte_carlo_is_deterministic():
    a = volume_monte_carlo(DISC, 50_000, seed=7)
    b = volume_monte_carlo(DISC, 50_000, seed=7)
    assert a.value == b.value and a.error == b.error
    c = volume_monte_carlo(DISC, 50_000, seed=8)
    assert c.value != a.value


def test_monte_carlo_interval_covers_disc_area():
    got = volume_monte_carlo(DISC, 200_000, seed=3)
    assert abs(got.value - math.pi) <= got.error
    assert got.error < 0.05


def test_monte_carlo_rejects_empty_draw():
    with pytest.raises(DomainError):
        volume_monte_carlo(DISC, 0)
    with pytest.raises(DomainError):
        volume_monte_carlo(DISC, -10)


def test_lattice_count_worked_examples():
    # x^2 + y^2 < 2 keeps the origin and the four unit neighbours
    assert lattice_count(DISC, 2.0) == 5
    # |x| < 3.5 on the line keeps -3..3
    assert lattice_count(ABSVAL, 3.5) == 7
    # only the origin below every positive threshold under 1
    assert lattice_count(ABSVAL, 0.5) == 1
    assert lattice_count(SUPERELLIPSE, 0.5) == 1


def test_lattice_count_matches_brute_oracle():
    r = 37.0
    pts = lattice_points(2, 8)
    vals = np.sum(pts.astype(float) ** 2, axis=1)
    assert lattice_count(DISC, r) == brute_count(vals, r)


def test_lattice_count_rejects_bad_radius():
    for r in (0.0, -1.0, math.inf, math.nan):
        with pytest.raises(DomainError):
            lattice_count(DISC, r)


def test_lattice_count_budget():
    with pytest.raises(BudgetExceededError):
        lattice_count(DISC, 1e12)


def test_counts_monotone_in_radius():
    counts = [lattice_count(DISC, r) for r in (1.0, 2.0, 5.0, 25.0, 100.0)]
    assert counts == sorted(counts)
    assert counts[0] == 1


def test_counting_scan_rows_and_trend():
    scan = counting_limit_scan(DISC, r_schedule=[1e2, 1e3, 1e4])
    assert len(scan.rows) == 3
    r, count, ratio, target, dev = scan.rows[-1]
    assert r == 1e4 and count == lattice_count(DISC, 1e4)
    assert ratio == count / 1e4
    assert abs(target - math.pi) < 1e-6
    assert dev == abs(ratio - target)
    deviations = [row[4] for row in scan.rows]
    assert deviations[-1] < deviations[0]


def test_counting_scan_pole_side():
    scan = counting_limit_scan(ABSVAL, r_schedule=[100.0])
    sigmas = [row[0] for row in scan.pole_rows]
    assert sigmas == [1.5, 1.2, 1.1, 1.05]
    deviations = [row[3] for row in scan.pole_rows]
    assert deviations[-1] < deviations[0]
    # the scaled values head for alpha |B| = 2
    assert abs(scan.pole_rows[-1][1] - 2.0) < 0.15


def test_explicit_schedule_over_budget_raises():
    with pytest.raises(BudgetExceededError):
        counting_limit_scan(DISC, r_schedule=[1e12])


def test_default_schedule_trims_to_budget():
    # the 2e6-wide boxes at r = 1e6 fit for these shapes, so nothing raises
    scan = counting_limit_scan(ABSVAL)
    assert [row[0] for row in scan.rows] == [1e2, 1e3, 1e4, 1e5, 1e6]


def test_estimators_agree_on_disc():
    quad = volume_exp_integral(DISC)
    mc = volume_monte_carlo(DISC, 200_000, seed=3)
    ratio = lattice_count(DISC, 1e4) / 1e4
    assert abs(quad.value - mc.value) <= quad.error + mc.error
    assert abs(ratio - quad.value) < 0.07
