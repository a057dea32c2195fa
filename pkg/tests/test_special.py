import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from azeta.special import bernoulli_numbers, gamma, reciprocal_gamma

from oracles import bernoulli_exact


def test_gamma_real_matches_math():
    for x in (0.5, 1.0, 1.5, 11.0 / 6.0, 4.25, 9.0):
        assert gamma(x).imag == 0.0
        assert gamma(x).real == pytest.approx(math.gamma(x), rel=1e-13)


def test_gamma_half_integer_closed_form():
    assert gamma(0.5).real == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert gamma(2.5).real == pytest.approx(0.75 * math.sqrt(math.pi), rel=1e-13)


def test_gamma_functional_equation_complex():
    for z in (0.3 + 1.7j, 2.0 - 0.4j, -1.3 + 0.9j):
        assert gamma(z + 1) == pytest.approx(z * gamma(z), rel=1e-12)


def test_gamma_reflection():
    z = 0.3 + 0.4j
    lhs = gamma(z) * gamma(1 - z)
    rhs = math.pi / cmath.sin(math.pi * z)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_gamma_conjugate_symmetry():
    z = 1.7 + 2.3j
    assert gamma(np.conj(z)) == pytest.approx(np.conj(gamma(z)), rel=1e-14)


def test_reciprocal_gamma_vanishes_at_poles():
    for k in (0, -1, -2, -5):
        assert reciprocal_gamma(float(k)) == 0.0


def test_reciprocal_gamma_is_reciprocal_off_poles():
    for z in (2.5, 0.5 + 1.0j, -0.5):
        assert reciprocal_gamma(z) * gamma(z) == pytest.approx(1.0, rel=1e-12)


def test_bernoulli_first_values():
    got = bernoulli_numbers(8)
    want = [
        Fraction(1),
        Fraction(-1, 2),
        Fraction(1, 6),
        Fraction(0),
        Fraction(-1, 30),
        Fraction(0),
        Fraction(1, 42),
        Fraction(0),
        Fraction(-1, 30),
    ]
    assert got == want


def test_bernoulli_matches_oracle_recursion():
    assert bernoulli_numbers(20) == bernoulli_exact(20)
