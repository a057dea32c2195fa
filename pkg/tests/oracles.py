"""Independent reference implementations used to freeze expected values.

Everything here is deliberately naive: alternating-series acceleration for
the classical zeta and beta functions, raw lattice enumeration for counts
and sums.  The point is independence from the package internals, not speed.
"""

import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _chebyshev_weights(n: int) -> tuple:
    """The d_k acceleration weights for alternating Dirichlet series."""
    d = []
    acc = 0
    for j in range(n + 1):
        acc += (
            math.factorial(n + j - 1) * 4**j
            // (math.factorial(n - j) * math.factorial(2 * j))
        )
        d.append(n * acc)
    return tuple(d)


def _accelerated_alternating(term, n: int = 48) -> complex:
    """sum_{k>=0} (-1)^k term(k), accelerated; term(k) must be a moment
    sequence of a positive measure on [0,1], which k^{-s} powers are."""
    d = _chebyshev_weights(n)
    total = 0.0 + 0.0j
    for k in range(n):
        total += (-1) ** k * (d[k] - d[n]) * term(k)
    return -total / d[n]


def riemann_zeta(s, n: int = 48) -> complex:
    """Riemann zeta by eta-function acceleration plus reflection."""
    s = complex(s)
    if abs(s - 1.0) < 1e-12:
        raise ValueError("pole at s = 1")
    if s.real < 0.5:
        # reflect into the well-conditioned half plane
        reflected = riemann_zeta(1.0 - s, n)
        pref = (
            2.0**s
            * math.pi ** (s - 1.0)
            * np.sin(np.pi * s / 2.0)
            * complex(_gamma(1.0 - s))
        )
        return pref * reflected
    eta = _accelerated_alternating(lambda k: (k + 1.0) ** (-s), n)
    return eta / (1.0 - 2.0 ** (1.0 - s))


def dirichlet_beta(s, n: int = 48) -> complex:
    """beta(s) = sum (-1)^k (2k+1)^{-s}, accelerated."""
    s = complex(s)
    return _accelerated_alternating(lambda k: (2.0 * k + 1.0) ** (-s), n)


def _gamma(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0.0 and z.real > 0.0:
        return complex(math.gamma(z.real))
    from scipy.special import gamma as sp_gamma

    return complex(sp_gamma(z))


def lattice_points(dim: int, box: int) -> np.ndarray:
    """All integer vectors with sup norm <= box, origin excluded."""
    axes = [np.arange(-box, box + 1)] * dim
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    keep = np.any(grid != 0, axis=1)
    return grid[keep].astype(float)


def brute_zeta_sum(phi_values: np.ndarray, s: complex) -> complex:
    """sum phi(omega)^{-s} over precomputed nonzero-lattice values."""
    return complex(np.sum(phi_values.astype(complex) ** (-complex(s))))


def brute_count(phi_values: np.ndarray, r: float) -> int:
    """#{phi(omega) < r} over precomputed values, origin added back."""
    return 1 + int(np.count_nonzero(phi_values < r))


def theta3_sum(w: float, terms: int = 200) -> float:
    """Jacobi theta sum 1 + 2 sum e^{-k^2 w}, truncated far into the tail."""
    ks = np.arange(1, terms + 1, dtype=float)
    return 1.0 + 2.0 * float(np.sum(np.exp(-(ks**2) * w)))


def bernoulli_exact(count: int) -> list:
    """B_0..B_count as Fractions via the defining recursion."""
    from fractions import Fraction
    from math import comb

    out = [Fraction(1)]
    for m in range(1, count + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += comb(m + 1, j) * out[j]
        out.append(-acc / (m + 1))
    return out
