"""Small-w asymptotics of the theta function theta(phi, iw).

Shifting the Mellin contour of theta across the poles of Gamma(s) zeta(phi, s)
turns the pole at s = alpha into the leading power Gamma(alpha+1)|B| w^{-alpha},
the pole at s = 0 into a constant that cancels exactly (zeta(phi,0) = -1 against
the contribution of the omitted lattice origin), and the Gamma poles at the
negative integers into the correction series

    theta(phi, iw) ~ Gamma(alpha+1)|B| w^{-alpha}
                     + sum_{k>=1} (-1)^k zeta(phi,-k)/k! * w^k.

There is no constant term.  The remainder after N corrections is O(|w|^{N+1-eps})
uniformly on rays |arg w| <= pi/2 - delta, which is what remainder_check
measures: it never touches the contour integral, it just fits the decay of
|theta - expansion| on a ray.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from scipy.special import gamma as _gamma

from .errors import DomainError
from .homog import HomogeneousFunction
from .theta import theta_phi
from .volume import volume_exp_integral
from .zeta import _caches, zeta_negative_integers

__all__ = [
    "theta_expansion",
    "remainder_check",
    "bernoulli_identity_check",
    "bernoulli_numbers",
    "RemainderReport",
    "BernoulliReport",
]


def _expansion_coefficient(phi: HomogeneousFunction, k: int) -> complex:
    """(-1)^k zeta(phi,-k)/k!, computed once per phi and remembered."""
    cache = _caches(phi).setdefault("asymp_coeffs", {})
    if k not in cache:
        z = zeta_negative_integers(phi, k)
        cache[k] = (-1.0) ** k * z.value / math.factorial(k)
    return cache[k]


def _leading_constant(phi: HomogeneousFunction) -> float:
    cache = _caches(phi)
    if "asymp_leading" not in cache:
        vol = volume_exp_integral(phi)
        cache["asymp_leading"] = float(_gamma(phi.alpha + 1.0)) * vol.value
    return cache["asymp_leading"]


def theta_expansion(phi: HomogeneousFunction, w: complex, n_terms: int):
    """Truncated expansion at w, with the term-by-term breakdown.

    Returns (value, terms); terms[0] is the leading power, terms[k] the k-th
    correction, so value = sum(terms) and extending n_terms appends without
    changing what is already there.
    """
    w = complex(w)
    if not (w.real > 0.0):
        raise DomainError(f"theta expansion needs Re w > 0, got {w}")
    if n_terms < 0 or n_terms != int(n_terms):
        raise DomainError(f"term count must be a nonnegative integer, got {n_terms}")
    terms = [_leading_constant(phi) * w ** complex(-phi.alpha)]
    for k in range(1, int(n_terms) + 1):
        terms.append(_expansion_coefficient(phi, k) * w**k)
    return sum(terms), terms


@dataclass(frozen=True)
class RemainderReport:
    rows: list            # (|w|, remainder magnitude)
    slope: float          # fitted log-log decay over the smallest |w|
    threshold: float      # n_terms + 1 - eps - 0.15
    passed: bool


def remainder_check(phi: HomogeneousFunction, ray_angle: float, n_terms: int,
                    eps: float, magnitudes) -> RemainderReport:
    """Measure |theta - expansion| along the ray w = |w| e^{i angle}.

    The remainder should vanish like |w|^{n_terms+1-eps} as |w| -> 0; the
    fitted slope over the three smallest magnitudes is compared against that
    power, minus slack for the constant.
    """
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps must sit in (0,1), got {eps}")
    if abs(ray_angle) >= math.pi / 2:
        raise DomainError("the ray must stay in the open right half plane")
    mags = sorted(float(m) for m in magnitudes)
    if len(mags) < 3:
        raise DomainError("need at least three magnitudes for a slope fit")
    phase = cmath.exp(1j * ray_angle)
    rows = []
    for m in mags:
        w = m * phase
        theta = theta_phi(phi, w).value
        approx, _ = theta_expansion(phi, w, n_terms)
        rows.append((m, abs(theta - approx)))
    pts = [(math.log(m), math.log(max(e, 1e-300))) for m, e in rows[:3]]
    mean_x = sum(x for x, _ in pts) / 3.0
    mean_y = sum(y for _, y in pts) / 3.0
    slope = sum((x - mean_x) * (y - mean_y) for x, y in pts) / sum(
        (x - mean_x) ** 2 for x, _ in pts
    )
    threshold = n_terms + 1.0 - eps - 0.15
    return RemainderReport(rows, slope, threshold, slope >= threshold)


def bernoulli_numbers(count: int) -> list:
    """B_0 .. B_count as exact fractions, from the defining recursion
    sum_{j<=m} C(m+1, j) B_j = 0."""
    bs = [Fraction(1)]
    for m in range(1, count + 1):
        acc = Fraction(0)
        for j in range(m):
            acc += math.comb(m + 1, j) * bs[j]
        bs.append(-acc / (m + 1))
    return bs


@dataclass(frozen=True)
class BernoulliReport:
    rows: list             # (k, -(k+1) zeta(-k), exact B_{k+1}, deviation)
    max_deviation: float


def bernoulli_identity_check(k_max: int) -> BernoulliReport:
    """-(k+1) zeta(-k) against the Bernoulli numbers, k = 1..k_max.

    zeta(-k) here means the Riemann value, recovered from the n=1 lattice sum
    over phi = |x| as half of zeta(phi,-k); the comparison side is exact
    rational arithmetic.
    """
    from .homog import PNorm

    phi = PNorm(1, 1.0)
    exact = bernoulli_numbers(k_max + 1)
    rows = []
    worst = 0.0
    for k in range(1, k_max + 1):
        z = zeta_negative_integers(phi, k)
        lhs = -(k + 1) * (z.value.real / 2.0)
        rhs = float(exact[k + 1])
        dev = abs(lhs - rhs)
        worst = max(worst, dev)
        rows.append((k, lhs, rhs, dev))
    return BernoulliReport(rows, worst)
