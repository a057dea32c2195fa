"""Lattice theta sums along a matrix flow.

theta_A(f, it) = sum over the integer lattice of f(t^A ω); the starred variant
drops ω = 0.  Sums run shell by shell in the sup norm.  Tails are controlled by
the smallest singular value of the flow matrix: every lattice point in shell m
lands at Euclidean norm >= sigma_min(t^A) m, where the summand's decay bound
takes over.  Bounds from kernels are certified; bounds from sampled transforms
use their fitted decay model and are flagged as estimates.

The transform law reads theta_A(g, i/t) = t^alpha theta_{A^T}(ghat, it) in the
convention ghat(y) = ∫ g(x) e^{-2πi <x,y>} dx.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, DivergenceError
from .matflow import GeneratorMatrix

__all__ = ["BoundedValue", "theta_star_matrix", "theta_phi", "jacobi_residual"]

RIGOROUS = "rigorous"
ESTIMATED = "estimated"


@dataclass(frozen=True)
class BoundedValue:
    """A number with an error bar and a statement of what the bar means."""

    value: float | complex
    error: float
    kind: str = RIGOROUS

    def __post_init__(self):
        if self.kind not in (RIGOROUS, ESTIMATED):
            raise DomainError(f"unknown bound kind {self.kind!r}")

    def combine_kind(self, other: "BoundedValue") -> str:
        return RIGOROUS if self.kind == other.kind == RIGOROUS else ESTIMATED


@lru_cache(maxsize=256)
def _shell_offsets(dim: int, m: int) -> tuple:
    """Integer vectors with sup norm exactly m, as a cached array."""
    if m == 0:
        return (np.zeros((0, dim), dtype=np.int64),)
    axes = [np.arange(-m, m + 1)] * dim
    grid = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grid], axis=-1)
    keep = np.max(np.abs(pts), axis=1) == m
    return (pts[keep],)


def _shell_count(dim: int, m: int) -> int:
    return (2 * m + 1) ** dim - (2 * m - 1) ** dim


def _lattice_tail(func, sigma_min: float, m0: int, dim: int):
    """Bound on sum of |f| over shells m >= m0; (bound, rigorous_flag)."""
    total = 0.0
    rigorous = True
    m = m0
    last = math.inf
    while m < m0 + 8000:
        bound, rig = func.decay_bound(sigma_min * m)
        rigorous = rigorous and rig
        term = _shell_count(dim, m) * bound
        total += term
        if term <= 1e-18 * (abs(total) + 1e-300) or term == 0.0:
            return total, rigorous
        if m > m0 + 4 and term >= last:
            # decay model not taking hold; give up on a finite bound
            return math.inf, False
        last = term
        m += 1
    # geometric-ish remainder from the last ratio
    ratio = term / last if last > 0 else 0.0
    if ratio < 0.999:
        total += term * ratio / (1.0 - ratio)
        return total, rigorous
    return math.inf, False


def _grid_sum_error(func, count_in_band: int) -> float:
    quad = getattr(func, "quad_error", 0.0)
    tail = getattr(func, "tail_error", 0.0)
    inherited = getattr(func, "inherited_error", 0.0)
    return count_in_band * (quad + inherited) + tail


def _tensor_theta_star(generator: GeneratorMatrix, func, t: float):
    """Fast path: diagonal flow and a transform with a tensor-grid evaluator.

    Sums ĝ over the full lattice box that the band admits, in one contraction
    per axis, then subtracts the ω = 0 term.  Points beyond the box are out of
    band; their total is bounded by the fitted decay model.
    """
    a_diag = np.diag(generator.entries)
    scales = np.exp(a_diag * math.log(t))
    band = func.band
    k_axis = np.floor(band / scales).astype(int)
    axes_points = [s * np.arange(-k, k + 1) for s, k in zip(scales, k_axis)]
    grid = func.evaluate_grid(axes_points)
    center = tuple(k for k in k_axis)
    total = complex(grid.sum() - grid[center])
    count = int(np.prod([2 * k + 1 for k in k_axis]) - 1)

    # out-of-box remainder via the product decay model
    tau = max(func.decay_tau, 1.5 * generator.dim)
    per_axis_in, per_axis_out = [], []
    for s, k, b in zip(scales, k_axis, band):
        j = np.arange(1, k + 4000)
        r = np.maximum(s * j / b, 1.0) ** (-tau / generator.dim)
        inside = 1.0 + 2.0 * float(np.sum(r[:k]))
        outside = 2.0 * float(np.sum(r[k:]))
        per_axis_in.append(inside)
        per_axis_out.append(outside)
    dropped = 0.0
    for i in range(generator.dim):
        others = math.prod(
            per_axis_in[j] + per_axis_out[j] for j in range(generator.dim) if j != i
        )
        dropped += per_axis_out[i] * others
    dropped *= func.edge_level

    err = _grid_sum_error(func, count) + dropped + abs(total.imag)
    return BoundedValue(float(total.real), float(err), ESTIMATED)


def theta_star_matrix(generator: GeneratorMatrix, func, t: float,
                      target: float = 1e-12, max_shell: int = 2000) -> BoundedValue:
    """sum over nonzero lattice points of f(t^A ω), with a tail bound.

    `func` needs evaluate_many(points) and decay_bound(radius); kernels give
    certified bounds, sampled transforms fitted ones.
    """
    if not (t > 0.0) or not math.isfinite(t):
        raise DomainError(f"flow time must be positive and finite, got {t}")
    if (
        generator.is_diagonal
        and hasattr(func, "evaluate_grid")
        and hasattr(func, "band")
    ):
        return _tensor_theta_star(generator, func, t)

    flow = generator.flow(t)
    sigma_min = float(np.linalg.svd(flow, compute_uv=False)[-1])
    dim = generator.dim
    total = 0.0
    evaluated = 0
    for m in range(1, max_shell + 1):
        shell = _shell_offsets(dim, m)[0]
        pts = shell.astype(float) @ flow.T
        vals = func.evaluate_many(pts)
        total += float(np.sum(vals))
        evaluated += shell.shape[0]
        tail, rigorous = _lattice_tail(func, sigma_min, m + 1, dim)
        if tail <= target:
            err = tail + _grid_sum_error(func, evaluated)
            kind = (
                RIGOROUS
                if rigorous and not hasattr(func, "quad_error")
                else ESTIMATED
            )
            return BoundedValue(total, err, kind)
    raise DivergenceError(
        f"theta sum did not meet target {target:g} within {max_shell} shells"
    )


def theta_phi(phi, w, target: float = 1e-13) -> BoundedValue:
    """theta(φ, iw) = 1 + sum over nonzero ω of e^{-w φ(ω)}, for Re w > 0.

    Accepts complex w in the right half plane (the value is then complex);
    the tail is certified from the lower growth bound of φ either way.
    """
    w = complex(w)
    if not (w.real > 0.0):
        raise DomainError(f"theta needs Re w > 0, got {w}")
    _, _, c3, _ = phi.growth()
    beta = phi.generator.beta
    dim = phi.dim
    total = 1.0 + 0.0j
    for m in range(1, 100000):
        shell = _shell_offsets(dim, m)[0].astype(float)
        vals = phi.evaluate_many(shell)
        total += complex(np.sum(np.exp(-w * vals)))
        # every shell j >= m+1 sits at φ >= c3 j^{1/beta}
        tail = 0.0
        j = m + 1
        while j < m + 20000:
            term = _shell_count(dim, j) * math.exp(
                -w.real * c3 * j ** (1.0 / beta)
            )
            tail += term
            if term <= 1e-18 * (tail + 1e-300):
                break
            j += 1
        if tail <= target:
            value = total.real if w.imag == 0.0 else total
            return BoundedValue(value, tail, RIGOROUS)
    raise DivergenceError("theta sum did not converge within the shell budget")


def jacobi_residual(generator: GeneratorMatrix, func, func_hat, t: float,
                    target: float = 1e-12) -> BoundedValue:
    """|theta_A(g, i/t) - t^alpha theta_{A^T}(ghat, it)| with its error budget.

    Zero in exact arithmetic; the returned error bar says how much of the
    observed residual the quadrature and tail estimates can explain.
    """
    if not (t > 0.0):
        raise DomainError(f"flow time must be positive, got {t}")
    left_star = theta_star_matrix(generator, func, 1.0 / t, target=target)
    right_star = theta_star_matrix(generator.transpose(), func_hat, t, target=target)
    g0 = float(getattr(func, "value_at_origin"))
    ghat0 = complex(func_hat.value_at_origin).real
    scale = t**generator.alpha
    left = g0 + left_star.value
    right = scale * (ghat0 + right_star.value)
    residual = abs(left - right)
    err = left_star.error + scale * right_star.error
    return BoundedValue(residual, err, left_star.combine_kind(right_star))
