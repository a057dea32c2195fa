"""Test functions attached to φ and their sampled Fourier transforms.

Two kernel families are supported:

    power_exp:  g(x) = φ(x)^c e^{-φ(x)}   (c > 0, so g(0) = 0)
    exp_power:  g(x) = e^{-φ(x)^b}        (b > 0, g(0) = 1)

Both decay fast enough that g restricted to a certified box carries all but a
negligible tail.  The flow generator attached to a kernel is the one that makes
its theta transform law work out: φ's own generator for power_exp, and A/b for
exp_power (since φ^b scales with exponent 1 along the flow of A/b).

Fourier convention: ĝ(y) = ∫ g(x) e^{-2πi <x,y>} dx.  Transforms are computed by
trapezoid sums on symmetric odd grids, which the FFT evaluates on the dual grid;
off-grid values use the same trapezoid sum directly (no interpolation), so the
only errors are the domain tail and aliasing.  Aliasing is measured by halving
the spacing and comparing (the trapezoid error for a sampled Schwartz-type
function IS the aliasing sum, so this difference is the honest estimate).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .homog import (
    AnisotropicSuperellipse,
    HomogeneousFunction,
    HomogeneousPolynomial,
    PNorm,
    QuadraticForm,
    Scaled,
)
from .quadrature import box_integral

__all__ = ["Kernel", "SampledTransform", "SeparableTransform", "fourier_transform"]

_G_FLOOR = 1e-16  # relative floor for the real-space tail of g
_MAX_GRID_1D = 1 << 17
_MAX_GRID_ND = 4096


def _coordinate_monotone(phi: HomogeneousFunction) -> bool:
    """True when φ is nondecreasing in each |x_i|, so axis scans bound slabs."""
    if isinstance(phi, Scaled):
        return _coordinate_monotone(phi.base)
    if isinstance(phi, (PNorm, AnisotropicSuperellipse)):
        return True
    if isinstance(phi, QuadraticForm):
        off = phi.q_matrix - np.diag(np.diag(phi.q_matrix))
        return bool(np.all(off == 0.0))
    if isinstance(phi, HomogeneousPolynomial):
        return bool(
            np.all(phi.coefficients >= 0.0)
            and np.all(phi.exponents % 2 == 0)
        )
    return False


class Kernel:
    """g = φ^c e^{-φ} (kind "power_exp") or g = e^{-φ^b} (kind "exp_power")."""

    def __init__(self, phi: HomogeneousFunction, *, power: float | None = None,
                 root: float | None = None):
        if (power is None) == (root is None):
            raise DomainError("give exactly one of power (power_exp) or root (exp_power)")
        self.phi = phi
        if power is not None:
            if power <= 0:
                raise DomainError(f"power_exp kernel needs c > 0, got {power}")
            self.kind = "power_exp"
            self.power = float(power)
            self.generator = phi.generator
            self.value_at_origin = 0.0
        else:
            if root <= 0:
                raise DomainError(f"exp_power kernel needs b > 0, got {root}")
            self.kind = "exp_power"
            self.root = float(root)
            self.generator = phi.generator.scaled(1.0 / root)
            self.value_at_origin = 1.0

    @property
    def dim(self) -> int:
        return self.phi.dim

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        v = self.phi.evaluate_many(points)
        if self.kind == "power_exp":
            out = np.zeros_like(v)
            pos = v > 0.0
            # work in logs to dodge overflow of v^c for large shells
            out[pos] = np.exp(self.power * np.log(v[pos]) - v[pos])
            return out
        return np.exp(-np.clip(v, 0.0, 700.0) ** self.root)

    def _envelope(self, level: float) -> float:
        """sup of the radial factor over φ >= level."""
        if self.kind == "power_exp":
            c = self.power
            peak = max(level, c)
            return math.exp(c * math.log(peak) - peak) if peak > 0 else 0.0
        return math.exp(-(max(level, 0.0) ** self.root))

    def decay_bound(self, radius: float):
        """(bound on sup |g| over ||x||_2 >= radius, rigorous_flag)."""
        if radius <= 0.0:
            top = self._envelope(0.0)
            return (top, True)
        _, _, c3, _ = self.phi.growth()
        beta = self.phi.generator.beta
        if radius >= 1.0:
            level = c3 * radius ** (1.0 / beta)
        else:
            c1 = self.phi.growth()[0]
            gamma = self.phi.generator.gamma
            level = c1 * radius ** (1.0 / gamma)
        return (self._envelope(level), True)

    def axis_extent(self, axis: int, floor: float) -> float:
        """Half-width R on this axis so g is below floor outside |x_axis| < R."""
        if _coordinate_monotone(self.phi):
            e = np.zeros(self.dim)
            e[axis] = 1.0
            for r in np.geomspace(0.5, 1e4, 200):
                level = float(self.phi.evaluate_many((r * e)[None, :])[0])
                if self._envelope(level) <= floor:
                    return float(r)
            raise DomainError("kernel decays too slowly to box on this axis")
        for r in np.geomspace(0.5, 1e4, 200):
            bound, _ = self.decay_bound(r)
            if bound <= floor:
                return float(r)
        raise DomainError("kernel decays too slowly to box")

    def separable_factors(self):
        """For exp_power kernels with φ^b additive across coordinates, the 1D
        factor functions f_i with g(x) = prod f_i(x_i); else None."""
        if self.kind != "exp_power":
            return None
        phi, b = self.phi, self.root
        scale = 1.0
        if isinstance(phi, Scaled):
            scale = phi.factor**b
            phi = phi.base
        if isinstance(phi, AnisotropicSuperellipse) and phi.root == b:
            return [_Axis1D(lambda t, m=m, s=scale: np.exp(-s * np.abs(t) ** m))
                    for m in phi.powers]
        if isinstance(phi, QuadraticForm) and b == 1.0:
            # e^{-(xQx)^1} factors only when Q is diagonal
            off = phi.q_matrix - np.diag(np.diag(phi.q_matrix))
            if np.all(off == 0.0):
                return [_Axis1D(lambda t, q=q, s=scale: np.exp(-s * q * t * t))
                        for q in np.diag(phi.q_matrix)]
        if isinstance(phi, PNorm) and phi.p == b:
            return [_Axis1D(lambda t, p=phi.p, s=scale: np.exp(-s * np.abs(t) ** p))
                    for _ in range(phi.dim)]
        return None

    def integral_over_space(self, target: float = 1e-12):
        """∫ g over R^n by graded panel quadrature on the certified box."""
        if self.dim > 3:
            raise DomainError("space integrals are supported for n <= 3")
        g_top = self._envelope(0.0)
        radii = [self.axis_extent(i, _G_FLOOR * g_top) for i in range(self.dim)]
        return box_integral(self.evaluate_many, radii, target=target)


class _Axis1D:
    """Tiny adapter giving a 1D callable the evaluate_many(points) shape."""

    def __init__(self, fn):
        self._fn = fn

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self._fn(pts[:, 0])


# ---------------------------------------------------------------------------
# sampled transforms
# ---------------------------------------------------------------------------


def _fft_grid(values: np.ndarray, spacing: np.ndarray):
    """Trapezoid transform of symmetric odd-grid samples; returns (axes_y, hat)."""
    hat = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(values)))
    hat = hat * np.prod(spacing)
    axes_y = [
        np.fft.fftshift(np.fft.fftfreq(n, d=h))
        for n, h in zip(values.shape, spacing)
    ]
    return axes_y, hat


def _nudft_points(axes_x, values, spacing, points):
    """h^n * sum_j g_j e^{-2πi <x_j, y>} at arbitrary points, chunked."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    dim = len(axes_x)
    vol = float(np.prod(spacing))
    out = np.empty(pts.shape[0], dtype=complex)
    chunk = max(1, int(2_000_000 // max(1, values.shape[0])))
    for start in range(0, pts.shape[0], chunk):
        block = pts[start:start + chunk]
        p0 = np.exp(-2j * math.pi * np.outer(axes_x[0], block[:, 0]))
        if dim == 1:
            out[start:start + chunk] = values @ p0
        elif dim == 2:
            p1 = np.exp(-2j * math.pi * np.outer(axes_x[1], block[:, 1]))
            w = values @ p1
            out[start:start + chunk] = np.einsum("jm,jm->m", p0, w)
        elif dim == 3:
            p1 = np.exp(-2j * math.pi * np.outer(axes_x[1], block[:, 1]))
            p2 = np.exp(-2j * math.pi * np.outer(axes_x[2], block[:, 2]))
            w = np.tensordot(values, p2, axes=([2], [0]))
            w = np.einsum("jkm,km->jm", w, p1)
            out[start:start + chunk] = np.einsum("jm,jm->m", p0, w)
        else:
            raise DomainError("pointwise transform evaluation supports n <= 3")
    return vol * out


def _band_ratio_mesh(axes_y, band) -> np.ndarray:
    """max_i |y_i| / band_i over the tensor grid of the given dual axes."""
    parts = np.meshgrid(
        *[np.abs(np.asarray(a)) / b for a, b in zip(axes_y, band)], indexing="ij"
    )
    out = parts[0]
    for p in parts[1:]:
        out = np.maximum(out, p)
    return out


def _band_probes(band: np.ndarray) -> np.ndarray:
    """A fixed spread of in-band points for spacing comparisons."""
    dim = band.size
    rows = []
    for axis in range(dim):
        for frac in (0.25, 0.5, 0.75, 0.95):
            p = np.zeros(dim)
            p[axis] = frac * band[axis]
            rows.append(p)
            rows.append(-p)
    rng = np.random.Generator(np.random.Philox(0x5EED_BA4D))
    rows.append(rng.uniform(-0.9, 0.9, size=(24, dim)) * band[None, :])
    return np.vstack(rows)


class SampledTransform:
    """The Fourier transform of a function known by samples on a box grid.

    Stores the real-space samples; every evaluation is the same trapezoid sum
    (FFT on the dual grid, direct phase sums off-grid), so on-grid and off-grid
    values carry identical quadrature error.  Queries outside the trusted band
    evaluate to 0; `edge_level` and `decay_tau` describe what was dropped.
    """

    def __init__(self, axes_x, values, spacing, *, quad_error, tail_error,
                 band=None, inherited_error=0.0):
        self.axes_x = [np.asarray(a, dtype=float) for a in axes_x]
        self.values = np.asarray(values)
        self.spacing = np.asarray(spacing, dtype=float)
        self.dim = len(self.axes_x)
        axes_y, hat = _fft_grid(self.values, self.spacing)
        self.axes_y = axes_y
        imag_scale = float(np.max(np.abs(hat.imag)))
        self.real_even = imag_scale <= 1e-9 * max(1.0, float(np.max(np.abs(hat.real))))
        self.hat_grid = hat
        self.hat_zero = complex(hat[tuple(n // 2 for n in hat.shape)])
        if self.real_even:
            self.hat_zero = self.hat_zero.real
        nyquist = np.asarray([0.5 / h for h in self.spacing])
        self.band = np.minimum(band, nyquist) if band is not None else 0.5 * nyquist
        self.quad_error = float(quad_error)
        self.tail_error = float(tail_error)
        self.inherited_error = float(inherited_error)
        self.edge_level, self.decay_tau = self._fit_decay()

    # -- decay diagnostics ---------------------------------------------------

    def _fit_decay(self):
        """Level at the band boundary and the decay power beyond it.

        Both are taken over max-metric shells (max_i |y_i|/band_i = const) of
        the dual grid, so anisotropic transforms whose slow directions sit off
        the coordinate axes are measured where they are largest, not on the
        axis lines through the center.
        """
        mags = np.abs(self.hat_grid)
        ratio = _band_ratio_mesh(self.axes_y, self.band)
        top = float(mags.max())
        noise = 1e-13 * top
        reach = max(1.2, min(3.2, float(ratio.max())))
        edge_sel = (ratio >= 0.92) & (ratio <= 1.08)
        edge = float(mags[edge_sel].max()) if np.any(edge_sel) else float(mags.min())
        mids, levels = [], []
        shells = np.geomspace(0.45, reach, 16)
        for lo, hi in zip(shells[:-1], shells[1:]):
            sel = (ratio >= lo) & (ratio < hi)
            if not np.any(sel):
                continue
            level = float(mags[sel].max())
            if level > noise:
                mids.append(math.sqrt(lo * hi))
                levels.append(level)
        outside = [i for i, m in enumerate(mids) if m > 1.02]
        if len(outside) >= 3:
            pick = outside
        elif len(mids) >= 3:
            pick = range(len(mids))
        else:
            # below the noise floor within one shell of the edge: too steep to
            # measure, and any steep power is a safe stand-in for the model
            return edge, 12.0
        xs = np.log([mids[i] for i in pick])
        ys = np.log([levels[i] for i in pick])
        slope, _ = np.polyfit(xs, ys, 1)
        return edge, max(-float(slope), 1.1)

    def out_of_band_bound(self, ratio: float) -> float:
        """Heuristic bound on |ĝ(y)| when max_i |y_i|/band_i = ratio >= 1."""
        return self.edge_level * max(ratio, 1.0) ** (-self.decay_tau)

    def decay_bound(self, radius: float):
        """Fitted-model bound on sup |ĝ| over ||y||_2 >= radius; not rigorous."""
        ratio = radius / (math.sqrt(self.dim) * float(np.max(self.band)))
        if ratio <= 1.0:
            return (float(np.max(np.abs(self.hat_grid))), False)
        return (self.out_of_band_bound(ratio), False)

    # -- evaluation ------------------------------------------------------------

    def band_mask(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all(np.abs(pts) <= self.band[None, :], axis=1)

    def evaluate_points(self, points: np.ndarray) -> np.ndarray:
        """ĝ at arbitrary points (complex); 0 outside the trusted band."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dim:
            raise DomainError(f"query dimension {pts.shape[1]} != {self.dim}")
        out = np.zeros(pts.shape[0], dtype=complex)
        inside = self.band_mask(pts)
        if not np.any(inside):
            return out
        out[inside] = _nudft_points(self.axes_x, self.values, self.spacing,
                                    pts[inside])
        return out

    def evaluate_grid(self, axes_points) -> np.ndarray:
        """ĝ on a tensor grid given per-axis coordinates; complex array.

        Out-of-band coordinates on any axis give zero rows/columns.
        """
        axes_points = [np.asarray(a, dtype=float) for a in axes_points]
        if len(axes_points) != self.dim:
            raise DomainError("need one coordinate array per axis")
        phases = []
        masks = []
        for axis, q in enumerate(axes_points):
            mask = np.abs(q) <= self.band[axis]
            masks.append(mask)
            p = np.exp(-2j * math.pi * np.outer(self.axes_x[axis], q))
            p[:, ~mask] = 0.0
            phases.append(p)
        out = np.asarray(self.values, dtype=complex)
        for p in reversed(phases):
            # contract the last sample axis against its phase matrix
            out = np.tensordot(out, p, axes=([out.ndim - 1], [0]))
            out = np.moveaxis(out, -1, 0)
        # axes got cycled back into original order by the moveaxis trick
        return out * float(np.prod(self.spacing))

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Real-function view (used when ĝ itself is fed back through theta)."""
        vals = self.evaluate_points(points)
        return vals.real

    @property
    def value_at_origin(self):
        return self.hat_zero.real if self.real_even else self.hat_zero

    def transform(self) -> "SampledTransform":
        """Transform of this transform, from its own dual-grid samples.

        For an even real g this lands back on g (reflection), but computed by a
        second honest trapezoid pass rather than by the inversion identity.
        """
        spacing = np.asarray([a[1] - a[0] for a in self.axes_y])
        values = self.hat_grid.real if self.real_even else self.hat_grid
        return SampledTransform(
            self.axes_y,
            values,
            spacing,
            quad_error=self.quad_error,
            tail_error=self.tail_error + self.edge_level,
            inherited_error=self.quad_error + self.tail_error,
        )


class SeparableTransform:
    """Transform of a coordinate-product function, held as 1D factors."""

    def __init__(self, factors):
        self.factors = list(factors)
        self.dim = len(self.factors)
        self.band = np.asarray([float(f.band[0]) for f in self.factors])
        self.hat_zero = float(np.prod([f.hat_zero for f in self.factors]))
        scale = abs(self.hat_zero) if self.hat_zero else 1.0
        rel = 0.0
        for f in self.factors:
            rel += (f.quad_error + f.tail_error) / max(abs(f.hat_zero), 1e-300)
        self.quad_error = scale * rel
        self.tail_error = 0.0
        self.edge_level = float(np.prod([max(f.edge_level, 1e-300) for f in self.factors])) ** (1.0 / self.dim)
        self.decay_tau = float(min(f.decay_tau for f in self.factors))
        self.real_even = all(f.real_even for f in self.factors)

    def band_mask(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all(np.abs(pts) <= self.band[None, :], axis=1)

    def evaluate_points(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        out = np.ones(pts.shape[0], dtype=complex)
        for axis, f in enumerate(self.factors):
            out *= f.evaluate_points(pts[:, axis][:, None])
        return out

    def evaluate_grid(self, axes_points) -> np.ndarray:
        parts = [
            f.evaluate_points(np.asarray(q, dtype=float)[:, None])
            for f, q in zip(self.factors, axes_points)
        ]
        out = parts[0]
        for p in parts[1:]:
            out = np.multiply.outer(out, p)
        return out

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        return self.evaluate_points(points).real

    @property
    def value_at_origin(self):
        return self.hat_zero

    def out_of_band_bound(self, ratio: float) -> float:
        return self.edge_level * max(ratio, 1.0) ** (-self.decay_tau)

    def decay_bound(self, radius: float):
        ratio = radius / (math.sqrt(self.dim) * float(np.max(self.band)))
        if ratio <= 1.0:
            top = float(np.prod([np.max(np.abs(f.hat_grid)) for f in self.factors]))
            return (top, False)
        return (self.out_of_band_bound(ratio), False)

    def transform(self) -> "SeparableTransform":
        return SeparableTransform([f.transform() for f in self.factors])


# ---------------------------------------------------------------------------
# building transforms from kernels
# ---------------------------------------------------------------------------


def _odd_grid(radius: float, h: float):
    half = int(math.ceil(radius / h))
    return np.arange(-half, half + 1) * h


def _transform_1d_samples(fn, radius: float, band0: float, floor_rel: float,
                          max_n: int):
    """Adaptive 1D transform of a callable on [-R, R]; returns SampledTransform."""
    band = band0
    for _ in range(24):
        h = 1.0 / (4.0 * band)
        x = _odd_grid(radius, h)
        if x.size > max_n:
            break
        g = fn(x[:, None])
        axes_y, hat = _fft_grid(g, np.asarray([h]))
        scale = float(np.max(np.abs(hat)))
        j = int(np.argmin(np.abs(axes_y[0] - band)))
        if abs(hat[j]) <= floor_rel * scale:
            break
        band *= 1.6
    h_fine = 0.5 / (4.0 * band)
    x_fine = _odd_grid(radius, h_fine)
    if x_fine.size > max_n:
        x_fine = _odd_grid(radius, (2.0 * radius) / (max_n - 1))
        h_fine = float(x_fine[1] - x_fine[0])
    g_fine = fn(x_fine[:, None])
    # spacing comparison at fixed probe points: coarse = every other sample
    x_coarse = x_fine[::2]
    g_coarse = g_fine[::2]
    probes = _band_probes(np.asarray([band]))
    at_c = _nudft_points([x_coarse], g_coarse, [2.0 * h_fine], probes)
    at_f = _nudft_points([x_fine], g_fine, [h_fine], probes)
    quad = float(np.max(np.abs(at_f - at_c)))
    tail = float(abs(g_fine[0]) + abs(g_fine[-1])) * (2.0 * radius)
    return SampledTransform([x_fine], g_fine, [h_fine],
                            quad_error=quad, tail_error=tail,
                            band=np.asarray([band]))


def fourier_transform(kernel: Kernel, *, floor_rel: float | None = None):
    """Sampled ĝ for a kernel, with measured quadrature and tail estimates."""
    n = kernel.dim
    if n > 3:
        raise DomainError("transforms are supported for n <= 3")
    if floor_rel is None:
        floor_rel = 1e-13 if n == 1 else 3e-11

    factors = kernel.separable_factors()
    if factors is not None and n >= 2:
        g_top = 1.0
        parts = []
        for axis, f in enumerate(factors):
            r = kernel.axis_extent(axis, _G_FLOOR * g_top)
            parts.append(
                _transform_1d_samples(f.evaluate_many, r, 4.0, 1e-13, _MAX_GRID_1D)
            )
        return SeparableTransform(parts)

    g_top = kernel._envelope(0.0)
    radii = [kernel.axis_extent(i, _G_FLOOR * g_top) for i in range(n)]

    if n == 1:
        return _transform_1d_samples(kernel.evaluate_many, radii[0], 4.0,
                                     floor_rel, _MAX_GRID_1D)

    # full-grid route
    band = np.full(n, 2.0)
    for _ in range(14):
        h = 1.0 / (4.0 * band)
        axes = [_odd_grid(r, hi) for r, hi in zip(radii, h)]
        if any(a.size > _MAX_GRID_ND for a in axes):
            break
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([m.ravel() for m in mesh], axis=-1)
        g = kernel.evaluate_many(pts).reshape([a.size for a in axes])
        axes_y, hat = _fft_grid(g, h)
        mags = np.abs(hat)
        scale = float(mags.max())
        # trust is decided on the whole boundary shell of the band box, not on
        # the axis lines: anisotropic kernels can decay slowest off-axis
        ratio = _band_ratio_mesh(axes_y, band)
        shell = (ratio >= 0.85) & (ratio <= 1.0)
        level = float(mags[shell].max()) if np.any(shell) else 0.0
        if level <= floor_rel * scale:
            break
        worst = np.unravel_index(int(np.argmax(np.where(shell, mags, 0.0))),
                                 mags.shape)
        grew = False
        for axis in range(n):
            if abs(axes_y[axis][worst[axis]]) >= 0.6 * band[axis]:
                band[axis] *= 1.6
                grew = True
        if not grew:
            band *= 1.6
    # fine pass at half spacing
    h_fine = 0.5 / (4.0 * band)
    axes_f = [_odd_grid(r, hi) for r, hi in zip(radii, h_fine)]
    for axis in range(n):
        if axes_f[axis].size > 2 * _MAX_GRID_ND:
            axes_f[axis] = _odd_grid(radii[axis], (2.0 * radii[axis]) / (2 * _MAX_GRID_ND - 1))
    mesh = np.meshgrid(*axes_f, indexing="ij")
    pts = np.stack([m.ravel() for m in mesh], axis=-1)
    shape = [a.size for a in axes_f]
    g_fine = kernel.evaluate_many(pts).reshape(shape)
    spacing_f = np.asarray([a[1] - a[0] for a in axes_f])

    g_coarse = g_fine[tuple(slice(None, None, 2) for _ in range(n))]
    axes_c = [a[::2] for a in axes_f]
    probes = _band_probes(band)
    at_c = _nudft_points(axes_c, g_coarse, 2.0 * spacing_f, probes)
    at_f = _nudft_points(axes_f, g_fine, spacing_f, probes)
    quad = float(np.max(np.abs(at_f - at_c)))
    boundary = 0.0
    for axis in range(n):
        take = [slice(None)] * n
        take[axis] = 0
        boundary = max(boundary, float(np.max(np.abs(g_fine[tuple(take)]))))
    tail = boundary * float(np.prod(2.0 * np.asarray(radii)))
    return SampledTransform(axes_f, g_fine, spacing_f,
                            quad_error=quad, tail_error=tail, band=band)
