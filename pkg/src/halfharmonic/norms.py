"""Computable function-space norms and geometric localization diagnostics.

Homogeneous Sobolev norms are spectral sums over nonzero modes; the dual
norm is taken on the mean-removed part with the mean magnitude reported
alongside.  Localized energies use Gagliardo double sums with the shortest
periodic distance and the diagonal excluded.  Ball and annulus quadratures
carry trapezoid half-weights on boundary points that fall on the grid, so
that e.g. the measure of a radius-r ball with r a grid multiple is exactly
2r.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .dyadic import _blocks, build_partition
from .spectral import ScalarField, TorusGrid, VectorField, MatrixField, analyze

__all__ = [
    "Region",
    "sobolev",
    "sobolev_total",
    "neg_half_dual",
    "gagliardo",
    "bmo",
    "besov_inf",
    "hardy",
    "local_l2_sq",
    "localization_sides",
    "poincare_ratio",
    "DualNorm",
    "LocalizationSides",
]

_BOUNDARY_RTOL = 1e-9


def _periodic_distance(x: np.ndarray, center: float, L: float) -> np.ndarray:
    return np.abs((x - center + 0.5 * L) % L - 0.5 * L)


class Region:
    """Set of grid points with quadrature weights (1 interior, 1/2 boundary)."""

    __slots__ = ("grid", "kind", "mask", "weights")

    def __init__(self, grid: TorusGrid, kind: str, mask: np.ndarray, weights: np.ndarray):
        mask = mask.copy()
        weights = weights.copy()
        mask.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "weights", weights)

    def __setattr__(self, name, value):
        raise AttributeError("Region is immutable")

    def __repr__(self):
        return f"Region({self.kind}, {int(np.sum(self.mask))} points)"

    @property
    def empty(self) -> bool:
        return not bool(np.any(self.mask))

    @classmethod
    def whole(cls, grid: TorusGrid) -> "Region":
        return cls(grid, "whole-torus", np.ones(grid.N, bool), np.ones(grid.N))

    @classmethod
    def ball(cls, grid: TorusGrid, center: float, radius: float) -> "Region":
        if not 0.0 < radius <= grid.L / 2.0:
            raise ValueError(f"ball radius must lie in (0, L/2], got {radius}")
        d = _periodic_distance(grid.x, center, grid.L)
        eps = _BOUNDARY_RTOL * grid.L
        mask = d <= radius + eps
        weights = np.where(mask, 1.0, 0.0)
        weights[np.abs(d - radius) <= eps] = 0.5
        return cls(grid, f"ball({center:g}, {radius:g})", mask, weights)

    @classmethod
    def annulus(cls, grid: TorusGrid, center: float, j: int) -> "Region":
        """Dyadic annulus: ball of radius 2**(j+1) minus ball of radius 2**(j-1)."""
        outer, inner = 2.0 ** (j + 1), 2.0 ** (j - 1)
        if outer > grid.L / 2.0:
            raise ValueError(f"annulus outer radius {outer} exceeds L/2")
        d = _periodic_distance(grid.x, center, grid.L)
        eps = _BOUNDARY_RTOL * grid.L
        mask = (d >= inner - eps) & (d <= outer + eps)
        weights = np.where(mask, 1.0, 0.0)
        weights[np.abs(d - inner) <= eps] = 0.5
        weights[np.abs(d - outer) <= eps] = 0.5
        return cls(grid, f"annulus({center:g}, j={j})", mask, weights)

    @classmethod
    def interval(cls, grid: TorusGrid, a: float, b: float) -> "Region":
        width = b - a
        if not 0.0 < width <= grid.L:
            raise ValueError(f"interval width must lie in (0, L], got {width}")
        y = (grid.x - a) % grid.L
        eps = _BOUNDARY_RTOL * grid.L
        mask = y <= width + eps
        weights = np.where(mask, 1.0, 0.0)
        weights[np.abs(y) <= eps] = 0.5
        weights[np.abs(y - width) <= eps] = 0.5
        return cls(grid, f"interval({a:g}, {b:g})", mask, weights)


# -- spectral norms -----------------------------------------------------------

def sobolev(f: ScalarField, s: float) -> float:
    """Homogeneous Sobolev seminorm of order s.

    ||f||^2 = L * sum_{k != 0} |xi_k|^(2s) |c_k|^2; zero iff f is constant.
    For s < 0 the mean is excluded (use neg_half_dual to see it reported).
    """
    s = float(s)
    if not -1.0 <= s <= 1.0:
        raise ValueError(f"order must lie in [-1, 1], got {s}")
    grid = f.grid
    c = analyze(f).coeffs
    absxi = np.abs(grid.xi)
    nz = absxi > 0.0
    total = grid.L * float(np.sum(absxi[nz] ** (2.0 * s) * np.abs(c[nz]) ** 2))
    return math.sqrt(total)


def sobolev_total(field, s: float) -> float:
    """Root sum of squares of the seminorm over all components/entries."""
    if isinstance(field, ScalarField):
        return sobolev(field, s)
    if isinstance(field, VectorField):
        comps = [field.component(i) for i in range(field.m)]
    elif isinstance(field, MatrixField):
        comps = [field.entry(i, j) for i in range(field.shape[0]) for j in range(field.shape[1])]
    else:
        raise TypeError(f"not a field: {type(field).__name__}")
    return math.sqrt(sum(sobolev(c, s) ** 2 for c in comps))


class DualNorm(NamedTuple):
    norm: float
    mean_abs: float


def neg_half_dual(f: ScalarField) -> DualNorm:
    """Dual-order norm of the mean-removed part, with |mean| reported.

    A nonzero mean means the field does not belong to the homogeneous dual
    space on the line; the torus zero mode is tracked separately.
    """
    mu = float(np.mean(f.values))
    return DualNorm(sobolev(f - mu, -0.5), abs(mu))


# -- double-integral seminorm -------------------------------------------------

_GAGLIARDO_CHUNK = 512


def gagliardo(f: ScalarField, r1: Region, r2: Region) -> float:
    """Gagliardo double sum of order 1/2 between two regions.

    value^2 = h^2 * sum_{x in r1} sum_{y in r2, y != x} (f(x)-f(y))^2 / d(x,y)^2
    with d the shortest periodic distance; the diagonal is excluded.
    """
    grid = f.grid
    if r1.grid != grid or r2.grid != grid:
        raise ValueError("regions live on a different grid")
    if r1.empty or r2.empty:
        return 0.0
    x1, v1 = grid.x[r1.mask], f.values[r1.mask]
    x2, v2 = grid.x[r2.mask], f.values[r2.mask]
    total = 0.0
    for start in range(0, x1.size, _GAGLIARDO_CHUNK):
        sl = slice(start, start + _GAGLIARDO_CHUNK)
        diff = x1[sl, None] - x2[None, :]
        d = np.abs((diff + 0.5 * grid.L) % grid.L - 0.5 * grid.L)
        num = (v1[sl, None] - v2[None, :]) ** 2
        same = d < 0.5 * grid.h
        d[same] = 1.0  # excluded below
        num[same] = 0.0
        total += float(np.sum(num / d**2))
    return grid.h * math.sqrt(total)


# -- oscillation norms --------------------------------------------------------

def _bmo_lengths(N: int) -> list[int]:
    lengths = []
    w = 2
    while w <= N // 2:
        lengths.append(w)
        w *= 2
    return lengths


def bmo(f: ScalarField, variant: str = "L2") -> float:
    """Mean-oscillation norm over dyadic-length arcs at every offset.

    Arcs have w in {2, 4, ..., N/2} consecutive samples (lengths 2h..L/2).
    The L2 variant is the John-Nirenberg-equivalent root mean square
    oscillation, exact via prefix sums; the L1 variant is the literal mean
    absolute oscillation and is restricted to N <= 4096.
    """
    N = f.grid.N
    a = f.values
    if variant == "L2":
        best = 0.0
        for w in _bmo_lengths(N):
            pad = np.concatenate([a, a[: w - 1]])
            c1 = np.concatenate([[0.0], np.cumsum(pad)])
            c2 = np.concatenate([[0.0], np.cumsum(pad * pad)])
            s1 = c1[w:] - c1[:-w]
            s2 = c2[w:] - c2[:-w]
            var = np.maximum(s2 / w - (s1 / w) ** 2, 0.0)
            best = max(best, float(np.max(var)))
        return math.sqrt(best)
    if variant == "L1":
        if N > 4096:
            raise ValueError("L1 oscillation is quadratic; N must be <= 4096")
        best = 0.0
        for w in _bmo_lengths(N):
            pad = np.concatenate([a, a[: w - 1]])
            windows = np.lib.stride_tricks.sliding_window_view(pad, w)
            means = windows.mean(axis=1)
            dev = np.abs(windows - means[:, None]).mean(axis=1)
            best = max(best, float(np.max(dev)))
        return best
    raise ValueError(f"variant must be 'L1' or 'L2', got {variant!r}")


def besov_inf(f: ScalarField) -> float:
    """Largest sup-norm over the dyadic blocks of f."""
    part = build_partition(f.grid)
    return float(np.max(np.abs(_blocks(f.values, part))))


def _square_function(fields: list[np.ndarray], grid: TorusGrid) -> np.ndarray:
    part = build_partition(grid)
    sq = np.zeros(grid.N)
    for vals in fields:
        centered = vals - np.mean(vals)
        sq += np.sum(_blocks(centered, part) ** 2, axis=0)
    return np.sqrt(sq)


def hardy(f) -> float:
    """Square-function norm h * sum_i sqrt(sum_j f_j(x_i)^2) of the
    mean-removed field; components of a vector field enter the same square
    root pointwise."""
    if isinstance(f, ScalarField):
        fields = [f.values]
    elif isinstance(f, VectorField):
        fields = [f.data[i] for i in range(f.m)]
    else:
        raise TypeError(f"not a scalar or vector field: {type(f).__name__}")
    return f.grid.h * float(np.sum(_square_function(fields, f.grid)))


# -- localized quantities -----------------------------------------------------

def local_l2_sq(f, region: Region) -> float:
    """Weighted squared mass h * sum w_i |f(x_i)|^2 over a region.

    Vector fields contribute the squared pointwise norm, so this is the
    localized energy density integral for gradient-type fields.
    """
    if isinstance(f, ScalarField):
        sq = f.values**2
    elif isinstance(f, VectorField):
        sq = np.einsum("an,an->n", f.data, f.data)
    else:
        raise TypeError(f"not a scalar or vector field: {type(f).__name__}")
    if region.grid != f.grid:
        raise ValueError("region lives on a different grid")
    return f.grid.h * float(np.dot(region.weights, sq))


class LocalizationSides(NamedTuple):
    lhs: float
    rhs: float
    ratio: float


def localization_sides(f: ScalarField, center: float) -> LocalizationSides:
    """Two sides of the annular localization of the order-1/2 energy.

    lhs is the squared Gagliardo energy of the unit interval
    (center-1, center+1); rhs sums the squared energies of the dyadic
    annuli around the center down to the grid scale.  A degenerate field
    (constant on the interval, or vanishing annular energy) yields
    ratio = nan.
    """
    grid = f.grid
    if grid.L < 4.0:
        raise ValueError("localization needs L >= 4 so the annuli fit the torus")
    interval = Region.interval(grid, center - 1.0, center + 1.0)
    lhs = gagliardo(f, interval, interval) ** 2
    j = 0
    rhs = 0.0
    while 2.0 ** (j - 1) >= 2.0 * grid.h:
        ann = Region.annulus(grid, center, j)
        rhs += gagliardo(f, ann, ann) ** 2
        j -= 1
    if rhs <= 0.0 or lhs <= 0.0:
        return LocalizationSides(lhs, rhs, math.nan)
    return LocalizationSides(lhs, rhs, lhs / rhs)


def poincare_ratio(f: ScalarField) -> float:
    """Compactly supported squared-mass to squared-energy ratio.

    Requires f to vanish outside (-1, 1) up to 1e-12 relative to its sup;
    returns nan for the zero field (0/0 flagged).  Invariant under scaling
    of f since both sides are quadratic.
    """
    grid = f.grid
    if grid.L < 4.0:
        raise ValueError("poincare check needs L >= 4 so (-2, 2) fits the torus")
    scale = float(np.max(np.abs(f.values)))
    inside = Region.interval(grid, -1.0, 1.0)
    outside_max = float(np.max(np.abs(f.values[~inside.mask]), initial=0.0))
    if outside_max > 1e-12 * max(1.0, scale):
        raise ValueError("field is not supported in (-1, 1)")
    if scale == 0.0:
        return math.nan
    lhs = local_l2_sq(f, Region.ball(grid, 0.0, 1.0))
    wide = Region.interval(grid, -2.0, 2.0)
    rhs = gagliardo(f, wide, wide) ** 2
    if rhs == 0.0:
        return math.nan
    return lhs / rhs
