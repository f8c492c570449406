"""Sphere-constrained gradient flow and its decay diagnostics.

The functional is the squared half-order energy of the map; the descent
direction is the pointwise-tangential part of twice the half-power
Laplacian, and steps are pointwise renormalized back to the sphere
(projection is exact for the sphere target).  Backtracking enforces strict
energy decrease; the stopping rule is the dual norm of the wedge form of
the critical-point equation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from .norms import Region, local_l2_sq
from .spectral import Spectrum, TorusGrid, VectorField, frac_laplacian, synthesize

__all__ = [
    "SphereField",
    "FlowParams",
    "FlowReport",
    "l_energy",
    "degree_map",
    "perturb",
    "random_unit_map",
    "tangential_gradient",
    "solve",
    "el_residual",
    "ElResidual",
    "morrey_profile",
    "fit_beta",
    "annuli_constant",
    "AnnuliReport",
    "decay_exponent",
    "DecayExponent",
    "seq_check",
    "SeqReport",
]

UNIT_TOL = 1e-12


class SphereField:
    """Vector field with pointwise unit norm (checked to 1e-12)."""

    __slots__ = ("vector",)

    def __init__(self, vector: VectorField):
        if vector.m < 2:
            raise ValueError("sphere-valued maps need at least two components")
        err = float(np.max(np.abs(vector.pointwise_norm() - 1.0)))
        if err > UNIT_TOL:
            raise ValueError(f"not unit-valued: max | |u|-1 | = {err:.3g}")
        object.__setattr__(self, "vector", vector)

    def __setattr__(self, name, value):
        raise AttributeError("SphereField is immutable")

    @property
    def grid(self) -> TorusGrid:
        return self.vector.grid

    @property
    def m(self) -> int:
        return self.vector.m

    @property
    def data(self) -> np.ndarray:
        return self.vector.data


def _as_unit_vector(u) -> VectorField:
    if isinstance(u, SphereField):
        return u.vector
    if isinstance(u, VectorField):
        err = float(np.max(np.abs(u.pointwise_norm() - 1.0)))
        if err > 1e-9:
            raise ValueError(f"not unit-valued: max | |u|-1 | = {err:.3g}")
        return u
    raise TypeError(f"expected a sphere or vector field, got {type(u).__name__}")


# -- energy and initial data --------------------------------------------------

def _energy(grid: TorusGrid, data: np.ndarray) -> float:
    # exactly-rounded reduction: late flow steps decrease the energy by less
    # than the noise of a pairwise sum, and monotonicity must survive that
    spec = np.fft.fftshift(np.fft.fft(data, axis=-1), axes=-1) / grid.N
    terms = np.abs(grid.xi) * (spec.real**2 + spec.imag**2)
    return grid.L * math.fsum(terms.ravel().tolist())


def _dual_sq(grid: TorusGrid, vals: np.ndarray) -> float:
    """Squared dual seminorm of the mean-removed samples."""
    c = np.fft.fftshift(np.fft.fft(vals)) / grid.N
    absxi = np.abs(grid.xi)
    nz = absxi > 0.0
    return grid.L * float(np.sum((c.real[nz] ** 2 + c.imag[nz] ** 2) / absxi[nz]))


def l_energy(u: SphereField) -> float:
    """Squared half-order seminorm summed over components (spectral form)."""
    return _energy(u.grid, u.data)


def degree_map(k: int, m: int, grid: TorusGrid) -> SphereField:
    """Equatorial winding map (cos(2 pi k x / L), sin(...), 0, ...)."""
    if m < 2:
        raise ValueError("need at least two components")
    theta = (2.0 * np.pi * int(k) / grid.L) * grid.x
    data = np.zeros((m, grid.N))
    data[0] = np.cos(theta)
    data[1] = np.sin(theta)
    return SphereField(VectorField(grid, data))


def _band_noise(grid: TorusGrid, m: int, band: int, seed: int) -> np.ndarray:
    """Band-limited (m, N) noise with N-independent seeded coefficients."""
    if not 1 <= band < grid.N // 2:
        raise ValueError(f"band must lie in [1, N/2), got {band}")
    rng = np.random.default_rng(seed)
    re = rng.standard_normal((m, band))
    im = rng.standard_normal((m, band))
    out = np.empty((m, grid.N))
    for a in range(m):
        coeffs = np.zeros(grid.N, dtype=np.complex128)
        half = (re[a] + 1j * im[a]) / (2.0 * np.sqrt(band))
        for k in range(1, band + 1):
            coeffs[grid.mode_index(k)] = half[k - 1]
            coeffs[grid.mode_index(-k)] = np.conj(half[k - 1])
        out[a] = synthesize(Spectrum(grid, coeffs)).values
    return out


def perturb(u: SphereField, amplitude: float, band: int, seed: int) -> SphereField:
    """Tangential band-limited noise followed by pointwise renormalization.

    The perturbation is projected onto the tangent planes before being
    added, so the pre-normalization length never drops below 1 and the
    unit constraint survives exactly.
    """
    amplitude = float(amplitude)
    if amplitude >= 0.5:
        raise ValueError(f"amplitude must be < 0.5, got {amplitude}")
    if amplitude < 0.0:
        raise ValueError("amplitude must be nonnegative")
    if amplitude == 0.0:
        return u
    grid = u.grid
    noise = _band_noise(grid, u.m, band, seed)
    udata = u.data
    noise = noise - np.einsum("an,an->n", noise, udata)[None, :] * udata
    scale = float(np.max(np.sqrt(np.einsum("an,an->n", noise, noise))))
    if scale == 0.0:
        return u
    v = udata + (amplitude / scale) * noise
    v = v / np.sqrt(np.einsum("an,an->n", v, v))[None, :]
    return SphereField(VectorField(grid, v))


def random_unit_map(grid: TorusGrid, m: int, seed: int, band: int = 8,
                    amplitude: float = 0.3) -> SphereField:
    """Seeded smooth unit map: a perturbed degree-1 equator winding."""
    return perturb(degree_map(1, m, grid), amplitude, band, seed)


# -- gradient and flow --------------------------------------------------------

def _half_laplacian(grid: TorusGrid, data: np.ndarray) -> np.ndarray:
    spec = np.fft.fftshift(np.fft.fft(data, axis=-1), axes=-1)
    spec *= np.abs(grid.xi)
    return np.fft.ifft(np.fft.ifftshift(spec, axes=-1), axis=-1).real


def tangential_gradient(u: SphereField) -> VectorField:
    """Pointwise-tangential part of the energy gradient 2 D^2 u."""
    grid = u.grid
    g = 2.0 * _half_laplacian(grid, u.data)
    g = g - np.einsum("an,an->n", g, u.data)[None, :] * u.data
    return VectorField(grid, g)


class ElResidual(NamedTuple):
    dual: float
    l2: float


def _wedge_rows(data: np.ndarray, lap: np.ndarray) -> np.ndarray:
    m = data.shape[0]
    rows = [data[i] * lap[j] - data[j] * lap[i] for i in range(m) for j in range(i + 1, m)]
    return np.stack(rows)


def el_residual(u: SphereField) -> ElResidual:
    """Size of the wedge form of the critical-point equation.

    dual sums the dual seminorms of the wedge components; l2 is the squared
    L2 mass h * sum |wedge|^2.  Both vanish on the winding maps.
    """
    grid = u.grid
    wedge = _wedge_rows(u.data, _half_laplacian(grid, u.data))
    dual = sum(math.sqrt(_dual_sq(grid, row)) for row in wedge)
    l2 = grid.h * float(np.sum(wedge**2))
    return ElResidual(dual, l2)


@dataclass(frozen=True)
class FlowParams:
    """Projected-descent controls; the actual initial step is step0/max|xi|."""

    step0: float = 1.0
    backtrack: float = 0.5
    decrease: float = 1e-4
    max_iters: int = 5000
    tol: float = 1e-6

    def __post_init__(self):
        if self.step0 <= 0 or self.decrease <= 0 or self.tol <= 0 or self.max_iters <= 0:
            raise ValueError("flow parameters must be positive")
        if not 0.0 < self.backtrack < 1.0:
            raise ValueError("backtracking factor must lie in (0, 1)")


@dataclass
class FlowReport:
    """Diagnostic trace; energies are the post-step values of accepted steps."""

    energies: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    accepted: list = field(default_factory=list)
    status: str = "max-iters"

    @property
    def iterations(self) -> int:
        return sum(self.accepted)


def solve(u0: SphereField, p: FlowParams = FlowParams()) -> tuple[SphereField, FlowReport]:
    """Run the projected gradient flow until the dual residual drops below tol.

    Accepted steps strictly decrease the energy (sufficient-decrease
    backtracking); rejected trial steps never mutate the state.  The step
    size doubles after each acceptance and halves on rejection, so it hovers
    at the stability boundary of the currently active modes.  Pointwise
    normalization is guarded: a trial whose pre-normalization length falls
    below 0.5 anywhere is rejected outright.
    """
    grid = u0.grid
    data = u0.data.copy()
    tau = p.step0 / float(np.max(np.abs(grid.xi)))
    energy = _energy(grid, data)
    report = FlowReport()
    report.energies.append(energy)
    lap = _half_laplacian(grid, data)
    wedge = _wedge_rows(data, lap)
    residual = sum(math.sqrt(_dual_sq(grid, row)) for row in wedge)
    report.residuals.append(residual)

    for _ in range(p.max_iters):
        if residual < p.tol:
            report.status = "converged"
            break
        g = 2.0 * lap
        g -= np.einsum("an,an->n", g, data)[None, :] * data
        gnorm2 = grid.h * float(np.sum(g * g))
        stepped = False
        for _ in range(200):
            v = data - tau * g
            vnorm = np.sqrt(np.einsum("an,an->n", v, v))
            if float(np.min(vnorm)) < 0.5:
                tau *= p.backtrack
                continue
            candidate = v / vnorm[None, :]
            cand_energy = _energy(grid, candidate)
            if cand_energy < energy and cand_energy <= energy - p.decrease * tau * gnorm2:
                stepped = True
                break
            tau *= p.backtrack
        if not stepped:
            report.steps.append(tau)
            report.accepted.append(False)
            break
        data, energy = candidate, cand_energy
        lap = _half_laplacian(grid, data)
        wedge = _wedge_rows(data, lap)
        residual = sum(math.sqrt(_dual_sq(grid, row)) for row in wedge)
        report.energies.append(energy)
        report.residuals.append(residual)
        report.steps.append(tau)
        report.accepted.append(True)
        tau *= 2.0
    else:
        report.status = "max-iters"
    if residual < p.tol:
        report.status = "converged"
    return SphereField(VectorField(grid, data)), report


# -- decay diagnostics ----------------------------------------------------------

def _default_radii(grid: TorusGrid) -> list[float]:
    radii = []
    r = grid.L / 4.0
    while r >= 4.0 * grid.h * (1.0 - 1e-12):
        radii.append(r)
        r /= 2.0
    return radii


def morrey_profile(u: SphereField, x0: float = 0.0,
                   radii: Sequence[float] | None = None) -> list[tuple[float, float]]:
    """Local energy growth E(r) = integral over B_r(x0) of |D u|^2.

    Radii default to the dyadic family L/4, L/8, ..., down to 4h; at least
    three are required so the growth exponent is fittable.
    """
    grid = u.grid
    if radii is None:
        radii = _default_radii(grid)
    radii = [float(r) for r in radii]
    if len(radii) < 3:
        raise ValueError("need at least 3 radii")
    for r in radii:
        if r < 4.0 * grid.h * (1.0 - 1e-12) or r > grid.L / 4.0 * (1.0 + 1e-12):
            raise ValueError(f"radius {r} outside [4h, L/4]")
    du = frac_laplacian(u.vector, 0.25)
    return [(r, local_l2_sq(du, Region.ball(grid, x0, r))) for r in radii]


def fit_beta(profile: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of log E against log r; nan if E vanishes."""
    if len(profile) < 3:
        raise ValueError("need at least 3 radii")
    r = np.array([p[0] for p in profile])
    e = np.array([p[1] for p in profile])
    if np.any(e <= 0.0):
        return math.nan
    return float(np.polyfit(np.log(r), np.log(e), 1)[0])


@dataclass(frozen=True)
class AnnuliReport:
    """Smallest admissible constant and the per-scale ratios behind it."""

    constant: float
    ratios: dict


def annuli_constant(u: SphereField, M=None, x0: float = 0.0,
                    k_range: Sequence[int] | None = None) -> AnnuliReport:
    """Ball-to-annuli energy comparison constant.

    For each scale k the left side is the energy of M D u on the ball of
    radius 2**k (minus a quarter of the plain energy when M is given; the
    plain energy alone when M is None, the combined form), and the right
    side is the half-power-weighted sum over the dyadic annuli from scale k
    up to the torus cutoff.  Returns the per-k ratios and their maximum.
    """
    grid = u.grid
    if k_range is None:
        k_lo = math.ceil(math.log2(8.0 * grid.h))
        k_hi = math.floor(math.log2(grid.L / 8.0))
        k_range = range(k_lo, k_hi + 1)
    k_range = list(k_range)
    if not k_range:
        raise ValueError("empty scale range")
    h_max = math.floor(math.log2(grid.L / 4.0))
    if max(k_range) > h_max:
        raise ValueError(f"scale {max(k_range)} exceeds the torus cutoff {h_max}")
    du = frac_laplacian(u.vector, 0.25)
    mdu = M.apply(du) if M is not None else None

    def ball_energy(f, r):
        return local_l2_sq(f, Region.ball(grid, x0, r))

    ann_du = {h: local_l2_sq(du, Region.annulus(grid, x0, h)) for h in range(min(k_range), h_max + 1)}
    ann_mdu = (
        {h: local_l2_sq(mdu, Region.annulus(grid, x0, h)) for h in ann_du}
        if mdu is not None
        else None
    )
    ratios = {}
    for k in k_range:
        if mdu is not None:
            lhs = ball_energy(mdu, 2.0**k) - 0.25 * ball_energy(du, 2.0**k)
            rhs = sum(2.0 ** ((k - h) / 2.0) * (ann_mdu[h] + ann_du[h]) for h in range(k, h_max + 1))
        else:
            lhs = ball_energy(du, 2.0**k)
            rhs = sum(2.0 ** ((k - h) / 2.0) * ann_du[h] for h in range(k, h_max + 1))
        ratios[k] = lhs / rhs if rhs > 0.0 else math.nan
    finite = [v for v in ratios.values() if not math.isnan(v)]
    constant = max(finite) if finite else math.nan
    return AnnuliReport(constant, ratios)


# -- dyadic decay sequences -----------------------------------------------------

class DecayExponent(NamedTuple):
    tau: float
    beta: float


def decay_exponent(C: float) -> DecayExponent:
    """Contraction factor and decay exponent implied by the comparison constant.

    tau = C (1 - 2^{-1/2}) / (C + 1) < 1 - 2^{-1/2} and
    beta = -log2(tau + 2^{-1/2}), which lies in (0, 1/2), decreases in C,
    and tends to 1/2 as C -> 0+ and to 0 as C -> infinity.
    """
    C = float(C)
    if C <= 0.0:
        raise ValueError("comparison constant must be positive")
    tau = C * (1.0 - 2.0**-0.5) / (C + 1.0)
    beta = -math.log2(tau + 2.0**-0.5)
    return DecayExponent(tau, beta)


@dataclass(frozen=True)
class SeqReport:
    tau: float
    beta: float
    c_prime: float
    hypothesis_violations: tuple
    conclusion_violations: tuple
    n_range: tuple

    @property
    def hypothesis_ok(self) -> bool:
        return not self.hypothesis_violations

    @property
    def conclusion_ok(self) -> bool:
        return not self.conclusion_violations


def seq_check(a_sq: Mapping[int, float], C: float,
              tail: tuple[int, float, float] | None = None) -> SeqReport:
    """Verify the dyadic-decay implication on a concrete sequence.

    ``a_sq`` maps index k to the squared term; ``tail`` = (start, first,
    ratio) appends the geometric squared tail first * ratio**(k - start) for
    k >= start, summed in closed form.  At every n <= 0 (the decay regime;
    mass is normalized to accumulate around index zero) the hypothesis
    sum_{k<=n} a_k^2 <= C * sum_{k>n} 2^{(n+1-k)/2} a_k^2  is tested, and
    the conclusion  A_n <= C' 2^{beta n}  with the terminal constant
    C' = tau * sum a^2.  Violations are listed, not raised.
    """
    tau, beta = decay_exponent(C)
    items = sorted((int(k), float(v)) for k, v in a_sq.items())
    if any(v < 0.0 for _, v in items):
        raise ValueError("squared terms must be nonnegative")
    if tail is not None:
        t_start, t_first, t_ratio = int(tail[0]), float(tail[1]), float(tail[2])
        if not 0.0 < t_ratio < 1.0:
            raise ValueError("tail ratio must lie in (0, 1)")
        if t_first < 0.0:
            raise ValueError("tail must be nonnegative")
        if items and items[-1][0] >= t_start:
            raise ValueError("finite part must end before the tail starts")

    def prefix(n: int) -> float:
        total = sum(v for k, v in items if k <= n)
        if tail is not None and n >= t_start:
            total += t_first * (1.0 - t_ratio ** (n - t_start + 1)) / (1.0 - t_ratio)
        return total

    def weighted_suffix(n: int) -> float:
        total = sum(2.0 ** ((n + 1 - k) / 2.0) * v for k, v in items if k > n)
        if tail is not None:
            k0 = max(t_start, n + 1)
            q = t_ratio / math.sqrt(2.0)
            total += (
                t_first
                * 2.0 ** ((n + 1 - k0) / 2.0)
                * t_ratio ** (k0 - t_start)
                / (1.0 - q)
            )
        return total

    total = prefix(10**9) if tail is None else (
        sum(v for _, v in items) + t_first / (1.0 - t_ratio)
    )
    c_prime = tau * total
    if items:
        lo = items[0][0] - 2
    elif tail is not None:
        lo = t_start - 2
    else:
        lo = -2
    lo = min(lo, 0)
    hi = 0
    slack = 1e-12 * max(1.0, total)
    hyp_bad, concl_bad = [], []
    for n in range(lo, hi + 1):
        a_n = prefix(n)
        if a_n > C * weighted_suffix(n) + slack:
            hyp_bad.append(n)
        if a_n > c_prime * 2.0 ** (beta * n) + slack:
            concl_bad.append(n)
    return SeqReport(tau, beta, c_prime, tuple(hyp_bad), tuple(concl_bad), (lo, hi))
