"""Periodic grid, Fourier analysis and multiplier calculus on the 1-D torus.

Numeric conventions (part of the public contract):

* grid points ``x_i = i * L / N`` for ``i = 0 .. N-1``
* modes ordered ``k = -N/2, ..., N/2 - 1``; angular frequencies
  ``xi_k = 2*pi*k / L``
* forward transform scaled by ``1/N``:
  ``c_k = (1/N) * sum_i f_i exp(-1j * xi_k * x_i)``
* synthesis ``f_i = sum_k c_k exp(+1j * xi_k * x_i)``

Homogeneous symbols (``|xi|**(2s)``, ``-1j*sign(xi)``) annihilate the zero
mode; means are tracked separately where they matter.  Odd symbols (the
order-zero transform and the first derivative) also annihilate the unpaired
mode ``k = -N/2`` so that real fields map to real fields.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "TorusGrid",
    "ScalarField",
    "VectorField",
    "MatrixField",
    "Spectrum",
    "make_grid",
    "analyze",
    "synthesize",
    "apply_multiplier",
    "frac_laplacian",
    "riesz",
    "derivative",
    "integral",
    "mean",
    "random_field",
]


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


class TorusGrid:
    """Uniform periodic sampling of the circle of circumference L.

    Owns the mode table ``modes`` (integers -N/2 .. N/2-1), the angular
    frequencies ``xi = 2*pi*modes/L`` and the sample points ``x = i*h``.
    Immutable after construction and hashable by ``(N, L)``.
    """

    __slots__ = ("N", "L", "h", "x", "modes", "xi")

    def __init__(self, N: int, L: float = 2.0 * np.pi):
        if not isinstance(N, (int, np.integer)) or not _is_power_of_two(int(N)) or N < 8:
            raise ValueError(f"sample count must be a power of two >= 8, got {N!r}")
        L = float(L)
        if not np.isfinite(L) or L <= 0.0:
            raise ValueError(f"period must be positive and finite, got {L!r}")
        object.__setattr__(self, "N", int(N))
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "h", L / int(N))
        modes = np.arange(-N // 2, N // 2, dtype=np.int64)
        # 2*pi/L first so that xi is exactly integer-valued when L = 2*pi
        xi = modes * (2.0 * np.pi / L)
        x = np.arange(N, dtype=np.float64) * (L / int(N))
        for arr in (modes, xi, x):
            arr.setflags(write=False)
        object.__setattr__(self, "modes", modes)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "x", x)

    def __setattr__(self, name, value):
        raise AttributeError("TorusGrid is immutable")

    def __eq__(self, other):
        return isinstance(other, TorusGrid) and self.N == other.N and self.L == other.L

    def __hash__(self):
        return hash((self.N, self.L))

    def __repr__(self):
        return f"TorusGrid(N={self.N}, L={self.L!r})"

    def mode_index(self, k: int) -> int:
        """Array index of integer mode k in the -N/2 .. N/2-1 ordering."""
        if not -self.N // 2 <= k < self.N // 2:
            raise ValueError(f"mode {k} outside grid range")
        return int(k) + self.N // 2


def make_grid(N: int, L: float = 2.0 * np.pi) -> TorusGrid:
    """Build a periodic grid with N samples (power of two >= 8) and period L."""
    return TorusGrid(N, L)


def _check_values(grid: TorusGrid, values, count: int | None = None) -> np.ndarray:
    values = np.asarray(values, dtype=np.float64)
    n = count if count is not None else grid.N
    if values.shape != (n,):
        raise ValueError(f"expected {n} samples, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise ValueError("field samples must be finite")
    values = values.copy()
    values.setflags(write=False)
    return values


class ScalarField:
    """Real samples of a function on a TorusGrid."""

    __slots__ = ("grid", "values")

    def __init__(self, grid: TorusGrid, values):
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", _check_values(grid, values))

    def __setattr__(self, name, value):
        raise AttributeError("ScalarField is immutable")

    def __repr__(self):
        return f"ScalarField(N={self.grid.N}, max={np.max(np.abs(self.values)):.3g})"

    def _coerce(self, other):
        if isinstance(other, ScalarField):
            if other.grid != self.grid:
                raise ValueError("fields live on different grids")
            return other.values
        return float(other)

    def __add__(self, other):
        return ScalarField(self.grid, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ScalarField(self.grid, self.values - self._coerce(other))

    def __rsub__(self, other):
        return ScalarField(self.grid, self._coerce(other) - self.values)

    def __mul__(self, other):
        return ScalarField(self.grid, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return ScalarField(self.grid, self.values / self._coerce(other))

    def __neg__(self):
        return ScalarField(self.grid, -self.values)


class VectorField:
    """m real components on a shared grid, stored as an (m, N) array."""

    __slots__ = ("grid", "m", "data")

    def __init__(self, grid: TorusGrid, data):
        data = np.asarray(data, dtype=np.float64)
        if data.ndim != 2 or data.shape[1] != grid.N:
            raise ValueError(f"expected (m, {grid.N}) component array, got {data.shape}")
        if data.shape[0] < 1:
            raise ValueError("vector field needs at least one component")
        if not np.all(np.isfinite(data)):
            raise ValueError("field samples must be finite")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "m", data.shape[0])
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("VectorField is immutable")

    @classmethod
    def from_components(cls, components) -> "VectorField":
        components = list(components)
        grid = components[0].grid
        for c in components:
            if c.grid != grid:
                raise ValueError("components live on different grids")
        return cls(grid, np.stack([c.values for c in components]))

    def component(self, i: int) -> ScalarField:
        return ScalarField(self.grid, self.data[i])

    def dot(self, other: "VectorField") -> ScalarField:
        if other.grid != self.grid or other.m != self.m:
            raise ValueError("vector fields are not compatible")
        return ScalarField(self.grid, np.einsum("an,an->n", self.data, other.data))

    def pointwise_norm(self) -> np.ndarray:
        return np.sqrt(np.einsum("an,an->n", self.data, self.data))

    def __add__(self, other):
        if not isinstance(other, VectorField) or other.grid != self.grid or other.m != self.m:
            raise ValueError("vector fields are not compatible")
        return VectorField(self.grid, self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, VectorField) or other.grid != self.grid or other.m != self.m:
            raise ValueError("vector fields are not compatible")
        return VectorField(self.grid, self.data - other.data)

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            if other.grid != self.grid:
                raise ValueError("fields live on different grids")
            return VectorField(self.grid, self.data * other.values[None, :])
        return VectorField(self.grid, self.data * float(other))

    __rmul__ = __mul__

    def __neg__(self):
        return VectorField(self.grid, -self.data)


class MatrixField:
    """l x m matrix of real samples on a shared grid, stored as (l, m, N)."""

    __slots__ = ("grid", "shape", "data")

    def __init__(self, grid: TorusGrid, data):
        data = np.asarray(data, dtype=np.float64)
        if data.ndim != 3 or data.shape[2] != grid.N:
            raise ValueError(f"expected (l, m, {grid.N}) entry array, got {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise ValueError("matrix field needs at least a 1x1 shape")
        if not np.all(np.isfinite(data)):
            raise ValueError("field samples must be finite")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "shape", (data.shape[0], data.shape[1]))
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixField is immutable")

    def entry(self, i: int, j: int) -> ScalarField:
        return ScalarField(self.grid, self.data[i, j])

    def apply(self, v: VectorField) -> VectorField:
        """Pointwise matrix-vector product (Q v)_i = sum_j Q_ij v_j."""
        if v.grid != self.grid or v.m != self.shape[1]:
            raise ValueError(
                f"shape mismatch: {self.shape} matrix applied to {v.m}-vector"
            )
        return VectorField(self.grid, np.einsum("ijn,jn->in", self.data, v.data))

    def transpose(self) -> "MatrixField":
        return MatrixField(self.grid, np.swapaxes(self.data, 0, 1))

    def __add__(self, other):
        if not isinstance(other, MatrixField) or other.grid != self.grid or other.shape != self.shape:
            raise ValueError("matrix fields are not compatible")
        return MatrixField(self.grid, self.data + other.data)

    def __sub__(self, other):
        if not isinstance(other, MatrixField) or other.grid != self.grid or other.shape != self.shape:
            raise ValueError("matrix fields are not compatible")
        return MatrixField(self.grid, self.data - other.data)

    def __mul__(self, other):
        return MatrixField(self.grid, self.data * float(other))

    __rmul__ = __mul__


class Spectrum:
    """Complex Fourier coefficients c_k indexed by mode k = -N/2 .. N/2-1."""

    __slots__ = ("grid", "coeffs")

    def __init__(self, grid: TorusGrid, coeffs):
        coeffs = np.asarray(coeffs, dtype=np.complex128)
        if coeffs.shape != (grid.N,):
            raise ValueError(f"expected {grid.N} coefficients, got shape {coeffs.shape}")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        coeffs = coeffs.copy()
        coeffs.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("Spectrum is immutable")

    def coefficient(self, k: int) -> complex:
        return complex(self.coeffs[self.grid.mode_index(k)])


# -- transforms --------------------------------------------------------------

def analyze(f: ScalarField) -> Spectrum:
    """Forward transform, coefficient convention c_k = (1/N) sum f_i e^{-i xi_k x_i}."""
    c = np.fft.fftshift(np.fft.fft(f.values)) / f.grid.N
    return Spectrum(f.grid, c)


def synthesize(c: Spectrum) -> ScalarField:
    """Inverse transform; raises if the spectrum synthesizes to a complex field."""
    vals = np.fft.ifft(np.fft.ifftshift(c.coeffs)) * c.grid.N
    scale = max(1.0, float(np.max(np.abs(vals.real))))
    if np.max(np.abs(vals.imag)) > 1e-10 * scale:
        raise ValueError("complex output: spectrum is not Hermitian-symmetric")
    return ScalarField(c.grid, vals.real)


# -- multiplier machinery -----------------------------------------------------

def _multiplier_table(grid: TorusGrid, mu) -> np.ndarray:
    if callable(mu):
        table = np.asarray([mu(int(k)) for k in grid.modes], dtype=np.complex128)
    else:
        table = np.asarray(mu, dtype=np.complex128)
        if table.shape != (grid.N,):
            raise ValueError(f"multiplier table must have length {grid.N}")
    return table

def _check_hermitian(grid: TorusGrid, table: np.ndarray) -> None:
    scale = max(1.0, float(np.max(np.abs(table))))
    # pair mu(k) with mu(-k) for 0 < |k| < N/2; mode -N/2 must act real
    flipped = table[1:][::-1]
    if np.max(np.abs(table[1:] - np.conj(flipped))) > 1e-12 * scale:
        raise ValueError("complex output: multiplier is not Hermitian (mu(-k) != conj(mu(k)))")
    if abs(table[0].imag) > 1e-12 * scale:
        raise ValueError("complex output: multiplier at the unpaired mode -N/2 must be real")

def _apply_table(arr: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Multiply Fourier coefficients by a Hermitian table; last axis is space."""
    spec = np.fft.fftshift(np.fft.fft(arr, axis=-1), axes=-1)
    spec *= table
    return np.fft.ifft(np.fft.ifftshift(spec, axes=-1), axis=-1).real

def _lift(f, table: np.ndarray):
    if isinstance(f, ScalarField):
        return ScalarField(f.grid, _apply_table(f.values, table))
    if isinstance(f, VectorField):
        return VectorField(f.grid, _apply_table(f.data, table))
    if isinstance(f, MatrixField):
        return MatrixField(f.grid, _apply_table(f.data, table))
    raise TypeError(f"not a field: {type(f).__name__}")


def apply_multiplier(f, mu):
    """Apply a Fourier multiplier k -> mu(k) to a field.

    mu may be a callable on integer modes or a table aligned with grid.modes.
    It must satisfy mu(-k) = conj(mu(k)) and be real at the unpaired mode
    -N/2, so that real fields map to real fields.  Lifts componentwise to
    VectorField and MatrixField.
    """
    table = _multiplier_table(f.grid, mu)
    _check_hermitian(f.grid, table)
    return _lift(f, table)


def _fraclap_table(grid: TorusGrid, s: float) -> np.ndarray:
    absxi = np.abs(grid.xi)
    table = np.zeros(grid.N, dtype=np.complex128)
    nz = absxi > 0.0
    table[nz] = absxi[nz] ** (2.0 * s)
    return table

def _riesz_table(grid: TorusGrid) -> np.ndarray:
    table = -1j * np.sign(grid.modes).astype(np.complex128)
    table[0] = 0.0  # unpaired mode -N/2: odd symbol has no conjugate partner
    return table

def _derivative_table(grid: TorusGrid) -> np.ndarray:
    table = 1j * grid.xi.astype(np.complex128)
    table[0] = 0.0
    return table


def frac_laplacian(f, s: float):
    """Fractional Laplacian of order s: coefficients scale by |xi_k|**(2s).

    The zero mode is annihilated (homogeneous symbol); for s < 0 the result
    is therefore defined on the mean-removed part of the field.
    """
    s = float(s)
    if not -2.0 <= s <= 2.0:
        raise ValueError(f"order must lie in [-2, 2], got {s}")
    return _lift(f, _fraclap_table(f.grid, s))


def riesz(f):
    """Order-zero transform with symbol -1j*sign(k).

    Chosen so that riesz(derivative(f)) == frac_laplacian(f, 1/2) and
    riesz(riesz(f)) == -f on mean-zero fields.
    """
    return _lift(f, _riesz_table(f.grid))


def derivative(f):
    """Spectral first derivative (symbol 1j*xi_k, unpaired mode annihilated)."""
    return _lift(f, _derivative_table(f.grid))


def integral(f):
    """h * sum of samples; exact for trigonometric polynomials."""
    if isinstance(f, ScalarField):
        return f.grid.h * float(np.sum(f.values))
    if isinstance(f, VectorField):
        return f.grid.h * np.sum(f.data, axis=-1)
    if isinstance(f, MatrixField):
        return f.grid.h * np.sum(f.data, axis=-1)
    raise TypeError(f"not a field: {type(f).__name__}")


def mean(f):
    """Average of samples (= zero-mode coefficient)."""
    if isinstance(f, ScalarField):
        return float(np.mean(f.values))
    return np.mean(f.data, axis=-1)


def random_field(grid: TorusGrid, band: int, seed: int, mean_value: float = 0.0) -> ScalarField:
    """Seeded band-limited field with N-independent coefficients.

    Coefficients for modes 1..band are drawn from default_rng(seed), so the
    same (band, seed) names the same trigonometric polynomial at every
    resolution with N/2 > band.  Used by the experiment suites wherever
    refinement studies compare fixed continuum functions across grids.
    """
    band = int(band)
    if band < 1 or band >= grid.N // 2:
        raise ValueError(f"band must lie in [1, N/2), got {band}")
    rng = np.random.default_rng(seed)
    re = rng.standard_normal(band)
    im = rng.standard_normal(band)
    coeffs = np.zeros(grid.N, dtype=np.complex128)
    half = (re + 1j * im) / (2.0 * np.sqrt(band))
    for k in range(1, band + 1):
        coeffs[grid.mode_index(k)] = half[k - 1]
        coeffs[grid.mode_index(-k)] = np.conj(half[k - 1])
    coeffs[grid.mode_index(0)] = mean_value
    return synthesize(Spectrum(grid, coeffs))
