"""Periodic sample grids, spectral transforms, and frequency projections.

Conventions used throughout the package:

* A grid has ``sample_count`` points per axis on the torus ``[0, period)``,
  with spacing ``dx = period / sample_count``.
* Frequencies are indexed by integers ``m`` in ``[-N/2, N/2)``; the mode with
  index ``m`` is ``exp(2*pi*i*m*x/period)``.  Scale parameters ``k`` always
  refer to frequency in cycles per unit length (so a dyadic interval of
  length ``2**-k`` pairs with frequencies near ``2**k`` regardless of the
  period).
* ``fourier_transform`` is the unitary DFT (``norm="ortho"``); spectral
  multipliers are applied with the plain fft/ifft pair, which is
  normalization-free.
* Inner products are hermitian: ``<u, v> = sum(u * conj(v)) * dx**dim``.
* The low-pass profile ``low_pass_profile`` equals 1 on ``[-1/2, 1/2]`` and
  vanishes outside ``[-1, 1]``; the band profile is the dilation difference
  ``low_pass_profile(u/2) - low_pass_profile(u)``, so consecutive low-pass
  projections telescope exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import AliasingError, ScaleBudgetError, ShapeError

__all__ = [
    "SampleGrid",
    "GridFunction",
    "SpectralMultiplier",
    "low_pass_profile",
    "band_profile",
    "window_profile",
    "fourier_transform",
    "littlewood_paley",
    "fractional_derivative",
    "max_scale",
    "scale_range",
]


@dataclass(frozen=True)
class SampleGrid:
    """Uniform periodic grid with a power-of-two number of samples per axis."""

    sample_count: int
    period_length: float = 1.0
    dimension: int = 1

    def __post_init__(self):
        n = self.sample_count
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError(f"sample_count must be a power of two >= 8, got {n}")
        if self.period_length <= 0:
            raise ValueError("period_length must be positive")
        if self.dimension not in (1, 2):
            raise ValueError("dimension must be 1 or 2")

    @property
    def spacing(self) -> float:
        return self.period_length / self.sample_count

    @property
    def cell_measure(self) -> float:
        return self.spacing ** self.dimension

    @property
    def spatial_shape(self) -> tuple[int, ...]:
        return (self.sample_count,) * self.dimension

    def points(self, axis: int = 0) -> np.ndarray:
        """Sample coordinates along one axis."""
        return np.arange(self.sample_count) * self.spacing

    def frequencies(self) -> np.ndarray:
        """Integer frequency indices in fft order."""
        return np.fft.fftfreq(self.sample_count, d=1.0 / self.sample_count)

    def log2_period(self) -> int:
        """Exponent kappa with period = 2**kappa; error if not a power of two."""
        kappa = round(np.log2(self.period_length))
        if not np.isclose(self.period_length, 2.0 ** kappa):
            raise ValueError(
                "dyadic machinery requires a power-of-two period, "
                f"got {self.period_length}"
            )
        return int(kappa)


@dataclass
class GridFunction:
    """Complex samples on a grid, with optional trailing vector axes.

    The sample array is laid out spatial-axes-first: shape
    ``grid.spatial_shape + vector_shape``.  Norm evaluation treats the
    spatial axes with measure ``dx`` per axis and vector axes with counting
    measure.
    """

    grid: SampleGrid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        expected = self.grid.spatial_shape
        if self.samples.shape[: self.grid.dimension] != expected:
            raise ShapeError(
                f"leading axes {self.samples.shape[:self.grid.dimension]} "
                f"do not match grid shape {expected}"
            )
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("samples must be finite")

    @property
    def vector_shape(self) -> tuple[int, ...]:
        return self.samples.shape[self.grid.dimension:]

    @property
    def spatial_axes(self) -> tuple[int, ...]:
        return tuple(range(self.grid.dimension))

    def copy(self) -> "GridFunction":
        return GridFunction(self.grid, self.samples.copy())

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.grid, self.samples + other.samples)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.grid, self.samples - other.samples)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            return GridFunction(self.grid, self.samples * other.samples)
        return GridFunction(self.grid, self.samples * other)

    __rmul__ = __mul__

    def inner(self, other: "GridFunction") -> complex:
        """Hermitian pairing <self, other> with the grid measure."""
        return complex(
            np.sum(self.samples * np.conj(other.samples)) * self.grid.cell_measure
        )

    def norm2(self) -> float:
        return float(
            np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.grid.cell_measure)
        )


def zeros(grid: SampleGrid, vector_shape: tuple[int, ...] = ()) -> GridFunction:
    return GridFunction(grid, np.zeros(grid.spatial_shape + vector_shape, dtype=complex))


def from_callable(grid: SampleGrid, fn) -> GridFunction:
    """Sample a callable of the coordinate(s)."""
    if grid.dimension == 1:
        return GridFunction(grid, np.asarray(fn(grid.points()), dtype=complex))
    x = grid.points()[:, None]
    y = grid.points()[None, :]
    return GridFunction(grid, np.asarray(fn(x, y), dtype=complex))


# ---------------------------------------------------------------------------
# Bump profiles
# ---------------------------------------------------------------------------

def _smoothstep(t: np.ndarray) -> np.ndarray:
    """C-infinity transition: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    a = np.zeros_like(t)
    b = np.zeros_like(t)
    pos = t > 0
    a[pos] = np.exp(-1.0 / t[pos])
    neg = t < 1
    b[neg] = np.exp(-1.0 / (1.0 - t[neg]))
    return a / (a + b)


def low_pass_profile(u) -> np.ndarray:
    """Smooth even bump: 1 on [-1/2, 1/2], supported in [-1, 1]."""
    au = np.abs(np.asarray(u, dtype=float))
    return _smoothstep(2.0 * (1.0 - au))


def band_profile(u) -> np.ndarray:
    """Annulus bump: low_pass(u/2) - low_pass(u), supported in 1/2 <= |u| <= 2."""
    u = np.asarray(u, dtype=float)
    return low_pass_profile(u / 2.0) - low_pass_profile(u)


def window_profile(u, lo: float, hi: float, margin: float = 1.0) -> np.ndarray:
    """Smooth bump supported in the sub-window of [lo, hi] shrunk by ``margin``.

    Equals 1 on the middle half of the (shrunk) window.
    """
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo) * margin
    return low_pass_profile((np.asarray(u, dtype=float) - center) / half)


# ---------------------------------------------------------------------------
# Scale budget
# ---------------------------------------------------------------------------

def max_scale(grid: SampleGrid) -> int:
    """Largest admissible scale k: the annulus at scale k must satisfy
    2**(k+1) cycles/unit <= Nyquist/2, i.e. 2**(k+1) * period <= N/2."""
    return int(np.floor(np.log2(grid.sample_count / grid.period_length))) - 2


def scale_range(grid: SampleGrid) -> range:
    """All scales from the single whole-torus block up to the budget."""
    kappa = grid.log2_period()
    return range(-kappa, max_scale(grid) + 1)


def _check_scale(grid: SampleGrid, k: int):
    if k > max_scale(grid):
        raise ScaleBudgetError(
            f"scale {k} exceeds the grid budget (max {max_scale(grid)} "
            f"for N={grid.sample_count}, period={grid.period_length})"
        )


# ---------------------------------------------------------------------------
# Transforms and multipliers
# ---------------------------------------------------------------------------

def fourier_transform(f: GridFunction, inverse: bool = False) -> GridFunction:
    """Unitary DFT along the spatial axes (vector axes pass through)."""
    axes = f.spatial_axes
    if inverse:
        out = np.fft.ifftn(f.samples, axes=axes, norm="ortho")
    else:
        out = np.fft.fftn(f.samples, axes=axes, norm="ortho")
    return GridFunction(f.grid, out)


@dataclass
class SpectralMultiplier:
    """Multiplier values indexed by integer frequency, stored in fft order."""

    grid: SampleGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values)
        if self.values.shape != (self.grid.sample_count,):
            raise ShapeError("multiplier length must equal sample_count")

    @classmethod
    def from_function(cls, grid: SampleGrid, fn) -> "SpectralMultiplier":
        return cls(grid, np.asarray(fn(grid.frequencies())))

    def apply(self, f: GridFunction, axis: int = 0) -> GridFunction:
        if axis >= f.grid.dimension:
            raise ShapeError(f"axis {axis} is not a spatial axis")
        spec = np.fft.fft(f.samples, axis=axis)
        shape = [1] * f.samples.ndim
        shape[axis] = self.grid.sample_count
        spec *= self.values.reshape(shape)
        return GridFunction(f.grid, np.fft.ifft(spec, axis=axis))


@lru_cache(maxsize=512)
def _projection_values(n: int, period: float, k: int, flavor: str) -> np.ndarray:
    m = np.fft.fftfreq(n, d=1.0 / n)
    u = m / (period * 2.0 ** k)
    if flavor == "P":
        vals = low_pass_profile(u)
    elif flavor == "Q":
        vals = band_profile(u)
    else:
        raise ValueError(f"flavor must be 'P' or 'Q', got {flavor!r}")
    vals.flags.writeable = False
    return vals


def littlewood_paley(
    f: GridFunction,
    k: int,
    flavor: str,
    shift_n: int = 0,
    axis: int = 0,
) -> GridFunction:
    """Frequency projection at scale k: low-pass ("P") or annulus ("Q").

    ``shift_n`` composes the projection with the modulation
    ``exp(2*pi*i*n*xi/2**k)``, i.e. translates the convolution kernel by
    ``n * 2**-k``; out-of-budget scales raise :class:`ScaleBudgetError`.
    """
    _check_scale(f.grid, k)
    grid = f.grid
    vals = _projection_values(grid.sample_count, grid.period_length, k, flavor)
    if shift_n != 0:
        m = grid.frequencies()
        # xi in cycles/unit is m/period; phase exp(2 pi i n xi / 2**k)
        vals = vals * np.exp(2j * np.pi * shift_n * m / (grid.period_length * 2.0 ** k))
    return SpectralMultiplier(grid, vals).apply(f, axis=axis)


def fractional_derivative(f: GridFunction, alpha: float, axis: int = 1) -> GridFunction:
    """Spectral multiplication by |m|**alpha along one spatial axis.

    ``axis`` is 1-based (1 or 2) to match the two-parameter derivative
    notation; frequency zero maps to zero for alpha > 0 and to itself for
    alpha = 0.
    """
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    if axis not in (1, 2):
        raise ValueError("axis must be 1 or 2")
    ax = axis - 1
    if ax >= f.grid.dimension:
        raise ShapeError(f"axis {axis} is not present on a {f.grid.dimension}d grid")
    m = np.abs(f.grid.frequencies())
    if alpha == 0:
        vals = np.ones_like(m)
    else:
        vals = m ** alpha
    return SpectralMultiplier(f.grid, vals).apply(f, axis=ax)


# ---------------------------------------------------------------------------
# Spectral support helpers
# ---------------------------------------------------------------------------

def spectrum(f: GridFunction) -> np.ndarray:
    """Plain (unnormalized) fft along spatial axes."""
    return np.fft.fftn(f.samples, axes=f.spatial_axes)


def band_limit(f: GridFunction, rel_tol: float = 1e-12) -> int:
    """Largest |m| carrying spectral mass above rel_tol of the peak."""
    spec = np.abs(spectrum(f))
    peak = spec.max()
    if peak == 0:
        return 0
    m = np.abs(f.grid.frequencies())
    limit = 0
    for ax in f.spatial_axes:
        mask = spec > rel_tol * peak
        other = tuple(a for a in range(spec.ndim) if a != ax)
        active = mask.any(axis=other) if other else mask
        if active.any():
            limit = max(limit, int(m[active].max()))
    return limit


def require_band_limited(f: GridFunction, max_index: int, rel_tol: float = 1e-12):
    b = band_limit(f, rel_tol)
    if b > max_index:
        raise AliasingError(
            f"spectrum reaches |m|={b}, beyond the admissible {max_index}"
        )
