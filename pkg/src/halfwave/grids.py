"""Periodic grid, Fourier-multiplier fractional Laplacian, and inner products.

Conventions fixed once for the whole package:

* domain is ``[-L/2, L/2)`` sampled at ``x_j = -L/2 + j*h`` with ``h = L/N``;
* wavenumbers ``k_j = 2*pi*j/L`` in standard FFT ordering;
* forward FFT unnormalized, inverse carries ``1/N`` (numpy default);
* integrals are the uniform-weight sum ``h * sum(...)``, which is the
  trapezoid rule on a periodic grid (spectrally accurate for smooth data);
* ``(-Delta)^s`` is the Fourier multiplier ``|k|^(2s)`` with the zero mode
  mapped to exactly 0;
* the H^{1/2} inner product is
  ``<u,v> = integral((-Delta)^{1/4}u * (-Delta)^{1/4}v) + V0*integral(u*v)``,
  evaluated spectrally as ``(h/N) * sum((|k| + V0) * uhat * conj(vhat))``.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import GridMismatch, InvalidField

MIN_POINTS = 16


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on [-L/2, L/2)."""

    length: float
    n_points: int

    def __post_init__(self):
        if not (self.length > 0 and np.isfinite(self.length)):
            raise InvalidField(f"grid length must be positive, got {self.length}")
        if self.n_points < MIN_POINTS or self.n_points % 2 != 0:
            raise InvalidField(
                f"n_points must be an even integer >= {MIN_POINTS}, got {self.n_points}"
            )

    @property
    def spacing(self) -> float:
        return self.length / self.n_points

    @property
    def x(self) -> np.ndarray:
        xs = -0.5 * self.length + self.spacing * np.arange(self.n_points)
        xs.flags.writeable = False
        return xs

    @property
    def wavenumbers(self) -> np.ndarray:
        k = 2.0 * np.pi * np.fft.fftfreq(self.n_points, d=self.spacing)
        k.flags.writeable = False
        return k

    def index_of(self, x0: float) -> int:
        """Nearest grid index to the physical point x0 (periodic wrap)."""
        j = int(round((x0 + 0.5 * self.length) / self.spacing))
        return j % self.n_points

    def __eq__(self, other):
        return (
            isinstance(other, Grid)
            and self.n_points == other.n_points
            and self.length == other.length
        )

    def __hash__(self):
        return hash((self.length, self.n_points))


class Field:
    """Real sample vector living on a Grid, with a lazy spectral cache.

    Values are frozen at construction; all operations return new fields, so
    the cached spectrum can never go stale and instances are safe to share
    across threads.
    """

    __slots__ = ("grid", "_values", "_hat")

    def __init__(self, grid: Grid, values):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (grid.n_points,):
            raise InvalidField(
                f"expected {grid.n_points} samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidField("field contains NaN/Inf samples")
        values = values.copy()
        values.flags.writeable = False
        self.grid = grid
        self._values = values
        self._hat = None

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def hat(self) -> np.ndarray:
        """Unnormalized forward FFT of the samples (cached)."""
        if self._hat is None:
            self._hat = np.fft.fft(self._values)
            self._hat.flags.writeable = False
        return self._hat

    # -- algebra ------------------------------------------------------------

    def _check_same_grid(self, other: "Field"):
        if self.grid != other.grid:
            raise GridMismatch(
                f"grids differ: (L={self.grid.length}, N={self.grid.n_points}) vs "
                f"(L={other.grid.length}, N={other.grid.n_points})"
            )

    def __add__(self, other):
        self._check_same_grid(other)
        return Field(self.grid, self._values + other._values)

    def __sub__(self, other):
        self._check_same_grid(other)
        return Field(self.grid, self._values - other._values)

    def __mul__(self, c):
        return Field(self.grid, self._values * float(c))

    __rmul__ = __mul__

    def __neg__(self):
        return Field(self.grid, -self._values)

    def shift(self, n_cells: int) -> "Field":
        """Circular shift by an integer number of cells."""
        return Field(self.grid, np.roll(self._values, n_cells))

    def __repr__(self):
        return (
            f"Field(L={self.grid.length}, N={self.grid.n_points}, "
            f"linf={np.max(np.abs(self._values)):.3e})"
        )


@dataclass(frozen=True)
class SpectralExponent:
    """Order s of the fractional Laplacian (-Delta)^s, s in (0,1)."""

    s: float = 0.5

    def __post_init__(self):
        if not (0.0 < self.s < 1.0):
            raise InvalidField(f"spectral exponent must lie in (0,1), got {self.s}")


HALF = SpectralExponent(0.5)
QUARTER = SpectralExponent(0.25)


def apply_fractional_laplacian(u: Field, s: SpectralExponent = HALF) -> Field:
    """Apply (-Delta)^s as the Fourier multiplier |k|^(2s); zero mode -> 0."""
    k = u.grid.wavenumbers
    mult = np.abs(k) ** (2.0 * s.s)
    mult[0] = 0.0
    out = np.fft.ifft(mult * u.hat).real
    return Field(u.grid, out)


def multiplier_solve(u: Field, shift: float) -> Field:
    """Invert ((-Delta)^{1/2} + shift) spectrally; requires shift > 0."""
    if shift <= 0:
        raise InvalidField(f"operator shift must be positive, got {shift}")
    k = u.grid.wavenumbers
    out = np.fft.ifft(u.hat / (np.abs(k) + shift)).real
    return Field(u.grid, out)


def l2_inner(u: Field, v: Field) -> float:
    u._check_same_grid(v)
    return u.grid.spacing * float(np.dot(u.values, v.values))


def l2_norm(u: Field) -> float:
    return float(np.sqrt(u.grid.spacing) * np.linalg.norm(u.values))


def linf_norm(u: Field) -> float:
    return float(np.max(np.abs(u.values)))


def integrate(u: Field) -> float:
    return u.grid.spacing * float(np.sum(u.values))


def h_half_inner(u: Field, v: Field, V0: float) -> float:
    """H^{1/2} inner product: Gagliardo seminorm pairing + V0 * L2 pairing."""
    u._check_same_grid(v)
    if not V0 > 0:
        raise InvalidField(f"V0 must be positive, got {V0}")
    g = u.grid
    k = np.abs(g.wavenumbers)
    val = np.sum((k + V0) * u.hat * np.conj(v.hat)).real
    return float(val * g.spacing / g.n_points)


def h_half_norm(u: Field, V0: float) -> float:
    return float(np.sqrt(max(h_half_inner(u, u, V0), 0.0)))


def seminorm_sq(u: Field) -> float:
    """Squared Gagliardo seminorm ||(-Delta)^{1/4} u||_{L2}^2, spectrally."""
    g = u.grid
    k = np.abs(g.wavenumbers)
    val = np.sum(k * np.abs(u.hat) ** 2).real
    return float(val * g.spacing / g.n_points)


# -- serialization ----------------------------------------------------------

_HEADER = struct.Struct("<dQ")


def write_field_binary(u: Field, path) -> None:
    """Little-endian dump: header (L as f64, N as u64) + N f64 samples."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(u.grid.length, u.grid.n_points))
        fh.write(u.values.astype("<f8").tobytes())


def read_field_binary(path) -> Field:
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) != _HEADER.size:
            raise InvalidField(f"truncated field file: {path}")
        length, n = _HEADER.unpack(raw)
        body = fh.read()
    values = np.frombuffer(body, dtype="<f8")
    if values.size != n:
        raise InvalidField(
            f"field file {path} declares {n} samples but contains {values.size}"
        )
    return Field(Grid(length, int(n)), values.astype(np.float64))


def write_field_csv(u: Field, path) -> None:
    """Two-column CSV (x, value) for plotting."""
    with open(path, "w") as fh:
        fh.write("x,value\n")
        for x, val in zip(u.grid.x, u.values):
            fh.write(f"{float(x)!r},{float(val)!r}\n")
