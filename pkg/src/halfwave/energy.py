"""The coupled-pair energy, its splitting, and its first derivative.

The energy of a pair w = (u, v) is

    J(w) = <u, v>_{1/2,V} - integral(F(u) + G(v)),

whose quadratic part is positive on the diagonal subspace {(a, a)} and
negative on the antidiagonal {(b, -b)}.  The derivative is exposed in two
forms: as strong-form L2 residuals of the coupled Euler-Lagrange system
(for physics checks) and as the Riesz representative in the pair inner
product (for preconditioned optimization) -- the two differ by one solve
with the multiplier (|k| + V)^{-1}.

The potential V may be a positive scalar (autonomous problem) or a sample
vector on the grid (rescaled semiclassical problem).  Riesz solves are a
pure Fourier multiplier in the scalar case and a preconditioned CG solve in
the varying case.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from .errors import GridMismatch, InvalidField
from .families import NonlinearityFamily
from .grids import Field, Grid

PotentialValues = Union[float, np.ndarray]


class PairField:
    """w = (u, v) on a shared grid."""

    __slots__ = ("u", "v")

    def __init__(self, u: Field, v: Field):
        if u.grid != v.grid:
            raise GridMismatch("pair components live on different grids")
        self.u = u
        self.v = v

    @property
    def grid(self) -> Grid:
        return self.u.grid

    def __add__(self, other: "PairField") -> "PairField":
        return PairField(self.u + other.u, self.v + other.v)

    def __sub__(self, other: "PairField") -> "PairField":
        return PairField(self.u - other.u, self.v - other.v)

    def __mul__(self, c: float) -> "PairField":
        return PairField(self.u * c, self.v * c)

    __rmul__ = __mul__

    def __neg__(self) -> "PairField":
        return PairField(-self.u, -self.v)

    def shift(self, n_cells: int) -> "PairField":
        return PairField(self.u.shift(n_cells), self.v.shift(n_cells))

    @classmethod
    def zero(cls, grid: Grid) -> "PairField":
        z = Field(grid, np.zeros(grid.n_points))
        return cls(z, z)


@dataclass(frozen=True)
class Decomposition:
    """w = plus + minus with plus = (a, a) and minus = (b, -b)."""

    plus: PairField
    minus: PairField


def decompose(w: PairField) -> Decomposition:
    a = 0.5 * (w.u.values + w.v.values)
    b = 0.5 * (w.u.values - w.v.values)
    fa = Field(w.grid, a)
    fb = Field(w.grid, b)
    return Decomposition(PairField(fa, fa), PairField(fb, -fb))


def _potential_array(V: PotentialValues, grid: Grid) -> np.ndarray:
    V = np.asarray(V, dtype=float)
    if V.ndim == 0:
        if not V > 0:
            raise InvalidField(f"potential must be positive, got {V}")
        return V
    if V.shape != (grid.n_points,):
        raise InvalidField(
            f"potential samples must match grid (N={grid.n_points}), got {V.shape}"
        )
    if not np.all(V > 0):
        raise InvalidField("potential samples must be positive")
    return V


def weighted_inner(u: Field, v: Field, V: PotentialValues) -> float:
    """<u,v> = integral((-Delta)^{1/4}u (-Delta)^{1/4}v) + integral(V u v)."""
    u._check_same_grid(v)
    g = u.grid
    Va = _potential_array(V, g)
    k = np.abs(g.wavenumbers)
    semi = np.sum(k * u.hat * np.conj(v.hat)).real * g.spacing / g.n_points
    return float(semi + g.spacing * np.sum(Va * u.values * v.values))


def weighted_norm(u: Field, V: PotentialValues) -> float:
    return float(np.sqrt(max(weighted_inner(u, u, V), 0.0)))


def pair_inner(w1: PairField, w2: PairField, V: PotentialValues) -> float:
    return weighted_inner(w1.u, w2.u, V) + weighted_inner(w1.v, w2.v, V)


def pair_norm(w: PairField, V: PotentialValues) -> float:
    return float(np.sqrt(max(pair_inner(w, w, V), 0.0)))


def riesz_solve(rhs: np.ndarray, grid: Grid, V: PotentialValues, tol: float = 1e-13) -> np.ndarray:
    """Invert (-Delta)^{1/2} + V; exact multiplier for scalar V, CG otherwise."""
    Va = _potential_array(V, grid)
    k = np.abs(grid.wavenumbers)
    if Va.ndim == 0:
        return np.fft.ifft(np.fft.fft(rhs) / (k + float(Va))).real

    vbar = float(np.mean(Va))
    n = grid.n_points

    def apply_op(x):
        return np.fft.ifft(k * np.fft.fft(x)).real + Va * x

    def apply_prec(x):
        return np.fft.ifft(np.fft.fft(x) / (k + vbar)).real

    op = LinearOperator((n, n), matvec=apply_op)
    prec = LinearOperator((n, n), matvec=apply_prec)
    x0 = apply_prec(rhs)
    sol, info = cg(op, rhs, x0=x0, rtol=tol, atol=0.0, M=prec, maxiter=400)
    if info != 0:
        raise InvalidField(f"Riesz CG solve did not converge (info={info})")
    return sol


def phi(w: PairField, fam: NonlinearityFamily) -> float:
    """Potential term integral(F(u) + G(v)); guards the exp argument."""
    fam.guard_amplitude(w.u.values, "u")
    fam.guard_amplitude(w.v.values, "v")
    dens = fam.F(w.u.values) + fam.G(w.v.values)
    return float(w.grid.spacing * np.sum(dens))


def phi_prime_pairing(w: PairField, fam: NonlinearityFamily) -> float:
    """<Phi'(w), w> = integral(f(u)u + g(v)v)."""
    fam.guard_amplitude(w.u.values, "u")
    fam.guard_amplitude(w.v.values, "v")
    dens = fam.f(w.u.values) * w.u.values + fam.g(w.v.values) * w.v.values
    return float(w.grid.spacing * np.sum(dens))


def energy(w: PairField, fam: NonlinearityFamily, V: PotentialValues) -> float:
    return weighted_inner(w.u, w.v, V) - phi(w, fam)


def _strong_residuals(w: PairField, fam: NonlinearityFamily, V: PotentialValues):
    g = w.grid
    Va = _potential_array(V, g)
    k = np.abs(g.wavenumbers)
    au = np.fft.ifft(k * w.u.hat).real
    av = np.fft.ifft(k * w.v.hat).real
    fam.guard_amplitude(w.u.values, "u")
    fam.guard_amplitude(w.v.values, "v")
    r_u = au + Va * w.u.values - fam.g(w.v.values)  # u-equation residual
    r_v = av + Va * w.v.values - fam.f(w.u.values)  # v-equation residual
    return r_u, r_v


def energy_gradient(
    w: PairField, fam: NonlinearityFamily, V: PotentialValues, form: str = "riesz"
) -> PairField:
    """First derivative of J at w.

    ``form="strong"`` returns the L2 representative: the pair pairing with a
    test (phi, psi) as integral(first*phi + second*psi), i.e. the
    Euler-Lagrange residuals (v-equation, u-equation).

    ``form="riesz"`` returns the gradient in the pair inner product, the
    strong form preconditioned by (|k| + V)^{-1} componentwise; subtracting
    it from w is the natural descent direction in W.
    """
    r_u, r_v = _strong_residuals(w, fam, V)
    g = w.grid
    if form == "strong":
        return PairField(Field(g, r_v), Field(g, r_u))
    if form == "riesz":
        return PairField(
            Field(g, riesz_solve(r_v, g, V)), Field(g, riesz_solve(r_u, g, V))
        )
    raise ValueError(f"unknown gradient form {form!r}")


def el_residual_norms(w: PairField, fam: NonlinearityFamily, V: PotentialValues):
    """L2 norms of the two Euler-Lagrange equation residuals (u-eq, v-eq)."""
    r_u, r_v = _strong_residuals(w, fam, V)
    h = w.grid.spacing
    return (
        float(np.sqrt(h) * np.linalg.norm(r_u)),
        float(np.sqrt(h) * np.linalg.norm(r_v)),
    )


def ray_derivative(w: PairField, fam: NonlinearityFamily, V: PotentialValues) -> float:
    """<J'(w), w> = 2<u,v> - integral(f(u)u + g(v)v)."""
    return 2.0 * weighted_inner(w.u, w.v, V) - phi_prime_pairing(w, fam)


def wminus_riesz(w: PairField, fam: NonlinearityFamily, V: PotentialValues) -> Field:
    """Riesz representative of phi -> <J'(w), (phi, -phi)> in H^{1/2}_V."""
    g = w.grid
    fam.guard_amplitude(w.u.values, "u")
    fam.guard_amplitude(w.v.values, "v")
    drive = fam.f(w.u.values) - fam.g(w.v.values)
    return Field(g, w.v.values - w.u.values - riesz_solve(drive, g, V))


def wplus_riesz(w: PairField, fam: NonlinearityFamily, V: PotentialValues) -> Field:
    """Riesz representative of b -> <J'(w), (b, b)> in H^{1/2}_V."""
    g = w.grid
    fam.guard_amplitude(w.u.values, "u")
    fam.guard_amplitude(w.v.values, "v")
    drive = fam.f(w.u.values) + fam.g(w.v.values)
    return Field(g, w.u.values + w.v.values - riesz_solve(drive, g, V))


def nehari_residuals(w: PairField, fam: NonlinearityFamily, V: PotentialValues):
    """Normalized membership residuals for the constrained manifold.

    Returns (ray, minus): |<J'(w),w>| / ||w||^2 and the dual norm of the
    antidiagonal derivative over unit antidiagonal directions, / ||w||.
    """
    nw2 = pair_inner(w, w, V)
    if nw2 <= 0.0:
        return 0.0, 0.0
    ray = abs(ray_derivative(w, fam, V)) / nw2
    rho = wminus_riesz(w, fam, V)
    minus = weighted_norm(rho, V) / np.sqrt(2.0 * nw2)
    return float(ray), float(minus)
