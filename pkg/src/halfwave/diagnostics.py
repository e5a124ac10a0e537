"""Numerical certificates for candidate solutions.

Everything here is pure quadrature on given fields: the dilation identity
residual, the piecewise-logarithmic capacity-type test sequence and its
norm estimates, the level window check, and tail/amplitude metrics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .energy import PairField, el_residual_norms, nehari_residuals
from .errors import InvalidField, UnderResolved
from .families import NonlinearityFamily
from .grids import Field, Grid, l2_norm, linf_norm, seminorm_sq


@dataclass
class ResidualReport:
    """All scalar certificates for one candidate pair."""

    pohozaev: float
    euler_lagrange_u: float
    euler_lagrange_v: float
    nehari_ray: float
    nehari_minus: float
    decay_tail: float
    linf_u: float
    linf_v: float

    def __post_init__(self):
        for name, val in self.as_dict().items():
            if not (np.isfinite(val) and val >= 0.0):
                raise InvalidField(f"report entry {name} must be finite >= 0, got {val}")

    @property
    def nehari(self) -> float:
        return max(self.nehari_ray, self.nehari_minus)

    @property
    def euler_lagrange(self) -> float:
        return max(self.euler_lagrange_u, self.euler_lagrange_v)

    def as_dict(self):
        return {
            "pohozaev": self.pohozaev,
            "euler_lagrange_u": self.euler_lagrange_u,
            "euler_lagrange_v": self.euler_lagrange_v,
            "nehari_ray": self.nehari_ray,
            "nehari_minus": self.nehari_minus,
            "decay_tail": self.decay_tail,
            "linf_u": self.linf_u,
            "linf_v": self.linf_v,
        }


def pohozaev_residual(w: PairField, fam: NonlinearityFamily, V0: float) -> float:
    """Normalized residual of integral(F(u) + G(v) - V0 u v) = 0.

    Pure quadrature, no solve; scale-free: the defect is divided by
    integral(F(u) + G(v) + V0 |u v|).
    """
    fam.guard_amplitude(w.u.values, "u")
    fam.guard_amplitude(w.v.values, "v")
    h = w.grid.spacing
    fu = fam.F(w.u.values)
    gv = fam.G(w.v.values)
    uv = w.u.values * w.v.values
    num = abs(h * np.sum(fu + gv - V0 * uv))
    den = h * np.sum(fu + gv + V0 * np.abs(uv))
    if den <= 1e-300:
        return 0.0
    return float(num / den)


def recenter_pair(w: PairField):
    """Roll the pair so the maximum of |u|+|v| sits at the grid point x=0.

    Returns (recentered pair, shift in cells applied).
    """
    profile = np.abs(w.u.values) + np.abs(w.v.values)
    j_max = int(np.argmax(profile))
    shift = w.grid.index_of(0.0) - j_max
    return w.shift(shift), shift


@dataclass
class DecayMetrics:
    tail_sup: float
    linf_u: float
    linf_v: float
    envelope_exponent: float
    tail_band: float

    @property
    def tail_ratio(self) -> float:
        amp = max(self.linf_u, self.linf_v)
        return self.tail_sup / amp if amp > 0 else 0.0


def decay_profile(w: PairField, band_fraction: float = 0.1) -> DecayMetrics:
    """Tail and amplitude metrics for a recentered pair.

    ``tail_sup`` is the sup of |u|+|v| on the outer ``band_fraction`` of the
    box; the envelope exponent p of |u|+|v| ~ |x|^-p is a descriptive
    log-log fit over the intermediate range (no decay-rate claim is tested
    against it).
    """
    g = w.grid
    profile = np.abs(w.u.values) + np.abs(w.v.values)
    cut = 0.5 * (1.0 - band_fraction) * g.length
    outer = np.abs(g.x) >= cut
    tail = float(np.max(profile[outer])) if np.any(outer) else 0.0

    fit_zone = (np.abs(g.x) >= 0.1 * g.length) & (np.abs(g.x) <= 0.3 * g.length)
    xs = np.abs(g.x[fit_zone])
    ys = profile[fit_zone]
    good = ys > 1e-280
    if np.count_nonzero(good) >= 8:
        slope = np.polyfit(np.log(xs[good]), np.log(ys[good]), 1)[0]
        exponent = float(-slope)
    else:
        exponent = float("inf")
    return DecayMetrics(
        tail_sup=tail,
        linf_u=linf_norm(w.u),
        linf_v=linf_norm(w.v),
        envelope_exponent=exponent,
        tail_band=band_fraction,
    )


def build_report(
    w: PairField, fam: NonlinearityFamily, V, V0_for_pohozaev: Optional[float] = None
) -> ResidualReport:
    """Assemble the full certificate set for a candidate pair."""
    res_u, res_v = el_residual_norms(w, fam, V)
    ray, minus = nehari_residuals(w, fam, V)
    Va = np.asarray(V, dtype=float)
    if V0_for_pohozaev is None and Va.ndim == 0:
        V0_for_pohozaev = float(Va)
    poh = (
        pohozaev_residual(w, fam, V0_for_pohozaev)
        if V0_for_pohozaev is not None
        else 0.0
    )
    centered, _ = recenter_pair(w)
    decay = decay_profile(centered)
    return ResidualReport(
        pohozaev=poh,
        euler_lagrange_u=res_u,
        euler_lagrange_v=res_v,
        nehari_ray=ray,
        nehari_minus=minus,
        decay_tail=decay.tail_sup,
        linf_u=decay.linf_u,
        linf_v=decay.linf_v,
    )


# -- piecewise-logarithmic test sequence -------------------------------------


@dataclass
class MoserField:
    n: int
    r1: float
    raw: Field
    normalized: Field


def moser_values(n: int, r1: float, x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    ax = np.abs(x)
    ln = np.log(n)
    out[ax <= r1 / n] = np.sqrt(ln)
    ring = (ax > r1 / n) & (ax <= r1)
    out[ring] = np.log(r1 / ax[ring]) / np.sqrt(ln)
    return out


def moser_field(n: int, r1: float, grid: Grid, V0: float = 1.0) -> MoserField:
    """Sample the truncated-logarithm sequence member exactly on the grid."""
    if n < 2:
        raise InvalidField(f"sequence index must be >= 2, got {n}")
    if not r1 < 0.5 * grid.length:
        raise InvalidField(f"support radius r1={r1} must be < L/2={grid.length / 2}")
    if grid.spacing > r1 / (4.0 * n):
        raise UnderResolved(
            f"h={grid.spacing:.4g} too coarse for plateau width r1/n={r1 / n:.4g}; "
            f"need h <= r1/(4n)={r1 / (4 * n):.4g}"
        )
    raw = Field(grid, moser_values(n, r1, grid.x))
    nrm = np.sqrt(seminorm_sq(raw) + V0 * l2_norm(raw) ** 2)
    return MoserField(n=n, r1=r1, raw=raw, normalized=raw * (1.0 / nrm))


def moser_l2sq_exact(n: int, r1: float) -> float:
    """Exact L2 norm squared of the sequence member on the line."""
    ln = np.log(n)
    ring = (r1 / ln) * (2.0 - (ln**2 + 2.0 * ln + 2.0) / n)
    return 2.0 * ((r1 / n) * ln + ring)


@dataclass
class MoserRow:
    n: int
    n_points: int
    seminorm_sq: float
    rel_err_vs_pi: float
    l2_sq: float
    l2_sq_exact: float


def moser_table(n_list, r1: float, grid: Grid, refinements: int = 2) -> List[MoserRow]:
    """Seminorm/L2 table across n, repeated on coarsened grids.

    The repeated rows document grid convergence of the seminorm (the corner
    of the profile limits spectral accuracy to an algebraic rate).
    """
    rows = []
    for level in range(refinements, -1, -1):
        n_pts = grid.n_points // (2**level)
        sub = Grid(grid.length, n_pts)
        for n in n_list:
            try:
                mf = moser_field(n, r1, sub)
            except UnderResolved:
                continue
            semi = seminorm_sq(mf.raw)
            rows.append(
                MoserRow(
                    n=n,
                    n_points=n_pts,
                    seminorm_sq=semi,
                    rel_err_vs_pi=(semi - np.pi) / np.pi,
                    l2_sq=l2_norm(mf.raw) ** 2,
                    l2_sq_exact=moser_l2sq_exact(n, r1),
                )
            )
    return rows


# -- level window -------------------------------------------------------------


@dataclass
class LevelBoundCheck:
    passed: bool
    level: float
    upper: float
    margin: float


def level_bound_check(level: float, beta0: float) -> LevelBoundCheck:
    """Strict window 0 < level < pi/beta0 with the margin to the nearest edge."""
    upper = np.pi / beta0
    passed = bool(0.0 < level < upper)
    margin = min(level, upper - level)
    return LevelBoundCheck(passed=passed, level=float(level), upper=float(upper), margin=float(margin))
