"""Rescaled singularly perturbed solves and the concentration sweep.

Substituting u(x) = phi(eps x) turns the perturbed system into the same
coupled system with the sampled potential V(eps x) on a fixed grid, so the
whole two-level machinery applies with a spatially varying potential; only
translation invariance is lost, which makes the location of the profile
maximum meaningful.  The sweep tracks that location x_eps = eps * y_eps in
original coordinates, its distance to the set of potential minima, the gap
between the two component maxima, and the drift of the recentered profile
from the autonomous ground state.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from .diagnostics import recenter_pair
from .energy import PairField, pair_norm
from .errors import HalfwaveError, InvalidField
from .families import NonlinearityFamily
from .grids import Field, Grid
from .nehari import (
    GroundStateResult,
    SolverConfig,
    initial_directions,
    outer_minimize,
    solve_ground_state,
)


@dataclass(frozen=True)
class Potential:
    """External potential with declared infimum, limit, and minimizer set."""

    name: str
    evaluate: Callable[[np.ndarray], np.ndarray]
    V0: float
    Vinf: float
    minima: Tuple[float, ...]

    def __post_init__(self):
        if not (0.0 < self.V0 <= self.Vinf):
            raise InvalidField(
                f"need 0 < V0 <= Vinf, got V0={self.V0}, Vinf={self.Vinf}"
            )

    @property
    def is_constant(self) -> bool:
        return self.V0 == self.Vinf

    def rescaled_values(self, grid: Grid, epsilon: float) -> np.ndarray:
        if not epsilon > 0:
            raise InvalidField(f"epsilon must be positive, got {epsilon}")
        vals = np.asarray(self.evaluate(epsilon * grid.x), dtype=float)
        if np.min(vals) < self.V0 - 1e-12:
            raise InvalidField(
                f"potential dips below its declared infimum: min={np.min(vals)}"
            )
        return vals

    def check_box(self, grid: Grid, epsilon: float, slack: float = 0.05) -> None:
        """The box must reach the far-field plateau: V(eps L/2) near Vinf."""
        if self.is_constant:
            return
        edge = float(self.evaluate(np.array([epsilon * grid.length / 2.0]))[0])
        if abs(edge - self.Vinf) > slack * self.Vinf:
            raise InvalidField(
                f"box too small for epsilon={epsilon}: V(eps*L/2)={edge:.4g} is "
                f"more than {100 * slack:.0f}% away from Vinf={self.Vinf}"
            )


def constant_potential(V0: float) -> Potential:
    return Potential("constant", lambda x: np.full_like(np.asarray(x, float), V0), V0, V0, (0.0,))


def single_well(V0: float = 1.0, Vinf: float = 2.0) -> Potential:
    """V0 + (Vinf - V0) x^2/(1+x^2): unique minimum at 0, limit Vinf."""

    def ev(x):
        x = np.asarray(x, dtype=float)
        return V0 + (Vinf - V0) * x * x / (1.0 + x * x)

    return Potential("single_well", ev, V0, Vinf, (0.0,))


def double_well(V0: float = 1.0, Vinf: float = 2.0, separation: float = 2.0) -> Potential:
    """Two symmetric minima at +-separation, hump at 0, limit Vinf."""
    a = separation

    def ev(x):
        x = np.asarray(x, dtype=float)
        return V0 + (Vinf - V0) * (x * x - a * a) ** 2 / (x**4 + a**4)

    return Potential("double_well", ev, V0, Vinf, (-a, a))


POTENTIALS = {
    "constant": constant_potential,
    "single_well": single_well,
    "double_well": double_well,
}


def solve_rescaled(
    epsilon: float,
    potential: Potential,
    fam: NonlinearityFamily,
    grid: Grid,
    cfg: SolverConfig,
    init: Optional[PairField] = None,
) -> GroundStateResult:
    """Ground-state solve of the rescaled system with V(eps x) on the grid.

    Without an explicit init, the generic multi-start list is extended with
    bumps sitting at the potential minima (mapped to grid coordinates), so
    wells away from the origin get their own basin start.
    """
    potential.check_box(grid, epsilon)
    V = potential.rescaled_values(grid, epsilon)
    if init is not None:
        return outer_minimize(init, fam, V, cfg)
    inits = initial_directions(grid, cfg, V)
    width = 1.0 / np.sqrt(potential.V0)
    for m in potential.minima:
        y = m / epsilon
        if abs(y) < 0.45 * grid.length:
            bump = Field(grid, np.exp(-((grid.x - y) ** 2) / (2.0 * width**2)))
            inits.append(PairField(bump, bump))
    return solve_ground_state(fam, V, grid, cfg, inits=inits)


@dataclass
class ThetaLevel:
    theta: float
    level: float
    el_residual: float
    converged: bool


@dataclass
class ThetaScan:
    records: List[ThetaLevel]
    monotone_violations: List[Tuple[float, float]]

    @property
    def strictly_increasing(self) -> bool:
        return not self.monotone_violations


def autonomous_level_vs_theta(
    theta_list, fam: NonlinearityFamily, grid: Grid, cfg: SolverConfig
) -> ThetaScan:
    """Ground-state level of the constant-potential problem across theta.

    Uses the same code path as the autonomous solve with V0 replaced by
    theta; increases of less than 2 * outer_tol are flagged as violations.
    """
    thetas = [float(t) for t in theta_list]
    if any(t <= 0 for t in thetas) or sorted(thetas) != thetas:
        raise InvalidField("theta list must be positive and ascending")
    records = []
    for theta in thetas:
        res = solve_ground_state(fam, theta, grid, cfg)
        records.append(ThetaLevel(theta, res.level, res.el_residual, res.converged))
    violations = []
    for a, b in zip(records, records[1:]):
        if b.level - a.level <= 2.0 * cfg.outer_tol:
            violations.append((a.theta, b.theta))
    return ThetaScan(records=records, monotone_violations=violations)


@dataclass
class SweepRecord:
    epsilon: float
    level: float
    y_eps: float
    x_eps: float
    x_eps_u: float
    x_eps_v: float
    dist_to_minima: float
    gap12: float
    gap12_cells: int
    profile_drift: float
    el_residual: float
    converged: bool
    message: str
    solution: Optional[PairField] = None


@dataclass
class SweepResult:
    records: List[SweepRecord]
    autonomous_level: float
    errors: dict = field(default_factory=dict)

    def levels_in_window(self, beta0: float) -> bool:
        upper = np.pi / beta0
        return all(0.0 < r.level < upper for r in self.records if r.converged)


def _argmax_location(grid: Grid, vals: np.ndarray) -> float:
    return float(grid.x[int(np.argmax(np.abs(vals)))])


def concentration_sweep(
    eps_list,
    potential: Potential,
    fam: NonlinearityFamily,
    grid: Grid,
    cfg: SolverConfig,
    parallel: bool = False,
    keep_solutions: bool = False,
    init: Optional[PairField] = None,
) -> SweepResult:
    """Solve across a descending epsilon ladder and track concentration.

    Sequential mode warm-starts each solve from the previous recentered
    solution (continuation); parallel mode cold-starts every epsilon and
    must match sequential levels to solver accuracy.  Per-epsilon failures
    are recorded and the sweep continues.
    """
    eps = [float(e) for e in eps_list]
    if len(eps) < 4:
        raise InvalidField("sweep needs at least 4 epsilon values")
    if sorted(eps, reverse=True) != eps:
        raise InvalidField("epsilon list must be descending")
    if eps[0] / eps[-1] < 2.0:
        raise InvalidField("epsilon extremes must differ by a factor >= 2")

    auto = solve_ground_state(fam, potential.V0, grid, cfg)

    def make_record(e: float, res: GroundStateResult) -> SweepRecord:
        prof_u = res.w.u.values
        prof_v = res.w.v.values
        y_eps = _argmax_location(grid, np.abs(prof_u) + np.abs(prof_v))
        y_u = _argmax_location(grid, prof_u)
        y_v = _argmax_location(grid, prof_v)
        x_eps = e * y_eps
        dist = min(abs(x_eps - m) for m in potential.minima)
        gap_cells = int(
            round(abs(y_u - y_v) / grid.spacing)
        )
        centered, _ = recenter_pair(res.w)
        drift = pair_norm(centered - auto.w, potential.V0) / pair_norm(auto.w, potential.V0)
        return SweepRecord(
            epsilon=e,
            level=res.level,
            y_eps=y_eps,
            x_eps=x_eps,
            x_eps_u=e * y_u,
            x_eps_v=e * y_v,
            dist_to_minima=dist,
            gap12=abs(e * y_u - e * y_v),
            gap12_cells=gap_cells,
            profile_drift=float(drift),
            el_residual=res.el_residual,
            converged=res.converged,
            message=res.message,
            solution=res.w if keep_solutions else None,
        )

    records: List[SweepRecord] = []
    errors: dict = {}

    if parallel:
        def run_cold(e):
            return solve_rescaled(e, potential, fam, grid, cfg)

        with ThreadPoolExecutor(max_workers=max(cfg.threads, 2)) as pool:
            futures = {e: pool.submit(run_cold, e) for e in eps}
        for e in eps:
            try:
                records.append(make_record(e, futures[e].result()))
            except HalfwaveError as err:
                errors[e] = str(err)
    else:
        # first rung multi-starts unless an explicit init is handed in;
        # later rungs continue from the previous recentered profile
        warm: Optional[PairField] = init
        for e in eps:
            try:
                res = solve_rescaled(e, potential, fam, grid, cfg, init=warm)
                records.append(make_record(e, res))
                warm, _ = recenter_pair(res.w)
            except HalfwaveError as err:
                errors[e] = str(err)
                warm = None

    return SweepResult(records=records, autonomous_level=auto.level, errors=errors)
