"""Admissible nonlinearity families and the numerical hypothesis audit.

A family bundles the pair (f, g) driving the coupled system together with
their antiderivatives (F, G) and the structural constants (beta0, mu, M,
kappa0, r1) that the admissibility conditions refer to.  The audit samples
each condition on a log-refined grid and reports margins; it never attempts
symbolic reasoning.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np

from .errors import OverflowGuard, UnknownFamily
from .grids import Field, integrate

EXP_ARG_LIMIT = 700.0  # exp() ceiling in double precision


@dataclass(frozen=True)
class NonlinearityFamily:
    name: str
    f: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray]
    F: Callable[[np.ndarray], np.ndarray]
    G: Callable[[np.ndarray], np.ndarray]
    beta0: float
    mu: float
    M: float
    kappa0: float
    r1: float
    sign_restricted: bool = False
    exponential: bool = True
    symmetric: bool = True
    fp: Optional[Callable[[np.ndarray], np.ndarray]] = None
    gp: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def f_prime(self, t: np.ndarray) -> np.ndarray:
        if self.fp is not None:
            return self.fp(t)
        step = 1e-6 * np.maximum(np.abs(t), 1.0)
        return (self.f(t + step) - self.f(t - step)) / (2.0 * step)

    def g_prime(self, t: np.ndarray) -> np.ndarray:
        if self.gp is not None:
            return self.gp(t)
        step = 1e-6 * np.maximum(np.abs(t), 1.0)
        return (self.g(t + step) - self.g(t - step)) / (2.0 * step)

    def max_safe_amplitude(self) -> float:
        """Largest |t| for which exp(beta0 t^2) stays finite."""
        if not self.exponential:
            return np.inf
        return float(np.sqrt(EXP_ARG_LIMIT / self.beta0))

    def guard_amplitude(self, values: np.ndarray, what: str = "field") -> None:
        amp = float(np.max(np.abs(values))) if values.size else 0.0
        if amp > self.max_safe_amplitude():
            j = int(np.argmax(np.abs(values)))
            raise OverflowGuard(
                f"{what} amplitude {amp:.3g} exceeds exp-safe bound "
                f"{self.max_safe_amplitude():.3g} for beta0={self.beta0}",
                where=j,
            )


def _cubic_exp_F(t, b):
    # exp(s)(s-1)+1 cancels catastrophically for small s = b t^2; its Taylor
    # coefficients are (n-1)/n!, so switch to the series below s = 1e-3
    t = np.asarray(t, dtype=float)
    s = b * t * t
    closed = np.exp(s) * (s - 1.0) + 1.0
    series = s * s * (
        1.0 / 2 + s * (1.0 / 3 + s * (1.0 / 8 + s * (1.0 / 30 + s * (1.0 / 144 + s / 840))))
    )
    return np.where(s < 1e-3, series, closed) / (2.0 * b * b)


def _quintic_exp_G(t, b):
    # same treatment; Taylor coefficients of exp(s)(s^2-2s+2)-2 are (m-1)(m-2)/m!
    t = np.asarray(t, dtype=float)
    s = b * t * t
    closed = np.exp(s) * (s * s - 2.0 * s + 2.0) - 2.0
    series = s**3 * (
        1.0 / 3 + s * (1.0 / 4 + s * (1.0 / 10 + s * (1.0 / 36 + s * (1.0 / 168 + s / 960))))
    )
    return np.where(s < 1e-3, series, closed) / (2.0 * b**3)


def _restrict(fun):
    def wrapped(t):
        t = np.asarray(t, dtype=float)
        return np.where(t > 0.0, fun(np.maximum(t, 0.0)), 0.0)

    return wrapped


def builtin_family(
    name: str,
    beta0: float = 1.0,
    sign_restricted: bool = False,
    V0: float = 1.0,
    r1: float = 2.0,
) -> NonlinearityFamily:
    """Construct one of the built-in families.

    ``cubic_exp``          f = g = t^3 exp(beta0 t^2)
    ``cubic_quintic_exp``  f = t^3 exp(beta0 t^2), g = t^5 exp(beta0 t^2)
    ``cubic``              f = g = t^3 (subcritical surrogate for oracles)

    V0 and r1 only enter the recorded kappa0 witness
    max(8 sqrt(e) V0 / beta0, pi / (beta0 r1)) + 1.
    """
    if not beta0 > 0:
        raise UnknownFamily(f"beta0 must be positive, got {beta0}")
    b = float(beta0)

    def f_cubic_exp(t):
        t = np.asarray(t, dtype=float)
        return t**3 * np.exp(b * t * t)

    def g_quintic_exp(t):
        t = np.asarray(t, dtype=float)
        return t**5 * np.exp(b * t * t)

    def f_cubic(t):
        t = np.asarray(t, dtype=float)
        return t**3

    def F_cubic(t):
        t = np.asarray(t, dtype=float)
        return 0.25 * t**4

    kappa0 = max(8.0 * np.sqrt(np.e) * V0 / b, np.pi / (b * r1)) + 1.0

    def fp_cubic_exp(t):
        t = np.asarray(t, dtype=float)
        return (3.0 * t * t + 2.0 * b * t**4) * np.exp(b * t * t)

    def gp_quintic_exp(t):
        t = np.asarray(t, dtype=float)
        return (5.0 * t**4 + 2.0 * b * t**6) * np.exp(b * t * t)

    def fp_cubic(t):
        t = np.asarray(t, dtype=float)
        return 3.0 * t * t

    if name == "cubic_exp":
        f = g = f_cubic_exp
        F = G = lambda t: _cubic_exp_F(t, b)
        fp = gp = fp_cubic_exp
        exponential, symmetric = True, True
    elif name == "cubic_quintic_exp":
        f, g = f_cubic_exp, g_quintic_exp
        F = lambda t: _cubic_exp_F(t, b)
        G = lambda t: _quintic_exp_G(t, b)
        fp, gp = fp_cubic_exp, gp_quintic_exp
        exponential, symmetric = True, False
    elif name == "cubic":
        f = g = f_cubic
        F = G = F_cubic
        fp = gp = fp_cubic
        exponential, symmetric = False, True
    else:
        raise UnknownFamily(f"no builtin family named {name!r}")

    if sign_restricted:
        f, g, F, G = _restrict(f), _restrict(g), _restrict(F), _restrict(G)
        fp, gp = _restrict(fp), _restrict(gp)

    # M witness for (H4): slightly above the sampled max of F/|f|
    ts = np.linspace(0.05, 10.0, 400)
    with np.errstate(over="ignore"):
        ratio = np.max(F(ts) / np.abs(f(ts)))
    M = float(1.05 * ratio)

    return NonlinearityFamily(
        name=name,
        f=f,
        g=g,
        F=F,
        G=G,
        beta0=b,
        mu=4.0,
        M=M,
        kappa0=float(kappa0),
        r1=float(r1),
        sign_restricted=sign_restricted,
        exponential=exponential,
        symmetric=symmetric,
        fp=fp,
        gp=gp,
    )


def trudinger_moser_functional(u: Field, beta: float) -> float:
    """integral of exp(beta u^2) - 1 over the box."""
    if not beta > 0:
        raise OverflowGuard(f"beta must be positive, got {beta}")
    arg = beta * u.values**2
    if np.max(arg) > EXP_ARG_LIMIT:
        j = int(np.argmax(arg))
        raise OverflowGuard(
            f"exponent beta*u^2 = {np.max(arg):.3g} exceeds {EXP_ARG_LIMIT} "
            f"at x = {u.grid.x[j]:.4g}",
            where=j,
        )
    return integrate(Field(u.grid, np.expm1(arg)))


# -- hypothesis audit ---------------------------------------------------------

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
MARGIN_FLOOR = 1e-12


@dataclass
class HypothesisCheck:
    status: str
    margin: float
    worst_point: float
    n_samples: int
    note: str = ""


@dataclass
class HypothesisAudit:
    family: str
    t_min: float
    t_max: float
    checks: Dict[str, HypothesisCheck] = field(default_factory=dict)

    @property
    def all_pass(self) -> bool:
        return all(c.status == PASS for c in self.checks.values())

    def rows(self):
        for key in sorted(self.checks):
            c = self.checks[key]
            yield key, c.status, c.margin, c.worst_point, c.n_samples, c.note


def default_audit_grid(T: float = 12.0, per_decade: int = 60) -> np.ndarray:
    """Samples of [-T, T] with log-spaced refinement near 0."""
    decades = int(np.ceil((np.log10(T) + 8.0) * per_decade))
    pos = np.logspace(-8.0, np.log10(T), decades)
    return np.concatenate([-pos[::-1], [0.0], pos])


def _rel_margin(num, scale):
    return num / np.maximum(scale, 1e-300)


def audit_hypotheses(
    fam: NonlinearityFamily, t_grid: Optional[np.ndarray] = None
) -> HypothesisAudit:
    """Sample every admissibility condition and record worst-case margins.

    Sign-restricted families are audited on the positive half-line, which is
    the domain the restriction trick targets.
    """
    if t_grid is None:
        t_grid = default_audit_grid()
    t_grid = np.asarray(t_grid, dtype=float)
    if fam.sign_restricted:
        t_grid = t_grid[t_grid >= 0.0]
    T = float(np.max(np.abs(t_grid)))
    if T < 10.0:
        raise ValueError(f"audit grid must span [-T, T] with T >= 10, got {T}")

    audit = HypothesisAudit(family=fam.name, t_min=float(np.min(t_grid)), t_max=T)
    nz = t_grid[t_grid != 0.0]

    with np.errstate(over="ignore", invalid="ignore"):
        fv, gv = fam.f(nz), fam.g(nz)
        Fv, Gv = fam.F(nz), fam.G(nz)

    def add(key, status, margin, worst, n, note=""):
        audit.checks[key] = HypothesisCheck(status, float(margin), float(worst), n, note)

    # H1: finiteness + no sampled jumps (relative to local scale)
    finite = np.all(np.isfinite(fv)) and np.all(np.isfinite(gv))
    sub = nz[:: max(1, nz.size // 64)]
    step = 1e-7 * np.maximum(np.abs(sub), 1.0)
    jump_f = np.max(np.abs(fam.f(sub + step) - fam.f(sub)) / (1.0 + np.abs(fam.f(sub))))
    jump_g = np.max(np.abs(fam.g(sub + step) - fam.g(sub)) / (1.0 + np.abs(fam.g(sub))))
    jump = max(jump_f, jump_g)
    add(
        "H1",
        PASS if finite and jump < 1e-3 else FAIL,
        1e-3 - jump,
        0.0,
        nz.size,
        "finiteness and sampled continuity",
    )

    # H2: f(t) = o(t^2) as t -> 0
    small = nz[np.abs(nz) <= 0.1]
    for key, fun in (("H2_f", fam.f), ("H2_g", fam.g)):
        q = np.abs(fun(small)) / small**2
        order = np.argsort(np.abs(small))
        q_sorted = q[order]  # ascending |t|
        shrinks = q_sorted[0] < 1e-5 and np.all(np.diff(q_sorted) >= -1e-12)
        add(
            key,
            PASS if shrinks else FAIL,
            1e-5 - q_sorted[0],
            float(small[order][0]),
            small.size,
            "|f|/t^2 shrinking toward 0",
        )

    # H3: 0 <= mu*F <= t f(t) (non-strict)
    for key, val, anti in (("H3_f", fv, Fv), ("H3_g", gv, Gv)):
        lower = _rel_margin(anti, np.abs(anti) + np.abs(nz * val))
        upper = _rel_margin(nz * val - fam.mu * anti, np.abs(nz * val) + fam.mu * np.abs(anti))
        worst = min(np.min(lower), np.min(upper))
        j = int(np.argmin(np.minimum(lower, upper)))
        add(
            key,
            PASS if worst >= -MARGIN_FLOOR else FAIL,
            worst,
            nz[j],
            nz.size,
            f"mu = {fam.mu}",
        )

    # H4: 0 < F(t) <= M |f(t)| for t != 0
    for key, val, anti in (("H4_f", fv, Fv), ("H4_g", gv, Gv)):
        pos = np.min(anti)
        slack = _rel_margin(fam.M * np.abs(val) - anti, fam.M * np.abs(val) + anti)
        worst = min(np.min(slack), _rel_margin(pos, np.abs(pos)) if pos != 0 else 0.0)
        status = PASS if pos > 0 and np.min(slack) >= -MARGIN_FLOOR else FAIL
        add(key, status, worst, nz[int(np.argmin(slack))], nz.size, f"M = {fam.M:.4g}")

    # H5: f(t)/|t| strictly increasing (relative margins between samples)
    for key, fun in (("H5_f", fam.f), ("H5_g", fam.g)):
        q = fun(nz) / np.abs(nz)
        dq = np.diff(q)
        scale = np.maximum(np.abs(q[1:]), np.abs(q[:-1]))
        rel = _rel_margin(dq, scale)
        worst = float(np.min(rel))
        if worst > MARGIN_FLOOR:
            status = PASS
        elif worst < -MARGIN_FLOOR:
            status = FAIL
        else:
            status = INCONCLUSIVE
        add(key, status, worst, nz[int(np.argmin(rel))], nz.size, "monotone quotient")

    # H6: critical exponential growth at rate beta0
    tail = nz[np.abs(nz) >= 0.5 * T]
    tail = np.sort(np.abs(tail))
    for key, fun in (("H6_f", fam.f), ("H6_g", fam.g)):
        hi = np.abs(fun(tail)) * np.exp(-1.25 * fam.beta0 * tail**2)
        lo = np.abs(fun(tail)) * np.exp(-0.75 * fam.beta0 * tail**2)
        dies = hi[-1] < 1e-6 * (hi[0] + 1e-300) or hi[-1] < 1e-12
        blows = lo[-1] > 1e6 * (lo[0] + 1e-300)
        add(
            key,
            PASS if dies and blows else FAIL,
            float(np.log10((lo[-1] + 1e-300) / (hi[-1] + 1e-300))),
            float(tail[-1]),
            tail.size,
            "decay above beta0, growth below",
        )

    # H7: liminf t f(t) exp(-beta0 t^2) >= kappa0 on the sampled tail
    for key, fun in (("H7_f", fam.f), ("H7_g", fam.g)):
        vals = fun(tail) * tail * np.exp(-fam.beta0 * tail**2)
        worst = float(np.min(vals) - fam.kappa0)
        add(
            key,
            PASS if worst >= 0.0 else FAIL,
            worst,
            float(tail[int(np.argmin(vals))]),
            tail.size,
            f"kappa0 = {fam.kappa0:.4g}",
        )

    return audit
