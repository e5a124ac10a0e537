"""Two-level constrained minimization for ground-state candidates.

Outer level: Riemannian descent of F(s) = J(m(s)) over the unit sphere of
the diagonal subspace (retraction = renormalization, Armijo backtracking
with Barzilai-Borwein step proposals).  Inner level: for a fixed diagonal
direction, maximize J over the span of the ray and the antidiagonal
subspace by alternating a bracketed 1-D search in the ray coordinate with
preconditioned concave ascent in the antidiagonal coordinate.  An optional
matrix-free Newton polish drives the strong-form residual of the coupled
system to the requested tolerance once the descent has localized the
candidate; the inner/outer machinery itself is first-order only.

All randomness is seeded; restarts are independent and merged
deterministically, so runs are reproducible bit-for-bit in sequential mode
and thread-count independent in parallel mode.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from .diagnostics import decay_profile, pohozaev_residual, recenter_pair
from .energy import (
    PairField,
    el_residual_norms,
    energy,
    nehari_residuals,
    weighted_inner,
    weighted_norm,
)
from .errors import MaxIterations, NoAscent, OverflowGuard, Stagnation
from .families import NonlinearityFamily
from .grids import Field, Grid


@dataclass(frozen=True)
class SolverConfig:
    inner_tol: float = 1e-9
    outer_tol: float = 1e-7
    el_tol: float = 1e-6
    max_inner: int = 300
    max_outer: int = 600
    max_linesearch: int = 30
    armijo_c: float = 1e-4
    armijo_shrink: float = 0.5
    restarts: int = 5
    seed: int = 0
    threads: int = 1
    newton_polish: bool = True
    polish_handoff: float = 1e-4
    stagnation_window: int = 50
    stagnation_eps: float = 1e-14

    def validated(self) -> "SolverConfig":
        for name in ("inner_tol", "outer_tol", "el_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("max_inner", "max_outer", "restarts"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        return self


@dataclass
class NehariPoint:
    """Intersection of one ray-plus-antidiagonal slice with the manifold."""

    w: PairField
    t: float
    phi: Field
    ray_residual: float
    minus_residual: float
    level: float
    inner_iters: int


@dataclass
class IterationRecord:
    outer_step: int
    level: float
    grad_norm: float
    inner_iters: int


@dataclass
class GroundStateResult:
    w: PairField
    level: float
    el_residual: float
    el_residual_u: float
    el_residual_v: float
    nehari_residual: float
    pohozaev_residual: float
    decay_tail: float
    linf_u: float
    linf_v: float
    trace: List[IterationRecord] = field(default_factory=list)
    converged: bool = False
    message: str = ""
    restart_index: int = 0
    newton_steps: int = 0


# -- inner level --------------------------------------------------------------


def make_preconditioner(grid: Grid, V):
    """Inverse-multiplier map (|k| + mean V)^{-1}.

    Exact Riesz map for scalar V; for a varying potential it is the
    spectrally equivalent preconditioner used for all descent directions
    (exact representatives are only needed in final reports).  It must be
    applied to exact strong-form residuals: shortcuts of the form
    u - P(f) are biased whenever P is not the exact inverse.
    """
    Va = np.asarray(V, dtype=float)
    shift = float(Va) if Va.ndim == 0 else float(np.mean(Va))
    k = np.abs(grid.wavenumbers)

    def apply(vals: np.ndarray) -> np.ndarray:
        return np.fft.ifft(np.fft.fft(vals) / (k + shift)).real

    return apply


def make_gradient_maps(grid: Grid, V, fam: NonlinearityFamily):
    """Preconditioned diagonal/antidiagonal derivative representatives.

    Both evaluate P(strong residual): ``plus(u, v)`` represents
    b -> <J'(w), (b, b)> and ``minus(u, v)`` represents
    q -> <J'(w), (q, -q)>; they vanish exactly at critical points.
    """
    Va = np.asarray(V, dtype=float)
    k = np.abs(grid.wavenumbers)
    precond = make_preconditioner(grid, V)

    def halflap(vals):
        return np.fft.ifft(k * np.fft.fft(vals)).real

    def plus(u, v):
        s = u + v
        return precond(halflap(s) + Va * s - fam.f(u) - fam.g(v))

    def minus(u, v):
        d = v - u
        return precond(halflap(d) + Va * d - fam.f(u) + fam.g(v))

    return plus, minus


class _RaySlice:
    """State for maximizing J over {t*(ahat,ahat) + (q,-q)}."""

    def __init__(self, ahat: np.ndarray, fam: NonlinearityFamily, V, grid: Grid):
        self.ahat = ahat
        self.fam = fam
        self.V = V
        self.grid = grid
        self.h = grid.spacing

    def components(self, t, q):
        return t * self.ahat + q, t * self.ahat - q

    def j_value(self, t, q, q_norm_sq):
        """J = t^2/2 - ||q||^2 - Phi; -inf if the exponent guard trips."""
        u, v = self.components(t, q)
        amp = max(np.max(np.abs(u)), np.max(np.abs(v))) if u.size else 0.0
        if amp > self.fam.max_safe_amplitude():
            return -np.inf
        dens = self.fam.F(u) + self.fam.G(v)
        return 0.5 * t * t - q_norm_sq - self.h * float(np.sum(dens))

    def ray_slope(self, t, q):
        """dJ/dt = t - integral((f(u) + g(v)) * ahat)."""
        u, v = self.components(t, q)
        return t - self.h * float(np.sum((self.fam.f(u) + self.fam.g(v)) * self.ahat))


def _maximize_along_ray(sl: _RaySlice, t0: float, q, q_norm_sq, warm: bool = False) -> float:
    """Locate argmax of t -> J on the ray.

    Warm calls try safeguarded Newton on the slope first (the maximizer
    moves little between sweeps); cold calls, or Newton failures, fall back
    to bracketed scan plus golden-section refinement.
    """
    if warm and t0 > 1e-8:
        t = t0
        ok = False
        for _ in range(8):
            s = sl.ray_slope(t, q)
            dt_fd = 1e-6 * (1.0 + t)
            sp = (sl.ray_slope(t + dt_fd, q) - sl.ray_slope(t - dt_fd, q)) / (2.0 * dt_fd)
            if not np.isfinite(s) or sp >= -1e-300:
                break
            step = s / sp
            if abs(step) > 0.3 * (1.0 + t):
                break
            t_new = t - step
            if t_new <= 0.0:
                break
            if abs(step) <= 1e-13 * (1.0 + t_new):
                t = t_new
                ok = True
                break
            t = t_new
        if ok and sl.j_value(t, q, q_norm_sq) >= sl.j_value(t0, q, q_norm_sq) - 1e-300:
            return t

    t_hi = max(2.0 * t0, 1.0)
    j_hi = sl.j_value(t_hi, q, q_norm_sq)
    j_mid = sl.j_value(0.5 * t_hi, q, q_norm_sq)
    grow = 0
    while j_hi > j_mid and grow < 60:
        t_hi *= 1.7
        j_mid = j_hi
        j_hi = sl.j_value(t_hi, q, q_norm_sq)
        grow += 1

    ts = np.linspace(0.0, t_hi, 48)
    js = np.array([sl.j_value(t, q, q_norm_sq) for t in ts])
    j_best = int(np.argmax(js))
    lo = ts[max(j_best - 1, 0)]
    hi = ts[min(j_best + 1, ts.size - 1)]

    inv_gold = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_gold * (b - a)
    d = a + inv_gold * (b - a)
    jc = sl.j_value(c, q, q_norm_sq)
    jd = sl.j_value(d, q, q_norm_sq)
    while b - a > 1e-13 * (1.0 + b):
        if jc > jd:
            b, d, jd = d, c, jc
            c = b - inv_gold * (b - a)
            jc = sl.j_value(c, q, q_norm_sq)
        else:
            a, c, jc = c, d, jd
            d = a + inv_gold * (b - a)
            jd = sl.j_value(d, q, q_norm_sq)
    return 0.5 * (a + b)


def inner_maximize(
    direction: PairField,
    fam: NonlinearityFamily,
    V,
    inner_tol: float = 1e-9,
    max_inner: int = 300,
    warm_t: Optional[float] = None,
    warm_phi: Optional[np.ndarray] = None,
) -> NehariPoint:
    """Maximize J over the ray-antidiagonal slice spanned by ``direction``.

    Raises NoAscent when the diagonal part of the direction vanishes or the
    maximum collapses to the origin; MaxIterations (carrying the best point)
    when the residual targets are not met within the budget.
    """
    grid = direction.grid
    a = 0.5 * (direction.u.values + direction.v.values)
    a_field = Field(grid, a)
    na = weighted_norm(a_field, V)
    if na <= 1e-12:
        raise NoAscent("direction has no diagonal component")
    ahat = a / (np.sqrt(2.0) * na)  # ||(ahat, ahat)||_W = 1

    sl = _RaySlice(ahat, fam, V, grid)
    _, grad_minus = make_gradient_maps(grid, V, fam)
    q = np.zeros(grid.n_points) if warm_phi is None else warm_phi.copy()
    q_field = Field(grid, q)
    q_norm_sq = weighted_inner(q_field, q_field, V)
    t = warm_t if warm_t is not None else 1.0

    iters = 0
    bb_step = 0.5
    prev_rho = None
    prev_step = None
    for sweep in range(max_inner):
        t = _maximize_along_ray(sl, t, q, q_norm_sq, warm=(sweep > 0 or warm_t is not None))
        if t <= 1e-12:
            raise NoAscent("maximum collapses onto the antidiagonal subspace")

        # concave ascent in the antidiagonal coordinate; preconditioned gradient
        u, v = sl.components(t, q)
        w = PairField(Field(grid, u), Field(grid, v))
        rho = Field(grid, grad_minus(u, v))
        rho_norm_sq = weighted_inner(rho, rho, V)
        j_cur = sl.j_value(t, q, q_norm_sq)

        # residuals (scale-free)
        nw2 = max(pair_inner_fast(w, V), 1e-300)
        ray_res = abs(ray_pairing_fast(w, fam, V)) / nw2
        minus_res = np.sqrt(rho_norm_sq) / np.sqrt(2.0 * nw2)
        iters = sweep + 1
        if ray_res <= inner_tol and minus_res <= inner_tol:
            return NehariPoint(w, float(t), Field(grid, q), ray_res, minus_res, j_cur, iters)

        cross = weighted_inner(q_field, rho, V)
        step = bb_step
        for _ in range(40):
            q_try_norm_sq = q_norm_sq + 2.0 * step * cross + step * step * rho_norm_sq
            j_try = sl.j_value(t, q + step * rho.values, q_try_norm_sq)
            if j_try >= j_cur + 1e-4 * step * rho_norm_sq:
                break
            step *= 0.5
        else:
            step = 0.0
        if step > 0.0:
            if prev_rho is not None and prev_step is not None:
                # Barzilai-Borwein proposal from successive gradients
                diff = rho.values - prev_rho
                diff_field = Field(grid, diff)
                denom = weighted_inner(diff_field, diff_field, V)
                if denom > 1e-300:
                    s_dot_y = -prev_step * weighted_inner(Field(grid, prev_rho), diff_field, V)
                    bb = abs(s_dot_y) / denom
                    bb_step = min(max(bb, 1e-3), 4.0)
            prev_rho = rho.values
            prev_step = step
            q = q + step * rho.values
            q_field = Field(grid, q)
            q_norm_sq = weighted_inner(q_field, q_field, V)

    u, v = sl.components(t, q)
    w = PairField(Field(grid, u), Field(grid, v))
    best = NehariPoint(
        w, float(t), Field(grid, q), ray_res, minus_res, sl.j_value(t, q, q_norm_sq), iters
    )
    raise MaxIterations(
        f"inner maximization: residuals ({ray_res:.2e}, {minus_res:.2e}) "
        f"above tol {inner_tol:.2e} after {max_inner} sweeps",
        best=best,
    )


def pair_inner_fast(w: PairField, V) -> float:
    return weighted_inner(w.u, w.u, V) + weighted_inner(w.v, w.v, V)


def ray_pairing_fast(w: PairField, fam: NonlinearityFamily, V) -> float:
    h = w.grid.spacing
    nl = fam.f(w.u.values) * w.u.values + fam.g(w.v.values) * w.v.values
    return 2.0 * weighted_inner(w.u, w.v, V) - h * float(np.sum(nl))


# -- Newton polish ------------------------------------------------------------


def _newton_polish(w: PairField, fam: NonlinearityFamily, V, target: float, max_newton: int = 25):
    """Matrix-free Newton refinement of the coupled strong system.

    Levenberg-Marquardt shift handles the nearly-flat translational mode of
    shallow potentials (a pure Newton step along it leaves the basin); the
    linear solves are GMRES preconditioned by the inverse multiplier.
    Returns the best iterate reached.
    """
    grid = w.grid
    n = grid.n_points
    h = grid.spacing
    k = np.abs(grid.wavenumbers)
    Va = np.asarray(V, dtype=float)
    vbar = float(Va) if Va.ndim == 0 else float(np.mean(Va))

    def strong(uv):
        u, v = uv[:n], uv[n:]
        au = np.fft.ifft(k * np.fft.fft(u)).real
        av = np.fft.ifft(k * np.fft.fft(v)).real
        r_u = au + Va * u - fam.g(v)
        r_v = av + Va * v - fam.f(u)
        return np.concatenate([r_u, r_v])

    def res_norm(r):
        return np.sqrt(h) * np.linalg.norm(r)

    def prec(x):
        xu, xv = x[:n], x[n:]
        pu = np.fft.ifft(np.fft.fft(xu) / (k + vbar)).real
        pv = np.fft.ifft(np.fft.fft(xv) / (k + vbar)).real
        return np.concatenate([pu, pv])

    pc = LinearOperator((2 * n, 2 * n), matvec=prec)

    def shifted(uv, s):
        """Continuous spatial translation by s (spectral phase twist)."""
        phase = np.exp(-1j * grid.wavenumbers * s)
        su = np.fft.ifft(phase * np.fft.fft(uv[:n])).real
        sv = np.fft.ifft(phase * np.fft.fft(uv[n:])).real
        return np.concatenate([su, sv])

    def align_translation(uv, r_now):
        """Minimize the residual over sub-cell translations.

        A varying potential pins the profile only weakly, so the residual
        component along the translation mode is removed nonlinearly (by a
        parabolic fit in the shift, iterated a few times) instead of asking
        the linear solver to invert a near-null direction.
        """
        if Va.ndim == 0:
            return uv, r_now
        best_uv, best_r = uv, r_now
        best = res_norm(r_now)
        step = h
        for _ in range(12):
            fm = res_norm(strong(shifted(best_uv, -step)))
            fp = res_norm(strong(shifted(best_uv, step)))
            denom = fm - 2.0 * best + fp
            if denom <= 0.0:
                s_new = -step if fm < fp else step
            else:
                s_new = 0.5 * step * (fm - fp) / denom
                s_new = float(np.clip(s_new, -2.0 * step, 2.0 * step))
            cand = shifted(best_uv, s_new)
            r_cand = strong(cand)
            val = res_norm(r_cand)
            if val < best * (1.0 - 1e-12):
                best_uv, best_r, best = cand, r_cand, val
                step = max(abs(s_new) * 0.7, 1e-9 * h)
            else:
                step *= 0.25
            if step < 1e-8 * h:
                break
        return best_uv, best_r

    uv = np.concatenate([w.u.values, w.v.values])
    r = strong(uv)
    uv, r = align_translation(uv, r)
    best_uv, best_norm = uv.copy(), res_norm(r)
    scale = max(np.sqrt(h) * np.linalg.norm(uv), 1.0)
    lam = 0.0
    steps = 0
    for _ in range(max_newton):
        if best_norm <= target:
            break
        u, v = uv[:n], uv[n:]
        fp = fam.f_prime(u)
        gp = fam.g_prime(v)
        improved = False
        for _ in range(6):
            shift = lam

            def jac(x):
                xu, xv = x[:n], x[n:]
                yu = np.fft.ifft(k * np.fft.fft(xu)).real + (Va + shift) * xu - gp * xv
                yv = np.fft.ifft(k * np.fft.fft(xv)).real + (Va + shift) * xv - fp * xu
                return np.concatenate([yu, yv])

            op = LinearOperator((2 * n, 2 * n), matvec=jac)
            delta, info = gmres(op, r, M=pc, rtol=1e-8, atol=0.0, restart=60, maxiter=200)
            step_size = np.sqrt(h) * np.linalg.norm(delta)
            if info != 0 or step_size > 0.5 * scale:
                lam = max(4.0 * lam, 1e-3)
                continue
            damp = 1.0
            for _ in range(6):
                trial = uv - damp * delta
                rt = strong(trial)
                nt = res_norm(rt)
                if nt < best_norm:
                    uv, r = trial, rt
                    best_uv, best_norm = trial.copy(), nt
                    improved = True
                    steps += 1
                    break
                damp *= 0.5
            if improved:
                lam = lam / 4.0 if lam > 1e-10 else 0.0
                break
            lam = max(4.0 * lam, 1e-3)
        if not improved:
            break
        uv, r = align_translation(uv, r)
        if res_norm(r) < best_norm:
            best_uv, best_norm = uv.copy(), res_norm(r)
    out = PairField(Field(grid, best_uv[:n]), Field(grid, best_uv[n:]))
    return out, best_norm, steps


# -- outer level ----------------------------------------------------------------


def _diag_normalize(a_vals: np.ndarray, grid: Grid, V) -> np.ndarray:
    nrm = weighted_norm(Field(grid, a_vals), V)
    if nrm <= 1e-14:
        raise NoAscent("diagonal direction vanished during outer descent")
    return a_vals / (np.sqrt(2.0) * nrm)


def outer_minimize(
    init_direction: PairField,
    fam: NonlinearityFamily,
    V,
    cfg: SolverConfig,
    restart_index: int = 0,
) -> GroundStateResult:
    """Descend F(s) = J(m(s)) over the unit diagonal sphere from one start."""
    cfg = cfg.validated()
    grid = init_direction.grid
    Va = np.asarray(V, dtype=float)
    autonomous = Va.ndim == 0

    a = _diag_normalize(
        0.5 * (init_direction.u.values + init_direction.v.values), grid, V
    )
    warm_t, warm_phi = None, None
    trace: List[IterationRecord] = []
    levels: List[float] = []
    alpha = 1.0
    message = ""

    def eval_F(a_vals, wt, wq, tol):
        pt = inner_maximize(
            PairField(Field(grid, a_vals), Field(grid, a_vals)),
            fam,
            V,
            inner_tol=tol,
            max_inner=cfg.max_inner,
            warm_t=wt,
            warm_phi=wq,
        )
        return pt

    grad_plus, _ = make_gradient_maps(grid, V, fam)
    inner_tol_eff = max(cfg.inner_tol, 1e-6)
    point = eval_F(a, warm_t, warm_phi, inner_tol_eff)
    for outer in range(cfg.max_outer):
        warm_t, warm_phi = point.t, point.phi.values
        pu, pv = point.w.u.values, point.w.v.values
        c = Field(grid, grad_plus(pu, pv))
        coeff = weighted_inner(c, Field(grid, a), V)
        tang = 0.5 * c.values - coeff * a
        tang_norm = weighted_norm(Field(grid, tang), V) * np.sqrt(2.0)
        grad_norm = point.t * tang_norm
        trace.append(IterationRecord(outer, point.level, grad_norm, point.inner_iters))
        levels.append(point.level)

        if grad_norm <= cfg.outer_tol:
            message = "gradient at tolerance"
            break
        if cfg.newton_polish and grad_norm <= cfg.polish_handoff * (1.0 + abs(point.level)):
            message = "handed to newton polish"
            break
        # inner accuracy tracks the outer gradient (inexact descent)
        inner_tol_eff = max(cfg.inner_tol, min(1e-5, 0.02 * grad_norm))
        if (
            len(levels) > cfg.stagnation_window
            and abs(levels[-1] - levels[-1 - cfg.stagnation_window]) < cfg.stagnation_eps
        ):
            raise Stagnation(
                f"level froze at {point.level:.12g} with gradient {grad_norm:.2e} "
                f"above tol after {outer} outer steps",
                best=_package(point, fam, V, trace, cfg, "stagnation", restart_index, autonomous),
            )

        # Armijo backtracking along the projected direction, BB warm step
        descent = point.t * tang
        dir_norm_sq = 2.0 * weighted_norm(Field(grid, descent), V) ** 2
        accepted = False
        step = alpha
        for _ in range(cfg.max_linesearch):
            a_try = _diag_normalize(a - step * descent, grid, V)
            try:
                pt_try = eval_F(a_try, warm_t, warm_phi, inner_tol_eff)
            except (NoAscent, MaxIterations) as err:
                pt_try = getattr(err, "best", None)
                if pt_try is None:
                    step *= cfg.armijo_shrink
                    continue
            if pt_try.level <= point.level - cfg.armijo_c * step * dir_norm_sq:
                a = a_try
                point = pt_try
                accepted = True
                break
            step *= cfg.armijo_shrink
        if accepted:
            alpha = min(step / cfg.armijo_shrink, 1e3)
        else:
            message = "line search exhausted"
            break
    else:
        raise MaxIterations(
            f"outer descent: gradient {grad_norm:.2e} above tol {cfg.outer_tol:.2e} "
            f"after {cfg.max_outer} steps",
            best=_package(
                point, fam, V, trace, cfg, "max_outer reached", restart_index, autonomous
            ),
        )

    result = _package(
        point, fam, V, trace, cfg, message or "descent converged", restart_index, autonomous
    )
    if cfg.newton_polish:
        polished, res, steps = _newton_polish(point.w, fam, V, target=0.05 * cfg.el_tol)
        if res < result.el_residual:
            w_out = polished
            if autonomous:
                w_out, _ = recenter_pair(w_out)
            result = _finalize(
                w_out, fam, V, trace, restart_index, autonomous, cfg,
                message=result.message + f" + newton polish ({steps} steps)",
                newton_steps=steps,
            )
    return result


def _package(point, fam, V, trace, cfg, message, restart_index, autonomous):
    w = point.w
    if autonomous:
        w, _ = recenter_pair(w)
    return _finalize(w, fam, V, trace, restart_index, autonomous, cfg, message)


def _finalize(
    w, fam, V, trace, restart_index, autonomous, cfg, message, newton_steps=0
):
    """Assemble the result; ``converged`` means certificate-quality residuals."""
    res_u, res_v = el_residual_norms(w, fam, V)
    ray, minus = nehari_residuals(w, fam, V)
    level = energy(w, fam, V)
    Va = np.asarray(V, dtype=float)
    poh = pohozaev_residual(w, fam, float(Va)) if Va.ndim == 0 else 0.0
    centered, _ = recenter_pair(w)
    decay = decay_profile(centered)
    el = max(res_u, res_v)
    nehari = max(ray, minus)
    return GroundStateResult(
        w=w,
        level=float(level),
        el_residual=el,
        el_residual_u=res_u,
        el_residual_v=res_v,
        nehari_residual=nehari,
        pohozaev_residual=poh,
        decay_tail=decay.tail_sup,
        linf_u=decay.linf_u,
        linf_v=decay.linf_v,
        trace=list(trace),
        converged=bool(el <= cfg.el_tol and nehari <= cfg.el_tol),
        message=message,
        restart_index=restart_index,
        newton_steps=newton_steps,
    )


# -- multi-start orchestration ---------------------------------------------------


def initial_directions(grid: Grid, cfg: SolverConfig, V) -> List[PairField]:
    """Deterministic family of diagonal bump starts (centered + perturbed)."""
    Va = np.asarray(V, dtype=float)
    vbar = float(Va) if Va.ndim == 0 else float(np.mean(Va))
    width0 = 1.0 / np.sqrt(vbar)
    outs = []
    for r in range(cfg.restarts):
        rng = np.random.default_rng(cfg.seed + 1000 * r)
        if r == 0:
            center, width, wiggle = 0.0, width0, 0.0
        else:
            center = rng.uniform(-grid.length / 8.0, grid.length / 8.0)
            width = width0 * rng.uniform(0.6, 1.8)
            wiggle = 0.2
        vals = np.exp(-((grid.x - center) ** 2) / (2.0 * width**2))
        if wiggle:
            vals = vals * (1.0 + wiggle * np.cos(2.0 * np.pi * rng.integers(1, 4) * grid.x / grid.length))
        f = Field(grid, vals)
        outs.append(PairField(f, f))
    return outs


def solve_ground_state(
    fam: NonlinearityFamily,
    V,
    grid: Grid,
    cfg: SolverConfig,
    inits: Optional[List[PairField]] = None,
) -> GroundStateResult:
    """Run the descent from several starts and keep the best feasible level.

    Failed restarts (budget exhaustion, stagnation) contribute their
    best-so-far candidate; the merge prefers feasible results (residuals at
    tolerance), then the lowest level, then the restart index, which makes
    the outcome independent of execution order.
    """
    cfg = cfg.validated()
    if inits is None:
        inits = initial_directions(grid, cfg, V)

    def run_one(args):
        idx, init = args
        try:
            return outer_minimize(init, fam, V, cfg, restart_index=idx)
        except (MaxIterations, Stagnation) as err:
            if err.best is not None:
                return err.best
            raise
        except (NoAscent, OverflowGuard):
            return None

    tasks = list(enumerate(inits))
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(run_one, tasks))
    else:
        results = [run_one(t) for t in tasks]
    results = [r for r in results if r is not None]
    if not results:
        raise NoAscent("all restarts failed before producing a candidate")

    def merge_key(r: GroundStateResult):
        # candidates within a loose residual bar compete on level; the
        # converged flag still records certificate quality, so a lower
        # near-converged state is preferred over a higher fully-converged
        # one (weakly pinned off-center states may stall at ~1e-4)
        candidate = r.el_residual <= max(cfg.el_tol, 1e-3)
        return (not candidate, r.level, r.restart_index)

    return sorted(results, key=merge_key)[0]


# -- scalar diagonal oracle -------------------------------------------------------


def scalar_diagonal_solve(
    fam: NonlinearityFamily, V, grid: Grid, cfg: SolverConfig, init: Optional[Field] = None
) -> Field:
    """Independent single-equation solve of (-Delta)^{1/2}u + V u = f(u).

    Classic scalar constrained-ray descent: on the unit sphere the ray
    coordinate is maximized by a bracketed search, and the sphere direction
    descends along the projected gradient; a scalar Newton polish finishes.
    Requires a symmetric family (f = g); then (u, u) solves the full system.
    """
    if not fam.symmetric:
        raise NoAscent("scalar diagonal solve requires f = g")
    cfg = cfg.validated()
    h = grid.spacing
    Va = np.asarray(V, dtype=float)

    def normalize(vals):
        nrm = weighted_norm(Field(grid, vals), V)
        if nrm <= 1e-14:
            raise NoAscent("scalar direction vanished")
        return vals / nrm

    def scalar_I(t, d):
        vals = t * d
        if np.max(np.abs(vals)) > fam.max_safe_amplitude():
            return -np.inf
        return 0.5 * t * t - h * float(np.sum(fam.F(vals)))

    def best_t(d, t0):
        t_hi = max(2.0 * t0, 1.0)
        while scalar_I(t_hi, d) > scalar_I(0.5 * t_hi, d):
            t_hi *= 1.7
            if t_hi > 1e8:
                break
        ts = np.linspace(0.0, t_hi, 48)
        js = [scalar_I(t, d) for t in ts]
        j = int(np.argmax(js))
        a, b = ts[max(j - 1, 0)], ts[min(j + 1, len(ts) - 1)]
        for _ in range(200):
            if b - a <= 1e-13 * (1.0 + b):
                break
            m1 = a + (b - a) / 3.0
            m2 = b - (b - a) / 3.0
            if scalar_I(m1, d) < scalar_I(m2, d):
                a = m1
            else:
                b = m2
        return 0.5 * (a + b)

    precond = make_preconditioner(grid, V)
    k_abs = np.abs(grid.wavenumbers)
    if init is None:
        vbar = float(Va) if Va.ndim == 0 else float(np.mean(Va))
        init = Field(grid, np.exp(-(grid.x**2) * vbar / 2.0))
    d = normalize(init.values)
    t = 1.0
    alpha = 1.0
    for _ in range(cfg.max_outer):
        t = best_t(d, t)
        z = t * d
        strong_z = np.fft.ifft(k_abs * np.fft.fft(z)).real + Va * z - fam.f(z)
        grad = precond(strong_z)
        coeff = weighted_inner(Field(grid, grad), Field(grid, d), V)
        tang = grad - coeff * d
        gnorm = weighted_norm(Field(grid, tang), V) * t
        if gnorm <= cfg.outer_tol:
            break
        level = scalar_I(t, d)
        step = alpha
        accepted = False
        for _ in range(cfg.max_linesearch):
            d_try = normalize(d - step * t * tang)
            t_try = best_t(d_try, t)
            if scalar_I(t_try, d_try) <= level - cfg.armijo_c * step * (t * weighted_norm(Field(grid, tang), V)) ** 2:
                d, t = d_try, t_try
                accepted = True
                break
            step *= cfg.armijo_shrink
        if not accepted:
            break
        alpha = min(step / cfg.armijo_shrink, 1e3)

    u = t * d
    # scalar Newton polish on K u = f(u)
    k = np.abs(grid.wavenumbers)
    vbar = float(Va) if Va.ndim == 0 else float(np.mean(Va))

    def strong(x):
        return np.fft.ifft(k * np.fft.fft(x)).real + Va * x - fam.f(x)

    r = strong(u)
    best_u, best_norm = u.copy(), np.sqrt(h) * np.linalg.norm(r)
    for _ in range(15):
        if best_norm <= 0.05 * cfg.el_tol:
            break
        fp = fam.f_prime(u)

        def jac(x):
            return np.fft.ifft(k * np.fft.fft(x)).real + Va * x - fp * x

        def prec(x):
            return np.fft.ifft(np.fft.fft(x) / (k + vbar)).real

        op = LinearOperator((grid.n_points, grid.n_points), matvec=jac)
        pc = LinearOperator((grid.n_points, grid.n_points), matvec=prec)
        delta, info = gmres(op, r, M=pc, rtol=1e-6, atol=0.0, restart=60, maxiter=200)
        if info != 0:
            break
        improved = False
        damp = 1.0
        for _ in range(8):
            trial = u - damp * delta
            rt = strong(trial)
            nt = np.sqrt(h) * np.linalg.norm(rt)
            if nt < best_norm:
                u, r = trial, rt
                best_u, best_norm = trial.copy(), nt
                improved = True
                break
            damp *= 0.5
        if not improved:
            break

    out = Field(grid, best_u)
    if Va.ndim == 0:
        pair, _ = recenter_pair(PairField(out, out))
        out = pair.u
    return out
