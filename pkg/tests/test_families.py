import numpy as np
import pytest
from scipy.integrate import quad

from halfwave.errors import OverflowGuard, UnknownFamily
from halfwave.families import (
    NonlinearityFamily,
    audit_hypotheses,
    builtin_family,
    default_audit_grid,
    trudinger_moser_functional,
)
from halfwave.grids import Field, Grid, integrate, l2_norm, seminorm_sq


@pytest.fixture(scope="module")
def cubic_exp():
    return builtin_family("cubic_exp", beta0=1.0)


class TestBuiltins:
    def test_f_at_one(self, cubic_exp):
        assert cubic_exp.f(1.0) == pytest.approx(np.e, rel=1e-14)
        assert cubic_exp.mu == 4.0

    def test_unknown_name(self):
        with pytest.raises(UnknownFamily):
            builtin_family("septic")
        with pytest.raises(UnknownFamily):
            builtin_family("cubic_exp", beta0=-1.0)

    def test_small_t_vanishing_order(self, cubic_exp):
        # ratio f(t)/t^2 must fall below 1e-5 on the way to 0
        ts = np.array([1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
        ratios = np.abs(cubic_exp.f(ts)) / ts**2
        assert np.all(np.diff(ratios) < 0)
        assert ratios[-1] < 1e-5

    @pytest.mark.parametrize("t", [0.3, 1.0, 2.5, -1.7])
    def test_F_matches_quadrature(self, cubic_exp, t):
        oracle, _ = quad(lambda s: s**3 * np.exp(s * s), 0.0, t, epsabs=1e-12, epsrel=1e-12)
        assert cubic_exp.F(t) == pytest.approx(oracle, abs=1e-10, rel=1e-10)

    def test_F_closed_form_value(self, cubic_exp):
        # int_0^1 s^3 e^{s^2} ds = (e^{t^2}(t^2-1)+1)/2 at t=1 -> 1/2
        assert cubic_exp.F(1.0) == pytest.approx(0.5, rel=1e-14)

    @pytest.mark.parametrize("t", [0.5, 1.5])
    def test_asymmetric_G_matches_quadrature(self, t):
        fam = builtin_family("cubic_quintic_exp", beta0=0.8)
        oracle, _ = quad(
            lambda s: s**5 * np.exp(0.8 * s * s), 0.0, t, epsabs=1e-12, epsrel=1e-12
        )
        assert fam.G(t) == pytest.approx(oracle, abs=1e-10, rel=1e-10)

    def test_antiderivative_consistency_fd(self, cubic_exp):
        # central difference of F reproduces f on |t| <= 5
        ts = np.linspace(-5.0, 5.0, 101)
        ts = ts[np.abs(ts) > 1e-3]
        step = 1e-5
        fd = (cubic_exp.F(ts + step) - cubic_exp.F(ts - step)) / (2.0 * step)
        rel = np.abs(fd - cubic_exp.f(ts)) / (1.0 + np.abs(cubic_exp.f(ts)))
        assert np.max(rel) <= 1e-6

    def test_sign_restricted_is_zero_on_negatives(self):
        fam = builtin_family("cubic_exp", 1.0, sign_restricted=True)
        ts = np.linspace(-10.0, 0.0, 50)
        assert np.all(fam.f(ts) == 0.0)
        assert np.all(fam.G(ts) == 0.0)
        assert fam.f(2.0) == pytest.approx(8.0 * np.exp(4.0), rel=1e-14)

    def test_monotone_quotient(self, cubic_exp):
        ts = np.concatenate([-np.logspace(-4, 1, 200)[::-1], np.logspace(-4, 1, 200)])
        q = cubic_exp.f(ts) / np.abs(ts)
        assert np.all(np.diff(q) > 0)

    def test_ar_direction(self, cubic_exp):
        ts = np.linspace(-6.0, 6.0, 301)
        ts = ts[ts != 0.0]
        assert np.all(ts * cubic_exp.f(ts) - 4.0 * cubic_exp.F(ts) >= 0.0)

    def test_F_nonnegative_and_zero_at_zero(self, cubic_exp):
        ts = np.linspace(-8.0, 8.0, 400)
        assert np.all(cubic_exp.F(ts) >= 0.0)
        assert cubic_exp.F(0.0) == 0.0
        assert cubic_exp.G(0.0) == 0.0


class TestAudit:
    def test_default_family_all_pass(self, cubic_exp):
        audit = audit_hypotheses(cubic_exp)
        assert audit.all_pass
        assert audit.checks["H3_f"].margin >= -1e-12
        for _, check in audit.checks.items():
            assert check.n_samples > 0

    def test_asymmetric_and_restricted_pass(self):
        assert audit_hypotheses(builtin_family("cubic_quintic_exp", 1.0)).all_pass
        assert audit_hypotheses(builtin_family("cubic_exp", 1.0, sign_restricted=True)).all_pass

    def test_linear_family_fails_h2(self):
        ident = lambda t: np.asarray(t, dtype=float)
        sq = lambda t: 0.5 * np.asarray(t, dtype=float) ** 2
        lin = NonlinearityFamily(
            "linear", ident, ident, sq, sq,
            beta0=1.0, mu=2.1, M=1.0, kappa0=1.0, r1=2.0, exponential=False,
        )
        audit = audit_hypotheses(lin)
        assert audit.checks["H2_f"].status == "fail"

    def test_subcritical_cubic_fails_critical_growth(self):
        audit = audit_hypotheses(builtin_family("cubic"))
        assert audit.checks["H6_f"].status == "fail"
        assert audit.checks["H7_f"].status == "fail"
        assert audit.checks["H3_f"].status == "pass"

    def test_h7_tail_with_recorded_kappa0(self, cubic_exp):
        # kappa0 witness max(8 sqrt(e) V0 / beta0, pi/(beta0 r1)) + 1
        expected = max(8.0 * np.sqrt(np.e), np.pi / 2.0) + 1.0
        assert cubic_exp.kappa0 == pytest.approx(expected, rel=1e-13)
        audit = audit_hypotheses(cubic_exp)
        assert audit.checks["H7_f"].status == "pass"
        assert audit.checks["H7_f"].margin > 0

    def test_grid_must_span_ten(self, cubic_exp):
        with pytest.raises(ValueError):
            audit_hypotheses(cubic_exp, t_grid=np.linspace(-5, 5, 100))

    def test_default_grid_shape(self):
        grid = default_audit_grid()
        assert np.max(grid) >= 10.0
        assert np.min(np.abs(grid[grid != 0])) <= 1e-7


class TestTrudingerMoser:
    def test_zero_field(self):
        g = Grid(40.0, 64)
        assert trudinger_moser_functional(Field(g, np.zeros(64)), np.pi) == 0.0

    def test_small_amplitude_taylor(self):
        g = Grid(40.0, 2048)
        bump = 1e-3 * np.exp(-g.x**2)
        u = Field(g, bump)
        beta = np.pi
        expected = beta * integrate(Field(g, bump**2))
        assert trudinger_moser_functional(u, beta) == pytest.approx(expected, rel=1e-3)

    def test_overflow_guard(self):
        g = Grid(40.0, 64)
        u = Field(g, np.full(64, 30.0))
        with pytest.raises(OverflowGuard) as exc:
            trudinger_moser_functional(u, 1.0)
        assert exc.value.where is not None

    def test_moser_sequence_divergence_trend(self):
        # super-threshold growth ratio must increase along the sequence
        g = Grid(40.0, 8192)
        ratios = []
        for n in (4, 16, 64):
            vals = np.zeros(g.n_points)
            ax = np.abs(g.x)
            r1 = 2.0
            vals[ax <= r1 / n] = np.sqrt(np.log(n))
            ring = (ax > r1 / n) & (ax <= r1)
            vals[ring] = np.log(r1 / ax[ring]) / np.sqrt(np.log(n))
            w = Field(g, vals)
            nrm = np.sqrt(seminorm_sq(w) + l2_norm(w) ** 2)
            wn = Field(g, vals / nrm)
            ratios.append(
                trudinger_moser_functional(wn, 4.0 * np.pi)
                / trudinger_moser_functional(wn, np.pi)
            )
        assert ratios[0] < ratios[1] < ratios[2]

    def test_positive_for_nonzero(self):
        g = Grid(40.0, 256)
        u = Field(g, 0.1 * np.exp(-g.x**2 / 4.0))
        assert trudinger_moser_functional(u, 2.0) > 0.0
