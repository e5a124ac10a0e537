"""Independent slow oracles used by the test suite.

Everything here deliberately avoids the FFT code paths it is used to check:
the singular-integral oracle goes through adaptive quadrature of the
periodized kernel, the Gagliardo oracle through a dense double sum.
"""

import numpy as np
from scipy.integrate import quad


def periodized(fun, L, images=2):
    """Periodize a decaying function over a box of length L."""

    def wrapped(t):
        return sum(fun(t + m * L) for m in range(-images, images + 1))

    return wrapped


def pv_half_laplacian(fun, x0, L, delta=1e-3):
    """(-Delta)^{1/2} of a smooth periodic function at one point.

    Adaptive quadrature of (1/pi) PV int (u(x)-u(y)) K(x-y) dy over one
    period, with the periodized kernel K(z) = (pi/L)^2 / sin^2(pi z/L) and
    the singular cell |z| < delta handled by the Taylor value -u''(x)*delta.
    """
    ux = fun(x0)

    def integrand(z):
        kper = (np.pi / L) ** 2 / np.sin(np.pi * z / L) ** 2
        return (2.0 * ux - fun(x0 + z) - fun(x0 - z)) * kper

    val, _ = quad(
        integrand,
        delta,
        0.5 * L,
        limit=200,
        epsabs=1e-13,
        epsrel=1e-13,
        points=[0.01, 0.1, 1.0, 5.0],
    )
    step = 1e-4
    udd = (fun(x0 + step) - 2.0 * ux + fun(x0 - step)) / step**2
    return (val - udd * delta) / np.pi


def gagliardo_double_sum(u, v, x, L, V0):
    """H^{1/2} inner product by brute-force double sum.

    (1/2pi) * sum_{i != j} (u_i-u_j)(v_i-v_j) K(x_i-x_j) h^2 + V0 h sum u v,
    periodized kernel, diagonal excluded.
    """
    n = x.size
    h = L / n
    dx = x[:, None] - x[None, :]
    kper = (np.pi / L) ** 2 / np.sin(np.pi * dx / L + np.eye(n)) ** 2
    du = u[:, None] - u[None, :]
    dv = v[:, None] - v[None, :]
    np.fill_diagonal(kper, 0.0)
    semi = np.sum(du * dv * kper) * h**2 / (2.0 * np.pi)
    return semi + V0 * h * float(np.dot(u, v))


def antiderivative(f, t, **kw):
    """Adaptive quadrature of int_0^t f."""
    val, _ = quad(f, 0.0, t, limit=200, epsabs=1e-14, epsrel=1e-14, **kw)
    return val
