#!/usr/bin/env python3
"""Admissibility audit of the built-in nonlinearities.

Samples every structural condition on a log-refined grid and prints the
margins, then illustrates the exponential-growth threshold: below the sharp
constant the Orlicz-type integral of normalized log-profile test functions
stays tame, above it the integral blows up along the sequence.
"""

import numpy as np

from halfwave import (
    Grid,
    audit_hypotheses,
    builtin_family,
    l2_norm,
    seminorm_sq,
    trudinger_moser_functional,
)
from halfwave.diagnostics import moser_field

print("=" * 72)
print("HYPOTHESIS AUDIT")
print("=" * 72)

for name, kwargs in (
    ("cubic_exp", {}),
    ("cubic_exp", {"sign_restricted": True}),
    ("cubic_quintic_exp", {}),
    ("cubic", {}),
):
    fam = builtin_family(name, beta0=1.0, **kwargs)
    audit = audit_hypotheses(fam)
    tag = name + (" (restricted)" if kwargs.get("sign_restricted") else "")
    print(f"\nfamily: {tag}   mu={fam.mu}  M={fam.M:.3g}  kappa0={fam.kappa0:.3g}")
    for key, status, margin, worst, n, note in audit.rows():
        print(f"  {key:5s} {status:12s} margin={margin: .3e}  ({note})")
    print(f"  => all pass: {audit.all_pass}")
    if name == "cubic":
        print("     (expected: the polynomial surrogate has no exponential growth,")
        print("      so the growth and tail conditions fail by construction)")

print()
print("=" * 72)
print("EXPONENTIAL-GROWTH THRESHOLD")
print("=" * 72)
print("integral(exp(beta w^2) - 1) for unit-norm truncated-log profiles;")
print("beta = pi stays bounded along the sequence, beta = 4 pi diverges.\n")

g = Grid(40.0, 8192)
print(f"{'n':>5s} {'beta = pi':>12s} {'beta = 4 pi':>14s} {'ratio':>10s}")
for n in (4, 16, 64):
    mf = moser_field(n, 2.0, g, V0=1.0)
    wn = mf.normalized
    lo = trudinger_moser_functional(wn, np.pi)
    hi = trudinger_moser_functional(wn, 4.0 * np.pi)
    print(f"{n:5d} {lo:12.5f} {hi:14.3f} {hi / lo:10.1f}")

print("\nnorm bookkeeping for the sequence (V0 = 1):")
print(f"{'n':>5s} {'seminorm^2':>12s} {'V0 ||.||_2^2':>12s} {'full norm':>12s}")
for n in (4, 16, 64):
    mf = moser_field(n, 2.0, g, V0=1.0)
    s = seminorm_sq(mf.raw)
    l2 = l2_norm(mf.raw) ** 2
    print(f"{n:5d} {s:12.5f} {l2:12.5f} {np.sqrt(s + l2):12.5f}")
