"""Shared helpers for building deterministic test fields."""

import numpy as np

from halfwave.energy import PairField
from halfwave.grids import Field, Grid


def smooth_random(grid: Grid, rng, modes: int = 8, amplitude: float = 1.0) -> Field:
    """Band-limited random field with unit-ish amplitude."""
    n = grid.n_points
    c = np.zeros(n, complex)
    c[0] = rng.normal()
    for m in range(1, modes + 1):
        c[m] = rng.normal() + 1j * rng.normal()
        c[-m] = np.conj(c[m])
    vals = np.fft.ifft(c).real * np.sqrt(n)
    peak = np.max(np.abs(vals))
    return Field(grid, amplitude * vals / peak)


def smooth_random_pair(grid: Grid, rng, amplitude: float = 0.5) -> PairField:
    return PairField(
        smooth_random(grid, rng, amplitude=amplitude),
        smooth_random(grid, rng, amplitude=amplitude),
    )


def gaussian_bump(grid: Grid, center: float = 0.0, width: float = 1.0, amp: float = 1.0) -> Field:
    return Field(grid, amp * np.exp(-((grid.x - center) ** 2) / (2.0 * width**2)))
