import numpy as np
import pytest

from halfwave.errors import InvalidField
from halfwave.families import builtin_family
from halfwave.grids import Field, Grid
from halfwave.nehari import SolverConfig, solve_ground_state
from halfwave.semiclassical import (
    POTENTIALS,
    Potential,
    autonomous_level_vs_theta,
    concentration_sweep,
    constant_potential,
    double_well,
    single_well,
    solve_rescaled,
)


@pytest.fixture(scope="module")
def fam():
    return builtin_family("cubic_exp", beta0=1.0)


@pytest.fixture(scope="module")
def sweep_grid():
    # h ~ 0.02 resolves the profile; box reaches the potential plateau
    return Grid(80.0, 4096)


@pytest.fixture(scope="module")
def cfg():
    return SolverConfig(restarts=1, seed=0)


class TestPotentials:
    def test_single_well_shape(self):
        pot = single_well(1.0, 2.0)
        assert pot.evaluate(np.array([0.0]))[0] == pytest.approx(1.0)
        assert pot.evaluate(np.array([100.0]))[0] == pytest.approx(2.0, rel=1e-3)
        assert pot.minima == (0.0,)

    def test_double_well_minima(self):
        pot = double_well(1.0, 2.0, separation=2.0)
        vals = pot.evaluate(np.array([-2.0, 0.0, 2.0]))
        assert vals[0] == pytest.approx(1.0)
        assert vals[2] == pytest.approx(1.0)
        assert vals[1] == pytest.approx(2.0)

    def test_invalid_bounds(self):
        with pytest.raises(InvalidField):
            Potential("bad", lambda x: x, V0=2.0, Vinf=1.0, minima=(0.0,))

    def test_rescaled_values_guarded(self, sweep_grid):
        pot = single_well(1.0, 2.0)
        vals = pot.rescaled_values(sweep_grid, 0.5)
        assert np.min(vals) >= 1.0 - 1e-12
        with pytest.raises(InvalidField):
            pot.rescaled_values(sweep_grid, -1.0)

    def test_box_check(self, sweep_grid):
        pot = single_well(1.0, 2.0)
        pot.check_box(sweep_grid, 0.25)
        with pytest.raises(InvalidField):
            pot.check_box(sweep_grid, 0.005)

    def test_registry(self):
        assert set(POTENTIALS) == {"constant", "single_well", "double_well"}


class TestSolveRescaled:
    def test_constant_potential_reduces_to_autonomous(self, fam, cfg):
        grid = Grid(40.0, 1024)
        auto = solve_ground_state(fam, 1.0, grid, cfg)
        res = solve_rescaled(1.0, constant_potential(1.0), fam, grid, cfg)
        assert res.level == pytest.approx(auto.level, rel=1e-6)

    def test_level_strictly_above_autonomous(self, fam, cfg, sweep_grid):
        auto = solve_ground_state(fam, 1.0, sweep_grid, cfg)
        res = solve_rescaled(1.0, single_well(1.0, 2.0), fam, sweep_grid, cfg)
        assert res.level > auto.level + 1e-3
        assert res.converged

    def test_level_inside_window_at_small_eps(self, fam, cfg, sweep_grid):
        res = solve_rescaled(0.125, single_well(1.0, 2.0), fam, sweep_grid, cfg)
        assert 0.0 < res.level < np.pi


class TestThetaScan:
    def test_strictly_increasing(self, fam, cfg):
        grid = Grid(40.0, 1024)
        scan = autonomous_level_vs_theta([0.5, 1.0, 2.0, 4.0], fam, grid, cfg)
        assert scan.strictly_increasing
        levels = [r.level for r in scan.records]
        assert all(b - a > 10.0 * cfg.outer_tol for a, b in zip(levels, levels[1:]))

    def test_theta_equals_v0_reproduces_autonomous(self, fam, cfg):
        grid = Grid(40.0, 1024)
        auto = solve_ground_state(fam, 1.0, grid, cfg)
        scan = autonomous_level_vs_theta([1.0, 2.0, 4.0, 8.0], fam, grid, cfg)
        assert scan.records[0].level == auto.level  # same code path exactly

    def test_rejects_bad_lists(self, fam, cfg):
        grid = Grid(40.0, 1024)
        with pytest.raises(InvalidField):
            autonomous_level_vs_theta([2.0, 1.0], fam, grid, cfg)
        with pytest.raises(InvalidField):
            autonomous_level_vs_theta([-1.0, 1.0], fam, grid, cfg)


class TestConcentrationSweep:
    def test_validation(self, fam, cfg, sweep_grid):
        pot = single_well(1.0, 2.0)
        with pytest.raises(InvalidField):
            concentration_sweep([1.0, 0.5, 0.25], pot, fam, sweep_grid, cfg)
        with pytest.raises(InvalidField):
            concentration_sweep([0.25, 0.5, 1.0, 2.0], pot, fam, sweep_grid, cfg)
        with pytest.raises(InvalidField):
            concentration_sweep([1.0, 0.9, 0.8, 0.7], pot, fam, sweep_grid, cfg)

    def test_sequential_sweep_concentrates(self, fam, cfg, sweep_grid):
        pot = single_well(1.0, 2.0)
        sweep = concentration_sweep([1.0, 0.5, 0.25, 0.125], pot, fam, sweep_grid, cfg)
        assert not sweep.errors
        assert [r.epsilon for r in sweep.records] == [1.0, 0.5, 0.25, 0.125]
        h = sweep_grid.spacing
        for a, b in zip(sweep.records, sweep.records[1:]):
            assert b.dist_to_minima <= 1.2 * a.dist_to_minima + 4.0 * h * b.epsilon
        last = sweep.records[-1]
        assert last.dist_to_minima <= 4.0 * h * last.epsilon
        assert last.gap12_cells <= 4
        assert last.profile_drift <= 0.05
        assert last.level <= 1.05 * sweep.autonomous_level
        assert sweep.levels_in_window(fam.beta0)
        levels = [r.level for r in sweep.records]
        assert levels == sorted(levels, reverse=True)

    def test_parallel_matches_sequential(self, fam, sweep_grid):
        pot = single_well(1.0, 2.0)
        cfg2 = SolverConfig(restarts=1, seed=0, threads=2)
        seq = concentration_sweep([1.0, 0.5, 0.25, 0.125], pot, fam, sweep_grid, cfg2)
        par = concentration_sweep(
            [1.0, 0.5, 0.25, 0.125], pot, fam, sweep_grid, cfg2, parallel=True
        )
        for a, b in zip(seq.records, par.records):
            assert abs(a.level - b.level) / a.level <= 1e-4

    def test_gauge_consistency_of_maximum(self, fam, sweep_grid):
        # multi-start from different seeds lands on the same maximum cell
        pot = single_well(1.0, 2.0)
        xs = []
        for seed in (0, 1):
            res = solve_rescaled(
                0.5, pot, fam, sweep_grid, SolverConfig(restarts=2, seed=seed)
            )
            prof = np.abs(res.w.u.values) + np.abs(res.w.v.values)
            xs.append(sweep_grid.x[int(np.argmax(prof))])
        assert abs(xs[0] - xs[1]) <= sweep_grid.spacing

    def test_double_well_lands_on_a_well(self, fam, sweep_grid):
        pot = double_well(1.0, 2.0, separation=2.0)
        res = solve_rescaled(0.25, pot, fam, sweep_grid, SolverConfig(restarts=1, seed=0))
        prof = np.abs(res.w.u.values) + np.abs(res.w.v.values)
        x_eps = 0.25 * sweep_grid.x[int(np.argmax(prof))]
        assert min(abs(x_eps - 2.0), abs(x_eps + 2.0)) <= 0.5
