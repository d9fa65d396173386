import numpy as np
import pytest

from wavelab.core.errors import CFLViolationError, StateDomainError
from wavelab.core.profiles import Profile
from wavelab.euler import GasParameters
from wavelab.fields import StateVector
from wavelab.solver import (
    FullEulerSystem,
    Grid1D,
    ReducedKappa3System,
    ReducedSoundSystem,
    SystemFactory,
    WaveProfile,
    euler_grid,
    grid_from_csv,
    kappa3_initial_from_euler,
    residual_check,
    self_convergence,
    solve_euler,
    solve_reduced_kappa3,
    solve_reduced_sound,
    step_quasilinear,
)
from wavelab.types import Convention, SystemKind, WaveKind

G = GasParameters(kappa=1.4)


def _acoustic_pair():
    return [
        WaveProfile(WaveKind.S_PLUS, Profile("bump", 0.03, 0.3, 0.1)),
        WaveProfile(WaveKind.S_MINUS, Profile("bump", 0.03, 0.7, 0.1)),
    ]


def test_grid_validation():
    with pytest.raises(ValueError):
        Grid1D(0.0, 1.0, np.ones((8, 3)))
    state = np.ones((20, 3))
    state[3, 0] = -1.0
    with pytest.raises(StateDomainError):
        Grid1D(0.0, 1.0, state)


def test_constant_state_is_preserved():
    grid = euler_grid(0.0, 1.0, 64, [], StateVector(1.0, 1.0, 0.3), G.kappa)
    series = solve_euler(grid, G, 0.2)
    assert series.times[-1] == pytest.approx(0.2)
    for frame in series.frames:
        np.testing.assert_array_equal(frame.state, grid.state)


def test_fixed_step_above_cfl_raises():
    grid = euler_grid(0.0, 1.0, 64, [], StateVector(1.0, 1.0, 0.0), G.kappa)
    with pytest.raises(CFLViolationError):
        step_quasilinear(grid, FullEulerSystem(G).matrices, dt=10.0 * grid.dx)


def test_recording_stride_keeps_final_frame():
    grid = euler_grid(0.0, 1.0, 101, _acoustic_pair(), StateVector(1.0, 1.0, 0.0), G.kappa)
    series = solve_euler(grid, G, 0.1, record_every=5)
    assert series.times[0] == 0.0
    assert series.times[-1] == pytest.approx(0.1)
    assert len(series.frames) == len(series.times)
    assert max(series.cfl_history) <= 0.45 + 1e-12


def test_conventions_are_mirror_images():
    base = StateVector(1.0, 1.0, 0.0)
    nx = 101
    grid = euler_grid(0.0, 1.0, nx, _acoustic_pair(), base, G.kappa)
    mirrored = Grid1D(0.0, 1.0, grid.state[::-1])

    positive = solve_euler(grid, G, 0.1, Convention.POSITIVE).final.state
    standard = solve_euler(mirrored, G, 0.1, Convention.STANDARD).final.state
    np.testing.assert_allclose(positive, standard[::-1], atol=1e-12)


def test_residual_check_measures_non_solutions():
    def candidate(x, t):
        return StateVector(1.0, 1.0 + 0.1 * x, 0.0)

    points = [(x, 0.0) for x in np.linspace(0.1, 0.9, 5)]
    assert residual_check(candidate, SystemKind.FULL, points, G) == pytest.approx(0.1, rel=1e-6)


def test_reduced_sound_convergence_is_first_order():
    system = ReducedSoundSystem(G)
    r1, r2 = Profile("gauss", 0.01, 0.4, 0.08), Profile("gauss", 0.01, 0.6, 0.08)

    def make_grid(nx):
        x = np.linspace(0.0, 1.0, nx)
        return system.grid(0.0, 1.0, np.column_stack([r1(x), r2(x)]))

    errors, rates = self_convergence(system, make_grid, 0.05, 101, levels=3)
    assert errors[1] < errors[0]
    assert 0.8 <= rates[0] <= 1.2


def test_reduced_sound_run_with_fixed_step():
    series = solve_reduced_sound(
        Profile("bump", 0.02, 0.3, 0.1), Profile("zero"), G, 0.05, domain=(0.0, 1.0, 101), dt=0.002
    )
    assert series.variables == ("r1", "r2")
    assert series.times[-1] == pytest.approx(0.05)
    np.testing.assert_allclose(series.final.column("r2"), 0.0, atol=1e-12)


def test_reduced_sound_warns_on_overlapping_invariants(caplog):
    with caplog.at_level("WARNING", logger="wavelab.solver.systems"):
        solve_reduced_sound(
            Profile("bump", 0.02, 0.5, 0.2), Profile("bump", 0.02, 0.55, 0.2), G, 0.01, domain=(0.0, 1.0, 51)
        )
    assert "share support" in caplog.text

    caplog.clear()
    with caplog.at_level("WARNING", logger="wavelab.solver.systems"):
        solve_reduced_sound(
            Profile("bump", 0.02, 0.3, 0.1), Profile("bump", 0.02, 0.7, 0.1), G, 0.01, domain=(0.0, 1.0, 51)
        )
    assert "share support" not in caplog.text

def test_reduced_kappa3_requires_kappa_three():
    with pytest.raises(ValueError):
        ReducedKappa3System(G)
    assert isinstance(SystemFactory.create_system(SystemKind.FULL, G), FullEulerSystem)


@pytest.mark.slow
def test_reduced_kappa3_tracks_full_euler_under_refinement():
    waves = [
        WaveProfile(WaveKind.S_PLUS, Profile("bump", 0.05, 0.6, 0.1)),
        WaveProfile(WaveKind.ENTROPIC, Profile("bump", 0.2, 0.4, 0.1)),
    ]
    distances = []
    for nx in (51, 101, 201):
        initial = kappa3_initial_from_euler(euler_grid(0.0, 1.0, nx, waves, StateVector(1.0, 1.0, 0.0), 3.0))
        run = solve_reduced_kappa3(initial, 0.05)
        assert max(run.spectrum_errors) < 1e-8
        distances.append(run.final_distance)
    assert distances[0] > distances[1] > distances[2]


def test_grid_from_csv(tmp_path):
    path = tmp_path / "initial.csv"
    rows = ["# x,rho,p,u"] + [f"{x},{1.0 + x},{2.0},{0.0}" for x in np.linspace(0.0, 1.0, 11)]
    path.write_text("\n".join(rows) + "\n")
    grid = grid_from_csv(path, nx=21)
    assert grid.nx == 21
    np.testing.assert_allclose(grid.column("rho"), 1.0 + grid.x)
    np.testing.assert_allclose(grid.column("p"), 2.0)
