from wavelab.solver.grid import Grid1D, TimeSeries, refined_nodes
from wavelab.solver.initial import WaveProfile, euler_grid, grid_from_csv, wave_states
from wavelab.solver.schemes import cfl_dt, eigensystem, max_gradient, step_quasilinear
from wavelab.solver.systems import (
    CoupledRun,
    FullEulerSystem,
    QuasilinearSystem,
    ReducedKappa3System,
    ReducedSoundSystem,
    SystemFactory,
    kappa3_initial_from_euler,
    residual_check,
    self_convergence,
    solve_euler,
    solve_quasilinear,
    solve_reduced_kappa3,
    solve_reduced_sound,
)

__all__ = [
    "CoupledRun",
    "FullEulerSystem",
    "Grid1D",
    "QuasilinearSystem",
    "ReducedKappa3System",
    "ReducedSoundSystem",
    "SystemFactory",
    "TimeSeries",
    "WaveProfile",
    "cfl_dt",
    "eigensystem",
    "euler_grid",
    "grid_from_csv",
    "kappa3_initial_from_euler",
    "max_gradient",
    "refined_nodes",
    "residual_check",
    "self_convergence",
    "solve_euler",
    "solve_quasilinear",
    "solve_reduced_kappa3",
    "solve_reduced_sound",
    "step_quasilinear",
    "wave_states",
]
