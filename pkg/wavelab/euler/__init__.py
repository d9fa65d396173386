from wavelab.euler.model import (
    CharacteristicField,
    GasParameters,
    base_field,
    characteristic_fields,
    euler_matrices,
    euler_matrix,
    gamma_minus,
    gamma_plus,
    gamma_zero,
    h_acoustic,
    h_two,
    h_zero,
    reduced_matrices,
    reduced_matrix,
    reduced_matrix_closed_form,
    sound_speed,
    transformed_basis,
)
from wavelab.euler.waves import (
    DoubleWaveSolution,
    RiemannWaveSolution,
    SimpleWaveCurve,
    base_state,
    classical_double_wave,
    double_wave_state,
    integrate_double_wave,
    printed_double_wave_mismatch,
    propagation_sign,
    simple_wave,
    velocity_slope_error,
)

__all__ = [
    "CharacteristicField",
    "DoubleWaveSolution",
    "GasParameters",
    "RiemannWaveSolution",
    "SimpleWaveCurve",
    "base_field",
    "base_state",
    "characteristic_fields",
    "classical_double_wave",
    "double_wave_state",
    "euler_matrices",
    "euler_matrix",
    "gamma_minus",
    "gamma_plus",
    "gamma_zero",
    "h_acoustic",
    "h_two",
    "h_zero",
    "integrate_double_wave",
    "printed_double_wave_mismatch",
    "propagation_sign",
    "reduced_matrices",
    "reduced_matrix",
    "reduced_matrix_closed_form",
    "simple_wave",
    "sound_speed",
    "transformed_basis",
    "velocity_slope_error",
]
