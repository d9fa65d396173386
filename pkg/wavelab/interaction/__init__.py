from wavelab.interaction.analysis import (
    InteractionRun,
    analyze_interaction,
    grid_stretch,
    profile_independence,
    run_interaction,
    span_cross_check,
)
from wavelab.interaction.decomposition import (
    KIND_ORDER,
    GradientDecomposition,
    decompose_gradient,
    decompose_series,
    gamma_matrices,
)
from wavelab.interaction.region import InteractionRegion, WaveSupport, interaction_region, wave_supports
from wavelab.interaction.tracking import (
    characteristic_speed,
    classify_waves,
    elasticity_verdict,
    interaction_index,
    type_preserved,
)

__all__ = [
    "GradientDecomposition",
    "InteractionRegion",
    "InteractionRun",
    "KIND_ORDER",
    "WaveSupport",
    "analyze_interaction",
    "characteristic_speed",
    "classify_waves",
    "decompose_gradient",
    "decompose_series",
    "elasticity_verdict",
    "gamma_matrices",
    "grid_stretch",
    "interaction_index",
    "interaction_region",
    "profile_independence",
    "run_interaction",
    "span_cross_check",
    "type_preserved",
    "wave_supports",
]
