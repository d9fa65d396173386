import math

import numpy as np
import pytest

from wavelab.core.errors import DetectionError
from wavelab.core.profiles import Profile
from wavelab.euler import GasParameters, characteristic_fields
from wavelab.fields import StateVector
from wavelab.interaction import (
    GradientDecomposition,
    analyze_interaction,
    classify_waves,
    decompose_gradient,
    elasticity_verdict,
    grid_stretch,
    interaction_index,
    interaction_region,
    profile_independence,
    run_interaction,
    span_cross_check,
    type_preserved,
    wave_supports,
)
from wavelab.solver import Grid1D, TimeSeries, WaveProfile, euler_grid
from wavelab.types import SupportScale, Verdict, WaveKind

G = GasParameters(kappa=1.4)
NX = 40
BAND = 3


def _synthetic(frames: int, extra_entropic_from: int = None):
    """
    Constant-state frames with hand-made supports moving one cell per frame.

    Under the default convention S+ travels left at u + c and S- right; dt is
    chosen so that is exactly one cell per frame.
    """
    dx = 1.0 / (NX - 1)
    dt = dx / math.sqrt(G.kappa)
    state = np.tile([1.0, 1.0, 0.0], (NX, 1))
    series = TimeSeries()
    decompositions = []
    for k in range(frames):
        series.record(k * dt, Grid1D(0.0, 1.0, state))
        strength = np.zeros((NX, 3))
        strength[30 - k : 30 - k + BAND, 0] = 1.0
        strength[5 + k : 5 + k + BAND, 2] = 1.0
        if extra_entropic_from is not None and k >= extra_entropic_from:
            strength[18 : 18 + BAND, 1] = 1.0
        decompositions.append(GradientDecomposition(xi=strength.copy(), strength=strength))
    return series, decompositions


def test_simple_wave_gradient_lies_on_its_family():
    grid = euler_grid(0.0, 1.0, 401, [WaveProfile(WaveKind.S_PLUS, Profile("bump", 0.05, 0.5, 0.2))], StateVector(1.0, 1.0, 0.0), G.kappa)
    dec = decompose_gradient(grid, characteristic_fields(G))
    peak = np.max(np.abs(dec.of(WaveKind.S_PLUS)))
    assert peak > 0.0
    assert np.max(np.abs(dec.of(WaveKind.ENTROPIC))) < 1e-3 * peak
    assert np.max(np.abs(dec.of(WaveKind.S_MINUS))) < 1e-3 * peak


def test_common_scale_ignores_absent_families():
    _, decompositions = _synthetic(20)
    for d in decompositions:
        d.strength[:, 1] = 1e-6
    common = wave_supports(decompositions, 0.02, SupportScale.COMMON)
    per_kind = wave_supports(decompositions, 0.02, SupportScale.PER_KIND)
    assert not common[WaveKind.ENTROPIC].present
    assert per_kind[WaveKind.ENTROPIC].present


def test_crossing_acoustic_bands_are_elastic():
    series, decompositions = _synthetic(30)
    region = interaction_region(series, decompositions, threshold=0.5, collar_cells=2)
    assert (region.k_min, region.k_max) == (12, 13)
    assert region.n_regions == 1
    assert not np.any(region.collar() & region.cells)

    entering, leaving = classify_waves(series, region, G.kappa)
    assert set(entering) == {WaveKind.S_PLUS, WaveKind.S_MINUS}
    assert set(leaving) == {WaveKind.S_PLUS, WaveKind.S_MINUS}
    assert interaction_index(entering, leaving) == 0
    assert type_preserved(entering, leaving) is True


def test_created_entropy_wave_raises_the_index():
    series, decompositions = _synthetic(30, extra_entropic_from=14)
    region = interaction_region(series, decompositions, threshold=0.5, collar_cells=2)
    entering, leaving = classify_waves(series, region, G.kappa)
    assert WaveKind.ENTROPIC not in entering
    assert WaveKind.ENTROPIC in leaving
    assert interaction_index(entering, leaving) == 1


def test_collar_outside_recorded_frames_raises():
    series, decompositions = _synthetic(15)
    region = interaction_region(series, decompositions, threshold=0.5, collar_cells=2)
    with pytest.raises(DetectionError):
        classify_waves(series, region, G.kappa)


def test_index_bookkeeping():
    with pytest.raises(DetectionError):
        interaction_index([WaveKind.S_PLUS, WaveKind.S_MINUS], [WaveKind.S_PLUS])
    assert elasticity_verdict(0) == Verdict.ELASTIC
    assert elasticity_verdict(1) == Verdict.NON_ELASTIC
    with pytest.raises(DetectionError):
        elasticity_verdict(-1)
    assert type_preserved([WaveKind.S_PLUS], [WaveKind.S_PLUS, WaveKind.ENTROPIC]) is None


def test_span_prediction():
    assert span_cross_check([WaveKind.S_PLUS, WaveKind.S_MINUS], G) == Verdict.ELASTIC
    assert span_cross_check([WaveKind.S_PLUS, WaveKind.ENTROPIC], G) == Verdict.NON_ELASTIC


def test_single_wave_has_no_interaction():
    waves = [WaveProfile(WaveKind.S_PLUS, Profile("bump", 0.05, 0.6, 0.1))]
    run = run_interaction(waves, StateVector(1.0, 1.0, 0.0), G, 0.1, domain=(0.0, 1.0, 200), seed=3)
    assert run.region.empty
    assert run.report.index == 0
    assert run.report.entering == [] and run.report.leaving == []
    assert run.report.t_min is None
    assert run.report.seed == 3


def test_report_from_an_existing_series():
    series, _ = _synthetic(20)
    run = analyze_interaction(series, G, threshold=0.02)
    assert run.report.index == 0
    assert run.report.thresholds["support"] == 0.02



def test_single_wave_index_is_shape_and_scale_independent():
    waves = [WaveProfile(WaveKind.S_PLUS, Profile("bump", 0.05, 0.6, 0.1))]
    base = StateVector(1.0, 1.0, 0.0)
    indices = profile_independence(waves, base, G, 0.1, domain=(0.0, 1.0, 200))
    assert indices == {"bump": 0, "cosine": 0, "gauss": 0}
    assert grid_stretch(waves, base, G, 0.1, domain=(0.0, 1.0, 200)) == (0, 0)

@pytest.mark.slow
def test_acoustic_pair_interacts_elastically():
    waves = [
        WaveProfile(WaveKind.S_PLUS, Profile("bump", 0.05, 0.75, 0.08)),
        WaveProfile(WaveKind.S_MINUS, Profile("bump", 0.05, 0.25, 0.08)),
    ]
    run = run_interaction(waves, StateVector(1.0, 1.0, 0.0), G, 0.45, domain=(0.0, 1.0, 400))
    assert not run.region.empty
    assert run.report.index == 0
    assert run.report.verdict == Verdict.ELASTIC
    assert set(run.report.leaving) == {WaveKind.S_PLUS, WaveKind.S_MINUS}


@pytest.mark.slow
def test_acoustic_entropic_pair_is_not_elastic():
    g = GasParameters(kappa=3.0)
    waves = [
        WaveProfile(WaveKind.S_PLUS, Profile("bump", 0.1, 1.2, 0.15)),
        WaveProfile(WaveKind.ENTROPIC, Profile("bump", 0.3, 0.8, 0.1)),
    ]
    run = run_interaction(waves, StateVector(1.0, 1.0, 0.0), g, 0.6, domain=(0.0, 1.6, 400), threshold=0.01)
    assert run.report.index >= 1
    assert run.report.verdict == Verdict.NON_ELASTIC
    assert WaveKind.S_MINUS in run.report.leaving


def _acoustic_pair():
    return [
        WaveProfile(WaveKind.S_PLUS, Profile("bump", 0.05, 0.75, 0.08)),
        WaveProfile(WaveKind.S_MINUS, Profile("bump", 0.05, 0.25, 0.08)),
    ]


@pytest.mark.slow
def test_acoustic_pair_index_is_stable_across_shapes():
    indices = profile_independence(_acoustic_pair(), StateVector(1.0, 1.0, 0.0), G, 0.45, domain=(0.0, 1.0, 400))
    assert indices == {"bump": 0, "cosine": 0, "gauss": 0}


@pytest.mark.slow
def test_acoustic_pair_index_survives_stretching():
    original, stretched = grid_stretch(_acoustic_pair(), StateVector(1.0, 1.0, 0.0), G, 0.45, domain=(0.0, 1.0, 400))
    assert original == stretched == 0
