import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import fourier_direct
from tempaug.signal import (
    ConfigError,
    Fourier,
    FourierBasis,
    FourierConfig,
    Linear,
    RandomGaussianSmoothed,
    RandomPerFrame,
    Schedule,
    Sinusoidal,
    Static,
    fourier_schedule,
    linear_schedule,
    sample_baseline_schedule,
    sample_fourier_schedule,
    total_variation,
)

FOUR_BASES = [(0.1, 0.2, 0.9, 0), (0.3, 1.0, 0.9, 8), (0.2, 0.7, 0.6, 1), (0.4, 1.5, 0.8, 6)]


def test_zero_amplitude_is_constant(rng):
    cfg = FourierConfig(amp_range=(0.0, 0.0))
    s = sample_fourier_schedule(32, 9.0, cfg, rng)
    assert s.values.tolist() == [9.0] * 32


def test_single_basis_hits_range_endpoints():
    s = fourier_schedule(32, 9.0, [FourierBasis(1.0, 1.0, 1.0, 0)])
    assert s.values.min() == 0.0
    assert s.values.max() == 18.0


@pytest.mark.parametrize("M", [1.0, 5.0, 9.0, 17.5])
def test_four_reference_bases_match_direct_evaluation(M):
    s = fourier_schedule(32, M, [FourierBasis(*b) for b in FOUR_BASES])
    np.testing.assert_allclose(s.values, fourier_direct(32, M, FOUR_BASES), rtol=0, atol=1e-6)


def test_single_frame_degenerates_to_M(rng):
    assert fourier_schedule(1, 4.0, [FourierBasis(1.0, 0.7, 1.0, 0)]).values.tolist() == [4.0]
    assert sample_fourier_schedule(1, 4.0, FourierConfig(), rng).values.tolist() == [4.0]


def test_offset_must_fit():
    with pytest.raises(ValueError):
        fourier_schedule(4, 1.0, [FourierBasis(1.0, 1.0, 1.0, 4)])


@pytest.mark.parametrize(
    "cfg",
    [
        FourierConfig(num_bases=0),
        FourierConfig(freq_range=(0.0, 1.0)),
        FourierConfig(freq_range=(1.5, 0.2)),
        FourierConfig(amp_range=(0.5, 0.2)),
        FourierConfig(amp_range=(0.0, 1.5)),
    ],
)
def test_invalid_config_rejected(cfg, rng):
    with pytest.raises(ConfigError):
        sample_fourier_schedule(8, 1.0, cfg, rng)


def test_zero_frames_rejected(rng):
    with pytest.raises(ValueError):
        sample_fourier_schedule(0, 1.0, FourierConfig(), rng)


def test_deterministic_given_seed():
    a = sample_fourier_schedule(32, 9.0, FourierConfig(), np.random.default_rng(5))
    b = sample_fourier_schedule(32, 9.0, FourierConfig(), np.random.default_rng(5))
    assert a.values.tobytes() == b.values.tobytes()
    assert a.bases == b.bases


def test_offsets_disabled_gives_zero_offsets(rng):
    s = sample_fourier_schedule(16, 3.0, FourierConfig(offsets_enabled=False), rng)
    assert all(b.offset == 0 for b in s.bases)


@settings(max_examples=300, deadline=None)
@given(
    T=st.integers(1, 64),
    M=st.floats(0, 30),
    C=st.integers(1, 5),
    seed=st.integers(0, 2**32 - 1),
    amp=st.tuples(st.floats(0, 1), st.floats(0, 1)).map(sorted),
)
def test_bounded_and_convex(T, M, C, seed, amp):
    s = sample_fourier_schedule(T, M, FourierConfig(C, (0.2, 1.5), tuple(amp)), np.random.default_rng(seed))
    wa = sum(b.weight * b.amplitude for b in s.bases)
    assert abs(sum(b.weight for b in s.bases) - 1.0) <= 1e-9
    assert np.all(s.values >= M * (1 - wa) - 1e-9)
    assert np.all(s.values <= M * (1 + wa) + 1e-9)
    assert len(s.bases) == C and s.length == T


def test_static_baseline(rng):
    assert sample_baseline_schedule(Static(), 8, 5.0, rng).values.tolist() == [5.0] * 8


def test_linear_ramp_endpoints():
    assert linear_schedule(3, 10.0, 1.0, ascending=True).values.tolist() == [0.0, 10.0, 20.0]
    assert linear_schedule(3, 10.0, 1.0, ascending=False).values.tolist() == [20.0, 10.0, 0.0]
    assert linear_schedule(3, 10.0, 1.0, offset=1).values.tolist() == [20.0, 0.0, 10.0]


def test_linear_sampled_spans_its_amplitude(rng):
    for _ in range(20):
        s = sample_baseline_schedule(Linear(), 16, 6.0, rng)
        half = (s.values.max() - s.values.min()) / 2
        assert math.isclose(s.values.min() + half, 6.0, abs_tol=1e-9)


def test_random_per_frame_zero_amp(rng):
    s = sample_baseline_schedule(RandomPerFrame((0.0, 0.0)), 32, 9.0, rng)
    assert s.values.tolist() == [9.0] * 32


@pytest.mark.parametrize(
    "kind", [Linear(), Linear(False), Sinusoidal(), Sinusoidal(False), RandomPerFrame(), RandomGaussianSmoothed()]
)
def test_baselines_zero_amp_collapse_to_static(kind, rng):
    zero = type(kind)(**{**kind.__dict__, "amp_range": (0.0, 0.0)})
    assert sample_baseline_schedule(zero, 12, 7.0, rng).values.tolist() == [7.0] * 12


def test_sinusoidal_is_one_unit_frequency_basis(rng):
    s = sample_baseline_schedule(Sinusoidal(with_offset=False), 32, 9.0, rng)
    assert len(s.bases) == 1
    assert s.bases[0].frequency == 1.0 and s.bases[0].offset == 0 and s.bases[0].weight == 1.0


def test_gaussian_smoothed_spans_amplitude(rng):
    for _ in range(10):
        s = sample_baseline_schedule(RandomGaussianSmoothed(), 32, 9.0, rng)
        assert math.isclose(s.values.max() + s.values.min(), 18.0, abs_tol=1e-9)
        assert total_variation(s) > 0


@pytest.mark.parametrize(
    "values, expected", [([5, 5, 5], 0.0), ([0, 10, 20], 20.0), ([0, 10, 0, 10], 30.0), ([3], 0.0)]
)
def test_total_variation(values, expected):
    assert total_variation(Schedule(np.array(values, float), 0.0)) == expected


def test_schedule_serialization_round_trip(rng):
    s = sample_fourier_schedule(20, 9.0, FourierConfig(), rng)
    back = Schedule.from_dict(json.loads(s.to_json()))
    assert back.values.tobytes() == s.values.tobytes()
    assert back.bases == s.bases
    rows = s.to_csv().strip().splitlines()
    assert len(rows) == 20
    idx, mag = rows[3].split(",")
    assert int(idx) == 3 and float(mag) == pytest.approx(s.values[3], rel=1e-8)


def test_fourier_kind_sampler_matches_direct(rng):
    s = sample_baseline_schedule(Fourier(), 24, 9.0, rng)
    expected = fourier_direct(24, 9.0, [b.as_list() for b in s.bases])
    np.testing.assert_allclose(s.values, expected, atol=1e-6, rtol=0)


def test_shared_amplitude(rng):
    s = sample_fourier_schedule(32, 9.0, FourierConfig(shared_amplitude=True), rng)
    assert len({b.amplitude for b in s.bases}) == 1
    np.testing.assert_allclose(s.values, fourier_direct(32, 9.0, [b.as_list() for b in s.bases]), atol=1e-6, rtol=0)
