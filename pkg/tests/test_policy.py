import numpy as np
import pytest
from scipy import stats

from make_goldens import PIPELINE_CASES, pipeline_policy
from tempaug.clip import Clip
from tempaug.ops import OP_TABLE, OpKind
from tempaug.policy import RA, TA, UA, AppliedPolicy, Policy, SearchSpace, Step, apply_policy, sample_policy
from tempaug.signal import ConfigError, Fourier, FourierConfig, Linear, RandomPerFrame, Schedule, Static

PIPELINE = np.load(__import__("pathlib").Path(__file__).parent / "goldens" / "pipeline.npz")
ZERO_AMP = FourierConfig(amp_range=(0.0, 0.0))


def test_search_spaces_nest():
    assert len(SearchSpace.Org.ops) == 14 and len(SearchSpace.Mod.ops) == 17
    assert set(SearchSpace.Org.ops) < set(SearchSpace.Mod.ops)
    assert SearchSpace.Wide.ops == SearchSpace.Org.ops and SearchSpace.WideMod.ops == SearchSpace.Mod.ops
    assert SearchSpace.Wide.wide and SearchSpace.WideMod.wide and not SearchSpace.Mod.wide


def test_ra_static_default():
    ap = sample_policy(Policy(RA(2, 9.0, 1.0)), 16, seed=3)
    assert len(ap.steps) == 2
    for step in ap.steps:
        assert step.applied and step.magnitude == 9.0
        assert step.schedule.values.tolist() == [9.0] * 16
        assert step.schedule.base_magnitude == step.magnitude


@pytest.mark.parametrize("family", [RA(), TA(), UA()])
@pytest.mark.parametrize("space", list(SearchSpace))
def test_zero_amplitude_dynamic_equals_static_draw(family, space):
    for seed in range(20):
        s = sample_policy(Policy(family, Static(), space), 12, seed, (10, 10))
        d = sample_policy(Policy(family, Fourier(ZERO_AMP), space), 12, seed, (10, 10))
        for a, b in zip(s.steps, d.steps):
            assert (a.op, a.applied, a.direction, a.magnitude, a.region) == (b.op, b.applied, b.direction, b.magnitude, b.region)
            assert a.schedule.values.tobytes() == b.schedule.values.tobytes()


def test_dynamic_schedules_vary_and_use_step_magnitude():
    ap = sample_policy(Policy(UA(4), Fourier()), 32, seed=9)
    for step in ap.steps:
        assert step.schedule.base_magnitude == step.magnitude
        if not OP_TABLE[step.op].parameterless:
            assert not step.schedule.is_constant()
        else:
            assert step.schedule.is_constant()


def test_steps_draw_independent_schedules():
    ap = sample_policy(Policy(RA(3, 9.0), Fourier(), SearchSpace.Org), 32, seed=11)
    vals = [s.schedule.values.tobytes() for s in ap.steps if not OP_TABLE[s.op].parameterless]
    assert len(set(vals)) == len(vals)


def test_ta_step_shape():
    ap = sample_policy(Policy(TA()), 8, seed=1)
    assert len(ap.steps) == 1 and ap.steps[0].applied
    assert ap.steps[0].magnitude in range(31)


def test_ua_draws():
    mags, gates = [], []
    for seed in range(400):
        ap = sample_policy(Policy(UA()), 4, seed)
        assert len(ap.steps) == 2
        mags += [s.magnitude for s in ap.steps]
        gates += [s.applied for s in ap.steps]
    assert 0 <= min(mags) and max(mags) <= 30
    assert stats.kstest(np.array(mags) / 30, "uniform").pvalue > 0.01
    # apply probability uniform in [0, 1] gives an overall rate of one half
    assert abs(np.mean(gates) - 0.5) < 4 * np.sqrt(0.25 / len(gates))


def test_ta_op_and_magnitude_distribution():
    n = 10_000
    space = SearchSpace.Mod
    ops, mags = [], []
    for seed in range(n):
        step = sample_policy(Policy(TA(), Static(), space), 1, seed, (8, 8)).steps[0]
        ops.append(space.ops.index(step.op))
        mags.append(int(step.magnitude))
    k = len(space.ops)
    counts = np.bincount(ops, minlength=k)
    sigma = np.sqrt(n * (1 / k) * (1 - 1 / k))
    assert np.all(np.abs(counts - n / k) <= 3 * sigma + 1e-9)
    assert stats.chisquare(np.bincount(mags, minlength=31)).pvalue > 0.01


def test_ra_probability_gate_is_per_clip():
    n = 4000
    applied = [s.applied for seed in range(n) for s in sample_policy(Policy(RA(1, 9.0, 0.3)), 8, seed).steps]
    assert stats.binomtest(sum(applied), n, 0.3).pvalue > 0.01
    assert not any(s.applied for seed in range(50) for s in sample_policy(Policy(RA(2, 9.0, 0.0)), 8, seed).steps)


@pytest.mark.parametrize(
    "policy", [Policy(RA(0)), Policy(RA(2, 31.0)), Policy(RA(2, 9.0, 1.5)), Policy(UA(0))]
)
def test_invalid_policy(policy):
    with pytest.raises(ConfigError):
        sample_policy(policy, 8, 0)


def test_erase_needs_frame_size():
    pol = Policy(TA(), Static(), SearchSpace.Mod)
    seed = next(s for s in range(500) if sample_policy(pol, 2, s, (4, 4)).steps[0].op is OpKind.DynamicRandomErase)
    with pytest.raises(ValueError):
        sample_policy(pol, 2, seed)
    region = sample_policy(pol, 2, seed, (30, 40)).steps[0].region
    assert 0 <= region.center_x < 40 and 0 <= region.center_y < 30 and 1 / 3 <= region.aspect <= 3


def test_apply_no_steps_applied_is_identity(make_clip, rng):
    clip = make_clip(rng, T=5)
    ap = sample_policy(Policy(RA(3, 20.0, 0.0), Fourier()), 5, seed=4, frame_size=(clip.height, clip.width))
    assert apply_policy(ap, clip) == clip


def test_static_rotate_zero_is_identity(make_clip, rng):
    clip = make_clip(rng, T=4)
    ap = AppliedPolicy("ra", SearchSpace.Org, 0, [Step(OpKind.Rotate, True, 1, 0.0, Schedule.constant(4, 0.0))])
    assert apply_policy(ap, clip) == clip


def test_static_mode_treats_frames_identically(rng):
    frame = rng.integers(0, 256, (12, 14, 3), dtype=np.uint8)
    clip = Clip(np.stack([frame] * 6))
    for family in (RA(), TA(), UA()):
        for seed in range(10):
            ap = sample_policy(Policy(family, Static(), SearchSpace.WideMod), 6, seed, (12, 14))
            out = apply_policy(ap, clip).frames
            assert all(np.array_equal(out[0], f) for f in out[1:])


def test_apply_length_mismatch(make_clip, rng):
    ap = sample_policy(Policy(RA()), 5, seed=1)
    with pytest.raises(ValueError):
        apply_policy(ap, make_clip(rng, T=4))


@pytest.mark.parametrize("kind", [Fourier(), Linear(), RandomPerFrame(), Static()])
def test_serialized_policy_reapplies_identically(kind, make_clip, rng):
    clip = make_clip(rng, T=6, H=12, W=10)
    for seed in range(8):
        ap = sample_policy(Policy(UA(3), kind, SearchSpace.WideMod), 6, seed, (12, 10))
        again = AppliedPolicy.from_json(ap.to_json())
        assert again.to_json() == ap.to_json()
        assert apply_policy(again, clip) == apply_policy(ap, clip)


@pytest.mark.parametrize("key", sorted(PIPELINE_CASES))
def test_policy_pipeline_goldens(key):
    space, seed = PIPELINE_CASES[key]
    clip = Clip(PIPELINE["__input__"])
    ap = sample_policy(pipeline_policy(space), clip.num_frames, seed, (clip.height, clip.width))
    np.testing.assert_array_equal(apply_policy(ap, clip).frames, PIPELINE[key])


def test_timings_collected(make_clip, rng):
    clip = make_clip(rng, T=3)
    timings = {}
    ap = sample_policy(Policy(RA(2, 9.0, 1.0)), 3, seed=5)
    apply_policy(ap, clip, timings)
    assert set(timings) == {s.op.value for s in ap.steps}
