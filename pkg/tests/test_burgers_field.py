from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tasepburgers.abdf import AbdfConfig, abdf_trajectory, vacuum
from tasepburgers.burgers_field import (Profile, QuasiParticle, build_frame, classify_sites,
                                        evaluate, integer_time_profile, profile, reconstruct,
                                        reconstruct_trajectory, trajectory)
from tasepburgers.domain import Domain
from tasepburgers.errors import AmbiguousVacuumError, TimeRangeError
from tasepburgers.noise import NoiseField
from tasepburgers.pairmap import pair_forward
from tasepburgers.presets import FIGURE1_NOISE, FIGURE1_SEED, figure1, search_seed
from tasepburgers.tasep import TasepConfig


def bp(pairs):
    return tuple((F(p), v) for p, v in pairs)


PROFILE_T0 = bp([(2, 2), (2.5, 0), (3.5, -2), (4, 2), (4.5, 0), (7, 2), (7.5, 0), (8.5, -2),
                 (9, 0), (9.5, -2), (10, 0), (12.5, -2), (13, 2), (13.5, 0), (14, 2),
                 (14.5, 0), (15, 2), (15.5, 0)])
PROFILE_T1 = bp([(0, 2), (0.5, 0), (5, 2), (5.5, 0), (8.5, -2), (9, 0), (9.5, -2), (10, 2),
                 (10.5, 0), (11.5, -2), (12, 0), (12.5, -2), (13, 2), (13.5, 0), (14, 2),
                 (14.5, 0), (15, 2), (15.5, 0)])
PROFILE_T2 = bp([(0, 2), (0.5, 0), (1, 2), (1.5, 0), (6, 2), (6.5, 0), (7.5, -2), (8, 0),
                 (8.5, -2), (9, 0), (11.5, -2), (12, 0), (14, 2), (14.5, 0), (15, 2), (15.5, 0)])


@pytest.fixture(scope="module")
def fig_frames():
    _, theta, field = figure1()
    return trajectory(theta, field, 2)


def test_figure_seed_is_smallest():
    assert search_seed(FIGURE1_NOISE) == FIGURE1_SEED


def test_classification_at_zero():
    _, theta, field = figure1()
    c = classify_sites(theta, field, 0)
    assert c.M_plus == {2, 7, 14, 15} and c.M_minus == {9, 10}
    assert c.A == {4, 13} and c.C == {3, 8}
    assert c.MA_iso_plus == {4, 13, 14, 15}
    assert c.MA_iso_minus == {10, 13}


def test_frozen_profiles(fig_frames):
    f0, f1 = fig_frames
    assert profile(f0, 0).breakpoints == PROFILE_T0
    assert profile(f0, 1).breakpoints == PROFILE_T1
    assert profile(f1, 1).breakpoints == PROFILE_T1
    assert profile(f1, 2).breakpoints == PROFILE_T2
    assert f0.next_arising == {10, 13}


def test_coalescing_pair_at_three_quarters(fig_frames):
    f0 = fig_frames[0]
    t = F(3, 4)
    assert evaluate(f0, t, F(11, 4)) == 2 and evaluate(f0, t, F(2.99)) == 2
    assert evaluate(f0, t, 3) == -2 and evaluate(f0, t, F(13, 4) - F(1, 100)) == -2
    assert evaluate(f0, t, F(13, 4)) == 0
    assert evaluate(f0, 0, F(9, 4)) == 2


def test_mass_constant(fig_frames):
    f0, f1 = fig_frames
    for t in [F(k, 8) for k in range(9)]:
        assert profile(f0, t).mass() == 2
        assert profile(f1, 1 + t).mass() == 2


def test_reconstruct_figure(fig_frames):
    f0, f1 = fig_frames
    assert reconstruct(f0) == f0.config
    assert reconstruct(f1) == f1.config == f0.next_config
    assert reconstruct(f1, 2).spin_string() == "++0000+0--00-0++"
    assert reconstruct(f1, 2).act_string() == "0001010000100100"
    with pytest.raises(TimeRangeError):
        reconstruct(f0, F(1, 2))


def random_ring_cfg(rng, L):
    return pair_forward(TasepConfig(Domain.ring(L), rng.integers(0, 2, L)))


def test_frame_ends_match_integer_time_profile():
    rng = np.random.default_rng(5)
    for k in range(300):
        L = 2 * int(rng.integers(2, 17))
        field = NoiseField(k)
        t0 = int(rng.integers(0, 50))
        frame = build_frame(random_ring_cfg(rng, L), field, t0)
        assert profile(frame, t0) == integer_time_profile(frame.config, field, t0)
        assert profile(frame, t0 + 1) == integer_time_profile(frame.next_config, field, t0 + 1)


@settings(max_examples=60)
@given(st.integers(2, 12), st.integers(0, 2 ** 32), st.integers(0, 20),
       st.fractions(0, 1), st.fractions(0, 40))
def test_profile_agrees_with_evaluate(h, seed, t0, s, x):
    rng = np.random.default_rng(seed)
    frame = build_frame(random_ring_cfg(rng, 2 * h), NoiseField(seed), t0)
    t = t0 + s
    assert profile(frame, t).value_at(x) == evaluate(frame, t, x)


def test_reconstruct_trajectory_random():
    rng = np.random.default_rng(6)
    for k in range(30):
        L = 2 * int(rng.integers(2, 13))
        cfg = random_ring_cfg(rng, L)
        field = NoiseField(100 + k)
        frames = trajectory(cfg, field, 10)
        assert reconstruct_trajectory(frames) == abdf_trajectory(cfg, field, 10)


def test_vacuum_handling():
    dom = Domain.ring(6)
    zero = Profile(dom, ())
    with pytest.raises(AmbiguousVacuumError):
        reconstruct(zero)
    # a vacuum that fires shows the -2/+2 jumps at its arising sites
    for seed in range(50):
        field = NoiseField(seed)
        v = vacuum(dom, 1)
        frames = trajectory(v, field, 3)
        assert reconstruct_trajectory(frames) == abdf_trajectory(v, field, 3)


def test_quasi_particles_standalone():
    q = QuasiParticle.right(0, 0, 2)
    assert q.intervals(1) == [(F(1, 2), F(1), 2)]
    q = QuasiParticle.left(0, 0, 2, h=1, v=F(1, 2))
    assert q.w == 1 and q.intervals(2) == [(F(-1), F(0), -1)]
    arise = QuasiParticle("arising", 3, 0, 1)
    assert arise.intervals(0) == []
    assert arise.intervals(F(1, 4)) == [(F(3), F(13, 4), 2), (F(11, 4), F(3), -2)]
    coal = QuasiParticle("coalescing", 3, 0, 1)
    assert coal.intervals(1) == []
    assert coal.value(F(1, 2), F(2.6)) == 2
    with pytest.raises(TimeRangeError):
        q.intervals(3)
    with pytest.raises(ValueError):
        QuasiParticle("bogus", 0, 0, 1)


def test_frame_json_ready(fig_frames):
    d = fig_frames[0].to_dict()
    assert d["seed"] == FIGURE1_SEED and d["classification"]["C"] == [3, 8]
    with pytest.raises(TimeRangeError):
        fig_frames[0].active(2)
