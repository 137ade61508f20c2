import json
from fractions import Fraction as F

import numpy as np
import pytest

from tasepburgers.abdf import AbdfConfig
from tasepburgers.burgers_field import profile, trajectory
from tasepburgers.domain import Domain
from tasepburgers.errors import InvalidDomainError, SupportError
from tasepburgers.noise import NoiseField
from tasepburgers.pairmap import pair_forward
from tasepburgers.presets import figure1
from tasepburgers.tasep import TasepConfig
from tasepburgers.verification import (ENTROPIC, NON_ENTROPIC, EdgeSegment, TestFunction,
                                       bijection_check, conjugacy_check, continuity_check,
                                       edges, lax_condition, profile_from_edges,
                                       rankine_hugoniot_residual, to_json, total_mass,
                                       weak_residual)


def seed_where(pred, dom, t=0):
    from tasepburgers.noise import noise_bits
    for s in range(100000):
        if pred(noise_bits(s, t, dom.sites)):
            return s
    raise LookupError


def lone_mover_frames():
    # a +1 at 0 and a -1 at 4 on a ring of 8, with no creation in the frame
    cfg = AbdfConfig.from_strings("+000-000")
    for seed in range(100000):
        frames = trajectory(cfg, NoiseField(seed), 1)
        if not frames[0].classification.A and not frames[0].next_arising:
            return frames
    raise LookupError


def test_rh_and_lax_examples():
    shock = EdgeSegment(F(0), F(1), F(0), 0, 2, -2)
    assert rankine_hugoniot_residual(shock) == 0 and lax_condition(shock) == ENTROPIC
    front = EdgeSegment(F(0), F(1), F(0), 1, 0, 2)
    assert rankine_hugoniot_residual(front) == 0 and lax_condition(front) == NON_ENTROPIC
    back = EdgeSegment(F(0), F(1), F(0), 1, 2, 0)
    assert rankine_hugoniot_residual(back) == 0 and lax_condition(back) == ENTROPIC
    wrong = EdgeSegment(F(0), F(1), F(0), 0, 2, 0)
    assert rankine_hugoniot_residual(wrong) == 2


def test_lone_movers_give_two_edges_each():
    frames = lone_mover_frames()
    es = edges(frames)
    assert len(es) == 4
    assert sorted(e.slope for e in es) == [-1, -1, 1, 1]
    assert all(e.t_start == 0 and e.t_end == 1 for e in es)
    assert all(rankine_hugoniot_residual(e) == 0 for e in es)
    assert sum(lax_condition(e) == NON_ENTROPIC for e in es) == 2


def test_arising_pair_edges():
    # vacuum with one firing site in the second half: three edges from its anchor
    dom = Domain.ring(8)
    from tasepburgers.abdf import vacuum
    from tasepburgers.noise import noise_bits
    v = vacuum(dom, 0)
    for s in range(100000):
        w1 = noise_bits(s, 1, dom.sites)
        if np.all(noise_bits(s, 0, dom.sites)[v.act == 1] == 1):
            if (v.act[::-1][:1]).size and np.sum((1 - w1)[(np.arange(8) + 1) % 2 == 1]) == 1:
                break
    frames = trajectory(v, NoiseField(s), 1)
    es = edges(frames)
    assert len(es) == 3
    assert all(e.t_start == F(1, 2) for e in es)
    assert sorted(e.slope for e in es) == [-1, 0, 1]
    assert all(rankine_hugoniot_residual(e) == 0 for e in es)


def test_zero_field_residual_vanishes():
    dom = Domain.ring(8)
    from tasepburgers.abdf import vacuum
    from tasepburgers.noise import noise_bits
    v = vacuum(dom, 0)
    s = next(s for s in range(100000)
             if np.all(noise_bits(s, 0, dom.sites)[v.act == 1] == 1)
             and np.all(noise_bits(s, 1, dom.sites)[v.act == 0] == 1))
    frames = trajectory(v, NoiseField(s), 1)
    assert edges(frames) == []
    assert weak_residual(frames, TestFunction(0.5, 3.0, 0.4, 1.0), F(1, 100)) == 0.0


def test_single_mover_residual_small():
    frames = lone_mover_frames()
    phi = TestFunction(0.5, 0.75, 0.4, 1.0)
    assert abs(weak_residual(frames, phi, F(1, 100))) <= 1e-3


def test_residual_converges_second_order():
    _, theta, field = figure1()
    frames = trajectory(theta, field, 2)
    phi = TestFunction(1.1, 9.3, 0.4, 1.0)
    r = [abs(weak_residual(frames, phi, F(1, n))) for n in (100, 200, 400)]
    assert r[0] <= 1e-3
    assert r[0] / r[1] >= 1.8 and r[1] / r[2] >= 1.8


def test_support_errors():
    frames = lone_mover_frames()
    with pytest.raises(SupportError):
        weak_residual(frames, TestFunction(0.2, 1.0, 0.4, 1.0), F(1, 100))
    with pytest.raises(SupportError):
        weak_residual(frames, TestFunction(0.5, 1.0, 0.4, 5.0), F(1, 100))


def test_conjugacy_detects_corruption():
    eta, theta, field = figure1()
    assert conjugacy_check(eta, field, 20)
    act = theta.act.copy()
    act[4] = 0
    rep = conjugacy_check(eta, field, 5, abdf_initial=AbdfConfig(theta.domain, theta.spins, act))
    assert not rep and rep.failure_step == 1
    assert rep.seed == field.seed and rep.initial


def test_odd_ring_rejected():
    with pytest.raises(InvalidDomainError):
        Domain.ring(7)
    with pytest.raises(InvalidDomainError):
        bijection_check(18)


def test_bijection_small():
    for L in (4, 6, 8):
        rep = bijection_check(L)
        assert rep and rep.image_size == rep.lambda_size == 2 ** L


def test_mass_and_edge_profiles():
    rng = np.random.default_rng(9)
    for k in range(20):
        L = 2 * int(rng.integers(2, 12))
        cfg = pair_forward(TasepConfig(Domain.ring(L), rng.integers(0, 2, L)))
        frames = trajectory(cfg, NoiseField(k), 4)
        m0 = total_mass(profile(frames[0], 0))
        es = edges(frames)
        for _ in range(10):
            fr = frames[int(rng.integers(4))]
            t = fr.t0 + F(int(rng.integers(1, 1000)), 1000)
            if t.denominator <= 4:
                continue
            assert total_mass(profile(fr, t)) == m0
            assert profile_from_edges(es, t, fr.domain) == profile(fr, t)


def test_continuity_check():
    _, theta, field = figure1()
    frames = trajectory(theta, field, 3)
    rep = continuity_check(frames, 8.0, 2.0, F(1, 20), F(1, 100))
    assert rep["ok"] and rep["samples"] == 61
    with pytest.raises(ValueError):
        continuity_check(frames, 8.0, 2.0, F(1, 300), F(1, 100))


def test_to_json():
    frames = lone_mover_frames()
    out = json.loads(to_json(edges(frames)))
    assert len(out) == 4 and out[0]["rh_residual"] == "0"
    assert json.loads(to_json(bijection_check(4)))["image_size"] == 16
