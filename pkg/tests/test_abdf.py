import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tasepburgers.abdf import (AbdfConfig, abdf_flow, abdf_step, abdf_step_rows,
                               activation_record, activation_record_right, check_config,
                               lambda0_rows, validate_lambda0, vacuum)
from tasepburgers.domain import Domain
from tasepburgers.errors import InvalidConfigError
from tasepburgers.noise import NoiseField, noise_bits
from tasepburgers.pairmap import pair_forward, pair_rows
from tasepburgers.tasep import TasepConfig, tasep_step

# drawn spins on sites 2..15 with their activation subscripts
FIG1_SPINS = [1, 0, 0, 0, 0, 1, 0, -1, -1, 0, 0, 0, 1, 1]
FIG1_ACT = [0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 1, 0, 0]
# rows t = 1, 2 of the dynamics sample on sites 2..15
FIG2 = {
    1: ([0, 0, 0, 1, 0, 0, 0, -1, 0, 0, -1, 0, 1, 1],
        [1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0]),
    2: ([0, 0, 0, 0, 1, 0, -1, -1, 0, 0, -1, 0, 1, 1],
        [0, 1, 0, 1, 0, 0, 0, 0, 1, 0, 0, 1, 0, 0]),
}
# ring of 16 embedding the drawn window at sites 2..15, and a seed whose
# noise creates pairs at {4, 13} in step 1 and matches the drawn step 2
RING16 = "00+0000+0--000++"
FIG_SEED = 3592


def fig_config():
    return AbdfConfig.from_strings(RING16)


def test_figure1_window_valid_on_a_line():
    dom = Domain.line(2, 15, 0, 0)
    assert validate_lambda0(FIG1_SPINS, dom)


def test_figure1_activation_record():
    cfg = fig_config()
    assert cfg.act[2:].tolist() == FIG1_ACT
    assert cfg.act[3:7].tolist() == [0, 1, 0, 1]


def test_lambda0_examples():
    line = Domain.line(0, 2, 0, 1)
    assert validate_lambda0([1, 0, -1], line)
    # the right tail spin +1 sits at gap 0 after -1
    assert not validate_lambda0([1, 0, -1], Domain.line(0, 2, 0, 0))
    rep = validate_lambda0([1, -1, 1], line)
    assert not rep and rep.pair == (0, 1)
    assert not validate_lambda0([0, 0, 0, 0], Domain.ring(4))


def test_single_spin_rings_invalid():
    for L in (4, 6, 8):
        for x in range(L):
            for s in (1, -1):
                spins = np.zeros(L, dtype=np.int8)
                spins[x] = s
                assert not validate_lambda0(spins, Domain.ring(L))


def test_lambda0_matches_pair_image():
    for L in (4, 6, 8):
        etas = np.array(list(itertools.product((0, 1), repeat=L)), dtype=np.int8)
        image = {r.tobytes() for r in pair_rows(etas)[0]}
        allsp = np.array(list(itertools.product((-1, 0, 1), repeat=L)), dtype=np.int8)
        ok = lambda0_rows(allsp)
        for row, flag in zip(allsp, ok):
            if row.any():
                assert (row.tobytes() in image) == bool(flag)
                assert bool(validate_lambda0(row, Domain.ring(L))) == bool(flag)


def test_activation_record_rejects_vacuum():
    with pytest.raises(InvalidConfigError):
        activation_record(np.zeros(6, dtype=np.int8), Domain.ring(6))


def test_left_right_coherence_random():
    rng = np.random.default_rng(0)
    for _ in range(10000):
        L = int(rng.integers(2, 17)) * 2
        eta = rng.integers(0, 2, L)
        spins = pair_rows(eta)[0]
        if not spins.any():
            continue
        dom = Domain.ring(L)
        assert np.array_equal(activation_record(spins, dom), activation_record_right(spins, dom))


def test_act_zero_on_occupied_sites():
    rng = np.random.default_rng(1)
    for _ in range(200):
        cfg = pair_forward(TasepConfig(Domain.ring(20), rng.integers(0, 2, 20)))
        assert not np.any((cfg.spins != 0) & (cfg.act != 0))


def test_two_step_replay_rows():
    f = NoiseField(FIG_SEED)
    cfg = fig_config()
    for t in (1, 2):
        out = abdf_flow(cfg, f, t)
        spins, act = FIG2[t]
        assert out.spins[2:].tolist() == spins
        assert out.act[2:].tolist() == act
    first = abdf_step(cfg, f, 1)
    assert sorted(np.flatnonzero(first.spins == 1)) == [0, 5, 14, 15]
    assert sorted(np.flatnonzero(first.spins == -1)) == [9, 12]
    assert sorted(np.flatnonzero(first.act)) == [2, 4, 7, 10, 13]


def test_figure_seed_satisfies_creation_pattern():
    row0 = noise_bits(FIG_SEED, 0, np.arange(16))
    active = np.flatnonzero(fig_config().act)
    assert sorted(active[row0[active] == 0]) == [4, 13]


def test_head_on_annihilation():
    # + at 1, - at 3 with inactive site 2 in between
    cfg = AbdfConfig.from_strings("0+0-00")
    for seed in range(10):
        out = abdf_step(cfg, NoiseField(seed), 1)
        assert out.spins[2] == 0


def test_flow_zero_is_identity():
    cfg = fig_config()
    assert abdf_flow(cfg, NoiseField(1), 0) == cfg


def ring_etas(max_L=24):
    return st.integers(2, max_L // 2).flatmap(
        lambda h: st.lists(st.integers(0, 1), min_size=2 * h, max_size=2 * h))


@given(ring_etas(), st.integers(0, 2 ** 32), st.integers(0, 20), st.integers(0, 20))
def test_cocycle(bits, seed, t, s):
    cfg = pair_forward(TasepConfig(Domain.ring(len(bits)), bits))
    f = NoiseField(seed)
    assert abdf_flow(cfg, f, t + s) == abdf_flow(abdf_flow(cfg, f, s), f, t, start=s)


@given(ring_etas(64), st.integers(0, 2 ** 32), st.integers(1, 40))
def test_closure_and_range(bits, seed, T):
    cfg = pair_forward(TasepConfig(Domain.ring(len(bits)), bits))
    f = NoiseField(seed)
    for t in range(1, T + 1):
        cfg = abdf_step(cfg, f, t)
        assert set(np.unique(cfg.spins)) <= {-1, 0, 1}
        check_config(cfg)


def test_vacuum_flag_conditions_verbatim():
    # brute force: the flag must equal the parity bookkeeping of the pair
    # image on every ring of size 4 and 6
    for L in (4, 6):
        etas = np.array(list(itertools.product((0, 1), repeat=L)), dtype=np.int8)
        spins, act, _ = pair_rows(etas)
        for om in itertools.product((0, 1), repeat=L):
            om = np.array(om, dtype=np.int8)
            new, new_act, alt = abdf_step_rows(spins, act, om)
            empty = ~new.any(axis=1)
            cond = ((spins[:, 0] == -1) | ((act[:, -1] == 1) & (om[-1] == 1))
                    | ((act[:, 0] == 1) & (om[0] == 0)))
            assert np.array_equal(alt[empty], cond[empty].astype(np.int8))
            assert np.all(alt[~empty] == -1)


def test_vacuum_config_and_checks():
    dom = Domain.ring(6)
    v = vacuum(dom, 1)
    assert v.is_vacuum and v.act.tolist() == [1, 0, 1, 0, 1, 0]
    check_config(v)
    with pytest.raises(InvalidConfigError):
        check_config(AbdfConfig(dom, [0] * 6, [1, 0, 1, 0, 1, 0], 0))
    with pytest.raises(InvalidConfigError):
        check_config(AbdfConfig(dom, [0] * 6, [1, 0, 1, 0, 1, 0]))
    with pytest.raises(InvalidConfigError):
        AbdfConfig.from_spins([0] * 6, dom)
    with pytest.raises(InvalidConfigError):
        check_config(AbdfConfig(dom, [1, 0, 0, 0, 0, 1], [0, 0, 0, 0, 0, 0]))
    with pytest.raises(InvalidConfigError):
        abdf_step(AbdfConfig(dom, [1, -1, 0, 0, 0, 0], [0] * 6), NoiseField(0), 1)


def test_string_round_trip():
    cfg = fig_config()
    again = AbdfConfig.from_strings(cfg.spin_string(), cfg.act_string())
    assert again == cfg and hash(again) == hash(cfg)
    with pytest.raises(InvalidConfigError):
        AbdfConfig.from_strings("0+x-")


def test_line_window_interior_matches_tasep():
    # frozen tails only disturb the two boundary sites
    rng = np.random.default_rng(4)
    for k in range(2000):
        n = int(rng.integers(3, 12))
        tl, tr = (int(v) for v in rng.integers(0, 2, 2))
        dom = Domain.line(-3, n - 4, tl, tr)
        eta = TasepConfig(dom, rng.integers(0, 2, n))
        f = NoiseField(k)
        want = pair_forward(tasep_step(eta, f, 1))
        got = abdf_step(pair_forward(eta), f, 1)
        assert np.array_equal(want.spins[1:-1], got.spins[1:-1])
