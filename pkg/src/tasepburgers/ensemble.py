"""Seed ensembles: per-run checks and aggregate statistics."""

from math import sqrt

import numpy as np

from .abdf import abdf_trajectory
from .burgers_field import profile, reconstruct_trajectory, trajectory
from .domain import Domain
from .noise import NoiseField, noise_bits
from .pairmap import pair_forward
from .tasep import TasepConfig
from .verification import (NON_ENTROPIC, TestFunction, conjugacy_check, edges, lax_condition,
                           rankine_hugoniot_residual, total_mass, weak_residual)

__all__ = ["random_config", "run_member", "run_ensemble", "random_test_functions"]


def random_config(domain, seed):
    """TASEP configuration with i.i.d. fair occupancies drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    return TasepConfig(domain, rng.integers(0, 2, domain.size))


def random_test_functions(frames, n, rng, r_t=0.4, r_x=1.0):
    """Bump test functions centred on points of random discontinuity lines
    (falling back to uniform centres when the field vanishes), with the time
    support kept inside the covered interval."""
    es = edges(frames)
    t_lo, t_hi = frames[0].t0, frames[-1].t0 + 1
    dom = frames[0].domain
    out = []
    for _ in range(n):
        if es:
            e = es[rng.integers(len(es))]
            t = float(e.t_start) + rng.random() * float(e.t_end - e.t_start)
            t = min(max(t, t_lo + r_t), t_hi - r_t)
            x = float(e.position(t)) if e.t_start <= t <= e.t_end else float(e.position(e.t_start))
        else:
            t = t_lo + r_t + rng.random() * (t_hi - t_lo - 2 * r_t)
            x = rng.random() * dom.size
        out.append(TestFunction(t, x, r_t, r_x))
    return out


def run_member(domain, T, seed, burgers=True, weak_tests=0, grid_step=0.01, tolerance=1e-3):
    """One ensemble member from ``seed`` (initial condition and noise)."""
    field = NoiseField(seed)
    eta = random_config(domain, seed)
    rep = {"seed": seed, "initial": eta.to_string()}
    conj = conjugacy_check(eta, field, T)
    rep["conjugacy"] = bool(conj)
    if not conj:
        rep["conjugacy_failure"] = conj.to_dict()
    states = abdf_trajectory(pair_forward(eta), field, T, check=True)
    creations = active = annihilations = 0
    for t, s in enumerate(states[:-1]):
        omega = noise_bits(seed, t, domain.sites)
        fire = (s.act == 1) & (omega == 0)
        creations += int(fire.sum())
        active += int(s.act.sum())
    rep.update(creations=creations, active_site_steps=active)
    if burgers:
        frames = trajectory(states[0], field, T)
        annihilations = sum(len(f.classification.C) for f in frames)
        es = edges(frames)
        rep["rh_ok"] = all(rankine_hugoniot_residual(e) == 0 for e in es)
        rep["non_entropic_edges"] = sum(lax_condition(e) == NON_ENTROPIC for e in es)
        masses = {total_mass(profile(frames[0], 0))}
        masses |= {total_mass(profile(f, f.t0 + 1)) for f in frames}
        rep["mass"] = str(next(iter(masses)))
        rep["mass_ok"] = len(masses) == 1
        rep["reconstruction_ok"] = reconstruct_trajectory(frames) == states
        rep["annihilations"] = annihilations
        if weak_tests:
            rng = np.random.default_rng(seed)
            res = [abs(weak_residual(frames, phi, grid_step))
                   for phi in random_test_functions(frames, weak_tests, rng)]
            rep["weak_max"] = max(res)
            rep["weak_ok"] = max(res) <= tolerance
    checks = [k for k in ("conjugacy", "rh_ok", "mass_ok", "reconstruction_ok", "weak_ok") if k in rep]
    rep["passed"] = all(rep[k] for k in checks)
    return rep


def run_ensemble(L, T, n_runs, seed=0, burgers=True, weak_tests=0, grid_step=0.01,
                 tolerance=1e-3):
    """Members with seeds ``seed .. seed + n_runs - 1`` folded in seed order."""
    if n_runs < 1:
        raise ValueError("n_runs must be >= 1")
    dom = Domain.ring(L)
    members = [run_member(dom, T, seed + k, burgers, weak_tests, grid_step, tolerance)
               for k in range(n_runs)]
    creations = sum(m["creations"] for m in members)
    active = sum(m["active_site_steps"] for m in members)
    rate = creations / active if active else float("nan")
    sigma = sqrt(0.25 / active) if active else float("nan")
    agg = {
        "L": L, "T": T, "n_runs": n_runs, "first_seed": seed,
        "pass_rate": sum(m["passed"] for m in members) / n_runs,
        "creations": creations,
        "active_site_steps": active,
        "creation_rate": rate,
        "creation_rate_sigma": sigma,
        "creation_rate_z": (rate - 0.5) / sigma if active else float("nan"),
    }
    if burgers:
        agg["annihilations"] = sum(m["annihilations"] for m in members)
        agg["non_entropic_edges"] = sum(m["non_entropic_edges"] for m in members)
    failures = [m for m in members if not m["passed"]]
    agg["failures"] = failures[:10]
    return agg, members
