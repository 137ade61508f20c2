"""Command-line front end: simulations, verification campaigns and exports.

Exit codes: 0 success, 2 unreadable or inconsistent configuration, 3 invalid
domain, 4 verification failure.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from .abdf import AbdfConfig, abdf_trajectory, check_config
from .burgers_field import profile, trajectory
from .domain import Domain
from .ensemble import random_config, random_test_functions, run_ensemble
from .errors import InvalidConfigError, InvalidDomainError, SupportError, TimeRangeError
from .export import (load_config, write_abdf_csv, write_json, write_profile_csv,
                     write_tasep_csv)
from .noise import NoiseField
from .pairmap import pair_forward, pair_inverse
from .presets import FIGURE1_SEED, PRESETS, alternating_preset, figure1
from .tasep import TasepConfig, tasep_trajectory
from .verification import (NON_ENTROPIC, bijection_check, conjugacy_check, edges,
                           lax_condition, rankine_hugoniot_residual, weak_residual)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_VERIFY = 4

MODES = ("simulate-tasep", "simulate-abdf", "simulate-burgers", "verify-conjugacy",
         "verify-bijection", "verify-weak", "export-profile", "ensemble")

DEFAULTS = {
    "seed": None, "domain": None, "horizon": 10, "preset": None, "tasep": None, "origin": 0,
    "spins": None, "act": None, "alt_flag": None, "alpha": 0, "grid_step": "0.01",
    "tolerance": 1e-3, "out": "tasepburgers-out", "L": None, "runs": 1, "n_runs": 10,
    "n_tests": 20, "times": None, "weak_tests": 0,
}


class ConfigError(Exception):
    pass


class VerificationFailed(Exception):
    def __init__(self, report):
        super().__init__("verification failed")
        self.report = report


def build_parser():
    p = argparse.ArgumentParser(prog="tasepburgers", description=__doc__.splitlines()[0])
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", help="JSON file with option values (command line wins)")
    p.add_argument("--seed", type=int)
    p.add_argument("--domain", help="ring:L or line:x_min:x_max:TT")
    p.add_argument("--horizon", type=int, help="number of steps T")
    p.add_argument("--preset", choices=PRESETS)
    p.add_argument("--tasep", help="initial occupancy as a 0/1 string")
    p.add_argument("--origin", type=int, help="site of the first character of --tasep")
    p.add_argument("--spins", help="initial ABDF spins over +, -, 0")
    p.add_argument("--act", help="initial activation record over 0/1")
    p.add_argument("--alt-flag", type=int, choices=(0, 1))
    p.add_argument("--alpha", type=int, choices=(0, 1), help="parity of the alternating preset")
    p.add_argument("--grid-step", help="quadrature step, e.g. 0.01 or 1/100")
    p.add_argument("--tolerance", type=float, help="bound on weak residuals")
    p.add_argument("--out", help="output directory")
    p.add_argument("--L", type=int, help="ring size for verify-bijection and ensemble")
    p.add_argument("--runs", type=int, help="random initial conditions for verify-conjugacy")
    p.add_argument("--n-runs", type=int, help="ensemble size")
    p.add_argument("--n-tests", type=int, help="test functions for verify-weak")
    p.add_argument("--weak-tests", type=int, help="test functions per ensemble member")
    p.add_argument("--times", help="comma separated times for export-profile")
    return p


def resolve(args):
    """Merge defaults, the config file and explicit flags (in that order)."""
    opts = dict(DEFAULTS)
    if args.config:
        try:
            file_opts = load_config(args.config)
        except (OSError, ValueError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(file_opts) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        opts.update(file_opts)
    for k, v in vars(args).items():
        if v is not None and k in opts:
            opts[k] = v
    opts["mode"] = args.mode
    return opts


def _fraction(text):
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"not a number: {text!r}") from exc


def initial_condition(opts):
    """``(domain, tasep_config or None, abdf_config)`` from the options."""
    dom = Domain.parse(opts["domain"]) if opts["domain"] else None
    if opts["preset"] == "figure1":
        eta, theta, _ = figure1()
        if dom is not None and dom != eta.domain:
            raise ConfigError("the figure1 preset lives on ring:16")
        return eta.domain, eta, theta
    if opts["preset"] == "alternating":
        eta, theta = alternating_preset(dom or Domain.ring(16), int(opts["alpha"]))
        return eta.domain, eta, theta
    if opts["spins"] is not None:
        theta = AbdfConfig.from_strings(opts["spins"], opts["act"], dom, opts["alt_flag"])
        check_config(theta)
        return theta.domain, pair_inverse(theta), theta
    if opts["tasep"] is not None:
        eta = TasepConfig.from_string(opts["tasep"], dom, int(opts["origin"]))
        return eta.domain, eta, pair_forward(eta)
    if dom is None:
        raise ConfigError("give --domain, --preset, --tasep or --spins")
    eta = TasepConfig(dom, np.zeros(dom.size, dtype=np.int8))
    return dom, eta, pair_forward(eta)


def _seed(opts):
    if opts["seed"] is None:
        return FIGURE1_SEED if opts["preset"] == "figure1" else 0
    return int(opts["seed"])


def _outdir(opts):
    os.makedirs(opts["out"], exist_ok=True)
    return opts["out"]


def run(opts):
    """Execute one mode.  Returns the summary dict written to stdout."""
    mode = opts["mode"]
    T = int(opts["horizon"])
    if T < 0:
        raise ConfigError("horizon must be >= 0")
    if mode == "verify-bijection":
        L = opts["L"] or (Domain.parse(opts["domain"]).L if opts["domain"] else None)
        if L is None:
            raise ConfigError("verify-bijection needs --L or --domain ring:L")
        rep = bijection_check(int(L))
        write_json(rep, os.path.join(_outdir(opts), "bijection.json"))
        if not rep:
            raise VerificationFailed(rep.to_dict())
        return rep.to_dict()
    if mode == "ensemble":
        L = opts["L"] or (Domain.parse(opts["domain"]).L if opts["domain"] else 32)
        agg, members = run_ensemble(int(L), max(T, 1), int(opts["n_runs"]), _seed(opts),
                                    weak_tests=int(opts["weak_tests"]),
                                    grid_step=_fraction(opts["grid_step"]),
                                    tolerance=float(opts["tolerance"]))
        out = _outdir(opts)
        write_json(agg, os.path.join(out, "ensemble.json"))
        write_json(members, os.path.join(out, "members.json"))
        if agg["pass_rate"] != 1.0:
            raise VerificationFailed(agg)
        return {k: v for k, v in agg.items() if k != "failures"}

    dom, eta, theta = initial_condition(opts)
    field = NoiseField(_seed(opts))
    out = _outdir(opts)
    if mode == "simulate-tasep":
        states = tasep_trajectory(eta, field, T)
        write_tasep_csv(states, os.path.join(out, "tasep.csv"))
        return {"mode": mode, "steps": T, "particles": states[-1].particle_count}
    if mode == "simulate-abdf":
        states = abdf_trajectory(theta, field, T)
        write_abdf_csv(states, os.path.join(out, "abdf.csv"))
        return {"mode": mode, "steps": T, "final": repr(states[-1])}
    if T < 1:
        raise ConfigError("this mode needs a horizon of at least 1")
    if not dom.is_ring and mode != "verify-conjugacy":
        raise InvalidDomainError("the Burgers field is built on rings only")
    if mode == "verify-conjugacy":
        reports = []
        starts = [eta] + [random_config(dom, _seed(opts) + k) for k in range(1, int(opts["runs"]))]
        for k, start in enumerate(starts):
            rep = conjugacy_check(start, NoiseField(_seed(opts) + k), T)
            reports.append(rep.to_dict())
            if not rep:
                write_json(reports, os.path.join(out, "conjugacy.json"))
                raise VerificationFailed(rep.to_dict())
        write_json(reports, os.path.join(out, "conjugacy.json"))
        return {"mode": mode, "runs": len(starts), "steps": T, "ok": True}
    frames = trajectory(theta, field, T)
    if mode == "simulate-burgers":
        timed = [(Fraction(0), profile(frames[0], 0))]
        timed += [(Fraction(f.t0 + 1), profile(f, f.t0 + 1)) for f in frames]
        for t, prof in timed:
            write_profile_csv([(t, prof)], os.path.join(out, f"profile_t{int(t)}.csv"))
        write_profile_csv(timed, os.path.join(out, "profiles.csv"))
        write_json([f.to_dict() for f in frames], os.path.join(out, "frames.json"))
        return {"mode": mode, "frames": len(frames),
                "breakpoints": [len(p.breakpoints) for _, p in timed]}
    if mode == "export-profile":
        times = [Fraction(0)] if not opts["times"] else \
            [_fraction(s) for s in str(opts["times"]).split(",")]
        timed = []
        for t in times:
            if not 0 <= t <= T:
                raise TimeRangeError(f"time {t} outside [0, {T}]")
            k = min(int(t), T - 1)
            timed.append((t, profile(frames[k], t)))
        write_profile_csv(timed, os.path.join(out, "profile.csv"))
        return {"mode": mode, "times": [str(t) for t in times]}
    if mode == "verify-weak":
        es = edges(frames)
        rh_bad = [e.to_dict() for e in es if rankine_hugoniot_residual(e) != 0]
        non_ent = sum(lax_condition(e) == NON_ENTROPIC for e in es)
        rng = np.random.default_rng(_seed(opts))
        h = _fraction(opts["grid_step"])
        tol = float(opts["tolerance"])
        residuals = []
        for phi in random_test_functions(frames, int(opts["n_tests"]), rng):
            try:
                residuals.append(weak_residual(frames, phi, h))
            except SupportError as exc:
                raise ConfigError(str(exc)) from exc
        worst = max((abs(r) for r in residuals), default=0.0)
        rep = {"mode": mode, "edges": len(es), "rh_violations": rh_bad,
               "non_entropic_edges": int(non_ent), "residuals": residuals,
               "worst_residual": worst, "tolerance": tol, "grid_step": str(h),
               "ok": not rh_bad and worst <= tol}
        write_json(rep, os.path.join(out, "weak.json"))
        if not rep["ok"]:
            rep["initial"] = theta.spin_string()
            rep["seed"] = field.seed
            raise VerificationFailed(rep)
        return {k: v for k, v in rep.items() if k != "residuals"}
    raise ConfigError(f"unknown mode {mode}")


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        opts = resolve(args)
        summary = run(opts)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InvalidDomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InvalidConfigError, TimeRangeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (VerificationFailed, AssertionError) as exc:
        payload = exc.report if isinstance(exc, VerificationFailed) else {"error": str(exc)}
        print(json.dumps(payload, default=str), file=sys.stderr)
        return EXIT_VERIFY
    print(json.dumps(summary, default=str))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
