"""Plain-text exports: trajectory and profile CSV, JSON documents, and the
JSON run-configuration file."""

import csv
import json
from fractions import Fraction

__all__ = [
    "exact_decimal", "write_tasep_csv", "write_abdf_csv", "write_profile_csv",
    "write_json", "load_config",
]


def exact_decimal(q):
    """Render a rational exactly: a terminating decimal when the denominator
    has only factors 2 and 5, ``p/q`` otherwise."""
    q = Fraction(q)
    d = q.denominator
    k2 = k5 = 0
    while d % 2 == 0:
        d //= 2
        k2 += 1
    while d % 5 == 0:
        d //= 5
        k5 += 1
    if d != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(k2, k5)
    if digits == 0:
        return str(q.numerator)
    scaled = abs(q.numerator) * 10 ** digits // q.denominator
    sign = "-" if q < 0 else ""
    s = str(scaled).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def write_tasep_csv(states, path):
    """One row per time: ``t`` followed by the occupancy of every site."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t"] + [f"x{int(x)}" for x in states[0].domain.sites])
        for t, s in enumerate(states):
            w.writerow([t] + [int(v) for v in s.occupancy])


def write_abdf_csv(states, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "spins", "act", "alt_flag"])
        for t, s in enumerate(states):
            w.writerow([t, s.spin_string(), s.act_string(),
                        "" if s.alt_flag is None else s.alt_flag])


def write_profile_csv(timed_profiles, path):
    """Rows ``t, position, value_right`` for ``(t, Profile)`` pairs."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "position", "value_right"])
        for t, prof in timed_profiles:
            for pos, val in prof.breakpoints:
                w.writerow([exact_decimal(t), exact_decimal(pos), val])


def write_json(obj, path):
    from .verification import to_json
    with open(path, "w") as fh:
        fh.write(to_json(obj, indent=2))
        fh.write("\n")


def load_config(path):
    """Read a JSON run configuration; keys mirror the long command-line
    options with dashes replaced by underscores."""
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError("configuration file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}
