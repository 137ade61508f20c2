"""Active Bi-Directional Flow: left/right movers that annihilate head-on and
are created in pairs at active empty sites.

A configuration is a spin field ``theta`` in {-1, 0, +1}, an activation
record ``act`` in {0, 1} and, only for the all-empty spin field, a flag
``alpha`` selecting which alternating vacuum ``act`` is.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .domain import Domain
from .errors import InvalidConfigError
from .noise import noise_bits

__all__ = [
    "AbdfConfig", "Lambda0Report", "validate_lambda0", "activation_record",
    "activation_record_right", "abdf_step", "abdf_flow", "abdf_trajectory",
    "check_config", "alt_pattern", "vacuum",
]

_SPIN_CHARS = {"+": 1, "-": -1, "0": 0}


def alt_pattern(domain, alpha):
    """``alt_0(x) = x mod 2``, ``alt_1(x) = (x + 1) mod 2`` on the domain sites."""
    return ((domain.sites + alpha) % 2).astype(np.int8)


@dataclass(frozen=True, eq=False)
class AbdfConfig:
    domain: Domain
    spins: np.ndarray
    act: np.ndarray
    alt_flag: Optional[int] = None

    def __post_init__(self):
        n = self.domain.size
        spins = np.array(self.spins, dtype=np.int8).reshape(-1)
        act = np.array(self.act, dtype=np.int8).reshape(-1)
        if spins.shape[0] != n or act.shape[0] != n:
            raise InvalidConfigError("spins/act length does not match the domain")
        if np.any(np.abs(spins) > 1) or np.any((act != 0) & (act != 1)):
            raise InvalidConfigError("spins must be in {-1,0,1} and act in {0,1}")
        if self.alt_flag is not None and self.alt_flag not in (0, 1):
            raise InvalidConfigError(f"altFlag must be 0, 1 or None, got {self.alt_flag}")
        spins.setflags(write=False)
        act.setflags(write=False)
        object.__setattr__(self, "spins", spins)
        object.__setattr__(self, "act", act)
        if self.alt_flag is not None:
            object.__setattr__(self, "alt_flag", int(self.alt_flag))

    @classmethod
    def from_spins(cls, spins, domain, alt_flag=None):
        """Attach the activation record (or ``alt_flag`` vacuum) to a spin field."""
        spins = np.asarray(spins, dtype=np.int8)
        if not spins.any() and domain.is_ring:
            if alt_flag is None:
                raise InvalidConfigError("all-empty ring configuration needs an altFlag")
            return cls(domain, spins, alt_pattern(domain, alt_flag), alt_flag)
        return cls(domain, spins, activation_record(spins, domain))

    @classmethod
    def from_strings(cls, spins, act=None, domain=None, alt_flag=None):
        """Parse the ``+``/``-``/``0`` spin string (and optional 0/1 act
        string).  Without ``domain`` the strings span a full ring."""
        try:
            values = [_SPIN_CHARS[c] for c in spins.strip()]
        except KeyError as exc:
            raise InvalidConfigError(f"bad spin character {exc.args[0]!r}") from None
        if domain is None:
            domain = Domain.ring(len(values))
        if len(values) != domain.size:
            raise InvalidConfigError("spin string length does not match the domain")
        if act is None:
            return cls.from_spins(values, domain, alt_flag)
        acts = [int(c) for c in act.strip()]
        return cls(domain, values, acts, alt_flag)

    def spin_string(self):
        return "".join({1: "+", -1: "-", 0: "0"}[int(v)] for v in self.spins)

    def act_string(self):
        return "".join(str(int(v)) for v in self.act)

    @property
    def is_vacuum(self):
        return not self.spins.any()

    def __eq__(self, other):
        if not isinstance(other, AbdfConfig):
            return NotImplemented
        return (self.domain == other.domain and self.alt_flag == other.alt_flag
                and np.array_equal(self.spins, other.spins)
                and np.array_equal(self.act, other.act))

    def __hash__(self):
        return hash((self.domain, self.spins.tobytes(), self.act.tobytes(), self.alt_flag))

    def __repr__(self):
        return (f"AbdfConfig({self.domain.spec_string()}, {self.spin_string()!r}, "
                f"{self.act_string()!r}, alt={self.alt_flag})")


def vacuum(domain, alpha):
    return AbdfConfig(domain, np.zeros(domain.size, dtype=np.int8),
                      alt_pattern(domain, alpha), alpha)


# ring kernels (last axis = sites) ------------------------------------------

def _nearest_left(spins):
    """Distance ``k >= 1`` to, and value of, the closest non-zero spin strictly
    to the left, cyclically.  Rows without non-zero spins give value 0."""
    L = spins.shape[-1]
    doubled = np.concatenate([spins, spins], axis=-1)
    idx = np.where(doubled != 0, np.arange(2 * L), -1)
    last = np.maximum.accumulate(idx, axis=-1)
    prev = last[..., L - 1:2 * L - 1]
    k = np.arange(L, 2 * L) - prev
    value = np.take_along_axis(doubled, np.maximum(prev, 0), axis=-1)
    return k, np.where(prev >= 0, value, 0)


def _nearest_right(spins):
    L = spins.shape[-1]
    doubled = np.concatenate([spins, spins], axis=-1)
    idx = np.where(doubled != 0, np.arange(2 * L), 2 * L)
    first = np.minimum.accumulate(idx[..., ::-1], axis=-1)[..., ::-1]
    nxt = first[..., 1:L + 1]
    h = nxt - np.arange(L)
    value = np.take_along_axis(doubled, np.minimum(nxt, 2 * L - 1), axis=-1)
    return h, np.where(nxt < 2 * L, value, 0)


def _ar_left(spins, k, value):
    sign = 1 - 2 * (k % 2)
    return np.where(spins == 0, np.abs(value + sign) // 2, 0).astype(np.int8)


def _ar_right(spins, h, value):
    sign = 1 - 2 * ((h + 1) % 2)
    return np.where(spins == 0, np.abs(value + sign) // 2, 0).astype(np.int8)


def activation_rows(spins):
    """Left-neighbour activation record on ring arrays."""
    spins = np.asarray(spins, dtype=np.int64)
    k, value = _nearest_left(spins)
    return _ar_left(spins, k, value)


def activation_rows_right(spins):
    """Right-neighbour activation record on ring arrays."""
    spins = np.asarray(spins, dtype=np.int64)
    h, value = _nearest_right(spins)
    return _ar_right(spins, h, value)


def lambda0_rows(spins):
    """Cyclic parity law per row: consecutive non-zero spins of equal sign
    enclose an even number of zeros, opposite signs an odd number.  All-zero
    rows are reported as not in the set."""
    spins = np.asarray(spins, dtype=np.int64)
    h, value = _nearest_right(spins)
    gap = h - 1
    law = np.where(spins * value == 1, gap % 2 == 0, gap % 2 == 1)
    ok = np.where(spins != 0, law, True).all(axis=-1)
    return ok & (spins != 0).any(axis=-1)


def spin_update_rows(spins, act, omega):
    """First component of the ABDF map on ring arrays, with ``omega`` the noise
    row the step consumes."""
    spins = np.asarray(spins, dtype=np.int8)
    kact = np.asarray(act, dtype=np.int8) * (1 - np.asarray(omega, dtype=np.int8))
    left = np.roll(spins, 1, axis=-1)
    right = np.roll(spins, -1, axis=-1)
    return (np.maximum(left, 0) + np.roll(kact, 1, axis=-1)
            + np.minimum(right, 0) - np.roll(kact, -1, axis=-1)).astype(np.int8)


def vacuum_flag_rows(spins, act, omega):
    """The alternation flag of an all-empty image: 1 when ``theta(0) = -1``,
    or ``act(-1) = 1`` with ``omega(-1) = 1``, or ``act(0) = 1`` with
    ``omega(0) = 0``; site ``-1`` is ``L - 1`` on the ring."""
    spins = np.asarray(spins)
    act = np.asarray(act)
    omega = np.broadcast_to(np.asarray(omega), spins.shape)
    cond = ((spins[..., 0] == -1)
            | ((act[..., -1] == 1) & (omega[..., -1] == 1))
            | ((act[..., 0] == 1) & (omega[..., 0] == 0)))
    return cond.astype(np.int8)


def abdf_step_rows(spins, act, omega):
    """Full ABDF step on ring arrays.  Returns ``(spins, act, alt)`` with
    ``alt = -1`` on rows that are not the vacuum."""
    new = spin_update_rows(spins, act, omega)
    empty = ~(new != 0).any(axis=-1)
    flag = vacuum_flag_rows(spins, act, omega)
    L = new.shape[-1]
    alt = np.where(empty, flag, -1).astype(np.int8)
    vac_act = ((np.arange(L) + alt[..., None]) % 2).astype(np.int8)
    new_act = np.where(empty[..., None], vac_act, activation_rows(new))
    return new, new_act, alt


# line-window helpers -------------------------------------------------------

def _tail_spin(tail):
    return 1 - 2 * tail


def _line_extended(spins, domain):
    """Window spins followed by the right tail spin at ``x_max + 1``."""
    return np.append(np.asarray(spins, dtype=np.int64), _tail_spin(domain.tail_right))


def _line_activation(spins, domain, prefer="left"):
    ext = _line_extended(spins, domain)
    n = ext.shape[0]
    pos = np.arange(n)
    last = np.maximum.accumulate(np.where(ext != 0, pos, -1))
    prev = np.concatenate([[-1], last[:-1]])
    first = np.minimum.accumulate(np.where(ext != 0, pos, n)[::-1])[::-1]
    nxt = np.concatenate([first[1:], [n]])
    left = np.abs(ext[np.maximum(prev, 0)] + (1 - 2 * ((pos - prev) % 2))) // 2
    right = np.abs(ext[np.minimum(nxt, n - 1)] + (1 - 2 * ((nxt - pos + 1) % 2))) // 2
    if prefer == "left":
        value = np.where(prev >= 0, left, right)
    else:
        value = np.where(nxt < n, right, left)
    return np.where(ext != 0, 0, value)[:-1].astype(np.int8)


# public operations ---------------------------------------------------------

@dataclass(frozen=True)
class Lambda0Report:
    ok: bool
    pair: Optional[tuple] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def validate_lambda0(spins, domain):
    """Check the gap-parity conditions between consecutive non-zero spins.

    The scan is cyclic on rings; on line windows it runs over the window
    followed by the right tail spin.  A failing report names the offending
    consecutive pair ``(x1, x2)`` by site label.
    """
    spins = np.asarray(spins, dtype=np.int64)
    if domain.is_ring:
        seq = spins
        labels = domain.sites
    else:
        seq = _line_extended(spins, domain)
        labels = np.arange(domain.x_min, domain.x_max + 2)
    nz = np.flatnonzero(seq)
    if nz.size == 0:
        return Lambda0Report(False, None, "identically zero")
    pairs = list(zip(nz[:-1], nz[1:]))
    if domain.is_ring:
        pairs.append((nz[-1], nz[0] + domain.L))
    n = len(seq)
    for a, b in pairs:
        gap = b - a - 1
        same = seq[a % n] == seq[b % n]
        if (gap % 2 == 0) != same:
            kind = "even" if gap % 2 == 0 else "odd"
            return Lambda0Report(
                False, (int(labels[a % n]), int(labels[b % n])),
                f"{kind} gap of {gap} between spins {int(seq[a % n])} and {int(seq[b % n])}")
    return Lambda0Report(True)


def activation_record(spins, domain):
    """Activation record from the nearest non-zero spin on the left:
    ``|theta(x1) + (-1)^k| / 2`` at empty sites, 0 at occupied ones.

    On line windows, sites with no non-zero spin to their left inside the
    window use the right-neighbour form anchored on the right tail.
    """
    spins = np.asarray(spins, dtype=np.int64)
    if domain.is_ring:
        if not spins.any():
            raise InvalidConfigError(
                "activation record undefined for the all-empty ring; use altFlag")
        return activation_rows(spins)
    return _line_activation(spins, domain, prefer="left")


def activation_record_right(spins, domain):
    """Same record computed from the nearest non-zero spin on the right,
    ``|theta(x2) + (-1)^(h+1)| / 2``."""
    spins = np.asarray(spins, dtype=np.int64)
    if domain.is_ring:
        if not spins.any():
            raise InvalidConfigError(
                "activation record undefined for the all-empty ring; use altFlag")
        return activation_rows_right(spins)
    return _line_activation(spins, domain, prefer="right")


def check_config(cfg):
    """Raise :class:`InvalidConfigError` unless ``cfg`` is an ABDF
    configuration."""
    dom = cfg.domain
    if np.any((cfg.spins != 0) & (cfg.act != 0)):
        raise InvalidConfigError("act must vanish on occupied sites")
    if dom.is_ring and cfg.is_vacuum:
        if cfg.alt_flag is None:
            raise InvalidConfigError("all-empty configuration without altFlag")
        if not np.array_equal(cfg.act, alt_pattern(dom, cfg.alt_flag)):
            raise InvalidConfigError("vacuum act is not the declared alternating pattern")
        return
    if cfg.alt_flag is not None:
        raise InvalidConfigError("altFlag is only allowed on the all-empty ring configuration")
    report = validate_lambda0(cfg.spins, dom)
    if not report:
        raise InvalidConfigError(f"spins violate the parity law at {report.pair}: {report.reason}")
    if not np.array_equal(cfg.act, activation_record(cfg.spins, dom)):
        raise InvalidConfigError("act differs from the activation record of the spins")


def abdf_step(cfg, field, t, check=True):
    """Configuration at time ``t`` from the one at ``t - 1``; consumes noise
    row ``t - 1``.

    Right movers arrive from ``x - 1``, left movers from ``x + 1``, a pair is
    created around every active site whose noise bit is 0, and head-on
    arrivals cancel.
    """
    if t < 1:
        raise ValueError(f"step time must be >= 1, got {t}")
    if check:
        check_config(cfg)
    dom = cfg.domain
    if dom.is_ring:
        omega = noise_bits(field.seed, t - 1, dom.sites)
        spins, act, alt = abdf_step_rows(cfg.spins, cfg.act, omega)
        alt = int(alt)
        return AbdfConfig(dom, spins, act, None if alt < 0 else alt)
    xs = np.arange(dom.x_min - 1, dom.x_max + 2)
    omega = noise_bits(field.seed, t - 1, xs)
    spins = np.concatenate([[_tail_spin(dom.tail_left)], cfg.spins,
                            [_tail_spin(dom.tail_right)]]).astype(np.int8)
    kact = np.concatenate([[0], cfg.act, [0]]).astype(np.int8) * (1 - omega)
    new = (np.maximum(spins[:-2], 0) + kact[:-2]
           + np.minimum(spins[2:], 0) - kact[2:]).astype(np.int8)
    return AbdfConfig(dom, new, activation_record(new, dom))


def abdf_flow(cfg, field, t, start=0, check=True):
    """Apply the steps ``start + 1, ..., start + t``."""
    if t < 0:
        raise ValueError(f"flow time must be >= 0, got {t}")
    for k in range(start + 1, start + t + 1):
        cfg = abdf_step(cfg, field, k, check=check)
    return cfg


def abdf_trajectory(cfg, field, horizon, check=True):
    states = [cfg]
    for k in range(1, horizon + 1):
        states.append(abdf_step(states[-1], field, k, check=check))
    return states
