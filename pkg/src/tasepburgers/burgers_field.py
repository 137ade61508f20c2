"""Quasi-particle weak solutions of Burgers' equation built from ABDF
trajectories.

Over each unit interval ``[t0, t0 + 1]`` the field is a sum of indicator
blocks of height 2 and width 1/2 moving at speed 1.  During the first half all
movers translate freely; during the second half isolated movers continue,
head-on pairs shrink into their meeting site (coalescing pairs) and pairs for
the next step grow out of active sites (arising pairs).  Positions and times
are exact :class:`fractions.Fraction` values.
"""

from bisect import bisect_right
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .abdf import AbdfConfig, abdf_step, activation_record, alt_pattern, check_config
from .errors import AmbiguousVacuumError, ReconstructionError, TimeRangeError
from .noise import noise_bits

__all__ = [
    "HALF", "Block", "QuasiParticle", "SiteClassification", "BurgersFrame",
    "Profile", "classify_sites", "classify_rows", "build_frame", "evaluate",
    "profile", "integer_time_profile", "reconstruct", "reconstruct_trajectory",
    "trajectory", "frame_intervals",
]

HALF = Fraction(1, 2)
ISO_RIGHT = "iso-right"
ISO_LEFT = "iso-left"
ARISING = "arising"
COALESCING = "coalescing"
KINDS = (ISO_RIGHT, ISO_LEFT, ARISING, COALESCING)


@dataclass(frozen=True)
class Block:
    """``value`` on ``[a(t), b(t))`` with affine ends
    ``a(t) = a_ref + a_slope (t - t_ref)`` and likewise for ``b``."""

    value: Fraction
    a_ref: Fraction
    a_slope: Fraction
    b_ref: Fraction
    b_slope: Fraction
    t_ref: Fraction

    def at(self, t):
        dt = t - self.t_ref
        return self.a_ref + self.a_slope * dt, self.b_ref + self.b_slope * dt


@dataclass(frozen=True)
class QuasiParticle:
    """One primitive weak solution, alive on ``[t_start, t_end]``.

    ``iso-right``: ``w`` on ``[anchor + v s, anchor + v s + h)`` with
    ``s = t - t_start``.  ``iso-left``: ``-w`` on
    ``[anchor - v s - h, anchor - v s)``.  ``arising``: a pair growing out of
    ``anchor`` from ``t_start``.  ``coalescing``: a pair shrinking into
    ``anchor`` and vanishing at ``t_end``.  Always ``w = 2 v``.
    """

    kind: str
    anchor: Fraction
    t_start: Fraction
    t_end: Fraction
    h: Fraction = HALF
    v: Fraction = Fraction(1)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown quasi-particle kind {self.kind!r}")
        for name in ("anchor", "t_start", "t_end", "h", "v"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.t_end <= self.t_start or self.h <= 0 or self.v <= 0:
            raise ValueError("need t_start < t_end and positive h, v")

    @property
    def w(self):
        return 2 * self.v

    @classmethod
    def right(cls, x0, t0, t1, h=HALF, v=1):
        """Block ``[x0 + v(t - t0) - h, x0 + v(t - t0))``: leading edge at ``x0``."""
        return cls(ISO_RIGHT, Fraction(x0) - Fraction(h), t0, t1, h, v)

    @classmethod
    def left(cls, x0, t0, t1, h=HALF, v=1):
        """Block ``[x0 - v(t - t0), x0 - v(t - t0) + h)``: leading edge at ``x0``."""
        return cls(ISO_LEFT, Fraction(x0) + Fraction(h), t0, t1, h, v)

    def blocks(self):
        w, s, h, a = self.w, self.v, self.h, self.anchor
        if self.kind == ISO_RIGHT:
            return (Block(w, a, s, a + h, s, self.t_start),)
        if self.kind == ISO_LEFT:
            return (Block(-w, a - h, -s, a, -s, self.t_start),)
        if self.kind == ARISING:
            return (Block(w, a, 0, a, s, self.t_start), Block(-w, a, -s, a, 0, self.t_start))
        return (Block(w, a, s, a, 0, self.t_end), Block(-w, a, 0, a, -s, self.t_end))

    def intervals(self, t):
        """Non-empty ``(a, b, value)`` supports at time ``t`` (unwrapped)."""
        t = Fraction(t)
        if not self.t_start <= t <= self.t_end:
            raise TimeRangeError(f"time {t} outside [{self.t_start}, {self.t_end}]")
        out = []
        for blk in self.blocks():
            a, b = blk.at(t)
            if b > a:
                out.append((a, b, blk.value))
        return out

    def value(self, t, x):
        x = Fraction(x)
        return sum(v for a, b, v in self.intervals(t) if a <= x < b)


@dataclass(frozen=True)
class SiteClassification:
    M_plus: frozenset
    M_minus: frozenset
    A: frozenset
    MA_plus: frozenset
    MA_minus: frozenset
    C: frozenset
    MA_iso_plus: frozenset
    MA_iso_minus: frozenset

    def as_dict(self):
        return {k: sorted(getattr(self, k)) for k in self.__dataclass_fields__}


def classify_rows(spins, act, omega):
    """Boolean site classes on ring arrays (last axis = sites).  ``omega`` is
    the noise row at the frame's start time."""
    spins = np.asarray(spins)
    act = np.asarray(act)
    omega = np.broadcast_to(np.asarray(omega), spins.shape)
    Mp = spins == 1
    Mm = spins == -1
    A = (act == 1) & (omega == 0)
    MAp = Mp | A
    MAm = Mm | A
    C = np.roll(MAp, 1, axis=-1) & np.roll(MAm, -1, axis=-1)
    iso_p = MAp & ~np.roll(C, -1, axis=-1)
    iso_m = MAm & ~np.roll(C, 1, axis=-1)
    return {"M_plus": Mp, "M_minus": Mm, "A": A, "MA_plus": MAp, "MA_minus": MAm,
            "C": C, "MA_iso_plus": iso_p, "MA_iso_minus": iso_m}


def _shift(mask, k):
    """``out[i] = mask[i - k]`` with False outside the window."""
    out = np.zeros_like(mask)
    if k > 0:
        out[k:] = mask[:-k]
    elif k < 0:
        out[:k] = mask[-k:]
    else:
        out[:] = mask
    return out


def _arising_mask(cfg, omega):
    return (cfg.act == 1) & (omega == 0)


def classify_sites(cfg, field, t0):
    """Site classes of ``cfg`` at integer time ``t0`` with the noise row ``t0``.

    Cyclic on rings; on line windows neighbours outside the window count as
    belonging to no class.
    """
    check_config(cfg)
    dom = cfg.domain
    omega = noise_bits(field.seed, t0, dom.sites)
    if dom.is_ring:
        masks = classify_rows(cfg.spins, cfg.act, omega)
    else:
        Mp = cfg.spins == 1
        Mm = cfg.spins == -1
        A = _arising_mask(cfg, omega)
        MAp, MAm = Mp | A, Mm | A
        C = _shift(MAp, 1) & _shift(MAm, -1)
        masks = {"M_plus": Mp, "M_minus": Mm, "A": A, "MA_plus": MAp, "MA_minus": MAm,
                 "C": C, "MA_iso_plus": MAp & ~_shift(C, -1),
                 "MA_iso_minus": MAm & ~_shift(C, 1)}
    sites = dom.sites
    return SiteClassification(**{k: frozenset(int(x) for x in sites[m]) for k, m in masks.items()})


# exact profiles ------------------------------------------------------------

def _wrap(intervals, domain):
    """Reduce unwrapped supports onto ``[0, L)`` on rings, splitting at the seam."""
    if not domain.is_ring:
        return list(intervals)
    L = domain.L
    out = []
    for a, b, v in intervals:
        shift = (a // L) * L
        a, b = a - shift, b - shift
        if b <= L:
            out.append((a, b, v))
        else:
            out.append((a, Fraction(L), v))
            out.append((Fraction(0), b - L, v))
    return out


@dataclass(frozen=True)
class Profile:
    """Piecewise-constant ``u(t, .)`` as a minimal list of
    ``(position, value to the right)`` breakpoints.

    On a ring positions lie in ``[0, L)`` and the value left of the first
    breakpoint is the value of the last one.  On a line the field is 0 left of
    the first breakpoint.
    """

    domain: object
    breakpoints: tuple = ()

    @classmethod
    def from_intervals(cls, domain, intervals):
        events = {}
        for a, b, v in _wrap(intervals, domain):
            if b > a:
                events[a] = events.get(a, 0) + v
                events[b] = events.get(b, 0) - v
        pieces = [(Fraction(0), 0)] if domain.is_ring else []
        value = 0
        for pos in sorted(events):
            value += events[pos]
            if domain.is_ring and pos >= domain.L:
                break
            if pieces and pieces[-1][0] == pos:
                pieces[-1] = (pos, value)
            else:
                pieces.append((pos, value))
        merged = []
        for pc in pieces:
            if not merged or merged[-1][1] != pc[1]:
                merged.append(pc)
        if domain.is_ring:
            if len(merged) > 1 and merged[0][1] == merged[-1][1]:
                merged = merged[1:]
            if len(merged) == 1 and merged[0][1] == 0:
                merged = []
        elif merged and merged[0][1] == 0:
            merged = merged[1:]
        return cls(domain, tuple((Fraction(p), int(v)) for p, v in merged))

    @property
    def positions(self):
        return [p for p, _ in self.breakpoints]

    def value_at(self, x):
        if not self.breakpoints:
            return 0
        x = Fraction(x)
        if self.domain.is_ring:
            x %= self.domain.L
        i = bisect_right(self.positions, x) - 1
        if i < 0:
            return self.breakpoints[-1][1] if self.domain.is_ring else 0
        return self.breakpoints[i][1]

    def jumps(self):
        """``(position, u(x+) - u(x-))`` at every breakpoint."""
        out = []
        n = len(self.breakpoints)
        for i, (p, v) in enumerate(self.breakpoints):
            if i > 0:
                prev = self.breakpoints[i - 1][1]
            else:
                prev = self.breakpoints[-1][1] if self.domain.is_ring else 0
            if n == 1 and self.domain.is_ring:
                prev = v
            out.append((p, v - prev))
        return out

    def _antiderivative(self, x):
        """``int_0^x u`` for ``0 <= x <= L`` on rings, ``int_{-inf}^x u`` on lines."""
        bps = self.breakpoints
        if not bps:
            return Fraction(0)
        if self.domain.is_ring:
            total = Fraction(0)
            cur_pos, cur_val = Fraction(0), bps[-1][1]
        else:
            total = Fraction(0)
            cur_pos, cur_val = bps[0][0], 0
        for p, v in bps:
            if p >= x:
                break
            if p > cur_pos:
                total += cur_val * (p - cur_pos)
            cur_pos, cur_val = max(cur_pos, p), v
        if x > cur_pos:
            total += cur_val * (x - cur_pos)
        return total

    def cell_integrals(self, sites):
        """``int_{z-1/2}^{z+1/2} u`` for each site ``z`` of an increasing
        sequence of integers lying in one period, in a single sweep."""
        pts = [Fraction(int(z)) - HALF for z in sites] + [Fraction(int(sites[-1])) + HALF]
        bps = self.breakpoints
        if not bps:
            return [Fraction(0)] * len(sites)
        if self.domain.is_ring:
            L = self.domain.L
            # unroll one period on each side so that the sweep is linear
            ext = [(p - L, v) for p, v in bps] + list(bps) + [(p + L, v) for p, v in bps]
            cur_pos, cur_val = ext[0][0], bps[-1][1]
        else:
            ext = list(bps)
            cur_pos, cur_val = min(ext[0][0], pts[0]), 0
        F = []
        total = Fraction(0)
        i = 0
        for x in pts:
            while i < len(ext) and ext[i][0] <= x:
                p, v = ext[i]
                total += cur_val * (p - cur_pos)
                cur_pos, cur_val = p, v
                i += 1
            F.append(total + cur_val * (x - cur_pos))
        return [b - a for a, b in zip(F[:-1], F[1:])]

    def integrate(self, a, b):
        """Exact ``int_a^b u(x) dx``."""
        a, b = Fraction(a), Fraction(b)
        if b < a:
            return -self.integrate(b, a)
        if not self.domain.is_ring:
            return self._antiderivative(b) - self._antiderivative(a)
        L = self.domain.L
        mass = self._antiderivative(Fraction(L))

        def F(x):
            k = x // L
            return k * mass + self._antiderivative(x - k * L)

        return F(b) - F(a)

    def mass(self):
        if self.domain.is_ring:
            return self._antiderivative(Fraction(self.domain.L))
        if not self.breakpoints:
            return Fraction(0)
        return self._antiderivative(self.breakpoints[-1][0])

    def to_rows(self):
        return [(p, v) for p, v in self.breakpoints]


def _integer_time_intervals(cfg, omega):
    """Supports of the integer-time profile: right blocks at ``M+ u A``, left
    blocks at ``M- u A``."""
    sites = cfg.domain.sites
    A = _arising_mask(cfg, omega)
    out = []
    for z in sites[(cfg.spins == 1) | A]:
        z = Fraction(int(z))
        out.append((z, z + HALF, 2))
    for z in sites[(cfg.spins == -1) | A]:
        z = Fraction(int(z))
        out.append((z - HALF, z, -2))
    return out


def integer_time_profile(cfg, field, t0):
    """The integer-time field of ``cfg`` at ``t0``, built directly from the
    moving and arising sites."""
    check_config(cfg)
    omega = noise_bits(field.seed, t0, cfg.domain.sites)
    return Profile.from_intervals(cfg.domain, _integer_time_intervals(cfg, omega))


# frames --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BurgersFrame:
    t0: int
    domain: object
    field: object
    config: AbdfConfig
    next_config: AbdfConfig
    classification: SiteClassification
    next_arising: frozenset
    primitives: tuple = dc_field(default=())

    @property
    def t_end(self):
        return Fraction(self.t0 + 1)

    def active(self, t):
        """Primitives contributing at ``t``.  A primitive ending strictly
        inside the frame is replaced at its end time by its successor."""
        t = Fraction(t)
        if not self.t0 <= t <= self.t_end:
            raise TimeRangeError(f"time {t} outside frame [{self.t0}, {self.t0 + 1}]")
        return [q for q in self.primitives
                if q.t_start <= t <= q.t_end and not (t == q.t_end < self.t_end)]

    def to_dict(self):
        return {
            "t0": self.t0,
            "domain": self.domain.spec_string(),
            "seed": self.field.seed,
            "classification": self.classification.as_dict(),
            "next_arising": sorted(self.next_arising),
            "primitives": [
                {"kind": q.kind, "anchor": str(q.anchor), "t_start": str(q.t_start),
                 "t_end": str(q.t_end)} for q in self.primitives],
        }


def frame_intervals(frame, t):
    """Unwrapped non-empty supports ``(a, b, value)`` at time ``t``."""
    t = Fraction(t)
    out = []
    for q in frame.active(t):
        out.extend(q.intervals(t))
    return out


def _overlap(domain, intervals):
    ivs = sorted(_wrap(intervals, domain))
    for (a1, b1, _), (a2, b2, _) in zip(ivs, ivs[1:]):
        if a2 < b1:
            return (a1, b1), (a2, b2)
    return None


def build_frame(cfg, field, t0, check=True):
    """Frame on ``[t0, t0 + 1]`` for ``cfg`` at time ``t0``.

    The stepped configuration is ``abdf_step(cfg, field, t0 + 1)``, which
    consumes noise row ``t0`` as does the arising set at ``t0``.  With
    ``check`` the supports are asserted pairwise disjoint at every eighth of
    the interval; crossings can only happen at quarter times, so this is
    exhaustive.
    """
    if t0 < 0:
        raise TimeRangeError(f"frame start must be >= 0, got {t0}")
    check_config(cfg)
    dom = cfg.domain
    cls = classify_sites(cfg, field, t0)
    nxt = abdf_step(cfg, field, t0 + 1, check=False)
    omega_next = noise_bits(field.seed, t0 + 1, dom.sites)
    next_arising = frozenset(int(x) for x in dom.sites[_arising_mask(nxt, omega_next)])

    T0 = Fraction(t0)
    mid = T0 + HALF
    T1 = T0 + 1
    prims = []
    for z in sorted(cls.MA_plus):
        prims.append(QuasiParticle(ISO_RIGHT, z, T0, T1 if z in cls.MA_iso_plus else mid))
    for z in sorted(cls.MA_minus):
        prims.append(QuasiParticle(ISO_LEFT, z, T0, T1 if z in cls.MA_iso_minus else mid))
    for x0 in sorted(cls.C):
        prims.append(QuasiParticle(COALESCING, x0, mid, T1))
    for x0 in sorted(next_arising):
        prims.append(QuasiParticle(ARISING, x0, mid, T1))
    frame = BurgersFrame(t0, dom, field, cfg, nxt, cls, next_arising, tuple(prims))
    if check:
        for k in range(9):
            t = T0 + Fraction(k, 8)
            bad = _overlap(dom, frame_intervals(frame, t))
            if bad is not None:
                raise AssertionError(f"overlapping supports {bad} at t={t}")
    return frame


def evaluate(frame, t, x):
    """``u(t, x)``: the sum of the active primitives' contributions."""
    t, x = Fraction(t), Fraction(x)
    if frame.domain.is_ring:
        x %= frame.domain.L
    total = 0
    for a, b, v in _wrap(frame_intervals(frame, t), frame.domain):
        if a <= x < b:
            total += v
    return total


def profile(frame, t):
    """Minimal breakpoint profile of ``u(t, .)``."""
    return Profile.from_intervals(frame.domain, frame_intervals(frame, t))


# reconstruction ------------------------------------------------------------

def _profile_at_integer(obj, t):
    if isinstance(obj, Profile):
        return obj
    if t is None:
        t = obj.t0
    t = Fraction(t)
    if t.denominator != 1 or t not in (obj.t0, obj.t0 + 1):
        raise TimeRangeError(f"reconstruction needs an integer time of the frame, got {t}")
    return profile(obj, t)


def reconstruct(obj, t=None):
    """ABDF configuration encoded by an integer-time profile.

    ``obj`` is a :class:`Profile` or a frame (``t`` defaults to its start).
    Spins are unit-cell integrals; the all-empty case reads the parity of
    the sites carrying a ``-2 -> +2`` jump (arising pairs).  Raises
    :class:`AmbiguousVacuumError` when the profile is identically zero.
    """
    prof = _profile_at_integer(obj, t)
    dom = prof.domain
    spins = []
    for z, theta in zip(dom.sites, prof.cell_integrals(dom.sites)):
        if theta not in (-1, 0, 1):
            raise ReconstructionError(f"cell integral {theta} at site {z} is not a spin")
        spins.append(int(theta))
    spins = np.array(spins, dtype=np.int8)
    if spins.any() or not dom.is_ring:
        return AbdfConfig(dom, spins, activation_record(spins, dom))
    ups = [p for p, j in prof.jumps() if j == 4]
    if not ups:
        raise AmbiguousVacuumError("zero profile: the vacuum parity is not recorded")
    parities = {int(p) % 2 for p in ups}
    if any(p.denominator != 1 for p in ups) or len(parities) != 1:
        raise ReconstructionError("arising sites of mixed parity in an empty configuration")
    alpha = 1 if parities == {0} else 0
    return AbdfConfig(dom, spins, alt_pattern(dom, alpha), alpha)


def trajectory(cfg0, field, T, check=True):
    """Frames ``[0, 1], ..., [T - 1, T]`` of the field started from ``cfg0``.

    With ``check`` consecutive frames are asserted to agree exactly at every
    shared integer time.
    """
    if T < 1:
        raise ValueError(f"horizon must be >= 1, got {T}")
    frames = []
    cfg = cfg0
    for k in range(T):
        frame = build_frame(cfg, field, k, check=check)
        if check and frames and profile(frames[-1], k) != profile(frame, k):
            raise AssertionError(f"frames disagree at t={k}")
        frames.append(frame)
        cfg = frame.next_config
    return frames


def reconstruct_trajectory(frames):
    """ABDF states at times ``0..T`` read from the field alone.

    An identically zero integer-time profile is the vacuum with no firing
    site; its parity is taken from the neighbouring states: the image of the
    previous state under the step, or, before any readable state, the
    opposite parity of the next one (an unfired vacuum shifts by one site).
    """
    profiles = [profile(frames[0], frames[0].t0)] + [profile(f, f.t0 + 1) for f in frames]
    dom = frames[0].domain
    states: list = []
    for k, prof in enumerate(profiles):
        try:
            states.append(reconstruct(prof))
        except AmbiguousVacuumError:
            states.append(None)
    for k in range(len(states)):
        if states[k] is not None:
            continue
        prev = k - 1
        if prev >= 0 and states[prev] is not None:
            f = frames[prev]
            nxt = abdf_step(states[prev], f.field, f.t0 + 1, check=False)
            if nxt.spins.any():
                raise ReconstructionError(f"zero profile at t={k} but non-empty image")
            states[k] = nxt
    for k in range(len(states) - 1, -1, -1):
        if states[k] is None:
            if k + 1 < len(states) and states[k + 1] is not None and states[k + 1].is_vacuum:
                alpha = 1 - states[k + 1].alt_flag
                states[k] = AbdfConfig(dom, np.zeros(dom.size, dtype=np.int8),
                                       alt_pattern(dom, alpha), alpha)
    if any(s is None for s in states):
        raise AmbiguousVacuumError("zero field throughout: vacuum parity undetermined")
    return states
