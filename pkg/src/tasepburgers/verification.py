"""Certificates for the constructions.

Two independent routes check that the Burgers field is a weak solution:
an exact jump-condition check on every discontinuity line, and a naive
midpoint quadrature of the weak formulation against bump test functions that
evaluates the primitives on an integer grid without going through profiles
or edges.  The conjugacy and bijection checks compare TASEP and ABDF
directly.
"""

import itertools
import json
from dataclasses import dataclass, asdict
from fractions import Fraction
from typing import Optional

import numpy as np

from .abdf import abdf_step, activation_rows, lambda0_rows
from .burgers_field import Profile, frame_intervals, profile
from .domain import Domain
from .errors import InvalidDomainError, SupportError
from .pairmap import pair_forward, pair_inverse, pair_rows
from .tasep import TasepConfig, tasep_step

__all__ = [
    "EdgeSegment", "edges", "profile_from_edges", "rankine_hugoniot_residual",
    "lax_condition", "ENTROPIC", "NON_ENTROPIC", "TestFunction", "weak_residual",
    "continuity_check", "ConjugacyReport", "conjugacy_check", "BijectionReport",
    "bijection_check", "total_mass", "to_json", "MAX_EXHAUSTIVE_L",
]

ENTROPIC = "entropic"
NON_ENTROPIC = "non-entropic"
MAX_EXHAUSTIVE_L = 16


# discontinuity lines -------------------------------------------------------

@dataclass(frozen=True)
class EdgeSegment:
    """A jump of ``u`` along ``x(t) = x_start + slope (t - t_start)`` for
    ``t_start < t < t_end`` (positions taken mod ``L`` on rings)."""

    t_start: Fraction
    t_end: Fraction
    x_start: Fraction
    slope: int
    u_left: int
    u_right: int

    def position(self, t):
        return self.x_start + self.slope * (Fraction(t) - self.t_start)

    @property
    def x_end(self):
        return self.position(self.t_end)

    def to_dict(self):
        return {"t_start": str(self.t_start), "t_end": str(self.t_end),
                "x_start": str(self.x_start), "slope": self.slope,
                "u_left": self.u_left, "u_right": self.u_right,
                "rh_residual": str(rankine_hugoniot_residual(self)),
                "lax": lax_condition(self)}


def _edge_slopes(frame, t, domain):
    slopes = {}
    for q in frame.active(t):
        for blk in q.blocks():
            a, b = blk.at(t)
            if b <= a:
                continue
            for pos, s in ((a, blk.a_slope), (b, blk.b_slope)):
                if domain.is_ring:
                    pos %= domain.L
                slopes.setdefault(pos, int(s))
    return slopes


def edges(frames):
    """Maximal discontinuity segments of the field over all ``frames``.

    Each unit interval is cut at quarter times, the only times at which
    lines can meet; within a quarter every breakpoint of the mid-time profile
    follows one line with constant jump.  Collinear pieces with equal jump
    that touch in time are merged.
    """
    pieces = []
    for fr in frames:
        dom = fr.domain
        for k in range(4):
            ts = Fraction(fr.t0) + Fraction(k, 4)
            tm = ts + Fraction(1, 8)
            slopes = _edge_slopes(fr, tm, dom)
            prof = profile(fr, tm)
            for pos, jump in prof.jumps():
                if jump == 0:
                    continue
                right = prof.value_at(pos)
                s = slopes[pos]
                pieces.append(EdgeSegment(ts, ts + Fraction(1, 4), pos - s * Fraction(1, 8),
                                          s, right - jump, right))
    if not pieces:
        return []
    dom = frames[0].domain

    def key(e):
        icpt = e.x_start - e.slope * e.t_start
        if dom.is_ring:
            icpt %= dom.L
        return (e.slope, icpt, e.u_left, e.u_right)

    groups = {}
    for e in pieces:
        groups.setdefault(key(e), []).append(e)
    out = []
    for segs in groups.values():
        segs.sort(key=lambda e: e.t_start)
        cur = segs[0]
        for e in segs[1:]:
            if e.t_start == cur.t_end:
                cur = EdgeSegment(cur.t_start, e.t_end, cur.x_start, cur.slope,
                                  cur.u_left, cur.u_right)
            else:
                out.append(cur)
                cur = e
        out.append(cur)
    out.sort(key=lambda e: (e.t_start, e.x_start, e.slope))
    return out


def profile_from_edges(edge_list, t, domain):
    """Profile at ``t`` read off the edges alive at ``t`` (``t`` must not be
    an end time of any edge)."""
    t = Fraction(t)
    bps = []
    for e in edge_list:
        if e.t_start < t < e.t_end:
            pos = e.position(t)
            if domain.is_ring:
                pos %= domain.L
            bps.append((pos, e.u_right))
    return Profile(domain, tuple(sorted(bps)))


def rankine_hugoniot_residual(edge):
    """``s (u+ - u-) - (u+^2 - u-^2) / 2``, exactly."""
    ul, ur = Fraction(edge.u_left), Fraction(edge.u_right)
    return edge.slope * (ur - ul) - (ur * ur - ul * ul) / 2


def lax_condition(edge):
    """Entropic iff ``u- >= s >= u+``."""
    return ENTROPIC if edge.u_left >= edge.slope >= edge.u_right else NON_ENTROPIC


def total_mass(prof):
    """Exact integral of a profile over the domain."""
    return prof.mass()


# quadrature ----------------------------------------------------------------

def _bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def _bump_prime(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = np.abs(s) < 1
    si = s[inside]
    out[inside] = np.exp(-1.0 / (1.0 - si ** 2)) * (-2.0 * si / (1.0 - si ** 2) ** 2)
    return out


@dataclass(frozen=True)
class TestFunction:
    """Tensor-product bump ``b((t - t_c)/r_t) b((x - x_c)/r_x)`` with
    ``b(s) = exp(-1 / (1 - s^2))`` on ``(-1, 1)``."""

    __test__ = False  # not a pytest class

    t_c: float
    x_c: float
    r_t: float
    r_x: float

    def __call__(self, t, x):
        return _bump((t - self.t_c) / self.r_t) * _bump((x - self.x_c) / self.r_x)

    def d_t(self, t, x):
        return _bump_prime((t - self.t_c) / self.r_t) / self.r_t * _bump((x - self.x_c) / self.r_x)

    def d_x(self, t, x):
        return _bump((t - self.t_c) / self.r_t) * _bump_prime((x - self.x_c) / self.r_x) / self.r_x


_TABLE_CACHE = {}


def _block_table(frames, S):
    key = (tuple(id(f) for f in frames), S)
    hit = _TABLE_CACHE.get(key)
    if hit is not None and hit[0] == list(frames):
        return hit[1]
    tab = _build_block_table(frames, S)
    if len(_TABLE_CACHE) > 64:
        _TABLE_CACHE.clear()
    _TABLE_CACHE[key] = (list(frames), tab)
    return tab


def _build_block_table(frames, S):
    """Every block of every frame as integer rows scaled by ``S``:
    value, a_ref, a_slope, b_ref, b_slope, t_ref, t_start, t_end."""
    rows = []
    last = len(frames) - 1
    for n, fr in enumerate(frames):
        for q in fr.primitives:
            ts, te = q.t_start, q.t_end
            closed = int(n == last and te == fr.t_end)
            for blk in q.blocks():
                if blk.a_slope.denominator != 1 or blk.b_slope.denominator != 1:
                    raise ValueError("quadrature needs integer speeds")
                vals = [blk.a_ref * S, blk.b_ref * S, blk.t_ref * S, ts * S, te * S]
                if any(v.denominator != 1 for v in vals):
                    raise ValueError("grid step incompatible with the block lattice")
                a, b, tr, t1, t2 = (int(v) for v in vals)
                rows.append((int(blk.value), a, int(blk.a_slope), b, int(blk.b_slope),
                             tr, t1, t2, closed))
    return np.array(rows, dtype=np.int64).reshape(-1, 9)


def _grid_field(frames, h, i_idx, j_idx):
    """``u`` at ``t_i = i h`` and ``x_j = (j + 1/2) h`` from the raw blocks,
    in exact integer arithmetic."""
    p, q = h.numerator, h.denominator
    S = 2 * q  # even, so half-integer anchors and times are integral too
    tab = _block_table(frames, S)
    nt, nx = len(i_idx), len(j_idx)
    U = np.zeros((nt, nx + 1), dtype=np.int64)
    if tab.shape[0] == 0:
        return U[:, :nx]
    dom = frames[0].domain
    T = (i_idx * p * S // q)[None, :]  # t_i scaled
    val, a0, sa, b0, sb, tr, t1, t2, closed = (tab[:, k][:, None] for k in range(9))
    active = (T >= t1) & ((T < t2) | ((T == t2) & (closed == 1)))
    A = a0 + sa * (T - tr)
    B = b0 + sb * (T - tr)
    active &= B > A
    k_idx, t_pos = np.nonzero(active)
    A, B, V = A[k_idx, t_pos], B[k_idx, t_pos], val[k_idx, 0]
    # grid point x_j scaled: (2j + 1) p S / (2q) = (2j + 1) * unit
    unit = p * S // (2 * q)
    j0 = int(j_idx[0])
    shifts = [0]
    if dom.is_ring:
        LS = dom.L * S
        lo = (2 * j0 + 1) * unit
        hi = (2 * int(j_idx[-1]) + 1) * unit
        m_lo = (lo - int(B.max(initial=0))) // LS - 1
        m_hi = (hi - int(A.min(initial=0))) // LS + 1
        shifts = [m * LS for m in range(m_lo, m_hi + 1)]
    for sh in shifts:
        a, b = A + sh, B + sh
        # smallest j with (2j + 1) unit >= a
        jl = -((-(a - unit)) // (2 * unit))
        jh = -((-(b - unit)) // (2 * unit))
        jl = np.clip(jl - j0, 0, nx)
        jh = np.clip(jh - j0, 0, nx)
        keep = jh > jl
        np.add.at(U, (t_pos[keep], jl[keep]), V[keep])
        np.add.at(U, (t_pos[keep], jh[keep]), -V[keep])
    return np.cumsum(U, axis=1)[:, :nx]


def _check_support(frames, phi):
    t_lo = frames[0].t0
    t_hi = frames[-1].t0 + 1
    if phi.t_c - phi.r_t < t_lo or phi.t_c + phi.r_t > t_hi:
        raise SupportError(f"test function time support leaves [{t_lo}, {t_hi}]")
    dom = frames[0].domain
    if not dom.is_ring and (phi.x_c - phi.r_x < dom.x_min or phi.x_c + phi.r_x > dom.x_max + 1):
        raise SupportError("test function space support leaves the window")
    if dom.is_ring and 2 * phi.r_x > dom.L:
        raise SupportError("test function wider than the ring")


def _grid(center, radius, h, shift):
    """Indices ``k`` with ``(k + shift) h`` inside ``[center - radius, center + radius]``."""
    hf = float(h)
    lo = int(np.floor((center - radius) / hf - shift)) - 1
    hi = int(np.ceil((center + radius) / hf - shift)) + 1
    return np.arange(lo, hi + 1)


def weak_residual(frames, phi, grid_step):
    """Midpoint-rule value of ``iint (u phi_t + u^2 phi_x / 2) dx dt``.

    Time cells are centred on multiples of the step and space cells on
    half-odd multiples, so with a step dividing 1/4 every discontinuity sits
    on a cell boundary.
    """
    _check_support(frames, phi)
    h = Fraction(grid_step).limit_denominator(10 ** 9) if isinstance(grid_step, float) \
        else Fraction(grid_step)
    if h <= 0:
        raise ValueError("grid step must be positive")
    i_idx = _grid(phi.t_c, phi.r_t, h, 0.0)
    j_idx = _grid(phi.x_c, phi.r_x, h, 0.5)
    i_idx = i_idx[(i_idx * h.numerator >= frames[0].t0 * h.denominator)
                  & (i_idx * h.numerator <= (frames[-1].t0 + 1) * h.denominator)]
    U = _grid_field(frames, h, i_idx, j_idx).astype(float)
    hf = float(h)
    tt = (i_idx * hf)[:, None]
    xx = ((j_idx + 0.5) * hf)[None, :]
    integrand = U * phi.d_t(tt, xx) + 0.5 * U * U * phi.d_x(tt, xx)
    return float(integrand.sum() * hf * hf)


def continuity_check(frames, x_c, r_x, dt, grid_step):
    """Sample ``I(t) = int u(t, x) psi(x) dx`` (``psi`` a bump) at multiples of
    ``dt`` and compare increments with ``4 |psi|_inf K dt``, ``K`` the largest
    number of blocks alive at once: each block edge moves at speed at most 1
    and carries a jump of 2."""
    h = Fraction(grid_step)
    dt = Fraction(dt)
    if (dt / h).denominator != 1:
        raise ValueError("dt must be a multiple of the grid step")
    t_lo, t_hi = frames[0].t0, frames[-1].t0 + 1
    n = int((t_hi - t_lo) / dt)
    ts = [t_lo + k * dt for k in range(n + 1)]
    i_idx = np.array([int(t / h) for t in ts])
    j_idx = _grid(x_c, r_x, h, 0.5)
    U = _grid_field(frames, h, i_idx, j_idx).astype(float)
    xx = (j_idx + 0.5) * float(h)
    psi = _bump((xx - x_c) / r_x)
    I = U @ psi * float(h)
    blocks = 0
    for fr in frames:
        for k in range(8):
            t = fr.t0 + Fraction(2 * k + 1, 16)
            blocks = max(blocks, len(frame_intervals(fr, t)))
    bound = 4 * float(psi.max(initial=0.0)) * blocks * float(dt)
    incr = float(np.max(np.abs(np.diff(I)), initial=0.0))
    return {"ok": incr <= bound + 1e-12, "max_increment": incr, "bound": bound,
            "samples": len(ts)}


# conjugacy and bijection -------------------------------------------------

@dataclass
class ConjugacyReport:
    ok: bool
    steps: int
    failure_step: Optional[int] = None
    expected: Optional[str] = None
    actual: Optional[str] = None
    initial: Optional[str] = None
    seed: Optional[int] = None

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return asdict(self)


def conjugacy_check(eta, field, T, abdf_initial=None):
    """Run TASEP and ABDF side by side on the shared noise, comparing the pair
    image of the TASEP state with the ABDF state after every step.

    ``abdf_initial`` overrides the ABDF starting point (defaults to the pair
    image of ``eta``), which allows injecting faults.
    """
    theta = pair_forward(eta) if abdf_initial is None else abdf_initial
    for t in range(1, T + 1):
        eta = tasep_step(eta, field, t)
        theta = abdf_step(theta, field, t, check=False)
        expected = pair_forward(eta)
        if expected != theta:
            return ConjugacyReport(False, T, t, repr(expected), repr(theta),
                                   eta.to_string(), field.seed)
    return ConjugacyReport(True, T)


@dataclass
class BijectionReport:
    ok: bool
    L: int
    configurations: int
    image_size: int
    lambda_size: int
    counterexample: Optional[str] = None

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return asdict(self)


def bijection_check(L, max_L=MAX_EXHAUSTIVE_L):
    """Exhaustive check on the ring of size ``L``: the pair operator is
    injective, its image is exactly the set of ABDF configurations (parity-law
    spin fields with their activation record, plus the two vacua), and the
    inverse undoes it on every configuration."""
    dom = Domain.ring(L)
    if L > max_L:
        raise InvalidDomainError(f"exhaustive bound is L <= {max_L}, got {L}")
    etas = np.array(list(itertools.product((0, 1), repeat=L)), dtype=np.int8)
    spins, act, alt = pair_rows(etas)
    keys = {(s.tobytes(), a.tobytes(), int(f)) for s, a, f in zip(spins, act, alt)}
    image = len(keys)
    nonvac = alt < 0
    in_lambda = bool(lambda0_rows(spins[nonvac]).all()
                     and np.array_equal(act[nonvac], activation_rows(spins[nonvac])))
    valid = lambda0_rows(np.array(list(itertools.product((-1, 0, 1), repeat=L)), dtype=np.int8))
    lam = int(valid.sum()) + 2
    counter = None
    for e in etas:
        cfg = TasepConfig(dom, e)
        if pair_inverse(pair_forward(cfg)) != cfg:
            counter = cfg.to_string()
            break
    ok = counter is None and in_lambda and image == 2 ** L and lam == image
    return BijectionReport(ok, L, 2 ** L, image, lam, counter)


def to_json(obj, **kwargs):
    """Serialize a report, edge list or frame to JSON text."""
    def default(o):
        if hasattr(o, "to_dict"):
            return o.to_dict()
        if isinstance(o, Fraction):
            return str(o)
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        raise TypeError(f"cannot serialize {type(o).__name__}")
    return json.dumps(obj, default=default, **kwargs)
