"""The pair operator ``theta(x) = 1 - eta(x) - eta(x+1)`` between TASEP and
ABDF configurations, and its inverse through maximal alternating segments."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .abdf import AbdfConfig, activation_record, alt_pattern, activation_rows
from .errors import InconsistentConfigError, InvalidConfigError
from .tasep import TasepConfig, alternating

__all__ = [
    "AlternatingSegment", "pair_forward", "pair_inverse",
    "maximal_alternating_segments", "pair_rows", "key_identity",
]


@dataclass(frozen=True)
class AlternatingSegment:
    """Consecutive non-zero spins at ``x1`` and ``x2`` with ``n`` zeros strictly
    between.  On rings ``x2`` is a site label, so a lone spin yields
    ``x1 == x2`` with ``n = L - 1``.  ``x1 is None`` marks the left half line
    of a window (zeros from ``x_min`` up to the first non-zero spin)."""

    x1: Optional[int]
    x2: int
    n: int
    sign1: int
    sign2: int

    @property
    def parity_ok(self):
        if self.x1 is None:
            return True
        if self.sign1 == self.sign2:
            return self.n % 2 == 0
        return self.n % 2 == 1


def pair_rows(eta):
    """Pair operator on ring arrays.  Returns ``(spins, act, alt)`` with
    ``alt = -1`` unless the row is alternating."""
    eta = np.asarray(eta, dtype=np.int8)
    spins = (1 - eta - np.roll(eta, -1, axis=-1)).astype(np.int8)
    empty = ~(spins != 0).any(axis=-1)
    act = np.where(empty[..., None], eta, activation_rows(spins)).astype(np.int8)
    alt = np.where(empty, eta[..., 0], -1).astype(np.int8)
    return spins, act, alt


def key_identity(eta):
    """``eta(x) (1 - eta(x+1))`` on ring arrays: the activation record of the
    pair image, computed locally."""
    eta = np.asarray(eta, dtype=np.int8)
    return (eta * (1 - np.roll(eta, -1, axis=-1))).astype(np.int8)


def pair_forward(cfg):
    """ABDF configuration of pairs of a TASEP configuration.

    On a line window ``eta(x_max + 1)`` reads the right tail.  An alternating
    ring configuration ``alt_alpha`` maps to the vacuum with flag ``alpha``.
    """
    dom = cfg.domain
    eta = cfg.occupancy
    if dom.is_ring:
        spins, act, alt = pair_rows(eta)
        alt = int(alt)
        return AbdfConfig(dom, spins, act, None if alt < 0 else alt)
    nxt = np.append(eta[1:], dom.tail_right)
    spins = (1 - eta - nxt).astype(np.int8)
    return AbdfConfig(dom, spins, activation_record(spins, dom))


def maximal_alternating_segments(spins, domain):
    """All runs between consecutive non-zero spins, in cyclic order on rings
    (starting from the first non-zero site) and left to right on windows.

    Windows contribute the leading half line (``x1 = None``) and a closing
    segment ending on the right tail spin at ``x_max + 1``.
    """
    spins = np.asarray(spins, dtype=np.int64)
    if domain.is_ring:
        nz = np.flatnonzero(spins)
        if nz.size == 0:
            raise InvalidConfigError("no alternating segments in the all-empty configuration")
        L = domain.L
        out = []
        for i, a in enumerate(nz):
            b = nz[(i + 1) % nz.size]
            n = (b - a - 1) % L if nz.size > 1 else L - 1
            out.append(AlternatingSegment(int(a), int(b), int(n), int(spins[a]), int(spins[b])))
        return out
    ext = np.append(spins, 1 - 2 * domain.tail_right)
    labels = np.arange(domain.x_min, domain.x_max + 2)
    nz = np.flatnonzero(ext)
    out = []
    if nz[0] > 0:
        out.append(AlternatingSegment(None, int(labels[nz[0]]), int(nz[0]), 0, int(ext[nz[0]])))
    for a, b in zip(nz[:-1], nz[1:]):
        out.append(AlternatingSegment(int(labels[a]), int(labels[b]), int(b - a - 1),
                                      int(ext[a]), int(ext[b])))
    return out


def _fill_segment(seg, theta_at, assign):
    """Anchor both ends and fill the interior by the alternating-sum inversion
    formula, checking that it lands on the right-end anchor."""
    x1, n = seg.x1, seg.n
    e1 = (1 - seg.sign1) // 2
    assign(x1, e1)
    assign(x1 + 1, e1)
    for j in range(1, n + 1):
        alt_sum = sum((-1) ** k * theta_at(x1 + j - k) for k in range(j + 1))
        value = (1 + (-1) ** j) // 2 - (-1) ** j * e1 - alt_sum
        if j < n:
            assign(x1 + j + 1, value)
        elif value != (1 - seg.sign2) // 2:
            raise InconsistentConfigError(
                f"segment ({seg.x1}, {seg.x2}) with {n} zeros contradicts its end spins")
    end = (1 - seg.sign2) // 2
    assign(x1 + n + 1, end)
    assign(x1 + n + 2, end)


def pair_inverse(cfg):
    """The unique TASEP configuration whose pair image is ``cfg``."""
    dom = cfg.domain
    spins = cfg.spins.astype(np.int64)
    if dom.is_ring and not spins.any():
        if cfg.alt_flag is None:
            raise InvalidConfigError("all-empty configuration without altFlag")
        return alternating(dom, cfg.alt_flag)

    values = {}

    def assign(x, v):
        if v not in (0, 1):
            raise InconsistentConfigError(f"reconstructed occupancy {v} at site {x}")
        key = x % dom.L if dom.is_ring else x
        if values.setdefault(key, v) != v:
            raise InconsistentConfigError(f"conflicting occupancy at site {x}")

    if dom.is_ring:
        def theta_at(x):
            return int(spins[x % dom.L])
    else:
        ext = np.append(spins, 1 - 2 * dom.tail_right)

        def theta_at(x):
            return int(ext[x - dom.x_min])

    segments = maximal_alternating_segments(spins, dom)
    for seg in segments:
        if seg.x1 is None:
            continue
        if dom.is_ring and seg.x1 == seg.x2:
            raise InconsistentConfigError("a lone non-zero spin on a ring violates parity")
        _fill_segment(seg, theta_at, assign)
    if not dom.is_ring:
        # leading half line: eta(x) = 1 - theta(x) - eta(x + 1), right to left
        first = segments[0].x2
        e = (1 - theta_at(first)) // 2
        assign(first, e)
        for x in range(first - 1, dom.x_min - 1, -1):
            e = 1 - theta_at(x) - e
            assign(x, e)
        if values.get(dom.x_max + 1, dom.tail_right) != dom.tail_right:
            raise InconsistentConfigError("window does not match the declared right tail")

    occ = np.array([values[x] for x in dom.sites], dtype=np.int8)
    result = TasepConfig(dom, occ)
    if pair_forward(result) != cfg:
        raise InconsistentConfigError("configuration is not in the image of the pair operator")
    return result
