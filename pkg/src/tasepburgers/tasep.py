"""Discrete-time TASEP with parallel update driven by a shared noise field."""

from dataclasses import dataclass

import numpy as np

from .domain import Domain, pad
from .errors import InvalidConfigError
from .noise import noise_bits

__all__ = [
    "Domain", "TasepConfig", "tasep_step", "tasep_flow", "tasep_trajectory",
    "step_rows", "alternating",
]


@dataclass(frozen=True, eq=False)
class TasepConfig:
    """Occupancy ``eta`` on the sites of ``domain`` (index 0 is
    ``domain.origin``)."""

    domain: Domain
    occupancy: np.ndarray

    def __post_init__(self):
        occ = np.array(self.occupancy, dtype=np.int8).reshape(-1)
        if occ.shape[0] != self.domain.size:
            raise InvalidConfigError(
                f"occupancy has {occ.shape[0]} sites, domain has {self.domain.size}")
        if np.any((occ != 0) & (occ != 1)):
            raise InvalidConfigError("occupancy values must be 0 or 1")
        occ.setflags(write=False)
        object.__setattr__(self, "occupancy", occ)

    @classmethod
    def from_string(cls, bits, domain=None, origin=0):
        """Build from a ``0``/``1`` string.  Without ``domain`` the string is
        taken as a full ring; otherwise the string is placed starting at site
        ``origin`` and the remaining sites are empty."""
        bits = bits.strip()
        if any(c not in "01" for c in bits):
            raise InvalidConfigError(f"occupancy string must be over 0/1: {bits!r}")
        values = [int(c) for c in bits]
        if domain is None:
            return cls(Domain.ring(len(values)), values)
        occ = np.zeros(domain.size, dtype=np.int8)
        for k, v in enumerate(values):
            occ[domain.index(origin + k)] = v
        return cls(domain, occ)

    def to_string(self):
        return "".join(str(int(v)) for v in self.occupancy)

    def __eq__(self, other):
        if not isinstance(other, TasepConfig):
            return NotImplemented
        return self.domain == other.domain and np.array_equal(self.occupancy, other.occupancy)

    def __hash__(self):
        return hash((self.domain, self.occupancy.tobytes()))

    def __repr__(self):
        return f"TasepConfig({self.domain.spec_string()}, {self.to_string()!r})"

    def __getitem__(self, x):
        return int(self.occupancy[self.domain.index(x)])

    @property
    def particle_count(self):
        return int(self.occupancy.sum())


def alternating(domain, alpha):
    """The alternating configuration ``alt_alpha``: ``x mod 2`` for
    ``alpha = 0`` and ``(x + 1) mod 2`` for ``alpha = 1``."""
    return TasepConfig(domain, (domain.sites + alpha) % 2)


def _update(eta, eta_left, eta_right, omega, omega_left):
    kappa = 1 - omega
    kappa_left = 1 - omega_left
    return ((kappa * eta + omega * eta_right) * eta
            + (kappa_left * eta + omega_left * eta_left) * (1 - eta))


def step_rows(eta, omega):
    """One parallel TASEP update on ring arrays (last axis = sites).

    ``omega`` is the noise row the step consumes, broadcastable to ``eta``.
    """
    eta = np.asarray(eta, dtype=np.int8)
    omega = np.broadcast_to(np.asarray(omega, dtype=np.int8), eta.shape)
    return _update(eta, np.roll(eta, 1, axis=-1), np.roll(eta, -1, axis=-1),
                   omega, np.roll(omega, 1, axis=-1)).astype(np.int8)


def tasep_step(cfg, field, t):
    """Configuration at time ``t`` from the one at ``t - 1``; consumes noise
    row ``t - 1``.  Jumps onto occupied sites are aborted.

    On a line window, sites beyond the window read the tail occupancy and
    particles leaving the window are discarded.
    """
    if t < 1:
        raise ValueError(f"step time must be >= 1, got {t}")
    dom = cfg.domain
    dom.validate()
    if dom.is_ring:
        omega = noise_bits(field.seed, t - 1, dom.sites)
        return TasepConfig(dom, step_rows(cfg.occupancy, omega))
    eta = pad(dom, cfg.occupancy, dom.tail_left, dom.tail_right)
    xs = np.arange(dom.x_min - 1, dom.x_max + 2)
    omega = noise_bits(field.seed, t - 1, xs)
    new = _update(eta[1:-1], eta[:-2], eta[2:], omega[1:-1], omega[:-2])
    return TasepConfig(dom, new)


def tasep_flow(cfg, field, t, start=0):
    """Apply the steps ``start + 1, ..., start + t`` in order.

    With ``start = 0`` this is the random dynamical system at time ``t``;
    the cocycle identity reads
    ``tasep_flow(c, f, t + s) == tasep_flow(tasep_flow(c, f, s), f, t, start=s)``.
    """
    if t < 0:
        raise ValueError(f"flow time must be >= 0, got {t}")
    for k in range(start + 1, start + t + 1):
        cfg = tasep_step(cfg, field, k)
    return cfg


def tasep_trajectory(cfg, field, horizon):
    """States at times ``0, 1, ..., horizon``."""
    states = [cfg]
    for k in range(1, horizon + 1):
        states.append(tasep_step(states[-1], field, k))
    return states
