"""Finite realizations of the lattice: even rings and line windows with
frozen constant tails."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidDomainError

RING = "ring"
LINE = "line"


@dataclass(frozen=True)
class Domain:
    """Either a ring ``Z / L Z`` (``L`` even, ``L >= 4``) or an inclusive
    window ``[x_min, x_max]`` of ``Z`` whose two semi-infinite tails carry a
    constant TASEP occupancy."""

    mode: str
    L: int = 0
    x_min: int = 0
    x_max: int = 0
    tail_left: int = 0
    tail_right: int = 0

    @classmethod
    def ring(cls, L):
        dom = cls(RING, L=int(L))
        dom.validate()
        return dom

    @classmethod
    def line(cls, x_min, x_max, tail_left=0, tail_right=0):
        dom = cls(LINE, x_min=int(x_min), x_max=int(x_max),
                  tail_left=int(tail_left), tail_right=int(tail_right))
        dom.validate()
        return dom

    def validate(self):
        if self.mode == RING:
            if self.L < 4 or self.L % 2:
                raise InvalidDomainError(
                    f"ring circumference must be even and >= 4, got {self.L}")
        elif self.mode == LINE:
            if self.x_min > self.x_max:
                raise InvalidDomainError(
                    f"empty window [{self.x_min}, {self.x_max}]")
            if self.tail_left not in (0, 1) or self.tail_right not in (0, 1):
                raise InvalidDomainError("tail values must be 0 or 1")
        else:
            raise InvalidDomainError(f"unknown domain mode {self.mode!r}")

    @property
    def is_ring(self):
        return self.mode == RING

    @property
    def size(self):
        return self.L if self.is_ring else self.x_max - self.x_min + 1

    @property
    def origin(self):
        """Site label of array index 0."""
        return 0 if self.is_ring else self.x_min

    @property
    def sites(self):
        return np.arange(self.origin, self.origin + self.size)

    def index(self, x):
        """Array index of site ``x`` (wrapped on rings)."""
        if self.is_ring:
            return int(x) % self.L
        i = int(x) - self.x_min
        if not 0 <= i < self.size:
            raise IndexError(f"site {x} outside window [{self.x_min}, {self.x_max}]")
        return i

    def contains(self, x):
        return self.is_ring or self.x_min <= x <= self.x_max

    def spec_string(self):
        if self.is_ring:
            return f"ring:{self.L}"
        return f"line:{self.x_min}:{self.x_max}:{self.tail_left}{self.tail_right}"

    @classmethod
    def parse(cls, text):
        """Parse ``ring:L`` or ``line:x_min:x_max:tails`` (tails as two bits,
        e.g. ``01``)."""
        parts = text.strip().split(":")
        try:
            if parts[0] == RING and len(parts) == 2:
                return cls.ring(int(parts[1]))
            if parts[0] == LINE and len(parts) in (3, 4):
                tails = parts[3] if len(parts) == 4 else "00"
                if len(tails) != 2:
                    raise InvalidDomainError(f"tails must be two bits, got {tails!r}")
                return cls.line(int(parts[1]), int(parts[2]), int(tails[0]), int(tails[1]))
        except ValueError as exc:
            if isinstance(exc, InvalidDomainError):
                raise
            raise InvalidDomainError(f"cannot parse domain {text!r}") from exc
        raise InvalidDomainError(f"cannot parse domain {text!r}")


def pad(domain, values, left, right):
    """Return ``values`` (last axis = sites) extended by one site on each side.

    Rings wrap; line windows use the supplied exterior values."""
    values = np.asarray(values)
    if domain.is_ring:
        return np.concatenate([values[..., -1:], values, values[..., :1]], axis=-1)
    shape = values.shape[:-1] + (1,)
    lo = np.full(shape, left, dtype=values.dtype)
    hi = np.full(shape, right, dtype=values.dtype)
    return np.concatenate([lo, values, hi], axis=-1)
