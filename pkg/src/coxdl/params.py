"""Parameter bundle (q, n, kappa, h) and its derived invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from sympy import factorint

from .gf import build_tower, FieldTower


class UnsupportedModelError(Exception):
    """Group-side model only exists for kappa = 0 or n' = 1."""


def _split_prime_power(q):
    f = factorint(q)
    if len(f) != 1:
        raise ValueError(f"q = {q} is not a prime power")
    [(p, e)] = f.items()
    return p, e


@dataclass(frozen=True)
class GroupSpec:
    """Instance parameters: residue size q, rank n, twist kappa, depth h."""

    q: int
    n: int
    kappa: int
    h: int

    def __post_init__(self):
        if self.n < 2 or not (0 <= self.kappa < self.n) or self.h < 1:
            raise ValueError(f"bad parameters {self}")

    @property
    def p(self):
        return _split_prime_power(self.q)[0]

    @property
    def f(self):
        return _split_prime_power(self.q)[1]

    @property
    def n_prime(self):
        return math.gcd(self.n, self.kappa) if self.kappa else self.n

    @property
    def n0(self):
        return self.n // self.n_prime

    @property
    def k0(self):
        return self.kappa // self.n_prime

    @property
    def supported_model(self):
        return self.kappa == 0 or self.n_prime == 1

    def precisions(self):
        """Coordinate precision pattern: h at slots 1 mod n0, else h-1."""
        return tuple(self.h if (i % self.n0) == 0 else self.h - 1
                     for i in range(self.n))

    @property
    def point_dim(self):
        return sum(self.precisions())

    def tower(self) -> FieldTower:
        return _tower_for(self.q, self.n)

    def as_tuple(self):
        return (self.q, self.n, self.kappa, self.h)

    def __str__(self):
        return f"(q={self.q},n={self.n},kappa={self.kappa},h={self.h})"


_TOWER_CACHE: dict = {}


def _tower_for(q, n):
    key = (q, n)
    if key not in _TOWER_CACHE:
        p, f = _split_prime_power(q)
        degrees = {d for d in range(1, n + 1) if n % d == 0}
        _TOWER_CACHE[key] = build_tower(p, f, degrees)
    return _TOWER_CACHE[key]


def group_order(spec: GroupSpec) -> int:
    """q^{n^2(h-1)} * prod_{i<n'} (q^{n0 n'} - q^{n0 i})."""
    q, n, h = spec.q, spec.n, spec.h
    n0, npr = spec.n0, spec.n_prime
    out = q ** (n * n * (h - 1))
    for i in range(npr):
        out *= q ** (n0 * npr) - q ** (n0 * i)
    return out


def torus_order(spec: GroupSpec) -> int:
    q, n, h = spec.q, spec.n, spec.h
    return (q ** n - 1) * q ** (n * (h - 1))
