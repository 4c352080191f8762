"""The finite tori T_h = W_h(F_{q^n})^x: structure, characters, levels.

A torus instance carries an explicit basis of the finite abelian group
(one multiplicative-section generator of order q^n - 1 plus an
independent generating set of the principal-unit p-group found by the
max-order greedy), a full discrete-log table, and character utilities:
levels, general position, Galois orbits, norm factorizations, tower
decompositions and the degree bookkeeping derived from them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from math import gcd, lcm

from .cyclo import Cyclo
from .gf import FqElem
from .params import GroupSpec, torus_order
from .witt import Wt, nm, enumerate_witt, enumerate_unit_filtration

TORUS_CAP = 10 ** 5


class Torus:
    """T_h for a spec, with generators, orders and discrete logs."""

    def __init__(self, spec: GroupSpec):
        self.spec = spec
        if torus_order(spec) > TORUS_CAP:
            raise ValueError(f"torus size {torus_order(spec)} above cap")
        self.F = spec.tower().field(spec.n)
        self.h = spec.h
        self._build()

    # -- structure

    def _build(self):
        F, h = self.F, self.h
        teich = Wt.from_residue(F.gen(), h)
        gens = [teich]
        orders = [F.order]
        # principal units: greedy basis by maximal order in the quotient
        sub = {Wt.one(F, h): ()}
        u1_size = F.size ** (h - 1)
        candidates = list(enumerate_unit_filtration(F, h, 1)) if h > 1 else []
        p = F.p
        while len(sub) < u1_size:
            best, best_t = None, 0
            for u in candidates:
                if u in sub:
                    continue
                t = 1
                v = u
                while v not in sub:
                    v = v ** p
                    t *= p
                if t > best_t:
                    best, best_t = u, t
            u, t = best, best_t
            # correct u so that <sub, u> splits off a direct factor
            w = u ** t
            cexp = sub[w]
            corr = Wt.one(F, h)
            for j, c in enumerate(cexp):
                oj = orders[j + 1]
                g_ = gcd(t, oj)
                assert c % g_ == 0, "basis correction failed"
                d = (c // g_) * pow(t // g_, -1, oj // g_) % (oj // g_)
                corr = corr * gens[j + 1] ** d
            u = u * corr.inv()
            assert u ** t == Wt.one(F, h)
            gens.append(u)
            orders.append(t)
            new = {}
            for s, e in sub.items():
                acc = s
                for k in range(t):
                    new[acc] = e + (k,)
                    acc = acc * u
            sub = new
        self.gens = gens
        self.orders = orders
        self.exponent = lcm(*orders) if orders else 1
        # discrete log table for the whole torus
        dlog = {}
        acc0 = Wt.one(F, h)
        for a in range(F.order):
            for s, e in sub.items():
                dlog[acc0 * s] = (a,) + e
            acc0 = acc0 * teich
        assert len(dlog) == torus_order(self.spec)
        self.dlog = dlog
        self.elements = sorted(dlog, key=lambda x: x.c)

    def index_of(self, t: Wt):
        return self.elements.index(t)

    def dlog_of(self, t: Wt):
        return self.dlog[t]

    def from_dlog(self, e):
        out = Wt.one(self.F, self.h)
        for g, k in zip(self.gens, e):
            out = out * g ** k
        return out

    def sigma_on(self, t: Wt, s=1):
        return t.sigma(s)

    def subgroup_u(self, a: int):
        """Unit filtration subgroup U^a/U^h inside T_h (a >= 0)."""
        if a == 0:
            return list(self.elements)
        if a >= self.h:
            return [Wt.one(self.F, self.h)]
        return list(enumerate_unit_filtration(self.F, self.h, a))

    def norm_kernel(self, r: int):
        """ker( Nm_{n/r} ) on T_h, for r | n."""
        n = self.spec.n
        assert n % r == 0
        return [t for t in self.elements if nm(t, n, r) == Wt.one(self.F, self.h)]

    def all_characters(self):
        import itertools
        for exps in itertools.product(*[range(o) for o in self.orders]):
            yield TorusChar(self, exps)

    def character(self, exps):
        return TorusChar(self, tuple(e % o for e, o in zip(exps, self.orders)))


@lru_cache(maxsize=None)
def torus_for(spec: GroupSpec) -> Torus:
    return Torus(spec)


class TorusChar:
    """Character of T_h, stored as exponents against the torus basis."""

    __slots__ = ("torus", "exps")

    def __init__(self, torus: Torus, exps):
        assert len(exps) == len(torus.orders)
        self.torus = torus
        self.exps = tuple(e % o for e, o in zip(exps, torus.orders))

    @property
    def spec(self):
        return self.torus.spec

    def __eq__(self, other):
        return isinstance(other, TorusChar) and self.torus is other.torus \
            and self.exps == other.exps

    def __hash__(self):
        return hash(self.exps)

    def __repr__(self):
        return f"theta{self.exps}"

    def exponent_at(self, t: Wt) -> int:
        """k with theta(t) = zeta_E^k, E the torus exponent."""
        E = self.torus.exponent
        dl = self.torus.dlog[t]
        k = 0
        for e, o, d in zip(self.exps, self.torus.orders, dl):
            k += e * d * (E // o)
        return k % E

    def eval(self, t: Wt) -> Cyclo:
        return Cyclo.zeta_pow(self.torus.exponent, self.exponent_at(t))

    def is_trivial(self):
        return all(e == 0 for e in self.exps)

    def mul(self, other: "TorusChar"):
        return TorusChar(self.torus, [a + b for a, b in zip(self.exps, other.exps)])

    def inverse(self):
        return TorusChar(self.torus, [-e for e in self.exps])

    def compose_sigma(self, s: int):
        """theta o sigma^s, as a character of the same torus."""
        exps = []
        for g, o in zip(self.torus.gens, self.torus.orders):
            k = self.exponent_at(g.sigma(s))
            E = self.torus.exponent
            assert (k * o) % E == 0
            exps.append(k * o // E)
        return TorusChar(self.torus, exps)

    def restrict_equal(self, other: "TorusChar", elements):
        return all(self.exponent_at(t) == other.exponent_at(t) for t in elements)

    def is_trivial_on(self, elements):
        return all(self.exponent_at(t) == 0 for t in elements)


# -- levels, general position, orbits ---------------------------------------


def char_level(theta: TorusChar) -> int:
    """Smallest a >= 0 with theta trivial on U^a (a=0 means trivial)."""
    T = theta.torus
    for a in range(T.h + 1):
        if theta.is_trivial_on(T.subgroup_u(a)):
            return a
    raise AssertionError("character not trivial on U^h")


def is_general_position(theta: TorusChar, restrict_to_u1=False) -> bool:
    """No nontrivial sigma-power fixes theta (on U^1 if restricted).

    Cross-checked against the norm criterion: theta (restricted) factors
    through Nm_{n/r} for some r < n iff some sigma^s fixes it.
    """
    T = theta.torus
    n = T.spec.n
    dom = T.subgroup_u(1) if restrict_to_u1 else T.elements
    stab_nontrivial = False
    for s in range(1, n):
        if all(theta.exponent_at(t.sigma(s)) == theta.exponent_at(t) for t in dom):
            stab_nontrivial = True
            break
    # norm criterion: factors through Nm_{n/r}, r < n  <=>  not in general position
    factors = False
    for r in range(1, n):
        if n % r:
            continue
        ker = T.norm_kernel(r)
        if restrict_to_u1:
            ker = [t for t in ker if t.unit_filtration_level() >= 1]
        if all(theta.exponent_at(t) == 0 for t in ker):
            factors = True
            break
    assert stab_nontrivial == factors, "norm criterion mismatch"
    return not stab_nontrivial


def galois_orbit(theta: TorusChar):
    """Orbit of theta under sigma-powers."""
    out = []
    seen = set()
    for s in range(theta.torus.spec.n):
        c = theta.compose_sigma(s)
        if c.exps not in seen:
            seen.add(c.exps)
            out.append(c)
    return out


# -- tower decomposition -----------------------------------------------------


@dataclass(frozen=True)
class HoweDecomposition:
    """Tower data for a character: subfield indices, levels, twist."""

    t: int
    r: tuple          # subfield degrees over the base, increasing, r[-1] = n
    levels: tuple     # strictly decreasing jump levels h_1 > ... > h_t
    d: tuple          # codegrees n / r_k
    twist_exps: tuple  # exponents of the norm-inflated character split off
    ambient_level: int

    @property
    def h1(self):
        return self.levels[0] if self.levels else 0

    @property
    def ht(self):
        return self.levels[-1] if self.levels else 0


def norm_inflated_characters(T: Torus):
    """Characters of T_h factoring through the full norm Nm_{n/1}."""
    ker = set(T.norm_kernel(1))
    return [th for th in T.all_characters() if th.is_trivial_on(ker)]


def _stab_index(theta: TorusChar, elements):
    """Smallest divisor s of n with theta o sigma^s = theta on elements."""
    n = theta.torus.spec.n
    for s in range(1, n + 1):
        if n % s:
            continue
        if all(theta.exponent_at(t.sigma(s)) == theta.exponent_at(t) for t in elements):
            return s
    raise AssertionError("sigma^n must stabilize")


def howe_decompose(theta: TorusChar) -> HoweDecomposition:
    """Canonical tower of a character of T_h.

    First the base-norm part is split off (the twist with the smallest
    remaining level, ties by exponent tuple), then for each depth a the
    minimal subfield index r(a) whose norm carries theta above depth a
    is read off via the sigma-stability test; the jumps of a -> r(a)
    give the tower and its levels.
    """
    T = theta.torus
    n = T.spec.n
    reduced, twist, best_key = None, None, None
    for chi in norm_inflated_characters(T):
        cand = theta.mul(chi.inverse())
        key = (char_level(cand), cand.exps)
        if best_key is None or key < best_key:
            reduced, twist, best_key = cand, chi, key
    lev = char_level(reduced)
    if lev == 0:
        return HoweDecomposition(1, (n,), (0,), (1,), twist.exps, T.h)
    rs = []
    for a in range(1, lev + 1):
        dom = T.subgroup_u(a - 1)
        rs.append(_stab_index(reduced, dom))
    # r(a) is non-increasing in depth a; jumps give the tower
    assert all(rs[i] >= rs[i + 1] for i in range(len(rs) - 1)), rs
    distinct = sorted(set(rs))
    levels = [max(a for a in range(1, lev + 1) if rs[a - 1] == r) for r in distinct]
    if distinct[-1] != n:
        # the top-field part is trivial; record it with a level-0 member
        distinct.append(n)
        levels.append(0)
    levels = tuple(levels)
    assert all(levels[i] > levels[i + 1] for i in range(len(levels) - 1))
    return HoweDecomposition(
        t=len(distinct),
        r=tuple(distinct),
        levels=levels,
        d=tuple(n // r for r in distinct),
        twist_exps=twist.exps,
        ambient_level=T.h,
    )


def r_theta(hd: HoweDecomposition, spec: GroupSpec) -> int:
    """Cohomological degree at the tower's own top level h_1."""
    n, npr = spec.n, spec.n_prime
    h1, ht = hd.h1, hd.ht
    extra = sum(hd.d[k] * (hd.levels[k] - hd.levels[k + 1]) for k in range(hd.t - 1))
    return (npr - n) + ht + (n - 2) * h1 + extra


def degree_formula(hd: HoweDecomposition, spec: GroupSpec) -> int:
    """Closed-form dimension for characters whose U^1-part is regular."""
    q, n, n0, npr = spec.q, spec.n, spec.n0, spec.n_prime
    h1 = max(hd.h1, 1)
    ht = max(hd.ht, 1)
    inner = n * (h1 - 1) - (ht - 1) - sum(
        hd.d[k] * (hd.levels[k] - hd.levels[k + 1]) for k in range(hd.t - 1))
    num = n * inner
    assert num % 2 == 0, "half-integer exponent in degree formula"
    out = q ** (num // 2)
    for i in range(1, npr):
        out *= q ** (n0 * (npr - i)) - 1
    return out


def parse_theta_spec(T: Torus, s: str) -> TorusChar:
    """CLI character string 'g0:e0,g1:e1,...' -> character."""
    exps = [0] * len(T.orders)
    if s:
        for part in s.split(","):
            g, e = part.split(":")
            idx = int(g.lstrip("g"))
            exps[idx] = int(e)
    return T.character(exps)
