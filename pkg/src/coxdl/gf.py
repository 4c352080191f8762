"""Exact arithmetic in a compatible tower of finite fields F_{q^m}.

Each field F_{q^m} (q = p^f) is realized as F_p[x]/(f_d) with d = f*m,
where f_d is the lexicographically least monic irreducible polynomial of
degree d over F_p.  Elements are encoded as base-p packed integers of
their coefficient vectors.  Fields up to ``zech_cap`` carry discrete-log
(Zech) tables, so multiplication and addition are table lookups; the
tower also hands out larger extension fields with coefficient-vector
arithmetic (see :mod:`coxdl.bigfield`).

Embeddings between levels are computed once by root finding and chosen
so that the whole system is composition-compatible.
"""

from __future__ import annotations

import math
from functools import lru_cache

from sympy import factorint, isprime

ZECH_CAP = 2 ** 20
HARD_CAP = 2 ** 32


class CapacityError(Exception):
    """Requested field exceeds the configured size bound."""


# ---------------------------------------------------------------------------
# polynomial helpers over F_p, coefficient lists low-to-high


def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_add(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _poly_trim(out)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c:
            for j, d in enumerate(b):
                out[i + j] = (out[i + j] + c * d) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, d in enumerate(m):
            a[shift + i] = (a[shift + i] - c * d) % p
        _poly_trim(a)
    return a


def _poly_powmod(a, e, m, p):
    result = [1]
    base = _poly_mod(a, m, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), m, p)
        base = _poly_mod(_poly_mul(base, base, p), m, p)
        e >>= 1
    return result


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _poly_mod(a, b, p)
    return a


def _is_irreducible(f, p):
    """Rabin test for a monic polynomial over F_p."""
    d = len(f) - 1
    if d <= 0:
        return False
    x = [0, 1]
    # x^(p^d) == x mod f
    xp = _poly_powmod(x, p ** d, f, p)
    if _poly_mod(_poly_add(xp, [0, p - 1], p), f, p):
        return False
    for ell in {k for k in factorint(d)}:
        xe = _poly_powmod(x, p ** (d // ell), f, p)
        g = _poly_gcd(_poly_add(xe, [0, p - 1], p), f, p)
        if len(g) - 1 != 0:
            return False
    return True


@lru_cache(maxsize=None)
def min_irreducible(p: int, d: int):
    """Lexicographically least monic irreducible of degree d over F_p.

    Lex order is on the coefficient tuple (c_0, ..., c_{d-1}) of the
    non-leading coefficients, read as a base-p integer.
    """
    if d == 1:
        return (0, 1)
    for packed in range(p ** d):
        coeffs = []
        v = packed
        for _ in range(d):
            coeffs.append(v % p)
            v //= p
        f = coeffs + [1]
        if f[0] == 0:
            continue
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("no irreducible polynomial found")


# ---------------------------------------------------------------------------


class FqElem:
    """Element of one field in a tower; canonical packed-integer value."""

    __slots__ = ("field", "val")

    def __init__(self, field: "FqField", val: int):
        self.field = field
        self.val = val

    @property
    def level(self):
        return self.field.m

    def __add__(self, other):
        f = self.field
        return FqElem(f, f.add(self.val, f.coerce(other)))

    __radd__ = __add__

    def __sub__(self, other):
        f = self.field
        return FqElem(f, f.sub(self.val, f.coerce(other)))

    def __rsub__(self, other):
        f = self.field
        return FqElem(f, f.sub(f.coerce(other), self.val))

    def __mul__(self, other):
        f = self.field
        return FqElem(f, f.mul(self.val, f.coerce(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        f = self.field
        return FqElem(f, f.mul(self.val, f.inv(f.coerce(other))))

    def __neg__(self):
        return FqElem(self.field, self.field.neg(self.val))

    def __pow__(self, e):
        return FqElem(self.field, self.field.pow(self.val, e))

    def __eq__(self, other):
        if isinstance(other, FqElem):
            return self.field is other.field and self.val == other.val
        if isinstance(other, int):
            return self.val == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.val))

    def __bool__(self):
        return self.val != 0

    def frobenius(self, i=1):
        """q^i-power map (i may be negative)."""
        return FqElem(self.field, self.field.frob(self.val, i))

    def embed(self, m):
        return self.field.tower.embed_elem(self, m)

    def coeffs(self):
        return self.field.coeff_vector(self.val)

    def __repr__(self):
        return f"Fq[{self.field.m}]({self.val})"


class FqField:
    """F_{q^m} with Zech-log tables (size <= zech_cap)."""

    def __init__(self, tower, m):
        self.tower = tower
        self.m = m
        self.p = tower.p
        self.d = tower.f * m            # degree over the prime field
        self.size = self.p ** self.d
        self.order = self.size - 1      # multiplicative order
        self.poly = min_irreducible(self.p, self.d)
        if self.p == 2:
            self._poly_mask = sum(c << i for i, c in enumerate(self.poly))
        self._order_factors = factorint(self.order) if self.order > 1 else {}
        self._build_tables()

    # -- table construction

    def _raw_mul(self, a, b):
        # packed-int multiplication via polynomial arithmetic
        if self.p == 2:
            # carryless multiply, then shift-xor reduction
            r = 0
            x = a
            while x:
                if x & 1:
                    r ^= b
                x >>= 1
                b <<= 1
            mask = self._poly_mask
            for bit in range(2 * self.d - 2, self.d - 1, -1):
                if (r >> bit) & 1:
                    r ^= mask << (bit - self.d)
            return r
        pa = self._unpack(a)
        pb = self._unpack(b)
        return self._pack(_poly_mod(_poly_mul(pa, pb, self.p), list(self.poly), self.p))

    def _unpack(self, a):
        out = []
        while a:
            out.append(a % self.p)
            a //= self.p
        return out

    def _pack(self, coeffs):
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + c
        return v

    def _multiplicative_order(self, a):
        o = self.order
        for ell in self._order_factors:
            while o % ell == 0 and self.pow_raw(a, o // ell) == 1:
                o //= ell
        return o

    def pow_raw(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._raw_mul(r, a)
            a = self._raw_mul(a, a)
            e >>= 1
        return r

    def _build_tables(self):
        if self.size > self.tower.zech_cap:
            raise CapacityError(f"field size {self.size} above Zech table bound")
        # generator: least packed value of full multiplicative order
        g = None
        for cand in range(self.p, self.size):
            if self._multiplicative_order(cand) == self.order:
                g = cand
                break
        if g is None:  # prime field fallback: search from 1
            for cand in range(1, self.size):
                if self._multiplicative_order(cand) == self.order:
                    g = cand
                    break
        self.g = g
        exp = [0] * self.order
        log = [0] * self.size
        acc = 1
        for k in range(self.order):
            exp[k] = acc
            log[acc] = k
            acc = self._raw_mul(acc, g)
        assert acc == 1, "generator order mismatch"
        self.exp = exp
        self.log = log
        # zech[k] = log(1 + g^k), or -1 when 1 + g^k == 0
        zech = [0] * self.order
        one_plus = None
        for k in range(self.order):
            s = self._add_packed(1, exp[k])
            zech[k] = -1 if s == 0 else log[s]
        self.zech = zech
        self._one_plus = one_plus

    def _add_packed(self, a, b):
        if self.p == 2:
            return a ^ b
        out, mul = 0, 1
        while a or b:
            out += ((a + b) % self.p) * mul
            a //= self.p
            b //= self.p
            mul *= self.p
        return out

    # -- arithmetic on packed values

    def coerce(self, x):
        if isinstance(x, FqElem):
            if x.field is self:
                return x.val
            if x.field.m == self.m and x.field.tower is self.tower:
                return x.val
            raise ValueError("element from a different field")
        if isinstance(x, int):
            return x % self.p
        raise TypeError(f"cannot coerce {x!r}")

    def add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = self.log[a], self.log[b]
        z = self.zech[(lb - la) % self.order]
        if z < 0:
            return 0
        return self.exp[(la + z) % self.order]

    def neg(self, a):
        if a == 0 or self.p == 2:
            return a
        half = self.order // 2
        return self.exp[(self.log[a] + half) % self.order]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % self.order]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-self.log[a]) % self.order]

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise ZeroDivisionError
            return 0 if e else 1
        return self.exp[(self.log[a] * e) % self.order]

    def frob(self, a, i=1):
        """a^(q^i); i arbitrary integer, reduced mod m."""
        if a == 0:
            return 0
        q = self.tower.q
        i %= self.m
        return self.exp[(self.log[a] * pow(q, i, self.order)) % self.order]

    # -- element creation / views

    def elem(self, val) -> FqElem:
        return FqElem(self, self.coerce(val))

    @property
    def zero(self):
        return FqElem(self, 0)

    @property
    def one(self):
        return FqElem(self, 1)

    def gen(self) -> FqElem:
        return FqElem(self, self.g)

    def elements(self):
        """All q^m elements, in packed-integer order, zero first."""
        yield FqElem(self, 0)
        for k in range(self.order):
            yield FqElem(self, self.exp[k])

    def coeff_vector(self, a):
        """F_p coefficients of a, length d, low-to-high."""
        out = self._unpack(a)
        out.extend([0] * (self.d - len(out)))
        return tuple(out)

    def from_coeff_vector(self, coeffs):
        return FqElem(self, self._pack([c % self.p for c in coeffs]))

    def trace_to_prime(self, a):
        """Absolute trace to F_p, as an integer."""
        t = 0
        x = a
        for _ in range(self.d):
            t = self._add_packed(t, x)
            x = self.pow_raw(x, self.p)
        assert t < self.p
        return t

    def __repr__(self):
        return f"FqField(q^{self.m}={self.size})"


class FieldTower:
    """Compatible chain of fields F_{q^m}, m in a divisor-closed set."""

    def __init__(self, p, f, degrees, zech_cap=ZECH_CAP, hard_cap=HARD_CAP):
        if not isprime(p):
            raise ValueError(f"p = {p} is not prime")
        if not degrees:
            raise ValueError("degrees must be nonempty")
        self.p = p
        self.f = f
        self.q = p ** f
        self.zech_cap = zech_cap
        self.hard_cap = hard_cap
        self.fields: dict[int, FqField] = {}
        # embeddings[(a, b)] = e with  embed(g_a) = g_b ** e
        self.embeddings: dict[tuple[int, int], int] = {}
        self._supported: list[int] = []
        for m in sorted(self._closure(degrees)):
            self._add_degree(m)

    @staticmethod
    def _closure(degrees):
        out = set()
        for m in degrees:
            for d in range(1, m + 1):
                if m % d == 0:
                    out.add(d)
        return out

    @property
    def supported_degrees(self):
        return tuple(self._supported)

    def field(self, m) -> FqField:
        if m not in self.fields:
            self.ensure_degree(m)
        return self.fields[m]

    def ensure_degree(self, m):
        """Add F_{q^m} (and its divisor levels) to the tower on demand."""
        if m in self.fields:
            return self.fields[m]
        if self.p ** (self.f * m) > self.hard_cap:
            raise CapacityError(f"q^{m} exceeds hard capacity bound")
        for d in sorted(self._closure([m])):
            if d not in self.fields:
                self._add_degree(d)
        return self.fields[m]

    def _add_degree(self, m):
        F = FqField(self, m)
        self.fields[m] = F
        self._supported.append(m)
        self._supported.sort()
        # embeddings from every supported proper divisor, kept compatible
        divs = [a for a in self._supported if a != m and m % a == 0]
        self.embeddings[(m, m)] = 1
        if not divs:
            return
        a_star = max(divs)
        e = self._find_embedding_exponent(a_star, m, constraints=[])
        self.embeddings[(a_star, m)] = e
        for a in divs:
            if a == a_star:
                continue
            if a_star % a == 0:
                # compose through a_star
                ea = (self.embeddings[(a, a_star)] * e) % self.fields[m].order
                self.embeddings[(a, m)] = ea
            else:
                g = math.gcd(a, a_star)
                constraints = [(g, self.embeddings[(g, m)])] if g > 1 else []
                self.embeddings[(a, m)] = self._find_embedding_exponent(a, m, constraints)
        self._check_compat(m)

    def _find_embedding_exponent(self, a, b, constraints):
        """Multiplicative exponent e of an embedding F_{q^a} -> F_{q^b}.

        An embedding is determined by a root r of the level-a defining
        polynomial inside F_{q^b}; it sends the generator g_a to
        g_b^e.  ``constraints`` is a list of (c, e_cb): the embedding must
        restrict on the level-c subfield to the already-fixed one.  Among
        valid embeddings the one with smallest e is chosen.
        """
        Fa, Fb = self.fields[a], self.fields[b]
        if Fa.d == 1:
            # prime field: constants are shared packed values in every level
            return Fb.log[Fa.g]
        step = Fb.order // Fa.order
        # roots of f_a live in the size-q^a subfield of F_b
        roots = []
        for k in range(Fa.order):
            r = Fb.exp[(step * k) % Fb.order]
            val = 0
            for coef in reversed(Fa.poly):
                val = Fb._add_packed(Fb.mul(val, r), coef % self.p)
            if val == 0:
                roots.append(r)
        assert len(roots) == Fa.d, f"expected {Fa.d} roots, got {len(roots)}"
        candidates = []
        for r in roots:
            # image of g_a: evaluate its coefficient vector at r
            img, acc = 0, 1
            for c in Fa.coeff_vector(Fa.g):
                if c:
                    img = Fb._add_packed(img, Fb.mul(c, acc))
                acc = Fb.mul(acc, r)
            e = Fb.log[img]
            ok = True
            for cdeg, e_cb in constraints:
                e_ca = self.embeddings[(cdeg, a)]
                if (e_ca * e) % Fb.order != e_cb % Fb.order:
                    ok = False
                    break
            if ok:
                candidates.append(e)
        if not candidates:
            raise AssertionError(f"no compatible embedding F_q^{a} -> F_q^{b}")
        return min(candidates)

    def _check_compat(self, m):
        for a in self._supported:
            for b in self._supported:
                if b % a or m % b or a == b or b == m:
                    continue
                eab = self.embeddings[(a, b)]
                ebm = self.embeddings[(b, m)]
                eam = self.embeddings[(a, m)]
                Fm = self.fields[m]
                assert (eab * ebm) % Fm.order == eam % Fm.order, (
                    f"embedding compatibility broken along {a}|{b}|{m}")

    # -- public element-level API

    def elem(self, m, val=0) -> FqElem:
        return self.field(m).elem(val)

    def embed_elem(self, x: FqElem, m: int) -> FqElem:
        a = x.field.m
        if m == a:
            return x
        if m % a != 0:
            raise ValueError(f"level {a} does not divide target level {m}")
        Fb = self.field(m)
        if x.val == 0:
            return Fb.zero
        e = self.embeddings[(a, m)]
        Fa = x.field
        return FqElem(Fb, Fb.exp[(Fa.log[x.val] * e) % Fb.order])

    def frobenius(self, x: FqElem, i: int) -> FqElem:
        return x.frobenius(i)

    def enumerate_field(self, m):
        return self.field(m).elements()


def build_tower(p, f, degrees, **kw) -> FieldTower:
    """Construct a tower of finite fields F_{(p^f)^m} for m in ``degrees``."""
    return FieldTower(p, f, degrees, **kw)
