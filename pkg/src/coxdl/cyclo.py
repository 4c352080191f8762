"""Exact cyclotomic arithmetic: elements of Q(zeta_E).

Represented as integer coordinate vectors in the power basis
1, z, ..., z^{phi(E)-1} modulo the E-th cyclotomic polynomial, with a
single positive integer denominator.  Equality of canonical forms is
coordinate equality, so class-function identities can be asserted
exactly.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from sympy import cyclotomic_poly, Symbol


@lru_cache(maxsize=None)
def _phi_coeffs(E: int):
    """Coefficients (low first) of the E-th cyclotomic polynomial."""
    x = Symbol("x")
    p = cyclotomic_poly(E, x)
    return tuple(int(c) for c in reversed(p.as_poly(x).all_coeffs()))


@lru_cache(maxsize=None)
def _monomial_table(E: int):
    """Reduction of z^k mod Phi_E for 0 <= k < 2E, as integer tuples."""
    phi = _phi_coeffs(E)
    deg = len(phi) - 1
    rows = []
    cur = [0] * deg
    if deg:
        cur[0] = 1
    rows.append(tuple(cur))
    for _ in range(1, 2 * E):
        nxt = [0] * deg
        carry = cur[deg - 1]
        for i in range(deg - 1, 0, -1):
            nxt[i] = cur[i - 1]
        nxt[0] = 0
        if carry:
            for i in range(deg):
                nxt[i] -= carry * phi[i]
        rows.append(tuple(nxt))
        cur = nxt
    return rows, deg


class Cyclo:
    """Element of Q(zeta_E) in canonical reduced form."""

    __slots__ = ("E", "num", "den")

    def __init__(self, E, num, den=1):
        _, deg = _monomial_table(E)
        assert len(num) == deg
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = gcd(den, *[abs(c) for c in num]) if any(num) else den
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.E = E
        self.num = tuple(num)
        self.den = den

    # -- constructors

    @classmethod
    def zero(cls, E=1):
        _, deg = _monomial_table(E)
        return cls(E, [0] * deg)

    @classmethod
    def from_rational(cls, r, E=1):
        r = Fraction(r)
        _, deg = _monomial_table(E)
        num = [0] * deg
        num[0] = r.numerator
        return cls(E, num, r.denominator)

    @classmethod
    def zeta_pow(cls, E, k):
        """zeta_E^k as a canonical element."""
        rows, deg = _monomial_table(E)
        return cls(E, list(rows[k % E]))

    @classmethod
    def from_exponent_counts(cls, E, counts, den=1):
        """sum_k counts[k] * zeta_E^k, reduced; counts indexed mod E."""
        rows, deg = _monomial_table(E)
        num = [0] * deg
        for k, c in enumerate(counts):
            if c:
                row = rows[k % E]
                for i in range(deg):
                    num[i] += c * row[i]
        return cls(E, num, den)

    # -- conductor handling

    def lift(self, E2):
        if E2 == self.E:
            return self
        assert E2 % self.E == 0
        step = E2 // self.E
        rows2, deg2 = _monomial_table(E2)
        num = [0] * deg2
        # re-expand basis monomials z_E^i = z_{E2}^{i*step}
        for i, c in enumerate(self.num):
            if c:
                row = rows2[(i * step) % (2 * E2)]
                for j in range(deg2):
                    num[j] += c * row[j]
        return Cyclo(E2, num, self.den)

    def _pair(self, other):
        if not isinstance(other, Cyclo):
            other = Cyclo.from_rational(other, self.E)
        if self.E == other.E:
            return self, other
        E = lcm(self.E, other.E)
        return self.lift(E), other.lift(E)

    # -- arithmetic

    def __add__(self, other):
        a, b = self._pair(other)
        num = [x * b.den + y * a.den for x, y in zip(a.num, b.num)]
        return Cyclo(a.E, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.E, [-c for c in self.num], self.den)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        rows, deg = _monomial_table(a.E)
        conv = [0] * (2 * deg - 1 if deg else 1)
        for i, x in enumerate(a.num):
            if x:
                for j, y in enumerate(b.num):
                    if y:
                        conv[i + j] += x * y
        num = [0] * deg
        for k, c in enumerate(conv):
            if c:
                row = rows[k]
                for i in range(deg):
                    num[i] += c * row[i]
        return Cyclo(a.E, num, a.den * b.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Cyclo):
            if other.is_rational():
                other = other.rational()
            else:
                raise NotImplementedError("division only by rationals")
        r = Fraction(other)
        return Cyclo(self.E, [c * r.denominator for c in self.num], self.den * r.numerator)

    def conjugate(self):
        """Complex conjugation zeta -> zeta^{-1}."""
        rows, deg = _monomial_table(self.E)
        # write self = sum_i num[i] z^i, conjugate monomials: z^i -> z^{E-i}
        num = [0] * deg
        for i, c in enumerate(self.num):
            if c:
                row = rows[(-i) % self.E]
                for j in range(deg):
                    num[j] += c * row[j]
        return Cyclo(self.E, num, self.den)

    def galois(self, k):
        """Galois twist zeta -> zeta^k (k prime to E for an automorphism)."""
        rows, deg = _monomial_table(self.E)
        num = [0] * deg
        for i, c in enumerate(self.num):
            if c:
                row = rows[(i * k) % self.E]
                for j in range(deg):
                    num[j] += c * row[j]
        return Cyclo(self.E, num, self.den)

    # -- predicates / extraction

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclo.from_rational(other, self.E)
        if not isinstance(other, Cyclo):
            return NotImplemented
        a, b = self._pair(other)
        return a.num == b.num and a.den == b.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return any(self.num)

    def is_rational(self):
        return all(c == 0 for c in self.num[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        if not self.num:
            return Fraction(0)
        return Fraction(self.num[0], self.den)

    def norm_squared(self):
        """self * conj(self), as an exact rational when it is one."""
        return (self * self.conjugate()).rational()

    def to_complex(self):
        import cmath
        z = cmath.exp(2j * cmath.pi / self.E)
        return sum(c * z ** i for i, c in enumerate(self.num)) / self.den

    def __repr__(self):
        if self.is_rational():
            r = self.rational()
            return str(r)
        terms = []
        for i, c in enumerate(self.num):
            if c:
                terms.append(f"{c}*z{self.E}^{i}")
        s = " + ".join(terms)
        return f"({s})/{self.den}" if self.den != 1 else s
