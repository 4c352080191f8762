"""Truncated power-series rings W_h(F_{q^m}) = F_{q^m}[pi]/(pi^h).

Equal-characteristic truncated Witt vectors: addition is coefficientwise,
multiplication is truncated convolution.  ``Wt`` is the integral ring
element; ``WtL`` is a Laurent variant carrying an explicit exactness
window, used by the twisted column matrices where entries acquire
bounded pi-denominators before recombining integrally.
"""

from __future__ import annotations

from .gf import FqField, FqElem


class Wt:
    """Element of W_h(F_{q^m}): h coefficients, low pi-power first."""

    __slots__ = ("F", "h", "c")

    def __init__(self, F: FqField, h: int, coeffs):
        assert len(coeffs) == h
        self.F = F
        self.h = h
        self.c = tuple(coeffs)

    # -- constructors

    @classmethod
    def zero(cls, F, h):
        return cls(F, h, (0,) * h)

    @classmethod
    def one(cls, F, h):
        return cls(F, h, (1,) + (0,) * (h - 1)) if h else cls(F, 0, ())

    @classmethod
    def from_residue(cls, x: FqElem, h):
        """Constant (Teichmueller-style) lift of a residue-field element."""
        return cls(x.field, h, (x.val,) + (0,) * (h - 1)) if h else cls(x.field, 0, ())

    def with_coeff(self, k, v):
        c = list(self.c)
        c[k] = self.F.coerce(v)
        return Wt(self.F, self.h, c)

    # -- ring structure

    def _chk(self, other):
        if not isinstance(other, Wt):
            raise TypeError(f"expected Wt, got {other!r}")
        if other.F is not self.F or other.h != self.h:
            raise ValueError("mixed Witt rings")
        return other

    def __add__(self, other):
        other = self._chk(other)
        F = self.F
        return Wt(F, self.h, [F.add(a, b) for a, b in zip(self.c, other.c)])

    def __sub__(self, other):
        other = self._chk(other)
        F = self.F
        return Wt(F, self.h, [F.sub(a, b) for a, b in zip(self.c, other.c)])

    def __neg__(self):
        F = self.F
        return Wt(F, self.h, [F.neg(a) for a in self.c])

    def __mul__(self, other):
        other = self._chk(other)
        F = self.F
        out = [0] * self.h
        for i, a in enumerate(self.c):
            if not a:
                continue
            for j in range(self.h - i):
                b = other.c[j]
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Wt(F, self.h, out)

    def __pow__(self, e):
        if e < 0:
            return self.inv() ** (-e)
        r = Wt.one(self.F, self.h)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def is_unit(self):
        return self.h > 0 and self.c[0] != 0

    def inv(self):
        if not self.is_unit():
            raise ZeroDivisionError("inverting a non-unit Witt element")
        F = self.F
        d = [F.inv(self.c[0])]
        for k in range(1, self.h):
            s = 0
            for i in range(1, k + 1):
                if self.c[i] and d[k - i]:
                    s = F.add(s, F.mul(self.c[i], d[k - i]))
            d.append(F.neg(F.mul(s, d[0])))
        return Wt(F, self.h, d)

    def __eq__(self, other):
        return (isinstance(other, Wt) and other.F is self.F
                and other.h == self.h and other.c == self.c)

    def __hash__(self):
        return hash((id(self.F), self.h, self.c))

    def __bool__(self):
        return any(self.c)

    def __repr__(self):
        return f"Wt{list(self.c)}"

    # -- semilinear / filtration structure

    def sigma(self, i=1):
        """Coefficientwise q^i-power map; a ring automorphism."""
        F = self.F
        return Wt(F, self.h, [F.frob(a, i) for a in self.c])

    def residue(self) -> FqElem:
        return FqElem(self.F, self.c[0])

    def truncate(self, h2):
        assert h2 <= self.h
        return Wt(self.F, h2, self.c[:h2])

    def lift(self, h2):
        """Zero-padded lift to a longer truncation (a choice of section)."""
        assert h2 >= self.h
        return Wt(self.F, h2, self.c + (0,) * (h2 - self.h))

    def mul_pi(self, k=1):
        """Multiply by pi^k inside the same truncation length."""
        if k >= self.h:
            return Wt.zero(self.F, self.h)
        return Wt(self.F, self.h, (0,) * k + self.c[: self.h - k])

    def valuation(self):
        for i, a in enumerate(self.c):
            if a:
                return i
        return self.h

    def unit_filtration_level(self):
        """Largest a with x = 1 mod pi^a (x a unit); h when x == 1."""
        if not self.is_unit():
            raise ValueError("filtration level defined for units only")
        if self.c[0] != 1:
            return 0
        a = 1
        while a < self.h and self.c[a] == 0:
            a += 1
        return a

    def embed(self, m):
        """Coefficientwise field embedding to level m."""
        tower = self.F.tower
        Fb = tower.field(m)
        return Wt(Fb, self.h, [tower.embed_elem(FqElem(self.F, a), m).val for a in self.c])


def nm(x: Wt, r: int, s: int) -> Wt:
    """Twisted norm prod_{i=0}^{r/s-1} sigma^{si}(x).

    For x a unit over F_{q^r} the result is sigma^s-fixed, matching the
    norm of the degree-r/s subextension on unit groups.
    """
    if r % s:
        raise ValueError(f"s={s} must divide r={r}")
    out = Wt.one(x.F, x.h)
    for i in range(r // s):
        out = out * x.sigma(s * i)
    return out


def tr_additive(x, s: int):
    """Additive trace sum_{i=0}^{s-1} x^(q^i); works on Wt and FqElem."""
    if isinstance(x, Wt):
        out = Wt.zero(x.F, x.h)
        for i in range(s):
            out = out + x.sigma(i)
        return out
    out = x.field.zero
    for i in range(s):
        out = out + x.frobenius(i)
    return out


def enumerate_witt(F: FqField, h: int, units_only=False):
    """All elements of W_h(F), lexicographic in packed coefficients."""
    def rec(k, prefix):
        if k == h:
            yield Wt(F, h, prefix)
            return
        for v in range(F.size):
            if k == 0 and units_only and v == 0:
                continue
            yield from rec(k + 1, prefix + (v,))
    yield from rec(0, ())


def enumerate_unit_filtration(F: FqField, h: int, a: int):
    """Elements of U^a/U^h: units congruent to 1 mod pi^a (a >= 1)."""
    assert 1 <= a <= h
    def rec(k, prefix):
        if k == h:
            yield Wt(F, h, prefix)
            return
        for v in range(F.size):
            yield from rec(k + 1, prefix + (v,))
    head = (1,) + (0,) * (a - 1)
    yield from rec(a, head)


# ---------------------------------------------------------------------------
# Laurent window variant


class WtL:
    """pi-Laurent element with exactness window.

    Value is sum_{k >= lo} c_{k-lo} pi^k; ``lo`` is a guaranteed lower
    bound on the valuation, coefficients are exact for lo <= k < hi and
    unknown beyond.  Products and sums propagate the window.
    """

    __slots__ = ("F", "lo", "c")

    def __init__(self, F, lo, coeffs):
        self.F = F
        self.lo = lo
        self.c = tuple(coeffs)

    @property
    def hi(self):
        return self.lo + len(self.c)

    @classmethod
    def from_wt(cls, x: Wt):
        return cls(x.F, 0, x.c)

    @classmethod
    def zero(cls, F, lo, hi):
        return cls(F, lo, (0,) * (hi - lo))

    @classmethod
    def one(cls, F, hi):
        assert hi > 0
        return cls(F, 0, (1,) + (0,) * (hi - 1))

    def coeff(self, k):
        if k < self.lo:
            return 0
        if k >= self.hi:
            raise ValueError(f"coefficient pi^{k} outside exactness window")
        return self.c[k - self.lo]

    def __add__(self, other):
        F = self.F
        lo = min(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        assert hi > lo, "empty window in Laurent addition"
        return WtL(F, lo, [F.add(self.coeff(k), other.coeff(k)) for k in range(lo, hi)])

    def __neg__(self):
        return WtL(self.F, self.lo, [self.F.neg(a) for a in self.c])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.F
        lo = self.lo + other.lo
        hi = min(self.hi + other.lo, other.hi + self.lo)
        assert hi > lo, "empty window in Laurent product"
        out = [0] * (hi - lo)
        for i, a in enumerate(self.c):
            if not a:
                continue
            ka = self.lo + i
            for j, b in enumerate(other.c):
                if not b:
                    continue
                k = ka + other.lo + j
                if k < hi:
                    out[k - lo] = F.add(out[k - lo], F.mul(a, b))
        return WtL(F, lo, out)

    def scale_pi(self, k):
        return WtL(self.F, self.lo + k, self.c)

    def sigma(self, i=1):
        F = self.F
        return WtL(F, self.lo, [F.frob(a, i) for a in self.c])

    def is_integral_window(self):
        return self.lo >= 0 or all(a == 0 for a in self.c[: -self.lo])

    def to_wt(self, h) -> Wt:
        """Integral truncation to W_h; requires window covering [0, h)."""
        assert self.hi >= h, f"window ends at {self.hi} < {h}"
        if self.lo < 0:
            assert all(a == 0 for a in self.c[: -self.lo]), "negative pi-power present"
        return Wt(self.F, h, [self.coeff(k) for k in range(h)])

    def __repr__(self):
        return f"WtL(pi^{self.lo}*{list(self.c)})"


def wtl_det(mat):
    """Determinant of a small square WtL matrix by expansion."""
    n = len(mat)
    if n == 1:
        return mat[0][0]
    F = mat[0][0].F
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * wtl_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def witt_linsolve(mat, rhs):
    """Solve M u = rhs over W_h with M square and unit determinant.

    Gaussian elimination with unit pivots; exact over the local ring.
    """
    n = len(mat)
    h = rhs[0].h
    F = rhs[0].F
    M = [row[:] for row in mat]
    b = list(rhs)
    perm = list(range(n))
    for col in range(n):
        piv = None
        for r in range(col, n):
            if M[r][col].is_unit():
                piv = r
                break
        if piv is None:
            raise ValueError("no unit pivot; matrix not invertible over W_h")
        M[col], M[piv] = M[piv], M[col]
        b[col], b[piv] = b[piv], b[col]
        inv = M[col][col].inv()
        M[col] = [inv * v for v in M[col]]
        b[col] = inv * b[col]
        for r in range(n):
            if r != col and bool(M[r][col]):
                f = M[r][col]
                M[r] = [M[r][k] - f * M[col][k] for k in range(n)]
                b[r] = b[r] - f * b[col]
    return b
