"""Coefficient-vector arithmetic for large extension fields.

The twisted fixed-point solver needs fields F_{q^{n e}} whose size is far
beyond any table representation.  Elements here are numpy vectors of F_p
coefficients modulo a fixed defining polynomial (lexicographically least
irreducible of the required degree, the same policy as the table-backed
tower fields).  All operations broadcast over a leading batch axis, so
the exhaustive point filters run as whole-array numpy passes.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from sympy import factorint


# -- F_p[x] helpers on integer lists (low degree first) --------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _list_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    while len(a) - 1 >= dm and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * pow(m[-1], -1, p) % p
        sh = len(a) - 1 - dm
        for i, d in enumerate(m):
            a[sh + i] = (a[sh + i] - c * d) % p
        _trim(a)
    return a


def _list_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _list_mod(a, b, p)
    return a


def _list_invmod(a, m, p):
    """Inverse of a modulo m over F_p (extended Euclid)."""
    r0, r1 = list(m), _list_mod(a, m, p)
    s0, s1 = [], [1]
    while r1:
        # divide r0 by r1
        q = [0] * (len(r0) - len(r1) + 1)
        r = list(r0)
        inv_lead = pow(r1[-1], -1, p)
        while len(r) >= len(r1) and r:
            if r[-1] == 0:
                r.pop()
                continue
            c = r[-1] * inv_lead % p
            q[len(r) - len(r1)] = c
            for i, d in enumerate(r1):
                r[len(r) - len(r1) + i] = (r[len(r) - len(r1) + i] - c * d) % p
            _trim(r)
        # s = s0 - q*s1
        qs = [0] * (len(q) + len(s1) - 1 if q and s1 else 0)
        for i, c in enumerate(q):
            if c:
                for j, d in enumerate(s1):
                    qs[i + j] = (qs[i + j] + c * d) % p
        n = max(len(s0), len(qs))
        s = [(s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0) for i in range(n)]
        s = [c % p for c in s]
        _trim(s)
        r0, r1, s0, s1 = r1, r, s1, s
    assert len(r0) == 1, "element not invertible"
    c = pow(r0[0], -1, p)
    return [x * c % p for x in s0]


class BigF:
    """F_{p^d} as F_p[x]/(f), elements = (..., d) int64 arrays mod p."""

    def __init__(self, p: int, d: int):
        self.p = p
        self.d = d
        self.poly = self._find_irreducible(p, d)
        self._fft_n = 1
        while self._fft_n < 2 * d - 1:
            self._fft_n *= 2
        # reduction of x^(d+j), j = 0..d-2, as rows of an integer matrix
        red = np.zeros((max(d - 1, 0), d), dtype=np.int64)
        cur = [(-c) % p for c in self.poly[:-1]]  # x^d
        for j in range(d - 1):
            red[j, :] = cur
            carry = cur[-1]
            cur = [0] + cur[:-1]
            if carry:
                for i in range(d):
                    cur[i] = (cur[i] - carry * self.poly[i]) % p
        self.red = red
        self._sigma_cache: dict[int, np.ndarray] = {}

    # -- construction helpers

    @staticmethod
    def _find_irreducible(p, d):
        """Lex-least monic irreducible of degree d over F_p (numpy Rabin)."""
        from .gf import min_irreducible
        if d <= 24:
            return list(min_irreducible(p, d))
        ells = list(factorint(d))
        for packed in range(p ** min(d, 8)):  # low-coefficient candidates
            coeffs = []
            v = packed
            for _ in range(min(d, 8)):
                coeffs.append(v % p)
                v //= p
            f = coeffs + [0] * (d - len(coeffs)) + [1]
            if f[0] == 0:
                continue
            if BigF._rabin_np(f, p, d, ells):
                return f
        raise AssertionError("no irreducible found in low-coefficient range")

    @staticmethod
    def _rabin_np(f, p, d, ells):
        def powmod_x(e):
            # x^(p^e) mod f, via repeated p-th powering of x
            red_poly = f
            cur = [0, 1]
            for _ in range(e):
                # cur = cur^p mod f
                c = cur
                out = [1]
                base = c
                exp = p
                while exp:
                    if exp & 1:
                        out = _list_mod(_np_mul_lists(out, base, p), red_poly, p)
                    base = _list_mod(_np_mul_lists(base, base, p), red_poly, p)
                    exp >>= 1
                cur = out
            return cur
        xp = powmod_x(d)
        diff = list(xp)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        if _trim(list(diff)):
            return False
        for ell in ells:
            xe = powmod_x(d // ell)
            dd = list(xe)
            while len(dd) < 2:
                dd.append(0)
            dd[1] = (dd[1] - 1) % p
            g = _list_gcd(f, dd, p)
            if len(g) - 1 != 0:
                return False
        return True

    # -- core arithmetic, arrays shaped (..., d)

    def zeros(self, shape=()):
        return np.zeros(shape + (self.d,), dtype=np.int64)

    def one(self, shape=()):
        u = self.zeros(shape)
        u[..., 0] = 1
        return u

    def from_int_list(self, coeffs):
        u = np.zeros(self.d, dtype=np.int64)
        for i, c in enumerate(coeffs):
            u[i] = c % self.p
        return u

    def add(self, u, v):
        return (u + v) % self.p

    def neg(self, u):
        return (-u) % self.p

    def sub(self, u, v):
        return (u - v) % self.p

    def _reduce(self, conv):
        lo = conv[..., : self.d]
        hi = conv[..., self.d:]
        if hi.shape[-1]:
            lo = lo + hi @ self.red[: hi.shape[-1]]
        return lo % self.p

    def mul(self, u, v):
        """Pointwise field product; u, v broadcastable (..., d) arrays."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        shape = np.broadcast_shapes(u.shape[:-1], v.shape[:-1])
        u = np.broadcast_to(u, shape + (self.d,))
        v = np.broadcast_to(v, shape + (self.d,))
        B = int(np.prod(shape, dtype=np.int64)) if shape else 1
        U = u.reshape(B, self.d)
        V = v.reshape(B, self.d)
        if B <= 32:
            conv = np.zeros((B, 2 * self.d - 1), dtype=np.int64)
            for r in range(B):
                conv[r] = np.convolve(U[r], V[r])
        else:
            fu = np.fft.rfft(U, self._fft_n)
            fv = np.fft.rfft(V, self._fft_n)
            prod = np.fft.irfft(fu * fv, self._fft_n)[:, : 2 * self.d - 1]
            conv = np.rint(prod).astype(np.int64)
        out = self._reduce(conv % self.p)
        return out.reshape(shape + (self.d,))

    def inv(self, u):
        """Scalar inverse (single element)."""
        coeffs = _list_invmod([int(c) for c in u], self.poly, self.p)
        return self.from_int_list(coeffs + [0] * (self.d - len(coeffs)))

    def sigma_matrix(self, q, j=1):
        """Matrix rows: images of basis x^i under y -> y^(q^j)."""
        key = (q, j)
        if key in self._sigma_cache:
            return self._sigma_cache[key]
        if j == 0:
            M = np.eye(self.d, dtype=np.int64)
        elif j == 1:
            t = self._pow_scalar(self.from_int_list([0, 1]), q)
            rows = [self.one()]
            for i in range(1, self.d):
                rows.append(self.mul(rows[-1], t))
            M = np.stack(rows)
        else:
            M1 = self.sigma_matrix(q, 1)
            M = np.eye(self.d, dtype=np.int64)
            for _ in range(j):
                M = (M @ M1) % self.p
        self._sigma_cache[key] = M
        return M

    def apply_matrix(self, u, M):
        return (np.asarray(u) @ M) % self.p

    def _pow_scalar(self, u, e):
        r = self.one()
        b = u
        while e:
            if e & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            e >>= 1
        return r

    def is_zero(self, u):
        return not np.any(u)


def _np_mul_lists(a, b, p):
    if not a or not b:
        return []
    conv = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
    return [int(c) % p for c in conv]


@lru_cache(maxsize=None)
def _bigf(p, d):
    return BigF(p, d)


class SolverField:
    """F_{q^{n e}} over a table-backed base field F_{q^n}.

    Wraps a BigF of degree f*n*e over the prime field, together with the
    embedding of the base field computed by root finding inside the
    sigma^n-fixed subspace.  Gives the solver: batched arithmetic, sigma
    as a matrix, the embedded base, and F_p-coordinates of the embedded
    base-field basis (for enumerating fixed-point lattices).
    """

    def __init__(self, base_field, e: int):
        self.K = base_field                      # FqField, level n
        self.e = e
        tower = base_field.tower
        self.p = tower.p
        self.q = tower.q
        self.n = base_field.m
        self.d = base_field.d * e
        self.F = _bigf(self.p, self.d)
        self._embed_rows = self._find_base_embedding()

    def _find_base_embedding(self):
        """Rows: images in BigF of the base-field basis x_K^i."""
        K, F, p = self.K, self.F, self.p
        if self.e == 1 and list(K.poly) == list(F.poly):
            return np.eye(F.d, dtype=np.int64)
        # sigma^{fn}-fixed subspace = copy of the base field inside BigF
        S = F.sigma_matrix(p, 1)
        M = np.eye(F.d, dtype=np.int64)
        for _ in range(K.d):
            M = (M @ S) % p
        null = _nullspace_mod_p(M - np.eye(F.d, dtype=np.int64), p)
        assert null.shape[0] == K.d, f"subfield dimension {null.shape[0]} != {K.d}"
        # enumerate subfield, evaluate the base defining polynomial
        combos = _all_tuples(p, null.shape[0])
        cand = (combos @ null) % p          # (p^{K.d}, d)
        val = F.zeros((cand.shape[0],))
        for c in reversed(K.poly):
            val = F.mul(val, cand)
            val[..., 0] = (val[..., 0] + c) % p
        roots = cand[~np.any(val, axis=1)]
        assert len(roots) == K.d, f"found {len(roots)} roots, expected {K.d}"
        # canonical: lexicographically least coefficient tuple
        order = np.lexsort(roots.T[::-1])
        r = roots[order[0]]
        rows = [self.F.one()]
        for _ in range(1, K.d):
            rows.append(self.F.mul(rows[-1], r))
        return np.stack(rows)

    def embed_base(self, packed: int):
        """Embed a packed base-field element."""
        vec = np.array(self.K.coeff_vector(packed), dtype=np.int64)
        return (vec @ self._embed_rows) % self.p

    def base_basis_vectors(self):
        """Images of the F_p-basis of the base field, shape (K.d, d)."""
        return self._embed_rows.copy()

    def sigma(self, u, j=1):
        """q^j-power Frobenius via precomputed matrix."""
        M = self.F.sigma_matrix(self.q, j % (self.n * self.e))
        return self.F.apply_matrix(u, M)

    def sigma_mat(self, j=1):
        return self.F.sigma_matrix(self.q, j % (self.n * self.e))


def _nullspace_mod_p(M, p):
    """Basis (rows) of the nullspace of M over F_p; M is (r, c) int array."""
    M = np.array(M, dtype=np.int64) % p
    rows, cols = M.shape
    aug = M.T % p                     # solve x M = 0 <-> M^T x^T = 0
    A = aug.copy()
    piv_cols = []
    r = 0
    for c in range(A.shape[1]):
        piv = None
        for rr in range(r, A.shape[0]):
            if A[rr, c] % p:
                piv = rr
                break
        if piv is None:
            continue
        A[[r, piv]] = A[[piv, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        for rr in range(A.shape[0]):
            if rr != r and A[rr, c]:
                A[rr] = (A[rr] - A[rr, c] * A[r]) % p
        piv_cols.append(c)
        r += 1
        if r == A.shape[0]:
            break
    free = [c for c in range(A.shape[1]) if c not in piv_cols]
    basis = []
    for fc in free:
        v = np.zeros(A.shape[1], dtype=np.int64)
        v[fc] = 1
        for i, pc in enumerate(piv_cols):
            v[pc] = (-A[i, fc]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64) if basis else np.zeros((0, A.shape[1]), dtype=np.int64)


def _all_tuples(p, k):
    """(p^k, k) array of all F_p coordinate tuples, lexicographic."""
    out = np.zeros((p ** k, k), dtype=np.int64)
    for j in range(k):
        block = p ** (k - 1 - j)
        col = (np.arange(p ** k) // block) % p
        out[:, j] = col
    return out
