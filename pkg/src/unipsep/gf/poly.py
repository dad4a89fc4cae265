"""Polynomials over GF(p): characteristic polynomials and factorization.

Over GF(2) the arithmetic runs on Python integers used as coefficient bit
masks (bit i is the coefficient of x**i); odd primes use coefficient lists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, PrimeMismatch
from . import _gf2
from .matrix import FieldMatrix


@dataclass(frozen=True)
class FieldPoly:
    """Polynomial with coefficients lowest degree first, trailing zeros trimmed."""

    prime: int
    coeffs: tuple

    def __post_init__(self):
        c = [int(x) % self.prime for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_bits(cls, bits):
        return cls(2, tuple((bits >> i) & 1 for i in range(bits.bit_length())))

    @classmethod
    def x(cls, prime):
        return cls(prime, (0, 1))

    @property
    def bits(self):
        if self.prime != 2:
            raise ValueError("bit masks are only defined over GF(2)")
        return sum(1 << i for i, c in enumerate(self.coeffs) if c)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self):
        if self.is_zero():
            raise ZeroDivisionError("zero polynomial")
        inv = pow(self.coeffs[-1], self.prime - 2, self.prime)
        return FieldPoly(self.prime, tuple(c * inv for c in self.coeffs))

    def __mul__(self, other):
        _same(self, other)
        if self.prime == 2:
            return FieldPoly.from_bits(_clmul(self.bits, other.bits))
        return FieldPoly(self.prime, _mul_p(self.coeffs, other.coeffs, self.prime))

    def __add__(self, other):
        _same(self, other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return FieldPoly(self.prime, tuple(x + y for x, y in zip(a, b)))

    def __pow__(self, k):
        out = FieldPoly(self.prime, (1,))
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        _same(self, other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        if self.prime == 2:
            q, r = _divmod2(self.bits, other.bits)
            return FieldPoly.from_bits(q), FieldPoly.from_bits(r)
        q, r = _divmod_p(list(self.coeffs), list(other.coeffs), self.prime)
        return FieldPoly(self.prime, q), FieldPoly(self.prime, r)

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(coef + mono)
        return " + ".join(terms)


def _same(a, b):
    if a.prime != b.prime:
        raise PrimeMismatch(f"GF({a.prime}) vs GF({b.prime})")


# GF(2) bit-mask arithmetic ------------------------------------------------

_SPREAD = [bytes(((sum(((i >> k) & 1) << (2 * k) for k in range(8))) >> (8 * j)) & 0xFF
                 for j in range(2)) for i in range(256)]


def _clmul(a, b):
    if a.bit_length() < b.bit_length():
        a, b = b, a
    r = 0
    shift = 0
    # 8-bit windows of b against a table of small multiples of a
    table = [0] * 256
    for i in range(1, 256):
        low = i & -i
        table[i] = table[i ^ low] ^ (a << (low.bit_length() - 1))
    while b:
        r ^= table[b & 0xFF] << shift
        b >>= 8
        shift += 8
    return r


def _sq2(a):
    if a == 0:
        return 0
    raw = a.to_bytes((a.bit_length() + 7) // 8, "little")
    return int.from_bytes(b"".join(_SPREAD[x] for x in raw), "little")


def _mod2(a, m):
    dm = m.bit_length()
    la = a.bit_length()
    while la >= dm:
        a ^= m << (la - dm)
        la = a.bit_length()
    return a


def _divmod2(a, m):
    dm = m.bit_length()
    q = 0
    la = a.bit_length()
    while la >= dm:
        s = la - dm
        q |= 1 << s
        a ^= m << s
        la = a.bit_length()
    return q, a


def _gcd2(a, b):
    while b:
        a, b = b, _mod2(a, b)
    return a


def _mulmod2(a, b, m):
    return _mod2(_clmul(a, b), m)


def _edf2(g, d, rng):
    """Split a squarefree product of degree-``d`` irreducibles over GF(2)."""
    n = g.bit_length() - 1
    if n == d:
        return [g]
    while True:
        a = int.from_bytes(rng.bytes((n + 7) // 8 + 1), "little") & ((1 << n) - 1)
        if a.bit_length() < 2:
            continue
        t = a
        s = a
        for _ in range(d - 1):
            s = _mod2(_sq2(s), g)
            t ^= s
        h = _gcd2(g, t)
        if 0 < h.bit_length() - 1 < n:
            return _edf2(h, d, rng) + _edf2(_divmod2(g, h)[0], d, rng)


def _factor2(f, rng, max_degree):
    out = []
    rem = f
    x = 2
    h = x
    d = 1
    while rem.bit_length() - 1 >= 2 * d:
        if max_degree is not None and d > max_degree:
            break
        h = _mod2(_sq2(h), rem)
        g = _gcd2(rem, h ^ x)
        if g.bit_length() > 1:
            for q in _edf2(g, d, rng):
                mult = 0
                while True:
                    qq, r = _divmod2(rem, q)
                    if r:
                        break
                    rem = qq
                    mult += 1
                out.append((q, mult))
            h = _mod2(h, rem)
        d += 1
    deg = rem.bit_length() - 1
    if deg > 0 and (max_degree is None or deg <= max_degree):
        out.append((rem, 1))
    return out


# odd-prime list arithmetic --------------------------------------------------


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _mul_p(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return tuple(out)


def _divmod_p(a, b, p):
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        s = len(a) - len(b)
        c = (a[-1] * inv) % p
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = (a[s + i] - c * y) % p
        _trim(a)
    return tuple(q), tuple(a)


def _mod_p(a, b, p):
    return list(_divmod_p(a, b, p)[1])


def _gcd_p(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _mod_p(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [(x * inv) % p for x in a]
    return a


def _powmod_p(a, e, m, p):
    result = [1]
    base = _mod_p(a, m, p)
    while e:
        if e & 1:
            result = _mod_p(list(_mul_p(result, base, p)), m, p)
        e >>= 1
        if e:
            base = _mod_p(list(_mul_p(base, base, p)), m, p)
    return result


def _sub_p(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _edf_p(g, d, p, rng):
    n = len(g) - 1
    if n == d:
        return [g]
    e = (p**d - 1) // 2
    while True:
        a = _trim([int(x) for x in rng.integers(0, p, n)])
        if len(a) < 2:
            continue
        t = _sub_p(_powmod_p(a, e, g, p), [1], p)
        h = _gcd_p(g, t, p)
        if 0 < len(h) - 1 < n:
            q = list(_divmod_p(g, h, p)[0])
            return _edf_p(h, d, p, rng) + _edf_p(q, d, p, rng)


def _factor_p(f, p, rng, max_degree):
    out = []
    rem = list(f)
    x = [0, 1]
    h = x
    d = 1
    while len(rem) - 1 >= 2 * d:
        if max_degree is not None and d > max_degree:
            break
        h = _powmod_p(h, p, rem, p)
        g = _gcd_p(rem, _sub_p(h, x, p), p)
        if len(g) > 1:
            for q in _edf_p(g, d, p, rng):
                mult = 0
                while True:
                    qq, r = _divmod_p(rem, q, p)
                    if r:
                        break
                    rem = list(qq)
                    mult += 1
                out.append((q, mult))
            h = _mod_p(h, rem, p)
        d += 1
    if len(rem) > 1 and (max_degree is None or len(rem) - 1 <= max_degree):
        out.append((rem, 1))
    return out


# public operations ----------------------------------------------------------


def factor_poly(f, rng=None, max_degree=None):
    """Factor ``f`` into monic irreducibles with multiplicities.

    Distinct-degree splitting followed by randomized equal-degree splitting.
    With ``max_degree`` only the irreducible factors of degree at most
    ``max_degree`` are returned (the remainder is left unfactored).
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if rng is None:
        rng = np.random.default_rng(0)
    g = f.monic()
    if g.prime == 2:
        raw = [(FieldPoly.from_bits(q), m) for q, m in _factor2(g.bits, rng, max_degree)]
    else:
        raw = [(FieldPoly(g.prime, tuple(q)), m) for q, m in _factor_p(g.coeffs, g.prime, rng, max_degree)]
    return sorted(raw, key=lambda qm: (qm[0].degree, qm[0].coeffs))


def char_poly_blocks(m):
    """Monic polynomials of a cyclic (Krylov) decomposition; their product is the char poly."""
    if not m.is_square:
        raise DimensionMismatch("characteristic polynomial needs a square matrix")
    n = m.nrows
    if n == 0:
        return []
    if m.prime == 2:
        degrees, coeffs = _gf2.krylov_blocks(m.packed, n)
        out = []
        pos = 0
        for d in degrees:
            out.append(FieldPoly(2, tuple(int(c) for c in coeffs[pos:pos + d + 1])))
            pos += d + 1
        return out
    return _krylov_blocks_p(m.entries.astype(np.int64), m.prime)


def _krylov_blocks_p(theta, p):
    n = theta.shape[0]
    inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
    basis, track, piv = [], [], []
    blocks = []
    nxt = 0
    while len(basis) < n:
        while True:
            v = np.zeros(n, dtype=np.int64)
            v[nxt] = 1
            nxt += 1
            t = np.zeros(n + 1, dtype=np.int64)
            t[0] = 1
            v, t = _reduce_p(v, t, basis, track, piv, len(basis), p)
            if v.any():
                break
        start = len(basis)
        while True:
            c = int(np.nonzero(v)[0][0])
            s = inv[v[c]]
            basis.append((v * s) % p)
            track.append((t * s) % p)
            piv.append(c)
            w = (basis[-1] @ theta) % p
            tw = np.roll(track[-1], 1)
            w, tw = _reduce_p(w, tw, basis, track, piv, start, p)
            if not w.any():
                d = len(basis) - start
                lead = inv[tw[d]]
                blocks.append(FieldPoly(p, tuple((tw[:d + 1] * lead) % p)))
                break
            v, t = w, tw
    return blocks


def _reduce_p(w, tw, basis, track, piv, start, p):
    for i, c in enumerate(piv):
        a = w[c]
        if a:
            w = (w - a * basis[i]) % p
            if i >= start:
                tw = (tw - a * track[i]) % p
    return w, tw


def char_poly(m):
    """Monic characteristic polynomial of a square matrix."""
    out = FieldPoly(m.prime, (1,))
    for b in char_poly_blocks(m):
        out = out * b
    return out


def eval_poly(f, m):
    """``f(m)`` by Horner's rule."""
    if f.prime != m.prime:
        raise PrimeMismatch(f"GF({f.prime}) polynomial at GF({m.prime}) matrix")
    if not m.is_square:
        raise DimensionMismatch("polynomial evaluation needs a square matrix")
    n = m.nrows
    eye = FieldMatrix.identity(m.prime, n)
    if f.is_zero():
        return FieldMatrix.zeros(m.prime, n, n)
    result = eye.scale(f.coeffs[-1])
    for c in reversed(f.coeffs[:-1]):
        result = result @ m
        if c:
            result = result + eye.scale(c)
    return result
