"""Matrix representations and the constructions built from them.

A representation is a tuple of generator matrices acting on row vectors from
the right (``v -> v @ g``), so a subspace ``S`` is a submodule when
``S @ g`` stays inside ``S`` for every generator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .errors import (
    DimensionMismatch,
    NotInvariant,
    PrimeMismatch,
    UnknownSymbol,
    WordParseError,
)
from .gf import FieldMatrix, mat_inverse, nullspace_basis, rank, row_echelon, transpose
from .gf import _gf2
from .gf.matrix import _inverse_table, _parse_matrix

_TOKEN = re.compile(r"([A-Za-z])(\d*)")


@dataclass(frozen=True)
class GroupWord:
    """A word ``g1^e1 g2^e2 ...`` in named generators, exponents positive."""

    letters: tuple = ()

    def __post_init__(self):
        letters = tuple((str(s), int(e)) for s, e in self.letters)
        if any(e <= 0 for _, e in letters):
            raise ValueError("exponents must be positive")
        object.__setattr__(self, "letters", letters)

    @classmethod
    def parse(cls, text):
        """Parse e.g. ``"B4AB6AB5A"``; whitespace is ignored, the empty word is the identity."""
        s = re.sub(r"\s+", "", text)
        letters = []
        pos = 0
        while pos < len(s):
            m = _TOKEN.match(s, pos)
            if not m:
                raise WordParseError(f"unexpected {s[pos]!r} at position {pos} in {text!r}")
            exp = int(m.group(2)) if m.group(2) else 1
            if exp == 0:
                raise WordParseError(f"zero exponent in {text!r}")
            letters.append((m.group(1), exp))
            pos = m.end()
        return cls(tuple(letters))

    @property
    def length(self):
        return sum(e for _, e in self.letters)

    def symbols(self):
        return {s for s, _ in self.letters}

    def __mul__(self, other):
        letters = list(self.letters)
        for s, e in other.letters:
            if letters and letters[-1][0] == s:
                letters[-1] = (s, letters[-1][1] + e)
            else:
                letters.append((s, e))
        return GroupWord(tuple(letters))

    def __pow__(self, k):
        out = GroupWord()
        for _ in range(k):
            out = out * self
        return out

    def __str__(self):
        return "".join(s if e == 1 else f"{s}{e}" for s, e in self.letters)


def as_word(w):
    return w if isinstance(w, GroupWord) else GroupWord.parse(w)


@dataclass(frozen=True, eq=False)
class MatRep:
    """Generator images of common dimension over a common prime field."""

    prime: int
    dim: int
    gens: tuple
    names: tuple

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.gens) != len(self.names):
            raise ValueError("one name per generator")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        for g in self.gens:
            if g.prime != self.prime:
                raise PrimeMismatch("generator over the wrong field")
            if g.shape != (self.dim, self.dim):
                raise DimensionMismatch(f"generator of shape {g.shape}, expected {self.dim}")

    @classmethod
    def checked(cls, prime, gens, names):
        """Build a representation and verify every generator is invertible."""
        gens = tuple(gens)
        dim = gens[0].nrows if gens else 0
        rep = cls(prime, dim, gens, names)
        for name, g in zip(rep.names, rep.gens):
            if rank(g) != dim:
                raise ValueError(f"generator {name} is singular")
        return rep

    @classmethod
    def trivial(cls, prime, names, dim=1):
        eye = FieldMatrix.identity(prime, dim)
        return cls(prime, dim, (eye,) * len(names), names)

    def gen(self, symbol):
        try:
            return self.gens[self.names.index(symbol)]
        except ValueError:
            raise UnknownSymbol(symbol) from None

    def image(self, word):
        return evaluate_word(self, word)

    def map(self, fn, dim):
        return MatRep(self.prime, dim, tuple(fn(g) for g in self.gens), self.names)

    def __eq__(self, other):
        return (isinstance(other, MatRep) and self.prime == other.prime and self.dim == other.dim
                and self.names == other.names and self.gens == other.gens)

    __hash__ = None

    def __repr__(self):
        return f"MatRep(GF({self.prime}), dim={self.dim}, gens={list(self.names)})"

    # file format ------------------------------------------------------------

    def to_text(self):
        out = [f"{self.prime} {self.dim} {len(self.gens)}\n"]
        for name, g in zip(self.names, self.gens):
            out.append(f"gen {name}\n")
            out.append(g.to_text())
        return "".join(out)

    @classmethod
    def from_text(cls, text):
        lines = text.split("\n")
        try:
            p, dim, ngens = (int(x) for x in lines[0].split(" "))
        except ValueError as exc:
            raise ValueError("bad representation header") from exc
        pos = 1
        names, gens = [], []
        for _ in range(ngens):
            head = lines[pos].split(" ")
            if len(head) != 2 or head[0] != "gen":
                raise ValueError(f"expected 'gen <symbol>' at line {pos + 1}")
            names.append(head[1])
            g, pos = _parse_matrix(lines, pos + 1)
            if g.prime != p or g.shape != (dim, dim):
                raise ValueError(f"generator {head[1]} does not match the header")
            gens.append(g)
        if any(line.strip() for line in lines[pos:]):
            raise ValueError("trailing data after representation")
        return cls.checked(p, gens, names)


def evaluate_word(rep, word, _powers=None):
    """Ordered product of generator powers, left to right."""
    word = as_word(word)
    result = FieldMatrix.identity(rep.prime, rep.dim)
    cache = {} if _powers is None else _powers
    for s, e in word.letters:
        key = (s, e)
        if key not in cache:
            cache[key] = rep.gen(s) ** e
        result = result @ cache[key]
    return result


def _check_compatible(r1, r2):
    if r1.prime != r2.prime:
        raise PrimeMismatch(f"GF({r1.prime}) vs GF({r2.prime})")
    if r1.names != r2.names:
        raise ValueError(f"generator symbols differ: {r1.names} vs {r2.names}")


def tensor(r1, r2):
    """Generator-wise Kronecker product."""
    _check_compatible(r1, r2)
    gens = tuple(a.kron(b) for a, b in zip(r1.gens, r2.gens))
    return MatRep(r1.prime, r1.dim * r2.dim, gens, r1.names)


def direct_sum(r1, r2):
    _check_compatible(r1, r2)
    gens = tuple(FieldMatrix.block_diag([a, b]) for a, b in zip(r1.gens, r2.gens))
    return MatRep(r1.prime, r1.dim + r2.dim, gens, r1.names)


def colex_subsets(n, i):
    """All i-subsets of range(n) in colexicographic order."""
    return sorted(combinations(range(n), i), key=lambda s: s[::-1])


def compound_matrix(g, i):
    """Matrix of i x i minors of ``g`` indexed by colex-ordered subsets."""
    n = g.nrows
    subsets = np.array(colex_subsets(n, i), dtype=np.int64).reshape(-1, i)
    inv = _inverse_table(g.prime)
    minors = _gf2.compound_minors(g.entries, subsets, subsets, g.prime, inv)
    return FieldMatrix.from_entries(g.prime, minors)


def exterior_power(r, i):
    """i-th exterior power; the (S, T) entry of each image is det(g[S, T])."""
    if not 1 <= i <= r.dim:
        raise ValueError(f"exterior power {i} out of range for dimension {r.dim}")
    return r.map(lambda g: compound_matrix(g, i), comb(r.dim, i))


def dual(r):
    """Inverse transpose of every generator."""
    return r.map(lambda g: transpose(mat_inverse(g)), r.dim)


def transposed(r):
    """Transposes of the generators; an anti-representation used for dual-side spinning."""
    return r.map(transpose, r.dim)


# spinning ---------------------------------------------------------------------


def spin(r, seeds, limit=None):
    """Basis of the smallest submodule containing the rows of ``seeds``.

    The basis is returned in semi-echelon form: row k has a pivot column at
    which every later row vanishes.
    """
    n = r.dim
    if isinstance(seeds, FieldMatrix):
        seed_mat = seeds
    else:
        seeds = list(seeds)
        seed_mat = FieldMatrix.vstack(seeds, prime=r.prime, ncols=n)
    if seed_mat.ncols != n:
        raise DimensionMismatch(f"seed vectors of length {seed_mat.ncols}, expected {n}")
    limit = n if limit is None else limit
    if seed_mat.nrows == 0:
        return FieldMatrix.zeros(r.prime, 0, n)
    if r.prime == 2:
        gens = np.stack([g.packed for g in r.gens]) if r.gens else np.zeros((0, n, _gf2.nwords(n)), np.uint64)
        basis, _ = _gf2.spin(np.ascontiguousarray(seed_mat.packed), gens, n, limit)
        return FieldMatrix(2, basis.shape[0], n, basis)
    return _spin_p(r, seed_mat, limit)


def _spin_p(r, seed_mat, limit):
    p = r.prime
    inv = _inverse_table(p)
    gens = [g.entries.astype(np.int64) for g in r.gens]
    basis, piv = [], []

    def reduce(v):
        for b, c in zip(basis, piv):
            if v[c]:
                v = (v - v[c] * b) % p
        return v

    def add(v):
        c = int(np.nonzero(v)[0][0])
        basis.append((v * inv[v[c]]) % p)
        piv.append(c)

    for v in seed_mat.entries.astype(np.int64):
        v = reduce(v)
        if v.any():
            add(v)
    j = 0
    while j < len(basis) and len(basis) < r.dim and len(basis) <= limit:
        for g in gens:
            v = reduce((basis[j] @ g) % p)
            if v.any():
                add(v)
        j += 1
    if not basis:
        return FieldMatrix.zeros(p, 0, r.dim)
    return FieldMatrix.from_entries(p, np.array(basis))


def invariant_vectors(r):
    """Basis of ``{v : v g = v for all generators}``."""
    eye = FieldMatrix.identity(r.prime, r.dim)
    stacked = FieldMatrix.vstack([transpose(g - eye) for g in r.gens], prime=r.prime, ncols=r.dim)
    return nullspace_basis(stacked)


def is_invariant(r, basis):
    if basis.nrows == 0:
        return True
    echelon, piv = row_echelon(basis)
    for g in r.gens:
        w = basis @ g
        if w.columns(piv) @ echelon != w:
            return False
    return True


def _trailing_pivots(basis):
    """Pivots of ``basis`` when columns are eliminated from the last to the first.

    The complement of this set is exactly the set of standard basis vectors a
    greedy first-extendable-index completion picks.  Returns the pivots (as
    original column indices) and an echelon basis with identity on them.
    """
    n = basis.ncols
    rev = np.arange(n - 1, -1, -1)
    echelon, piv = row_echelon(basis.columns(rev))
    return np.array([n - 1 - c for c in piv], dtype=np.int64), echelon.columns(rev)


def sub_quotient(r, basis):
    """Actions on the submodule spanned by ``basis`` and on the quotient.

    The submodule action is written in the given basis.  The quotient uses the
    cosets of the standard basis vectors chosen greedily (first extendable
    index) to complete ``basis``.
    """
    n, p = r.dim, r.prime
    if basis.ncols != n:
        raise DimensionMismatch("basis vectors have the wrong length")
    if rank(basis) != basis.nrows:
        raise ValueError("basis rows are linearly dependent")
    k = basis.nrows
    if k == 0:
        return MatRep(p, 0, tuple(FieldMatrix.zeros(p, 0, 0) for _ in r.gens), r.names), r
    q_piv, q_echelon = _trailing_pivots(basis)
    comp = np.array(sorted(set(range(n)) - set(int(c) for c in q_piv)), dtype=np.int64)
    # rows of q_echelon carry the identity on q_piv in the order q_piv is listed
    bp_inv = mat_inverse(basis.columns(q_piv))
    sub_gens, quot_gens = [], []
    for g in r.gens:
        w = basis @ g
        wq = w.columns(q_piv)
        if wq @ q_echelon != w:
            raise NotInvariant("basis does not span a submodule")
        sub_gens.append(wq @ bp_inv)
        if len(comp):
            g_cc = g.submatrix(comp, comp)
            g_cq = g.submatrix(comp, q_piv)
            quot_gens.append(g_cc - g_cq @ q_echelon.columns(comp))
    sub = MatRep(p, k, tuple(sub_gens), r.names)
    if len(comp):
        quot = MatRep(p, n - k, tuple(quot_gens), r.names)
    else:
        quot = MatRep(p, 0, tuple(FieldMatrix.zeros(p, 0, 0) for _ in r.gens), r.names)
    return sub, quot


__all__ = [
    "GroupWord",
    "MatRep",
    "colex_subsets",
    "compound_matrix",
    "direct_sum",
    "dual",
    "evaluate_word",
    "exterior_power",
    "invariant_vectors",
    "is_invariant",
    "spin",
    "sub_quotient",
    "tensor",
    "transposed",
]
