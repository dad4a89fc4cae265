"""Jordan types and orders of unipotent matrices."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotUnipotent, PrimeMismatch
from .gf import FieldMatrix, row_echelon


@dataclass(frozen=True)
class JordanType:
    """Block sizes with multiplicities, ``((d1, n1), (d2, n2), ...)`` with d1 < d2 < ..."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple((int(d), int(n)) for d, n in self.blocks)
        for d, n in blocks:
            if d <= 0 or n <= 0:
                raise ValueError(f"bad Jordan block ({d}, {n})")
        if any(a[0] >= b[0] for a, b in zip(blocks, blocks[1:])):
            raise ValueError("block sizes must be strictly increasing")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def from_sizes(cls, sizes):
        counts = {}
        for d in sizes:
            counts[d] = counts.get(d, 0) + 1
        return cls(tuple(sorted(counts.items())))

    @classmethod
    def parse(cls, text):
        """Parse the ``(2^2, 6)`` notation (parentheses optional)."""
        text = text.strip().strip("()")
        if not text:
            return cls(())
        blocks = []
        for part in text.split(","):
            m = re.fullmatch(r"\s*(\d+)\s*(?:\^\s*\{?(\d+)\}?)?\s*", part)
            if not m:
                raise ValueError(f"cannot parse Jordan block {part!r}")
            blocks.append((int(m.group(1)), int(m.group(2) or 1)))
        return cls(tuple(sorted(blocks)))

    @property
    def dim(self):
        return sum(d * n for d, n in self.blocks)

    @property
    def sizes(self):
        return [d for d, n in self.blocks for _ in range(n)]

    @property
    def largest(self):
        return self.blocks[-1][0] if self.blocks else 0

    def to_json(self):
        return json.dumps([list(b) for b in self.blocks], separators=(",", ":"))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        return cls(tuple((int(d), int(n)) for d, n in data))

    def __str__(self):
        return "(" + ", ".join(str(d) if n == 1 else f"{d}^{n}" for d, n in self.blocks) + ")"


def _check_square(m):
    if not m.is_square:
        raise DimensionMismatch(f"expected a square matrix, got {m.shape}")


def is_unipotent(m):
    """True iff (m - I)^n = 0."""
    _check_square(m)
    n = m.nrows
    if n == 0:
        return True
    x = m - FieldMatrix.identity(m.prime, n)
    # the nilpotency index is at most n, so a power of two >= n suffices
    k = 1
    while k < n and not x.is_zero():
        x = x @ x
        k *= 2
    return x.is_zero()


def rank_sequence(x):
    """Ranks r_0 = n, r_1 = rank(x), r_2 = rank(x^2), ... ending at the first 0.

    The row space of x^(k+1) is the row space of x^k times x, so each step
    only multiplies a basis of the previous image.
    """
    n = x.nrows
    ranks = [n]
    if n == 0:
        return ranks
    image = x
    while True:
        echelon, piv = row_echelon(image)
        r = len(piv)
        ranks.append(r)
        if r == 0:
            return ranks
        if r == ranks[-2]:
            raise NotUnipotent("x is not nilpotent")
        image = echelon @ x


def _types_from_ranks(ranks, n):
    ranks = ranks + [0]
    blocks = []
    for k in range(1, len(ranks) - 1):
        mult = ranks[k - 1] - 2 * ranks[k] + ranks[k + 1]
        if mult < 0:
            raise AssertionError(f"negative multiplicity for block size {k}")
        if mult:
            blocks.append((k, mult))
    jt = JordanType(tuple(blocks))
    if jt.dim != n:
        raise AssertionError(f"Jordan type {jt} does not sum to {n}")
    return jt


def jordan_type(m):
    """Jordan type of a unipotent matrix from the rank sequence of m - I."""
    _check_square(m)
    n = m.nrows
    if n == 0:
        return JordanType(())
    x = m - FieldMatrix.identity(m.prime, n)
    try:
        ranks = rank_sequence(x)
    except NotUnipotent:
        raise NotUnipotent("matrix is not unipotent") from None
    return _types_from_ranks(ranks, n)


def unipotent_order(m):
    """Smallest p^k with m^(p^k) = I."""
    _check_square(m)
    if not is_unipotent(m):
        raise NotUnipotent("matrix is not unipotent")
    p = m.prime
    order = 1
    g = m
    while not g.is_identity():
        g = g ** p
        order *= p
    return order


def order_from_type(jt, p):
    """p^ceil(log_p d_max): the order of any unipotent element of type ``jt``."""
    order = 1
    while order < jt.largest:
        order *= p
    return order


def jordan_type_tensor(a, b):
    """Jordan type of the Kronecker product of two unipotent matrices."""
    if a.prime != b.prime:
        raise PrimeMismatch(f"GF({a.prime}) vs GF({b.prime})")
    return jordan_type(a.kron(b))


def jordan_block(prime, d):
    """The d x d unipotent Jordan block (ones on the diagonal and superdiagonal)."""
    return FieldMatrix.from_entries(prime, np.eye(d, dtype=np.int64) + np.eye(d, k=1, dtype=np.int64))


def matrix_of_type(jt, prime):
    """Block-diagonal matrix realizing a Jordan type."""
    if not jt.blocks:
        return FieldMatrix.zeros(prime, 0, 0)
    return FieldMatrix.block_diag([jordan_block(prime, d) for d in jt.sizes])


__all__ = [
    "JordanType",
    "is_unipotent",
    "jordan_block",
    "jordan_type",
    "jordan_type_tensor",
    "matrix_of_type",
    "order_from_type",
    "rank_sequence",
    "unipotent_order",
]
