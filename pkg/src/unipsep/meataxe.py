"""Composition factors of matrix representations (Holt-Rees style Meataxe).

A random element ``theta`` of the group algebra is drawn and a small
irreducible factor ``f`` of its characteristic polynomial chosen.  Spinning
a vector from the kernel of ``f(theta)`` either exhibits a proper submodule
or fills the space; in the latter case the same is tried on the transposed
module.  When both spins fill the space and ``f(theta)`` has nullity
``deg f`` the module is irreducible (Norton's criterion).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import FactorNotFound, FactorNotUnique, FingerprintAmbiguity, ResourceLimit
from .gf import (
    FieldMatrix,
    char_poly,
    char_poly_blocks,
    eval_poly,
    factor_poly,
    mat_inverse,
    nullspace_basis,
    rank,
    transpose,
)
from .modules import GroupWord, MatRep, evaluate_word, spin, sub_quotient, transposed
from .seeding import make_rng

PROBE_WORDS = ("AB", "ABB", "AABAB")


@dataclass
class Limits:
    max_elements: int = 50
    factors_per_element: int = 3
    max_factor_degree: int = 6
    kernel_tries: int = 4
    word_cache_bytes: int = 1 << 29


@dataclass(frozen=True)
class AlgebraElement:
    """Coefficients and words (tuples of generator indices) of a group-algebra element."""

    terms: tuple

    def describe(self, names):
        parts = []
        for c, w in self.terms:
            word = "".join(names[i] for i in w) or "1"
            parts.append(word if c == 1 else f"{c}*{word}")
        return " + ".join(parts)


class _WordCache:
    """Images of words, each new word built from a cached prefix with one product."""

    def __init__(self, rep, max_bytes):
        self.rep = rep
        self.words = {(): FieldMatrix.identity(rep.prime, rep.dim)}
        nbytes = max(1, rep.dim * rep.dim // (8 if rep.prime == 2 else 1))
        self.capacity = max(8, max_bytes // nbytes)

    def get(self, word):
        m = self.words.get(word)
        if m is not None:
            return m
        m = self.get(word[:-1]) @ self.rep.gens[word[-1]]
        if len(self.words) < self.capacity:
            self.words[word] = m
        return m


def _random_element(rep, rng, cache):
    p = rep.prime
    k = len(rep.gens)
    nterms = int(rng.integers(3, 9))
    terms = []
    for _ in range(nterms):
        length = int(rng.integers(1, 7))
        word = tuple(int(x) for x in rng.integers(0, k, size=length)) if k else ()
        coef = int(rng.integers(1, p))
        terms.append((coef, word))
    theta = FieldMatrix.zeros(p, rep.dim, rep.dim)
    for c, w in terms:
        img = cache.get(w)
        theta = theta + (img if c == 1 else img.scale(c))
    return theta, AlgebraElement(tuple(terms))


def random_algebra_element(rep, rng_state=0, limits=None):
    """A random combination of 3 to 8 words of length at most 6 with nonzero coefficients."""
    limits = limits or Limits()
    rng = make_rng(rng_state)
    cache = _WordCache(rep, limits.word_cache_bytes)
    return _random_element(rep, rng, cache)[1]


def evaluate_element(rep, element):
    p = rep.prime
    theta = FieldMatrix.zeros(p, rep.dim, rep.dim)
    for c, w in element.terms:
        img = FieldMatrix.identity(p, rep.dim)
        for i in w:
            img = img @ rep.gens[i]
        theta = theta + img.scale(c)
    return theta


@dataclass
class Certificate:
    """Evidence of irreducibility.

    ``element`` is the algebra element, ``poly`` the chosen irreducible factor
    of its characteristic polynomial, ``nullity`` the nullity of
    ``poly(element)`` (equal to ``poly.degree``), and ``vector`` /
    ``dual_vector`` the kernel vectors whose spins fill the module and its
    transpose.
    """

    element: AlgebraElement | None
    poly: object
    nullity: int
    vector: FieldMatrix | None
    dual_vector: FieldMatrix | None

    def verify(self, rep):
        """Re-run the checks the certificate records."""
        if rep.dim == 1:
            return True
        theta = evaluate_element(rep, self.element)
        a = eval_poly(self.poly, theta)
        if rep.dim - rank(a) != self.nullity or self.nullity != self.poly.degree:
            return False
        if not (self.vector @ a).is_zero() or not (self.dual_vector @ a.T).is_zero():
            return False
        return (spin(rep, [self.vector]).nrows == rep.dim
                and spin(transposed(rep), [self.dual_vector]).nrows == rep.dim)


@dataclass
class IrreducibilityResult:
    irreducible: bool
    certificate: Certificate | None = None
    witness: FieldMatrix | None = None  # basis of a proper nonzero submodule

    def __bool__(self):
        return self.irreducible


def _candidate_factors(theta, rng, limits):
    counts = {}
    for block in char_poly_blocks(theta):
        if block.degree == 0:
            continue
        for f, m in factor_poly(block, rng, max_degree=limits.max_factor_degree):
            counts[f] = counts.get(f, 0) + m
    ranked = sorted(counts.items(), key=lambda fm: (fm[1] > 1, fm[0].degree, fm[0].coeffs))
    return ranked[: limits.factors_per_element]


def _random_combination(basis, rng):
    p = basis.prime
    while True:
        c = rng.integers(0, p, size=(1, basis.nrows))
        if c.any():
            return FieldMatrix.from_entries(p, c) @ basis


def _split_or_certify(rep, rng, limits):
    """Either ``("irr", Certificate)`` or ``("split", basis of a proper submodule)``."""
    n = rep.dim
    if n == 1:
        return "irr", Certificate(None, None, 1, None, None)
    cache = _WordCache(rep, limits.word_cache_bytes)
    trep = None
    for _ in range(limits.max_elements):
        theta, element = _random_element(rep, rng, cache)
        for f, _mult in _candidate_factors(theta, rng, limits):
            a = eval_poly(f, theta)
            left = nullspace_basis(transpose(a))
            nullity = left.nrows
            exact = nullity == f.degree
            tries = 1 if exact else limits.kernel_tries
            for t in range(tries):
                v = left.rows([0]) if t == 0 else _random_combination(left, rng)
                s = spin(rep, [v])
                if s.nrows < n:
                    return "split", s
            if trep is None:
                trep = transposed(rep)
            right = nullspace_basis(a)
            for t in range(tries):
                w = right.rows([0]) if t == 0 else _random_combination(right, rng)
                s = spin(trep, [w])
                if s.nrows < n:
                    # the annihilator of a transpose-invariant subspace is invariant
                    return "split", nullspace_basis(s)
            if exact:
                return "irr", Certificate(element, f, nullity, v, w)
    raise ResourceLimit(f"no decision on a module of dimension {n} after {limits.max_elements} random elements")


def is_irreducible(rep, rng_state=0, limits=None):
    """Decide irreducibility, with a certificate or a submodule witness."""
    limits = limits or Limits()
    if rep.dim < 1:
        raise ValueError("irreducibility needs a nonzero module")
    kind, data = _split_or_certify(rep, make_rng(rng_state), limits)
    if kind == "irr":
        return IrreducibilityResult(True, certificate=data)
    return IrreducibilityResult(False, witness=data)


# isomorphism -----------------------------------------------------------------


def _probe(rep, text):
    names = rep.names
    mapped = "".join(names[0] if c == "A" else names[min(1, len(names) - 1)] for c in text)
    return evaluate_word(rep, GroupWord.parse(mapped))


def _unipotent_part_ranks(m):
    """Ranks of (m - 1)^k until they stop changing."""
    eye = FieldMatrix.identity(m.prime, m.nrows)
    x = m - eye
    out = [m.nrows]
    power = eye
    while True:
        power = power @ x
        r = rank(power)
        if r == out[-1]:
            return tuple(out)
        out.append(r)


def fingerprint(rep):
    """Isomorphism invariant from the generators and three fixed probe words."""
    if not rep.gens:
        return (rep.dim,)
    mats = list(rep.gens) + [_probe(rep, w) for w in PROBE_WORDS]
    return (rep.dim,) + tuple((char_poly(m).coeffs, _unipotent_part_ranks(m)) for m in mats)


def _standard_basis(rep, v):
    """Spin ``v`` recording how each new vector arose; returns (basis rows, recipe)."""
    p, n = rep.prime, rep.dim
    gens = [g.entries.astype(np.int64) for g in rep.gens]
    inv = [0] + [pow(a, p - 2, p) for a in range(1, p)]
    rows = [v.entries[0].astype(np.int64)]
    echelon, piv = [], []

    def reduce(x):
        for b, c in zip(echelon, piv):
            if x[c]:
                x = (x - x[c] * b) % p
        return x

    def push(x, reduced):
        c = int(np.nonzero(reduced)[0][0])
        echelon.append((reduced * inv[reduced[c]]) % p)
        piv.append(c)

    push(rows[0], reduce(rows[0]))
    recipe = []
    j = 0
    while j < len(rows) and len(rows) < n:
        for k, g in enumerate(gens):
            x = (rows[j] @ g) % p
            red = reduce(x)
            if red.any():
                rows.append(x)
                push(x, red)
                recipe.append((j, k))
        j += 1
    return np.array(rows), recipe


def _replay(rep, w, recipe):
    p = rep.prime
    gens = [g.entries.astype(np.int64) for g in rep.gens]
    rows = [w.entries[0].astype(np.int64)]
    for j, k in recipe:
        rows.append((rows[j] @ gens[k]) % p)
    return np.array(rows)


def are_isomorphic(r1, r2, cert1):
    """Standard-basis isomorphism test for an irreducible ``r1`` with certificate ``cert1``."""
    if r1.dim != r2.dim or r1.prime != r2.prime or r1.names != r2.names:
        return False
    p, n = r1.prime, r1.dim
    if n == 1:
        return r1.gens == r2.gens
    t1, recipe = _standard_basis(r1, cert1.vector)
    if t1.shape[0] != n:
        raise AssertionError("certificate vector does not spin the module")
    t1m = FieldMatrix.from_entries(p, t1)
    t1_inv = mat_inverse(t1m)
    std1 = [t1m @ g @ t1_inv for g in r1.gens]
    a2 = eval_poly(cert1.poly, evaluate_element(r2, cert1.element))
    kernel = nullspace_basis(transpose(a2))
    if kernel.nrows != cert1.nullity:
        return False
    # the image of the seed is some nonzero kernel vector; try them all
    k = kernel.nrows
    for idx in range(1, p ** k):
        coeffs = [(idx // p ** i) % p for i in range(k)]
        w = FieldMatrix.from_entries(p, np.array([coeffs])) @ kernel
        t2m = FieldMatrix.from_entries(p, _replay(r2, w, recipe))
        if rank(t2m) != n:
            continue
        if all(t2m @ g2 == s1 @ t2m for g2, s1 in zip(r2.gens, std1)):
            return True
    return False


# chopping --------------------------------------------------------------------


@dataclass
class CompositionFactors:
    dim: int
    factors: list  # (MatRep, multiplicity)
    certificates: list = field(default_factory=list)
    seed: int | None = None
    elapsed_ms: float = 0.0

    def dims(self):
        """(dim, mult) per isomorphism class; non-isomorphic factors of equal dimension stay separate."""
        return sorted((r.dim, m) for r, m in self.factors)

    def dim_multiset(self):
        """Total multiplicity of each factor dimension."""
        out = {}
        for r, m in self.factors:
            out[r.dim] = out.get(r.dim, 0) + m
        return out

    def report(self):
        return {
            "dim": self.dim,
            "factors": [{"dim": d, "mult": m} for d, m in self.dims()],
            "seed": self.seed,
            "elapsed_ms": round(self.elapsed_ms, 3),
        }


def _chop_pieces(rep, rng, limits, keep=None):
    """Irreducible pieces (with certificates) of ``rep``; ``keep(dim)`` prunes the search."""
    work = [rep]
    found = []
    while work:
        m = work.pop()
        if m.dim == 0 or (keep is not None and not keep(m.dim)):
            continue
        kind, data = _split_or_certify(m, rng, limits)
        if kind == "irr":
            found.append((m, data))
        else:
            sub, quot = sub_quotient(m, data)
            work.append(quot)
            work.append(sub)
    return found


def _group(pieces):
    groups = []  # [rep, cert, fingerprint, mult]
    for r, cert in pieces:
        fp = fingerprint(r)
        for g in groups:
            if g[2] == fp:
                if are_isomorphic(g[0], r, g[1]):
                    g[3] += 1
                    break
                raise FingerprintAmbiguity(
                    f"two non-isomorphic factors of dimension {r.dim} share a fingerprint")
        else:
            groups.append([r, cert, fp, 1])
    groups.sort(key=lambda g: (g[0].dim, g[2]))
    return groups


def chop(rep, rng_state=0, limits=None):
    """All composition factors with multiplicities."""
    limits = limits or Limits()
    t0 = time.perf_counter()
    pieces = _chop_pieces(rep, make_rng(rng_state), limits)
    groups = _group(pieces)
    total = sum(g[0].dim * g[3] for g in groups)
    if total != rep.dim:
        raise AssertionError(f"factor dimensions sum to {total}, expected {rep.dim}")
    return CompositionFactors(
        dim=rep.dim,
        factors=[(g[0], g[3]) for g in groups],
        certificates=[g[1] for g in groups],
        seed=rng_state if isinstance(rng_state, int) else None,
        elapsed_ms=(time.perf_counter() - t0) * 1000,
    )


def find_factor_of_dim(rep, d, rng_state=0, limits=None):
    """The unique composition factor of dimension ``d``.

    Pieces smaller than ``d`` are discarded unsplit, since they cannot contain
    such a factor.
    """
    limits = limits or Limits()
    if d > rep.dim:
        raise FactorNotFound(f"no composition factor of dimension {d} in a module of dimension {rep.dim}")
    pieces = _chop_pieces(rep, make_rng(rng_state), limits, keep=lambda k: k >= d)
    hits = [r for r, _ in pieces if r.dim == d]
    if not hits:
        raise FactorNotFound(f"no composition factor of dimension {d}")
    if len(hits) > 1:
        raise FactorNotUnique(f"{len(hits)} composition factors of dimension {d}")
    return hits[0]


__all__ = [
    "AlgebraElement",
    "Certificate",
    "CompositionFactors",
    "IrreducibilityResult",
    "Limits",
    "PROBE_WORDS",
    "are_isomorphic",
    "chop",
    "evaluate_element",
    "find_factor_of_dim",
    "fingerprint",
    "is_irreducible",
    "random_algebra_element",
]
