"""Symplectic forms and Hesselink labels of unipotent classes in characteristic 2.

Matrices act on column vectors here, so ``g`` is an isometry of the form with
Gram matrix ``J`` when ``g^T J g = J`` and ``beta(x, y) = x^T J y``.
"""

from __future__ import annotations

import json
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotIsometry, NotUnipotent
from .gf import FieldMatrix, nullspace_basis, rank
from .jordan import JordanType, is_unipotent, jordan_type
from .modules import GroupWord, MatRep
from .seeding import derive_seed, make_rng


@dataclass(frozen=True, eq=False)
class SymplecticForm:
    gram: FieldMatrix

    def __post_init__(self):
        g = self.gram
        if not g.is_square:
            raise DimensionMismatch("Gram matrix must be square")
        if any(int(g.entries[i, i]) for i in range(g.nrows)):
            raise ValueError("Gram matrix must have zero diagonal")
        if g.T != -g:
            raise ValueError("Gram matrix must be alternating")
        if rank(g) != g.nrows:
            raise ValueError("Gram matrix must be invertible")

    @classmethod
    def anti_diagonal(cls, prime, n):
        """Ones on the anti-diagonal; for odd p the lower half is negated."""
        if n % 2:
            raise ValueError("symplectic forms need even dimension")
        e = np.fliplr(np.eye(n, dtype=np.int64))
        e[n // 2:, :] *= -1
        return cls(FieldMatrix.from_entries(prime, e))

    @property
    def dim(self):
        return self.gram.nrows

    @property
    def prime(self):
        return self.gram.prime

    def pairing(self, x, y):
        """Matrix of values beta(x_i, y_j) for the rows x_i of x and y_j of y."""
        return x @ self.gram @ y.T


def is_isometry(m, form):
    if not m.is_square or m.nrows != form.dim:
        raise DimensionMismatch(f"matrix of shape {m.shape} against a form of dimension {form.dim}")
    return m.T @ form.gram @ m == form.gram


def _check_input(u, form):
    if not is_isometry(u, form):
        raise NotIsometry("element does not preserve the form")
    if not is_unipotent(u):
        raise NotUnipotent("element is not unipotent")


def _quadratic_vanishes(mat):
    """Whether v -> sum c_i c_j mat[i, j] is zero on the whole span.

    Needs the diagonal to vanish and the symmetrized off-diagonal part
    (the polarization) to vanish as well.
    """
    e = mat.entries.astype(np.int64)
    if np.any(np.diag(e) % mat.prime):
        return False
    return not np.any((e + e.T) % mat.prime)


def _chi(x, form, m, x_powers):
    kernel = nullspace_basis(x_powers[m])
    if kernel.nrows == 0:
        return 0
    gram = form.gram
    for n in range(m + 1):
        # M[i, j] = beta(X^n b_i, X^(n+1) b_j)
        left = kernel @ x_powers[n].T
        right = x_powers[n + 1] @ kernel.T
        if _quadratic_vanishes(left @ gram @ right):
            return n
    raise AssertionError("X^m vanishes on Ker X^m, so chi(m) <= m")


def _x_powers(x, top):
    n = x.nrows
    pw = [FieldMatrix.identity(x.prime, n)]
    for _ in range(top + 1):
        pw.append(pw[-1] @ x)
    return pw


def chi(u, form, m):
    """Least n with beta(X^n v, X^(n+1) v) = 0 for every v in Ker X^m, X = u - 1."""
    _check_input(u, form)
    if m < 0:
        raise ValueError("block size must be nonnegative")
    x = u - FieldMatrix.identity(u.prime, u.nrows)
    return _chi(x, form, m, _x_powers(x, m))


@dataclass(frozen=True)
class HesselinkLabel:
    """Jordan block sizes ``d`` with multiplicities ``n`` and the value chi(d)."""

    parts: tuple

    def __post_init__(self):
        parts = tuple((int(d), int(c), int(n)) for d, c, n in self.parts)
        for d, c, n in parts:
            if d <= 0 or n <= 0 or not 0 <= c <= d:
                raise ValueError(f"bad label part ({d}, {c}, {n})")
        if any(a[0] >= b[0] for a, b in zip(parts, parts[1:])):
            raise ValueError("block sizes must be strictly increasing")
        object.__setattr__(self, "parts", parts)

    @property
    def jordan_type(self):
        return JordanType(tuple((d, n) for d, _, n in self.parts))

    @property
    def dim(self):
        return sum(d * n for d, _, n in self.parts)

    def to_json(self):
        return json.dumps([list(p) for p in self.parts], separators=(",", ":"))

    @classmethod
    def from_json(cls, text):
        data = json.loads(text) if isinstance(text, str) else text
        return cls(tuple(tuple(p) for p in data))

    @classmethod
    def parse(cls, text):
        """Parse ``(2_1^2, 6_3)``."""
        parts = []
        for piece in text.strip().strip("()").split(","):
            mt = re.fullmatch(r"\s*(\d+)_(\d+)(?:\^(\d+))?\s*", piece)
            if not mt:
                raise ValueError(f"cannot parse label part {piece!r}")
            parts.append((int(mt.group(1)), int(mt.group(2)), int(mt.group(3) or 1)))
        return cls(tuple(sorted(parts)))

    def __str__(self):
        return "(" + ", ".join(f"{d}_{c}" + (f"^{n}" if n > 1 else "") for d, c, n in self.parts) + ")"


def hesselink_label(u, form):
    _check_input(u, form)
    jt = jordan_type(u)
    x = u - FieldMatrix.identity(u.prime, u.nrows)
    pw = _x_powers(x, jt.largest)
    return HesselinkLabel(tuple((d, _chi(x, form, d, pw), n) for d, n in jt.blocks))


# label enumeration -----------------------------------------------------------


@dataclass
class SearchParams:
    saturation: int = 20000
    max_length: int = 30
    seed: int = 0
    use_powers: bool = True
    max_words: int | None = None
    workers: int = 1


@dataclass
class LabelSearchResult:
    labels: dict  # HesselinkLabel -> shortest witness GroupWord
    words_tried: int
    saturated: bool
    elapsed_s: float = 0.0
    seeds: list = field(default_factory=list)

    def items(self):
        return sorted(self.labels.items(), key=lambda kv: (kv[0].parts, kv[1].length, str(kv[1])))

    def to_json(self):
        return {
            "labels": [{"label": json.loads(lab.to_json()), "text": str(lab), "witness": str(w)}
                       for lab, w in self.items()],
            "words_tried": self.words_tried,
            "saturated": self.saturated,
        }


def _small_pow(a, k, p):
    n = a.shape[0]
    out = np.eye(n, dtype=np.int64)
    base = a
    while k:
        if k & 1:
            out = (out @ base) % p
        base = (base @ base) % p
        k >>= 1
    return out


def _element_order(a, p, cap=1 << 16):
    n = a.shape[0]
    eye = np.eye(n, dtype=np.int64)
    g = a
    k = 1
    while not np.array_equal(g, eye):
        g = (g @ a) % p
        k += 1
        if k > cap:
            raise RuntimeError("element order exceeds the search cap")
    return k


def random_word(rng, names, max_length, max_exp):
    """Alternating generator powers with total length uniform in [1, max_length]."""
    length = int(rng.integers(1, max_length + 1))
    letters = []
    k = int(rng.integers(len(names)))
    while length > 0:
        cap = min(length, max_exp[k])
        e = int(rng.integers(1, cap + 1))
        letters.append((names[k], e))
        length -= e
        if len(names) > 1:
            # next syllable uses a different generator
            k = (k + int(rng.integers(1, len(names)))) % len(names)
    return GroupWord(tuple(letters))


def _unipotent_powers(a, p):
    """Unipotent powers g^(m p^i) of ``a``, m the p'-part of its order.

    The last one is the identity g^order, so the trivial class is always seen.
    """
    order = _element_order(a, p)
    m = order
    while m % p == 0:
        m //= p
    out = []
    e = 1
    u = _small_pow(a, m, p)
    while e * m <= order:
        out.append((m * e, u))
        u = _small_pow(u, p, p)
        e *= p
    return out


def _label_worker(args):
    gens, names, prime, gram, params, seed = args
    form = SymplecticForm(FieldMatrix.from_entries(prime, gram))
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    rng = make_rng(seed)
    max_exp = [max(1, _element_order(g, prime) - 1) for g in gens]
    eye = np.eye(gens[0].shape[0], dtype=np.int64)
    cache = {}
    found = {}
    since_new = 0
    tried = 0
    while since_new < params.saturation and (params.max_words is None or tried < params.max_words):
        word = random_word(rng, names, params.max_length, max_exp)
        tried += 1
        since_new += 1
        a = eye
        for s, e in word.letters:
            a = (a @ _small_pow(gens[names.index(s)], e, prime)) % prime
        if params.use_powers:
            cands = _unipotent_powers(a, prime)
        else:
            u = a - eye
            cands = [(1, a)] if not np.any(_small_pow(u % prime, a.shape[0], prime)) and np.any(u % prime) else []
        for power, u in cands:
            key = u.astype(np.uint8).tobytes()
            label = cache.get(key)
            if label is None:
                label = hesselink_label(FieldMatrix.from_entries(prime, u), form)
                cache[key] = label
            witness = word ** power
            old = found.get(label)
            if old is None:
                found[label] = witness
                since_new = 0
            elif (witness.length, str(witness)) < (old.length, str(old)):
                found[label] = witness
    return found, tried, since_new >= params.saturation


def collect_labels(rep, form, params=None):
    """Random search for unipotent class labels among words in the generators.

    With ``use_powers`` each random word ``g`` contributes the unipotent
    powers ``g^(m p^i)``; the witness is then that power of the word.  Runs
    stop after ``saturation`` consecutive words add no new label.
    """
    params = params or SearchParams()
    for name, g in zip(rep.names, rep.gens):
        if not is_isometry(g, form):
            raise NotIsometry(f"generator {name} is not an isometry")
    t0 = time.perf_counter()
    gens = [g.entries.astype(np.int64) for g in rep.gens]
    gram = form.gram.entries.astype(np.int64)
    if params.workers <= 1:
        seeds = [params.seed]
    else:
        seeds = [derive_seed(params.seed, i) for i in range(params.workers)]
    jobs = [(gens, list(rep.names), rep.prime, gram, params, s) for s in seeds]
    if len(jobs) == 1:
        results = [_label_worker(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            results = list(pool.map(_label_worker, jobs))
    labels = {}
    for found, _, _ in results:
        for lab, w in found.items():
            old = labels.get(lab)
            if old is None or (w.length, str(w)) < (old.length, str(old)):
                labels[lab] = w
    return LabelSearchResult(
        labels=labels,
        words_tried=sum(r[1] for r in results),
        saturated=all(r[2] for r in results),
        elapsed_s=time.perf_counter() - t0,
        seeds=seeds,
    )


def enumerate_group(rep, limit=100000):
    """All elements of the group generated by ``rep`` with a shortest word for each.

    Breadth-first over right multiplication by generators; meant for small groups.
    """
    p = rep.prime
    gens = [g.entries.astype(np.int64) for g in rep.gens]
    start = np.eye(rep.dim, dtype=np.int64)
    seen = {start.astype(np.uint8).tobytes(): (start, GroupWord())}
    frontier = [(start, GroupWord())]
    while frontier:
        nxt = []
        for a, w in frontier:
            for name, g in zip(rep.names, gens):
                b = (a @ g) % p
                key = b.astype(np.uint8).tobytes()
                if key not in seen:
                    item = (b, w * GroupWord(((name, 1),)))
                    seen[key] = item
                    nxt.append(item)
                    if len(seen) > limit:
                        raise RuntimeError("group larger than the enumeration limit")
        frontier = nxt
    return [(FieldMatrix.from_entries(p, a), w) for a, w in seen.values()]


__all__ = [
    "HesselinkLabel",
    "LabelSearchResult",
    "SearchParams",
    "SymplecticForm",
    "chi",
    "collect_labels",
    "enumerate_group",
    "hesselink_label",
    "is_isometry",
    "random_word",
]
