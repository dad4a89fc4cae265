"""Named generating sets for Sp_2l(2), l <= 5, with the anti-diagonal form.

The rank-5 generators and words are written out below; the smaller ranks are
read from ``data/sp*.rep``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .errors import NotIsometry
from .gf import FieldMatrix
from .modules import GroupWord, MatRep
from .symplectic import SymplecticForm, is_isometry

PRESET_NAMES = ("sp2", "sp4", "sp6", "sp8", "sp10")


@dataclass(frozen=True, eq=False)
class Preset:
    name: str
    rank: int
    prime: int
    rep: MatRep
    form: SymplecticForm
    words: dict = field(default_factory=dict)

    @property
    def dim(self):
        return self.rep.dim

    def word(self, key):
        return self.words[key] if key in self.words else GroupWord.parse(key)


def _unit_sum(n, positions):
    """Sum of elementary matrices E_{i,j} with 1-based indices."""
    m = np.zeros((n, n), dtype=np.int64)
    for i, j in positions:
        m[i - 1, j - 1] += 1
    return m


def sp10_generators():
    n = 10
    a = np.eye(n, dtype=np.int64) + _unit_sum(n, [(1, 5), (1, 10), (6, 10)])
    b = _unit_sum(n, [(2, 1), (3, 2), (4, 3), (5, 4), (10, 5), (9, 10), (8, 9), (7, 8), (6, 7), (1, 6)])
    return FieldMatrix.from_entries(2, a), FieldMatrix.from_entries(2, b)


SP10_WORDS = {
    "u": GroupWord.parse("B4AB6AB5A"),
    "u'": GroupWord.parse("BAB2AB4AB3A"),
}


def group_order(rank, q=2):
    """|Sp_2l(q)| = q^(l^2) prod (q^(2i) - 1)."""
    order = q ** (rank * rank)
    for i in range(1, rank + 1):
        order *= q ** (2 * i) - 1
    return order


def _load_fixture(name):
    text = resources.files("unipsep").joinpath("data", f"{name}.rep").read_text()
    return MatRep.from_text(text)


def _validate(rep, form, name):
    for sym, g in zip(rep.names, rep.gens):
        if not is_isometry(g, form):
            raise NotIsometry(f"preset {name}: generator {sym} is not an isometry")


@lru_cache(maxsize=None)
def load_preset(name):
    if name not in PRESET_NAMES:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    rank = int(name[2:]) // 2
    if name == "sp10":
        rep = MatRep.checked(2, sp10_generators(), ("A", "B"))
        words = dict(SP10_WORDS)
    else:
        rep = _load_fixture(name)
        words = {}
    form = SymplecticForm.anti_diagonal(2, 2 * rank)
    _validate(rep, form, name)
    return Preset(name, rank, 2, rep, form, words)


def permutation_group_order(rep):
    """Order of the generated group via its action on nonzero vectors (uses sympy)."""
    from itertools import product

    from sympy.combinatorics import Permutation, PermutationGroup

    p, n = rep.prime, rep.dim
    vecs = [v for v in product(range(p), repeat=n) if any(v)]
    index = {v: k for k, v in enumerate(vecs)}
    arr = np.array(vecs, dtype=np.int64)
    perms = []
    for g in rep.gens:
        images = (arr @ g.entries.astype(np.int64)) % p
        perms.append(Permutation([index[tuple(int(x) for x in row)] for row in images]))
    return PermutationGroup(perms).order()


__all__ = [
    "PRESET_NAMES",
    "Preset",
    "SP10_WORDS",
    "group_order",
    "load_preset",
    "permutation_group_order",
    "sp10_generators",
]
