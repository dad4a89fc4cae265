from itertools import combinations

import numpy as np
import pytest
import sympy

from unipsep.errors import NotInvariant, PrimeMismatch, UnknownSymbol, WordParseError
from unipsep.gf import FieldMatrix, rank, solve_rows
from unipsep.jordan import is_unipotent, jordan_type
from unipsep.modules import (
    GroupWord,
    MatRep,
    colex_subsets,
    compound_matrix,
    direct_sum,
    dual,
    evaluate_word,
    exterior_power,
    invariant_vectors,
    is_invariant,
    spin,
    sub_quotient,
    tensor,
)
from unipsep.presets import load_preset, sp10_generators
from unipsep.symplectic import random_word


@pytest.fixture(scope="module")
def sp10():
    return load_preset("sp10")


def random_words(rng, names, count, max_length=12):
    return [random_word(rng, names, max_length, [3] * len(names)) for _ in range(count)]


# words ---------------------------------------------------------------------------


def test_word_grammar():
    w = GroupWord.parse("B4AB6AB5A")
    assert w.letters == (("B", 4), ("A", 1), ("B", 6), ("A", 1), ("B", 5), ("A", 1))
    assert str(w) == "B4AB6AB5A"
    assert w.length == 18
    assert GroupWord.parse(" B 4 A\tB6 ") == GroupWord.parse("B4AB6")
    assert GroupWord.parse("") == GroupWord()
    assert str(GroupWord.parse("A") * GroupWord.parse("A2B")) == "A3B"
    for bad in ("4A", "A0", "A-1", "A*B"):
        with pytest.raises(WordParseError):
            GroupWord.parse(bad)


def test_evaluate_word(sp10):
    rep = sp10.rep
    assert evaluate_word(rep, "") == FieldMatrix.identity(2, 10)
    a, b = sp10_generators()
    assert evaluate_word(rep, "A") == a
    assert evaluate_word(rep, "B4AB6AB5A") == b ** 4 @ a @ b ** 6 @ a @ b ** 5 @ a
    with pytest.raises(UnknownSymbol):
        evaluate_word(rep, "C")


# constructions --------------------------------------------------------------------


def test_tensor_with_trivial_and_dimensions(sp10):
    rep = sp10.rep
    triv = MatRep.trivial(2, rep.names)
    assert tensor(rep, triv) == rep
    big = MatRep.trivial(2, rep.names, dim=100)
    assert tensor(rep, big).dim == 1000
    with pytest.raises(PrimeMismatch):
        tensor(rep, MatRep.trivial(3, rep.names))


def test_constructions_are_functorial(sp10):
    rng = np.random.default_rng(3)
    rep = sp10.rep
    e2 = exterior_power(rep, 2)
    t = tensor(rep, e2)
    d = dual(rep)
    s = direct_sum(rep, e2)
    for w in random_words(rng, rep.names, 10):
        g = evaluate_word(rep, w)
        g2 = evaluate_word(e2, w)
        assert evaluate_word(t, w) == g.kron(g2)
        assert g2 == compound_matrix(g, 2)
        assert evaluate_word(d, w) == (g.T) ** -1
        assert evaluate_word(s, w) == FieldMatrix.block_diag([g, g2])


def test_exterior_power_examples(sp10):
    rep = sp10.rep
    assert exterior_power(rep, 1) == rep
    assert exterior_power(rep, 2).dim == 45
    with pytest.raises(ValueError):
        exterior_power(rep, 11)


def test_colex_order():
    assert colex_subsets(4, 2) == [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_compound_matrix_against_sympy_minors(p):
    rng = np.random.default_rng(p)
    n, i = 6, 3
    a = rng.integers(0, p, size=(n, n))
    got = compound_matrix(FieldMatrix.from_entries(p, a), i).entries
    subsets = sorted(combinations(range(n), i), key=lambda s: s[::-1])
    sm = sympy.Matrix(a.tolist())
    for r, rows in enumerate(subsets):
        for c, cols in enumerate(subsets):
            assert got[r, c] == sm.extract(list(rows), list(cols)).det() % p


def test_compound_matrix_is_multiplicative():
    rng = np.random.default_rng(11)
    for _ in range(20):
        n = int(rng.integers(2, 9))
        i = int(rng.integers(1, min(3, n) + 1))
        g, h = (FieldMatrix.from_entries(2, rng.integers(0, 2, size=(n, n))) for _ in range(2))
        assert compound_matrix(g @ h, i) == compound_matrix(g, i) @ compound_matrix(h, i)


def test_dual(sp10):
    rep = sp10.rep
    assert dual(dual(rep)) == rep
    perm = np.eye(5, dtype=int)[[1, 2, 3, 4, 0]]
    prep = MatRep.checked(2, [FieldMatrix.from_entries(2, perm)], ["P"])
    assert dual(prep) == prep
    rng = np.random.default_rng(5)
    e3 = exterior_power(rep, 3)
    d3 = dual(e3)
    found = 0
    for w in random_words(rng, rep.names, 60, 20):
        g = evaluate_word(e3, w)
        if is_unipotent(g):
            found += 1
            assert jordan_type(evaluate_word(d3, w)) == jordan_type(g)
    assert found


# spinning and subquotients --------------------------------------------------------


def test_spin_examples(sp10):
    rep = sp10.rep
    assert spin(rep, []).nrows == 0
    rng = np.random.default_rng(9)
    for _ in range(5):
        v = FieldMatrix.from_entries(2, rng.integers(0, 2, size=(1, 10)))
        if not v.is_zero():
            assert spin(rep, [v]).nrows == 10


def test_invariant_line_in_exterior_square(sp10):
    e2 = exterior_power(sp10.rep, 2)
    line = invariant_vectors(e2)
    assert line.nrows == 1
    for g in e2.gens:
        assert line @ g == line
    s = spin(e2, [line])
    assert s.nrows == 1 and is_invariant(e2, s)
    sub, quot = sub_quotient(e2, line)
    assert (sub.dim, quot.dim) == (1, 44)


def test_spin_output_is_invariant_for_gfp():
    rng = np.random.default_rng(4)
    gens = [FieldMatrix.from_entries(3, rng.integers(0, 3, size=(8, 8))) for _ in range(2)]
    blocks = [FieldMatrix.block_diag([g, FieldMatrix.identity(3, 3)]) for g in gens]
    rep = MatRep(3, 11, tuple(blocks), ("A", "B"))
    s = spin(rep, [FieldMatrix.unit_vector(3, 11, 9)])
    assert s.nrows == 1
    s = spin(rep, [FieldMatrix.unit_vector(3, 11, 0)])
    assert is_invariant(rep, s) and s.nrows <= 8


def greedy_complement(basis):
    """First-extendable-index completion by standard basis vectors, done naively."""
    n = basis.ncols
    current = basis
    chosen = []
    for j in range(n):
        e = FieldMatrix.unit_vector(basis.prime, n, j)
        trial = FieldMatrix.vstack([current, e])
        if rank(trial) == trial.nrows:
            current = trial
            chosen.append(j)
    return chosen


@pytest.mark.parametrize("i", [2, 3, 4])
def test_sub_quotient_against_direct_computation(sp10, i):
    rep = exterior_power(sp10.rep, i)
    rng = np.random.default_rng(i)
    v = FieldMatrix.from_entries(2, rng.integers(0, 2, size=(1, rep.dim)))
    basis = spin(rep, [v])
    if basis.nrows == rep.dim:
        basis = invariant_vectors(rep) if i % 2 == 0 else spin(rep, [FieldMatrix.unit_vector(2, rep.dim, 0)])
    sub, quot = sub_quotient(rep, basis)
    assert sub.dim + quot.dim == rep.dim
    comp = greedy_complement(basis)
    assert len(comp) == quot.dim
    full = FieldMatrix.vstack([basis] + [FieldMatrix.unit_vector(2, rep.dim, j) for j in comp])
    for g, gs, gq in zip(rep.gens, sub.gens, quot.gens):
        assert gs @ basis == basis @ g
        # in the basis (subspace, complement) the action is block lower triangular
        coords = solve_rows(full, full @ g)
        k = basis.nrows
        assert coords.submatrix(range(k), range(k, rep.dim)).is_zero()
        assert coords.submatrix(range(k, rep.dim), range(k, rep.dim)) == gq


def test_sub_quotient_edge_cases(sp10):
    rep = sp10.rep
    sub, quot = sub_quotient(rep, FieldMatrix.identity(2, 10))
    assert sub.dim == 10 and quot.dim == 0
    sub, quot = sub_quotient(rep, FieldMatrix.zeros(2, 0, 10))
    assert sub.dim == 0 and quot == rep
    with pytest.raises(NotInvariant):
        sub_quotient(rep, FieldMatrix.unit_vector(2, 10, 0))


# file format ------------------------------------------------------------------------


def test_rep_file_round_trip(sp10):
    text = sp10.rep.to_text()
    lines = text.splitlines()
    assert lines[0] == "2 10 2"
    assert lines[1] == "gen A" and lines[2] == "2 10 10"
    assert MatRep.from_text(text) == sp10.rep
    with pytest.raises(ValueError):
        MatRep.from_text(text.replace("gen B", "gen"))
    singular = "2 2 1\ngen A\n2 2 2\n1 1\n1 1\n"
    with pytest.raises(ValueError):
        MatRep.from_text(singular)
