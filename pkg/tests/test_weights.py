import json
from importlib import resources

import pytest

from unipsep.errors import BudgetExceeded, PlanError
from unipsep.jordan import JordanType, jordan_type_tensor, matrix_of_type
from unipsep.presets import load_preset
from unipsep.weights import (
    DimensionTable,
    ModuleBuilder,
    Weight,
    build_plan,
    c_l_presteinberg_predictor,
    jordan_on_weight,
    presteinberg_weight,
    steinberg_block_predictor,
    steinberg_decompose,
    steinberg_weight,
    table3_rows,
    type_c_split,
)

W = Weight.parse


@pytest.fixture(scope="module")
def sp10():
    return load_preset("sp10")


@pytest.fixture(scope="module")
def builder(sp10):
    return ModuleBuilder(sp10, seed=0, budget=4000)


# weights ------------------------------------------------------------------------


def test_weight_parsing_and_arithmetic():
    w = W("10100")
    assert w.coeffs == (1, 0, 1, 0, 0)
    assert tuple(w.support) == (1, 3)
    assert str(w) == "10100"
    assert w + W("01000") == W("11100")
    assert Weight.fundamental(5, 2) == W("01000")
    assert Weight.zero(3).is_zero()
    assert not W("20000").is_restricted()
    for bad in ("", "1a0", "-1"):
        with pytest.raises(ValueError):
            W(bad)
    with pytest.raises(ValueError):
        Weight.fundamental(3, 4)


@pytest.mark.parametrize("text, expected", [
    ("00000", [("00000", 0)]),
    ("11110", [("11110", 0)]),
    ("20000", [("10000", 1)]),
    ("30000", [("10000", 0), ("10000", 1)]),
    ("10102", [("10100", 0), ("00001", 1)]),
    ("40010", [("00010", 0), ("10000", 2)]),
    ("40000", [("10000", 2)]),
    ("03000", [("01000", 0), ("01000", 1)]),
])
def test_steinberg_decompose(text, expected):
    assert steinberg_decompose(W(text)) == [(W(d), i) for d, i in expected]


def test_steinberg_decompose_reassembles():
    for text in ("31203", "11111", "70000", "02040"):
        w = W(text)
        total = [0] * 5
        for digit, i in steinberg_decompose(w):
            assert digit.is_restricted()
            total = [t + 2 ** i * a for t, a in zip(total, digit.coeffs)]
        assert tuple(total) == w.coeffs


def test_type_c_split():
    assert type_c_split(W("10001")) == (W("10000"), W("00001"))
    assert type_c_split(W("11110")) == (W("11110"), W("00000"))
    assert type_c_split(W("00001")) == (W("00000"), W("00001"))
    with pytest.raises(ValueError):
        type_c_split(W("00002"))


# dimension table and plans ---------------------------------------------------------


def test_table_products_follow_the_split():
    t = DimensionTable.for_rank(5)
    assert t.dim(W("10001")) == 10 * 32
    assert t.dim(W("11111")) == 1048576 * 32
    assert t.dim(W("00000")) == 1
    assert W("11111") in t


def test_table_is_write_once():
    t = DimensionTable(5, {"10000": 10})
    t.set(W("10000"), 10)
    with pytest.raises(AssertionError):
        t.set(W("10000"), 11)
    with pytest.raises(PlanError):
        t.dim(W("01000"))


def test_tabulated_dims_are_products_of_block_sizes():
    for row in table3_rows():
        assert row.jordan_type.dim == row.dim


def test_plan_examples():
    t = DimensionTable.for_rank(5)
    p1 = build_plan(W("10000"), t)
    assert [s.kind for s in p1.steps] == ["natural"] and p1.max_dim == 10
    p3 = build_plan(W("00100"), t)
    assert [(s.kind, s.dim) for s in p3.steps] == [("natural", 10), ("ext", 120), ("chop", 100)]
    p = build_plan(W("10100"), t)
    assert p.steps[-2].kind == "tensor" and p.steps[-2].dim == 1000
    assert p.steps[-1].kind == "chop" and p.dim == 670
    assert p.max_dim == 1000
    # a_l = 1 multiplies without chopping
    q = build_plan(W("10001"), t)
    assert q.steps[-1].kind == "tensor" and q.dim == 320
    assert build_plan(W("01010"), t).max_dim == 44 * 164
    with pytest.raises(PlanError):
        build_plan(W("20000"), t)
    with pytest.raises(PlanError):
        build_plan(W("1000"), t)


def test_budget_is_checked_before_building(sp10):
    b = ModuleBuilder(sp10, budget=500)
    with pytest.raises(BudgetExceeded):
        b.build(W("10100"))
    assert b.modules == {}


# predictors -------------------------------------------------------------------------


def test_predictor_examples():
    assert steinberg_block_predictor(8, 1024) == JordanType(((8, 128),))
    assert steinberg_block_predictor(1, 7) == JordanType(((1, 7),))
    assert steinberg_block_predictor(4, 16) == JordanType(((4, 4),))
    assert c_l_presteinberg_predictor(4, 12) == JordanType(((4, 3),))
    assert c_l_presteinberg_predictor(8, 1048576) == JordanType(((8, 131072),))
    assert presteinberg_weight(5) == W("11110")
    assert steinberg_weight(5) == W("11111")
    with pytest.raises(ValueError):
        steinberg_block_predictor(6, 1024)
    with pytest.raises(ValueError):
        steinberg_block_predictor(8, 12)
    with pytest.raises(ValueError):
        c_l_presteinberg_predictor(2, 1024)


# jordan types on weights ----------------------------------------------------------------


def test_zero_weight_gives_a_single_block(sp10, builder):
    assert jordan_on_weight(W("00000"), sp10.words["u"], sp10, builder=builder) == JordanType(((1, 1),))


@pytest.mark.parametrize("weight", ["10000", "01000", "00100", "00001"])
def test_small_rows_match_reference(sp10, builder, weight):
    ref = {r.weight: r.jordan_type for r in table3_rows()}[W(weight)]
    for key in ("u", "u'"):
        assert jordan_on_weight(W(weight), sp10.words[key], sp10, builder=builder) == ref


def test_frobenius_twist_keeps_the_type(sp10, builder):
    u = sp10.words["u"]
    assert jordan_on_weight(W("20000"), u, sp10, builder=builder) == \
        jordan_on_weight(W("10000"), u, sp10, builder=builder)


def _tensor_type(a, b):
    # canonical block matrices: the type of a tensor product depends only on the factor types
    return jordan_type_tensor(matrix_of_type(a, 2), matrix_of_type(b, 2))


def test_tensor_types_match_canonical_blocks(sp10, builder):
    u = sp10.words["u"]
    a = jordan_on_weight(W("10000"), u, sp10, builder=builder)
    b = jordan_on_weight(W("01000"), u, sp10, builder=builder)
    assert jordan_on_weight(W("21000"), u, sp10, builder=builder) == _tensor_type(a, b)
    c = jordan_on_weight(W("00001"), u, sp10, builder=builder)
    assert jordan_on_weight(W("10001"), u, sp10, builder=builder) == _tensor_type(a, c)


def test_weight_budget(sp10):
    with pytest.raises(BudgetExceeded):
        jordan_on_weight(W("00110"), sp10.words["u"], sp10, budget=8000)


def test_builds_are_deterministic_across_partitions(sp10):
    # the chop seed depends only on the module key
    a = ModuleBuilder(sp10, seed=4).build(W("00100"))
    b = ModuleBuilder(sp10, seed=4)
    b.build(W("01000"))
    assert b.build(W("00100")) == a


# bootstrap oracle ----------------------------------------------------------------------


@pytest.mark.parametrize("weight", ["10000", "01000", "00100", "00010", "00001", "11000", "10100", "10001"])
def test_bootstrap_rank5_matches_table(sp10, weight):
    b = ModuleBuilder(sp10, table=DimensionTable(5), bootstrap=True, budget=4000, seed=1)
    b.plan(W(weight))
    assert b.table.dim(W(weight)) == DimensionTable.for_rank(5).dim(W(weight))


def _frozen(rank):
    data = json.loads(resources.files("unipsep").joinpath("data", f"dims_c{rank}.json").read_text())
    return {Weight.parse(k): v for k, v in data["dims"].items()}


@pytest.mark.parametrize("rank, skip", [(1, ()), (2, ()), (3, ()), (4, ("1110",))])
def test_bootstrap_reproduces_frozen_fixtures(rank, skip):
    preset = load_preset(f"sp{2 * rank}")
    b = ModuleBuilder(preset, table=DimensionTable(rank), bootstrap=True, budget=4000, seed=2)
    for w, d in _frozen(rank).items():
        if str(w) in skip:
            continue
        b.plan(w)
        assert b.table.dim(w) == d


@pytest.mark.stretch
def test_bootstrap_sp8_large_entries():
    preset = load_preset("sp8")
    b = ModuleBuilder(preset, table=DimensionTable(4), bootstrap=True, budget=8000, seed=2)
    frozen = _frozen(4)
    for text in ("1110",):
        b.plan(W(text))
        assert b.table.dim(W(text)) == frozen[W(text)]


@pytest.mark.parametrize("rank", [1, 2, 3, 4])
def test_frozen_fixtures_cover_every_restricted_weight(rank):
    t = DimensionTable.for_rank(rank)
    for i in range(1, rank + 1):
        assert Weight.fundamental(rank, i) in t
    # every 2-restricted weight is reachable through the a_l split
    for k in range(2 ** rank):
        w = Weight(tuple((k >> j) & 1 for j in range(rank)))
        assert w in t
