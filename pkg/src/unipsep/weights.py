"""Highest weights of type C_l at p = 2 and how to build the modules L(lambda).

Every 2-restricted ``L(lambda)`` is produced from the natural module by
exterior powers, tensor products and extraction of the composition factor of
a known dimension.  Dimensions come from a table: the rank-5 table is
shipped data, smaller ranks are bootstrapped by chopping and then frozen.
"""

from __future__ import annotations

import json
import time
import zlib
from dataclasses import dataclass, field
from importlib import resources
from math import comb

from .errors import BudgetExceeded, PlanError
from .jordan import JordanType, jordan_type
from .meataxe import Limits, chop, find_factor_of_dim
from .modules import MatRep, as_word, evaluate_word, exterior_power, tensor
from .seeding import derive_seed


@dataclass(frozen=True, order=True)
class Weight:
    """Coefficients ``a_1 ... a_l`` of the fundamental dominant weights."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(int(a) for a in self.coeffs)
        if any(a < 0 for a in c):
            raise ValueError("weights must be dominant")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if not text.isdigit():
            raise ValueError(f"weight must be a digit string, got {text!r}")
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def zero(cls, rank):
        return cls((0,) * rank)

    @classmethod
    def fundamental(cls, rank, i):
        """The weight varpi_i, 1-based."""
        if not 1 <= i <= rank:
            raise ValueError(f"no fundamental weight {i} in rank {rank}")
        return cls(tuple(int(j == i) for j in range(1, rank + 1)))

    @property
    def rank(self):
        return len(self.coeffs)

    @property
    def support(self):
        return [i + 1 for i, a in enumerate(self.coeffs) if a]

    def is_zero(self):
        return not any(self.coeffs)

    def is_restricted(self, p=2):
        return all(a < p for a in self.coeffs)

    def __add__(self, other):
        if self.rank != other.rank:
            raise ValueError("weights of different rank")
        return Weight(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return Weight(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __str__(self):
        if all(a < 10 for a in self.coeffs):
            return "".join(str(a) for a in self.coeffs)
        return ",".join(str(a) for a in self.coeffs)


def as_weight(w):
    return w if isinstance(w, Weight) else Weight.parse(w)


def steinberg_decompose(weight, p=2):
    """Base-p digits: ``[(lambda_i, i)]`` with ``weight = sum p^i lambda_i``, zero layers dropped."""
    weight = as_weight(weight)
    if weight.is_zero():
        return [(weight, 0)]
    out = []
    coeffs = list(weight.coeffs)
    i = 0
    while any(coeffs):
        digit = Weight(tuple(a % p for a in coeffs))
        if not digit.is_zero():
            out.append((digit, i))
        coeffs = [a // p for a in coeffs]
        i += 1
    return out


def type_c_split(weight):
    """``(lambda', a_l varpi_l)`` with L(lambda) = L(lambda') (x) L(a_l varpi_l) at p = 2."""
    weight = as_weight(weight)
    if not weight.is_restricted(2):
        raise ValueError(f"{weight} is not 2-restricted")
    l = weight.rank
    top = Weight((0,) * (l - 1) + (weight.coeffs[-1],))
    return weight - top, top


# dimension table ------------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    weight: Weight
    jordan_type: JordanType
    dim: int
    tilting: bool


def _read_data(name):
    return json.loads(resources.files("unipsep").joinpath("data", name).read_text())


def table3_rows():
    """The reference rows: Jordan types of both rank-5 elements, dimensions and tilting marks."""
    data = _read_data("table3.json")
    return [TableRow(Weight.parse(r["weight"]), JordanType(tuple(map(tuple, r["blocks"]))),
                     r["dim"], r["tilting"]) for r in data["rows"]]


class DimensionTable:
    """Map from 2-restricted weights of one rank to dim L(lambda).

    Entries are write-once; writing a different value is a fatal error.
    """

    def __init__(self, rank, entries=None, tilting=None, source=""):
        self.rank = rank
        self.entries = {}
        self.tilting = dict(tilting or {})
        self.source = source
        self.set(Weight.zero(rank), 1)
        for w, d in (entries or {}).items():
            self.set(as_weight(w), d)

    @classmethod
    def for_rank(cls, rank):
        if rank == 5:
            rows = table3_rows()
            return cls(5, {r.weight: r.dim for r in rows}, {r.weight: r.tilting for r in rows}, "table3.json")
        name = f"dims_c{rank}.json"
        try:
            data = _read_data(name)
        except FileNotFoundError:
            return cls(rank, source="empty")
        return cls(rank, {Weight.parse(k): v for k, v in data["dims"].items()}, source=name)

    def set(self, weight, dim):
        weight = as_weight(weight)
        if weight.rank != self.rank:
            raise ValueError(f"weight {weight} has rank {weight.rank}, table has rank {self.rank}")
        old = self.entries.get(weight)
        if old is not None and old != dim:
            raise AssertionError(f"conflicting dimensions for {weight}: {old} vs {dim}")
        self.entries[weight] = int(dim)

    def __contains__(self, weight):
        try:
            self.dim(weight)
        except PlanError:
            return False
        return True

    def dim(self, weight):
        weight = as_weight(weight)
        if weight in self.entries:
            return self.entries[weight]
        rest, top = type_c_split(weight)
        if not rest.is_zero() and not top.is_zero():
            return self.dim(rest) * self.dim(top)
        raise PlanError(f"no dimension known for L({weight})")

    def to_json(self):
        dims = {str(w): d for w, d in sorted(self.entries.items()) if not w.is_zero()}
        return json.dumps({"rank": self.rank, "prime": 2, "dims": dims}, indent=1, sort_keys=True)


# build plans ------------------------------------------------------------------


@dataclass(frozen=True)
class Step:
    """One instruction; ``kind`` is natural, trivial, ext, tensor or chop."""

    kind: str
    out: str
    sources: tuple = ()
    arg: int = 0
    dim: int = 0

    def __str__(self):
        if self.kind in ("natural", "trivial"):
            return f"{self.out} = {self.kind} ({self.dim})"
        if self.kind == "ext":
            return f"{self.out} = ext({self.sources[0]}, {self.arg})"
        if self.kind == "tensor":
            return f"{self.out} = {self.sources[0]} (x) {self.sources[1]}  [{self.dim}]"
        return f"{self.out} = factor of dim {self.arg} in {self.sources[0]}"


@dataclass
class BuildPlan:
    target: Weight
    steps: list = field(default_factory=list)

    @property
    def max_dim(self):
        return max(s.dim for s in self.steps)

    @property
    def dim(self):
        return self.steps[-1].dim

    def __str__(self):
        return "\n".join(str(s) for s in self.steps)


def _key(weight):
    return f"L({weight})"


def _extend(steps, new):
    seen = {s.out for s in steps}
    for s in new:
        if s.out not in seen:
            steps.append(s)
            seen.add(s.out)


def build_plan(weight, table):
    """Steps realizing L(weight) for a 2-restricted weight."""
    weight = as_weight(weight)
    if weight.rank != table.rank:
        raise PlanError(f"weight {weight} does not have rank {table.rank}")
    if not weight.is_restricted(2):
        raise PlanError(f"{weight} is not 2-restricted; decompose it first")
    return BuildPlan(weight, _plan_steps(weight, table))


def _plan_steps(weight, table):
    l = weight.rank
    n = 2 * l
    target_dim = table.dim(weight)
    if weight.is_zero():
        return [Step("trivial", _key(weight), dim=1)]
    rest, top = type_c_split(weight)
    if not rest.is_zero() and not top.is_zero():
        steps = []
        _extend(steps, _plan_steps(rest, table))
        _extend(steps, _plan_steps(top, table))
        steps.append(Step("tensor", _key(weight), (_key(rest), _key(top)), dim=target_dim))
        return steps
    support = weight.support
    natural = Step("natural", "V", dim=n)
    if len(support) == 1:
        i = support[0]
        if i == 1:
            return [Step("natural", _key(weight), dim=n)]
        ext = Step("ext", f"ext{i}(V)", ("V",), i, comb(n, i))
        return [natural, ext, Step("chop", _key(weight), (ext.out,), target_dim, target_dim)]
    i = support[0]
    first = Weight.fundamental(l, i)
    other = weight - first
    steps = []
    _extend(steps, _plan_steps(first, table))
    _extend(steps, _plan_steps(other, table))
    prod = Step("tensor", f"{_key(first)}*{_key(other)}", (_key(first), _key(other)),
                dim=table.dim(first) * table.dim(other))
    steps.append(prod)
    steps.append(Step("chop", _key(weight), (prod.out,), target_dim, target_dim))
    return steps


# predictors -------------------------------------------------------------------


def _is_power_of(q, p):
    while q > 1 and q % p == 0:
        q //= p
    return q == 1


def steinberg_block_predictor(order, dim, p=2):
    """All blocks of size ``order`` on the Steinberg module."""
    if order < 1 or not _is_power_of(order, p):
        raise ValueError(f"{order} is not a power of {p}")
    if dim % order:
        raise ValueError(f"order {order} does not divide dimension {dim}")
    return JordanType(((order, dim // order),))


def c_l_presteinberg_predictor(order, dim):
    """All blocks of size ``order`` on L(varpi_1 + ... + varpi_(l-1)) for order 2^k > 2."""
    if order <= 2 or not _is_power_of(order, 2):
        raise ValueError(f"the prediction needs an order 2^k > 2, got {order}")
    if dim % order:
        raise ValueError(f"order {order} does not divide dimension {dim}")
    return JordanType(((order, dim // order),))


def presteinberg_weight(rank):
    return Weight((1,) * (rank - 1) + (0,))


def steinberg_weight(rank, p=2):
    return Weight((p - 1,) * rank)


# execution ----------------------------------------------------------------------


class ModuleBuilder:
    """Executes build plans for one preset, caching every module it builds.

    With ``bootstrap`` set, missing dimensions are determined by chopping:
    for ``L(varpi_i)`` the one factor of ext^i(V) that is neither trivial nor
    a known ``L(varpi_j)`` with j < i of the same parity; for larger supports
    the largest factor of the planned tensor product.
    """

    def __init__(self, preset, table=None, seed=0, budget=32000, limits=None, bootstrap=False):
        self.preset = preset
        self.table = table or DimensionTable.for_rank(preset.rank)
        self.seed = seed
        self.budget = budget
        self.limits = limits or Limits()
        self.bootstrap = bootstrap
        self.modules = {}
        self.timings = {}
        self._images = {}

    def _seed_for(self, key):
        return derive_seed(self.seed, zlib.crc32(key.encode()))

    def _store(self, key, rep):
        old = self.modules.get(key)
        if old is not None and old.dim != rep.dim:
            raise AssertionError(f"conflicting modules for {key}")
        self.modules.setdefault(key, rep)

    def plan(self, weight):
        weight = as_weight(weight)
        if self.bootstrap:
            self._bootstrap(weight)
        return build_plan(weight, self.table)

    def check_budget(self, plan):
        if plan.max_dim > self.budget:
            raise BudgetExceeded(
                f"L({plan.target}) needs an intermediate module of dimension {plan.max_dim} "
                f"> budget {self.budget}")

    def build(self, weight):
        plan = self.plan(weight)
        self.check_budget(plan)
        for step in plan.steps:
            if step.out not in self.modules:
                t0 = time.perf_counter()
                self._store(step.out, self._run(step))
                self.timings[step.out] = time.perf_counter() - t0
        return self.modules[_key(plan.target)]

    def _run(self, step):
        rep = self.preset.rep
        if step.kind == "natural":
            return rep
        if step.kind == "trivial":
            return MatRep.trivial(rep.prime, rep.names)
        if step.kind == "ext":
            return exterior_power(self.modules[step.sources[0]], step.arg)
        if step.kind == "tensor":
            a, b = (self.modules[s] for s in step.sources)
            return tensor(a, b)
        if step.kind == "chop":
            src = self.modules[step.sources[0]]
            return find_factor_of_dim(src, step.arg, self._seed_for(step.out), self.limits)
        raise PlanError(f"unknown step kind {step.kind!r}")

    def _bootstrap(self, weight):
        if weight in self.table:
            return
        rest, top = type_c_split(weight)
        if not rest.is_zero() and not top.is_zero():
            self._bootstrap(rest)
            self._bootstrap(top)
            return
        l = weight.rank
        support = weight.support
        if len(support) == 1:
            i = support[0]
            if i == 1:
                self.table.set(weight, 2 * l)
                return
            for j in range(i % 2 or 2, i, 2):
                self._bootstrap(Weight.fundamental(l, j))
            known = {self.table.dim(Weight.fundamental(l, j)) for j in range(i % 2 or 2, i, 2)}
            known.add(1)
            src = self.build_ext(i)
            factors = chop(src, self._seed_for(f"bootstrap ext{i}"), self.limits)
            cands = [(r, m) for r, m in factors.factors if r.dim not in known]
            if len(cands) != 1 or cands[0][1] != 1:
                raise PlanError(f"cannot identify L({weight}) among factors {factors.dims()} of ext{i}(V)")
            self.table.set(weight, cands[0][0].dim)
            self._store(_key(weight), cands[0][0])
            return
        first = Weight.fundamental(l, support[0])
        other = weight - first
        self._bootstrap(first)
        self._bootstrap(other)
        a, b = self.build(first), self.build(other)
        if a.dim * b.dim > self.budget:
            raise BudgetExceeded(f"bootstrapping L({weight}) needs dimension {a.dim * b.dim}")
        factors = chop(tensor(a, b), self._seed_for(f"bootstrap {weight}"), self.limits)
        top_rep, mult = factors.factors[-1]
        if mult != 1 or any(r.dim == top_rep.dim for r, _ in factors.factors[:-1]):
            raise PlanError(f"largest factor of L({first}) (x) L({other}) is not unique: {factors.dims()}")
        self.table.set(weight, top_rep.dim)
        self._store(_key(weight), top_rep)

    def build_ext(self, i):
        key = f"ext{i}(V)"
        if key not in self.modules:
            self._store(key, exterior_power(self.preset.rep, i))
        return self.modules[key]

    def image(self, weight, word):
        """Image of ``word`` on L(weight) (2-restricted), cached."""
        weight = as_weight(weight)
        word = as_word(word)
        key = (weight, str(word))
        if key not in self._images:
            self._images[key] = evaluate_word(self.build(weight), word)
        return self._images[key]

    def weight_dim(self, weight):
        return _product(self.table.dim(mu) for mu, _ in steinberg_decompose(weight))

    def plans_for(self, weight):
        return [self.plan(mu) for mu, _ in steinberg_decompose(weight)]


def _product(values):
    out = 1
    for v in values:
        out *= v
    return out


def jordan_on_weight(weight, word, preset, budget=32000, builder=None, seed=0):
    """Jordan type of ``word`` acting on L(weight).

    Twisted Steinberg factors reuse the untwisted images, since the
    Frobenius map fixes matrices with entries in GF(2).
    """
    weight = as_weight(weight)
    if builder is None:
        builder = ModuleBuilder(preset, seed=seed, budget=budget)
    pieces = steinberg_decompose(weight)
    plans = [builder.plan(mu) for mu, _ in pieces]
    total = _product(p.dim for p in plans)
    for p in plans:
        builder.check_budget(p)
    if total > builder.budget:
        raise BudgetExceeded(f"L({weight}) has dimension {total} > budget {builder.budget}")
    images = [builder.image(mu, word) for mu, _ in pieces]
    m = images[0]
    for other in images[1:]:
        m = m.kron(other)
    return jordan_type(m)


__all__ = [
    "BuildPlan",
    "DimensionTable",
    "ModuleBuilder",
    "Step",
    "TableRow",
    "Weight",
    "as_weight",
    "build_plan",
    "c_l_presteinberg_predictor",
    "jordan_on_weight",
    "presteinberg_weight",
    "steinberg_block_predictor",
    "steinberg_decompose",
    "steinberg_weight",
    "table3_rows",
    "type_c_split",
]
