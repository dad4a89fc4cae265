"""Drivers behind the command-line interface.

Each ``cmd_*`` function returns a JSON-ready report dict.  Reports carrying
hard checks have an ``"ok"`` field; the CLI exits nonzero when it is false.
"""

from __future__ import annotations

import json
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from itertools import combinations
from pathlib import Path

from . import __version__
from .errors import BudgetExceeded
from .jordan import is_unipotent, jordan_type, unipotent_order
from .meataxe import Limits, chop
from .modules import MatRep, as_word, dual, evaluate_word, exterior_power, tensor
from .presets import load_preset
from .symplectic import HesselinkLabel, SearchParams, collect_labels, hesselink_label
from .weights import (
    ModuleBuilder,
    Weight,
    c_l_presteinberg_predictor,
    jordan_on_weight,
    presteinberg_weight,
    steinberg_block_predictor,
    steinberg_weight,
    table3_rows,
)

COUNTEREXAMPLE = (HesselinkLabel.parse("(2_1^2, 6_3)"), HesselinkLabel.parse("(2_0^2, 6_3)"))


@dataclass
class RunConfig:
    preset: str = "sp10"
    seed: int = 0
    workers: int = 1
    budget: int = 32000
    saturation: int = 20000
    max_length: int = 30
    out: str | None = None

    def header(self):
        return {"preset": self.preset, "seed": self.seed, "budget": self.budget, "version": __version__}


def read_config(path):
    """Flat ``key = value`` file; blank lines and ``#`` comments are skipped."""
    kinds = {f.name: f.type for f in fields(RunConfig)}
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or key not in kinds:
            raise ValueError(f"{path}:{lineno}: unknown or malformed setting {line!r}")
        values[key] = int(value, 0) if kinds[key] == "int" else value
    return values


def fmt_type(jt):
    return ", ".join(str(d) if n == 1 else f"{d}^{n}" for d, n in jt.blocks)


# classify ---------------------------------------------------------------------


def cmd_classify(preset_name, word):
    preset = load_preset(preset_name)
    w = as_word(word)
    m = evaluate_word(preset.rep, w)
    report = {"preset": preset_name, "word": str(w), "unipotent": is_unipotent(m), "version": __version__}
    if report["unipotent"]:
        jt = jordan_type(m)
        label = hesselink_label(m, preset.form)
        report.update(order=unipotent_order(m), jordan_type=fmt_type(jt),
                      label=str(label), label_json=json.loads(label.to_json()))
    return report


# table ------------------------------------------------------------------------


def _row_worker(args):
    weight, config = args
    preset = load_preset(config.preset)
    builder = ModuleBuilder(preset, seed=config.seed, budget=config.budget)
    return _table_row(weight, preset, builder)


def _table_row(weight, preset, builder):
    """Types of u and u' on L(weight): built if in budget, else predicted if a block predictor applies."""
    t0 = time.perf_counter()
    words = (preset.words["u"], preset.words["u'"])
    try:
        types = [jordan_on_weight(weight, w, preset, builder=builder) for w in words]
        return {"source": "built", "types": types, "elapsed_ms": (time.perf_counter() - t0) * 1000}
    except BudgetExceeded as exc:
        reason = str(exc)
    dim = builder.table.dim(weight)
    orders = [unipotent_order(evaluate_word(preset.rep, w)) for w in words]
    if weight == presteinberg_weight(preset.rank) and all(o > 2 for o in orders):
        types = [c_l_presteinberg_predictor(o, dim) for o in orders]
        return {"source": "predicted", "types": types, "elapsed_ms": 0.0}
    if weight == steinberg_weight(preset.rank):
        types = [steinberg_block_predictor(o, dim) for o in orders]
        return {"source": "predicted", "types": types, "elapsed_ms": 0.0}
    return {"source": "reference", "types": None, "reason": reason, "elapsed_ms": 0.0}


def cmd_table3(config, weights=None):
    """Jordan types of the two rank-5 classes on every tabulated L(lambda).

    Hard checks: u and u' agree on every built or predicted row, and the type
    equals the tabulated one.
    """
    if config.preset != "sp10":
        raise ValueError("the table is defined for the sp10 preset")
    preset = load_preset(config.preset)
    rows = table3_rows()
    if weights is not None:
        wanted = {Weight.parse(w) if isinstance(w, str) else w for w in weights}
        rows = [r for r in rows if r.weight in wanted]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(_row_worker, [(r.weight, config) for r in rows]))
    else:
        builder = ModuleBuilder(preset, seed=config.seed, budget=config.budget)
        results = [_table_row(r.weight, preset, builder) for r in rows]
    out_rows = []
    ok = True
    for ref, res in zip(rows, results):
        entry = {"weight": str(ref.weight), "dim": ref.dim, "tilting": ref.tilting, "source": res["source"],
                 "reference": fmt_type(ref.jordan_type), "elapsed_ms": round(res["elapsed_ms"], 1)}
        if res["types"] is None:
            entry.update(jordan_type=fmt_type(ref.jordan_type), reason=res["reason"])
        else:
            tu, tv = res["types"]
            entry.update(jordan_type=fmt_type(tu), jordan_type_u_prime=fmt_type(tv),
                         u_equals_u_prime=tu == tv, matches_reference=tu == ref.jordan_type)
            if tu != tv or tu != ref.jordan_type:
                ok = False
        out_rows.append(entry)
    return {**config.header(), "rows": out_rows, "ok": ok}


def format_table(report):
    lines = []
    for r in report["rows"]:
        mark = "*" if r["tilting"] else ""
        status = ""
        if r["source"] != "reference":
            status = "  ok" if r["u_equals_u_prime"] and r["matches_reference"] else "  MISMATCH"
        lines.append(f"{r['weight']} | {r['jordan_type']} | {r['dim']}{mark} | {r['source']}{status}")
    return "\n".join(lines)


# separation -------------------------------------------------------------------


def fundamental_types(builder, word):
    """Jordan types of ``word`` on L(varpi_1) ... L(varpi_l)."""
    l = builder.preset.rank
    return tuple(jordan_on_weight(Weight.fundamental(l, i), word, builder.preset, builder=builder)
                 for i in range(1, l + 1))


def cmd_separate(config, labels=None):
    """Pairs of collected class labels that no L(varpi_i) distinguishes."""
    preset = load_preset(config.preset)
    if labels is None:
        params = SearchParams(saturation=config.saturation, max_length=config.max_length,
                              seed=config.seed, workers=config.workers)
        labels = collect_labels(preset.rep, preset.form, params)
    builder = ModuleBuilder(preset, seed=config.seed, budget=config.budget)
    vectors = {lab: fundamental_types(builder, w) for lab, w in labels.items()}
    ordered = [lab for lab, _ in labels.items()]
    pairs = [(a, b) for a, b in combinations(ordered, 2) if vectors[a] == vectors[b]]
    if preset.name == "sp10":
        expected = {frozenset(COUNTEREXAMPLE)}
    else:
        expected = set()
    found = {frozenset(p) for p in pairs}
    return {
        **config.header(),
        "labels": [{"label": str(lab), "witness": str(w), "types": [fmt_type(t) for t in vectors[lab]]}
                   for lab, w in labels.items()],
        "words_tried": labels.words_tried,
        "saturated": labels.saturated,
        "unseparated": [[str(a), str(b)] for a, b in pairs],
        "ok": labels.saturated and found == expected,
    }


def cmd_labels(config):
    preset = load_preset(config.preset)
    params = SearchParams(saturation=config.saturation, max_length=config.max_length,
                          seed=config.seed, workers=config.workers)
    res = collect_labels(preset.rep, preset.form, params)
    return {**config.header(), **res.to_json()}


# chop -------------------------------------------------------------------------

_TOKENS = re.compile(r"\s*([A-Za-z_]+|\d+|[(),]|[^\s(),]+)")


class ExpressionError(ValueError):
    pass


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKENS.match(text, pos)
        if not m:
            raise ExpressionError(f"cannot tokenize {text[pos:]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_module_expr(text, builder):
    """Evaluate ``nat | ext(e, i) | tensor(e, e) | dual(e) | L(weight)`` to a MatRep."""
    tokens = _tokenize(text)
    pos = 0

    def expect(tok):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            got = tokens[pos] if pos < len(tokens) else "end of input"
            raise ExpressionError(f"expected {tok!r}, got {got!r}")
        pos += 1

    def expr():
        nonlocal pos
        if pos >= len(tokens):
            raise ExpressionError("unexpected end of expression")
        head = tokens[pos]
        pos += 1
        if head == "nat":
            return builder.preset.rep
        if head in ("ext", "tensor", "dual", "L"):
            expect("(")
            if head == "ext":
                e = expr()
                expect(",")
                i = number()
                expect(")")
                return exterior_power(e, i)
            if head == "tensor":
                a = expr()
                expect(",")
                b = expr()
                expect(")")
                return tensor(a, b)
            if head == "dual":
                e = expr()
                expect(")")
                return dual(e)
            w = tokens[pos]
            pos += 1
            expect(")")
            try:
                weight = Weight.parse(w)
            except ValueError as exc:
                raise ExpressionError(str(exc)) from None
            if weight.rank != builder.preset.rank:
                raise ExpressionError(f"weight {w} does not match rank {builder.preset.rank}")
            return builder.build(weight)
        raise ExpressionError(f"unknown term {head!r}")

    def number():
        nonlocal pos
        tok = tokens[pos] if pos < len(tokens) else ""
        if not tok.isdigit():
            raise ExpressionError(f"expected an integer, got {tok!r}")
        pos += 1
        return int(tok)

    result = expr()
    if pos != len(tokens):
        raise ExpressionError(f"trailing input {' '.join(tokens[pos:])!r}")
    return result


def cmd_chop(source, config):
    """Chop a module given as a representation file or an expression."""
    preset = load_preset(config.preset)
    path = Path(source)
    if path.is_file():
        rep = MatRep.from_text(path.read_text())
        label = str(path)
    else:
        builder = ModuleBuilder(preset, seed=config.seed, budget=config.budget)
        rep = parse_module_expr(source, builder)
        label = source
    if rep.dim > config.budget:
        raise BudgetExceeded(f"module of dimension {rep.dim} > budget {config.budget}")
    factors = chop(rep, config.seed, Limits())
    return {**config.header(), "module": label, **factors.report()}


__all__ = [
    "COUNTEREXAMPLE",
    "ExpressionError",
    "RunConfig",
    "cmd_chop",
    "cmd_classify",
    "cmd_labels",
    "cmd_separate",
    "cmd_table3",
    "fmt_type",
    "format_table",
    "fundamental_types",
    "parse_module_expr",
    "read_config",
]
