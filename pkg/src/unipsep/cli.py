"""Command-line entry point: ``python3 -m unipsep <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields
from pathlib import Path

from .harness import (
    RunConfig,
    cmd_chop,
    cmd_classify,
    cmd_labels,
    cmd_separate,
    cmd_table3,
    format_table,
    read_config,
)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", help="sp2, sp4, sp6, sp8 or sp10")
    common.add_argument("--seed", type=lambda s: int(s, 0))
    common.add_argument("--workers", type=int)
    common.add_argument("--budget", type=int, help="largest intermediate module dimension")
    common.add_argument("--saturation", type=int, help="words without a new label before stopping")
    common.add_argument("--out", help="write the JSON report here")
    common.add_argument("--config", help="key=value file; command-line flags take precedence")

    parser = argparse.ArgumentParser(prog="unipsep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="Jordan type and class label of a word")
    p.add_argument("word", nargs="?", default="")
    p = sub.add_parser("table3", parents=[common], help="Jordan types on the tabulated L(lambda)")
    p.add_argument("--weights", nargs="*", help="restrict to these weights")
    sub.add_parser("separate", parents=[common], help="class pairs not separated by any L(varpi_i)")
    p = sub.add_parser("chop", parents=[common], help="composition factors of a module")
    p.add_argument("module", help="representation file or expression such as 'ext(nat,2)'")
    sub.add_parser("labels", parents=[common], help="collect class labels by random search")
    return parser


def resolve_config(args):
    values = {}
    if args.config:
        values.update(read_config(args.config))
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    return RunConfig(**values)


def _emit(report, config, text=None):
    print(text if text is not None else json.dumps(report, indent=1))
    if config.out:
        Path(config.out).write_text(json.dumps(report, indent=1, sort_keys=True) + "\n")


def main(argv=None):
    args = build_parser().parse_args(argv)
    config = resolve_config(args)
    try:
        if args.command == "classify":
            report = cmd_classify(config.preset, args.word)
            _emit(report, config)
        elif args.command == "table3":
            report = cmd_table3(config, args.weights)
            _emit(report, config, format_table(report))
        elif args.command == "separate":
            report = cmd_separate(config)
            lines = [f"{e['label']:<24} {' | '.join(e['types'])}" for e in report["labels"]]
            lines.append(f"saturated: {report['saturated']}  words: {report['words_tried']}")
            lines.append(f"unseparated pairs: {report['unseparated']}")
            _emit(report, config, "\n".join(lines))
        elif args.command == "chop":
            report = cmd_chop(args.module, config)
            _emit(report, config)
        else:
            report = cmd_labels(config)
            _emit(report, config)
    except (ValueError, KeyError, LookupError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if report.get("ok", True) else 1


if __name__ == "__main__":
    sys.exit(main())
