"""Command-line interface.

Exit codes: 0 pass, 1 differential failure, 2 input error, 3 enumeration
bound exceeded.
"""

from __future__ import annotations

import argparse
import sys
import tempfile
from pathlib import Path

from .difftest import (
    CorpusOptions,
    DEFAULT_MAX_OPTIONS,
    builtin_oracle,
    check_model,
    run_corpus,
)
from .encode import translate
from .errors import KconfexError, TooManyOptions
from .kconfig import KconfigModel, parse_model, validate_model
from .oracle import external_conf_oracle
from .prop import tseitin_cnf, write_dimacs

EXIT_PASS = 0
EXIT_DIFF_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_BOUND = 3


def _load_model(path: str) -> KconfigModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise KconfexError(f"cannot read {path}: {exc}") from exc
    model = parse_model(text, Path(path).name)
    diagnostics = validate_model(model)
    for diag in diagnostics:
        print(str(diag), file=sys.stderr)
    if any(d.severity == "error" for d in diagnostics):
        raise KconfexError("validation failed")
    return model


def cmd_translate(args: argparse.Namespace) -> int:
    try:
        model = _load_model(args.file)
        constraints = translate(model)
    except KconfexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    if args.model_out:
        Path(args.model_out).write_text(constraints.model_text(), encoding="utf-8")
    cnf = None
    if args.dimacs:
        cnf = tseitin_cnf(constraints.conjunction(), constraints.variable_order)
        with open(args.dimacs, "wb") as sink:
            write_dimacs(cnf, sink)
    print(f"options: {len(model.items)}")
    print(f"variables: {len(constraints.variable_order)}")
    print(f"constraints: {len(constraints)}")
    if cnf is not None:
        print(f"cnf variables: {cnf.num_vars}")
        print(f"cnf clauses: {len(cnf.clauses)}")
    return EXIT_PASS


def _make_oracle(selector: str, model_file: str):
    if selector == "builtin":
        return builtin_oracle, None
    if selector.startswith("exec:"):
        conf_path = selector[len("exec:") :]
        workdir = tempfile.mkdtemp(prefix="kconfex-conf-")

        def oracle(model, cfg):
            verdict = external_conf_oracle(conf_path, model_file, cfg, workdir, model)
            return verdict, False

        return oracle, workdir
    raise KconfexError(f"unknown oracle {selector!r} (use 'builtin' or 'exec:<path>')")


def cmd_check(args: argparse.Namespace) -> int:
    try:
        model = _load_model(args.file)
        oracle, _ = _make_oracle(args.oracle, args.file)
        report = check_model(model, oracle=oracle, max_options=args.max_options)
    except TooManyOptions as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except KconfexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    for mismatch in report.mismatches:
        print(mismatch.describe())
    for note in report.notes:
        print(f"note: {note}")
    print(
        f"{report.name}: {report.config_count} configurations, "
        f"{len(report.failures)} failures, "
        f"{len(report.known_limitations)} known limitations "
        f"({report.millis:.1f} ms)"
    )
    if report.failures:
        return EXIT_DIFF_FAILURE
    if report.known_limitations:
        print("warning: disagreements limited to the documented select behavior")
    return EXIT_PASS


def cmd_corpus(args: argparse.Namespace) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        print(f"error: {directory} is not a directory", file=sys.stderr)
        return EXIT_INPUT_ERROR
    options = CorpusOptions(
        max_options=args.max_options,
        jobs=args.jobs,
        generated=args.generated,
        seed=args.seed,
    )
    report = run_corpus(directory, options)
    text = report.render_text()
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_PASS if report.passed else EXIT_DIFF_FAILURE


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        model = _load_model(args.file)
        constraints = translate(model)
    except KconfexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    cnf = tseitin_cnf(constraints.conjunction(), constraints.variable_order)
    print(f"options: {len(model.items)}")
    print(f"choices: {len(model.choices)}")
    print(f"constraints: {len(constraints)}")
    print(f"variables: {len(constraints.variable_order)}")
    print(f"cnf variables: {cnf.num_vars}")
    print(f"cnf clauses: {len(cnf.clauses)}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kconfex",
        description="Translate kconfig-subset models to propositional formulas "
        "and differentially test the translation against a reference configurator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="emit .model and/or DIMACS for a file")
    p.add_argument("file")
    p.add_argument("--model", dest="model_out", help="write the textual constraint list here")
    p.add_argument("--dimacs", help="write DIMACS CNF here")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("check", help="differentially test one file")
    p.add_argument("file")
    p.add_argument("--max-options", type=int, default=DEFAULT_MAX_OPTIONS)
    p.add_argument("--oracle", default="builtin", help="'builtin' or 'exec:<conf path>'")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("corpus", help="differentially test a directory of .kconfig files")
    p.add_argument("dir")
    p.add_argument("--max-options", type=int, default=DEFAULT_MAX_OPTIONS)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--generated", type=int, default=0, help="additionally check N seeded generated models")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--report", help="also write the report here")
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("stats", help="print size statistics for a file")
    p.add_argument("file")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except KconfexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
