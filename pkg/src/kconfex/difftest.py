"""Differential comparison of the translated formula against a configurator.

For a small model the harness enumerates every configuration, asks an oracle
(the builtin reference configurator by default) for a validity verdict per
configuration, evaluates the translated conjunction on the boolean image of
each configuration, and reports disagreements.  Disagreements explained by
the documented select inaccuracy (the configurator lets a select force an
option past its dependencies) are classified KNOWN-LIMITATION; everything
else is a FAILURE.
"""

from __future__ import annotations

import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .encode import collect_numeric_values, translate, variable_order
from .errors import KconfexError, TooManyOptions
from .kconfig import KconfigModel, OptionType, parse_model, validate_model
from .oracle import repair
from .prop import ConstraintSet, PropFormula, and_, evaluate, not_, or_, var
from .tri import Configuration, Tri

__all__ = [
    "DEFAULT_MAX_OPTIONS",
    "TableRow",
    "TruthTable",
    "Mismatch",
    "TestReport",
    "CorpusReport",
    "builtin_oracle",
    "enumerate_configs",
    "embed",
    "ground_truth",
    "check_model",
    "truth_table_formula",
    "run_corpus",
    "CorpusOptions",
    "generate_model_text",
]

DEFAULT_MAX_OPTIONS = 10

# An oracle maps (model, configuration) to (valid, select_override_fired).
Oracle = Callable[[KconfigModel, Configuration], tuple[bool, bool]]


def builtin_oracle(model: KconfigModel, cfg: Configuration) -> tuple[bool, bool]:
    outcome = repair(model, cfg)
    return (not outcome.changed, outcome.select_override_fired)


# --------------------------------------------------------------------------
# Enumeration and embedding


def _enumerate(
    model: KconfigModel, max_options: int
) -> tuple[list[Configuration], list[str]]:
    if len(model.items) > max_options:
        raise TooManyOptions(len(model.items), max_options)
    dom = collect_numeric_values(model)
    names: list[str] = []
    axes: list[list] = []
    notes: list[str] = []
    for item in model.items:
        if item.type is OptionType.BOOL:
            names.append(item.name)
            axes.append([Tri.N, Tri.Y])
        elif item.type is OptionType.TRISTATE:
            names.append(item.name)
            axes.append([Tri.N, Tri.M, Tri.Y])
        else:
            domain = dom.domain(item.name)
            if domain:
                names.append(item.name)
                axes.append(list(domain))
            else:
                notes.append(f"{item.name}: no known values, skipped in enumeration")
    configs = [dict(zip(names, combo)) for combo in itertools.product(*axes)]
    return configs, notes


def enumerate_configs(
    model: KconfigModel, max_options: int = DEFAULT_MAX_OPTIONS
) -> list[Configuration]:
    """All configurations of a small model, in deterministic order.

    Options enumerate in declaration order, the last declared option varying
    fastest; bool options range over n,y, tristate over n,m,y, and valued
    options over their harvested values.  Valued options without any known
    value are skipped (the check report carries a note for them).
    """
    return _enumerate(model, max_options)[0]


def embed(model: KconfigModel, cfg: Configuration) -> dict[str, bool]:
    """Boolean image of a configuration over the translated variables."""
    dom = collect_numeric_values(model)
    out: dict[str, bool] = {}
    for item in model.items:
        if item.is_boolish:
            value = cfg.get(item.name, Tri.N)
            out[item.name] = value is Tri.Y
            out[item.name + "_MODULE"] = value is Tri.M
        else:
            value = cfg.get(item.name)
            for known in dom.domain(item.name):
                out[f"{item.name}_EQ_{known}"] = value == known
    return out


# --------------------------------------------------------------------------
# Truth tables and reports


@dataclass(frozen=True)
class TableRow:
    cfg: Configuration
    valid: bool
    select_override: bool


@dataclass
class TruthTable:
    model: KconfigModel
    rows: list[TableRow]
    notes: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Mismatch:
    cfg: Configuration
    oracle_verdict: bool
    formula_verdict: bool
    classification: str  # "FAILURE" | "KNOWN-LIMITATION"
    failed_constraints: tuple[str, ...] = ()

    def describe(self) -> str:
        parts = []
        for name, value in self.cfg.items():
            if isinstance(value, Tri):
                parts.append(f"{name}={value.label}")
            else:
                parts.append(f"{name}={value!r}" if value is not None else f"{name}=?")
        where = ", ".join(parts) or "<empty>"
        text = (
            f"[{self.classification}] {{{where}}}: "
            f"oracle={'valid' if self.oracle_verdict else 'invalid'} "
            f"formula={'valid' if self.formula_verdict else 'invalid'}"
        )
        if self.failed_constraints:
            text += " violates " + "; ".join(self.failed_constraints)
        return text


@dataclass
class TestReport:
    name: str
    option_count: int
    config_count: int
    mismatches: list[Mismatch]
    millis: float
    notes: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def failures(self) -> list[Mismatch]:
        return [m for m in self.mismatches if m.classification == "FAILURE"]

    @property
    def known_limitations(self) -> list[Mismatch]:
        return [m for m in self.mismatches if m.classification == "KNOWN-LIMITATION"]

    @property
    def passed(self) -> bool:
        return self.error is None and not self.failures

    @property
    def clean(self) -> bool:
        return self.error is None and not self.mismatches


def ground_truth(
    model: KconfigModel,
    oracle: Oracle = builtin_oracle,
    max_options: int = DEFAULT_MAX_OPTIONS,
) -> TruthTable:
    """One oracle verdict per enumerated configuration."""
    configs, notes = _enumerate(model, max_options)
    rows = []
    for cfg in configs:
        valid, override = oracle(model, cfg)
        rows.append(TableRow(cfg, valid, override))
    return TruthTable(model, rows, notes)


def check_model(
    model: KconfigModel,
    oracle: Oracle = builtin_oracle,
    constraints: ConstraintSet | None = None,
    max_options: int = DEFAULT_MAX_OPTIONS,
    name: str | None = None,
) -> TestReport:
    """Compare the translated conjunction against the oracle row by row."""
    started = time.perf_counter()
    if constraints is None:
        constraints = translate(model)
    table = ground_truth(model, oracle, max_options)
    conjunction = constraints.conjunction()
    mismatches: list[Mismatch] = []
    for row in table.rows:
        assignment = embed(model, row.cfg)
        formula_verdict = evaluate(conjunction, assignment)
        if formula_verdict == row.valid:
            continue
        if row.valid and not formula_verdict and row.select_override:
            classification = "KNOWN-LIMITATION"
        else:
            classification = "FAILURE"
        failed = tuple(
            c.provenance for c in constraints if not evaluate(c.formula, assignment)
        )
        mismatches.append(
            Mismatch(row.cfg, row.valid, formula_verdict, classification, failed)
        )
    millis = (time.perf_counter() - started) * 1000.0
    return TestReport(
        name=name or model.source_name,
        option_count=len(model.items),
        config_count=len(table.rows),
        mismatches=mismatches,
        millis=millis,
        notes=table.notes,
    )


def truth_table_formula(table: TruthTable) -> PropFormula:
    """Disjunction over the valid rows of the table, each row rendered as the
    conjunction of its variable literals."""
    model = table.model
    order = variable_order(model, collect_numeric_values(model))
    rows = []
    for row in table.rows:
        if not row.valid:
            continue
        assignment = embed(model, row.cfg)
        rows.append(
            and_(*(var(n) if assignment[n] else not_(var(n)) for n in order))
        )
    return or_(*rows)


# --------------------------------------------------------------------------
# Corpus runs


@dataclass
class CorpusOptions:
    max_options: int = DEFAULT_MAX_OPTIONS
    jobs: int = 1
    generated: int = 0
    seed: int = 0


@dataclass
class CorpusReport:
    reports: list[TestReport]
    seed: int = 0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def render_text(self) -> str:
        lines = []
        for r in sorted(self.reports, key=lambda r: r.name):
            status = "ERROR" if r.error else ("PASS" if r.passed else "FAIL")
            line = (
                f"file={r.name} options={r.option_count} configs={r.config_count} "
                f"failures={len(r.failures)} known_limits={len(r.known_limitations)} "
                f"millis={r.millis:.1f} status={status}"
            )
            if r.error:
                line += f" error={r.error!r}"
            lines.append(line)
            for m in r.mismatches:
                lines.append("  " + m.describe())
            for note in r.notes:
                lines.append(f"  note: {note}")
        total_fail = sum(1 for r in self.reports if not r.passed)
        total_err = sum(1 for r in self.reports if r.error)
        lines.append(
            f"corpus files={len(self.reports)} failing={total_fail} errors={total_err} "
            f"seed={self.seed} status={'PASS' if self.passed else 'FAIL'}"
        )
        return "".join(line + "\n" for line in lines)


def _check_source(args: tuple[str, str, int]) -> TestReport:
    name, text, max_options = args
    try:
        model = parse_model(text, name)
        diagnostics = validate_model(model)
        errors = [d for d in diagnostics if d.severity == "error"]
        if errors:
            raise KconfexError("; ".join(str(d) for d in errors))
        return check_model(model, max_options=max_options, name=name)
    except KconfexError as exc:
        return TestReport(
            name=name,
            option_count=0,
            config_count=0,
            mismatches=[],
            millis=0.0,
            error=str(exc),
        )


def run_corpus(directory: str | Path, options: CorpusOptions | None = None) -> CorpusReport:
    """Check every ``.kconfig`` file in a directory, plus optional generated
    models; per-file errors are recorded, never fatal."""
    options = options or CorpusOptions()
    directory = Path(directory)
    jobs: list[tuple[str, str, int]] = []
    for path in sorted(directory.glob("*.kconfig")):
        jobs.append((path.name, path.read_text(encoding="utf-8"), options.max_options))
    for i in range(options.generated):
        text = generate_model_text(options.seed + i)
        jobs.append((f"generated[seed={options.seed + i}]", text, options.max_options))

    if options.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            reports = list(pool.map(_check_source, jobs))
    else:
        reports = [_check_source(job) for job in jobs]
    reports.sort(key=lambda r: r.name)
    return CorpusReport(reports, seed=options.seed)


# --------------------------------------------------------------------------
# Seeded model generation


def _gen_expr(
    rng: random.Random, pool: list[tuple[str, OptionType]], depth: int
) -> tuple[str, set[str]]:
    """Random condition text over the pool, plus the symbols it references."""
    if depth <= 0 or not pool or rng.random() < 0.4:
        name, opt_type = rng.choice(pool)
        roll = rng.random()
        if opt_type is OptionType.TRISTATE and roll < 0.3:
            return f"{name}='{rng.choice(['n', 'm', 'y'])}'", {name}
        if roll < 0.45:
            return f"!{name}", {name}
        return name, {name}
    op = rng.choice(["&&", "||"])
    left, ls = _gen_expr(rng, pool, depth - 1)
    right, rs = _gen_expr(rng, pool, depth - 1)
    return f"({left} {op} {right})", ls | rs


def generate_model_text(seed: int) -> str:
    """A small well-formed model mixing bool/tristate options, dependencies,
    defaults, selects, and (sometimes) a choice block.

    Deterministic in the seed.  A reads-graph is tracked while emitting so
    that no recursive value dependency is ever produced; repair therefore
    always converges on the generated models.
    """
    rng = random.Random(seed)
    lines: list[str] = [f"# generated model, seed={seed}"]
    declared: list[tuple[str, OptionType]] = []
    reads: dict[str, set[str]] = {}

    def reaches(src: str, dst: str) -> bool:
        seen = set()
        work = [src]
        while work:
            node = work.pop()
            if node == dst:
                return True
            if node in seen:
                continue
            seen.add(node)
            work.extend(reads.get(node, ()))
        return False

    count = rng.randint(2, 6)
    with_choice = rng.random() < 0.4 and count >= 3
    choice_size = rng.randint(2, 3) if with_choice else 0
    plain = count - choice_size
    use_modules = rng.random() < 0.25
    modules_name = "MODULES" if use_modules else None

    def emit_option(index: int, member: bool, choice_reads: set[str]) -> None:
        name = f"O{index}"
        opt_type = OptionType.TRISTATE if rng.random() < 0.45 else OptionType.BOOL
        reads[name] = set(choice_reads)
        if modules_name and opt_type is OptionType.TRISTATE:
            reads[name].add(modules_name)
        lines.append(f"config {name}")
        prompted = rng.random() < 0.85 if member else rng.random() < 0.7
        if prompted:
            cond = ""
            if declared and rng.random() < 0.25:
                text, syms = _gen_expr(rng, declared, 1)
                cond = f" if {text}"
                reads[name] |= syms
            lines.append(f'\t{opt_type.value} "{name.lower()}"{cond}')
        else:
            lines.append(f"\t{opt_type.value}")
        if declared and rng.random() < 0.4:
            text, syms = _gen_expr(rng, declared, 2)
            lines.append(f"\tdepends on {text}")
            reads[name] |= syms
        if not prompted or rng.random() < 0.3:
            for _ in range(rng.randint(1, 2)):
                if declared and rng.random() < 0.4:
                    value = rng.choice(declared)[0]
                    reads[name].add(value)
                else:
                    value = rng.choice(
                        ["y", "m", "n"] if opt_type is OptionType.TRISTATE else ["y", "n"]
                    )
                cond = ""
                if declared and rng.random() < 0.3:
                    text, syms = _gen_expr(rng, declared, 1)
                    cond = f" if {text}"
                    reads[name] |= syms
                lines.append(f"\tdefault {value}{cond}")
        if not member and declared and rng.random() < 0.25:
            cond = ""
            cond_syms: set[str] = set()
            if rng.random() < 0.3:
                text, cond_syms = _gen_expr(rng, declared, 1)
                cond = f" if {text}"
            sources = {name} | cond_syms
            targets = [
                t
                for t, tt in declared
                if tt in (OptionType.BOOL, OptionType.TRISTATE)
                and t not in sources
                and not any(reaches(s, t) for s in sources)
            ]
            if targets:
                target = rng.choice(targets)
                lines.append(f"\tselect {target}{cond}")
                reads[target] |= sources
        lines.append("")
        declared.append((name, opt_type))

    index = 0
    if modules_name:
        lines.append(f"config {modules_name}")
        lines.append('\tbool "modules"')
        lines.append("\toption modules")
        lines.append("")
        declared.append((modules_name, OptionType.BOOL))
        reads[modules_name] = set()
    for _ in range(plain):
        emit_option(index, member=False, choice_reads=set())
        index += 1
    if with_choice:
        choice_type = "tristate" if rng.random() < 0.3 else "bool"
        lines.append("choice")
        lines.append(f'\t{choice_type} "pick one"')
        choice_reads: set[str] = set()
        if modules_name and choice_type == "tristate":
            choice_reads.add(modules_name)
        if declared and rng.random() < 0.3:
            text, syms = _gen_expr(rng, declared, 1)
            lines.append(f"\tdepends on {text}")
            choice_reads |= syms
        lines.append("")
        for _ in range(choice_size):
            emit_option(index, member=True, choice_reads=choice_reads)
            index += 1
        lines.append("endchoice")
        lines.append("")
    return "\n".join(lines)
