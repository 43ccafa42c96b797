"""Propositional formulas over named boolean variables.

Provides evaluation, equivalence checking by exhaustive enumeration,
Tseitin conversion to CNF, and the two textual outputs: DIMACS and the
one-constraint-per-line ``.model`` format.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Iterator

from .errors import FormatError, MissingVariable, TooManyVariables

__all__ = [
    "PropFormula",
    "Var",
    "TRUE",
    "FALSE",
    "NotF",
    "AndF",
    "OrF",
    "Implies",
    "Iff",
    "var",
    "not_",
    "and_",
    "or_",
    "implies",
    "iff",
    "formula_vars",
    "evaluate",
    "evaluate_mask",
    "substitute",
    "equivalent",
    "EQUIV_VAR_BOUND",
    "formula_text",
    "Constraint",
    "ConstraintSet",
    "CnfFormula",
    "tseitin_cnf",
    "write_dimacs",
    "parse_dimacs",
]


class PropFormula:
    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Var(PropFormula):
    name: str

    def __post_init__(self):
        if not self.name:
            raise ValueError("variable names must be nonempty")


@dataclass(frozen=True, slots=True)
class _Const(PropFormula):
    value: bool


TRUE = _Const(True)
FALSE = _Const(False)


@dataclass(frozen=True, slots=True)
class NotF(PropFormula):
    operand: PropFormula


@dataclass(frozen=True, slots=True)
class AndF(PropFormula):
    operands: tuple[PropFormula, ...]


@dataclass(frozen=True, slots=True)
class OrF(PropFormula):
    operands: tuple[PropFormula, ...]


@dataclass(frozen=True, slots=True)
class Implies(PropFormula):
    antecedent: PropFormula
    consequent: PropFormula


@dataclass(frozen=True, slots=True)
class Iff(PropFormula):
    left: PropFormula
    right: PropFormula


# --------------------------------------------------------------------------
# Folding constructors.  Constant subformulas never survive construction,
# which keeps emitted constraints small and makes CNF conversion simpler.


def var(name: str) -> PropFormula:
    return Var(name)


def const(value: bool) -> PropFormula:
    return TRUE if value else FALSE


def not_(f: PropFormula) -> PropFormula:
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    if isinstance(f, NotF):
        return f.operand
    return NotF(f)


def and_(*fs: PropFormula) -> PropFormula:
    flat: list[PropFormula] = []
    for f in fs:
        if f is FALSE:
            return FALSE
        if f is TRUE:
            continue
        if isinstance(f, AndF):
            flat.extend(f.operands)
        else:
            flat.append(f)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return AndF(tuple(flat))


def or_(*fs: PropFormula) -> PropFormula:
    flat: list[PropFormula] = []
    for f in fs:
        if f is TRUE:
            return TRUE
        if f is FALSE:
            continue
        if isinstance(f, OrF):
            flat.extend(f.operands)
        else:
            flat.append(f)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return OrF(tuple(flat))


def implies(a: PropFormula, b: PropFormula) -> PropFormula:
    if a is FALSE or b is TRUE:
        return TRUE
    if a is TRUE:
        return b
    if b is FALSE:
        return not_(a)
    return Implies(a, b)


def iff(a: PropFormula, b: PropFormula) -> PropFormula:
    if a is TRUE:
        return b
    if b is TRUE:
        return a
    if a is FALSE:
        return not_(b)
    if b is FALSE:
        return not_(a)
    if a == b:
        return TRUE
    return Iff(a, b)


# --------------------------------------------------------------------------
# Evaluation


def formula_vars(f: PropFormula) -> list[str]:
    """Variable names in first-occurrence order."""
    seen: dict[str, None] = {}

    def walk(node: PropFormula) -> None:
        if isinstance(node, Var):
            seen.setdefault(node.name)
        elif isinstance(node, NotF):
            walk(node.operand)
        elif isinstance(node, (AndF, OrF)):
            for op in node.operands:
                walk(op)
        elif isinstance(node, Implies):
            walk(node.antecedent)
            walk(node.consequent)
        elif isinstance(node, Iff):
            walk(node.left)
            walk(node.right)

    walk(f)
    return list(seen)


def evaluate(f: PropFormula, assignment: dict[str, bool]) -> bool:
    """Standard boolean semantics; the assignment must cover every variable."""
    if isinstance(f, Var):
        try:
            return assignment[f.name]
        except KeyError:
            raise MissingVariable(f.name) from None
    if isinstance(f, _Const):
        return f.value
    if isinstance(f, NotF):
        return not evaluate(f.operand, assignment)
    if isinstance(f, AndF):
        return all(evaluate(op, assignment) for op in f.operands)
    if isinstance(f, OrF):
        return any(evaluate(op, assignment) for op in f.operands)
    if isinstance(f, Implies):
        return (not evaluate(f.antecedent, assignment)) or evaluate(f.consequent, assignment)
    if isinstance(f, Iff):
        return evaluate(f.left, assignment) == evaluate(f.right, assignment)
    raise TypeError(f"not a formula node: {f!r}")


def evaluate_mask(f: PropFormula, masks: dict[str, int], ones: int) -> int:
    """Evaluate over all assignments at once, one bit per assignment.

    ``masks`` maps each variable to its truth pattern; ``ones`` is the
    all-assignments mask.  Bit k of the result is the verdict under
    assignment k.
    """
    if isinstance(f, Var):
        try:
            return masks[f.name]
        except KeyError:
            raise MissingVariable(f.name) from None
    if isinstance(f, _Const):
        return ones if f.value else 0
    if isinstance(f, NotF):
        return ones ^ evaluate_mask(f.operand, masks, ones)
    if isinstance(f, AndF):
        acc = ones
        for op in f.operands:
            acc &= evaluate_mask(op, masks, ones)
            if acc == 0:
                break
        return acc
    if isinstance(f, OrF):
        acc = 0
        for op in f.operands:
            acc |= evaluate_mask(op, masks, ones)
            if acc == ones:
                break
        return acc
    if isinstance(f, Implies):
        return (ones ^ evaluate_mask(f.antecedent, masks, ones)) | evaluate_mask(
            f.consequent, masks, ones
        )
    if isinstance(f, Iff):
        return ones ^ evaluate_mask(f.left, masks, ones) ^ evaluate_mask(f.right, masks, ones)
    raise TypeError(f"not a formula node: {f!r}")


def assignment_masks(names: Iterable[str]) -> tuple[dict[str, int], int]:
    """Truth-pattern masks enumerating all assignments over ``names``.

    Bit k of the mask for the i-th variable is ``(k >> i) & 1``.
    """
    names = list(names)
    width = 1 << len(names)
    ones = (1 << width) - 1
    masks: dict[str, int] = {}
    for i, name in enumerate(names):
        period = 1 << (i + 1)
        pattern = ((1 << (1 << i)) - 1) << (1 << i)  # one period: zeros, then ones
        filled = period
        while filled < width:
            pattern |= pattern << filled
            filled <<= 1
        masks[name] = pattern & ones
    return masks, ones


def substitute(f: PropFormula, values: dict[str, bool]) -> PropFormula:
    """Replace variables by constants and fold."""
    if isinstance(f, Var):
        if f.name in values:
            return const(values[f.name])
        return f
    if isinstance(f, _Const):
        return f
    if isinstance(f, NotF):
        return not_(substitute(f.operand, values))
    if isinstance(f, AndF):
        return and_(*(substitute(op, values) for op in f.operands))
    if isinstance(f, OrF):
        return or_(*(substitute(op, values) for op in f.operands))
    if isinstance(f, Implies):
        return implies(substitute(f.antecedent, values), substitute(f.consequent, values))
    if isinstance(f, Iff):
        return iff(substitute(f.left, values), substitute(f.right, values))
    raise TypeError(f"not a formula node: {f!r}")


EQUIV_VAR_BOUND = 24


def equivalent(f: PropFormula, g: PropFormula) -> bool:
    """True iff ``f`` and ``g`` agree on every total assignment over the
    union of their variables.  Raises :class:`TooManyVariables` past the
    enumeration bound of 24 variables."""
    names: dict[str, None] = {}
    for name in formula_vars(f):
        names.setdefault(name)
    for name in formula_vars(g):
        names.setdefault(name)
    if len(names) > EQUIV_VAR_BOUND:
        raise TooManyVariables(len(names), EQUIV_VAR_BOUND)
    masks, ones = assignment_masks(names)
    return evaluate_mask(f, masks, ones) == evaluate_mask(g, masks, ones)


# --------------------------------------------------------------------------
# Textual constraint format


def formula_text(f: PropFormula) -> str:
    """Render with operators ``!``, ``&``, ``|``, ``=>``, ``<=>`` and the
    constants ``1``/``0``; parenthesized by precedence."""
    # precedence levels: <=> 1, => 2, | 3, & 4, ! 5
    def render(node: PropFormula, parent: int) -> str:
        if isinstance(node, Var):
            return node.name
        if isinstance(node, _Const):
            return "1" if node.value else "0"
        if isinstance(node, NotF):
            return "!" + render(node.operand, 5)
        if isinstance(node, AndF):
            text = " & ".join(render(op, 4) for op in node.operands)
            return f"({text})" if parent > 4 else text
        if isinstance(node, OrF):
            text = " | ".join(render(op, 3) for op in node.operands)
            return f"({text})" if parent > 3 else text
        if isinstance(node, Implies):
            text = f"{render(node.antecedent, 3)} => {render(node.consequent, 2)}"
            return f"({text})" if parent > 2 else text
        if isinstance(node, Iff):
            text = f"{render(node.left, 2)} <=> {render(node.right, 2)}"
            return f"({text})" if parent > 1 else text
        raise TypeError(f"not a formula node: {node!r}")

    return render(f, 0)


@dataclass(frozen=True)
class Constraint:
    formula: PropFormula
    provenance: str  # "<item-or-choice>:<rule>"


@dataclass
class ConstraintSet:
    """Ordered constraints whose semantics is their conjunction."""

    constraints: list[Constraint] = field(default_factory=list)
    variable_order: list[str] = field(default_factory=list)

    def add(self, formula: PropFormula, provenance: str) -> None:
        self.constraints.append(Constraint(formula, provenance))

    def conjunction(self) -> PropFormula:
        return and_(*(c.formula for c in self.constraints))

    def __iter__(self) -> Iterator[Constraint]:
        return iter(self.constraints)

    def __len__(self) -> int:
        return len(self.constraints)

    def model_text(self) -> str:
        lines = [
            f"{formula_text(c.formula)}  # {c.provenance}" for c in self.constraints
        ]
        return "".join(line + "\n" for line in lines)


# --------------------------------------------------------------------------
# CNF


@dataclass
class CnfFormula:
    num_vars: int
    clauses: list[list[int]]
    var_map: dict[str, int]  # name -> positive index; original variables first
    aux_definitions: dict[int, PropFormula] = field(default_factory=dict)

    def index_to_name(self) -> dict[int, str]:
        return {idx: name for name, idx in self.var_map.items()}

    def satisfied_by(self, assignment: dict[int, bool]) -> bool:
        return all(
            any(assignment[abs(lit)] == (lit > 0) for lit in clause) for clause in self.clauses
        )


def tseitin_cnf(f: PropFormula, var_order: Iterable[str] | None = None) -> CnfFormula:
    """Convert to CNF with one auxiliary variable per compound subformula.

    The conversion preserves per-assignment verdicts: extending any total
    assignment of the original variables by the (unique) induced auxiliary
    values satisfies the clauses iff the formula holds.  Auxiliary variables
    are named ``__aux<k>`` and listed after the originals in ``var_map``.
    """
    order = list(var_order) if var_order is not None else formula_vars(f)
    var_map: dict[str, int] = {}
    for name in order:
        if name not in var_map:
            var_map[name] = len(var_map) + 1
    for name in formula_vars(f):
        if name not in var_map:
            var_map[name] = len(var_map) + 1

    clauses: list[list[int]] = []
    aux_definitions: dict[int, PropFormula] = {}
    counter = [len(var_map)]
    cache: dict[PropFormula, int] = {}

    def add(clause: list[int]) -> None:
        # Tautological clauses carry no information and would violate the
        # no-complementary-literals invariant.
        clause = list(dict.fromkeys(clause))
        if any(-lit in clause for lit in clause):
            return
        clauses.append(clause)

    def fresh(node: PropFormula) -> int:
        counter[0] += 1
        idx = counter[0]
        var_map[f"__aux{len(aux_definitions)}"] = idx
        aux_definitions[idx] = node
        return idx

    def literal(node: PropFormula) -> int:
        # Returns a literal equisatisfiable with the node, defining auxiliary
        # variables (with both polarities) for compound nodes.
        if isinstance(node, Var):
            return var_map[node.name]
        if isinstance(node, NotF):
            return -literal(node.operand)
        if node in cache:
            return cache[node]
        if isinstance(node, AndF):
            lits = [literal(op) for op in node.operands]
            g = fresh(node)
            for lit in lits:
                add([-g, lit])
            add([g] + [-lit for lit in lits])
        elif isinstance(node, OrF):
            lits = [literal(op) for op in node.operands]
            g = fresh(node)
            for lit in lits:
                add([-lit, g])
            add([-g] + lits)
        elif isinstance(node, Implies):
            a = literal(node.antecedent)
            b = literal(node.consequent)
            g = fresh(node)
            add([-g, -a, b])
            add([g, a])
            add([g, -b])
        elif isinstance(node, Iff):
            a = literal(node.left)
            b = literal(node.right)
            g = fresh(node)
            add([-g, -a, b])
            add([-g, a, -b])
            add([g, a, b])
            add([g, -a, -b])
        else:
            raise TypeError(f"not a formula node: {node!r}")
        cache[node] = g
        return g

    if f is TRUE:
        pass
    elif f is FALSE:
        clauses.append([])
    else:
        clauses.append([literal(f)])

    return CnfFormula(
        num_vars=counter[0],
        clauses=clauses,
        var_map=var_map,
        aux_definitions=aux_definitions,
    )


def write_dimacs(cnf: CnfFormula, sink: IO[bytes]) -> None:
    """Emit DIMACS: name comments, the ``p cnf`` header, one clause per line.

    Byte-deterministic; LF endings, single spaces.
    """
    out: list[str] = []
    for name, idx in cnf.var_map.items():
        out.append(f"c {idx} {name}")
    out.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    for clause in cnf.clauses:
        out.append(" ".join(str(lit) for lit in clause + [0]))
    sink.write(("\n".join(out) + "\n").encode("utf-8"))


def parse_dimacs(source: IO[bytes]) -> CnfFormula:
    """Inverse of :func:`write_dimacs` up to clause order."""
    var_map: dict[str, int] = {}
    clauses: list[list[int]] = []
    num_vars: int | None = None
    declared_clauses = 0
    for lineno, raw in enumerate(source.read().decode("utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split(maxsplit=2)
            if len(parts) == 3 and parts[1].isdigit():
                var_map[parts[2]] = int(parts[1])
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise FormatError("malformed DIMACS header", lineno)
            try:
                num_vars = int(parts[2])
                declared_clauses = int(parts[3])
            except ValueError:
                raise FormatError("malformed DIMACS header", lineno) from None
            continue
        if num_vars is None:
            raise FormatError("clause before DIMACS header", lineno)
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError:
            raise FormatError("malformed clause line", lineno) from None
        if not lits or lits[-1] != 0:
            raise FormatError("clause line does not end with 0", lineno)
        body = lits[:-1]
        if any(lit == 0 for lit in body):
            raise FormatError("literal 0 inside clause", lineno)
        if any(abs(lit) > num_vars for lit in body):
            raise FormatError("literal exceeds declared variable count", lineno)
        clauses.append(body)
    if num_vars is None:
        raise FormatError("missing DIMACS header", 1)
    if len(clauses) != declared_clauses:
        raise FormatError(
            f"declared {declared_clauses} clauses, found {len(clauses)}", 1
        )
    return CnfFormula(num_vars=num_vars, clauses=clauses, var_map=var_map)
