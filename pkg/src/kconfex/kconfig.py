"""Parser and declaration model for the supported kconfig-language subset.

The subset covers ``config`` entries, ``choice``/``endchoice`` blocks and the
attributes ``bool``/``boolean``/``tristate``/``int``/``hex``/``string``,
``prompt``, ``default``, ``depends on``, ``select``, ``range`` and
``option modules``.  ``help`` blocks are consumed and discarded.  Everything
else (menus, if-blocks, source includes, optional choices, imply) is rejected
with a :class:`~kconfex.errors.ParseError`.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field

from .errors import DuplicateOption, ParseError

__all__ = [
    "OptionType",
    "Expr",
    "Sym",
    "Literal",
    "Not",
    "And",
    "Or",
    "Eq",
    "Neq",
    "Lt",
    "Leq",
    "Gt",
    "Geq",
    "Prompt",
    "Default",
    "Select",
    "Range",
    "ConfigItem",
    "ChoiceBlock",
    "KconfigModel",
    "Diagnostic",
    "parse_model",
    "validate_model",
    "collect_options",
    "pretty_model",
    "expr_text",
    "expr_symbols",
    "TRI_NAMES",
]

TRI_NAMES = ("n", "m", "y")


class OptionType(enum.Enum):
    BOOL = "bool"
    TRISTATE = "tristate"
    INT = "int"
    HEX = "hex"
    STRING = "string"


# --------------------------------------------------------------------------
# Expression AST


class Expr:
    """Base class for condition/value expressions."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Sym(Expr):
    name: str


@dataclass(frozen=True, slots=True)
class Literal(Expr):
    text: str


@dataclass(frozen=True, slots=True)
class Not(Expr):
    operand: Expr


@dataclass(frozen=True, slots=True)
class And(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Or(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class _Cmp(Expr):
    left: Expr
    right: Expr


class Eq(_Cmp):
    __slots__ = ()


class Neq(_Cmp):
    __slots__ = ()


class Lt(_Cmp):
    __slots__ = ()


class Leq(_Cmp):
    __slots__ = ()


class Gt(_Cmp):
    __slots__ = ()


class Geq(_Cmp):
    __slots__ = ()


COMPARISONS = (Eq, Neq, Lt, Leq, Gt, Geq)
ORDERED_COMPARISONS = (Lt, Leq, Gt, Geq)


def expr_symbols(e: Expr | None) -> list[str]:
    """All symbol names referenced by ``e``, left to right, with duplicates."""
    out: list[str] = []

    def walk(node: Expr) -> None:
        if isinstance(node, Sym):
            out.append(node.name)
        elif isinstance(node, Not):
            walk(node.operand)
        elif isinstance(node, (And, Or, _Cmp)):
            walk(node.left)
            walk(node.right)

    if e is not None:
        walk(e)
    return out


_CMP_TOKEN = {Eq: "=", Neq: "!=", Lt: "<", Leq: "<=", Gt: ">", Geq: ">="}


def expr_text(e: Expr) -> str:
    """Render an expression in kconfig concrete syntax."""

    def render(node: Expr, parent_prec: int) -> str:
        if isinstance(node, Sym):
            return node.name
        if isinstance(node, Literal):
            return "'" + node.text.replace("'", "\\'") + "'"
        if isinstance(node, _Cmp):
            return f"{render(node.left, 3)}{_CMP_TOKEN[type(node)]}{render(node.right, 3)}"
        if isinstance(node, Not):
            return "!" + render(node.operand, 3)
        if isinstance(node, And):
            text = f"{render(node.left, 2)} && {render(node.right, 2)}"
            return f"({text})" if parent_prec > 2 else text
        if isinstance(node, Or):
            text = f"{render(node.left, 1)} || {render(node.right, 1)}"
            return f"({text})" if parent_prec > 1 else text
        raise TypeError(f"not an expression node: {node!r}")

    return render(e, 0)


# --------------------------------------------------------------------------
# Declarations


@dataclass(frozen=True, slots=True)
class Prompt:
    text: str
    condition: Expr | None = None


@dataclass(frozen=True, slots=True)
class Default:
    value: Expr
    condition: Expr | None = None


@dataclass(frozen=True, slots=True)
class Select:
    target: str
    condition: Expr | None = None


@dataclass(frozen=True, slots=True)
class Range:
    low: str
    high: str
    condition: Expr | None = None


@dataclass(frozen=True)
class ConfigItem:
    name: str
    type: OptionType
    prompts: tuple[Prompt, ...] = ()
    defaults: tuple[Default, ...] = ()
    depends: Expr | None = None
    selects: tuple[Select, ...] = ()
    ranges: tuple[Range, ...] = ()
    declared_in_choice: int | None = None
    is_modules_switch: bool = False
    line: int = field(default=0, compare=False)

    @property
    def is_boolish(self) -> bool:
        return self.type in (OptionType.BOOL, OptionType.TRISTATE)

    @property
    def is_numeric(self) -> bool:
        return self.type in (OptionType.INT, OptionType.HEX)


@dataclass(frozen=True)
class ChoiceBlock:
    id: int
    type: OptionType
    prompts: tuple[Prompt, ...] = ()
    depends: Expr | None = None
    defaults: tuple[Default, ...] = ()
    members: tuple[str, ...] = ()
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class KconfigModel:
    items: tuple[ConfigItem, ...]
    choices: tuple[ChoiceBlock, ...]
    modules_option: str | None
    source_name: str = field(default="<input>", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_by_name", {it.name: it for it in self.items})

    def item(self, name: str) -> ConfigItem:
        return self._by_name[name]

    def has_option(self, name: str) -> bool:
        return name in self._by_name

    def choice_of(self, item: ConfigItem) -> ChoiceBlock | None:
        if item.declared_in_choice is None:
            return None
        return self.choices[item.declared_in_choice]

    def effective_depends(self, item: ConfigItem) -> Expr | None:
        """Item dependencies with the enclosing choice's dependencies folded in."""
        choice = self.choice_of(item)
        if choice is None or choice.depends is None:
            return item.depends
        if item.depends is None:
            return choice.depends
        return And(item.depends, choice.depends)

    def selects_targeting(self, name: str) -> list[tuple[ConfigItem, Select]]:
        out = []
        for it in self.items:
            for sel in it.selects:
                if sel.target == name:
                    out.append((it, sel))
        return out


# --------------------------------------------------------------------------
# Lexer for expressions and attribute arguments

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<op><=|>=|!=|=|<|>|\(|\)|!|&&|\|\|)
      | (?P<num>-?(?:0[xX][0-9a-fA-F]+|\d+)(?![A-Za-z0-9_]))
      | (?P<ident>[A-Za-z0-9_]+)
      | (?P<str>"(?:[^"\\]|\\.)*"|'(?:[^'\\]|\\.)*')
    )""",
    re.VERBOSE,
)


class _TokenStream:
    def __init__(self, text: str, line: int, source: str):
        self.line = line
        self.source = source
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if not m or m.end() == pos:
                rest = text[pos:].lstrip()
                if not rest:
                    break
                raise ParseError(f"unexpected character {rest[0]!r}", line, pos + 1, source)
            kind = m.lastgroup
            assert kind is not None
            self.tokens.append((kind, m.group(kind), m.start(kind) + 1))
            pos = m.end()
        self.index = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def next(self) -> tuple[str, str, int]:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of line", self.line, 1, self.source)
        self.index += 1
        return tok

    def accept_op(self, op: str) -> bool:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == op:
            self.index += 1
            return True
        return False

    def accept_ident(self, word: str) -> bool:
        tok = self.peek()
        if tok and tok[0] == "ident" and tok[1] == word:
            self.index += 1
            return True
        return False

    def at_end(self) -> bool:
        return self.index >= len(self.tokens)

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        col = tok[2] if tok else 1
        return ParseError(message, self.line, col, self.source)


_ESCAPE_RE = re.compile(r"\\(.)")


def _unquote(text: str) -> str:
    return _ESCAPE_RE.sub(r"\1", text[1:-1])


def _parse_value(ts: _TokenStream) -> Expr:
    kind, text, _ = ts.next()
    if kind == "ident":
        return Sym(text)
    if kind == "num":
        return Literal(text)
    if kind == "str":
        return Literal(_unquote(text))
    raise ts.error(f"expected a symbol, number, or quoted string, got {text!r}")


def _parse_expr(ts: _TokenStream) -> Expr:
    # Precedence: comparisons bind tighter than "!", then "&&", then "||".
    def parse_or() -> Expr:
        e = parse_and()
        while ts.accept_op("||"):
            e = Or(e, parse_and())
        return e

    def parse_and() -> Expr:
        e = parse_not()
        while ts.accept_op("&&"):
            e = And(e, parse_not())
        return e

    def parse_not() -> Expr:
        if ts.accept_op("!"):
            return Not(parse_not())
        return parse_cmp()

    def parse_cmp() -> Expr:
        left = parse_atom()
        tok = ts.peek()
        if tok and tok[0] == "op" and tok[1] in ("=", "!=", "<", "<=", ">", ">="):
            ts.next()
            right = parse_atom()
            cls = {"=": Eq, "!=": Neq, "<": Lt, "<=": Leq, ">": Gt, ">=": Geq}[tok[1]]
            if cls is not Eq and cls is not Neq:
                _check_ordered_operands(ts, left, right)
            if not isinstance(left, (Sym, Literal)) or not isinstance(right, (Sym, Literal)):
                raise ts.error("comparison operands must be symbols or literals")
            return cls(left, right)
        return left

    def parse_atom() -> Expr:
        if ts.accept_op("("):
            e = parse_or()
            if not ts.accept_op(")"):
                raise ts.error("expected ')'")
            return e
        return _parse_value(ts)

    return parse_or()


def _is_number(text: str) -> bool:
    try:
        int(text, 0)
        return True
    except ValueError:
        return False


def _check_ordered_operands(ts: _TokenStream, left: Expr, right: Expr) -> None:
    # <, <=, >, >= require a symbol on one side and a numeric literal on the other.
    sides = (left, right)
    has_sym = any(isinstance(s, Sym) and not _is_number(s.name) for s in sides)
    has_num = any(
        (isinstance(s, Literal) and _is_number(s.text))
        or (isinstance(s, Sym) and _is_number(s.name))
        for s in sides
    )
    if not (has_sym and has_num):
        raise ts.error("ordered comparison needs a symbol and a numeric literal")


def _parse_full_expr(text: str, line: int, source: str) -> Expr:
    ts = _TokenStream(text, line, source)
    e = _parse_expr(ts)
    if not ts.at_end():
        raise ts.error("trailing tokens after expression")
    return e


# --------------------------------------------------------------------------
# Line-oriented parser

_TYPE_KEYWORDS = {
    "bool": OptionType.BOOL,
    "boolean": OptionType.BOOL,
    "tristate": OptionType.TRISTATE,
    "int": OptionType.INT,
    "hex": OptionType.HEX,
    "string": OptionType.STRING,
}

_IDENT_RE = re.compile(r"[A-Za-z0-9_]+$")


class _ItemBuilder:
    def __init__(self, name: str, line: int, choice_id: int | None):
        self.name = name
        self.line = line
        self.choice_id = choice_id
        self.type: OptionType | None = None
        self.prompts: list[Prompt] = []
        self.defaults: list[Default] = []
        self.depends: Expr | None = None
        self.selects: list[Select] = []
        self.ranges: list[Range] = []
        self.is_modules_switch = False

    def add_depends(self, e: Expr) -> None:
        self.depends = e if self.depends is None else And(self.depends, e)

    def build(self, source: str) -> ConfigItem:
        if self.type is None:
            raise ParseError(f"option {self.name} has no type", self.line, 1, source)
        return ConfigItem(
            name=self.name,
            type=self.type,
            prompts=tuple(self.prompts),
            defaults=tuple(self.defaults),
            depends=self.depends,
            selects=tuple(self.selects),
            ranges=tuple(self.ranges),
            declared_in_choice=self.choice_id,
            is_modules_switch=self.is_modules_switch,
            line=self.line,
        )


class _ChoiceBuilder:
    def __init__(self, choice_id: int, line: int):
        self.id = choice_id
        self.line = line
        self.type: OptionType | None = None
        self.prompts: list[Prompt] = []
        self.defaults: list[Default] = []
        self.depends: Expr | None = None
        self.members: list[str] = []

    def add_depends(self, e: Expr) -> None:
        self.depends = e if self.depends is None else And(self.depends, e)

    def build(self, source: str) -> ChoiceBlock:
        if not self.members:
            raise ParseError("choice has no members", self.line, 1, source)
        return ChoiceBlock(
            id=self.id,
            type=self.type or OptionType.BOOL,
            prompts=tuple(self.prompts),
            depends=self.depends,
            defaults=tuple(self.defaults),
            members=tuple(self.members),
            line=self.line,
        )


def _indent_width(line: str) -> int:
    expanded = line.expandtabs()
    return len(expanded) - len(expanded.lstrip())


class _Parser:
    def __init__(self, source_text: str, source_name: str):
        self.lines = source_text.splitlines()
        self.source = source_name
        self.pos = 0
        self.items: list[ConfigItem] = []
        self.choices: list[ChoiceBlock] = []
        self.names: set[str] = set()
        self.modules_option: str | None = None

    def parse(self) -> KconfigModel:
        current: _ItemBuilder | None = None
        choice: _ChoiceBuilder | None = None

        while self.pos < len(self.lines):
            lineno = self.pos + 1
            raw = self.lines[self.pos]
            self.pos += 1
            stripped = raw.strip()
            if not stripped or stripped.startswith("#"):
                continue

            ts = _TokenStream(stripped, lineno, self.source)
            kind, word, col = ts.next()
            if kind != "ident":
                raise ParseError(f"unexpected token {word!r}", lineno, col, self.source)

            if word == "config":
                if current is not None:
                    self._finish_item(current, choice)
                name_kind, name, ncol = ts.next()
                if name_kind != "ident" or not _IDENT_RE.match(name):
                    raise ParseError("expected option name after 'config'", lineno, ncol, self.source)
                if not ts.at_end():
                    raise ts.error("trailing tokens after option name")
                if name in self.names:
                    raise DuplicateOption(f"option {name} declared twice", lineno, ncol, self.source)
                if name in TRI_NAMES:
                    raise ParseError(f"option name {name!r} is a reserved constant", lineno, ncol, self.source)
                self.names.add(name)
                current = _ItemBuilder(name, lineno, choice.id if choice else None)
                if choice is not None:
                    choice.members.append(name)
                continue

            if word == "choice":
                if choice is not None:
                    raise ParseError("nested choice blocks are not supported", lineno, col, self.source)
                if current is not None:
                    self._finish_item(current, None)
                    current = None
                if not ts.at_end():
                    raise ts.error("trailing tokens after 'choice'")
                choice = _ChoiceBuilder(len(self.choices), lineno)
                continue

            if word == "endchoice":
                if choice is None:
                    raise ParseError("'endchoice' outside a choice block", lineno, col, self.source)
                if current is not None:
                    self._finish_item(current, choice)
                    current = None
                self.choices.append(choice.build(self.source))
                choice = None
                continue

            # Attribute lines attach to the innermost open declaration.
            target: _ItemBuilder | _ChoiceBuilder | None = current
            if target is None:
                target = choice
            if target is None:
                raise ParseError(f"{word!r} outside any declaration", lineno, col, self.source)
            self._parse_attr(word, ts, target, lineno, raw)

        if current is not None:
            if choice is not None:
                raise ParseError("choice block not closed before end of file", choice.line, 1, self.source)
            self._finish_item(current, None)
        if choice is not None:
            raise ParseError("choice block not closed before end of file", choice.line, 1, self.source)

        return KconfigModel(
            items=tuple(self.items),
            choices=tuple(self.choices),
            modules_option=self.modules_option,
            source_name=self.source,
        )

    def _finish_item(self, builder: _ItemBuilder, choice: _ChoiceBuilder | None) -> None:
        item = builder.build(self.source)
        self.items.append(item)
        if item.is_modules_switch:
            if self.modules_option is not None:
                raise ParseError(
                    f"second 'option modules' switch {item.name} (already on {self.modules_option})",
                    builder.line,
                    1,
                    self.source,
                )
            self.modules_option = item.name
        if choice is not None and builder.type is not None and choice.type is None:
            # A choice without its own type line takes the type of its members.
            if builder.type in (OptionType.BOOL, OptionType.TRISTATE):
                choice.type = builder.type

    def _parse_attr(
        self,
        word: str,
        ts: _TokenStream,
        target: _ItemBuilder | _ChoiceBuilder,
        lineno: int,
        raw: str,
    ) -> None:
        if word in _TYPE_KEYWORDS:
            decl_type = _TYPE_KEYWORDS[word]
            if isinstance(target, _ChoiceBuilder) and decl_type not in (
                OptionType.BOOL,
                OptionType.TRISTATE,
            ):
                raise ParseError(f"choice cannot have type {word}", lineno, 1, self.source)
            if target.type is not None and target.type is not decl_type:
                raise ParseError(
                    f"conflicting type {word} (already {target.type.value})", lineno, 1, self.source
                )
            target.type = decl_type
            tok = ts.peek()
            if tok and tok[0] == "str":
                ts.next()
                cond = self._optional_if(ts)
                target.prompts.append(Prompt(_unquote(tok[1]), cond))
            self._expect_end(ts)
            return

        if word == "prompt":
            kind, text, pcol = ts.next()
            if kind != "str":
                raise ParseError("expected quoted prompt text", lineno, pcol, self.source)
            cond = self._optional_if(ts)
            self._expect_end(ts)
            target.prompts.append(Prompt(_unquote(text), cond))
            return

        if word == "default":
            value = _parse_value(ts)
            cond = self._optional_if(ts)
            self._expect_end(ts)
            target.defaults.append(Default(value, cond))
            return

        if word == "depends":
            if not ts.accept_ident("on"):
                raise ts.error("expected 'on' after 'depends'")
            e = _parse_expr(ts)
            self._expect_end(ts)
            target.add_depends(e)
            return

        if word == "select":
            if isinstance(target, _ChoiceBuilder):
                raise ParseError("'select' is not valid on a choice", lineno, 1, self.source)
            kind, name, scol = ts.next()
            if kind != "ident":
                raise ParseError("expected option name after 'select'", lineno, scol, self.source)
            cond = self._optional_if(ts)
            self._expect_end(ts)
            target.selects.append(Select(name, cond))
            return

        if word == "range":
            if isinstance(target, _ChoiceBuilder):
                raise ParseError("'range' is not valid on a choice", lineno, 1, self.source)
            low = _parse_value(ts)
            high = _parse_value(ts)
            for bound in (low, high):
                if not isinstance(bound, Literal) or not _is_number(bound.text):
                    raise ParseError(
                        "range bounds must be numeric literals", lineno, 1, self.source
                    )
            cond = self._optional_if(ts)
            self._expect_end(ts)
            target.ranges.append(Range(low.text, high.text, cond))
            return

        if word == "option":
            if not ts.accept_ident("modules"):
                raise ts.error("only 'option modules' is supported")
            self._expect_end(ts)
            if isinstance(target, _ChoiceBuilder):
                raise ParseError("'option modules' is not valid on a choice", lineno, 1, self.source)
            target.is_modules_switch = True
            return

        if word == "help":
            self._expect_end(ts)
            self._skip_help_block(raw)
            return

        raise ParseError(f"unsupported construct {word!r}", lineno, 1, self.source)

    def _optional_if(self, ts: _TokenStream) -> Expr | None:
        if ts.accept_ident("if"):
            return _parse_expr(ts)
        return None

    def _expect_end(self, ts: _TokenStream) -> None:
        if not ts.at_end():
            raise ts.error("trailing tokens")

    def _skip_help_block(self, help_line: str) -> None:
        # The help body is every following line indented deeper than the
        # 'help' keyword itself; blank lines do not end the block.
        keyword_indent = _indent_width(help_line)
        body_indent: int | None = None
        while self.pos < len(self.lines):
            line = self.lines[self.pos]
            if not line.strip():
                self.pos += 1
                continue
            indent = _indent_width(line)
            if body_indent is None:
                if indent <= keyword_indent:
                    return
                body_indent = indent
            if indent < body_indent:
                return
            self.pos += 1


def parse_model(source_text: str, source_name: str = "<input>") -> KconfigModel:
    """Parse kconfig subset text into a :class:`KconfigModel`.

    Raises :class:`ParseError` for constructs outside the subset and
    :class:`DuplicateOption` for repeated option names.
    """
    return _Parser(source_text, source_name).parse()


# --------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    option: str | None = None

    def __str__(self) -> str:
        where = f" [{self.option}]" if self.option else ""
        return f"{self.severity}{where}: {self.message}"


def _numeric_literal_ok(text: str, opt_type: OptionType) -> bool:
    try:
        int(text, 16 if opt_type is OptionType.HEX else 10)
        return True
    except ValueError:
        return False


def validate_model(model: KconfigModel) -> list[Diagnostic]:
    """Check type rules and report undeclared symbols.

    Returns diagnostics; errors indicate the model is outside the supported
    semantics, warnings flag symbols that will be treated as constants.
    """
    out: list[Diagnostic] = []
    warned: set[str] = set()

    def check_expr(e: Expr | None, owner: str) -> None:
        if e is None:
            return
        for name in expr_symbols(e):
            if name in TRI_NAMES or _is_number(name):
                continue
            if not model.has_option(name) and name not in warned:
                warned.add(name)
                out.append(
                    Diagnostic(
                        "warning",
                        f"symbol {name} is never declared and is treated as a constant",
                        owner,
                    )
                )
        for node in _walk(e):
            if isinstance(node, ORDERED_COMPARISONS):
                for side in (node.left, node.right):
                    if isinstance(side, Sym) and model.has_option(side.name):
                        if not model.item(side.name).is_numeric:
                            out.append(
                                Diagnostic(
                                    "error",
                                    f"ordered comparison over non-numeric option {side.name}",
                                    owner,
                                )
                            )

    def _walk(e: Expr):
        yield e
        if isinstance(e, Not):
            yield from _walk(e.operand)
        elif isinstance(e, (And, Or, _Cmp)):
            yield from _walk(e.left)
            yield from _walk(e.right)

    derived_names = set()
    for it in model.items:
        derived_names.add(it.name + "_MODULE")

    for it in model.items:
        if it.name in derived_names:
            out.append(
                Diagnostic("error", f"option name {it.name} collides with a derived variable", it.name)
            )
        if it.is_boolish and it.ranges:
            out.append(Diagnostic("error", "range on a bool/tristate option", it.name))
        if not it.is_boolish and it.selects:
            out.append(Diagnostic("error", "select on a non-boolean option", it.name))
        if it.is_numeric:
            for d in it.defaults:
                if not isinstance(d.value, Literal) or not _numeric_literal_ok(d.value.text, it.type):
                    out.append(
                        Diagnostic("error", "numeric option default must be a numeric literal", it.name)
                    )
        if it.type is OptionType.STRING:
            for d in it.defaults:
                if not isinstance(d.value, Literal):
                    out.append(
                        Diagnostic("error", "string option default must be a quoted literal", it.name)
                    )
        check_expr(it.depends, it.name)
        for p in it.prompts:
            check_expr(p.condition, it.name)
        for d in it.defaults:
            check_expr(d.condition, it.name)
            if it.is_boolish:
                check_expr(d.value, it.name)
        for s in it.selects:
            check_expr(s.condition, it.name)
            if model.has_option(s.target):
                if not model.item(s.target).is_boolish:
                    out.append(
                        Diagnostic("error", f"select target {s.target} is not bool/tristate", it.name)
                    )
                if model.item(s.target).declared_in_choice is not None:
                    out.append(
                        Diagnostic(
                            "warning",
                            f"select target {s.target} is a choice member; the select is ignored "
                            "while the member is visible",
                            it.name,
                        )
                    )
            else:
                out.append(
                    Diagnostic("warning", f"select target {s.target} is never declared", it.name)
                )
        for r in it.ranges:
            check_expr(r.condition, it.name)

    if model.modules_option is not None:
        switch = model.item(model.modules_option)
        if switch.type is not OptionType.BOOL:
            out.append(
                Diagnostic(
                    "warning",
                    "the modules switch is not a bool option; only the value y enables modules",
                    switch.name,
                )
            )

    for ch in model.choices:
        check_expr(ch.depends, f"choice#{ch.id}")
        for p in ch.prompts:
            check_expr(p.condition, f"choice#{ch.id}")
        for d in ch.defaults:
            check_expr(d.condition, f"choice#{ch.id}")
            if not isinstance(d.value, Sym) or d.value.name not in ch.members:
                out.append(
                    Diagnostic("error", "choice default must name one of its members", f"choice#{ch.id}")
                )
        for member in ch.members:
            if model.item(member).type not in (OptionType.BOOL, OptionType.TRISTATE):
                out.append(
                    Diagnostic("error", f"choice member {member} is not bool/tristate", f"choice#{ch.id}")
                )

    for cycle in value_dependency_cycles(model):
        out.append(
            Diagnostic(
                "error",
                "recursive value dependency: " + " -> ".join(cycle),
                cycle[0],
            )
        )

    return out


def value_dependency_edges(model: KconfigModel) -> dict[str, set[str]]:
    """Which declared options each option's computed value reads.

    Covers dependencies, prompt and default conditions, default values,
    range conditions, selects (target reads selector and condition), the
    enclosing choice's conditions, and the modules switch for tristate
    options.  Coupling between members of the same choice is excluded: the
    selection discipline resolves it.
    """
    edges: dict[str, set[str]] = {it.name: set() for it in model.items}

    def declared(e: Expr | None) -> set[str]:
        return {n for n in expr_symbols(e) if model.has_option(n)}

    for it in model.items:
        reads = edges[it.name]
        reads |= declared(it.depends)
        for p in it.prompts:
            reads |= declared(p.condition)
        for d in it.defaults:
            reads |= declared(d.condition)
            reads |= declared(d.value)
        for r in it.ranges:
            reads |= declared(r.condition)
        for s in it.selects:
            if model.has_option(s.target):
                edges[s.target].add(it.name)
                edges[s.target] |= declared(s.condition)
        choice = model.choice_of(it)
        if choice is not None:
            reads |= declared(choice.depends)
            for p in choice.prompts:
                reads |= declared(p.condition)
            for d in choice.defaults:
                reads |= declared(d.condition)
        if model.modules_option is not None and (
            it.type is OptionType.TRISTATE
            or (choice is not None and choice.type is OptionType.TRISTATE)
        ):
            reads.add(model.modules_option)

    for it in model.items:
        choice = model.choice_of(it)
        if choice is not None:
            edges[it.name] -= {m for m in choice.members if m != it.name}
    return edges


def value_dependency_cycles(model: KconfigModel) -> list[list[str]]:
    """Cycles in the value-dependency graph, one representative per cycle."""
    edges = value_dependency_edges(model)
    color: dict[str, int] = {}
    stack: list[str] = []
    cycles: list[list[str]] = []

    def visit(node: str) -> None:
        color[node] = 1
        stack.append(node)
        for nxt in sorted(edges.get(node, ())):
            state = color.get(nxt, 0)
            if state == 1:
                cycles.append(stack[stack.index(nxt) :] + [nxt])
            elif state == 0:
                visit(nxt)
        stack.pop()
        color[node] = 2

    for name in edges:
        if color.get(name, 0) == 0:
            visit(name)
    return cycles


def collect_options(model: KconfigModel) -> list[tuple[str, OptionType]]:
    """All declared options with their types, in declaration order."""
    return [(it.name, it.type) for it in model.items]


# --------------------------------------------------------------------------
# Pretty printer (round-trip support)


def _format_value(value: Expr) -> str:
    if isinstance(value, Sym):
        return value.name
    if isinstance(value, Literal):
        if _is_number(value.text):
            return value.text
        return '"' + value.text.replace("\\", "\\\\").replace('"', '\\"') + '"'
    raise TypeError(f"not a value node: {value!r}")


def _format_cond(cond: Expr | None) -> str:
    return f" if {expr_text(cond)}" if cond is not None else ""


def _emit_common(lines: list[str], decl: ConfigItem | ChoiceBlock, type_word: str | None) -> None:
    prompts = list(decl.prompts)
    if type_word is not None:
        if prompts:
            first = prompts.pop(0)
            lines.append(f'\t{type_word} "{first.text}"{_format_cond(first.condition)}')
        else:
            lines.append(f"\t{type_word}")
    for p in prompts:
        lines.append(f'\tprompt "{p.text}"{_format_cond(p.condition)}')
    if decl.depends is not None:
        lines.append(f"\tdepends on {expr_text(decl.depends)}")
    for d in decl.defaults:
        lines.append(f"\tdefault {_format_value(d.value)}{_format_cond(d.condition)}")


def pretty_model(model: KconfigModel) -> str:
    """Render a model back to kconfig subset text.

    Re-parsing the output yields a structurally identical model.
    """
    lines: list[str] = []
    emitted: set[str] = set()
    choice_at = {ch.members[0]: ch for ch in model.choices}

    for it in model.items:
        if it.name in emitted:
            continue
        ch = choice_at.get(it.name)
        if ch is not None:
            lines.append("choice")
            _emit_common(lines, ch, ch.type.value)
            for member_name in ch.members:
                _emit_item(lines, model.item(member_name))
                emitted.add(member_name)
            lines.append("endchoice")
            lines.append("")
        else:
            _emit_item(lines, it)
            emitted.add(it.name)
    return "\n".join(lines).rstrip("\n") + ("\n" if lines else "")


def _emit_item(lines: list[str], it: ConfigItem) -> None:
    lines.append(f"config {it.name}")
    _emit_common(lines, it, it.type.value)
    for s in it.selects:
        lines.append(f"\tselect {s.target}{_format_cond(s.condition)}")
    for r in it.ranges:
        lines.append(f"\trange {r.low} {r.high}{_format_cond(r.condition)}")
    if it.is_modules_switch:
        lines.append("\toption modules")
    lines.append("")
