"""
The A-IMP language: abstract syntax, typing, big-step evaluation,
and a concrete textual syntax with parser and pretty-printer.
"""
import logging
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

import numpy as np

from aimp.errors import Diagnostic, EvalError, ParseError, TypeCheckError

logger = logging.getLogger(__name__)

ADDRESS_PATTERN = re.compile(r"^[a-z][a-z0-9_]*$")
RESERVED_WORDS = frozenset({"skip", "print", "true", "false"})


class Type(str, Enum):
    NUM = "num"
    BOOL = "bool"


class Address(str):
    """An assignable name. Validated on construction."""

    def __new__(cls, name: str):
        if isinstance(name, Address):
            return name
        if not isinstance(name, str) or not ADDRESS_PATTERN.match(name):
            raise ValueError(f"Invalid address: {name!r}")
        if name in RESERVED_WORDS:
            raise ValueError(f"Address may not be a reserved word: {name!r}")
        return super().__new__(cls, name)

    @property
    def name(self) -> str:
        return str(self)


def _finite_number(value) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"Numeric literal must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"Numeric literal must be finite, got {value!r}")
    return value


# Expressions

@dataclass(frozen=True)
class AddrRef:
    address: Address

    def __post_init__(self):
        object.__setattr__(self, "address", Address(self.address))


@dataclass(frozen=True)
class NumLit:
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", _finite_number(self.value))


@dataclass(frozen=True)
class BoolLit:
    value: bool

    def __post_init__(self):
        if not isinstance(self.value, bool):
            raise ValueError(f"Boolean literal must be a bool, got {self.value!r}")


@dataclass(frozen=True)
class Plus:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Minus:
    left: "Expr"
    right: "Expr"


Expr = Union[AddrRef, NumLit, BoolLit, Plus, Minus]


# Commands

@dataclass(frozen=True)
class Set:
    target: Address
    source: Expr

    def __post_init__(self):
        object.__setattr__(self, "target", Address(self.target))


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Seq:
    first: "Cmd"
    second: "Cmd"


@dataclass(frozen=True)
class Print:
    source: Expr


Cmd = Union[Set, Skip, Seq, Print]


def iter_commands(cmd: Cmd) -> Iterator[Cmd]:
    """Yield the atomic commands of `cmd` in execution order."""
    stack = [cmd]
    while stack:
        node = stack.pop()
        if isinstance(node, Seq):
            stack.append(node.second)
            stack.append(node.first)
        else:
            yield node


def seq_all(cmds: List[Cmd]) -> Cmd:
    """Join commands left to right as a right-nested Seq chain."""
    if not cmds:
        return Skip()
    result = cmds[-1]
    for cmd in reversed(cmds[:-1]):
        result = Seq(cmd, result)
    return result


@dataclass(frozen=True, eq=False)
class Program:
    """
    A whole A-IMP program.

    Equality compares Seq chains modulo re-association: the concrete syntax
    has no command grouping, and sequencing is associative in effect.
    """

    root: Cmd

    def canonical(self) -> Cmd:
        return seq_all(list(iter_commands(self.root)))

    def __eq__(self, other):
        if not isinstance(other, Program):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(self.canonical())


class Store(Mapping[str, float]):
    """Immutable mapping from addresses to finite numbers."""

    __slots__ = ("_bindings",)

    def __init__(self, bindings: Optional[Mapping[str, float]] = None):
        checked: Dict[str, float] = {}
        for name, value in (bindings or {}).items():
            checked[Address(name)] = _finite_number(value)
        self._bindings = checked

    def __getitem__(self, key: str) -> float:
        return self._bindings[key]

    def __iter__(self):
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)

    def __eq__(self, other):
        if isinstance(other, Mapping):
            return dict(self._bindings) == dict(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._bindings.items()))

    def __repr__(self) -> str:
        return f"Store({self._bindings!r})"

    def bind(self, address: str, value: float) -> "Store":
        updated = dict(self._bindings)
        updated[Address(address)] = value
        return Store(updated)


@dataclass(frozen=True)
class ExecResult:
    store: Store
    outputs: Tuple[float, ...] = ()
    diagnostics: Tuple[Diagnostic, ...] = field(default=(), compare=False)


# Typing

def typecheck_expr(expr: Expr, location: Tuple[str, ...] = ()) -> Type:
    """Infer the type of an expression (the float judgment covers num)."""
    if isinstance(expr, (AddrRef, NumLit)):
        return Type.NUM
    if isinstance(expr, BoolLit):
        return Type.BOOL
    if isinstance(expr, (Plus, Minus)):
        for side in ("left", "right"):
            operand_type = typecheck_expr(getattr(expr, side), location + (side,))
            if operand_type is not Type.NUM:
                raise TypeCheckError(location + (side,), Type.NUM.value, operand_type.value)
        return Type.NUM
    raise TypeCheckError(location, "expression", type(expr).__name__)


def _expect_num(expr: Expr, location: Tuple[str, ...]) -> None:
    found = typecheck_expr(expr, location)
    if found is not Type.NUM:
        raise TypeCheckError(location, Type.NUM.value, found.value)


def typecheck_cmd(cmd: Cmd, location: Tuple[str, ...] = ()) -> bool:
    """Check `c: ok`. Returns True or raises TypeCheckError with the path to the fault."""
    stack = [(cmd, location)]
    while stack:
        node, where = stack.pop()
        if isinstance(node, Set):
            _expect_num(node.source, where + ("source",))
        elif isinstance(node, Print):
            _expect_num(node.source, where + ("source",))
        elif isinstance(node, Seq):
            stack.append((node.second, where + ("second",)))
            stack.append((node.first, where + ("first",)))
        elif not isinstance(node, Skip):
            raise TypeCheckError(where, "command", type(node).__name__)
    return True


# Evaluation

def eval_expr(store: Mapping[str, float], expr: Expr,
              diagnostics: Optional[List[Diagnostic]] = None) -> float:
    """
    Evaluate a num-typed expression.

    Unbound addresses read as 0; each such read is appended to `diagnostics`.
    """
    if isinstance(expr, NumLit):
        return expr.value
    if isinstance(expr, AddrRef):
        if expr.address in store:
            return store[expr.address]
        logger.warning("unbound address %s read as 0", expr.address)
        if diagnostics is not None:
            diagnostics.append(Diagnostic(
                stage="eval", code="unbound_address",
                message=f"unbound address {expr.address}",
            ))
        return 0.0
    if isinstance(expr, (Plus, Minus)):
        left = eval_expr(store, expr.left, diagnostics)
        right = eval_expr(store, expr.right, diagnostics)
        result = left + right if isinstance(expr, Plus) else left - right
        if not math.isfinite(result):
            raise EvalError(f"non-finite result {result} from {print_expr(expr)}")
        return result
    raise EvalError(f"cannot evaluate {type(expr).__name__} as a number")


def exec_cmd(store: Mapping[str, float], cmd: Cmd) -> ExecResult:
    """Run `cmd` from `store`, returning the final store and printed values."""
    current = store if isinstance(store, Store) else Store(store)
    outputs: List[float] = []
    diagnostics: List[Diagnostic] = []
    for atom in iter_commands(cmd):
        if isinstance(atom, Set):
            current = current.bind(atom.target, eval_expr(current, atom.source, diagnostics))
        elif isinstance(atom, Print):
            outputs.append(eval_expr(current, atom.source, diagnostics))
    return ExecResult(store=current, outputs=tuple(outputs), diagnostics=tuple(diagnostics))


# Concrete syntax

_TOKEN_SPEC = [
    ("COMMENT", r"#[^\n]*"),
    ("NEWLINE", r"\n"),
    ("SPACE", r"[ \t\r]+"),
    ("NUMBER", r"\d+(?:\.\d*)?|\.\d+"),
    ("IDENT", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("ASSIGN", r":="),
    ("OP", r"[+\-;()]"),
    ("ERROR", r"."),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{name}>{pattern})" for name, pattern in _TOKEN_SPEC))


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    column: int


def _lex(text: str) -> List[_Tok]:
    tokens: List[_Tok] = []
    line, line_start = 1, 0
    for match in _TOKEN_RE.finditer(text):
        kind = match.lastgroup
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line += 1
            line_start = match.end()
        elif kind in ("SPACE", "COMMENT"):
            continue
        elif kind == "ERROR":
            raise ParseError(line, column, f"unexpected character {match.group()!r}")
        else:
            tokens.append(_Tok(kind, match.group(), line, column))
    tokens.append(_Tok("EOF", "", line, len(text) - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0

    @property
    def current(self) -> _Tok:
        return self.tokens[self.pos]

    def advance(self) -> _Tok:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str) -> ParseError:
        tok = self.current
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return ParseError(tok.line, tok.column, f"{message}, found {found}")

    def expect(self, text: str) -> _Tok:
        if self.current.text != text or self.current.kind == "EOF":
            raise self.error(f"expected {text!r}")
        return self.advance()

    def program(self) -> Program:
        atoms = [self.atom()]
        while self.current.text == ";" and self.current.kind == "OP":
            self.advance()
            atoms.append(self.atom())
        if self.current.kind != "EOF":
            raise self.error("expected ';' or end of input")
        return Program(seq_all(atoms))

    def atom(self) -> Cmd:
        tok = self.current
        if tok.kind != "IDENT":
            raise self.error("expected a command")
        if tok.text == "skip":
            self.advance()
            return Skip()
        if tok.text == "print":
            self.advance()
            return Print(self.expr())
        target = self.address()
        self.expect(":=")
        return Set(target, self.expr())

    def address(self) -> Address:
        tok = self.current
        try:
            name = Address(tok.text)
        except ValueError:
            raise self.error("expected an address")
        self.advance()
        return name

    def expr(self) -> Expr:
        result = self.term()
        while self.current.kind == "OP" and self.current.text in "+-":
            op = self.advance().text
            right = self.term()
            result = Plus(result, right) if op == "+" else Minus(result, right)
        return result

    def literal(self, tok: _Tok, negate: bool = False) -> NumLit:
        value = float(tok.text)
        try:
            return NumLit(-value if negate else value)
        except ValueError:
            raise ParseError(tok.line, tok.column, "numeric literal out of range")

    def term(self) -> Expr:
        tok = self.current
        if tok.kind == "NUMBER":
            self.advance()
            return self.literal(tok)
        if tok.kind == "OP" and tok.text == "-":
            following = self.tokens[self.pos + 1]
            adjacent = following.line == tok.line and following.column == tok.column + 1
            if following.kind == "NUMBER" and adjacent:
                self.pos += 2
                return self.literal(following, negate=True)
            raise self.error("expected a term")
        if tok.kind == "OP" and tok.text == "(":
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if tok.kind == "IDENT":
            if tok.text in ("true", "false"):
                self.advance()
                return BoolLit(tok.text == "true")
            return AddrRef(self.address())
        raise self.error("expected a term")


def parse_program(text: str) -> Program:
    """Parse concrete A-IMP syntax into a Program."""
    return _Parser(text).program()


def format_number(value: float) -> str:
    """Shortest positional decimal that reads back as exactly `value`."""
    return np.format_float_positional(value, unique=True, trim="-")


def print_expr(expr: Expr) -> str:
    if isinstance(expr, NumLit):
        return format_number(expr.value)
    if isinstance(expr, AddrRef):
        return str(expr.address)
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, (Plus, Minus)):
        op = "+" if isinstance(expr, Plus) else "-"
        right = print_expr(expr.right)
        if isinstance(expr.right, (Plus, Minus)):
            right = f"({right})"
        return f"{print_expr(expr.left)} {op} {right}"
    raise ValueError(f"Not an expression: {expr!r}")


def print_cmd(cmd: Cmd) -> str:
    clauses = []
    for atom in iter_commands(cmd):
        if isinstance(atom, Set):
            clauses.append(f"{atom.target} := {print_expr(atom.source)}")
        elif isinstance(atom, Print):
            clauses.append(f"print {print_expr(atom.source)}")
        elif isinstance(atom, Skip):
            clauses.append("skip")
        else:
            raise ValueError(f"Not a command: {atom!r}")
    return " ; ".join(clauses)


def print_program(program: Program) -> str:
    """Render the canonical concrete syntax of a program."""
    return print_cmd(program.root)


# JSON codec

def expr_to_json(expr: Expr) -> dict:
    if isinstance(expr, AddrRef):
        return {"expr": "addr", "addr": str(expr.address)}
    if isinstance(expr, NumLit):
        return {"expr": "num", "value": expr.value}
    if isinstance(expr, BoolLit):
        return {"expr": "bool", "value": expr.value}
    if isinstance(expr, Plus):
        return {"expr": "plus", "left": expr_to_json(expr.left), "right": expr_to_json(expr.right)}
    if isinstance(expr, Minus):
        return {"expr": "minus", "left": expr_to_json(expr.left), "right": expr_to_json(expr.right)}
    raise ValueError(f"Not an expression: {expr!r}")


def cmd_to_json(cmd: Cmd) -> dict:
    if isinstance(cmd, Set):
        return {"cmd": "set", "addr": str(cmd.target), "expr": expr_to_json(cmd.source)}
    if isinstance(cmd, Skip):
        return {"cmd": "skip"}
    if isinstance(cmd, Seq):
        return {"cmd": "seq", "first": cmd_to_json(cmd.first), "second": cmd_to_json(cmd.second)}
    if isinstance(cmd, Print):
        return {"cmd": "print", "expr": expr_to_json(cmd.source)}
    raise ValueError(f"Not a command: {cmd!r}")


def expr_from_json(obj: dict) -> Expr:
    kind = obj.get("expr")
    if kind == "addr":
        return AddrRef(obj["addr"])
    if kind == "num":
        return NumLit(obj["value"])
    if kind == "bool":
        return BoolLit(obj["value"])
    if kind in ("plus", "minus"):
        node = Plus if kind == "plus" else Minus
        return node(expr_from_json(obj["left"]), expr_from_json(obj["right"]))
    raise ValueError(f"Unknown expression tag: {kind!r}")


def cmd_from_json(obj: dict) -> Cmd:
    kind = obj.get("cmd")
    if kind == "set":
        return Set(obj["addr"], expr_from_json(obj["expr"]))
    if kind == "skip":
        return Skip()
    if kind == "seq":
        return Seq(cmd_from_json(obj["first"]), cmd_from_json(obj["second"]))
    if kind == "print":
        return Print(expr_from_json(obj["expr"]))
    raise ValueError(f"Unknown command tag: {kind!r}")


def program_to_json(program: Program) -> dict:
    return cmd_to_json(program.root)


def program_from_json(obj: dict) -> Program:
    return Program(cmd_from_json(obj))


if __name__ == "__main__":
    program = parse_program("a_p := 3 ; a_p := a_p - 1 ; print a_p")
    typecheck_cmd(program.root)
    result = exec_cmd(Store(), program.root)
    print(f"📋 {print_program(program)}")
    print(f"✅ outputs: {list(result.outputs)}")
