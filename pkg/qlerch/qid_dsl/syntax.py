"""AST for q-series expressions and statements, with a pretty printer that the parser reads back."""

from __future__ import annotations

from dataclasses import dataclass
from typing import ClassVar, Union

from qlerch.qproducts import Monomial
from qlerch.ring_series import Ring

BUILTINS = (
    "T",
    "K",
    "phi",
    "psi",
    "phiMock",
    "rho",
    "mu",
    "lambda",
    "A",
    "p_partition",
    "jacobiCube",
    "cubeAnalog",
)


class QidSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} at {line}:{column}")
        self.code = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class QPow:
    exp: int


@dataclass(frozen=True)
class Euler:
    j: int


@dataclass(frozen=True)
class Builtin:
    name: str


@dataclass(frozen=True)
class Theta:
    a: Monomial
    b: Monomial


@dataclass(frozen=True)
class Poch:
    a: Monomial
    base: int
    length: int | None  # None is the infinite product


@dataclass(frozen=True)
class Ajp:
    j: int
    p: int


@dataclass(frozen=True)
class Neg:
    operand: Expr


@dataclass(frozen=True)
class BinOp:
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow:
    base: Expr
    exp: int


@dataclass(frozen=True)
class Subst:
    operand: Expr
    sign: int
    k: int


@dataclass(frozen=True)
class Extract:
    operand: Expr
    m: int
    r: int


@dataclass(frozen=True)
class Sift:
    operand: Expr
    step: int
    offset: int


Expr = Union[Num, QPow, Euler, Builtin, Theta, Poch, Ajp, Neg, BinOp, Pow, Subst, Extract, Sift]


@dataclass(frozen=True)
class VerifyEq:
    label: str
    lhs: Expr
    rhs: Expr
    order: int | None = None
    ring: Ring | None = None

    kind: ClassVar[str] = "verify"


@dataclass(frozen=True)
class VerifyCong:
    label: str
    expr: Expr
    step: int
    offset: int
    modulus: int
    witnesses: int
    order: int | None = None

    kind: ClassVar[str] = "congruence"


@dataclass(frozen=True)
class Scan:
    label: str
    expr: Expr
    max_a: int
    moduli: tuple[int, ...]
    min_witnesses: int
    count: int | None = None

    kind: ClassVar[str] = "scan"


Statement = Union[VerifyEq, VerifyCong, Scan]


def _base(exp: int) -> str:
    return "q" if exp == 1 else f"q^{exp}"


def pretty(expr: Expr) -> str:
    if isinstance(expr, Num):
        return str(expr.value)
    if isinstance(expr, QPow):
        return _base(expr.exp) if expr.exp != 0 else "q^0"
    if isinstance(expr, Euler):
        return f"E[{expr.j}]"
    if isinstance(expr, Builtin):
        return expr.name
    if isinstance(expr, Theta):
        return f"f({expr.a}, {expr.b})"
    if isinstance(expr, Poch):
        suffix = "inf" if expr.length is None else str(expr.length)
        return f"poch({expr.a}; {_base(expr.base)})_{suffix}"
    if isinstance(expr, Ajp):
        return f"ajp({expr.j}, {expr.p})"
    if isinstance(expr, Neg):
        return f"(-{pretty(expr.operand)})"
    if isinstance(expr, BinOp):
        return f"({pretty(expr.left)} {expr.op} {pretty(expr.right)})"
    if isinstance(expr, Pow):
        return f"({pretty(expr.base)})^{expr.exp}"
    if isinstance(expr, Subst):
        return f"subst({pretty(expr.operand)}, {expr.sign}, {expr.k})"
    if isinstance(expr, Extract):
        return f"extract({pretty(expr.operand)}, {expr.m}, {expr.r})"
    if isinstance(expr, Sift):
        return f"sift({pretty(expr.operand)}, {expr.step}, {expr.offset})"
    raise TypeError(f"unknown_expression_node:{type(expr).__name__}")


def _progression(step: int, offset: int) -> str:
    return f"{step}n+{offset}" if offset else f"{step}n"


def pretty_statement(stmt: Statement) -> str:
    head = f"[{stmt.label}] "
    if isinstance(stmt, VerifyEq):
        text = f"{head}verify {pretty(stmt.lhs)} == {pretty(stmt.rhs)}"
        if stmt.order is not None:
            text += f" order {stmt.order}"
        if stmt.ring is not None:
            text += f" over {stmt.ring.descriptor}"
        return text
    if isinstance(stmt, VerifyCong):
        text = (
            f"{head}congruence {pretty(stmt.expr)} at {_progression(stmt.step, stmt.offset)}"
            f" mod {stmt.modulus} witnesses {stmt.witnesses}"
        )
        if stmt.order is not None:
            text += f" order {stmt.order}"
        return text
    moduli = ", ".join(str(m) for m in stmt.moduli)
    text = f"{head}scan {pretty(stmt.expr)} maxA {stmt.max_a} moduli {moduli} min {stmt.min_witnesses}"
    if stmt.count is not None:
        text += f" count {stmt.count}"
    return text
