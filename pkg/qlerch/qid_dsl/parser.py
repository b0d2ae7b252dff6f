"""Recursive-descent parser for .qid statement files."""

from __future__ import annotations

from dataclasses import dataclass

from qlerch.qproducts import Monomial
from qlerch.qid_dsl.syntax import (
    BUILTINS,
    Ajp,
    BinOp,
    Builtin,
    Euler,
    Expr,
    Extract,
    Neg,
    Num,
    Poch,
    Pow,
    QidSyntaxError,
    QPow,
    Scan,
    Sift,
    Statement,
    Subst,
    Theta,
    VerifyCong,
    VerifyEq,
)
from qlerch.ring_series import Ring, parse_ring

SYMBOLS = set("+-*/^()[],;:")
STATEMENT_KEYWORDS = ("verify", "congruence", "scan")
DEFAULT_WITNESSES = 10
DEFAULT_SCAN_WITNESSES = 10


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, LABEL, SYM, EOF
    value: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    for line_no, line in enumerate(text.splitlines(), start=1):
        i = 0
        at_line_start = True
        while i < len(line):
            ch = line[i]
            column = i + 1
            if ch.isspace():
                i += 1
                continue
            if ch == "#":
                break
            if ch == "[" and at_line_start:
                end = line.find("]", i)
                if end < 0:
                    raise QidSyntaxError("unterminated_label", line_no, column)
                label = line[i + 1 : end].strip()
                if not label:
                    raise QidSyntaxError("empty_label", line_no, column)
                tokens.append(Token("LABEL", label, line_no, column))
                i = end + 1
                at_line_start = False
                continue
            at_line_start = False
            if ch.isdigit():
                start = i
                while i < len(line) and line[i].isdigit():
                    i += 1
                tokens.append(Token("INT", line[start:i], line_no, column))
            elif ch.isalpha() or ch == "_":
                start = i
                while i < len(line) and (line[i].isalnum() or line[i] == "_"):
                    i += 1
                tokens.append(Token("IDENT", line[start:i], line_no, column))
            elif line.startswith("==", i):
                tokens.append(Token("SYM", "==", line_no, column))
                i += 2
            elif ch in SYMBOLS:
                tokens.append(Token("SYM", ch, line_no, column))
                i += 1
            else:
                raise QidSyntaxError(f"unexpected_character:{ch}", line_no, column)
    lines = text.splitlines() or [""]
    tokens.append(Token("EOF", "", len(lines), len(lines[-1]) + 1))
    return tokens


class Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.pos = 0

    # token helpers

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        token = self.peek()
        self.pos += 1
        return token

    def fail(self, message: str, token: Token | None = None) -> QidSyntaxError:
        token = token or self.peek()
        return QidSyntaxError(message, token.line, token.column)

    def at_sym(self, value: str) -> bool:
        token = self.peek()
        return token.kind == "SYM" and token.value == value

    def at_word(self, value: str) -> bool:
        token = self.peek()
        return token.kind == "IDENT" and token.value == value

    def expect_sym(self, value: str) -> Token:
        if not self.at_sym(value):
            raise self.fail(f"expected:{value}")
        return self.advance()

    def expect_word(self, value: str) -> Token:
        if not self.at_word(value):
            raise self.fail(f"expected:{value}")
        return self.advance()

    def expect_int(self) -> int:
        token = self.peek()
        if token.kind != "INT":
            raise self.fail("expected_integer")
        self.advance()
        return int(token.value)

    def signed_int(self) -> int:
        sign = 1
        if self.at_sym("-"):
            self.advance()
            sign = -1
        elif self.at_sym("+"):
            self.advance()
        return sign * self.expect_int()

    # statements

    def statements(self) -> list[Statement]:
        parsed: list[Statement] = []
        while self.peek().kind != "EOF":
            parsed.append(self.statement())
            if self.at_sym(";"):
                self.advance()
            token = self.peek()
            if token.kind not in ("EOF", "LABEL") and not (
                token.kind == "IDENT" and token.value in STATEMENT_KEYWORDS
            ):
                raise self.fail(f"unexpected_token:{token.value}")
        return parsed

    def statement(self) -> Statement:
        start = self.peek()
        label = f"line-{start.line}"
        if start.kind == "LABEL":
            label = self.advance().value
        keyword = self.peek()
        if keyword.kind != "IDENT" or keyword.value not in STATEMENT_KEYWORDS:
            raise self.fail("expected_statement_keyword")
        self.advance()
        if keyword.value == "verify":
            return self.verify(label)
        if keyword.value == "congruence":
            return self.congruence(label)
        return self.scan(label)

    def positive(self, value: int, code: str, token: Token) -> int:
        if value < 1:
            raise self.fail(code, token)
        return value

    def order_clause(self) -> int:
        token = self.expect_word("order")
        return self.positive(self.expect_int(), "order_must_be_positive", token)

    def ring_clause(self) -> Ring:
        token = self.expect_word("over")
        name = self.peek()
        if name.kind != "IDENT":
            raise self.fail("invalid_ring")
        self.advance()
        text = name.value
        if text == "mod":
            self.expect_sym(":")
            text = f"mod:{self.expect_int()}"
        try:
            return parse_ring(text)
        except ValueError as exc:
            raise self.fail("invalid_ring", token) from exc

    def verify(self, label: str) -> VerifyEq:
        lhs = self.expr()
        self.expect_sym("==")
        rhs = self.expr()
        order: int | None = None
        ring: Ring | None = None
        while True:
            if self.at_word("order"):
                order = self.order_clause()
            elif self.at_word("over"):
                ring = self.ring_clause()
            else:
                return VerifyEq(label, lhs, rhs, order, ring)

    def progression(self) -> tuple[int, int]:
        token = self.peek()
        step = self.expect_int() if token.kind == "INT" else 1
        self.expect_word("n")
        offset = 0
        if self.at_sym("+"):
            self.advance()
            offset = self.expect_int()
        if step < 1:
            raise self.fail("invalid_progression", token)
        if offset >= step:
            raise self.fail("progression_offset_out_of_range", token)
        return step, offset

    def congruence(self, label: str) -> VerifyCong:
        expr = self.expr()
        self.expect_word("at")
        step, offset = self.progression()
        token = self.expect_word("mod")
        modulus = self.expect_int()
        if modulus < 2:
            raise self.fail("modulus_must_be_at_least_2", token)
        witnesses = DEFAULT_WITNESSES
        order: int | None = None
        while True:
            if self.at_word("witnesses"):
                token = self.advance()
                witnesses = self.positive(self.expect_int(), "witnesses_must_be_positive", token)
            elif self.at_word("order"):
                order = self.order_clause()
            else:
                return VerifyCong(label, expr, step, offset, modulus, witnesses, order)

    def scan(self, label: str) -> Scan:
        start = self.peek()
        expr = self.expr()
        max_a: int | None = None
        moduli: list[int] = []
        min_witnesses = DEFAULT_SCAN_WITNESSES
        count: int | None = None
        while True:
            token = self.peek()
            if self.at_word("maxA"):
                self.advance()
                max_a = self.positive(self.expect_int(), "max_a_must_be_positive", token)
            elif self.at_word("moduli"):
                self.advance()
                moduli = [self.expect_int()]
                while self.at_sym(","):
                    self.advance()
                    moduli.append(self.expect_int())
                if min(moduli) < 2:
                    raise self.fail("modulus_must_be_at_least_2", token)
            elif self.at_word("min"):
                self.advance()
                min_witnesses = self.positive(self.expect_int(), "witnesses_must_be_positive", token)
            elif self.at_word("count"):
                self.advance()
                count = self.positive(self.expect_int(), "count_must_be_positive", token)
            else:
                break
        if max_a is None or not moduli:
            raise self.fail("scan_requires_max_a_and_moduli", start)
        return Scan(label, expr, max_a, tuple(moduli), min_witnesses, count)

    # expressions: ^ over unary minus over * / over + -

    def expr(self) -> Expr:
        node = self.term()
        while self.at_sym("+") or self.at_sym("-"):
            op = self.advance().value
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.at_sym("*") or self.at_sym("/"):
            op = self.advance().value
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.at_sym("-"):
            self.advance()
            return Neg(self.unary())
        return self.power()

    def exponent(self) -> int:
        self.expect_sym("^")
        token = self.peek()
        if token.kind not in ("INT", "SYM") or (token.kind == "SYM" and token.value not in "+-"):
            raise self.fail("non_literal_exponent")
        if token.kind == "SYM" and self.peek(1).kind != "INT":
            raise self.fail("non_literal_exponent", self.peek(1))
        return self.signed_int()

    def power(self) -> Expr:
        base = self.atom()
        if self.at_sym("^"):
            return Pow(base, self.exponent())
        return base

    def monomial(self) -> Monomial:
        sign = 1
        if self.at_sym("-"):
            self.advance()
            sign = -1
        token = self.peek()
        if token.kind == "INT":
            if token.value != "1":
                raise self.fail("expected_monomial")
            self.advance()
            return Monomial(sign, 0)
        self.expect_word("q")
        exp = 1
        if self.at_sym("^"):
            self.advance()
            exp = self.expect_int()
        return Monomial(sign, exp)

    def base(self) -> int:
        self.expect_word("q")
        if self.at_sym("^"):
            self.advance()
            token = self.peek()
            return self.positive(self.expect_int(), "pochhammer_base_must_be_positive", token)
        return 1

    def arguments(self, *kinds: str) -> list:
        """Parse '(' arg, arg, ... ')' where each kind is 'expr', 'int' or 'signed'."""
        self.expect_sym("(")
        values: list = []
        for index, kind in enumerate(kinds):
            if index:
                self.expect_sym(",")
            if kind == "expr":
                values.append(self.expr())
            elif kind == "signed":
                values.append(self.signed_int())
            else:
                values.append(self.expect_int())
        self.expect_sym(")")
        return values

    def atom(self) -> Expr:
        token = self.peek()
        if token.kind == "INT":
            self.advance()
            return Num(int(token.value))
        if token.kind == "SYM" and token.value == "(":
            self.advance()
            node = self.expr()
            self.expect_sym(")")
            return node
        if token.kind == "EOF":
            raise self.fail("unexpected_end_of_input")
        if token.kind != "IDENT":
            raise self.fail(f"unexpected_token:{token.value}")
        name = self.advance().value
        if name == "q":
            return QPow(self.exponent()) if self.at_sym("^") else QPow(1)
        if name == "E":
            self.expect_sym("[")
            j = self.positive(self.expect_int(), "eta_dilation_must_be_positive", token)
            self.expect_sym("]")
            return Euler(j)
        if name == "f":
            self.expect_sym("(")
            a = self.monomial()
            self.expect_sym(",")
            b = self.monomial()
            self.expect_sym(")")
            if a.exp + b.exp < 1:
                raise self.fail("theta_requires_positive_total_exponent", token)
            return Theta(a, b)
        if name == "poch":
            return self.pochhammer(token)
        if name == "ajp":
            j, p = self.arguments("int", "int")
            return Ajp(j, p)
        if name == "subst":
            operand, sign, k = self.arguments("expr", "signed", "int")
            if sign not in (1, -1) or k < 1:
                raise self.fail("invalid_substitution", token)
            return Subst(operand, sign, k)
        if name == "extract":
            operand, m, r = self.arguments("expr", "int", "int")
            if m < 2 or r >= m:
                raise self.fail("invalid_extraction", token)
            return Extract(operand, m, r)
        if name == "sift":
            operand, step, offset = self.arguments("expr", "int", "int")
            if step < 1:
                raise self.fail("invalid_progression", token)
            return Sift(operand, step, offset)
        if name in BUILTINS:
            node: Expr = Builtin(name)
            if self.at_sym("(") and self.peek(1).kind == "IDENT" and self.peek(1).value == "subst":
                self.advance()
                self.advance()
                k = self.positive(self.expect_int(), "invalid_substitution", token)
                self.expect_sym(")")
                node = Subst(node, 1, k)
            return node
        raise self.fail(f"unknown_identifier:{name}", token)

    def pochhammer(self, token: Token) -> Poch:
        self.expect_sym("(")
        a = self.monomial()
        self.expect_sym(";")
        base = self.base()
        self.expect_sym(")")
        suffix = self.peek()
        if suffix.kind != "IDENT" or not suffix.value.startswith("_"):
            raise self.fail("invalid_pochhammer_suffix")
        self.advance()
        tail = suffix.value[1:]
        if tail == "inf":
            if a.exp < 1:
                raise self.fail("infinite_product_needs_positive_exponent", token)
            return Poch(a, base, None)
        if not tail.isdigit():
            raise self.fail("invalid_pochhammer_suffix", suffix)
        return Poch(a, base, int(tail))


def parse(text: str) -> list[Statement]:
    return Parser(text).statements()


def parse_expr(text: str) -> Expr:
    parser = Parser(text)
    node = parser.expr()
    if parser.peek().kind != "EOF":
        raise parser.fail(f"unexpected_token:{parser.peek().value}")
    return node
