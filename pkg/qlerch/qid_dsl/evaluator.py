"""Bottom-up evaluation of expression trees into truncated series.

Literals and powers of q stay exact Laurent polynomials until they meet a
series; everything else is a ``Series`` at the requested order. Each node is
evaluated with the child order its operator needs (extraction and sifting
widen it, substitution narrows it) and memoized per (node, order).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Union

from qlerch.appell import A_series, a_jp, lambda_fn, mu, phi_mock, rho
from qlerch.core.metrics import observe_cache_hit
from qlerch.dissect import extract, sift
from qlerch.qid_dsl.syntax import (
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
    QPow,
    Sift,
    Subst,
    Theta,
)
from qlerch.qproducts import EtaQuotient, eta_quotient, euler, pochhammer_finite, pochhammer_inf, rr_K, rr_T
from qlerch.ring_series import (
    RATIONAL,
    Ring,
    Series,
    add,
    invert,
    mul,
    mul_sparse,
    power,
    subst,
)
from qlerch.theta import cube_analog, f_sum, jacobi_cube, phi, psi

logger = logging.getLogger(__name__)


class EvaluationError(ValueError):
    def __init__(self, code: str, path: tuple[str, ...]) -> None:
        location = "/".join(path) or "<root>"
        super().__init__(f"{code} at {location}")
        self.code = code
        self.path = path


@dataclass(frozen=True)
class Exact:
    """A Laurent polynomial with rational coefficients, known to infinite precision."""

    terms: tuple[tuple[int, Fraction], ...]

    @classmethod
    def of(cls, terms: Mapping[int, Fraction | int]) -> "Exact":
        return cls(tuple(sorted((e, Fraction(c)) for e, c in terms.items() if c != 0)))

    @property
    def mapping(self) -> dict[int, Fraction]:
        return dict(self.terms)

    @property
    def monomial(self) -> tuple[int, Fraction] | None:
        return self.terms[0] if len(self.terms) == 1 else None

    def add(self, other: "Exact") -> "Exact":
        merged = self.mapping
        for e, c in other.terms:
            merged[e] = merged.get(e, Fraction(0)) + c
        return Exact.of(merged)

    def neg(self) -> "Exact":
        return Exact.of({e: -c for e, c in self.terms})

    def mul(self, other: "Exact") -> "Exact":
        product: dict[int, Fraction] = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                product[e1 + e2] = product.get(e1 + e2, Fraction(0)) + c1 * c2
        return Exact.of(product)

    def power(self, k: int) -> "Exact":
        result = Exact.of({0: 1})
        for _ in range(k):
            result = result.mul(self)
        return result

    def to_series(self, ring: Ring, prec: int) -> Series:
        return Series.polynomial(ring, self.mapping, prec)


Value = Union[Exact, Series]

BUILTIN_SERIES: dict[str, Callable[[int, Ring], Series]] = {
    "T": rr_T,
    "K": rr_K,
    "phi": lambda prec, ring: phi(prec, ring),
    "psi": lambda prec, ring: psi(prec, ring),
    "phiMock": phi_mock,
    "rho": rho,
    "mu": mu,
    "lambda": lambda_fn,
    "A": A_series,
    "p_partition": lambda prec, ring: eta_quotient(EtaQuotient.of([(1, -1)]), prec, ring),
    "jacobiCube": jacobi_cube,
    "cubeAnalog": cube_analog,
}


def _describe(node: Expr) -> str:
    if isinstance(node, BinOp):
        return node.op
    if isinstance(node, Euler):
        return f"E[{node.j}]"
    if isinstance(node, Builtin):
        return node.name
    if isinstance(node, Num):
        return str(node.value)
    return type(node).__name__.lower()


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


class Evaluator:
    def __init__(self, ring: Ring, retries: int = 4) -> None:
        self.ring = ring
        self.retries = retries
        self.memo: dict[tuple[Expr, int], Value] = {}
        self.reference: Evaluator | None = None

    def evaluate(self, expr: Expr, order: int, path: tuple[str, ...] = ()) -> Series:
        """Series for expr trusted to at least `order` when the retry budget allows."""
        if order < 1:
            raise ValueError("order_must_be_positive")
        working = order
        result = self.as_series(self.value(expr, working, path), working)
        for _ in range(self.retries):
            if result.prec >= order:
                break
            working += order - result.prec
            result = self.as_series(self.value(expr, working, path), working)
        if result.prec < order:
            logger.info("precision_retries_exhausted:%s:%s", order, result.prec)
        return result

    def as_series(self, value: Value, prec: int) -> Series:
        return value.to_series(self.ring, prec) if isinstance(value, Exact) else value

    def value(self, node: Expr, order: int, path: tuple[str, ...]) -> Value:
        key = (node, order)
        cached = self.memo.get(key)
        if cached is not None:
            observe_cache_hit()
            return cached
        here = path + (_describe(node),)
        try:
            result = self._compute(node, order, here)
        except EvaluationError:
            raise
        except ValueError as exc:
            raise EvaluationError(str(exc), here) from exc
        self.memo[key] = result
        return result

    def _compute(self, node: Expr, order: int, path: tuple[str, ...]) -> Value:
        ring = self.ring
        if isinstance(node, Num):
            return Exact.of({0: node.value})
        if isinstance(node, QPow):
            return Exact.of({node.exp: 1})
        if isinstance(node, Euler):
            return euler(node.j, order, ring)
        if isinstance(node, Builtin):
            return BUILTIN_SERIES[node.name](order, ring)
        if isinstance(node, Theta):
            return f_sum(node.a, node.b, order, ring)
        if isinstance(node, Poch):
            if node.length is None:
                return pochhammer_inf(node.a, node.base, order, ring)
            return pochhammer_finite(node.a, node.base, node.length, order, ring)
        if isinstance(node, Ajp):
            return a_jp(node.j, node.p, order, ring)
        if isinstance(node, Neg):
            operand = self.value(node.operand, order, path)
            return operand.neg() if isinstance(operand, Exact) else -operand
        if isinstance(node, BinOp):
            left = self.value(node.left, order, path + ("left",))
            right = self.value(node.right, order, path + ("right",))
            if node.op == "/":
                self._check_divisor(node.right, right, path + ("right",))
            return self._binary(node.op, left, right, order)
        if isinstance(node, Pow):
            if isinstance(node.base, Euler):
                return eta_quotient(EtaQuotient.of([(node.base.j, node.exp)]), order, ring)
            base = self.value(node.base, order, path)
            if node.exp < 0:
                self._check_divisor(node.base, base, path)
            return self._power(base, node.exp, order)
        if isinstance(node, Subst):
            operand = self.value(node.operand, _ceil_div(order, node.k), path)
            if isinstance(operand, Exact):
                return Exact.of({e * node.k: -c if node.sign < 0 and e % 2 else c for e, c in operand.terms})
            return subst(operand, node.sign, node.k)
        if isinstance(node, Extract):
            operand = self.value(node.operand, node.m * order + node.r, path)
            if isinstance(operand, Exact):
                return Exact.of({(e - node.r) // node.m: c for e, c in operand.terms if (e - node.r) % node.m == 0})
            return extract(operand, node.m, node.r)
        if isinstance(node, Sift):
            operand = self.value(node.operand, node.step * order + node.offset, path)
            series = self.as_series(operand, node.step * order + node.offset)
            return sift(series, node.step, node.offset)
        raise TypeError(f"unknown_expression_node:{type(node).__name__}")

    def _check_divisor(self, node: Expr, value: Value, path: tuple[str, ...]) -> None:
        """Reject a modular divisor whose characteristic-zero leading term vanishes mod M."""
        if self.ring.kind != "mod":
            return
        if isinstance(value, Exact):
            if len(value.terms) > 1:
                low = value.terms[0][0]
                if value.to_series(self.ring, low + 1).valuation != low:
                    raise ValueError("leading_coefficient_vanishes_mod_M")
            return
        if value.is_zero:
            return
        if self.reference is None:
            self.reference = Evaluator(RATIONAL, self.retries)
        prec = max(value.valuation + 1, 1)
        exact = self.reference.as_series(self.reference.value(node, prec, path), prec)
        if not exact.is_zero and exact.valuation < value.valuation:
            raise ValueError("leading_coefficient_vanishes_mod_M")

    def _binary(self, op: str, left: Value, right: Value, order: int) -> Value:
        if op == "+":
            return self._add(left, right)
        if op == "-":
            return self._add(left, right.neg() if isinstance(right, Exact) else -right)
        if op == "*":
            return self._mul(left, right)
        return self._div(left, right, order)

    def _add(self, left: Value, right: Value) -> Value:
        if isinstance(left, Exact) and isinstance(right, Exact):
            return left.add(right)
        if isinstance(left, Exact):
            left, right = right, left
        assert isinstance(left, Series)
        if isinstance(right, Exact):
            right = right.to_series(self.ring, left.prec)
        return add(left, right)

    def _mul(self, left: Value, right: Value) -> Value:
        if isinstance(left, Exact) and isinstance(right, Exact):
            return left.mul(right)
        if isinstance(left, Exact):
            left, right = right, left
        assert isinstance(left, Series)
        if isinstance(right, Exact):
            return mul_sparse(left, right.mapping)
        return mul(left, right)

    def _div(self, left: Value, right: Value, order: int) -> Value:
        if isinstance(right, Exact):
            single = right.monomial
            if single is None:
                span = max(order, left.prec if isinstance(left, Series) else order)
                low = right.terms[0][0] if right.terms else 0
                right = right.to_series(self.ring, span + abs(low) + 1)
            else:
                exp, coefficient = single
                reciprocal = Exact.of({-exp: 1 / coefficient})
                if isinstance(left, Exact):
                    return left.mul(reciprocal)
                return mul_sparse(left, reciprocal.mapping)
        inverse = invert(right)
        if isinstance(left, Exact):
            return mul_sparse(inverse, left.mapping)
        return mul(left, inverse)

    def _power(self, base: Value, k: int, order: int) -> Value:
        if isinstance(base, Exact):
            if k >= 0:
                return base.power(k)
            single = base.monomial
            if single is not None:
                exp, coefficient = single
                return Exact.of({-exp: 1 / coefficient}).power(-k)
            base = base.to_series(self.ring, order)
        return power(base, k)


def evaluate(expr: Expr, order: int, ring: Ring, retries: int = 4) -> Series:
    return Evaluator(ring, retries).evaluate(expr, order)
