"""
Interval Evaluator
===================
Compiles sympy expression trees into closures over interval bounds.

Supported nodes: Add, Mul, Pow (numeric exponent), Symbol, Number.
sqrt(e) arrives as Pow(e, 1/2). Anything else is rejected at compile time.

    even integer power     tight (never below zero)
    negative power         refuses intervals containing 0
    fractional power       refuses negative lower bounds
"""

from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np
import sympy as sp

from src.errors import (
    DimensionMismatchError,
    DomainViolationError,
    InvalidIntervalError,
    UnsupportedExpressionError,
)

Bounds = Tuple[float, float]
Evaluator = Callable[[np.ndarray, np.ndarray], Bounds]


@dataclass(frozen=True, eq=False)
class IntervalMatrix:
    """Elementwise interval matrix [lower, upper]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.array(self.lower, dtype=float)
        hi = np.array(self.upper, dtype=float)
        if lo.shape != hi.shape:
            raise DimensionMismatchError(f"interval matrix bounds {lo.shape} vs {hi.shape}")
        if np.isnan(lo).any() or np.isnan(hi).any():
            raise InvalidIntervalError("interval matrix has NaN bounds")
        if np.any(lo > hi):
            raise InvalidIntervalError("interval matrix lower bound exceeds upper bound")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def from_point(cls, M) -> "IntervalMatrix":
        return cls(M, M)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.lower.shape

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    @property
    def radius(self) -> np.ndarray:
        return 0.5 * (self.upper - self.lower)

    def contains(self, M, tol: float = 0.0) -> bool:
        M = np.asarray(M, dtype=float)
        return bool(np.all(self.lower - tol <= M) and np.all(M <= self.upper + tol))

    def matmul(self, G: np.ndarray) -> "IntervalMatrix":
        """[J]·G for a real matrix G (exact interval product)."""
        c = self.center @ G
        r = self.radius @ np.abs(G)
        return IntervalMatrix(c - r, c + r)

    def __repr__(self):
        return f"IntervalMatrix(shape={self.shape})"


# ------------------------------------------------------------------ #
# SCALAR INTERVAL RULES                                                #
# ------------------------------------------------------------------ #

def _mul(a: Bounds, b: Bounds) -> Bounds:
    products = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    products = [0.0 if np.isnan(p) else p for p in products]
    return min(products), max(products)


def _int_power(a: Bounds, k: int) -> Bounds:
    lo, hi = a
    if k == 0:
        return 1.0, 1.0
    if k % 2 == 1 or lo >= 0.0:
        return lo ** k, hi ** k
    if hi <= 0.0:
        return hi ** k, lo ** k
    return 0.0, max(lo ** k, hi ** k)


def _reciprocal(a: Bounds, node: sp.Basic) -> Bounds:
    lo, hi = a
    if lo <= 0.0 <= hi:
        raise DomainViolationError(f"division by an interval containing zero [{lo}, {hi}]", str(node))
    return 1.0 / hi, 1.0 / lo


def _real_power(a: Bounds, e: float, node: sp.Basic) -> Bounds:
    lo, hi = a
    if lo < 0.0 or (e < 0.0 and lo <= 0.0):
        raise DomainViolationError(
            f"power {e} of an interval with lower bound {lo}", str(node)
        )
    v1, v2 = lo ** e, hi ** e
    return (v1, v2) if e > 0 else (v2, v1)


def _exponent(node: sp.Pow):
    e = node.exp
    if not e.is_number:
        raise UnsupportedExpressionError(f"non-numeric exponent in {node}")
    if e.is_Integer:
        return int(e)
    value = float(e)
    if value.is_integer():
        return int(value)
    return value


def compile_interval(expr: sp.Basic, index: Dict[sp.Symbol, int]) -> Evaluator:
    """Closure (lo, hi) -> (min, max) of expr over the box of its variables."""
    if expr.is_Symbol:
        if expr not in index:
            raise UnsupportedExpressionError(f"unknown symbol {expr}")
        k = index[expr]
        return lambda lo, hi: (float(lo[k]), float(hi[k]))

    if expr.is_Number:
        value = float(expr)
        return lambda lo, hi: (value, value)

    if expr.is_Add:
        parts = [compile_interval(a, index) for a in expr.args]

        def add(lo, hi):
            s_lo = s_hi = 0.0
            for p in parts:
                a = p(lo, hi)
                s_lo += a[0]
                s_hi += a[1]
            return s_lo, s_hi

        return add

    if expr.is_Mul:
        parts = [compile_interval(a, index) for a in expr.args]

        def mul(lo, hi):
            acc = parts[0](lo, hi)
            for p in parts[1:]:
                acc = _mul(acc, p(lo, hi))
            return acc

        return mul

    if expr.is_Pow:
        base = compile_interval(expr.base, index)
        e = _exponent(expr)
        node = expr
        if isinstance(e, int) and e >= 0:
            return lambda lo, hi: _int_power(base(lo, hi), e)
        if isinstance(e, int):
            return lambda lo, hi: _int_power(_reciprocal(base(lo, hi), node), -e)
        return lambda lo, hi: _real_power(base(lo, hi), e, node)

    raise UnsupportedExpressionError(
        f"unsupported expression node {type(expr).__name__}: {expr}"
    )


class IntervalFunction:
    """
    Compiled interval evaluation of a matrix of expressions. Identically zero
    entries are skipped, so sparse Jacobians and Hessians stay cheap.
    """

    def __init__(self, exprs: Sequence[Sequence[sp.Basic]], symbols: Sequence[sp.Symbol]):
        self.shape = (len(exprs), len(exprs[0]) if exprs else 0)
        index = {s: k for k, s in enumerate(symbols)}
        self._entries: List[Tuple[int, int, Evaluator]] = []
        for i, row in enumerate(exprs):
            for j, e in enumerate(row):
                e = sp.sympify(e)
                if e.is_zero:
                    continue
                self._entries.append((i, j, compile_interval(e, index)))

    def __call__(self, lo: np.ndarray, hi: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        out_lo = np.zeros(self.shape)
        out_hi = np.zeros(self.shape)
        for i, j, fn in self._entries:
            out_lo[i, j], out_hi[i, j] = fn(lo, hi)
        return out_lo, out_hi
