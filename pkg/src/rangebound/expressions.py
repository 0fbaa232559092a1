"""
Symbolic Dynamics
==================
f(x, u) as one sympy expression per output component, over the state
symbols x1..xn and input symbols u1..um.

Provides:
    - point evaluation (lambdified, floating-point errors raised)
    - interval evaluation of f, its Jacobian and per-component Hessians
      (compiled lazily, see interval_eval)

Expressions parsed from text keep the printed tree (evaluate=False), so the
dependency effect of interval arithmetic follows the written form.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import parse_expr

from src.errors import DimensionMismatchError, DomainViolationError, UnsupportedExpressionError
from src.rangebound.interval_eval import IntervalFunction
from src.sets.representations import IntervalVector

_CACHE_KEYS = ("_point_fns", "_jac_fns", "_value_ifn", "_jac_ifn", "_hess_ifns")


def state_symbols(n: int) -> Tuple[sp.Symbol, ...]:
    return tuple(sp.Symbol(f"x{i + 1}", real=True) for i in range(n))


def input_symbols(m: int) -> Tuple[sp.Symbol, ...]:
    return tuple(sp.Symbol(f"u{j + 1}", real=True) for j in range(m))


class SymbolicDynamics:
    """Immutable once built; compiled evaluators are caches and are not pickled."""

    def __init__(self, exprs: Sequence, n_states: int, n_inputs: int = 0, name: str = ""):
        self.n_states = n_states
        self.n_inputs = n_inputs
        self.name = name
        self.states = state_symbols(n_states)
        self.inputs = input_symbols(n_inputs)
        self.exprs: Tuple[sp.Basic, ...] = tuple(sp.sympify(e) for e in exprs)
        allowed = set(self.states) | set(self.inputs)
        for e in self.exprs:
            extra = e.free_symbols - allowed
            if extra:
                raise UnsupportedExpressionError(
                    f"unknown symbols {sorted(map(str, extra))} in {e}"
                )
        self._reset_caches()

    @classmethod
    def from_text(
        cls,
        texts: Sequence[str],
        n_states: Optional[int] = None,
        n_inputs: int = 0,
        name: str = "",
    ) -> "SymbolicDynamics":
        """One infix expression per component, e.g. ``"x1 + 0.025*x2"``."""
        n = len(texts) if n_states is None else n_states
        local = {s.name: s for s in state_symbols(n) + input_symbols(n_inputs)}
        local["sqrt"] = sp.sqrt
        exprs = []
        for text in texts:
            try:
                exprs.append(parse_expr(text, local_dict=local, evaluate=False))
            except (SyntaxError, TypeError) as exc:
                raise UnsupportedExpressionError(f"cannot parse {text!r}: {exc}") from exc
        return cls(exprs, n, n_inputs, name)

    # ------------------------------------------------------------------ #
    # PICKLING                                                             #
    # ------------------------------------------------------------------ #

    def _reset_caches(self) -> None:
        for key in _CACHE_KEYS:
            setattr(self, key, None)

    def __getstate__(self):
        state = self.__dict__.copy()
        for key in _CACHE_KEYS:
            state[key] = None
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)

    # ------------------------------------------------------------------ #
    # SHAPES                                                               #
    # ------------------------------------------------------------------ #

    @property
    def n_outputs(self) -> int:
        return len(self.exprs)

    @property
    def symbols(self) -> Tuple[sp.Symbol, ...]:
        return self.states + self.inputs

    def _point_args(self, x, u) -> np.ndarray:
        x = np.asarray(x, dtype=float).reshape(-1)
        if x.size != self.n_states:
            raise DimensionMismatchError(f"state has {x.size} entries, expected {self.n_states}")
        u = np.zeros(self.n_inputs) if u is None else np.asarray(u, dtype=float).reshape(-1)
        if u.size != self.n_inputs:
            raise DimensionMismatchError(f"input has {u.size} entries, expected {self.n_inputs}")
        return np.concatenate([x, u])

    def _box_args(self, X: IntervalVector, u) -> Tuple[np.ndarray, np.ndarray]:
        if X.dim != self.n_states:
            raise DimensionMismatchError(f"box has dimension {X.dim}, expected {self.n_states}")
        if isinstance(u, IntervalVector):
            u_lo, u_hi = u.lower, u.upper
        else:
            u_lo = u_hi = (
                np.zeros(self.n_inputs) if u is None else np.asarray(u, dtype=float).reshape(-1)
            )
        if u_lo.size != self.n_inputs:
            raise DimensionMismatchError(f"input has {u_lo.size} entries, expected {self.n_inputs}")
        return np.concatenate([X.lower, u_lo]), np.concatenate([X.upper, u_hi])

    # ------------------------------------------------------------------ #
    # POINT EVALUATION                                                     #
    # ------------------------------------------------------------------ #

    def _lambdas(self, exprs) -> List:
        return [sp.lambdify(self.symbols, e, modules="numpy") for e in exprs]

    def _call_points(self, fns, args: np.ndarray, batch: int) -> np.ndarray:
        cols = []
        try:
            with np.errstate(invalid="raise", divide="raise", over="raise"):
                for fn in fns:
                    value = np.asarray(fn(*args), dtype=float)
                    cols.append(np.broadcast_to(value, (batch,)) if batch else value)
        except (FloatingPointError, ZeroDivisionError, ValueError) as exc:
            raise DomainViolationError(f"point evaluation of {self.name or 'f'} failed: {exc}") from exc
        out = np.array(cols, dtype=float)
        if not np.all(np.isfinite(out)):
            raise DomainViolationError(f"point evaluation of {self.name or 'f'} is not finite")
        return out.T if batch else out

    def evaluate(self, x, u=None) -> np.ndarray:
        """f(x, u) at a point."""
        if self._point_fns is None:
            self._point_fns = self._lambdas(self.exprs)
        return self._call_points(self._point_fns, self._point_args(x, u), 0)

    def evaluate_batch(self, X: np.ndarray, u=None) -> np.ndarray:
        """f at every row of X (shape (N, n)) with a common input."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_states:
            raise DimensionMismatchError(f"points have {X.shape[1]} columns, expected {self.n_states}")
        u = np.zeros(self.n_inputs) if u is None else np.asarray(u, dtype=float).reshape(-1)
        args = [X[:, k] for k in range(self.n_states)] + [np.full(X.shape[0], v) for v in u]
        if self._point_fns is None:
            self._point_fns = self._lambdas(self.exprs)
        return self._call_points(self._point_fns, args, X.shape[0])

    def jacobian_exprs(self) -> List[List[sp.Basic]]:
        return [[sp.diff(e, s) for s in self.states] for e in self.exprs]

    def jacobian(self, x, u=None) -> np.ndarray:
        """∂f/∂x at a point."""
        if self._jac_fns is None:
            self._jac_fns = self._lambdas([d for row in self.jacobian_exprs() for d in row])
        flat = self._call_points(self._jac_fns, self._point_args(x, u), 0)
        return flat.reshape(self.n_outputs, self.n_states)

    # ------------------------------------------------------------------ #
    # INTERVAL EVALUATION                                                  #
    # ------------------------------------------------------------------ #

    def interval_value(self, X: IntervalVector, u=None) -> Tuple[np.ndarray, np.ndarray]:
        if self._value_ifn is None:
            self._value_ifn = IntervalFunction([[e] for e in self.exprs], self.symbols)
        lo, hi = self._value_ifn(*self._box_args(X, u))
        return lo[:, 0], hi[:, 0]

    def interval_jacobian(self, X: IntervalVector, u=None) -> Tuple[np.ndarray, np.ndarray]:
        if self._jac_ifn is None:
            self._jac_ifn = IntervalFunction(self.jacobian_exprs(), self.symbols)
        return self._jac_ifn(*self._box_args(X, u))

    def interval_hessian(self, i: int, X: IntervalVector, u=None) -> Tuple[np.ndarray, np.ndarray]:
        if self._hess_ifns is None:
            self._hess_ifns = {}
        if i not in self._hess_ifns:
            e = self.exprs[i]
            rows = [[sp.diff(e, a, b) for b in self.states] for a in self.states]
            self._hess_ifns[i] = IntervalFunction(rows, self.symbols)
        return self._hess_ifns[i](*self._box_args(X, u))

    def __repr__(self):
        return f"SymbolicDynamics({self.name or 'f'}, n={self.n_states}, m={self.n_inputs})"
