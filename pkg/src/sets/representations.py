"""
Set Representations
====================
The five set types used by the estimators, plus measurement strips and an
explicit EmptySet marker:

    IntervalVector       [lower, upper]                (axis-aligned box)
    Ellipsoid            {x : (x-a)ᵀ P⁻¹ (x-a) ≤ 1}
    Zonotope             {c + Gξ : ξ ∈ [-1,1]^r}
    ConstrainedZonotope  {c + Gξ : ξ ∈ [-1,1]^r, Aξ = b}
    ZonotopeBundle       ∩ of member zonotopes

All values are immutable after construction: arrays are copied and marked
read-only, so sets may be shared freely between threads and processes.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from src.errors import DimensionMismatchError, SetError


def _vec(x) -> np.ndarray:
    a = np.array(x, dtype=float).reshape(-1)
    a.setflags(write=False)
    return a


def _mat(x, rows: int) -> np.ndarray:
    a = np.array(x, dtype=float)
    if a.size == 0:
        a = np.zeros((rows, 0))
    elif a.ndim == 1:
        a = a.reshape(rows, -1)
    a.setflags(write=False)
    return a


def _freeze(obj, name: str, value) -> None:
    object.__setattr__(obj, name, value)


@dataclass(frozen=True, eq=False)
class IntervalVector:
    """Axis-aligned box. Infinite bounds are allowed (unbounded noise)."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo, hi = _vec(self.lower), _vec(self.upper)
        if lo.shape != hi.shape:
            raise DimensionMismatchError(
                f"interval bounds differ in length: {lo.size} vs {hi.size}"
            )
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            raise SetError("interval bounds contain NaN")
        if np.any(lo > hi):
            raise SetError("interval lower bound exceeds upper bound")
        _freeze(self, "lower", lo)
        _freeze(self, "upper", hi)

    @classmethod
    def from_center_radius(cls, center, radius) -> "IntervalVector":
        c, r = np.asarray(center, dtype=float), np.abs(np.asarray(radius, dtype=float))
        return cls(c - r, c + r)

    @classmethod
    def unit(cls, n: int, scale: float = 1.0) -> "IntervalVector":
        """scale · Bⁿ."""
        return cls(-scale * np.ones(n), scale * np.ones(n))

    @classmethod
    def point(cls, x) -> "IntervalVector":
        return cls(x, x)

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lower + self.upper)

    @property
    def radius(self) -> np.ndarray:
        return 0.5 * (self.upper - self.lower)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def volume(self) -> float:
        return float(np.prod(self.width))

    def is_bounded(self) -> bool:
        return bool(np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper)))

    def contains(self, other: "IntervalVector", tol: float = 0.0) -> bool:
        return bool(
            np.all(self.lower <= other.lower + tol) and np.all(other.upper <= self.upper + tol)
        )

    def __repr__(self):
        return f"IntervalVector(lower={self.lower.tolist()}, upper={self.upper.tolist()})"


@dataclass(frozen=True, eq=False)
class Ellipsoid:
    """Ellipsoid with center a and symmetric positive definite shape P."""

    center: np.ndarray
    shape: np.ndarray

    def __post_init__(self):
        a = _vec(self.center)
        P = np.array(self.shape, dtype=float).reshape(a.size, a.size)
        P = 0.5 * (P + P.T)
        if not np.all(np.isfinite(P)):
            raise SetError("ellipsoid shape matrix is not finite")
        if a.size and np.linalg.eigvalsh(P).min() <= 0.0:
            raise SetError("ellipsoid shape matrix is not positive definite")
        P.setflags(write=False)
        _freeze(self, "center", a)
        _freeze(self, "shape", P)

    @property
    def dim(self) -> int:
        return self.center.size

    def __repr__(self):
        return f"Ellipsoid(center={self.center.tolist()}, shape={self.shape.tolist()})"


@dataclass(frozen=True, eq=False)
class Zonotope:
    """c ⊕ G·[-1,1]^r. r = 0 represents the point c."""

    center: np.ndarray
    generators: np.ndarray

    def __post_init__(self):
        c = _vec(self.center)
        G = _mat(self.generators, c.size)
        if G.shape[0] != c.size:
            raise DimensionMismatchError(
                f"generator matrix has {G.shape[0]} rows for a {c.size}-dim center"
            )
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(G))):
            raise SetError("zonotope has non-finite entries")
        _freeze(self, "center", c)
        _freeze(self, "generators", G)

    @classmethod
    def from_interval(cls, box: IntervalVector) -> "Zonotope":
        r = box.radius
        keep = r > 0
        return cls(box.center, np.diag(r)[:, keep])

    @classmethod
    def point(cls, x) -> "Zonotope":
        x = np.asarray(x, dtype=float).reshape(-1)
        return cls(x, np.zeros((x.size, 0)))

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def n_generators(self) -> int:
        return self.generators.shape[1]

    @property
    def order(self) -> float:
        return self.n_generators / self.dim if self.dim else 0.0

    def drop_zero_generators(self, tol: float = 0.0) -> "Zonotope":
        keep = np.abs(self.generators).sum(axis=0) > tol
        if keep.all():
            return self
        return Zonotope(self.center, self.generators[:, keep])

    def __repr__(self):
        return f"Zonotope(dim={self.dim}, generators={self.n_generators})"


@dataclass(frozen=True, eq=False)
class ConstrainedZonotope:
    """{c + Gξ : ξ ∈ [-1,1]^r, Aξ = b}."""

    center: np.ndarray
    generators: np.ndarray
    constraint_matrix: np.ndarray
    constraint_offset: np.ndarray

    def __post_init__(self):
        c = _vec(self.center)
        G = _mat(self.generators, c.size)
        b = _vec(self.constraint_offset)
        A = np.array(self.constraint_matrix, dtype=float)
        if A.size == 0:
            A = np.zeros((b.size, G.shape[1]))
        A = A.reshape(b.size, G.shape[1]) if A.ndim != 2 else A
        A.setflags(write=False)
        if G.shape[0] != c.size:
            raise DimensionMismatchError("generator rows do not match center dimension")
        if A.shape != (b.size, G.shape[1]):
            raise DimensionMismatchError(
                f"constraint matrix shape {A.shape} does not match "
                f"({b.size}, {G.shape[1]})"
            )
        for arr in (c, G, A, b):
            if not np.all(np.isfinite(arr)):
                raise SetError("constrained zonotope has non-finite entries")
        _freeze(self, "center", c)
        _freeze(self, "generators", G)
        _freeze(self, "constraint_matrix", A)
        _freeze(self, "constraint_offset", b)

    @classmethod
    def from_zonotope(cls, Z: Zonotope) -> "ConstrainedZonotope":
        return cls(Z.center, Z.generators, np.zeros((0, Z.n_generators)), np.zeros(0))

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def n_generators(self) -> int:
        return self.generators.shape[1]

    @property
    def n_constraints(self) -> int:
        return self.constraint_offset.size

    @property
    def order(self) -> float:
        return self.n_generators / self.dim if self.dim else 0.0

    def __repr__(self):
        return (
            f"ConstrainedZonotope(dim={self.dim}, generators={self.n_generators}, "
            f"constraints={self.n_constraints})"
        )


@dataclass(frozen=True, eq=False)
class ZonotopeBundle:
    """Implicit intersection of its member zonotopes."""

    members: Tuple[Zonotope, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise SetError("a zonotope bundle needs at least one member")
        dims = {z.dim for z in members}
        if len(dims) != 1:
            raise DimensionMismatchError(f"bundle members have dimensions {sorted(dims)}")
        _freeze(self, "members", members)

    @property
    def dim(self) -> int:
        return self.members[0].dim

    def __repr__(self):
        return f"ZonotopeBundle(dim={self.dim}, members={len(self.members)})"


@dataclass(frozen=True, eq=False)
class Strip:
    """Measurement strip {x : offset - normalᵀx ∈ [noise_lower, noise_upper]}."""

    normal: np.ndarray
    offset: float
    noise_lower: float
    noise_upper: float

    def __post_init__(self):
        c = _vec(self.normal)
        if not np.any(c != 0.0):
            raise SetError("strip normal must be nonzero")
        if self.noise_lower > self.noise_upper:
            raise SetError("strip noise bound has lower > upper")
        _freeze(self, "normal", c)
        _freeze(self, "offset", float(self.offset))
        _freeze(self, "noise_lower", float(self.noise_lower))
        _freeze(self, "noise_upper", float(self.noise_upper))

    @property
    def dim(self) -> int:
        return self.normal.size

    @property
    def bounds(self) -> Tuple[float, float]:
        """Range allowed for normalᵀx."""
        return self.offset - self.noise_upper, self.offset - self.noise_lower

    @property
    def midpoint(self) -> float:
        lo, hi = self.bounds
        return 0.5 * (lo + hi)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.noise_upper - self.noise_lower)


@dataclass(frozen=True)
class EmptySet:
    """Result of an infeasible intersection."""

    dim: int


SetValue = Union[IntervalVector, Ellipsoid, Zonotope, ConstrainedZonotope, ZonotopeBundle]
MaybeEmpty = Union[SetValue, EmptySet]

SET_TYPES = (IntervalVector, Ellipsoid, Zonotope, ConstrainedZonotope, ZonotopeBundle, EmptySet)


def dimension(X) -> int:
    if isinstance(X, SET_TYPES):
        return X.dim
    raise SetError(f"not a set value: {type(X).__name__}")


def measurement_strips(C: np.ndarray, y: np.ndarray, V: IntervalVector) -> Sequence[Strip]:
    """One strip per measurement row; zero rows carry no information."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    y = np.asarray(y, dtype=float).reshape(-1)
    return [
        Strip(C[j], y[j], V.lower[j], V.upper[j])
        for j in range(y.size)
        if np.any(C[j] != 0.0)
    ]
