"""
Observer Methods & Configuration
=================================
Every compared set-based estimator is one row of METHOD_TABLE:

    method      category       set type              prediction      correction
    ESO-E       intersection   ellipsoid             linremainder    ellipsoid
    FRad-A      intersection   zonotope              mve             frobenius
    FRad-B      intersection   zonotope              linremainder    joint_frobenius
    VolMin-A    intersection   zonotope              mve             volume
    VolMin-B    intersection   zonotope              linremainder    generator_elimination
    ZDC         intersection   zonotope              dc              frobenius
    CZDC        intersection   constrained zonotope  dc              czstrip
    CZN-A       intersection   constrained zonotope  linremainder    cz_exact
    CZN-B       intersection   constrained zonotope  linremainder    czstrip
    CZMV        intersection   constrained zonotope  mve             czstrip
    FRad-C      propagation    zonotope              luenberger      (in the gain)
    pDTDI       interval       interval              partitioned     box
    CZKH        interval       constrained zonotope  mixed_monotone  czstrip
    ZBKH        interval       zonotope bundle       mixed_monotone  bundle
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional

import numpy as np

from src.errors import ConfigError
from src.rangebound.dc import DEFAULT_VERTEX_LIMIT_DIM, DCSplit
from src.sets.reduction import REDUCTION_METHODS
from src.system.model import Augmentation


class ObserverMethod(str, Enum):
    ESO_E = "ESO-E"
    FRAD_A = "FRad-A"
    FRAD_B = "FRad-B"
    VOLMIN_A = "VolMin-A"
    VOLMIN_B = "VolMin-B"
    ZDC = "ZDC"
    CZDC = "CZDC"
    CZN_A = "CZN-A"
    CZN_B = "CZN-B"
    CZMV = "CZMV"
    FRAD_C = "FRad-C"
    PDTDI = "pDTDI"
    CZKH = "CZKH"
    ZBKH = "ZBKH"

    @classmethod
    def parse(cls, text: str) -> "ObserverMethod":
        """Case-insensitive lookup; unknown names raise ConfigError with suggestions."""
        # local import keeps benchmarks free of an observers dependency
        from src.benchmarks.registry import suggest

        wanted = text.strip().lower()
        for method in cls:
            if method.value.lower() == wanted:
                return method
        raise ConfigError(f"unknown observer method {text!r}" + suggest(text, [m.value for m in cls]))


class Category(str, Enum):
    INTERSECTION = "intersection"
    PROPAGATION = "propagation"
    INTERVAL = "interval"


class Representation(str, Enum):
    ELLIPSOID = "ellipsoid"
    ZONOTOPE = "zonotope"
    CONSTRAINED_ZONOTOPE = "constrained zonotope"
    INTERVAL = "interval"
    BUNDLE = "zonotope bundle"


@dataclass(frozen=True)
class MethodSpec:
    method: ObserverMethod
    category: Category
    representation: Representation
    prediction: str
    correction: str
    description: str


def _row(method, category, representation, prediction, correction, description) -> MethodSpec:
    return MethodSpec(method, category, representation, prediction, correction, description)


M, C, R = ObserverMethod, Category, Representation

METHOD_TABLE: Dict[ObserverMethod, MethodSpec] = {
    s.method: s
    for s in (
        _row(M.ESO_E, C.INTERSECTION, R.ELLIPSOID, "linremainder", "ellipsoid",
             "ellipsoidal set-membership filter, min-volume strip fusion"),
        _row(M.FRAD_A, C.INTERSECTION, R.ZONOTOPE, "mve", "frobenius",
             "mean-value zonotope prediction, Frobenius-radius strip gain"),
        _row(M.FRAD_B, C.INTERSECTION, R.ZONOTOPE, "linremainder", "joint_frobenius",
             "linearization with Hessian remainder, joint Frobenius gain over all strips"),
        _row(M.VOLMIN_A, C.INTERSECTION, R.ZONOTOPE, "mve", "volume",
             "mean-value zonotope prediction, hull-volume line search on the strip gain"),
        _row(M.VOLMIN_B, C.INTERSECTION, R.ZONOTOPE, "linremainder", "generator_elimination",
             "linearization with Hessian remainder, generator-eliminating strip gains"),
        _row(M.ZDC, C.INTERSECTION, R.ZONOTOPE, "dc", "frobenius",
             "difference-of-convex prediction, Frobenius-radius strip gain"),
        _row(M.CZDC, C.INTERSECTION, R.CONSTRAINED_ZONOTOPE, "dc", "czstrip",
             "difference-of-convex prediction, exact strip constraints"),
        _row(M.CZN_A, C.INTERSECTION, R.CONSTRAINED_ZONOTOPE, "linremainder", "cz_exact",
             "linearization with Hessian remainder, one generalized intersection per step"),
        _row(M.CZN_B, C.INTERSECTION, R.CONSTRAINED_ZONOTOPE, "linremainder", "czstrip",
             "linearization with Hessian remainder, exact strip constraints"),
        _row(M.CZMV, C.INTERSECTION, R.CONSTRAINED_ZONOTOPE, "mve", "czstrip",
             "mean-value constrained-zonotope prediction, exact strip constraints"),
        _row(M.FRAD_C, C.PROPAGATION, R.ZONOTOPE, "luenberger", "none",
             "Luenberger-type zonotope propagation with a covariance-like gain"),
        _row(M.PDTDI, C.INTERVAL, R.INTERVAL, "partitioned", "box",
             "partitioned interval inclusion with redundant-state constraint propagation"),
        _row(M.CZKH, C.INTERVAL, R.CONSTRAINED_ZONOTOPE, "mixed_monotone", "czstrip",
             "mixed-monotone remainder around the mid Jacobian, constrained zonotope"),
        _row(M.ZBKH, C.INTERVAL, R.BUNDLE, "mixed_monotone", "bundle",
             "mixed-monotone remainder per bundle member plus a decomposition box"),
    )
}
del M, C, R

INCLUSIONS = ("natural", "centered")
DC_METHODS = (ObserverMethod.ZDC, ObserverMethod.CZDC)
CONSTRAINED_METHODS = tuple(
    m for m, s in METHOD_TABLE.items() if s.representation is Representation.CONSTRAINED_ZONOTOPE
)


@dataclass(frozen=True, eq=False)
class ObserverConfig:
    """
    Tuning of one observer run. Budgets default to the shared values of the
    benchmark; dc_split and augmentation come from the benchmark when the
    method needs them.
    """

    method: ObserverMethod
    max_order: float = 30.0
    max_constraints: int = 5
    partitions: int = 5
    reduction: str = "pca"
    dc_split: Optional[DCSplit] = None
    augmentation: Optional[Augmentation] = None
    max_members: int = 5
    dc_vertex_limit_dim: int = DEFAULT_VERTEX_LIMIT_DIM
    inclusion: str = "natural"
    gain_override: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def spec(self) -> MethodSpec:
        return METHOD_TABLE[self.method]

    @classmethod
    def for_benchmark(cls, method, benchmark, **overrides) -> "ObserverConfig":
        """Config with the benchmark's budgets, DC split and augmentation."""
        if not isinstance(method, ObserverMethod):
            method = ObserverMethod.parse(str(method))
        b = benchmark.budgets
        config = cls(
            method=method,
            max_order=b.max_order,
            max_constraints=b.max_constraints,
            partitions=b.partitions,
            reduction=b.reduction,
            dc_split=benchmark.dc_split if method in DC_METHODS else None,
            augmentation=benchmark.augmentation if method is ObserverMethod.PDTDI else None,
        )
        return replace(config, **overrides) if overrides else config

    def validate(self, n: Optional[int] = None) -> "ObserverConfig":
        """Raise ConfigError on an unusable configuration; returns self."""
        name = self.method.value
        if self.max_order < 1:
            raise ConfigError(f"{name}: max_order must be >= 1, got {self.max_order}")
        if self.max_constraints < 0:
            raise ConfigError(f"{name}: max_constraints must be >= 0, got {self.max_constraints}")
        if self.partitions < 1:
            raise ConfigError(f"{name}: partitions must be >= 1, got {self.partitions}")
        if self.max_members < 1:
            raise ConfigError(f"{name}: max_members must be >= 1, got {self.max_members}")
        if self.reduction not in REDUCTION_METHODS:
            raise ConfigError(f"{name}: reduction must be one of {REDUCTION_METHODS}, got {self.reduction!r}")
        if self.inclusion not in INCLUSIONS:
            raise ConfigError(f"{name}: inclusion must be one of {INCLUSIONS}, got {self.inclusion!r}")
        if self.method in DC_METHODS and self.dc_split is None:
            raise ConfigError(f"{name} needs a difference-of-convex split of the dynamics")
        if self.augmentation is not None and self.method is not ObserverMethod.PDTDI:
            raise ConfigError(f"{name}: redundant-state augmentation is only used by pDTDI")
        if n is not None:
            if self.dc_split is not None and self.dc_split.domain.dim != n:
                raise ConfigError(f"{name}: DC split domain has dimension {self.dc_split.domain.dim}, expected {n}")
            if self.augmentation is not None and self.augmentation.original_dim != n:
                raise ConfigError(
                    f"{name}: augmentation lifts dimension {self.augmentation.original_dim}, expected {n}"
                )
            if self.gain_override is not None and np.shape(self.gain_override)[0] != n:
                raise ConfigError(f"{name}: gain override has {np.shape(self.gain_override)[0]} rows, expected {n}")
        return self


def method_catalog() -> List[Dict[str, str]]:
    """One record per method, in table order."""
    return [
        {
            "method": s.method.value,
            "category": s.category.value,
            "set": s.representation.value,
            "prediction": s.prediction,
            "correction": s.correction,
            "description": s.description,
        }
        for s in METHOD_TABLE.values()
    ]
