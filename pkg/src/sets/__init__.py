"""
Set Core — representations and set algebra
===========================================
Intervals, ellipsoids, zonotopes, constrained zonotopes and zonotope bundles,
with the exact / outer-approximating operations the estimators compose.
"""

from src.sets.representations import (
    ConstrainedZonotope,
    Ellipsoid,
    EmptySet,
    IntervalVector,
    MaybeEmpty,
    SetValue,
    Strip,
    Zonotope,
    ZonotopeBundle,
    dimension,
    measurement_strips,
)
from src.sets.operations import (
    bundle_to_cz,
    contains_point,
    contract_box,
    enclose_ellipsoid,
    generalized_intersection,
    hull_radius,
    intersect_ellipsoid_strip,
    intersect_interval,
    interval_hull,
    is_empty,
    linear_map,
    minkowski_sum,
    strip_intersection_gain,
    support,
    to_constrained,
    to_zonotope,
    translate,
    zonotope_hull,
)
from src.sets.reduction import reduce_bundle, reduce_constraints, reduce_zonotope

__all__ = [
    "ConstrainedZonotope", "Ellipsoid", "EmptySet", "IntervalVector", "MaybeEmpty",
    "SetValue", "Strip", "Zonotope", "ZonotopeBundle", "dimension", "measurement_strips",
    "bundle_to_cz", "contains_point", "contract_box", "enclose_ellipsoid", "generalized_intersection",
    "hull_radius", "intersect_ellipsoid_strip", "intersect_interval", "interval_hull",
    "is_empty", "linear_map", "minkowski_sum", "strip_intersection_gain", "support",
    "to_constrained", "to_zonotope", "translate", "zonotope_hull",
    "reduce_bundle", "reduce_constraints", "reduce_zonotope",
]
