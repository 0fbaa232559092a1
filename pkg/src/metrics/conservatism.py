"""
Conservatism Measures
======================
    ṽ = 1/n_steps · Σ_k vol(hull(R_k))^(1/n)
    w̃ = 1/(N·n_steps) · Σ_k Σ_i ρ(R_k, d_i) + ρ(R_k, -d_i)

with N = 10n unit directions shared by every observer of a comparison.
Both are averaged over the sequence they are given; the harness passes the
estimates of steps 1..n_steps (the initial estimate is excluded).
"""

import math
from typing import List, Optional, Sequence

import numpy as np

from src.errors import MetricError
from src.sets.operations import interval_hull, support
from src.sets.representations import EmptySet, dimension

DIRECTIONS_PER_DIM = 10


def _checked(R_seq: Sequence, cutoff: Optional[int]) -> list:
    seq = list(R_seq)[:cutoff] if cutoff is not None else list(R_seq)
    if not seq:
        raise MetricError("metric over an empty sequence of estimates")
    for k, R in enumerate(seq):
        if R is None or isinstance(R, EmptySet):
            raise MetricError(f"estimate {k} is empty")
    dims = {dimension(R) for R in seq}
    if len(dims) != 1:
        raise MetricError(f"estimates of mixed dimension {sorted(dims)}")
    return seq


def interval_volume_measure(R_seq: Sequence, n: Optional[int] = None, cutoff: Optional[int] = None) -> float:
    """Mean n-th root of the interval-hull volume."""
    seq = _checked(R_seq, cutoff)
    n = dimension(seq[0]) if n is None else n
    if n != dimension(seq[0]):
        raise MetricError(f"n = {n} but estimates have dimension {dimension(seq[0])}")
    roots = []
    for R in seq:
        width = interval_hull(R).width
        volume = float(np.prod(width))
        if math.isfinite(volume):
            roots.append(volume ** (1.0 / n))
        else:
            # overflow in high dimension
            roots.append(float(np.exp(np.mean(np.log(width)))))
    return math.fsum(roots) / len(roots)


def mean_width_measure(R_seq: Sequence, directions, cutoff: Optional[int] = None) -> float:
    """Mean support width ρ(d) + ρ(-d) over all steps and directions."""
    seq = _checked(R_seq, cutoff)
    D = np.atleast_2d(np.asarray(directions, dtype=float))
    if D.shape[1] != dimension(seq[0]):
        raise MetricError(f"directions have {D.shape[1]} entries, estimates dimension {dimension(seq[0])}")
    if not np.allclose(np.linalg.norm(D, axis=1), 1.0, atol=1e-9):
        raise MetricError("width directions must be unit vectors")
    widths = [support(R, d) + support(R, -d) for R in seq for d in D]
    return math.fsum(widths) / len(widths)


def mean_width(R, directions) -> float:
    """Mean support width ρ(d) + ρ(-d) of one estimate over the directions."""
    D = np.atleast_2d(np.asarray(directions, dtype=float))
    widths = [support(R, d) + support(R, -d) for d in D]
    return math.fsum(widths) / len(widths)


def normalize(values: Sequence[float]) -> List[float]:
    """
    Divide by the finite minimum; ∞ stays ∞.

    A zero minimum (a degenerate hull) maps the zero entries to 1 and every
    positive entry to ∞.
    """
    values = [float(v) for v in values]
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        raise MetricError("cannot normalize: no finite value")
    best = min(finite)
    if best < 0.0:
        raise MetricError(f"cannot normalize by a negative minimum {best}")
    if best == 0.0:
        return [1.0 if v == 0.0 else math.inf for v in values]
    return [v / best if math.isfinite(v) else math.inf for v in values]


def sample_directions(n: int, seed: int = 0) -> np.ndarray:
    """(10n, n) normalized Gaussian samples, uniform on the sphere."""
    if n < 1:
        raise MetricError(f"direction dimension must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    D = rng.standard_normal((DIRECTIONS_PER_DIM * n, n))
    return D / np.linalg.norm(D, axis=1, keepdims=True)
