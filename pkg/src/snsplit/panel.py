"""Core panel types, split-index arithmetic and projection rules.

A panel is an n x p matrix with rows indexed by time.  The split plan
partitions the time axis into two end blocks of size m = floor(n*epsilon)
and a middle block of size N = n - 2m; only the outermost m1 =
floor(n*(epsilon - eta)) observations of each end block are used to
estimate the projection direction, leaving trimmed buffers of size
m2 = m - m1 next to the middle block.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math

import numpy as np

from .errors import DimensionMismatch, InsufficientSample, InvalidSplit

DEFAULT_EPSILON = 0.1
DEFAULT_ETA = 0.04


@dataclass(frozen=True)
class PanelSeries:
    """An n x p matrix of finite reals, row t = observation at time t."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim != 2:
            raise DimensionMismatch(f"panel must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise DimensionMismatch(f"panel must be at least 1x1, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise DimensionMismatch("panel contains NaN or Inf entries")
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class SplitPlan:
    """Derived split indices for a sample of length n."""

    epsilon: float
    eta: float
    n: int
    m: int
    m1: int
    m2: int
    N: int


@dataclass(frozen=True)
class ProjectedSeries:
    """Scalar middle-block sequence obtained by projecting onto a direction."""

    y: np.ndarray
    direction: np.ndarray
    plan: SplitPlan


def _exact_floor_product(n: int, ratio) -> int:
    """floor(n * ratio), using exact rational arithmetic when the ratio is
    supplied as a string/Fraction so that e.g. n*(0.1-0.04) cannot lose the
    exact integer to floating-point noise."""
    if isinstance(ratio, Fraction):
        return int(n * ratio)  # Fraction floors via int()
    if isinstance(ratio, str):
        return int(n * Fraction(ratio))
    return math.floor(n * float(ratio))


def make_split_plan(n: int, epsilon=DEFAULT_EPSILON, eta=DEFAULT_ETA) -> SplitPlan:
    """Build the split plan for a sample of length n.

    epsilon and eta may be given as floats, or as decimal strings /
    Fractions for exact floor arithmetic.

    Raises InvalidSplit if the ratio constraints fail, InsufficientSample
    if the resulting plan is degenerate (m1 < 1 or N < 4).
    """
    eps_f = float(Fraction(epsilon) if isinstance(epsilon, str) else epsilon)
    eta_f = float(Fraction(eta) if isinstance(eta, str) else eta)
    if not (0.0 < eta_f < eps_f < 0.5):
        raise InvalidSplit(
            f"need 0 < eta < epsilon < 0.5, got epsilon={eps_f}, eta={eta_f}"
        )
    if n < 1:
        raise InsufficientSample(f"n must be positive, got {n}")

    m = _exact_floor_product(n, epsilon)
    if isinstance(epsilon, (str, Fraction)) and isinstance(eta, (str, Fraction)):
        diff = Fraction(epsilon) - Fraction(eta)
    else:
        diff = eps_f - eta_f
    m1 = _exact_floor_product(n, diff)
    m2 = m - m1
    N = n - 2 * m
    if m1 < 1:
        raise InsufficientSample(f"m1 = floor(n*(epsilon-eta)) = {m1} < 1 for n={n}")
    if N < 4:
        raise InsufficientSample(f"middle block N = n - 2m = {N} < 4 for n={n}")
    return SplitPlan(epsilon=eps_f, eta=eta_f, n=n, m=m, m1=m1, m2=m2, N=N)


def _check_plan(x: PanelSeries, plan: SplitPlan):
    if plan.n != x.n:
        raise DimensionMismatch(f"plan built for n={plan.n}, panel has n={x.n}")


def dense_direction(x: PanelSeries, plan: SplitPlan) -> np.ndarray:
    """Difference of the outer block means: mean(rows 1..m1) - mean(last m1 rows)."""
    _check_plan(x, plan)
    head = x.data[: plan.m1].mean(axis=0)
    tail = x.data[x.n - plan.m1 :].mean(axis=0)
    return head - tail


def sparse_direction(x: PanelSeries, plan: SplitPlan) -> tuple[np.ndarray, int]:
    """Signed basis vector at the coordinate with the largest absolute block-mean
    difference.  Ties break to the smallest index; an exactly-zero difference at
    the winning coordinate gets sign +1.

    Returns (direction, k_star) with k_star as a 1-based coordinate index.
    """
    diff = dense_direction(x, plan)
    k0 = int(np.argmax(np.abs(diff)))  # first maximum = smallest index
    sign = 1.0 if diff[k0] >= 0 else -1.0
    direction = np.zeros(x.p)
    direction[k0] = sign
    return direction, k0 + 1


def project(x: PanelSeries, direction: np.ndarray, plan: SplitPlan) -> ProjectedSeries:
    """Inner products of the middle-block rows with the direction."""
    _check_plan(x, plan)
    direction = np.asarray(direction, dtype=np.float64)
    if direction.shape != (x.p,):
        raise DimensionMismatch(
            f"direction has shape {direction.shape}, panel has p={x.p}"
        )
    middle = x.data[plan.m : plan.n - plan.m]
    return ProjectedSeries(y=middle @ direction, direction=direction, plan=plan)
