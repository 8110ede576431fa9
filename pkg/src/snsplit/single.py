"""Self-normalized single-change-point statistic and the three test modes.

The scan statistic studentizes the forward partial-sum process of a scalar
sequence by within-segment CUSUM sums and takes the signed supremum over
candidate break positions.  The panel-level tests project the middle block
onto a dense or sparse direction estimated from the trimmed end blocks,
then apply the scalar scan.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .errors import DegenerateSeries, InsufficientSample
from .panel import (
    PanelSeries,
    SplitPlan,
    dense_direction,
    make_split_plan,
    project,
    sparse_direction,
)


@dataclass(frozen=True)
class SnScanResult:
    """Supremum of the studentized scan and where it is attained."""

    statistic: float
    argmax_k: int  # 1-based position within the scanned sequence
    per_k: Optional[np.ndarray] = None


@dataclass(frozen=True)
class TestOutcome:
    """Decision record for any of the test modes.

    For bonferroni mode, statistic / threshold / p_value / location are
    (dense, sparse) pairs and reject fires when min(p) <= alpha/2.
    """

    mode: str
    alpha: float
    statistic: object
    threshold: object
    p_value: object
    reject: bool
    location: object
    meta: dict = field(default_factory=dict)


def sn_statistic(y, with_per_k: bool = True) -> SnScanResult:
    """Signed supremum of T(k)/sqrt(V(k)) over k = 1..N-1.

    Positions with a zero self-normalizer are excluded; if every position
    is excluded (constant input) DegenerateSeries is raised.
    """
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise InsufficientSample(f"expected a 1-D sequence, got shape {y.shape}")
    if y.size < 4:
        raise InsufficientSample(f"need N >= 4, got N={y.size}")
    if not np.isfinite(y).all():
        raise DegenerateSeries("sequence contains NaN or Inf entries")
    ratios = _kernels.sn_ratios(y)
    if np.all(np.isnan(ratios)):
        raise DegenerateSeries("zero self-normalizer at every scan position")
    k = int(np.nanargmax(ratios))
    return SnScanResult(
        statistic=float(ratios[k]),
        argmax_k=k + 1,
        per_k=ratios if with_per_k else None,
    )


def estimate_location(scan: SnScanResult, plan: SplitPlan) -> int:
    """Map the scan argmax back to the original time index (offset by m)."""
    return plan.m + scan.argmax_k


def sn_univariate_test(y, alpha: float, null) -> TestOutcome:
    """Classical scalar SN change-point test, calibrated against a G null."""
    scan = sn_statistic(y)
    p = null.p_value(scan.statistic)
    return TestOutcome(
        mode="univariate",
        alpha=alpha,
        statistic=scan.statistic,
        threshold=null.threshold(alpha),
        p_value=p,
        reject=bool(p <= alpha),
        location=scan.argmax_k,
        meta={"null": null.describe()},
    )


def _projected_scan(x: PanelSeries, plan: SplitPlan, mode: str):
    if mode == "dense":
        direction = dense_direction(x, plan)
        extra = {}
    elif mode == "sparse":
        direction, k_star = sparse_direction(x, plan)
        extra = {"k_star": k_star}
    else:
        raise ValueError(f"unknown projection mode {mode!r}")
    y = project(x, direction, plan).y
    return sn_statistic(y), extra


def test_single(
    x: PanelSeries,
    epsilon=0.1,
    eta=0.04,
    alpha: float = 0.05,
    mode: str = "dense",
    null=None,
) -> TestOutcome:
    """Single-change-point test on a panel: dense, sparse or bonferroni."""
    if null is None:
        from .nulldist import builtin_table

        null = builtin_table("G")
    plan = make_split_plan(x.n, epsilon, eta)

    if mode in ("dense", "sparse"):
        scan, extra = _projected_scan(x, plan, mode)
        p = null.p_value(scan.statistic)
        return TestOutcome(
            mode=mode,
            alpha=alpha,
            statistic=scan.statistic,
            threshold=null.threshold(alpha),
            p_value=p,
            reject=bool(p <= alpha),
            location=estimate_location(scan, plan),
            meta={"null": null.describe(), **extra},
        )
    if mode == "bonferroni":
        scan_d, _ = _projected_scan(x, plan, "dense")
        scan_s, extra = _projected_scan(x, plan, "sparse")
        p_d = null.p_value(scan_d.statistic)
        p_s = null.p_value(scan_s.statistic)
        thr = null.threshold(alpha / 2.0)
        return TestOutcome(
            mode="bonferroni",
            alpha=alpha,
            statistic=(scan_d.statistic, scan_s.statistic),
            threshold=(thr, thr),
            p_value=(p_d, p_s),
            reject=bool(min(p_d, p_s) <= alpha / 2.0),
            location=(
                estimate_location(scan_d, plan),
                estimate_location(scan_s, plan),
            ),
            meta={"null": null.describe(), **extra},
        )
    raise ValueError(f"unknown mode {mode!r}")
