"""Forward/backward two-window scan statistics and the multiple-change test.

The scan maximizes the absolute studentized contrast of a leading window
against pairs (l1, l2) of interior positions, in both the forward
direction (anchored at the start) and the backward direction (anchored at
the end); the test statistic is the sum of the two maxima.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DegenerateSeries, InsufficientSample
from .panel import PanelSeries, make_split_plan, project, dense_direction, sparse_direction
from .single import TestOutcome


@dataclass(frozen=True)
class ScanSet:
    """Candidate (l1, l2) pairs: 1 < l1 < l2 < N, l2 - l1 > 1.

    With stride > 1 both coordinates are restricted to multiples of the
    stride, except that the boundary positions (2 for l1, N-1 for l2) are
    always kept so the scan edges stay covered.
    """

    N_scan: int
    stride: int = 1
    n: int = field(default=0)
    epsilon: float = field(default=0.0)

    def __post_init__(self):
        if self.N_scan < 8:
            raise InsufficientSample(f"scan needs N >= 8, got {self.N_scan}")
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")

    @classmethod
    def from_plan(cls, n: int, epsilon, stride: int = 1) -> "ScanSet":
        # scan length is the actual projected-series length n - 2*floor(n*eps)
        eps = float(epsilon)
        m = int(np.floor(n * eps))
        return cls(N_scan=n - 2 * m, stride=stride, n=n, epsilon=eps)

    def l1_values(self) -> np.ndarray:
        hi = self.N_scan - 3
        if self.stride == 1:
            return np.arange(2, hi + 1, dtype=np.int64)
        vals = set(range(self.stride, hi + 1, self.stride))
        vals.add(2)
        return np.array(sorted(v for v in vals if 2 <= v <= hi), dtype=np.int64)

    def l2_values(self) -> np.ndarray:
        hi = self.N_scan - 1
        if self.stride == 1:
            return np.arange(4, hi + 1, dtype=np.int64)
        vals = set(range(self.stride, hi + 1, self.stride))
        vals.add(hi)
        return np.array(sorted(v for v in vals if 4 <= v <= hi), dtype=np.int64)


@dataclass(frozen=True)
class MultiScanResult:
    statistic: float
    forward_max: float
    backward_max: float
    forward_argpair: tuple
    backward_argpair: tuple


_VTOL_REL = 1e-12


def _ratio_guard(T, V, y):
    yc = y - y.mean()
    tol = _VTOL_REL * float(np.mean(yc * yc))
    if V <= tol:
        return float("nan")
    return T / np.sqrt(V)


def forward_ratio(y, j1: int, j2: int, j3: int) -> float:
    """Studentized forward contrast for windows (j1, j2, j3), 1-based.

    Returns NaN when the normalizer vanishes.
    """
    y = np.asarray(y, dtype=np.float64)
    if not (1 <= j1 <= j2 < j3 <= y.size):
        raise IndexError(f"need 1 <= j1 <= j2 < j3 <= {y.size}, got {(j1, j2, j3)}")
    span = j3 - j1 + 1
    T = (
        y[j1 - 1 : j2].sum() - (j2 - j1 + 1) / span * y[j1 - 1 : j3].sum()
    ) / np.sqrt(span)
    L = 0.0
    left_sum = y[j1 - 1 : j2].sum()
    for i in range(j1, j2 + 1):
        L += (y[j1 - 1 : i].sum() - (i - j1 + 1) / (j2 - j1 + 1) * left_sum) ** 2
    R = 0.0
    right_sum = y[j2 : j3].sum()
    for i in range(j2 + 1, j3 + 1):
        R += (y[i - 1 : j3].sum() - (j3 - i + 1) / (j3 - j2) * right_sum) ** 2
    V = (L + R) / span**2
    return _ratio_guard(T, V, y)


def backward_ratio(y, j1: int, j2: int, j3: int) -> float:
    """Studentized backward contrast for windows (j1, j2, j3), 1-based."""
    y = np.asarray(y, dtype=np.float64)
    if not (1 <= j1 < j2 <= j3 <= y.size):
        raise IndexError(f"need 1 <= j1 < j2 <= j3 <= {y.size}, got {(j1, j2, j3)}")
    span = j3 - j1 + 1
    T = (
        y[j2 - 1 : j3].sum() - (j3 - j2 + 1) / span * y[j1 - 1 : j3].sum()
    ) / np.sqrt(span)
    L = 0.0
    left_sum = y[j1 - 1 : j2 - 1].sum()
    for i in range(j1, j2):
        L += (y[j1 - 1 : i].sum() - (i - j1 + 1) / (j2 - j1) * left_sum) ** 2
    R = 0.0
    right_sum = y[j2 - 1 : j3].sum()
    for i in range(j2, j3 + 1):
        R += (y[i - 1 : j3].sum() - (j3 - i + 1) / (j3 - j2 + 1) * right_sum) ** 2
    V = (L + R) / span**2
    return _ratio_guard(T, V, y)


def multi_scan(y, scan: ScanSet) -> MultiScanResult:
    """Maximize |forward ratio| over (1, l1, l2) and |backward ratio| over
    (l1, l2, N); the statistic is the sum of the two maxima."""
    y = np.asarray(y, dtype=np.float64)
    if y.size != scan.N_scan:
        raise InsufficientSample(
            f"sequence length {y.size} does not match scan N={scan.N_scan}"
        )
    if not np.isfinite(y).all():
        raise DegenerateSeries("sequence contains NaN or Inf entries")
    fmax, fl1, fl2, bmax, bl1, bl2 = _kernels.multi_scan_pairs(
        y, scan.l1_values(), scan.l2_values()
    )
    if not np.isfinite(fmax) or not np.isfinite(bmax):
        raise DegenerateSeries("every scan pair had a zero self-normalizer")
    return MultiScanResult(
        statistic=float(fmax + bmax),
        forward_max=float(fmax),
        backward_max=float(bmax),
        forward_argpair=(int(fl1), int(fl2)),
        backward_argpair=(int(bl1), int(bl2)),
    )


def _scan_panel(x, plan, mode, scanset):
    if mode == "dense":
        direction = dense_direction(x, plan)
    else:
        direction, _ = sparse_direction(x, plan)
    y = project(x, direction, plan).y
    return multi_scan(y, scanset)


def test_multi(
    x: PanelSeries,
    epsilon=0.1,
    eta=0.04,
    alpha: float = 0.05,
    mode: str = "dense",
    null_GM=None,
    stride: int = 1,
) -> TestOutcome:
    """Multiple-change-point test on a panel: dense, sparse or bonferroni."""
    if null_GM is None:
        from .nulldist import builtin_table

        null_GM = builtin_table("GM")
    plan = make_split_plan(x.n, epsilon, eta)
    scanset = ScanSet(N_scan=plan.N, stride=stride, n=x.n, epsilon=plan.epsilon)

    def locs(res):
        return (
            tuple(plan.m + v for v in res.forward_argpair),
            tuple(plan.m + v for v in res.backward_argpair),
        )

    if mode in ("dense", "sparse"):
        res = _scan_panel(x, plan, mode, scanset)
        p = null_GM.p_value(res.statistic)
        return TestOutcome(
            mode=f"multi-{mode}",
            alpha=alpha,
            statistic=res.statistic,
            threshold=null_GM.threshold(alpha),
            p_value=p,
            reject=bool(p <= alpha),
            location=locs(res),
            meta={
                "null": null_GM.describe(),
                "forward_max": res.forward_max,
                "backward_max": res.backward_max,
            },
        )
    if mode == "bonferroni":
        res_d = _scan_panel(x, plan, "dense", scanset)
        res_s = _scan_panel(x, plan, "sparse", scanset)
        p_d = null_GM.p_value(res_d.statistic)
        p_s = null_GM.p_value(res_s.statistic)
        thr = null_GM.threshold(alpha / 2.0)
        return TestOutcome(
            mode="multi-bonferroni",
            alpha=alpha,
            statistic=(res_d.statistic, res_s.statistic),
            threshold=(thr, thr),
            p_value=(p_d, p_s),
            reject=bool(min(p_d, p_s) <= alpha / 2.0),
            location=(locs(res_d), locs(res_s)),
            meta={"null": null_GM.describe()},
        )
    raise ValueError(f"unknown mode {mode!r}")
