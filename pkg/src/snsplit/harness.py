"""Monte Carlo experiments: empirical size and (size-adjusted) power curves.

Power runs reuse one noise stream per replicate across the whole c-grid
(the mean shift enters additively), so curves are computed under common
random numbers.  The size-adjusted threshold is the empirical (1-alpha)
quantile of the statistic under the same DGP with c = 0, estimated from a
dedicated run with its own seed branch, then held fixed across the grid.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .dgp import DgpSpec, ShiftSpec, gen_panel, preset_shift
from .errors import DegenerateSeries, InvalidPreset
from .multiscan import test_multi
from .single import test_single

SINGLE_MODES = ("dense", "sparse", "bonferroni")
MULTI_MODES = ("multi-dense", "multi-sparse", "multi-bonferroni")


@dataclass(frozen=True)
class TestConfig:
    mode: str
    epsilon: float = 0.1
    eta: float = 0.04
    stride: int = 1

    def __post_init__(self):
        if self.mode not in SINGLE_MODES + MULTI_MODES:
            raise InvalidPreset(f"unknown test mode {self.mode!r}")


@dataclass(frozen=True)
class McExperiment:
    dgp: DgpSpec
    tests: tuple
    alpha: float = 0.05
    replicates: int = 1000
    seed: int = 0
    shift: str = "none"
    c_grid: tuple = ()
    size_adjust: bool = True

    def __post_init__(self):
        if self.replicates < 100:
            raise InvalidPreset(f"replicates must be >= 100, got {self.replicates}")
        grid = list(self.c_grid)
        if any(c < 0 for c in grid):
            raise InvalidPreset(f"c-grid must be nonnegative: {grid}")
        if any(b >= a for a, b in zip(grid[1:], grid)):
            raise InvalidPreset(f"c-grid must be strictly increasing: {grid}")


@dataclass
class McReport:
    rows: list
    meta: dict = field(default_factory=dict)

    HEADER = ("mode", "epsilon", "eta", "c", "rate", "se", "replicates",
              "degenerate_count")

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=self.HEADER)
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: row[k] for k in self.HEADER})


def _default_nulls():
    from .nulldist import builtin_table

    return {"G": builtin_table("G"), "GM": builtin_table("GM")}


def _run_test(panel, cfg: TestConfig, alpha, nulls):
    """Returns (statistics tuple, reject flag)."""
    if cfg.mode in SINGLE_MODES:
        out = test_single(
            panel, cfg.epsilon, cfg.eta, alpha, mode=cfg.mode, null=nulls["G"]
        )
    else:
        out = test_multi(
            panel,
            cfg.epsilon,
            cfg.eta,
            alpha,
            mode=cfg.mode.removeprefix("multi-"),
            null_GM=nulls["GM"],
            stride=cfg.stride,
        )
    stats = out.statistic if isinstance(out.statistic, tuple) else (out.statistic,)
    return stats, out.reject


def _rate_row(cfg, c, rejects, degenerates, total):
    valid = total - degenerates
    rate = rejects / valid if valid else float("nan")
    se = math.sqrt(rate * (1.0 - rate) / valid) if valid else float("nan")
    return {
        "mode": cfg.mode,
        "epsilon": cfg.epsilon,
        "eta": cfg.eta,
        "c": c,
        "rate": rate,
        "se": se,
        "replicates": valid,
        "degenerate_count": degenerates,
    }


def run_size(exp: McExperiment, nulls=None) -> McReport:
    """Rejection rate under the null for every test configuration."""
    if exp.shift != "none" or exp.c_grid:
        raise InvalidPreset("size experiments must not carry a shift")
    if nulls is None:
        nulls = _default_nulls()
    children = np.random.SeedSequence(exp.seed).spawn(exp.replicates)
    rejects = {cfg: 0 for cfg in exp.tests}
    degen = {cfg: 0 for cfg in exp.tests}
    for child in children:
        panel = gen_panel(exp.dgp, ShiftSpec(), seed=child)
        for cfg in exp.tests:
            try:
                _, reject = _run_test(panel, cfg, exp.alpha, nulls)
            except DegenerateSeries:
                degen[cfg] += 1
                continue
            rejects[cfg] += reject
    rows = [
        _rate_row(cfg, 0.0, rejects[cfg], degen[cfg], exp.replicates)
        for cfg in exp.tests
    ]
    return McReport(rows=rows, meta={"experiment": "size", "seed": exp.seed})


def _null_quantiles(stats_by_comp, level):
    """Componentwise order-statistic quantile of collected null statistics."""
    out = []
    for stats in stats_by_comp:
        arr = np.sort(np.asarray(stats))
        idx = max(math.ceil(level * arr.size) - 1, 0)
        out.append(float(arr[idx]))
    return out


def run_power(exp: McExperiment, nulls=None) -> McReport:
    """Rejection rate against c for every test configuration."""
    if not exp.c_grid:
        raise InvalidPreset("power experiments need a c-grid")
    if nulls is None:
        nulls = _default_nulls()
    root = np.random.SeedSequence(exp.seed)
    data_ss, calib_ss = root.spawn(2)
    data_children = data_ss.spawn(exp.replicates)
    calib_children = calib_ss.spawn(exp.replicates)

    rows = []
    for cfg in exp.tests:
        n_comp = 2 if cfg.mode.endswith("bonferroni") else 1
        thresholds = None
        if exp.size_adjust:
            collected = [[] for _ in range(n_comp)]
            for child in calib_children:
                panel = gen_panel(exp.dgp, ShiftSpec(), seed=child)
                try:
                    stats, _ = _run_test(panel, cfg, exp.alpha, nulls)
                except DegenerateSeries:
                    continue
                for comp, s in zip(collected, stats):
                    comp.append(s)
            level = (
                1.0 - exp.alpha if n_comp == 1 else 1.0 - exp.alpha / 2.0
            )
            thresholds = _null_quantiles(collected, level)

        for c in exp.c_grid:
            shift = preset_shift(exp.shift, exp.dgp.n, exp.dgp.p, c=c)
            rejects = 0
            degen = 0
            for child in data_children:
                panel = gen_panel(exp.dgp, shift, seed=child)
                try:
                    stats, reject = _run_test(panel, cfg, exp.alpha, nulls)
                except DegenerateSeries:
                    degen += 1
                    continue
                if thresholds is not None:
                    reject = any(s >= t for s, t in zip(stats, thresholds))
                rejects += reject
            rows.append(_rate_row(cfg, c, rejects, degen, exp.replicates))
    return McReport(
        rows=rows,
        meta={
            "experiment": "power",
            "seed": exp.seed,
            "shift": exp.shift,
            "size_adjust": exp.size_adjust,
        },
    )
