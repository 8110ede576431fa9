"""Sample-splitting self-normalized change-point tests for multivariate
time series: single and multiple change-point statistics, simulated null
calibration, synthetic data generators and a Monte Carlo harness."""

__version__ = "0.1.0"

from .errors import (
    DegenerateSeries,
    DimensionMismatch,
    FormatError,
    InsufficientSample,
    InvalidPreset,
    InvalidSplit,
    NotPositiveDefinite,
    SnsplitError,
)
from .panel import (
    PanelSeries,
    ProjectedSeries,
    SplitPlan,
    dense_direction,
    make_split_plan,
    project,
    sparse_direction,
)
from .single import (
    SnScanResult,
    TestOutcome,
    estimate_location,
    sn_statistic,
    sn_univariate_test,
    test_single,
)
from .multiscan import (
    MultiScanResult,
    ScanSet,
    backward_ratio,
    forward_ratio,
    multi_scan,
    test_multi,
)
from .nulldist import (
    NullSample,
    PublishedTable,
    builtin_table,
    load_null,
    save_null,
    simulate_G,
    simulate_GM,
)
from .dgp import CovSpec, DgpSpec, ShiftSpec, build_cov, gen_panel, preset_shift
from .harness import McExperiment, McReport, TestConfig, run_power, run_size

__all__ = [
    "__version__",
    "SnsplitError", "InvalidSplit", "InsufficientSample", "DimensionMismatch",
    "DegenerateSeries", "InvalidPreset", "NotPositiveDefinite", "FormatError",
    "PanelSeries", "SplitPlan", "ProjectedSeries",
    "make_split_plan", "dense_direction", "sparse_direction", "project",
    "SnScanResult", "TestOutcome", "sn_statistic", "sn_univariate_test",
    "test_single", "estimate_location",
    "ScanSet", "MultiScanResult", "forward_ratio", "backward_ratio",
    "multi_scan", "test_multi",
    "NullSample", "PublishedTable", "builtin_table",
    "simulate_G", "simulate_GM", "save_null", "load_null",
    "CovSpec", "DgpSpec", "ShiftSpec", "build_cov", "gen_panel", "preset_shift",
    "McExperiment", "McReport", "TestConfig", "run_size", "run_power",
]
