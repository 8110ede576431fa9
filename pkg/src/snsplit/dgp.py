"""Synthetic panel generators: VAR(1), truncated linear process, factor model,
three covariance structures, and piecewise-constant mean-shift presets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.signal import lfilter

from .errors import DimensionMismatch, InvalidPreset, NotPositiveDefinite
from .panel import PanelSeries


@dataclass(frozen=True)
class CovSpec:
    """Innovation covariance: 'ar' (rho^|i-j|), 'cs' (0.5 + 0.5*1{i=j}) or 'id'."""

    kind: str
    p: int
    rho: float = 0.0

    def __post_init__(self):
        if self.kind not in ("ar", "cs", "id"):
            raise InvalidPreset(f"unknown covariance kind {self.kind!r}")
        if self.kind == "ar" and not -1.0 < self.rho < 1.0:
            raise InvalidPreset(f"ar covariance needs |rho| < 1, got {self.rho}")
        if self.p < 1:
            raise DimensionMismatch(f"dimension must be >= 1, got {self.p}")

    def matrix(self) -> np.ndarray:
        if self.kind == "id":
            return np.eye(self.p)
        if self.kind == "cs":
            return np.full((self.p, self.p), 0.5) + 0.5 * np.eye(self.p)
        idx = np.arange(self.p)
        return self.rho ** np.abs(idx[:, None] - idx[None, :])


def build_cov(spec: CovSpec) -> np.ndarray:
    """Lower-triangular factor L with L @ L.T equal to the covariance."""
    if spec.kind == "id":
        return np.eye(spec.p)
    try:
        return np.linalg.cholesky(spec.matrix())
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(f"covariance {spec} is not PD: {exc}") from exc


@dataclass(frozen=True)
class DgpSpec:
    """Full description of a synthetic data-generating process."""

    family: str  # var1 | linear_process | factor
    n: int
    p: int
    cov: CovSpec
    kappa: float = 0.0          # var1 AR parameter
    decay: float = 0.5          # linear-process coefficient a_j = decay^j
    factor_count: int = 3
    loading_scale: float = 1.0
    factor_ar: float = 0.5
    seed: Optional[int] = None

    def __post_init__(self):
        if self.family not in ("var1", "linear_process", "factor"):
            raise InvalidPreset(f"unknown DGP family {self.family!r}")
        if not -1.0 < self.kappa < 1.0:
            raise InvalidPreset(f"var1 needs |kappa| < 1, got {self.kappa}")
        if self.family == "linear_process" and not 0.0 <= self.decay < 1.0:
            raise InvalidPreset(f"decay must be in [0,1), got {self.decay}")
        if self.factor_count < 1:
            raise InvalidPreset("factor_count must be >= 1")
        if self.cov.p != self.p:
            raise DimensionMismatch(
                f"covariance dimension {self.cov.p} != panel dimension {self.p}"
            )


@dataclass(frozen=True)
class ShiftSpec:
    """Piecewise-constant mean: breaks are (relative location, shift vector)."""

    breaks: tuple = ()

    def __post_init__(self):
        locs = [b[0] for b in self.breaks]
        if any(not 0.0 < x < 1.0 for x in locs):
            raise InvalidPreset(f"break locations must lie in (0,1), got {locs}")
        if any(b >= a for a, b in zip(locs[1:], locs)):
            raise InvalidPreset(f"break locations must be strictly increasing: {locs}")

    def mean_matrix(self, n: int, p: int) -> np.ndarray:
        """mu_t for t = 1..n as an n x p matrix (cumulative sums of shifts)."""
        mu = np.zeros((n, p))
        for xi, delta in self.breaks:
            delta = np.asarray(delta, dtype=np.float64)
            if delta.shape != (p,):
                raise DimensionMismatch(
                    f"shift vector has shape {delta.shape}, panel has p={p}"
                )
            k = math.floor(n * xi)
            mu[k:] += delta  # rows are t-1, so t > k means index >= k
        return mu


def _ar1_filter(innovations: np.ndarray, kappa: float, x0: np.ndarray) -> np.ndarray:
    """x_t = kappa*x_{t-1} + e_t with x_0 given; vectorized over columns."""
    if kappa == 0.0:
        return innovations
    zi = (kappa * x0)[None, :]
    out, _ = lfilter([1.0], [1.0, -kappa], innovations, axis=0, zi=zi)
    return out


def _gen_linear_noise(rng, n: int, cov_factor: np.ndarray, decay: float) -> np.ndarray:
    """Truncated linear process sum_j decay^j * eps_{t-j} with colored iid
    innovations and J pre-sample draws; truncation at decay^J < 1e-8."""
    p = cov_factor.shape[0]
    if decay == 0.0:
        return rng.standard_normal((n, p)) @ cov_factor.T
    J = max(1, math.ceil(math.log(1e-8) / math.log(decay)))
    eps = rng.standard_normal((n + J, p)) @ cov_factor.T
    coeffs = decay ** np.arange(J + 1)
    out = lfilter(coeffs, [1.0], eps, axis=0)
    return out[J:]


def gen_centered(dgp: DgpSpec, rng: np.random.Generator) -> np.ndarray:
    """Draw the zero-mean noise panel for the given family."""
    L = build_cov(dgp.cov)
    if dgp.family == "var1":
        x0 = (L @ rng.standard_normal(dgp.p)) / math.sqrt(1.0 - dgp.kappa**2)
        eps = rng.standard_normal((dgp.n, dgp.p)) @ L.T
        return _ar1_filter(eps, dgp.kappa, x0)
    if dgp.family == "linear_process":
        return _gen_linear_noise(rng, dgp.n, L, dgp.decay)
    # factor: loadings drawn once per seed, then factors, then idiosyncratic noise
    lam = dgp.loading_scale * rng.standard_normal((dgp.p, dgp.factor_count))
    f0 = rng.standard_normal(dgp.factor_count) / math.sqrt(1.0 - dgp.factor_ar**2)
    f_eps = rng.standard_normal((dgp.n, dgp.factor_count))
    factors = _ar1_filter(f_eps, dgp.factor_ar, f0)
    z = _gen_linear_noise(rng, dgp.n, L, dgp.decay)
    return factors @ lam.T + z


def gen_panel(dgp: DgpSpec, shift: ShiftSpec = ShiftSpec(), seed=None) -> PanelSeries:
    """Generate a panel; deterministic given (spec, seed).

    seed overrides dgp.seed; it may be an int or a numpy SeedSequence.
    """
    if seed is None:
        seed = dgp.seed
    if seed is None:
        raise InvalidPreset("a seed is required (no silent entropy default)")
    rng = np.random.default_rng(seed)
    noise = gen_centered(dgp, rng)
    return PanelSeries(noise + shift.mean_matrix(dgp.n, dgp.p))


def preset_shift(name: str, n: int, p: int, c: float = 1.0) -> ShiftSpec:
    """The mean-shift configurations used in the simulation studies.

    Single shifts sit at floor(n/2); dd/ss/ds break at 0.3/0.7 and ddd at
    0.2/0.4/0.8 with cumulative dense levels c, 2c, 3c (each over sqrt(p)).
    """
    dense = np.ones(p) / math.sqrt(p)

    def sparse3():
        if p < 3:
            raise InvalidPreset(f"sparse presets need p >= 3, got p={p}")
        e3 = np.zeros(p)
        e3[2] = 1.0
        return e3

    if name == "none":
        return ShiftSpec()
    if name == "dense_mid":
        return ShiftSpec(breaks=((0.5, c * dense),))
    if name == "sparse_mid":
        return ShiftSpec(breaks=((0.5, c * sparse3()),))
    if name == "dd":
        return ShiftSpec(breaks=((0.3, c * dense), (0.7, c * dense)))
    if name == "ss":
        e3 = sparse3()
        return ShiftSpec(breaks=((0.3, c * e3), (0.7, c * e3)))
    if name == "ds":
        if p < 5:
            raise InvalidPreset(f"ds preset needs p >= 5, got p={p}")
        u5 = np.zeros(p)
        u5[:5] = 1.0 / math.sqrt(5)
        # second break jumps from c*dense to 2c*u5
        return ShiftSpec(breaks=((0.3, c * dense), (0.7, 2.0 * c * u5 - c * dense)))
    if name == "ddd":
        return ShiftSpec(
            breaks=((0.2, c * dense), (0.4, c * dense), (0.8, c * dense))
        )
    raise InvalidPreset(f"unknown shift preset {name!r}")
