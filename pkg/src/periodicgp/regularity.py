"""Path regularity: predicted from coefficient decay, estimated from paths.

Decay c_k^2 = O(k^-q) with q > 1 guarantees m = max{j : 2j + 1 < q}
derivatives whose last one is Holder continuous of every order below
alpha/2, alpha = min(1, q - 1 - 2m).  The empirical side inverts the
structure function S(h) = E (x_{t+h} - x_t)^2 = 2 (C(0) - C(h)): its
log-log slope over small lags, halved, estimates the Holder exponent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import (
    DegenerateDataError,
    PathEnsemble,
    RegularityReport,
    SpectralCoefficients,
)
from .synthesis import replicate_lag_products

# beyond this raw structure-function slope the method saturates: the paths
# are consistent with differentiability and the halved slope is reported as 1
SATURATION_SLOPE = 1.9
SATURATION_FLAG = "possibly differentiable; analyze derivative spectrum"


def predict_regularity(q: float) -> RegularityReport:
    """Guaranteed regularity for coefficient decay c_k^2 = O(k^-q).

    Requires q > 1 (summable mass, hence a continuous covariogram).  At the
    integer boundaries q = 2m + 1 the derivative count steps down so the
    Holder increment stays strictly positive: the guarantee is conservative
    rather than sharp there.
    """
    if not (math.isfinite(q) and q > 1.0):
        raise ValueError("not guaranteed continuous by this criterion (need q > 1)")
    half = (q - 1.0) / 2.0
    m = int(math.floor(half))
    if m == half:
        m -= 1
    alpha = min(1.0, q - 1.0 - 2.0 * m)
    return RegularityReport(q=float(q), m=m, holder_bound=alpha / 2.0)


class DecayFit(NamedTuple):
    q: float
    constant: float
    residual: float


def fit_decay(c: SpectralCoefficients, k_min: int = 1, k_max: int | None = None) -> DecayFit:
    """Least-squares power law c_k^2 ~ constant * k^-q over log-log axes."""
    if k_max is None:
        k_max = c.support
    if not (1 <= k_min < k_max <= c.support):
        raise ValueError("need 1 <= k_min < k_max <= support")
    if k_max - k_min + 1 < 4:
        raise ValueError("need at least 4 coefficients in the fit window")
    ck = np.asarray(c.c[k_min - 1:k_max], dtype=float)
    if np.any(ck == 0.0):
        raise DegenerateDataError("zero spectral mass in fit window")
    x = np.log(np.arange(k_min, k_max + 1, dtype=float))
    y = 2.0 * np.log(ck)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    return DecayFit(q=float(-slope), constant=float(np.exp(intercept)),
                    residual=float(np.sqrt(np.mean(resid ** 2))))


@dataclass(frozen=True)
class StructureFunctionTable:
    """S(h) at chosen grid lags with Monte Carlo standard errors."""

    n: int
    lags: tuple
    value: np.ndarray
    stderr: np.ndarray

    @property
    def h(self) -> np.ndarray:
        return np.asarray(self.lags, dtype=float) / self.n


def structure_function(e: PathEnsemble, lags) -> StructureFunctionTable:
    """Mean squared increment S(d/n), circularly averaged over t and replicates."""
    if e.R < 1:
        raise DegenerateDataError("empty ensemble")
    d = np.asarray(lags, dtype=int)
    if d.ndim != 1 or d.size == 0:
        raise ValueError("need at least one lag")
    if np.any(d < 1) or np.any(d > e.n // 2):
        raise ValueError("lags must satisfy 1 <= d <= n/2")
    per = replicate_lag_products(e.values, np.concatenate(([0], d)))
    s = 2.0 * (per[:, :1] - per[:, 1:])
    if e.R > 1:
        stderr = s.std(axis=0, ddof=1) / math.sqrt(e.R)
    else:
        stderr = np.full(d.size, np.nan)
    return StructureFunctionTable(e.n, tuple(int(x) for x in d), s.mean(axis=0), stderr)


@dataclass(frozen=True)
class HolderEstimate:
    """Estimated path Holder exponent from structure-function scaling."""

    exponent: float
    stderr: float
    raw_slope: float
    raw_slope_stderr: float
    flag: str | None
    lags: tuple


def dyadic_window(n: int) -> tuple:
    """Dyadic lags 2^j with 1/n <= 2^j/n <= 1/8, the default estimation window."""
    lags = []
    d = 1
    while d * 8 <= n:
        lags.append(d)
        d *= 2
    return tuple(lags)


def estimate_holder(e: PathEnsemble, lags=None) -> HolderEstimate:
    """Half the log-log slope of S(h) over a dyadic lag window.

    The report is capped at 1.0: increments of a differentiable path scale
    as h^2 no matter how smooth the path is, so the method cannot resolve
    anything above exponent one.  Raw slopes beyond SATURATION_SLOPE set
    the saturation flag.
    """
    window = dyadic_window(e.n) if lags is None else tuple(int(d) for d in lags)
    if len(window) < 4:
        raise ValueError("need at least 4 window lags")
    arr = np.asarray(window, dtype=int)
    if np.any(arr < 1) or np.any(8 * arr > e.n):
        raise ValueError("window lags must lie within [1/n, 1/8]")
    if np.any(arr & (arr - 1)):
        raise ValueError("window lags must be dyadic (powers of two)")
    sf = structure_function(e, arr)
    if np.any(sf.value <= 0.0):
        raise DegenerateDataError("nonpositive structure function in window")
    x = np.log(sf.h)
    y = np.log(sf.value)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = max(x.size - 2, 1)
    sxx = float(np.sum((x - x.mean()) ** 2))
    slope_se = math.sqrt(float(np.sum(resid ** 2)) / dof / sxx)
    flagged = slope > SATURATION_SLOPE
    return HolderEstimate(
        exponent=min(1.0, float(slope) / 2.0),
        stderr=slope_se / 2.0,
        raw_slope=float(slope),
        raw_slope_stderr=slope_se,
        flag=SATURATION_FLAG if flagged else None,
        lags=window,
    )
