"""Sample-path generation as truncated random trigonometric series.

Reproducibility contract: every draw flows from an RngStream, a
(master_seed, stream_id) pair feeding numpy's seed-sequence machinery.
A path consumes one block of 1 + 2K standard normals laid out as

    Y'0, Y_1, Y'_1, Y_2, Y'_2, ...

so that two runs with the same stream but different truncations share the
draws of every common harmonic.  Replicate r of an ensemble always uses
stream r; adding replicates never disturbs earlier ones.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import dft
from .core import (
    AliasingError,
    DegenerateDataError,
    GridPath,
    PathEnsemble,
    SpectralCoefficients,
    is_power_of_two,
)

SQRT2 = math.sqrt(2.0)

# below this truncation the direct sum is cheaper than an inverse transform
_DIRECT_SUM_LIMIT = 32

DEFAULT_EPS = 1e-4


@dataclass(frozen=True)
class RngStream:
    """Deterministic, independent Gaussian stream keyed by (master_seed, stream_id)."""

    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        if not (0 <= int(self.master_seed) < 2 ** 64):
            raise ValueError("master seed must be a 64-bit nonnegative integer")
        if int(self.stream_id) < 0:
            raise ValueError("stream id must be nonnegative")

    def generator(self) -> np.random.Generator:
        return np.random.default_rng([int(self.master_seed), int(self.stream_id)])

    @property
    def tag(self) -> str:
        return f"{self.master_seed}:{self.stream_id}"


def truncation_index(c: SpectralCoefficients, eps: float = DEFAULT_EPS) -> int:
    """Smallest K whose tail energy 2 sum_{k>K} c_k^2 is <= eps of the total mass.

    The declared tail supplies the analytic remainder, so the search is exact
    even when the optimal K lies beyond the stored support.
    """
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must lie strictly between 0 and 1")
    total = c.squared_mass()
    if total == 0.0:
        return 0
    budget = eps * total
    sq = np.square(np.asarray(c.c, dtype=float))
    beyond_support = c.declared_tail.mass_beyond(c.support) if c.declared_tail else 0.0
    # tail energy at each K <= support, largest stored harmonics summed first
    suffix = 2.0 * np.concatenate((np.cumsum(sq[::-1])[::-1], [0.0])) + beyond_support
    hits = np.nonzero(suffix <= budget)[0]
    if hits.size:
        return int(hits[0])
    if c.declared_tail is None:  # unreachable: suffix at K = support is then zero
        raise ValueError("tail unknown: cannot truncate an unbounded spectrum")
    tail = c.declared_tail
    lo = c.support  # mass_beyond(lo) > budget here
    hi = max(2 * lo, 2)
    while tail.mass_beyond(hi) > budget:
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail.mass_beyond(mid) <= budget:
            hi = mid
        else:
            lo = mid
    return hi


def _series_values(mean_term: float, amp_sin: np.ndarray, amp_cos: np.ndarray, n: int) -> np.ndarray:
    """Evaluate mean + sum_k amp_sin[k] sin + amp_cos[k] cos on the grid j/n."""
    K = amp_sin.size
    if K < _DIRECT_SUM_LIMIT:
        t = np.arange(n) / n
        acc = np.full(n, mean_term)
        for k in range(1, K + 1):
            w = 2.0 * np.pi * k * t
            acc += amp_sin[k - 1] * np.sin(w) + amp_cos[k - 1] * np.cos(w)
        return acc
    pad = n // 2 - 1 - K
    h = dft.HarmonicDecomposition(
        n=n,
        mean=mean_term,
        sin_coef=np.concatenate((amp_sin, np.zeros(pad))),
        cos_coef=np.concatenate((amp_cos, np.zeros(pad))),
        nyquist=0.0,
    )
    return dft.synthesize(h).values


def sample_path(c: SpectralCoefficients, K: int, n: int, rng: RngStream) -> GridPath:
    """One trajectory of the series truncated at harmonic K, on the grid j/n."""
    if not is_power_of_two(n) or n < 4:
        raise ValueError("grid size must be a power of two, n >= 4")
    if K < 0:
        raise ValueError("truncation must be nonnegative")
    if K >= n // 2:
        raise AliasingError(f"truncation K={K} aliases on a grid of size {n}")
    draws = rng.generator().standard_normal(1 + 2 * K)
    ck = c.materialize(K)
    amp_sin = SQRT2 * ck * draws[1::2]
    amp_cos = SQRT2 * ck * draws[2::2]
    values = _series_values(c.c0 * draws[0], amp_sin, amp_cos, n)
    return GridPath(n, values, seed_tag=rng.tag)


def sample_ensemble(c: SpectralCoefficients, K: int, n: int, R: int,
                    master_seed: int, workers: int = 1) -> PathEnsemble:
    """R independent paths; replicate r always draws from stream r."""
    if R < 1:
        raise ValueError("need at least one replicate")
    rows = np.empty((R, n))

    def fill(lo: int, hi: int) -> None:
        for r in range(lo, hi):
            rows[r] = sample_path(c, K, n, RngStream(master_seed, r)).values

    if workers <= 1 or R < 4 * workers:
        fill(0, R)
    else:
        step = -(-R // workers)
        bounds = [(lo, min(lo + step, R)) for lo in range(0, R, step)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for fut in [pool.submit(fill, lo, hi) for lo, hi in bounds]:
                fut.result()
    return PathEnsemble(n, rows, master_seed=master_seed)


def replicate_lag_products(values: np.ndarray, lags) -> np.ndarray:
    """Per-replicate circular products (1/n) sum_j x_j x_{j+d}, one column per lag.

    Computed with the FFT correlation identity in replicate chunks to bound
    memory; estimator plumbing shared by covariogram and structure-function
    estimates.
    """
    v = np.atleast_2d(np.asarray(values, dtype=float))
    R, n = v.shape
    d = np.asarray(lags, dtype=int)
    if d.ndim != 1 or d.size == 0:
        raise ValueError("need at least one lag")
    if np.any(d < 0) or np.any(d >= n):
        raise ValueError("lags must satisfy 0 <= d < n")
    out = np.empty((R, d.size))
    chunk = max(1, min(R, 2 ** 21 // n))
    for lo in range(0, R, chunk):
        block = v[lo:lo + chunk]
        F = np.fft.rfft(block, axis=1)
        ac = np.fft.irfft(F * F.conj(), n, axis=1) / n
        out[lo:lo + block.shape[0]] = ac[:, d]
    return out


@dataclass(frozen=True)
class CovariogramEstimate:
    """Monte Carlo covariogram estimate at chosen grid lags, with standard errors."""

    n: int
    lags: tuple
    value: np.ndarray
    stderr: np.ndarray

    @property
    def delta(self) -> np.ndarray:
        return np.asarray(self.lags, dtype=float) / self.n


def empirical_covariogram(e: PathEnsemble, lags) -> CovariogramEstimate:
    """Estimate C(d/n) by circular averaging over the grid and the replicates."""
    if e.R < 1:
        raise DegenerateDataError("empty ensemble")
    d = np.asarray(lags, dtype=int)
    per = replicate_lag_products(e.values, d)
    value = per.mean(axis=0)
    if e.R > 1:
        stderr = per.std(axis=0, ddof=1) / math.sqrt(e.R)
    else:
        stderr = np.full(d.size, np.nan)
    return CovariogramEstimate(e.n, tuple(int(x) for x in d), value, stderr)
