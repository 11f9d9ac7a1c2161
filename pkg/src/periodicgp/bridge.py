"""Brownian bridge constructions on the circle and their exact spectra.

The plain bridge pinned at both ends is the sine series

    x_t = sqrt(2) sum_{k>=1} W_k sin(pi k t) / (k pi),   Var x_t = t (1 - t).

Randomizing its starting point uniformly over the circle yields a
stationary process, the centered bridge, with covariogram

    C(d) = (|d| - 1/2)^2 / 2 + 1/24

and coefficients c0 = 1/sqrt(12), c_k = 1/(2 pi k).  Subtracting the path
mean instead gives the centralized bridge, whose covariogram is the same
expression with -1/24; the two differ by an independent mean offset Z of
variance 1/12.  decomposition_check verifies that split empirically, and
proof_identity evaluates the series identity

    (1/(k^2 pi^4)) sum_{m>=0} (1/(2k+2m+1) + 1/(2k-2m-1))^2 = 1/(4 k^2 pi^2)

behind the Gaussianity of the centered construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import Covariogram, GridPath, PathEnsemble, SpectralCoefficients, TailDecay
from .synthesis import RngStream, replicate_lag_products, sample_ensemble, sample_path

SQRT2 = math.sqrt(2.0)

VARIANTS = ("plain", "centered_shift", "centralized", "centered_series")

DEFAULT_COEFF_SUPPORT = 512


def centered_bridge_covariogram() -> Covariogram:
    return Covariogram.closed_form("centered_bridge")


def centralized_bridge_covariogram() -> Covariogram:
    return Covariogram.closed_form("centralized_bridge")


def centered_bridge_coefficients(support: int = DEFAULT_COEFF_SUPPORT) -> SpectralCoefficients:
    """c0 = 1/sqrt(12), c_k = 1/(2 pi k), with the exact k^-2 tail declared."""
    k = np.arange(1, support + 1, dtype=float)
    return SpectralCoefficients(
        c0=1.0 / math.sqrt(12.0),
        c=tuple(1.0 / (2.0 * math.pi * k)),
        declared_tail=TailDecay(q=2.0, const=1.0 / (4.0 * math.pi ** 2)),
    )


def _plain_values(n: int, M: int, gen: np.random.Generator) -> np.ndarray:
    """Sine-series bridge values on j/n, W drawn as one contiguous block."""
    if M < 0 or M >= n:
        raise ValueError("sine truncation must satisfy 0 <= M < n")
    w = gen.standard_normal(M)
    amp = SQRT2 * w / (np.arange(1, M + 1) * np.pi)
    if M < 32:
        t = np.arange(n) / n
        acc = np.zeros(n)
        for k in range(1, M + 1):
            acc += amp[k - 1] * np.sin(np.pi * k * t)
        return acc
    # sin(pi k j / n) is an integer-frequency sine on the doubled grid 2n
    F = np.zeros(n + 1, dtype=complex)
    F[1:M + 1] = -1j * n * amp
    values = np.fft.irfft(F, 2 * n)[:n]
    values[0] = 0.0  # sin(0) = 0; pin the fixed end against transform rounding
    return values


def plain_bridge_path(n: int, M: int | None = None, rng: RngStream = None) -> GridPath:
    """Brownian bridge on j/n from M sine modes; both ends pinned at zero."""
    M = n // 2 if M is None else M
    return GridPath(n, _plain_values(n, M, rng.generator()), seed_tag=rng.tag)


def centered_bridge_shift(n: int, M: int | None = None, rng: RngStream = None) -> GridPath:
    """Plain bridge rotated by a uniform grid shift, drawn before the W block."""
    M = n // 2 if M is None else M
    gen = rng.generator()
    u = int(gen.integers(n))
    values = np.roll(_plain_values(n, M, gen), u)
    return GridPath(n, values, seed_tag=rng.tag)


def centralized_bridge_path(n: int, M: int | None = None, rng: RngStream = None) -> GridPath:
    """Plain bridge minus its grid mean; the output mean is zero exactly."""
    M = n // 2 if M is None else M
    values = _plain_values(n, M, rng.generator())
    return GridPath(n, values - values.mean(), seed_tag=rng.tag)


def bridge_path(variant: str, n: int, M: int | None = None, rng: RngStream = None) -> GridPath:
    if variant == "plain":
        return plain_bridge_path(n, M, rng)
    if variant == "centered_shift":
        return centered_bridge_shift(n, M, rng)
    if variant == "centralized":
        return centralized_bridge_path(n, M, rng)
    if variant == "centered_series":
        K = n // 2 - 1 if M is None else M
        return sample_path(centered_bridge_coefficients(), K, n, rng)
    raise ValueError(f"unknown bridge variant {variant!r}")


def bridge_ensemble(variant: str, R: int, n: int, master_seed: int,
                    M: int | None = None, workers: int = 1) -> PathEnsemble:
    """R replicate bridge paths, one stream per replicate as in synthesis."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown bridge variant {variant!r}")
    if R < 1:
        raise ValueError("need at least one replicate")
    if variant == "centered_series":
        K = n // 2 - 1 if M is None else M
        return sample_ensemble(centered_bridge_coefficients(), K, n, R,
                               master_seed, workers=workers)
    rows = np.empty((R, n))
    for r in range(R):
        rows[r] = bridge_path(variant, n, M, RngStream(master_seed, r)).values
    return PathEnsemble(n, rows, master_seed=master_seed)


class IdentityCheck(NamedTuple):
    partial_sum: float
    target: float
    gap: float


def proof_identity(k: int, terms: int) -> IdentityCheck:
    """Partial sum of the Gaussianity series identity against 1/(4 k^2 pi^2).

    Partial sums increase monotonically in the number of terms and stay
    below the closed form, so the gap is a one-sided convergence measure.
    """
    if k < 1:
        raise ValueError("harmonic index k must be >= 1")
    if terms < 1:
        raise ValueError("need at least one term")
    m = np.arange(terms, dtype=float)
    series = (1.0 / (2 * k + 2 * m + 1) + 1.0 / (2 * k - 2 * m - 1)) ** 2
    partial = float(series.sum()) / (k * k * np.pi ** 4)
    target = 1.0 / (4.0 * k * k * np.pi ** 2)
    return IdentityCheck(partial, target, abs(target - partial))


@dataclass(frozen=True)
class DecompositionReport:
    """Empirical check that the centered bridge splits as mean offset + centralized part."""

    R: int
    n: int
    var_z: float
    var_z_stderr: float
    var_z_target: float
    lags: tuple
    residual_cov: np.ndarray
    residual_cov_stderr: np.ndarray
    residual_cov_target: np.ndarray
    gridpoints: tuple
    correlation: np.ndarray
    correlation_stderr: float
    var_ok: bool
    cov_ok: bool
    corr_ok: bool

    @property
    def passed(self) -> bool:
        return self.var_ok and self.cov_ok and self.corr_ok


def decomposition_check(R: int, n: int, M: int | None = None,
                        master_seed: int = 0, band: float = 3.0) -> DecompositionReport:
    """Split centered-shift paths into grid mean Z and residual, verify the law.

    Checks Var(Z) = 1/12, the residual covariogram against the centralized
    closed form at 8 lags, and the Z-residual correlation at 8 gridpoints,
    all within `band` standard errors.
    """
    e = bridge_ensemble("centered_shift", R, n, master_seed, M=M)
    z = e.values.mean(axis=1)
    resid = e.values - z[:, None]

    z_sq = z ** 2  # E[Z] = 0 by stationarity, so mean(Z^2) estimates the variance
    var_z = float(z_sq.mean())
    var_z_se = float(np.std(z_sq, ddof=1)) / math.sqrt(R)

    lags = tuple(int(n * j / 16) for j in range(1, 9))
    per = replicate_lag_products(resid, np.asarray(lags))
    cov = per.mean(axis=0)
    cov_se = per.std(axis=0, ddof=1) / math.sqrt(R)
    target = centralized_bridge_covariogram().at(np.asarray(lags) / n)

    gridpoints = tuple(int(n * j / 8) for j in range(8))
    cols = resid[:, list(gridpoints)]
    zc = z - z.mean()
    rc = cols - cols.mean(axis=0)
    denom = (R - 1) * np.std(z, ddof=1) * cols.std(axis=0, ddof=1)
    corr = (zc @ rc) / denom
    corr_se = 1.0 / math.sqrt(R)  # null standard error of a sample correlation

    var_ok = abs(var_z - 1.0 / 12.0) <= band * var_z_se
    cov_ok = bool(np.all(np.abs(cov - target) <= band * cov_se))
    corr_ok = bool(np.all(np.abs(corr) <= band * corr_se))
    return DecompositionReport(
        R=R, n=n,
        var_z=var_z, var_z_stderr=var_z_se, var_z_target=1.0 / 12.0,
        lags=lags, residual_cov=cov, residual_cov_stderr=cov_se,
        residual_cov_target=np.asarray(target),
        gridpoints=gridpoints, correlation=corr, correlation_stderr=corr_se,
        var_ok=var_ok, cov_ok=cov_ok, corr_ok=corr_ok,
    )
