"""Covariogram <-> coefficient transforms and empirical coefficient extraction.

The two directions form an isometry pair: c_k^2 is the k-th cosine
integral of the covariogram, and the covariogram is rebuilt as
C(d) = c0^2 + 2 sum c_k^2 cos(2 pi k d).  On a power-of-two grid both
directions are single real FFTs.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import dft
from .core import (
    AliasingError,
    Covariogram,
    DegenerateDataError,
    PathEnsemble,
    SpectralCoefficients,
    SpectrumError,
    format_float,
    is_power_of_two,
    negative_mass_tolerance,
)

DEFAULT_QUADRATURE_GRID = 4096


def covariogram_to_coeffs(g: Covariogram, K: int,
                          n: int = DEFAULT_QUADRATURE_GRID) -> SpectralCoefficients:
    """Extract coefficients c_0..c_K from a covariogram by cosine quadrature.

    Parameters
    ----------
    g : Covariogram
        Closed-form or sampled covariogram.  Sampled inputs fix n to their
        own grid.
    K : int
        Largest harmonic to extract; must stay below n/2.
    n : int
        Quadrature grid size for closed-form inputs.  The default resolves
        the kinked bridge covariogram to about 5e-9 absolute error per
        coefficient, since the kink sits on a grid point.

    Returns
    -------
    SpectralCoefficients
        c_k = sqrt(max(0, quadrature value)).  Mass more negative than the
        clamp tolerance aborts: the input cannot be a covariance function.
    """
    if g.values is not None:
        n = g.n
    if K < 0 or K >= n // 2:
        raise AliasingError(f"harmonic {K} is aliased on a grid of size {n}")
    mass = dft.cosine_table(g.sample(n), K)
    tol = negative_mass_tolerance(max(float(mass[0]), 0.0))
    worst = float(np.min(mass))
    if worst < -tol:
        raise SpectrumError(
            f"input is not positive semidefinite: cosine mass {worst:.3e} at "
            f"harmonic {int(np.argmin(mass))}")
    if worst < -0.1 * tol:
        warnings.warn(
            f"clamped negative cosine mass down to {worst:.3e}; "
            "input sits close to the tolerance boundary", stacklevel=2)
    # symmetric snap: quadrature noise is +-tol regardless of sign, and the
    # square root would amplify a noise-level positive into a visible c_k
    mass = np.where(np.abs(mass) < tol, 0.0, mass)
    clamped = np.sqrt(np.clip(mass, 0.0, None))
    return SpectralCoefficients(float(clamped[0]), tuple(clamped[1:]))


def coeffs_to_covariogram(c: SpectralCoefficients, n: int) -> Covariogram:
    """Rebuild the covariogram C(j/n) = c0^2 + 2 sum c_k^2 cos(2 pi k j / n).

    Only the explicitly stored harmonics enter; a declared tail cannot be
    folded onto a finite grid without aliasing, so the reconstruction is
    the truncated one.  Support must stay below n/2.
    """
    if not is_power_of_two(n) or n < 4:
        raise ValueError("output grid must be a power of two, n >= 4")
    K = c.support
    if K >= n // 2:
        raise AliasingError(f"support {K} aliases on a grid of size {n}")
    spec = np.zeros(n // 2 + 1)
    spec[0] = c.c0 ** 2
    spec[1:K + 1] = np.square(c.c)
    F = n * spec.astype(complex)
    values = np.fft.irfft(F, n)
    # grid symmetry can be off by one rounding step; restore it exactly
    values = (values + np.concatenate(([values[0]], values[:0:-1]))) / 2.0
    return Covariogram.from_samples(values)


@dataclass(frozen=True)
class CoefficientEstimate:
    """Squared-coefficient estimates from an ensemble, with jackknife errors."""

    R: int
    c0_sq: float
    c0_sq_stderr: float
    c_sq: np.ndarray  # k = 1..K
    c_sq_stderr: np.ndarray

    def coefficients(self) -> SpectralCoefficients:
        """Point estimates as a coefficient object (negative noise clamped)."""
        return SpectralCoefficients(
            math.sqrt(max(self.c0_sq, 0.0)),
            tuple(np.sqrt(np.clip(self.c_sq, 0.0, None))),
        )


def empirical_coeffs(e: PathEnsemble, K: int) -> CoefficientEstimate:
    """Estimate c_k^2 from replicate harmonics.

    For paths built by synthesis the harmonics satisfy
    E[sin_k^2 + cos_k^2] = 4 c_k^2 and E[mean^2] = c0^2, which pins the
    normalization: the per-replicate statistic is (sin_k^2 + cos_k^2) / 4.
    Standard errors are jackknife ones, which for a plain mean reduce to
    std / sqrt(R).
    """
    if e.R < 1:
        raise DegenerateDataError("empty ensemble")
    if K < 0 or K >= e.n // 2:
        raise AliasingError(f"harmonic {K} is aliased on a grid of size {e.n}")
    R, n = e.R, e.n
    mean_stat = np.empty(R)
    c_stat = np.empty((R, K))
    chunk = max(1, min(R, 2 ** 21 // n))
    for lo in range(0, R, chunk):
        block = e.values[lo:lo + chunk]
        F = np.fft.rfft(block, axis=1)
        mean_stat[lo:lo + block.shape[0]] = F[:, 0].real / n
        if K:
            sin_c = -2.0 * F[:, 1:K + 1].imag / n
            cos_c = 2.0 * F[:, 1:K + 1].real / n
            c_stat[lo:lo + block.shape[0]] = (sin_c ** 2 + cos_c ** 2) / 4.0
    mean_stat = mean_stat ** 2
    if R > 1:
        c0_se = float(np.std(mean_stat, ddof=1)) / math.sqrt(R)
        c_se = c_stat.std(axis=0, ddof=1) / math.sqrt(R)
    else:
        c0_se = float("nan")
        c_se = np.full(K, np.nan)
    return CoefficientEstimate(
        R=R,
        c0_sq=float(mean_stat.mean()),
        c0_sq_stderr=c0_se,
        c_sq=c_stat.mean(axis=0),
        c_sq_stderr=c_se,
    )


def write_covariogram_csv(g: Covariogram, path, n: int | None = None) -> None:
    """Write one period as delta,value rows; closed forms need an explicit n."""
    if g.values is None and n is None:
        raise ValueError("closed-form covariogram needs an explicit grid size")
    values = g.sample(n if g.values is None else g.n)
    m = values.size
    with open(path, "w", newline="\n") as fh:
        fh.write("delta,value\n")
        for j in range(m):
            fh.write(f"{format_float(j / m)},{format_float(values[j])}\n")


def read_covariogram_csv(path) -> Covariogram:
    """Read a delta,value table into a user covariogram (validated)."""
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "delta,value":
            raise ValueError(f"{path}: expected header 'delta,value'")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"{path}: expected two columns")
    delta, values = data[:, 0], data[:, 1]
    m = delta.size
    if not is_power_of_two(m):
        raise ValueError(f"{path}: grid size {m} is not a power of two")
    if np.max(np.abs(delta - np.arange(m) / m)) > 1e-12:
        raise ValueError(f"{path}: delta column is not the uniform grid j/n")
    return Covariogram.from_table(values)
