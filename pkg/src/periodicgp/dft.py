"""Real-input harmonic analysis and periodic quadrature on power-of-two grids.

For samples x_j at t = j/n the decomposition conventions are

    mean    = (1/n) sum_j x_j
    sin_k   = (2/n) sum_j x_j sin(2 pi k j / n)     k = 1 .. n/2 - 1
    cos_k   = (2/n) sum_j x_j cos(2 pi k j / n)
    nyquist = (1/n) sum_j x_j (-1)^j

exact for trigonometric polynomials of degree below n/2, with Parseval

    (1/n) sum x_j^2 = mean^2 + (1/2) sum_k (sin_k^2 + cos_k^2) + nyquist^2.

cosine_quadrature(f, k) = (1/n) sum f_j cos(2 pi k j / n) is the rectangle
rule for integral f(s) cos(2 pi k s) ds, spectrally accurate for smooth
periodic f and O(n^-2) when f has a kink on a grid point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AliasingError, GridPath, is_power_of_two


@dataclass(frozen=True)
class HarmonicDecomposition:
    n: int
    mean: float
    sin_coef: np.ndarray  # k = 1 .. n/2 - 1
    cos_coef: np.ndarray
    nyquist: float


def analyze(path: GridPath) -> HarmonicDecomposition:
    """Project a grid path onto the discrete trigonometric basis."""
    n = path.n
    if not is_power_of_two(n) or n < 4:
        raise ValueError("analysis needs a power-of-two grid with n >= 4")
    F = np.fft.rfft(path.values)
    return HarmonicDecomposition(
        n=n,
        mean=float(F[0].real) / n,
        sin_coef=-2.0 * F[1:n // 2].imag / n,
        cos_coef=2.0 * F[1:n // 2].real / n,
        nyquist=float(F[n // 2].real) / n,
    )


def synthesize(h: HarmonicDecomposition) -> GridPath:
    """Inverse of analyze: rebuild the path from its harmonics."""
    n = h.n
    if not is_power_of_two(n) or n < 4:
        raise ValueError("synthesis needs a power-of-two grid with n >= 4")
    sin_c = np.asarray(h.sin_coef, dtype=float)
    cos_c = np.asarray(h.cos_coef, dtype=float)
    if sin_c.shape != (n // 2 - 1,) or cos_c.shape != (n // 2 - 1,):
        raise ValueError("harmonic arrays must have length n/2 - 1")
    F = np.zeros(n // 2 + 1, dtype=complex)
    F[0] = n * h.mean
    F[1:n // 2] = n * (cos_c - 1j * sin_c) / 2.0
    F[n // 2] = n * h.nyquist
    return GridPath(n, np.fft.irfft(F, n))


def cosine_quadrature(samples, k: int) -> float:
    """Rectangle-rule cosine integral (1/n) sum f_j cos(2 pi k j / n)."""
    f = np.asarray(samples, dtype=float)
    n = f.size
    if f.ndim != 1 or not is_power_of_two(n) or n < 4:
        raise ValueError("quadrature needs a flat power-of-two sample grid, n >= 4")
    if k < 0 or k >= n // 2:
        raise AliasingError(f"harmonic {k} is aliased on a grid of size {n}")
    return float(np.fft.rfft(f)[k].real) / n


def cosine_table(samples, K: int) -> np.ndarray:
    """cosine_quadrature for k = 0..K in one transform."""
    f = np.asarray(samples, dtype=float)
    n = f.size
    if f.ndim != 1 or not is_power_of_two(n) or n < 4:
        raise ValueError("quadrature needs a flat power-of-two sample grid, n >= 4")
    if K < 0 or K >= n // 2:
        raise AliasingError(f"harmonic {K} is aliased on a grid of size {n}")
    return np.fft.rfft(f)[:K + 1].real / n
