"""Signal generation and shared special functions.

Provides the test processes used throughout the package (a linear chirp in
analytic white noise, a moving-average process, uniformly modulated white
noise and a time-varying MA), the discrete analytic-signal construction,
seeded Gaussian noise, and the Dirichlet / sinc kernels that the moment
formulas are built from.

All generators are pure functions of (spec, n, seed): the same inputs give
bit-identical output regardless of thread count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "DEFAULT_MA_WEIGHTS",
    "AnalyticWhiteNoise",
    "ChirpInNoise",
    "MovingAverage",
    "TimeVaryingMA",
    "UniformlyModulated",
    "ProcessSpec",
    "analytic_signal",
    "dirichlet",
    "gaussian_noise",
    "generate",
    "normalized_sinc",
]

# Default MA weights used by the benchmark configurations.
DEFAULT_MA_WEIGHTS = (1.0, 0.33, 0.266, 0.2, 0.133, 0.066)

_INT_EPS = 1e-9  # |f - round(f)| below this hits the removable singularity


def dirichlet(n, f):
    """Dirichlet kernel sin(pi*f*n)/sin(pi*f).

    Total function: at integer f (where the denominator vanishes) the
    removable singularity is filled with the limit n*cos(pi*f*n)/cos(pi*f).
    Broadcasts over both arguments; scalars in, scalar out.
    """
    n_arr = np.asarray(n, dtype=float)
    if np.any(n_arr < 1):
        raise ValueError("dirichlet order must be >= 1")
    f_arr = np.asarray(f, dtype=float)
    near = np.abs(f_arr - np.round(f_arr)) < _INT_EPS
    den = np.sin(np.pi * f_arr)
    safe = np.where(near, 1.0, den)
    with np.errstate(invalid="ignore", divide="ignore"):
        main = np.sin(np.pi * f_arr * n_arr) / safe
        limit = n_arr * np.cos(np.pi * f_arr * n_arr) / np.cos(np.pi * f_arr)
    out = np.where(near, limit, main)
    if np.isscalar(n) and np.isscalar(f):
        return float(out)
    return out


def normalized_sinc(x):
    """sin(pi*x)/(pi*x), with value 1 at x = 0."""
    return np.sinc(x)


def gaussian_noise(n: int, variance: float, seed: int) -> np.ndarray:
    """n i.i.d. zero-mean Gaussian samples with the given variance.

    Deterministic in the seed; rejects non-positive variance.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if variance <= 0:
        raise ValueError("variance must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    return rng.normal(0.0, np.sqrt(variance), n)


def analytic_signal(x) -> np.ndarray:
    """One-sided (analytic) complex signal of a real-valued input.

    Frequency-domain construction: take the length-N DFT, keep bin 0 and the
    Nyquist bin unscaled, double the interior positive bins, zero the
    negative bins, inverse DFT.  The real part of the output reproduces the
    input; the DFT of the output vanishes on strictly negative bins.

    A complex input contributes only its real part (the usual convention),
    which makes the construction idempotent.
    """
    x = np.asarray(x)
    if np.iscomplexobj(x):
        x = x.real
    x = np.asarray(x, dtype=float)
    n = x.shape[-1]
    if n < 2:
        raise ValueError("need at least two samples")
    spec = np.fft.fft(x)
    h = np.zeros(n)
    h[0] = 1.0
    if n % 2 == 0:
        h[n // 2] = 1.0
        h[1 : n // 2] = 2.0
    else:
        h[1 : (n + 1) // 2] = 2.0
    return np.fft.ifft(spec * h)


@dataclass(frozen=True)
class ChirpInNoise:
    """Deterministic linear chirp exp(j*pi*(2*alpha*t + beta*t^2)) plus
    analytic white noise with one-sided PSD level noise_psd on [0, 1/2)."""

    alpha: float = 0.1
    beta: float = 9.0196e-4
    noise_psd: float = 0.6

    def validate(self, n: int) -> None:
        if not 0.0 < self.alpha < 0.5:
            raise ValueError("chirp start frequency must lie in (0, 1/2)")
        if not np.isfinite(self.beta):
            raise ValueError("chirp rate must be finite")
        # Aliasing silently invalidates every downstream moment formula,
        # so an out-of-band sweep is a hard error.
        if self.alpha + self.beta * (n - 1) >= 0.5:
            raise ValueError(
                "chirp sweeps past Nyquist over the record: "
                f"alpha + beta*(n-1) = {self.alpha + self.beta * (n - 1):g} >= 1/2"
            )
        if self.noise_psd < 0:
            raise ValueError("noise PSD level must be >= 0")


@dataclass(frozen=True)
class MovingAverage:
    """Real MA process R[t] = sum_i w_i xi[t-i] with xi ~ N(0, xi_var),
    observed through its analytic signal."""

    weights: Sequence[float] = DEFAULT_MA_WEIGHTS
    xi_var: float = 1.0

    def validate(self, n: int) -> None:
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or w.size == 0 or not np.all(np.isfinite(w)):
            raise ValueError("weights must be a finite 1-D sequence")
        if w[0] == 0:
            raise ValueError("leading MA weight must be nonzero")
        if self.xi_var <= 0:
            raise ValueError("innovation variance must be positive")
        if w.size - 1 >= n:
            raise ValueError("MA order must be smaller than the record length")


@dataclass(frozen=True)
class UniformlyModulated:
    """Uniformly modulated white noise R[t] = sin(2*pi*f0*t) * xi[t] with
    xi ~ N(0,1), observed through its analytic signal."""

    f0: float = 0.09

    def validate(self, n: int) -> None:
        if not 0.0 < self.f0 < 0.25:
            raise ValueError("modulation frequency must lie in (0, 1/4)")


@dataclass(frozen=True)
class TimeVaryingMA:
    """Time-varying MA: R[t] = sin(2*pi*f0*t) * sum_i w_i xi[t-i]."""

    weights: Sequence[float] = DEFAULT_MA_WEIGHTS
    f0: float = 0.042

    def validate(self, n: int) -> None:
        MovingAverage(self.weights).validate(n)
        if not 0.0 < self.f0 < 0.25:
            raise ValueError("modulation frequency must lie in (0, 1/4)")


@dataclass(frozen=True)
class AnalyticWhiteNoise:
    """Analytic white noise: flat one-sided PSD of level psd on [0, 1/2)."""

    psd: float = 0.6

    def validate(self, n: int) -> None:
        if self.psd <= 0:
            raise ValueError("PSD level must be positive")


ProcessSpec = Union[
    ChirpInNoise, MovingAverage, UniformlyModulated, TimeVaryingMA, AnalyticWhiteNoise
]


def _analytic_white_noise(n: int, psd: float, rng: np.random.Generator) -> np.ndarray:
    # Synthesize i.i.d. circular complex Gaussian spectrum on the positive
    # bins of a 4x oversampled grid, inverse DFT, and crop n samples.  The
    # oversampling removes the circular wrap-around correlation at lags
    # near +-n that a length-n construction would carry.
    m = 4 * n
    half = m // 2
    scale = np.sqrt(m * psd / 2.0)
    z = scale * (rng.standard_normal(half) + 1j * rng.standard_normal(half))
    spec = np.zeros(m, dtype=complex)
    spec[:half] = z
    w = np.fft.ifft(spec)
    return w[n : 2 * n]


def _ma_filter(xi: np.ndarray, weights) -> np.ndarray:
    # xi carries len(weights)-1 warm-up samples so the output is stationary.
    return np.convolve(xi, np.asarray(weights, dtype=float), mode="valid")


def generate(spec: ProcessSpec, n: int, seed: int) -> np.ndarray:
    """Generate one length-n realization of the process as a complex signal.

    Chirp-in-noise and pure-noise variants are built directly in the
    analytic domain; the stochastic real-valued processes are synthesized in
    the time domain and passed through :func:`analytic_signal`.
    Pure in (spec, n, seed).
    """
    if n < 2:
        raise ValueError("need at least two samples")
    spec.validate(n)
    rng = np.random.Generator(np.random.PCG64(seed))
    t = np.arange(n)

    if isinstance(spec, ChirpInNoise):
        g = np.exp(1j * np.pi * (2.0 * spec.alpha * t + spec.beta * t * t))
        if spec.noise_psd > 0:
            g = g + _analytic_white_noise(n, spec.noise_psd, rng)
        return g
    if isinstance(spec, AnalyticWhiteNoise):
        return _analytic_white_noise(n, spec.psd, rng)
    if isinstance(spec, MovingAverage):
        order = len(spec.weights) - 1
        xi = rng.normal(0.0, np.sqrt(spec.xi_var), n + order)
        return analytic_signal(_ma_filter(xi, spec.weights))
    if isinstance(spec, UniformlyModulated):
        xi = rng.standard_normal(n)
        return analytic_signal(np.sin(2.0 * np.pi * spec.f0 * t) * xi)
    if isinstance(spec, TimeVaryingMA):
        order = len(spec.weights) - 1
        xi = rng.standard_normal(n + order)
        r = np.sin(2.0 * np.pi * spec.f0 * t) * _ma_filter(xi, spec.weights)
        return analytic_signal(r)
    raise ValueError(f"unknown process spec: {spec!r}")
