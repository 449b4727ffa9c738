"""Fourier analysis of sampled periodic functions and the deviation f - V_{n,p}.

Coefficients come from uniform-grid DFT sums (exact for trigonometric
polynomials below the Nyquist index).  The deviation is available through
two independent routes: spectral reweighting of the coefficients, and the
oscillatory integral representation against the kernel block; their
agreement is one of the package's main cross-checks.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kernels import PoissonParams, VPParams, theta_q, z_q

__all__ = [
    "SampledPeriodicFunction",
    "FourierCoeffs",
    "next_pow2",
    "fourier_coeffs",
    "coeffs_to_samples",
    "partial_sum",
    "vp_sum",
    "poisson_coeffs",
    "deviation_direct",
    "deviation_integral",
]


def next_pow2(n: int) -> int:
    """Smallest power of two >= n."""
    m = 1
    while m < n:
        m <<= 1
    return m


class SampledPeriodicFunction:
    """Real 2pi-periodic function given by samples at t_j = 2pi j / N.

    N must be a power of two >= 256 and must exceed twice the largest
    harmonic index used in any sum built on the samples (anti-aliasing is
    enforced by fourier_coeffs).  Instances are immutable; calling one
    evaluates the trigonometric interpolant of the samples.
    """

    def __init__(self, samples):
        arr = np.array(samples, dtype=float)
        if arr.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        n = arr.size
        if n < 256 or n & (n - 1):
            raise ValueError(f"grid size must be a power of two >= 256; got {n}")
        arr.flags.writeable = False
        self.samples = arr
        self._spectrum = None

    @classmethod
    def from_function(cls, f, n: int) -> "SampledPeriodicFunction":
        t = 2.0 * np.pi * np.arange(n) / n
        return cls(np.asarray(f(t), dtype=float))

    @property
    def n(self) -> int:
        return self.samples.size

    @property
    def grid(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n) / self.n

    def spectrum(self) -> np.ndarray:
        """Cached half-spectrum rfft(samples), length N/2 + 1."""
        if self._spectrum is None:
            self._spectrum = np.fft.rfft(self.samples)
            self._spectrum.flags.writeable = False
        return self._spectrum

    def __call__(self, x):
        spec = self.spectrum()
        n = self.n
        scale = np.full(spec.size, 2.0 / n)
        scale[0] = 1.0 / n
        scale[-1] = 1.0 / n
        weights = spec * scale
        k = np.arange(spec.size)
        xs = np.asarray(x, dtype=float)
        flat = np.atleast_1d(xs).ravel()
        out = np.empty(flat.size)
        # chunked to bound the (chunk x N/2) phase matrix
        step = max(1, 2**22 // max(spec.size, 1))
        for lo in range(0, flat.size, step):
            block = flat[lo : lo + step]
            phases = np.exp(1j * block[:, None] * k[None, :])
            out[lo : lo + step] = (phases @ weights).real
        if xs.ndim == 0:
            return float(out[0])
        return out.reshape(xs.shape)


@dataclass(frozen=True)
class FourierCoeffs:
    """Mean a0 plus cosine/sine coefficients for harmonics 1..K.

    a[j-1] and b[j-1] hold the coefficients of cos(j x) and sin(j x); the
    stored a0 is the mean value itself (no a0/2 convention).
    """

    a0: float
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if self.a.shape != self.b.shape or self.a.ndim != 1:
            raise ValueError("coefficient arrays must be 1-d and equally long")
        self.a.flags.writeable = False
        self.b.flags.writeable = False

    @property
    def k_max(self) -> int:
        return self.a.size


def fourier_coeffs(f: SampledPeriodicFunction, k: int) -> FourierCoeffs:
    """DFT-sum coefficients a_j = (2/N) sum f(t_j) cos(j t_j), b_j likewise.

    Exact for trigonometric polynomials of degree < N/2.  Requires 2k < N.
    """
    if k < 0:
        raise ValueError("harmonic count must be nonnegative")
    if 2 * k >= f.n:
        raise ValueError(f"aliasing: need 2K < N, got K={k} on an N={f.n} grid")
    spec = f.spectrum()
    a0 = spec[0].real / f.n
    a = 2.0 * spec[1 : k + 1].real / f.n
    b = -2.0 * spec[1 : k + 1].imag / f.n
    return FourierCoeffs(a0, a, b)


def coeffs_to_samples(c: FourierCoeffs, n: int) -> np.ndarray:
    """Evaluate the series on the uniform n-point grid (inverse FFT synthesis)."""
    if n < 2 * (c.k_max + 1):
        raise ValueError(f"grid of {n} points cannot carry harmonic {c.k_max}")
    spec = np.zeros(n // 2 + 1, dtype=complex)
    spec[0] = n * c.a0
    spec[1 : c.k_max + 1] = 0.5 * n * (c.a - 1j * c.b)
    return np.fft.irfft(spec, n)


def _synthesize(c: FourierCoeffs, k: int, x, weights=None):
    xs = np.asarray(x, dtype=float)
    flat = np.atleast_1d(xs).ravel()
    j = np.arange(1, k + 1)
    wa = c.a[:k] if weights is None else c.a[:k] * weights
    wb = c.b[:k] if weights is None else c.b[:k] * weights
    out = np.empty(flat.size)
    step = max(1, 2**22 // max(k, 1))
    for lo in range(0, flat.size, step):
        block = flat[lo : lo + step, None] * j[None, :]
        out[lo : lo + step] = np.cos(block) @ wa + np.sin(block) @ wb
    out += c.a0
    if xs.ndim == 0:
        return float(out[0])
    return out.reshape(xs.shape)


def partial_sum(c: FourierCoeffs, k: int, x) -> float | np.ndarray:
    """A0 + sum_{j=1}^{k} (a_j cos jx + b_j sin jx); k = 0 gives the mean."""
    if k < 0 or k > c.k_max:
        raise ValueError(f"partial sum order {k} outside stored range 0..{c.k_max}")
    return _synthesize(c, k, x)


def _vp_weights(vp: VPParams, k: int) -> np.ndarray:
    # harmonic j enters S_{n-p}..S_{n-1} in (n - j) of the p sums for
    # n-p < j <= n-1, in all p of them for j <= n-p, and in none beyond
    j = np.arange(1, k + 1)
    ramp = (vp.n - j) / vp.p
    return np.clip(ramp, 0.0, 1.0)


def vp_sum(c: FourierCoeffs, vp: VPParams, x) -> float | np.ndarray:
    """(1/p) sum_{k=n-p}^{n-1} S_k(x), evaluated as one weighted series."""
    if vp.n - 1 > c.k_max:
        raise ValueError(f"need coefficients up to harmonic {vp.n - 1}, have {c.k_max}")
    k = min(c.k_max, vp.n - 1)
    return _synthesize(c, k, x, weights=_vp_weights(vp, k))


def _rho_weights(vp: VPParams, j: np.ndarray) -> np.ndarray:
    ramp = (j - (vp.n - vp.p)) / vp.p
    return np.clip(ramp, 0.0, 1.0)


def poisson_coeffs(c: FourierCoeffs, params: PoissonParams, a0: float) -> FourierCoeffs:
    """Coefficients of the kernel integral transform of the series c.

    Harmonic j is attenuated by q**j and rotated by beta*pi/2:
    cos j x -> q**j cos(jx - beta*pi/2), sin likewise.  The transform has
    no mean-value term, so a0 of the result is the free parameter.
    """
    j = np.arange(1, c.k_max + 1, dtype=float)
    att = params.q**j
    ang = 0.5 * np.pi * params.beta
    ca, sa = np.cos(ang), np.sin(ang)
    a = att * (c.a * ca - c.b * sa)
    b = att * (c.a * sa + c.b * ca)
    return FourierCoeffs(a0, a, b)


def deviation_direct(f: SampledPeriodicFunction, vp: VPParams) -> SampledPeriodicFunction:
    """Samples of rho(x) = f(x) - V_{n,p}(f; x) on f's own grid.

    Spectral route: harmonic j keeps weight 0 for j <= n-p, the ramp
    (j-(n-p))/p for n-p < j < n, and weight 1 for j >= n.
    """
    if vp.n - 1 > f.n // 2 - 1:
        raise ValueError(f"grid of {f.n} points cannot resolve harmonic {vp.n - 1}")
    spec = f.spectrum().copy()
    j = np.arange(spec.size)
    spec *= _rho_weights(vp, j)
    return SampledPeriodicFunction(np.fft.irfft(spec, f.n))


def deviation_integral(
    phi,
    params: PoissonParams,
    vp: VPParams,
    x,
    n_grid: int | None = None,
) -> float | np.ndarray:
    """rho at x through the oscillatory integral representation.

    Computes (q**m / (pi p)) * integral of (phi(x+t) - phi(x)) W(t) dt with
    m = n-p+1 and W(t) = z_q(q,t)**2 / z_q(q**p, pt)
                         * cos(m t + 2 theta_q(q,t) - theta_q(q**p, pt) + beta*pi/2),
    by uniform trapezoid quadrature.  The grid must resolve the oscillation:
    at least 16m points.
    """
    if vp.p >= vp.n:
        raise ValueError("integral representation requires p < n")
    q, beta = params.q, params.beta
    n, p = vp.n, vp.p
    m = n - p + 1
    if n_grid is None:
        n_grid = next_pow2(max(4096, 32 * m))
    if n_grid < 16 * m:
        raise ValueError(f"under-resolved quadrature: need at least {16 * m} points, got {n_grid}")
    t = 2.0 * np.pi * np.arange(n_grid) / n_grid
    qp = q**p
    arg = m * t + 2.0 * theta_q(q, t) - theta_q(qp, p * t) + 0.5 * np.pi * beta
    w = z_q(q, t) ** 2 / z_q(qp, p * t) * np.cos(arg)
    w *= 2.0 * q**m / (p * n_grid)
    xs = np.asarray(x, dtype=float)
    flat = np.atleast_1d(xs).ravel()
    out = np.empty(flat.size)
    step = max(1, 2**22 // n_grid)
    for lo in range(0, flat.size, step):
        block = flat[lo : lo + step]
        vals = np.asarray(phi(block[:, None] + t), dtype=float)
        out[lo : lo + step] = vals @ w - np.asarray(phi(block), dtype=float) * np.sum(w)
    if xs.ndim == 0:
        return float(out[0])
    return out.reshape(xs.shape)
