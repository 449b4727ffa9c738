"""Closed-form evaluation of the attenuated harmonic kernel and its integrals.

The kernel P(t) = sum_{k>=1} q**k cos(kt + beta*pi/2) is the real part of a
geometric series in q*exp(it), so every quantity here reduces to the two
auxiliary functions

    z_q(q, t)     = 1 / sqrt(1 - 2q cos t + q**2)
    theta_q(q, t) = atan2(q sin t, 1 - q cos t)

which are the modulus and argument of 1/(1 - q e^{it}).  Truncated series
evaluators are kept only as verification oracles.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PoissonParams",
    "VPParams",
    "z_q",
    "theta_q",
    "poisson_kernel",
    "poisson_kernel_series",
    "poisson_tail",
    "poisson_tail_series",
    "block_sum",
    "poisson_integral",
]


@dataclass(frozen=True)
class PoissonParams:
    """Kernel parameters: attenuation q in (0,1) and phase beta, stored mod 4.

    The kernel is 4-periodic in beta, so beta is normalized into [0, 4) at
    construction; this preserves all kernel values.
    """

    q: float
    beta: float

    def __post_init__(self):
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie strictly inside (0, 1); got {self.q}")
        object.__setattr__(self, "beta", float(self.beta) % 4.0)


@dataclass(frozen=True)
class VPParams:
    """Averaging window: mean of the p partial sums S_{n-p} .. S_{n-1}.

    p = n is accepted (the sums module handles it); the prediction and
    witness operations additionally require p < n.
    """

    n: int
    p: int

    def __post_init__(self):
        if self.n < 1 or self.p < 1:
            raise ValueError("n and p must be positive integers")
        if self.p > self.n:
            raise ValueError(f"p must not exceed n; got p={self.p}, n={self.n}")


def _as_float_array(t):
    return np.asarray(t, dtype=float)


def _scalar_or_array(t, out):
    if np.ndim(t) == 0:
        return float(out)
    return out


def z_q(q: float, t) -> float | np.ndarray:
    """1/sqrt(1 - 2q cos t + q**2); strictly positive for q in (0,1)."""
    tt = _as_float_array(t)
    return _scalar_or_array(t, 1.0 / np.sqrt(1.0 - 2.0 * q * np.cos(tt) + q * q))


def theta_q(q: float, t) -> float | np.ndarray:
    """Continuous argument of 1/(1 - q e^{it}), zero at t = 0.

    1 - q cos t > 0 for q < 1, so the two-argument arctangent stays on the
    principal branch and the result is continuous on all of R.
    """
    tt = _as_float_array(t)
    return _scalar_or_array(t, np.arctan2(q * np.sin(tt), 1.0 - q * np.cos(tt)))


def poisson_kernel(params: PoissonParams, t) -> float | np.ndarray:
    """sum_{k>=1} q**k cos(kt + beta*pi/2) in closed form."""
    tt = _as_float_array(t)
    w = params.q * np.exp(1j * tt)
    phase = np.exp(1j * (np.pi / 2.0) * params.beta)
    return _scalar_or_array(t, np.real(phase * w / (1.0 - w)))


def poisson_tail(params: PoissonParams, m: int, t) -> float | np.ndarray:
    """Tail sum_{k>=m} q**k cos(kt + beta*pi/2) = q**m z cos(mt + theta + beta*pi/2)."""
    if m < 1:
        raise ValueError("tail start index m must be >= 1")
    q = params.q
    tt = _as_float_array(t)
    arg = m * tt + theta_q(q, tt) + 0.5 * np.pi * params.beta
    return _scalar_or_array(t, q**m * z_q(q, tt) * np.cos(arg))


def poisson_kernel_series(params: PoissonParams, t, terms: int = 2000) -> float | np.ndarray:
    """Truncated-series oracle for poisson_kernel; tail < q**(terms+1)/(1-q)."""
    return poisson_tail_series(params, 1, t, terms)


def poisson_tail_series(params: PoissonParams, m: int, t, terms: int = 2000) -> float | np.ndarray:
    """Truncated-series oracle for poisson_tail (direct summation)."""
    if m < 1:
        raise ValueError("tail start index m must be >= 1")
    tt = np.atleast_1d(_as_float_array(t))
    k = np.arange(m, m + terms)
    qk = params.q ** k.astype(float)
    out = np.cos(tt[..., None] * k + 0.5 * np.pi * params.beta) @ qk
    if np.ndim(t) == 0:
        return float(out[0])
    return out


def block_sum(params: PoissonParams, vp: VPParams, t) -> float | np.ndarray:
    """sum_{k=n-p+1}^{n} q**k cos(kt + theta_q(t) + beta*pi/2), in closed form.

    Summing the geometric block and splitting off modulus and argument of
    (1 - (q e^{it})**p)/(1 - q e^{it}) gives

        q**(n-p+1) * (z_q(q,t)/z_q(q**p, pt))
                   * cos((n-p+1) t + 2 theta_q(q,t) - theta_q(q**p, pt) + beta*pi/2)
    """
    q, beta = params.q, params.beta
    n, p = vp.n, vp.p
    m = n - p + 1
    qp = q**p
    tt = _as_float_array(t)
    arg = m * tt + 2.0 * theta_q(q, tt) - theta_q(qp, p * tt) + 0.5 * np.pi * beta
    out = q**m * (z_q(q, tt) / z_q(qp, p * tt)) * np.cos(arg)
    return _scalar_or_array(t, out)


def poisson_integral(phi, params: PoissonParams, a0: float, x, n_grid: int = 4096) -> float | np.ndarray:
    """a0 + (1/pi) * integral over [0, 2pi) of phi(x+t) P(t) dt.

    Uniform trapezoid quadrature, spectrally accurate for smooth periodic
    integrands.  phi must be a vectorized 2pi-periodic callable (a
    SampledPeriodicFunction qualifies).  The grid size must be a power of
    two >= 256.
    """
    if n_grid < 256 or n_grid & (n_grid - 1):
        raise ValueError(f"quadrature grid must be a power of two >= 256; got {n_grid}")
    t = 2.0 * np.pi * np.arange(n_grid) / n_grid
    weights = poisson_kernel(params, t) * (2.0 / n_grid)
    xs = _as_float_array(x)
    vals = np.atleast_1d(xs)[..., None] + t
    out = np.asarray(phi(vals), dtype=float) @ weights + a0
    if xs.ndim == 0:
        return float(out[0])
    return out
