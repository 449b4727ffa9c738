"""Sharp constants and prediction formulas for the deviation asymptotics.

Everything funnels into three ingredients: the complete elliptic integral
K(q) (AGM iteration), the kernel constant K_{p,q} (closed elliptic form,
with the defining integral kept as a quadrature oracle), and the averaged
modulus e_n(omega).  The theorem*_ operations assemble these into the
principal term, the remainder scale (the factor multiplying an unknown
bounded quantity, never a bound itself) and, for the bracket form, the
two-sided enclosure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import PoissonParams, VPParams
from .moduli import Modulus
from .quadrature import integrate

__all__ = [
    "TheoremPrediction",
    "elliptic_k",
    "k_pq_quadrature",
    "k_pq_closed",
    "delta_p",
    "e_n",
    "theorem1_prediction",
    "theorem2_prediction",
    "theorem3_bracket",
]


@dataclass(frozen=True)
class TheoremPrediction:
    """principal term, remainder scale, and (bracket form only) the enclosure."""

    principal: float
    remainder_scale: float
    bracket_low: float | None = None
    bracket_high: float | None = None

    def __post_init__(self):
        if not (self.principal > 0.0 and math.isfinite(self.principal)):
            raise ValueError("principal term must be positive and finite")
        if not (self.remainder_scale > 0.0 and math.isfinite(self.remainder_scale)):
            raise ValueError("remainder scale must be positive and finite")
        if self.bracket_low is not None and self.bracket_high is not None:
            if self.bracket_low > self.bracket_high:
                raise ValueError("bracket endpoints out of order")


def elliptic_k(q: float) -> float:
    """Complete elliptic integral of the first kind, modulus convention.

    K(q) = integral over [0, pi/2] of dt/sqrt(1 - q**2 sin**2 t)
         = pi / (2 * AGM(1, sqrt(1 - q**2))).
    """
    if not 0.0 <= q < 1.0:
        raise ValueError(f"elliptic modulus must lie in [0, 1); got {q}")
    a, b = 1.0, math.sqrt(1.0 - q * q)
    # quadratic convergence: well under 10 rounds to the last bit
    for _ in range(60):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return math.pi / (2.0 * a)


def _validate_pq(p: int, q: float) -> None:
    if p < 1:
        raise ValueError("p must be a positive integer")
    if not 0.0 < q < 1.0:
        raise ValueError(f"q must lie strictly inside (0, 1); got {q}")


def k_pq_quadrature(p: int, q: float, tol: float = 1e-11) -> float:
    """The kernel constant by direct quadrature of its defining integral.

    integral over [0, 2pi] of sqrt(1 - 2q**p cos pt + q**(2p))
                              / (1 - 2q cos t + q**2) dt.
    The integrand is even and peaks like (1-q)**-2 at t = 0, so we fold to
    2 * integral over [0, pi] with panels clustered at the peak.
    """
    _validate_pq(p, q)
    qp = q**p

    def f(t: np.ndarray) -> np.ndarray:
        num = np.sqrt(1.0 - 2.0 * qp * np.cos(p * t) + qp * qp)
        den = 1.0 - 2.0 * q * np.cos(t) + q * q
        return num / den

    return 2.0 * integrate(f, 0.0, math.pi, tol=0.5 * tol, grade_left=True)


def k_pq_closed(p: int, q: float) -> float:
    """Closed elliptic form of the kernel constant: 4 (1-q**2p)/(1-q**2) K(q**p)."""
    _validate_pq(p, q)
    return 4.0 * (1.0 - q ** (2 * p)) / (1.0 - q * q) * elliptic_k(q**p)


def delta_p(p: int) -> int:
    """Remainder exponent: 2 for p = 1, else 3."""
    if p < 1:
        raise ValueError("p must be a positive integer")
    return 2 if p == 1 else 3


def e_n(m: Modulus, n: int, tol: float = 1e-12) -> float:
    """Averaged modulus integral over [0, pi/2] of omega(2t/n) sin t dt.

    Requires a convex-upwards modulus (for non-convex ones the weight in
    front of this integral is ambiguous, so they are rejected).
    """
    if not m.convex_upwards:
        raise ValueError("e_n is only defined here for convex-upwards moduli")
    if n < 1:
        raise ValueError("n must be a positive integer")
    half = 0.5 * math.pi
    kinks = tuple(0.5 * n * c for c in m.breakpoints if 0.0 < 0.5 * n * c < half)

    def f(t: np.ndarray) -> np.ndarray:
        return m(2.0 * t / n) * np.sin(t)

    return integrate(f, 0.0, half, tol=tol, breakpoints=kinks, grade_left=True)


def _common(params: PoissonParams, vp: VPParams):
    if vp.p >= vp.n:
        raise ValueError("predictions require p < n")
    m_idx = vp.n - vp.p + 1
    return m_idx, params.q**m_idx / vp.p


def theorem1_prediction(m: Modulus, params: PoissonParams, vp: VPParams) -> TheoremPrediction:
    """Leading term (q**m/p) (K_{p,q}/pi**2) e_m(omega) with m = n-p+1.

    remainder_scale = (q**m/p) * omega(pi) / ((1-q)**delta(p) * m).
    """
    m_idx, front = _common(params, vp)
    q = params.q
    principal = front * k_pq_closed(vp.p, q) / math.pi**2 * e_n(m, m_idx)
    remainder = front * m(math.pi) / ((1.0 - q) ** delta_p(vp.p) * m_idx)
    return TheoremPrediction(principal, remainder)


def theorem2_prediction(alpha: float, params: PoissonParams, vp: VPParams) -> TheoremPrediction:
    """Specialization to omega(t) = t**alpha.

    principal = (q**m / (p m**alpha)) (2**alpha/pi**2) K_{p,q} I_alpha with
    I_alpha = integral of t**alpha sin t over [0, pi/2]; the remainder scale
    carries 1/((1-q)**delta(p) m**(1-alpha)).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie strictly inside (0, 1)")
    m_idx, front = _common(params, vp)
    q = params.q
    i_alpha = integrate(
        lambda t: t**alpha * np.sin(t), 0.0, 0.5 * math.pi, tol=1e-12, grade_left=True
    )
    front_alpha = front / m_idx**alpha
    principal = front_alpha * 2.0**alpha / math.pi**2 * k_pq_closed(vp.p, q) * i_alpha
    remainder = front_alpha / ((1.0 - q) ** delta_p(vp.p) * m_idx ** (1.0 - alpha))
    return TheoremPrediction(principal, remainder)


def theorem3_bracket(m: Modulus, params: PoissonParams, vp: VPParams) -> TheoremPrediction:
    """Two-sided enclosure of the leading constant.

    bracket_low/high = (q**m/p) (4 J / pi**2) ((1-q**p)/(1-q)) e_m(omega) at
    J = ((1+q**p)/(1+q)) K(q**p) and J = K(q).  The low endpoint equals the
    theorem1 principal (algebraic factorization of 1-q**2p); the remainder
    scale uses omega(1/m) in place of omega(pi).
    """
    m_idx, front = _common(params, vp)
    q, p = params.q, vp.p
    qp = q**p
    e_val = e_n(m, m_idx)
    shape = front * 4.0 / math.pi**2 * (1.0 - qp) / (1.0 - q) * e_val
    j_low = (1.0 + qp) / (1.0 + q) * elliptic_k(qp)
    j_high = elliptic_k(q)
    low = shape * j_low
    high = shape * j_high
    remainder = front * m(1.0 / m_idx) / ((1.0 - q) ** delta_p(p) * m_idx)
    return TheoremPrediction(low, remainder, bracket_low=low, bracket_high=high)
