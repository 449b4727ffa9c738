"""Construction of the witness function that realizes the principal term.

The deviation integral oscillates like cos(M y1(t) + const) under a slowly
varying weight, where y1 is a near-identity change of variable and
M = n - p + alpha_q.  The witness phi_star alternates scaled copies of the
modulus between consecutive roots tau_k of that cosine, so that every
oscillation contributes with the same sign.  Outside the covered root range
phi_star vanishes, and by concavity of omega it stays inside H_omega.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import PoissonParams, VPParams, theta_q, z_q
from .moduli import Modulus
from .sums import SampledPeriodicFunction

__all__ = [
    "ChangeOfVariable",
    "OscillationGrid",
    "PhiStar",
    "HOmegaReport",
    "alpha_q_value",
    "make_change_of_variable",
    "make_grid",
    "make_phi_star",
    "build_phi_star",
    "check_h_omega",
]

TWO_PI = 2.0 * math.pi


def alpha_q_value(q: float) -> int:
    """floor(3q/(1-q)) + 2."""
    if not 0.0 < q < 1.0:
        raise ValueError("q must lie strictly inside (0, 1)")
    return int(math.floor(3.0 * q / (1.0 - q))) + 2


@dataclass(frozen=True)
class ChangeOfVariable:
    """The strictly increasing map y1 and its numeric inverse.

    y1(t) = t + (2 theta_q(q,t) - theta_q(q**p, pt) + (1-alpha_q) t
            + beta*pi/2) / M with M = n - p + alpha_q.  Under the
    admissibility condition n - p >= 6/(1-q) the derivative stays inside
    (1/3, 1), so the inverse is well conditioned and bisection converges
    unconditionally.
    """

    params: PoissonParams
    vp: VPParams
    alpha_q: int

    @property
    def denominator(self) -> int:
        return self.vp.n - self.vp.p + self.alpha_q

    def forward(self, t):
        q, beta = self.params.q, self.params.beta
        p = self.vp.p
        tt = np.asarray(t, dtype=float)
        corr = (
            2.0 * theta_q(q, tt)
            - theta_q(q**p, p * tt)
            + (1.0 - self.alpha_q) * tt
            + 0.5 * math.pi * beta
        )
        out = tt + corr / self.denominator
        return float(out) if tt.ndim == 0 else out

    def derivative(self, t):
        q, beta = self.params.q, self.params.beta
        p = self.vp.p
        qp = q**p
        tt = np.asarray(t, dtype=float)
        # d/dt theta_q(q, t) = q (cos t - q) z_q(q, t)**2
        d_theta = q * (np.cos(tt) - q) * z_q(q, tt) ** 2
        d_theta_p = p * qp * (np.cos(p * tt) - qp) * z_q(qp, p * tt) ** 2
        out = 1.0 + (2.0 * d_theta - d_theta_p + 1.0 - self.alpha_q) / self.denominator
        return float(out) if tt.ndim == 0 else out

    def inverse(self, tau, tol: float = 1e-13):
        """Solve y1(t) = tau on [0, 2pi] by bisection (vectorized)."""
        ta = np.atleast_1d(np.asarray(tau, dtype=float))
        y_lo = self.forward(0.0)
        y_hi = self.forward(TWO_PI)
        if np.any(ta < y_lo - 1e-9) or np.any(ta > y_hi + 1e-9):
            raise ValueError("inverse argument outside the range of y1 on [0, 2pi]")
        target = np.clip(ta, y_lo, y_hi)
        lo = np.zeros_like(target)
        hi = np.full_like(target, TWO_PI)
        while float(np.max(hi - lo)) > tol:
            mid = 0.5 * (lo + hi)
            below = self.forward(mid) < target
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out = 0.5 * (lo + hi)
        if np.ndim(tau) == 0:
            return float(out[0])
        return out


@dataclass(frozen=True)
class OscillationGrid:
    """Roots and midpoints of cos(M tau) used to place the oscillations.

    x[k] = k pi / M and tau[k] = x[k] + pi/(2M) for k = 0..k0+1, indexed by
    k directly; tau[k0] is the largest root <= y1(2pi), and s (2 for odd
    k0, 3 for even) is the first oscillation index.
    """

    x: np.ndarray
    tau: np.ndarray
    k0: int
    s: int

    def __post_init__(self):
        self.x.flags.writeable = False
        self.tau.flags.writeable = False


def make_change_of_variable(params: PoissonParams, vp: VPParams) -> ChangeOfVariable:
    """Build the change of variable; requires n - p >= 6/(1-q)."""
    gap = vp.n - vp.p
    required = 6.0 / (1.0 - params.q)
    if gap < required:
        raise ValueError(
            f"inadmissible parameters: need n - p >= {math.ceil(required)} "
            f"for q = {params.q}; got n - p = {gap}"
        )
    return ChangeOfVariable(params, vp, alpha_q_value(params.q))


def make_grid(cov: ChangeOfVariable) -> OscillationGrid:
    big_m = cov.denominator
    y_end = cov.forward(TWO_PI)
    # tau_k <= y1(2pi) iff k <= y1(2pi) M/pi - 1/2; keep the root on exact ties
    k0 = int(math.floor(y_end * big_m / math.pi - 0.5))
    step = math.pi / big_m
    while (k0 + 1.5) * step <= y_end:
        k0 += 1
    while (k0 + 0.5) * step > y_end:
        k0 -= 1
    s = 2 if k0 % 2 == 1 else 3
    if k0 < s + 1:
        raise ValueError("oscillation grid too short; parameters out of the admissible range")
    k = np.arange(k0 + 2, dtype=float)
    x = k * step
    tau = x + 0.5 * step
    return OscillationGrid(x=x, tau=tau, k0=k0, s=s)


@dataclass(frozen=True)
class PhiStar:
    """The witness function, evaluated pointwise through the forward map.

    On the band tau_i <= y1(t) <= tau_{i+1} (for i = s..k0-1) the value is
    (-1)**(i+1) * omega-profile rising from tau_i to the midpoint x_{i+1}
    and falling back to tau_{i+1}; zero outside [y(tau_s), y(tau_k0)].
    Only interval endpoints ever need the numeric inverse.
    """

    modulus: Modulus
    cov: ChangeOfVariable
    grid: OscillationGrid

    def __call__(self, t):
        big_m = self.cov.denominator
        g = self.grid
        tt = np.asarray(t, dtype=float)
        u = np.atleast_1d(self.cov.forward(np.mod(tt, TWO_PI)))
        inside = (u >= g.tau[g.s]) & (u <= g.tau[g.k0])
        i = np.floor(u * big_m / math.pi - 0.5).astype(int)
        i = np.clip(i, g.s, g.k0 - 1)
        rising = u <= g.x[i + 1]
        arg = np.where(
            rising,
            2.0 * np.maximum(u - g.tau[i], 0.0),
            2.0 * np.maximum(g.tau[i + 1] - u, 0.0),
        )
        vals = 0.5 * self.modulus(arg)
        sign = np.where(i % 2 == 0, -1.0, 1.0)  # (-1)**(i+1)
        out = np.where(inside, sign * vals, 0.0)
        if tt.ndim == 0:
            return float(out[0])
        return out.reshape(tt.shape)

    @property
    def peak(self) -> float:
        """sup |phi_star| = omega(pi/M)/2, attained at every t = y(x_{i+1})."""
        return 0.5 * self.modulus(math.pi / self.cov.denominator)

    def support(self) -> tuple[float, float]:
        g = self.grid
        ends = self.cov.inverse(np.array([g.tau[g.s], g.tau[g.k0]]))
        return float(ends[0]), float(ends[1])

    def peak_points(self) -> np.ndarray:
        g = self.grid
        return self.cov.inverse(g.x[g.s + 1 : g.k0 + 1])


@dataclass(frozen=True)
class HOmegaReport:
    max_excess: float


def make_phi_star(m: Modulus, cov: ChangeOfVariable, grid: OscillationGrid) -> PhiStar:
    if not m.convex_upwards:
        raise ValueError("the witness construction requires a convex-upwards modulus")
    return PhiStar(m, cov, grid)


def build_phi_star(
    m: Modulus, cov: ChangeOfVariable, grid: OscillationGrid, n: int
) -> SampledPeriodicFunction:
    """Sample the witness on the uniform n-point grid."""
    phi = make_phi_star(m, cov, grid)
    return SampledPeriodicFunction.from_function(phi, n)


def check_h_omega(f: SampledPeriodicFunction, m: Modulus) -> HOmegaReport:
    """Largest excess |f(t') - f(t'')| - omega(dist) over all sample pairs.

    dist is the periodic distance; membership in H_omega on the sample grid
    means max_excess <= 0 up to rounding.  Pairs are scanned by circular
    shift, so the cost is N**2/2 comparisons but only N/2 modulus values.
    """
    s = f.samples
    n = f.n
    shifts = np.arange(1, n // 2 + 1)
    omega_d = m(TWO_PI * shifts / n)
    worst = -float(omega_d[0])
    for d, w in zip(shifts, omega_d):
        gap = float(np.max(np.abs(np.roll(s, -int(d)) - s)))
        worst = max(worst, gap - float(w))
    return HOmegaReport(max_excess=worst)
