"""Moduli of continuity and their structural checks.

A modulus omega is nondecreasing with omega(0) = 0 and subadditive; the
convex_upwards flag marks the (weakly) concave ones, which is the standing
assumption of every prediction formula in this package.  Evaluators are
total on [0, oo) and vectorized over numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Modulus",
    "AxiomReport",
    "make_holder",
    "make_log_modulus",
    "make_linear",
    "parse_modulus",
    "check_modulus_axioms",
    "has_infinite_slope",
]

LOG_FAMILIES = ("log_power", "power_log", "inverse_log")

# CLI descriptor tokens for each family constructor.
_DESCRIPTOR_TOKENS = {
    "holder": "holder",
    "log_power": "logpow",
    "power_log": "powlog",
    "inverse_log": "invlog",
    "linear": "linear",
}


@dataclass(frozen=True)
class Modulus:
    """A modulus of continuity on [0, oo).

    eval_fn maps a float ndarray of nonnegative arguments to an ndarray of
    the same shape.  breakpoints lists interior kinks of the evaluator so
    quadratures can split panels there.
    """

    name: str
    eval_fn: Callable[[np.ndarray], np.ndarray]
    convex_upwards: bool
    params: dict = field(default_factory=dict)
    breakpoints: tuple[float, ...] = ()

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if np.any(arr < 0.0):
            raise ValueError("modulus argument must be nonnegative")
        out = self.eval_fn(np.atleast_1d(arr))
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    @property
    def label(self) -> str:
        """Descriptor string, e.g. 'holder:0.5', as accepted by parse_modulus."""
        token = _DESCRIPTOR_TOKENS[self.name]
        if "alpha" in self.params:
            return f"{token}:{self.params['alpha']:g}"
        return token


@dataclass(frozen=True)
class AxiomReport:
    holds: bool
    max_violation: float


def make_holder(alpha: float) -> Modulus:
    """omega(t) = t**alpha for 0 < alpha < 1."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("holder exponent must satisfy 0 < alpha < 1")

    def ev(t: np.ndarray) -> np.ndarray:
        return t**alpha

    return Modulus("holder", ev, convex_upwards=True, params={"alpha": alpha})


def _log_power(alpha: float) -> Modulus:
    if not 0.0 < alpha < 1.0:
        raise ValueError("log_power requires 0 < alpha < 1")

    def ev(t: np.ndarray) -> np.ndarray:
        return np.log1p(t) ** alpha

    return Modulus("log_power", ev, convex_upwards=True, params={"alpha": alpha})


def _power_log(alpha: float) -> Modulus:
    # omega(t) = t**alpha * ln(1/t) up to its maximum at exp(-1/alpha),
    # constant 1/(alpha*e) beyond; continuous and C1 at the junction.
    if not 0.0 < alpha <= 1.0:
        raise ValueError("power_log requires 0 < alpha <= 1")
    cut = math.exp(-1.0 / alpha)
    plateau = 1.0 / (alpha * math.e)

    def ev(t: np.ndarray) -> np.ndarray:
        out = np.full(t.shape, plateau)
        rising = (t > 0.0) & (t <= cut)
        tr = t[rising]
        out[rising] = tr**alpha * -np.log(tr)
        out[t == 0.0] = 0.0
        return out

    return Modulus(
        "power_log", ev, convex_upwards=True, params={"alpha": alpha}, breakpoints=(cut,)
    )


def _inverse_log(alpha: float) -> Modulus:
    # omega(t) = ln(1/t)**-alpha up to exp(-(1+alpha)), constant
    # (1+alpha)**-alpha beyond; continuous but with a derivative kink.
    if not 0.0 < alpha <= 1.0:
        raise ValueError("inverse_log requires 0 < alpha <= 1")
    cut = math.exp(-(1.0 + alpha))
    plateau = (1.0 + alpha) ** -alpha

    def ev(t: np.ndarray) -> np.ndarray:
        out = np.full(t.shape, plateau)
        rising = (t > 0.0) & (t <= cut)
        out[rising] = (-np.log(t[rising])) ** -alpha
        out[t == 0.0] = 0.0
        return out

    return Modulus(
        "inverse_log", ev, convex_upwards=True, params={"alpha": alpha}, breakpoints=(cut,)
    )


def make_log_modulus(family: str, alpha: float) -> Modulus:
    """Build one of the three slowly growing families.

    family is 'log_power' (ln(t+1)**alpha, 0 < alpha < 1), 'power_log'
    (t**alpha ln(1/t) with plateau 1/(alpha e), 0 < alpha <= 1) or
    'inverse_log' (ln(1/t)**-alpha with plateau (1+alpha)**-alpha,
    0 < alpha <= 1).
    """
    if family == "log_power":
        return _log_power(alpha)
    if family == "power_log":
        return _power_log(alpha)
    if family == "inverse_log":
        return _inverse_log(alpha)
    raise ValueError(f"unknown modulus family {family!r}; expected one of {LOG_FAMILIES}")


def make_linear() -> Modulus:
    """omega(t) = t, the boundary case with finite slope at the origin.

    Useful as a negative control: every convexity-based formula still
    applies, but the infinite-slope condition fails.
    """

    def ev(t: np.ndarray) -> np.ndarray:
        return t.copy()

    return Modulus("linear", ev, convex_upwards=True)


def parse_modulus(descriptor: str) -> Modulus:
    """Parse a CLI descriptor like 'holder:0.5', 'logpow:0.3' or 'linear'."""
    token, _, rest = descriptor.partition(":")
    token = token.strip()
    if token == "linear":
        if rest:
            raise ValueError("'linear' takes no parameter")
        return make_linear()
    try:
        alpha = float(rest)
    except ValueError:
        raise ValueError(f"bad modulus descriptor {descriptor!r}: expected family:alpha") from None
    if token == "holder":
        return make_holder(alpha)
    for family, short in (("log_power", "logpow"), ("power_log", "powlog"), ("inverse_log", "invlog")):
        if token == short:
            return make_log_modulus(family, alpha)
    raise ValueError(
        f"unknown modulus family {token!r}; accepted: holder:A, logpow:A, powlog:A, invlog:A, linear"
    )


def check_modulus_axioms(m: Modulus, grid: Sequence[float], tol: float) -> AxiomReport:
    """Check omega(0)=0, monotonicity, subadditivity and (if flagged) midpoint
    concavity over all pairs of the given grid; report the largest violation."""
    pts = np.asarray(sorted(grid), dtype=float)
    if pts.size == 0:
        raise ValueError("grid must be nonempty")
    if pts[0] < 0.0 or pts[-1] > 2.0 * np.pi:
        raise ValueError("grid values must lie in [0, 2pi]")
    if tol <= 0.0:
        raise ValueError("tolerance must be positive")

    worst = abs(float(m(0.0)))
    vals = m(pts)
    if pts.size > 1:
        worst = max(worst, float(np.max(vals[:-1] - vals[1:])))

    t1 = pts[:, None]
    t2 = pts[None, :]
    v1 = vals[:, None]
    v2 = vals[None, :]
    worst = max(worst, float(np.max(m(t1 + t2) - (v1 + v2))))
    if m.convex_upwards:
        worst = max(worst, float(np.max(0.5 * (v1 + v2) - m(0.5 * (t1 + t2)))))
    return AxiomReport(holds=worst <= tol, max_violation=worst)


def has_infinite_slope(m: Modulus, k_max: int = 32) -> bool:
    """Dyadic proxy for lim omega(t)/t = oo as t -> 0.

    Evaluates r_k = omega(2**-k) * 2**k for k = 1..k_max and returns True
    iff r_k is strictly increasing over the tail half of the sequence.  A
    limit cannot be machine-checked; this is a documented heuristic.
    """
    if k_max < 8:
        raise ValueError("k_max must be at least 8")
    k = np.arange(1, k_max + 1)
    r = m(2.0**-k) * 2.0**k
    tail = r[k_max // 2 - 1 :]
    return bool(np.all(np.diff(tail) > 0.0))
