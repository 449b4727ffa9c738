"""Experiment driver: witness pipeline, theorem sweeps, identity suite.

estimate_sup_deviation builds the witness, pushes it through the kernel
transform spectrally, measures the refined grid maximum of the deviation
and compares it against the predicted principal term.  The measured value
is a lower-bound witness for the class-wide supremum; the interesting
output is the ratio trend as n - p grows.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .constants import (
    delta_p,
    e_n,
    elliptic_k,
    k_pq_closed,
    k_pq_quadrature,
    theorem1_prediction,
    theorem2_prediction,
    theorem3_bracket,
)
from .extremal import build_phi_star, make_change_of_variable, make_grid
from .kernels import (
    PoissonParams,
    VPParams,
    block_sum,
    poisson_kernel,
    poisson_kernel_series,
    poisson_tail,
    poisson_tail_series,
    theta_q,
    z_q,
)
from .moduli import Modulus, make_holder, make_linear, make_log_modulus, parse_modulus
from .sums import (
    FourierCoeffs,
    SampledPeriodicFunction,
    coeffs_to_samples,
    fourier_coeffs,
    next_pow2,
)

__all__ = [
    "DeviationReport",
    "SweepLine",
    "IdentityCheck",
    "CSV_HEADER",
    "estimate_sup_deviation",
    "sup_deviation_of",
    "verify_theorem",
    "verify_identities",
    "load_sweep",
]

CSV_HEADER = "omega,q,beta,n,p,grid,empirical_sup,principal,remainder_scale,ratio"

# Ratio-trend noise allowance and the dominance threshold are engineering
# conventions (the underlying O(1) remainders carry no explicit constants).
TREND_NOISE = 0.02
DOMINANCE_LIMIT = 0.5


@dataclass(frozen=True)
class DeviationReport:
    omega: str
    q: float
    beta: float
    n: int
    p: int
    grid: int
    empirical_sup: float
    principal: float
    remainder_scale: float
    ratio: float
    bracket_low: float | None = None
    bracket_high: float | None = None
    principal_not_dominant: bool = False

    def __post_init__(self):
        vals = [self.empirical_sup, self.principal, self.remainder_scale, self.ratio]
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("report fields must be finite")
        if self.ratio <= 0.0:
            raise ValueError("ratio must be positive")

    def to_csv_row(self) -> str:
        cells = [
            self.omega,
            f"{self.q:.17g}",
            f"{self.beta:.17g}",
            str(self.n),
            str(self.p),
            str(self.grid),
            f"{self.empirical_sup:.17g}",
            f"{self.principal:.17g}",
            f"{self.remainder_scale:.17g}",
            f"{self.ratio:.17g}",
        ]
        return ",".join(cells)

    def to_dict(self) -> dict:
        out = {
            "omega": self.omega,
            "q": self.q,
            "beta": self.beta,
            "n": self.n,
            "p": self.p,
            "grid": self.grid,
            "empirical_sup": self.empirical_sup,
            "principal": self.principal,
            "remainder_scale": self.remainder_scale,
            "ratio": self.ratio,
            "principal_not_dominant": self.principal_not_dominant,
        }
        if self.bracket_low is not None:
            out["bracket_low"] = self.bracket_low
            out["bracket_high"] = self.bracket_high
        return out


@dataclass(frozen=True)
class SweepLine:
    modulus: Modulus
    q: float
    beta: float
    p: int
    m_values: tuple[int, ...]  # values of n - p + 1, ascending


@dataclass(frozen=True)
class IdentityCheck:
    max_error: float
    tolerance: float
    passed: bool


def _tail_cutoff(q: float, m_idx: int) -> int:
    # relative to the leading q**m factor, terms beyond q**(j-m) < 1e-15
    # are invisible in the deviation
    return m_idx + int(math.ceil(math.log(1e-15) / math.log(q)))


def _dense_abs_max(spectrum: np.ndarray, n_src: int, n_eval: int) -> float:
    padded = np.zeros(n_eval // 2 + 1, dtype=complex)
    padded[: spectrum.size] = spectrum * (n_eval / n_src)
    return float(np.max(np.abs(np.fft.irfft(padded, n_eval))))


def _refined_sup(rho: SampledPeriodicFunction, refine_limit: int) -> tuple[float, int]:
    spec = rho.spectrum()
    n_eval = rho.n
    sup = float(np.max(np.abs(rho.samples)))
    for _ in range(refine_limit):
        n_next = 2 * n_eval
        sup_next = _dense_abs_max(spec, rho.n, n_next)
        done = abs(sup_next - sup) < 1e-3 * max(sup_next, 1e-300)
        sup, n_eval = sup_next, n_next
        if done:
            break
    return sup, n_eval


def sup_deviation_of(
    phi: SampledPeriodicFunction,
    params: PoissonParams,
    vp: VPParams,
    refine_limit: int = 5,
) -> tuple[float, int]:
    """Grid maximum of |f - V_{n,p} f| for f the kernel transform of phi.

    Spectral route with the leading q**(n-p+1) factor pulled out before
    any synthesis: the surviving coefficients carry the ramp weight times
    q**(j-m), all O(1), so the measurement keeps full relative accuracy
    even where q**m underflows past the noise floor of f itself.
    Returns (sup, final evaluation grid size).
    """
    m_idx = vp.n - vp.p + 1
    k_cut = min(_tail_cutoff(params.q, m_idx), phi.n // 2 - 1)
    c = fourier_coeffs(phi, k_cut)
    j = np.arange(1, k_cut + 1)
    live = j >= m_idx
    scale = np.zeros(k_cut)
    scale[live] = (
        np.clip((j[live] - (vp.n - vp.p)) / vp.p, 0.0, 1.0)
        * params.q ** (j[live] - m_idx).astype(float)
    )
    phase = 0.5 * np.pi * params.beta
    ca, sa = math.cos(phase), math.sin(phase)
    reduced = FourierCoeffs(
        0.0,
        scale * (c.a * ca - c.b * sa),
        scale * (c.a * sa + c.b * ca),
    )
    n_eval = next_pow2(max(4096, 32 * m_idx, 2 * (k_cut + 1)))
    rho = SampledPeriodicFunction(coeffs_to_samples(reduced, n_eval))
    sup, n_final = _refined_sup(rho, refine_limit)
    return params.q**m_idx * sup, n_final


def _h_omega_step_budget(m: Modulus, n: int) -> np.ndarray:
    d = np.arange(n)
    return m(2.0 * np.pi * np.minimum(d, n - d) / n)


def _perturb(
    phi: SampledPeriodicFunction,
    m: Modulus,
    params: PoissonParams,
    vp: VPParams,
    passes: int,
) -> SampledPeriodicFunction:
    """Local coordinate ascent over the samples under the H_omega constraint.

    Deterministic (fixed scan order, no randomness); a best-effort
    tightening of the lower bound, not a global search.
    """
    samples = phi.samples.copy()
    n = samples.size
    budget = _h_omega_step_budget(m, n)
    budget[0] = np.inf  # a sample never constrains itself
    step = 0.25 * float(m(2.0 * np.pi / n))
    stride = max(1, n // 512)

    def objective(arr: np.ndarray) -> float:
        sup, _ = sup_deviation_of(SampledPeriodicFunction(arr), params, vp, refine_limit=1)
        return sup

    best = objective(samples)
    for _ in range(passes):
        improved = False
        for j in range(0, n, stride):
            for delta in (step, -step):
                cand = samples[j] + delta
                if not np.all(np.abs(cand - samples) <= np.roll(budget, j)):
                    continue
                trial = samples.copy()
                trial[j] = cand
                val = objective(trial)
                if val > best * (1.0 + 1e-12):
                    samples, best, improved = trial, val, True
                    break
        if not improved:
            break
    return SampledPeriodicFunction(samples)


def estimate_sup_deviation(
    m: Modulus,
    params: PoissonParams,
    vp: VPParams,
    theorem: int = 1,
    base_grid: int | None = None,
    perturb_passes: int = 0,
) -> DeviationReport:
    """Full witness pipeline for one parameter set.

    Builds the witness, forms its kernel transform spectrally, measures the
    refined grid maximum of the deviation and fills in the requested
    theorem's prediction.  Requires admissibility n - p >= 6/(1-q).
    """
    cov = make_change_of_variable(params, vp)
    grid = make_grid(cov)
    m_idx = vp.n - vp.p + 1
    k_cut = _tail_cutoff(params.q, m_idx)
    # oversample the witness so aliasing onto the coefficients near j = m
    # stays well under the remainder scale
    n_samples = base_grid or next_pow2(max(8192, 64 * m_idx, 2 * (k_cut + 1)))
    phi = build_phi_star(m, cov, grid, n_samples)
    if perturb_passes > 0:
        phi = _perturb(phi, m, params, vp, perturb_passes)
    sup, n_eval = sup_deviation_of(phi, params, vp)

    if theorem == 1:
        pred = theorem1_prediction(m, params, vp)
    elif theorem == 2:
        if m.name != "holder":
            raise ValueError("theorem 2 applies to the holder family only")
        pred = theorem2_prediction(m.params["alpha"], params, vp)
    elif theorem == 3:
        pred = theorem3_bracket(m, params, vp)
    else:
        raise ValueError(f"unknown theorem id {theorem}")

    return DeviationReport(
        omega=m.label,
        q=params.q,
        beta=params.beta,
        n=vp.n,
        p=vp.p,
        grid=n_eval,
        empirical_sup=sup,
        principal=pred.principal,
        remainder_scale=pred.remainder_scale,
        ratio=sup / pred.principal,
        bracket_low=pred.bracket_low,
        bracket_high=pred.bracket_high,
        principal_not_dominant=pred.remainder_scale / pred.principal > DOMINANCE_LIMIT,
    )


def _trend_ok(ratios: Sequence[float]) -> bool:
    errs = [abs(r - 1.0) for r in ratios]
    return all(b <= a + TREND_NOISE for a, b in zip(errs, errs[1:]))


def verify_theorem(
    theorem: int, sweep: Sequence[SweepLine], perturb_passes: int = 0
) -> tuple[list[DeviationReport], dict]:
    """Run the witness pipeline along each sweep line and check the trend.

    Ratios must approach 1 monotonically (within the documented noise
    allowance) as n - p grows; inadmissible configs are skipped with a
    warning entry.  For the bracket form each report is additionally
    checked against its enclosure, widened by the remainder scale.
    """
    reports: list[DeviationReport] = []
    lines: list[dict] = []
    skipped: list[str] = []
    for line in sweep:
        if theorem == 2 and line.modulus.name != "holder":
            raise ValueError("theorem 2 sweeps require the holder family")
        line_reports: list[DeviationReport] = []
        required = 6.0 / (1.0 - line.q)
        params = PoissonParams(line.q, line.beta)
        for m_val in sorted(line.m_values):
            n = m_val + line.p - 1
            if n - line.p < required:
                skipped.append(
                    f"{line.modulus.label} q={line.q} p={line.p} m={m_val}: "
                    f"needs n - p >= {math.ceil(required)}"
                )
                continue
            rep = estimate_sup_deviation(
                line.modulus,
                params,
                VPParams(n, line.p),
                theorem=theorem,
                perturb_passes=perturb_passes,
            )
            line_reports.append(rep)
        ratios = [r.ratio for r in line_reports]
        entry = {
            "modulus": line.modulus.label,
            "q": line.q,
            "beta": line.beta,
            "p": line.p,
            "m_values": [r.n - r.p + 1 for r in line_reports],
            "ratios": ratios,
            "trend_ok": _trend_ok(ratios),
        }
        if theorem == 3:
            entry["bracket_ok"] = all(
                r.bracket_low - r.remainder_scale <= r.empirical_sup <= r.bracket_high + r.remainder_scale
                for r in line_reports
            )
        lines.append(entry)
        reports.extend(line_reports)
    summary = {
        "theorem": theorem,
        "trend_ok": all(entry["trend_ok"] for entry in lines),
        "lines": lines,
        "skipped": skipped,
    }
    if theorem == 3:
        summary["bracket_ok"] = all(entry.get("bracket_ok", True) for entry in lines)
    return reports, summary


def load_sweep(path: str) -> list[SweepLine]:
    """Read sweep lines from a TOML file.

    Each [[sweep]] table carries: modulus (descriptor string), q, beta, p,
    and m (list of n - p + 1 values).
    """
    if sys.version_info >= (3, 11):
        import tomllib as toml
    else:
        import tomli as toml
    with open(path, "rb") as fh:
        data = toml.load(fh)
    tables = data.get("sweep")
    if not tables:
        raise ValueError(f"{path}: expected at least one [[sweep]] table")
    out = []
    for tbl in tables:
        try:
            out.append(
                SweepLine(
                    modulus=parse_modulus(str(tbl["modulus"])),
                    q=float(tbl["q"]),
                    beta=float(tbl.get("beta", 0.0)),
                    p=int(tbl["p"]),
                    m_values=tuple(int(v) for v in tbl["m"]),
                )
            )
        except KeyError as exc:
            raise ValueError(f"{path}: sweep table missing key {exc}") from None
    return out


# ---------------------------------------------------------------------------
# identity suite


def _check(max_error: float, tol: float) -> IdentityCheck:
    return IdentityCheck(max_error=max_error, tolerance=tol, passed=max_error <= tol)


def verify_identities() -> dict[str, IdentityCheck]:
    """Run the full identity suite; all checks are deterministic sweeps."""
    t_grid = 2.0 * np.pi * np.arange(64) / 64
    q_grid = [round(0.1 * i, 1) for i in range(1, 10)]
    p_grid = list(range(1, 9))
    checks: dict[str, IdentityCheck] = {}

    err = 0.0
    for q in (0.1, 0.5, 0.7, 0.9):
        for beta in (0.0, 0.5, 1.0, 1.7, 2.0, 3.0):
            pp = PoissonParams(q, beta)
            err = max(err, float(np.max(np.abs(
                poisson_kernel(pp, t_grid) - poisson_kernel_series(pp, t_grid)
            ))))
    checks["kernel_series"] = _check(err, 1e-11)

    err = 0.0
    for q in (0.3, 0.6, 0.9):
        for beta in (0.0, 0.5, 1.7, 3.9):
            pp = PoissonParams(q, beta)
            for m in (1, 2, 5, 10, 25, 50):
                err = max(err, float(np.max(np.abs(
                    poisson_tail(pp, m, t_grid) - poisson_tail_series(pp, m, t_grid)
                ))))
    checks["tail_series"] = _check(err, 1e-11)

    err = 0.0
    for q in (0.3, 0.7, 0.9):
        pp = PoissonParams(q, 1.3)
        for m in range(1, 51):
            direct = q**m * np.cos(m * t_grid + 0.5 * np.pi * pp.beta)
            err = max(err, float(np.max(np.abs(
                poisson_tail(pp, m, t_grid) - poisson_tail(pp, m + 1, t_grid) - direct
            ))))
    checks["tail_recursion"] = _check(err, 1e-13)

    err = 0.0
    for q in (0.1, 0.4, 0.7, 0.9, 0.95):
        for beta in (0.0, 0.5, 1.7, 3.9):
            pp = PoissonParams(q, beta)
            for n, p in ((10, 1), (50, 7), (120, 40), (200, 120), (200, 199)):
                vp = VPParams(n, p)
                k = np.arange(n - p + 1, n + 1)
                direct = np.cos(
                    t_grid[:, None] * k + theta_q(q, t_grid)[:, None] + 0.5 * np.pi * beta
                ) @ (q ** k.astype(float))
                err = max(err, float(np.max(np.abs(block_sum(pp, vp, t_grid) - direct))))
    checks["block_sum"] = _check(err, 1e-12)

    err = 0.0
    err_p1 = 0.0
    err_asym = -np.inf
    err_bracket = -np.inf
    for q in q_grid:
        quad1 = k_pq_quadrature(1, q)
        err_p1 = max(err_p1, abs(quad1 - 4.0 * elliptic_k(q)))
        for p in p_grid:
            closed = k_pq_closed(p, q)
            err = max(err, abs(k_pq_quadrature(p, q) - closed))
            err_asym = max(err_asym, abs(closed * (1.0 - q * q) / (2.0 * np.pi) - 1.0) - 2.0 * q**p)
            err_bracket = max(
                err_bracket, (1.0 + q**p) / (1.0 + q) * elliptic_k(q**p) - elliptic_k(q)
            )
    checks["kpq_quadrature_vs_closed"] = _check(err, 1e-9)
    checks["kpq_p1_collapse"] = _check(err_p1, 1e-10)
    checks["kpq_asymptote"] = _check(err_asym, 1e-12)
    checks["bracket_inequality"] = _check(err_bracket, 1e-12)
    checks["kpq_q_to_zero"] = _check(
        max(abs(k_pq_quadrature(p, 1e-8) - 2.0 * np.pi) for p in (1, 3, 8)), 1e-6
    )

    moduli = [
        make_holder(0.25),
        make_holder(0.5),
        make_holder(0.75),
        make_log_modulus("log_power", 0.3),
        make_log_modulus("log_power", 0.7),
        make_log_modulus("power_log", 0.5),
        make_log_modulus("power_log", 1.0),
        make_log_modulus("inverse_log", 0.5),
        make_log_modulus("inverse_log", 1.0),
    ]
    err = -np.inf
    for mod in moduli:
        for n in (2, 8, 32, 128, 1024):
            val = e_n(mod, n)
            hi = mod(np.pi / n)
            lo = (2.0 / np.pi) * hi
            err = max(err, lo - val, val - hi)
    checks["e_n_bounds"] = _check(err, 1e-12)

    lin = make_linear()
    checks["e_n_linear"] = _check(
        max(abs(e_n(lin, n) - 2.0 / n) for n in (1, 2, 8, 32, 128, 1024)), 1e-12
    )
    return checks
