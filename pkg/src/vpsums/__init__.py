"""Deviation asymptotics of de la Vallee Poussin sums on kernel-smoothed classes.

The package evaluates the averaged partial sums V_{n,p} of Fourier series,
the attenuated harmonic kernel and its integrals, the sharp-constant
predictions for the worst-case deviation over H_omega-smooth boundary data,
and the oscillating witness function that realizes those predictions.
"""

from .constants import (
    TheoremPrediction,
    delta_p,
    e_n,
    elliptic_k,
    k_pq_closed,
    k_pq_quadrature,
    theorem1_prediction,
    theorem2_prediction,
    theorem3_bracket,
)
from .extremal import (
    ChangeOfVariable,
    OscillationGrid,
    PhiStar,
    alpha_q_value,
    build_phi_star,
    check_h_omega,
    make_change_of_variable,
    make_grid,
    make_phi_star,
)
from .harness import (
    CSV_HEADER,
    DeviationReport,
    SweepLine,
    estimate_sup_deviation,
    load_sweep,
    sup_deviation_of,
    verify_identities,
    verify_theorem,
)
from .kernels import (
    PoissonParams,
    VPParams,
    block_sum,
    poisson_integral,
    poisson_kernel,
    poisson_tail,
    theta_q,
    z_q,
)
from .moduli import (
    Modulus,
    check_modulus_axioms,
    has_infinite_slope,
    make_holder,
    make_linear,
    make_log_modulus,
    parse_modulus,
)
from .quadrature import AccuracyError, integrate
from .sums import (
    FourierCoeffs,
    SampledPeriodicFunction,
    deviation_direct,
    deviation_integral,
    fourier_coeffs,
    next_pow2,
    partial_sum,
    poisson_coeffs,
    vp_sum,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ChangeOfVariable",
    "CSV_HEADER",
    "DeviationReport",
    "FourierCoeffs",
    "Modulus",
    "OscillationGrid",
    "PhiStar",
    "PoissonParams",
    "SampledPeriodicFunction",
    "SweepLine",
    "TheoremPrediction",
    "VPParams",
    "alpha_q_value",
    "block_sum",
    "build_phi_star",
    "check_h_omega",
    "check_modulus_axioms",
    "delta_p",
    "deviation_direct",
    "deviation_integral",
    "e_n",
    "elliptic_k",
    "estimate_sup_deviation",
    "fourier_coeffs",
    "has_infinite_slope",
    "integrate",
    "k_pq_closed",
    "k_pq_quadrature",
    "load_sweep",
    "make_change_of_variable",
    "make_grid",
    "make_holder",
    "make_linear",
    "make_log_modulus",
    "make_phi_star",
    "next_pow2",
    "parse_modulus",
    "partial_sum",
    "poisson_coeffs",
    "poisson_integral",
    "poisson_kernel",
    "poisson_tail",
    "sup_deviation_of",
    "theorem1_prediction",
    "theorem2_prediction",
    "theorem3_bracket",
    "theta_q",
    "verify_identities",
    "verify_theorem",
    "vp_sum",
    "z_q",
]
