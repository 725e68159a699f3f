"""Cooperative-NOMA relay-selection laboratory.

Monte Carlo link-level simulation and the matching closed-form outage,
asymptote, diversity-order and throughput chain for full/half-duplex
decode-and-forward relays drawn uniformly on a disc.
"""

from ._engine import HAVE_COMPILED, engine_name
from .analytic import (
    AnalyticPoint,
    Theta1Breakdown,
    analytic_point,
    asymptotic_outage,
    diversity_order_estimate,
    exact_outage,
    rrs_outage,
    srs_outage,
    theta1_conditional,
    throughput,
    trs_outage,
)
from .config import (
    DerivedThresholds,
    DuplexMode,
    Scheme,
    SystemConfig,
    compute_thresholds,
    validate_config,
)
from .montecarlo import (
    DistanceMode,
    NetworkRealization,
    OutageEstimate,
    SinrSet,
    chunk_rng,
    compute_sinrs,
    estimate_outage,
    sample_realization,
    select_srs,
    select_trs,
    trial_outage,
)
from .numerics import (
    QuadratureTable,
    build_quadrature,
    disc_cdf_chebyshev,
    disc_cdf_closed_alpha2,
    disc_cdf_exact,
    exp_integral_ei,
    scaled_exp_ei,
)

__all__ = [
    "AnalyticPoint",
    "DerivedThresholds",
    "DistanceMode",
    "DuplexMode",
    "HAVE_COMPILED",
    "NetworkRealization",
    "OutageEstimate",
    "QuadratureTable",
    "Scheme",
    "SinrSet",
    "SystemConfig",
    "Theta1Breakdown",
    "analytic_point",
    "asymptotic_outage",
    "build_quadrature",
    "chunk_rng",
    "compute_sinrs",
    "compute_thresholds",
    "disc_cdf_chebyshev",
    "disc_cdf_closed_alpha2",
    "disc_cdf_exact",
    "diversity_order_estimate",
    "engine_name",
    "estimate_outage",
    "exact_outage",
    "exp_integral_ei",
    "rrs_outage",
    "sample_realization",
    "scaled_exp_ei",
    "select_srs",
    "select_trs",
    "srs_outage",
    "theta1_conditional",
    "throughput",
    "trial_outage",
    "trs_outage",
    "validate_config",
]

__version__ = "0.1.0"
