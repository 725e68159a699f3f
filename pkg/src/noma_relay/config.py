"""Scenario configuration, duplex/scheme taxonomy and derived SINR thresholds.

Everything downstream (closed forms and Monte Carlo trials) works on linear
scale; dB fields are converted exactly once through the ``rho`` / ``omega_li``
properties. Both transmit powers are normalized to 1, so a single transmit
SNR drives the BS->relay and relay->user hops.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class DuplexMode(enum.Enum):
    """Relay duplexing mode; fixes the loop-interference switching factor."""

    FULL_DUPLEX = "fd"
    HALF_DUPLEX = "hd"

    @property
    def switching_factor(self) -> float:
        """1.0 when the relay transmits and receives simultaneously, else 0.0."""
        return 1.0 if self is DuplexMode.FULL_DUPLEX else 0.0


class Scheme(enum.Enum):
    """Relay-selection schemes. RRS variants behave like K=1 selection."""

    SRS = "srs"
    TRS = "trs"
    RRS_SRS = "rrs-srs"
    RRS_TRS = "rrs-trs"
    OMA = "oma"


@dataclass(frozen=True)
class SystemConfig:
    """One scenario: powers, rates, geometry, loop interference, relay count.

    Defaults reproduce the reference numerical setup (a1=0.2/a2=0.8, rates
    1 and 0.1 BPCU, path-loss exponent 2, 2 m relay disc, users at 10 m and
    12 m, K=2 relays, -10 dB mean loop interference, 15 quadrature nodes).
    """

    snr_db: float = 30.0
    a1: float = 0.2
    a2: float = 0.8
    rate_d1: float = 1.0
    rate_d2: float = 0.1
    alpha: float = 2.0
    disc_radius: float = 2.0
    d1: float = 10.0
    d2: float = 12.0
    omega_li_db: float = -10.0
    num_relays: int = 2
    duplex: DuplexMode = DuplexMode.FULL_DUPLEX
    quad_order: int = 15

    @property
    def rho(self) -> float:
        """Transmit SNR, linear."""
        return 10.0 ** (self.snr_db / 10.0)

    @property
    def omega_li(self) -> float:
        """Mean loop-interference power, linear."""
        return 10.0 ** (self.omega_li_db / 10.0)


# a1 + a2 = 1 is checked up to float round-off.
_COEFF_SUM_TOL = 1e-9


def validate_config(config: SystemConfig) -> list[str]:
    """Return a description of every violated invariant (empty list = valid)."""
    violations = []
    if not (config.a1 > 0.0):
        violations.append(f"a1 must be positive, got {config.a1}")
    if not (config.a1 <= config.a2):
        violations.append(
            f"a1 must not exceed a2 (a1={config.a1}, a2={config.a2})"
        )
    if abs(config.a1 + config.a2 - 1.0) > _COEFF_SUM_TOL:
        violations.append(
            f"power allocation must satisfy a1 + a2 = 1, got {config.a1 + config.a2}"
        )
    if not (config.rate_d1 > 0.0):
        violations.append(f"rate_d1 must be positive, got {config.rate_d1}")
    if not (config.rate_d2 > 0.0):
        violations.append(f"rate_d2 must be positive, got {config.rate_d2}")
    if not (config.alpha >= 2.0):
        violations.append(f"alpha must be >= 2, got {config.alpha}")
    if not (config.disc_radius > 0.0):
        violations.append(f"disc_radius must be positive, got {config.disc_radius}")
    if not (config.d1 > 0.0):
        violations.append(f"d1 must be positive, got {config.d1}")
    if not (config.d2 > 0.0):
        violations.append(f"d2 must be positive, got {config.d2}")
    if not (config.num_relays >= 1):
        violations.append(f"num_relays must be >= 1, got {config.num_relays}")
    if not (config.quad_order >= 1):
        violations.append(f"quad_order must be >= 1, got {config.quad_order}")
    return violations


@dataclass(frozen=True)
class DerivedThresholds:
    """Linear SINR thresholds and the scale constants of the outage chain.

    ``tau`` is the common threshold of the distant user's three decoding
    points, ``xi`` the nearby user's, both already divided by rho. When the
    power split cannot support the distant user's rate even noise-free
    (``feasible`` False), ``tau``/``theta`` are +inf and every outage
    probability is 1 by definition.
    """

    gamma_th1: float
    gamma_th2: float
    tau: float
    xi: float
    theta: float
    feasible: bool


def compute_thresholds(config: SystemConfig) -> DerivedThresholds:
    """Derive the SINR thresholds for the configured duplex mode.

    Half-duplex relaying spends two slots per message, which doubles the rate
    in the threshold exponent.
    """
    rate_scale = 1.0 if config.duplex is DuplexMode.FULL_DUPLEX else 2.0
    gamma_th1 = 2.0 ** (rate_scale * config.rate_d1) - 1.0
    gamma_th2 = 2.0 ** (rate_scale * config.rate_d2) - 1.0

    rho = config.rho
    xi = gamma_th1 / (rho * config.a1)
    margin = config.a2 - config.a1 * gamma_th2
    feasible = margin > 0.0
    tau = gamma_th2 / (rho * margin) if feasible else math.inf
    return DerivedThresholds(
        gamma_th1=gamma_th1,
        gamma_th2=gamma_th2,
        tau=tau,
        xi=xi,
        theta=max(tau, xi),
        feasible=feasible,
    )
