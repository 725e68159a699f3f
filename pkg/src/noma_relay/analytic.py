"""Closed-form outage probabilities, high-SNR asymptotes and throughput.

Every expression reduces to weighted sums over the disc quadrature table;
all node-dependent factors are evaluated inside the weighted sum, one sum
per probability term. Final probabilities are clamped to [0, 1]; the
quadrature can produce excursions of a few ULP at extreme SNR, anything
beyond 1e-9 is flagged with a warning.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .config import (
    DerivedThresholds,
    DuplexMode,
    Scheme,
    SystemConfig,
    compute_thresholds,
)
from .numerics import QuadratureTable, build_quadrature, scaled_exp_ei

_CLAMP_FLAG_TOL = 1e-9

_scaled_exp_ei = np.vectorize(scaled_exp_ei, otypes=[float])


@dataclass(frozen=True)
class AnalyticPoint:
    """Exact and asymptotic outage of one scheme at one SNR point."""

    p_exact: float
    p_asymptotic: float
    scheme: Scheme
    duplex: DuplexMode
    snr_db: float


@dataclass(frozen=True)
class Theta1Breakdown:
    """Second-stage conditional failure probability and its three summands.

    ``theta1 = (m1 + m2 + m3) / xi2`` where ``xi2`` is the per-relay
    first-stage joint success probability restricted to the links the second
    stage depends on.
    """

    m1: float
    m2: float
    m3: float
    xi2: float
    theta1: float


def _clamp01(p: float, context: str, flag: bool = True) -> float:
    if p < 0.0:
        if flag and p < -_CLAMP_FLAG_TOL:
            warnings.warn(
                f"{context}: clamped probability excursion {p!r} below 0",
                RuntimeWarning,
                stacklevel=3,
            )
        return 0.0
    if p > 1.0:
        if flag and p > 1.0 + _CLAMP_FLAG_TOL:
            warnings.warn(
                f"{context}: clamped probability excursion {p!r} above 1",
                RuntimeWarning,
                stacklevel=3,
            )
        return 1.0
    return p


@lru_cache(maxsize=64)
def _table(order: int, disc_radius: float, alpha: float) -> QuadratureTable:
    return build_quadrature(order, disc_radius, alpha)


def _config_table(config: SystemConfig) -> QuadratureTable:
    return _table(config.quad_order, config.disc_radius, config.alpha)


def _user_attenuations(config: SystemConfig) -> tuple[float, float]:
    return 1.0 + config.d1**config.alpha, 1.0 + config.d2**config.alpha


def _stage1_success(config: SystemConfig, th: DerivedThresholds) -> float:
    """Per-relay probability that all three decoding points meet the distant
    user's threshold."""
    table = _config_table(config)
    w, c = table.weights, table.c
    varpi = config.duplex.switching_factor
    tau = th.tau
    chi = 1.0 / (1.0 + config.rho * varpi * tau * c * config.omega_li)
    relay_ok = 1.0 - float(np.sum(w * (1.0 - chi * np.exp(-c * tau))))
    a1_att, a2_att = _user_attenuations(config)
    return _clamp01(
        relay_ok * math.exp(-(a1_att + a2_att) * tau), "stage-1 success"
    )


def srs_outage(config: SystemConfig) -> float:
    """Outage probability of single-stage selection (max-min over the distant
    user's three decoding points)."""
    th = compute_thresholds(config)
    if not th.feasible:
        return 1.0
    per_relay_fail = 1.0 - _stage1_success(config, th)
    return _clamp01(per_relay_fail**config.num_relays, "SRS outage")


def theta1_conditional(config: SystemConfig) -> Theta1Breakdown:
    """Conditional probability that a first-stage survivor fails the nearby
    user's rate, with the three accumulated terms exposed for introspection.

    Requires a feasible power split. The full-duplex path couples the relay
    link to the loop-interference draw and needs the scaled exponential
    integral; half-duplex reduces to closed exponential differences.
    """
    th = compute_thresholds(config)
    if not th.feasible:
        raise ValueError("theta1_conditional requires a feasible power split")
    table = _config_table(config)
    w, c = table.weights, table.c
    a_d1 = 1.0 + config.d1**config.alpha
    tau, xi, theta = th.tau, th.xi, th.theta
    rho, omega = config.rho, config.omega_li

    if config.duplex is DuplexMode.FULL_DUPLEX:
        chi = 1.0 / (1.0 + rho * tau * c * omega)
        xi2 = math.exp(-a_d1 * tau) * (
            1.0 - float(np.sum(w * (1.0 - chi * np.exp(-c * tau))))
        )
        if xi <= tau:
            # First stage already guarantees the nearby user's rate: the
            # integration windows are empty.
            return Theta1Breakdown(0.0, 0.0, 0.0, xi2, 0.0)
        psi = 1.0 / (1.0 + rho * xi * c * omega)
        zeta = (c + a_d1) / (rho * c)
        t_fac = a_d1 * np.exp(-(c + a_d1) * xi) / (rho * c * omega)
        phi_fac = a_d1 * np.exp(-(c + a_d1) * tau) / (rho * c * omega)
        ei_psi = _scaled_exp_ei(zeta / (omega * psi))
        ei_chi = _scaled_exp_ei(zeta / (omega * chi))
        exp_tau = math.exp(-a_d1 * tau)
        exp_xi = math.exp(-a_d1 * xi)
        m1 = math.exp(-a_d1 * theta) * float(
            np.sum(w * (chi * np.exp(-c * tau) - psi * np.exp(-c * xi)))
        )
        m2 = float(
            np.sum(
                w
                * (
                    (exp_tau - exp_xi) * chi * np.exp(-c * tau)
                    - t_fac * ei_psi
                    + phi_fac * ei_chi
                )
            )
        )
        m3 = (exp_tau - exp_xi) - float(
            np.sum(w * ((exp_tau - exp_xi) - t_fac * ei_psi + phi_fac * ei_chi))
        )
    else:
        xi2 = math.exp(-a_d1 * tau) * (
            1.0 - float(np.sum(w * (1.0 - np.exp(-c * tau))))
        )
        if xi <= tau:
            return Theta1Breakdown(0.0, 0.0, 0.0, xi2, 0.0)
        exp_tau = math.exp(-a_d1 * tau)
        exp_xi = math.exp(-a_d1 * xi)
        closed = (
            a_d1
            / (a_d1 + c)
            * (np.exp(-(a_d1 + c) * tau) - np.exp(-(a_d1 + c) * xi))
        )
        m1 = math.exp(-a_d1 * theta) * float(
            np.sum(w * (np.exp(-c * tau) - np.exp(-c * xi)))
        )
        m2 = float(
            np.sum(w * ((exp_tau - exp_xi) * np.exp(-c * tau) - closed))
        )
        m3 = (exp_tau - exp_xi) - float(
            np.sum(w * ((exp_tau - exp_xi) - closed))
        )

    theta1 = _clamp01((m1 + m2 + m3) / xi2, "second-stage conditional failure")
    return Theta1Breakdown(m1=m1, m2=m2, m3=m3, xi2=xi2, theta1=theta1)


def trs_outage(config: SystemConfig) -> float:
    """Outage probability of two-stage selection: no relay survives the first
    stage, or the survivor chosen for the nearby user misses its rate."""
    th = compute_thresholds(config)
    if not th.feasible:
        return 1.0
    q = _stage1_success(config, th)
    theta1 = theta1_conditional(config).theta1
    k_total = config.num_relays
    p = sum(
        math.comb(k_total, k) * (theta1 * q) ** k * (1.0 - q) ** (k_total - k)
        for k in range(k_total + 1)
    )
    return _clamp01(p, "TRS outage")


def rrs_outage(config: SystemConfig, base: Scheme) -> float:
    """Random selection benchmark: the base scheme evaluated with one relay,
    independent of the configured relay count."""
    single = replace(config, num_relays=1)
    if base is Scheme.SRS:
        return srs_outage(single)
    if base is Scheme.TRS:
        return trs_outage(single)
    raise ValueError(f"random-selection base must be SRS or TRS, got {base}")


def asymptotic_outage(config: SystemConfig, scheme: Scheme) -> float:
    """High-SNR outage approximation for the given scheme.

    Full-duplex expressions keep their rho dependence (they approach a loop
    interference floor); half-duplex expressions are the linearized forms
    whose slope gives the diversity order.
    """
    th = compute_thresholds(config)
    if not th.feasible:
        return 1.0
    if scheme is Scheme.RRS_SRS:
        return asymptotic_outage(replace(config, num_relays=1), Scheme.SRS)
    if scheme is Scheme.RRS_TRS:
        return asymptotic_outage(replace(config, num_relays=1), Scheme.TRS)

    table = _config_table(config)
    w, c = table.weights, table.c
    a1_att, a2_att = _user_attenuations(config)
    rho, omega = config.rho, config.omega_li
    k_total = config.num_relays
    tau, xi = th.tau, th.xi

    if scheme is Scheme.SRS:
        if config.duplex is DuplexMode.FULL_DUPLEX:
            floor = float(
                np.sum(w * (rho * tau * c * omega / (1.0 + rho * tau * c * omega)))
            )
            return _clamp01(floor**k_total, "FD SRS asymptote", flag=False)
        per_relay = 1.0 - (1.0 - float(np.sum(w * tau * c))) * (
            1.0 - (a1_att + a2_att) * tau
        )
        return _clamp01(per_relay**k_total, "HD SRS asymptote", flag=False)

    if scheme is Scheme.TRS:
        if config.duplex is DuplexMode.FULL_DUPLEX:
            chi = 1.0 / (1.0 + rho * tau * c * omega)
            psi = 1.0 / (1.0 + rho * xi * c * omega)
            fail1 = float(np.sum(w * (1.0 - chi)))
            bracket = float(np.sum(w * (chi - psi))) / (1.0 - fail1)
        else:
            fail1 = float(np.sum(w * c * tau))
            bracket = (
                max(xi - tau, 0.0) * (a1_att + float(np.sum(w * c)))
            ) / (1.0 - fail1)
        p = sum(
            math.comb(k_total, k)
            * bracket**k
            * fail1 ** (k_total - k)
            * (1.0 - fail1) ** k
            for k in range(k_total + 1)
        )
        return _clamp01(p, "TRS asymptote", flag=False)

    raise ValueError(f"no asymptotic expression for scheme {scheme}")


def exact_outage(config: SystemConfig, scheme: Scheme) -> float:
    """Closed-form outage of any selection scheme (OMA has none)."""
    if scheme is Scheme.SRS:
        return srs_outage(config)
    if scheme is Scheme.TRS:
        return trs_outage(config)
    if scheme is Scheme.RRS_SRS:
        return rrs_outage(config, Scheme.SRS)
    if scheme is Scheme.RRS_TRS:
        return rrs_outage(config, Scheme.TRS)
    raise ValueError(f"no closed-form outage for scheme {scheme}")


def analytic_point(config: SystemConfig, scheme: Scheme) -> AnalyticPoint:
    """Bundle exact and asymptotic outage for one (config, scheme) cell."""
    return AnalyticPoint(
        p_exact=exact_outage(config, scheme),
        p_asymptotic=asymptotic_outage(config, scheme),
        scheme=scheme,
        duplex=config.duplex,
        snr_db=config.snr_db,
    )


def diversity_order_estimate(
    config: SystemConfig,
    scheme: Scheme,
    snr_window_db: tuple[float, float],
    curve: str = "asymptotic",
) -> float:
    """Finite-difference slope -dlog10(P)/dlog10(rho) across the SNR window.

    The diversity order is defined on the high-SNR asymptote, so that is the
    default curve; ``curve="exact"`` differentiates the exact closed form
    instead, which only reaches the same slope once the window lies in the
    asymptotic regime.
    """
    lo_db, hi_db = snr_window_db
    if not hi_db > lo_db:
        raise ValueError(f"window must be increasing, got {snr_window_db}")
    if curve == "asymptotic":
        outage = asymptotic_outage
    elif curve == "exact":
        outage = exact_outage
    else:
        raise ValueError(f"curve must be 'asymptotic' or 'exact', got {curve!r}")
    p_lo = outage(replace(config, snr_db=lo_db), scheme)
    p_hi = outage(replace(config, snr_db=hi_db), scheme)
    if p_lo <= 0.0 or p_hi <= 0.0:
        raise ValueError(
            "outage underflowed inside the SNR window; slope is unusable"
        )
    return -(math.log10(p_hi) - math.log10(p_lo)) / ((hi_db - lo_db) / 10.0)


def throughput(outage: float, rate_d1: float, rate_d2: float) -> float:
    """Delay-limited throughput in BPCU: both rates delivered unless the
    scheme is in outage."""
    if not 0.0 <= outage <= 1.0:
        raise ValueError(f"outage must be a probability, got {outage}")
    return (1.0 - outage) * (rate_d1 + rate_d2)
