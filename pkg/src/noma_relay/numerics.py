"""Quadrature and special functions backing the closed-form outage chain.

The disc-averaged channel CDF is approximated with a Chebyshev-node
quadrature whose node constants fold in the bounded path-loss law; the same
table is reused by every closed-form expression. The exponential integral is
implemented only on the branch the outage chain needs (negative arguments),
plus a fused exp-scaled variant that stays finite where the bare product
e^y * Ei(-y) would overflow pairwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

EULER_GAMMA = 0.57721566490153286061

# Series <-> continued-fraction handover for Ei; both branches agree to
# better than 1e-12 on [8, 12].
_EI_SWITCH = 10.0
_EI_MAX_TERMS = 400
_CF_MAX_ITER = 200
_CF_EPS = 1e-16
_CF_FPMIN = 1e-300


@dataclass(frozen=True)
class QuadratureTable:
    """Chebyshev nodes for averaging over relay positions on the disc.

    ``weight_factor[n] = sqrt(1 - phi[n]^2) * (phi[n] + 1)`` and
    ``c[n] = 1 + ((R/2) * (phi[n] + 1))**alpha``; ``prefactor * weight_factor``
    sums to 1 in the large-order limit (it is a quadrature of the uniform-disc
    radial measure).
    """

    phi: np.ndarray
    weight_factor: np.ndarray
    c: np.ndarray
    prefactor: float
    order: int

    @property
    def weights(self) -> np.ndarray:
        """Combined weights prefactor * weight_factor."""
        return self.prefactor * self.weight_factor

    @property
    def nodes(self) -> list[tuple[float, float, float]]:
        """Per-node (phi, weight_factor, c) tuples."""
        return list(zip(self.phi, self.weight_factor, self.c))


def build_quadrature(order: int, disc_radius: float, alpha: float) -> QuadratureTable:
    """Build the node table for a disc of the given radius and path-loss law."""
    if order < 1:
        raise ValueError(f"order must be >= 1, got {order}")
    if disc_radius <= 0.0:
        raise ValueError(f"disc_radius must be positive, got {disc_radius}")
    n = np.arange(1, order + 1)
    phi = np.cos((2.0 * n - 1.0) / (2.0 * order) * np.pi)
    weight_factor = np.sqrt(1.0 - phi**2) * (phi + 1.0)
    c = 1.0 + (0.5 * disc_radius * (phi + 1.0)) ** alpha
    return QuadratureTable(
        phi=phi,
        weight_factor=weight_factor,
        c=c,
        prefactor=np.pi / (2.0 * order),
        order=order,
    )


def disc_cdf_exact(x: float, disc_radius: float, alpha: float) -> float:
    """Disc-averaged CDF of the bounded-path-loss channel gain, by adaptive
    quadrature (absolute tolerance 1e-10)."""
    if x < 0.0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0

    def integrand(r: float) -> float:
        return (1.0 - math.exp(-(1.0 + r**alpha) * x)) * r

    value, _ = integrate.quad(
        integrand, 0.0, disc_radius, epsabs=1e-10, epsrel=1e-12, limit=200
    )
    return 2.0 / disc_radius**2 * value


def disc_cdf_closed_alpha2(x: float, disc_radius: float) -> float:
    """Closed antiderivative of the disc CDF for path-loss exponent 2.

    Cross-check for :func:`disc_cdf_exact`; valid only for alpha = 2.
    """
    if x < 0.0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    xr2 = x * disc_radius**2
    return 1.0 - math.exp(-x) * (-math.expm1(-xr2)) / xr2


def disc_cdf_chebyshev(x: float, table: QuadratureTable) -> float:
    """Chebyshev-quadrature approximation of the disc-averaged channel CDF.

    The node weights are renormalized by their finite-order sum so the
    approximant saturates at exactly 1; this halves the low-order bias (the
    raw weights sum to 1 only in the large-order limit).
    """
    if x < 0.0:
        raise ValueError(f"x must be nonnegative, got {x}")
    w = table.weights
    return float(np.sum(w * (1.0 - np.exp(-table.c * x))) / np.sum(w))


def _ei_series_neg(x: float) -> float:
    # Convergent series around 0; x in [-_EI_SWITCH, 0).
    total = EULER_GAMMA + math.log(-x)
    term = 1.0
    for k in range(1, _EI_MAX_TERMS + 1):
        term *= x / k
        increment = term / k
        total += increment
        if abs(increment) < 1e-18 * max(1.0, abs(total)):
            break
    return total

def _e1_cf(t: float) -> float:
    # Continued fraction for the scaled integral e^t * E1(t); t > 0, best
    # for t above ~1 (modified Lentz).
    b = t + 1.0
    c = 1.0 / _CF_FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _CF_MAX_ITER + 1):
        a = -float(i * i)
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            break
    return h


def exp_integral_ei(x: float) -> float:
    """Exponential integral Ei(x) for strictly negative x."""
    if x >= 0.0:
        raise ValueError(f"exp_integral_ei is only defined for x < 0, got {x}")
    t = -x
    if t <= _EI_SWITCH:
        return _ei_series_neg(x)
    return -math.exp(-t) * _e1_cf(t)


def scaled_exp_ei(y: float) -> float:
    """Fused product e^y * Ei(-y) for y > 0.

    Finite over the whole range where the bare factors would overflow or
    underflow pairwise (y up to ~1e308); tends to 0 like -1/y for large y.
    """
    if y <= 0.0:
        raise ValueError(f"scaled_exp_ei requires y > 0, got {y}")
    if y <= _EI_SWITCH:
        return math.exp(y) * _ei_series_neg(-y)
    return -_e1_cf(y)
