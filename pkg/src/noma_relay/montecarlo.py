"""Trial-level simulator: spatial layouts, Rayleigh gains, SINRs, selection
rules and outage estimation with binomial standard errors.

Trials are partitioned into fixed-size chunks; each chunk draws from an
independent counter-based substream keyed by (seed, chunk index), so the
estimate is reproducible for a fixed chunk size and independent of execution
order. The distant user and nearby user sit on a common reference ray from
the base station; a relay's polar angle is measured against that ray, which
is what makes one angle serve both users' exact distances.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._engine import get_kernel
from ._kernels_py import (
    SCHEME_OMA,
    SCHEME_RRS_SRS,
    SCHEME_RRS_TRS,
    SCHEME_SRS,
    SCHEME_TRS,
)
from .config import (
    DerivedThresholds,
    DuplexMode,
    Scheme,
    SystemConfig,
    compute_thresholds,
)

DEFAULT_CHUNK_SIZE = 65536

_SCHEME_CODE = {
    Scheme.SRS: SCHEME_SRS,
    Scheme.TRS: SCHEME_TRS,
    Scheme.RRS_SRS: SCHEME_RRS_SRS,
    Scheme.RRS_TRS: SCHEME_RRS_TRS,
    Scheme.OMA: SCHEME_OMA,
}

_MASK64 = (1 << 64) - 1


class DistanceMode(enum.Enum):
    """Relay-to-user distance handling.

    Approximate replaces every relay->user distance by the BS->user distance
    (the regime the closed forms assume, valid while users sit far outside
    the relay disc); Exact applies the law of cosines to the sampled polar
    position.
    """

    EXACT = "exact"
    APPROXIMATE = "approximate"


@dataclass(frozen=True)
class NetworkRealization:
    """One random network draw: polar relay positions, the effective
    relay->user distances, and all channel power gains."""

    r: np.ndarray
    theta: np.ndarray
    d_rd1: np.ndarray
    d_rd2: np.ndarray
    g_sr: np.ndarray
    g_rd1: np.ndarray
    g_rd2: np.ndarray
    g_li: np.ndarray


@dataclass(frozen=True)
class SinrSet:
    """Per-relay SINRs of the five decoding points, linear scale."""

    s_relay_x2: np.ndarray
    s_relay_x1: np.ndarray
    s_d1_x2: np.ndarray
    s_d1_x1: np.ndarray
    s_d2_x2: np.ndarray


@dataclass(frozen=True)
class OutageEstimate:
    """Monte Carlo outage probability with its binomial standard error."""

    p_hat: float
    stderr: float
    trials: int
    scheme: Scheme
    duplex: DuplexMode
    snr_db: float


def chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    """Independent deterministic substream for one trial chunk."""
    key = np.array([seed & _MASK64, chunk_index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _exact_distance(r: np.ndarray, theta: np.ndarray, d_user: float) -> np.ndarray:
    return np.sqrt(r**2 + d_user**2 - 2.0 * r * d_user * np.cos(theta))


def sample_realization(
    rng: np.random.Generator,
    config: SystemConfig,
    distance_mode: DistanceMode = DistanceMode.APPROXIMATE,
) -> NetworkRealization:
    """Draw one i.i.d. network realization for all K relays."""
    k = config.num_relays
    r = config.disc_radius * np.sqrt(rng.random(k))
    theta = rng.random(k) * (2.0 * np.pi)
    g_sr = rng.standard_exponential(k)
    g_rd1 = rng.standard_exponential(k)
    g_rd2 = rng.standard_exponential(k)
    g_li = rng.standard_exponential(k) * config.omega_li
    if distance_mode is DistanceMode.EXACT:
        d_rd1 = _exact_distance(r, theta, config.d1)
        d_rd2 = _exact_distance(r, theta, config.d2)
    else:
        d_rd1 = np.full(k, config.d1)
        d_rd2 = np.full(k, config.d2)
    return NetworkRealization(
        r=r, theta=theta, d_rd1=d_rd1, d_rd2=d_rd2,
        g_sr=g_sr, g_rd1=g_rd1, g_rd2=g_rd2, g_li=g_li,
    )


def compute_sinrs(real: NetworkRealization, config: SystemConfig) -> SinrSet:
    """All decoding-point SINRs of one realization."""
    rho = config.rho
    a1, a2 = config.a1, config.a2
    varpi = config.duplex.switching_factor
    x = real.g_sr / (1.0 + real.r**config.alpha)
    y1 = real.g_rd1 / (1.0 + real.d_rd1**config.alpha)
    y2 = real.g_rd2 / (1.0 + real.d_rd2**config.alpha)
    rv = rho * varpi
    return SinrSet(
        s_relay_x2=rho * x * a2 / (rho * x * a1 + rv * real.g_li + 1.0),
        s_relay_x1=rho * x * a1 / (rv * real.g_li + 1.0),
        s_d1_x2=rho * y1 * a2 / (rho * y1 * a1 + 1.0),
        s_d1_x1=rho * y1 * a1,
        s_d2_x2=rho * y2 * a2 / (rho * y2 * a1 + 1.0),
    )


def select_srs(sinrs: SinrSet) -> int:
    """Relay maximizing the distant user's worst decoding point (first index
    on ties)."""
    wmin = np.minimum(
        np.minimum(sinrs.s_relay_x2, sinrs.s_d1_x2), sinrs.s_d2_x2
    )
    return int(np.argmax(wmin))


def select_trs(sinrs: SinrSet, thresholds: DerivedThresholds) -> int | None:
    """Two-stage selection: admit relays meeting the distant user's threshold
    everywhere, then maximize the nearby user's worst decoding point.

    Returns None when no relay survives the first stage.
    """
    g2 = thresholds.gamma_th2
    admitted = (
        (sinrs.s_relay_x2 >= g2)
        & (sinrs.s_d1_x2 >= g2)
        & (sinrs.s_d2_x2 >= g2)
    )
    if not admitted.any():
        return None
    s = np.minimum(sinrs.s_relay_x1, sinrs.s_d1_x1)
    return int(np.argmax(np.where(admitted, s, -np.inf)))


def oma_thresholds(config: SystemConfig) -> tuple[float, float]:
    """Per-user SNR thresholds of the four-slot orthogonal baseline."""
    return (
        2.0 ** (4.0 * config.rate_d1) - 1.0,
        2.0 ** (4.0 * config.rate_d2) - 1.0,
    )


def _oma_outage(real: NetworkRealization, config: SystemConfig) -> bool:
    # Interference-free hops at full power; the relay maximizing the worst
    # per-user margin is activated, outage when any decode step fails.
    g1, g2 = oma_thresholds(config)
    rho = config.rho
    rx = rho * real.g_sr / (1.0 + real.r**config.alpha)
    ry1 = rho * real.g_rd1 / (1.0 + real.d_rd1**config.alpha)
    ry2 = rho * real.g_rd2 / (1.0 + real.d_rd2**config.alpha)
    margin = np.minimum(np.minimum(rx, ry1) / g1, np.minimum(rx, ry2) / g2)
    return bool(margin.max() < 1.0)


def trial_outage(
    scheme: Scheme,
    real: NetworkRealization,
    config: SystemConfig,
    thresholds: DerivedThresholds,
    rng: np.random.Generator | None = None,
) -> bool:
    """Outage indicator of one trial under the given selection scheme.

    RRS schemes draw their uniformly random relay from ``rng``.
    """
    if scheme is Scheme.OMA:
        return _oma_outage(real, config)
    sinrs = compute_sinrs(real, config)
    g1, g2 = thresholds.gamma_th1, thresholds.gamma_th2

    if scheme is Scheme.SRS:
        i = select_srs(sinrs)
        wmin = min(sinrs.s_relay_x2[i], sinrs.s_d1_x2[i], sinrs.s_d2_x2[i])
        return wmin < g2

    if scheme is Scheme.TRS:
        sel = select_trs(sinrs, thresholds)
        if sel is None:
            return True
        return min(sinrs.s_relay_x1[sel], sinrs.s_d1_x1[sel]) < g1

    if rng is None:
        raise ValueError("random relay selection needs an rng")
    j = int(rng.integers(config.num_relays))
    if scheme is Scheme.RRS_SRS:
        return min(sinrs.s_relay_x2[j], sinrs.s_d1_x2[j], sinrs.s_d2_x2[j]) < g2
    if scheme is Scheme.RRS_TRS:
        admitted = (
            sinrs.s_relay_x2[j] >= g2
            and sinrs.s_d1_x2[j] >= g2
            and sinrs.s_d2_x2[j] >= g2
        )
        return not admitted or min(sinrs.s_relay_x1[j], sinrs.s_d1_x1[j]) < g1
    raise ValueError(f"unknown scheme {scheme}")


def _draw_chunk_arrays(
    rng: np.random.Generator,
    config: SystemConfig,
    n: int,
    distance_mode: DistanceMode,
    need_pick: bool,
) -> tuple[np.ndarray, ...]:
    k = config.num_relays
    r = config.disc_radius * np.sqrt(rng.random((n, k)))
    theta = rng.random((n, k)) * (2.0 * np.pi)
    g_sr = rng.standard_exponential((n, k))
    g_rd1 = rng.standard_exponential((n, k))
    g_rd2 = rng.standard_exponential((n, k))
    gli = rng.standard_exponential((n, k)) * config.omega_li
    x = g_sr / (1.0 + r**config.alpha)
    if distance_mode is DistanceMode.EXACT:
        d1 = _exact_distance(r, theta, config.d1)
        d2 = _exact_distance(r, theta, config.d2)
        y1 = g_rd1 / (1.0 + d1**config.alpha)
        y2 = g_rd2 / (1.0 + d2**config.alpha)
    else:
        y1 = g_rd1 / (1.0 + config.d1**config.alpha)
        y2 = g_rd2 / (1.0 + config.d2**config.alpha)
    if need_pick:
        pick = rng.integers(0, k, size=n, dtype=np.int64)
    else:
        pick = np.zeros(0, dtype=np.int64)
    return x, y1, y2, gli, pick


def estimate_outage(
    scheme: Scheme,
    config: SystemConfig,
    trials: int,
    seed: int,
    distance_mode: DistanceMode = DistanceMode.APPROXIMATE,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    engine: str | None = None,
) -> OutageEstimate:
    """Estimate the outage probability over i.i.d. trials.

    Deterministic given (seed, trials, chunk_size); the backend is selected
    through ``engine`` ('auto', 'compiled', 'python').
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be >= 1, got {chunk_size}")
    kernel = get_kernel(engine)
    th = compute_thresholds(config)
    if scheme is Scheme.OMA:
        gamma1, gamma2 = oma_thresholds(config)
    else:
        gamma1, gamma2 = th.gamma_th1, th.gamma_th2
    code = _SCHEME_CODE[scheme]
    need_pick = scheme in (Scheme.RRS_SRS, Scheme.RRS_TRS)
    varpi = config.duplex.switching_factor

    count = 0
    done = 0
    chunk_index = 0
    while done < trials:
        n = min(chunk_size, trials - done)
        rng = chunk_rng(seed, chunk_index)
        x, y1, y2, gli, pick = _draw_chunk_arrays(
            rng, config, n, distance_mode, need_pick
        )
        count += kernel.count_outage_trials(
            code, x, y1, y2, gli, pick,
            config.rho, config.a1, config.a2, varpi, gamma1, gamma2,
        )
        done += n
        chunk_index += 1

    p_hat = count / trials
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return OutageEstimate(
        p_hat=p_hat,
        stderr=stderr,
        trials=trials,
        scheme=scheme,
        duplex=config.duplex,
        snr_db=config.snr_db,
    )
