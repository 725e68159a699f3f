"""Reference trial-counting kernels (vectorized numpy).

Semantics contract shared with the compiled extension: given pre-drawn
channel gains (already divided by their path-loss attenuations), count the
trials in outage for one scheme. Expression order matches the compiled
kernels so both engines produce identical counts from identical inputs.

Scheme codes: 0=SRS, 1=TRS, 2=RRS over SRS, 3=RRS over TRS, 4=OMA.
``pick`` is consulted only by the RRS codes; ``gamma1``/``gamma2`` are the
nearby/distant NOMA thresholds, or the two four-slot thresholds for OMA.
"""

from __future__ import annotations

import numpy as np

SCHEME_SRS = 0
SCHEME_TRS = 1
SCHEME_RRS_SRS = 2
SCHEME_RRS_TRS = 3
SCHEME_OMA = 4


def count_outage_trials(
    scheme: int,
    x: np.ndarray,
    y1: np.ndarray,
    y2: np.ndarray,
    gli: np.ndarray,
    pick: np.ndarray,
    rho: float,
    a1: float,
    a2: float,
    varpi: float,
    gamma1: float,
    gamma2: float,
) -> int:
    if scheme == SCHEME_OMA:
        rx = rho * x
        m = np.minimum(
            np.minimum(rx, rho * y1) / gamma1,
            np.minimum(rx, rho * y2) / gamma2,
        )
        return int(np.count_nonzero(m.max(axis=1) < 1.0))

    rv = rho * varpi
    srel2 = rho * x * a2 / (rho * x * a1 + rv * gli + 1.0)
    sd12 = rho * y1 * a2 / (rho * y1 * a1 + 1.0)
    sd22 = rho * y2 * a2 / (rho * y2 * a1 + 1.0)
    wmin = np.minimum(np.minimum(srel2, sd12), sd22)

    if scheme == SCHEME_SRS:
        return int(np.count_nonzero(wmin.max(axis=1) < gamma2))
    if scheme == SCHEME_RRS_SRS:
        rows = np.arange(x.shape[0])
        return int(np.count_nonzero(wmin[rows, pick] < gamma2))

    srel1 = rho * x * a1 / (rv * gli + 1.0)
    sd11 = rho * y1 * a1
    admitted = (srel2 >= gamma2) & (sd12 >= gamma2) & (sd22 >= gamma2)
    s = np.minimum(srel1, sd11)

    if scheme == SCHEME_TRS:
        # Sentinel -1 marks "no admitted relay"; always below gamma1 > 0.
        best = np.where(admitted, s, -1.0).max(axis=1)
        return int(np.count_nonzero(best < gamma1))
    if scheme == SCHEME_RRS_TRS:
        rows = np.arange(x.shape[0])
        ok = admitted[rows, pick] & (s[rows, pick] >= gamma1)
        return int(np.count_nonzero(~ok))

    raise ValueError(f"unknown scheme code {scheme}")
