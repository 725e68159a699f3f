#!/usr/bin/env python3
"""Throughput comparison of the compiled and numpy trial-counting kernels.

Both engines consume identical pre-drawn channel arrays, so their outage
counts must match exactly; the speedup comes from fusing the per-trial
SINR/selection/outage pass into one C loop.
"""

import argparse
import time

from noma_relay import DuplexMode, Scheme, SystemConfig, estimate_outage
from noma_relay._engine import HAVE_COMPILED


def run(engine: str, scheme: Scheme, cfg: SystemConfig, trials: int, seed: int):
    start = time.perf_counter()
    est = estimate_outage(scheme, cfg, trials, seed, engine=engine)
    return est, time.perf_counter() - start


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2_000_000)
    parser.add_argument("--snr-db", type=float, default=30.0)
    parser.add_argument("--relays", type=int, default=3)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    cfg = SystemConfig(
        snr_db=args.snr_db,
        num_relays=args.relays,
        omega_li_db=-10.0,
        duplex=DuplexMode.FULL_DUPLEX,
    )
    print(
        f"{args.trials:,} trials per scheme, K={args.relays}, "
        f"{args.snr_db} dB, full-duplex"
    )
    if not HAVE_COMPILED:
        print("compiled kernels not available; timing the numpy path only")
    print(f"{'scheme':<8} {'numpy':>12} {'compiled':>12} {'speedup':>8}")

    for scheme in (Scheme.SRS, Scheme.TRS, Scheme.RRS_TRS, Scheme.OMA):
        py, t_py = run("python", scheme, cfg, args.trials, args.seed)
        rate_py = args.trials / t_py
        if HAVE_COMPILED:
            cy, t_cy = run("compiled", scheme, cfg, args.trials, args.seed)
            if cy.p_hat != py.p_hat:
                raise SystemExit(
                    f"engine mismatch for {scheme.value}: "
                    f"{cy.p_hat} != {py.p_hat}"
                )
            rate_cy = args.trials / t_cy
            print(
                f"{scheme.value:<8} {rate_py:>10.2e}/s {rate_cy:>10.2e}/s "
                f"{t_py / t_cy:>7.2f}x"
            )
        else:
            print(f"{scheme.value:<8} {rate_py:>10.2e}/s {'-':>12} {'-':>8}")

    if HAVE_COMPILED:
        print("outage counts identical across engines")


if __name__ == "__main__":
    main()
