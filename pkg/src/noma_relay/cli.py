"""Command-line front end: SNR/K/loop-interference sweeps across schemes,
Monte Carlo vs closed-form cross-validation, and figure presets emitted as
CSV curve data.

Config files are JSON whose top-level keys mirror ``SystemConfig`` field
names, plus an optional ``"sweep"`` object for the grid axes; command-line
flags override file values. Sweep cells run on a bounded worker pool and the
rows are written in spec order, so output is byte-identical for a fixed seed
and chunk size regardless of the thread count.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace

from .analytic import asymptotic_outage, exact_outage
from .config import (
    DuplexMode,
    Scheme,
    SystemConfig,
    compute_thresholds,
    validate_config,
)
from .montecarlo import (
    DEFAULT_CHUNK_SIZE,
    DistanceMode,
    OutageEstimate,
    estimate_outage,
)

CSV_COLUMNS = [
    "snr_db", "scheme", "duplex", "k", "omega_li_db", "distance_mode",
    "p_mc", "p_mc_stderr", "p_analytic", "p_asymptotic",
    "throughput_mc", "throughput_analytic", "trials", "seed",
]

# Below this, probabilities print as 0 rather than in scientific notation.
PROB_DISPLAY_FLOOR = 1e-12

_DEFAULT_SNR_GRID = tuple(float(s) for s in range(0, 65, 5))
_VALIDATE_SNR_GRID = (0.0, 10.0, 20.0, 30.0, 40.0)
_DEFAULT_TRIALS = 1_000_000
_DEFAULT_SEED = 12345

# Posting the estimate within 0.005 of the truth needs the worst-case
# binomial stderr 0.5/sqrt(trials) below that bound.
_VALIDATE_MAX_STDERR = 0.005


class SpecError(ValueError):
    """A sweep spec or config file violates an invariant."""


@dataclass(frozen=True)
class SweepSpec:
    """One experiment: the base scenario and the grid axes swept over it."""

    base: SystemConfig
    snr_grid_db: tuple[float, ...]
    schemes: tuple[Scheme, ...]
    k_values: tuple[int, ...]
    li_values_db: tuple[float, ...]
    duplex_modes: tuple[DuplexMode, ...]
    trials: int
    seed: int
    distance_mode: DistanceMode


def validate_spec(spec: SweepSpec) -> list[str]:
    """Every violated SweepSpec invariant, naming the offending field."""
    violations = [f"base.{v}" for v in validate_config(spec.base)]
    for name in ("snr_grid_db", "schemes", "k_values", "li_values_db",
                 "duplex_modes"):
        if len(getattr(spec, name)) == 0:
            violations.append(f"{name} must not be empty")
    if spec.trials < 1:
        violations.append(f"trials must be >= 1, got {spec.trials}")
    if any(k < 1 for k in spec.k_values):
        violations.append(f"k_values must all be >= 1, got {spec.k_values}")
    return violations


@dataclass(frozen=True)
class SweepRow:
    """One evaluated sweep cell (analytic columns are None for OMA)."""

    snr_db: float
    scheme: Scheme
    duplex: DuplexMode
    k: int
    omega_li_db: float
    distance_mode: DistanceMode
    estimate: OutageEstimate
    p_analytic: float | None
    p_asymptotic: float | None
    throughput_mc: float
    throughput_analytic: float | None


def _cells(spec: SweepSpec):
    for scheme in spec.schemes:
        for duplex in spec.duplex_modes:
            for k in spec.k_values:
                for li in spec.li_values_db:
                    for snr in spec.snr_grid_db:
                        yield scheme, duplex, k, li, snr


def _cell_config(spec: SweepSpec, duplex, k, li, snr) -> SystemConfig:
    return replace(
        spec.base, duplex=duplex, num_relays=k, omega_li_db=li, snr_db=snr
    )


def _evaluate_cell(
    spec: SweepSpec,
    cell,
    chunk_size: int,
    engine: str | None,
    analytic_shift: float = 0.0,
) -> SweepRow:
    scheme, duplex, k, li, snr = cell
    config = _cell_config(spec, duplex, k, li, snr)
    est = estimate_outage(
        scheme, config, spec.trials, spec.seed, spec.distance_mode,
        chunk_size, engine,
    )
    rate_sum = config.rate_d1 + config.rate_d2
    if scheme is Scheme.OMA:
        p_an = p_asym = thr_an = None
    else:
        p_an = exact_outage(config, scheme) + analytic_shift
        p_asym = asymptotic_outage(config, scheme)
        thr_an = (1.0 - p_an) * rate_sum
    return SweepRow(
        snr_db=snr, scheme=scheme, duplex=duplex, k=k, omega_li_db=li,
        distance_mode=spec.distance_mode, estimate=est,
        p_analytic=p_an, p_asymptotic=p_asym,
        throughput_mc=(1.0 - est.p_hat) * rate_sum,
        throughput_analytic=thr_an,
    )


def compute_sweep_rows(
    spec: SweepSpec,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    engine: str | None = None,
    analytic_shift: float = 0.0,
) -> list[SweepRow]:
    """Evaluate every sweep cell, in deterministic spec order."""
    violations = validate_spec(spec)
    if violations:
        raise SpecError("; ".join(violations))
    cells = list(_cells(spec))
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(
            pool.map(
                lambda cell: _evaluate_cell(
                    spec, cell, chunk_size, engine, analytic_shift
                ),
                cells,
            )
        )
    return rows


def _fmt_prob(p: float | None) -> str:
    if p is None:
        return ""
    if p < PROB_DISPLAY_FLOOR:
        return "0"
    return f"{p:.10g}"


def _fmt_float(v: float | None) -> str:
    return "" if v is None else f"{v:.10g}"


def _row_record(row: SweepRow, spec: SweepSpec) -> list[str]:
    return [
        _fmt_float(row.snr_db),
        row.scheme.value,
        row.duplex.value,
        str(row.k),
        _fmt_float(row.omega_li_db),
        row.distance_mode.value,
        _fmt_prob(row.estimate.p_hat),
        _fmt_prob(row.estimate.stderr),
        _fmt_prob(row.p_analytic),
        _fmt_prob(row.p_asymptotic),
        _fmt_float(row.throughput_mc),
        _fmt_float(row.throughput_analytic),
        str(row.estimate.trials),
        str(spec.seed),
    ]


def run_sweep(
    spec: SweepSpec,
    output_path: str,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    engine: str | None = None,
) -> int:
    """Run the sweep and write one CSV row per cell; returns rows written."""
    rows = compute_sweep_rows(spec, threads, chunk_size, engine)
    _warn_infeasible(spec)
    with open(output_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(_row_record(row, spec))
    return len(rows)


def _warn_infeasible(spec: SweepSpec) -> None:
    for duplex in spec.duplex_modes:
        config = replace(spec.base, duplex=duplex)
        if not compute_thresholds(config).feasible:
            print(
                f"warning: power split cannot support the distant user's rate "
                f"in {duplex.value} mode; outage is 1 for all schemes",
                file=sys.stderr,
            )


@dataclass(frozen=True)
class CellValidation:
    """Monte Carlo vs closed form at one cell."""

    scheme: Scheme
    duplex: DuplexMode
    k: int
    omega_li_db: float
    snr_db: float
    p_mc: float
    stderr: float
    p_analytic: float
    abs_diff: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class ValidationReport:
    """Cross-validation outcome over a sweep grid."""

    cells: tuple[CellValidation, ...]
    max_abs_diff: dict[Scheme, float]
    passed: bool

    def format(self) -> str:
        lines = []
        for scheme, diff in self.max_abs_diff.items():
            lines.append(f"{scheme.value}: max |p_mc - p_analytic| = {diff:.6f}")
        failures = [c for c in self.cells if not c.passed]
        for c in failures:
            lines.append(
                f"FAIL {c.scheme.value} {c.duplex.value} K={c.k} "
                f"LI={c.omega_li_db} dB SNR={c.snr_db} dB: "
                f"p_mc={c.p_mc:.6f} p_analytic={c.p_analytic:.6f} "
                f"|diff|={c.abs_diff:.6f} > tol={c.tolerance:.6f}"
            )
        lines.append(
            f"validation {'PASSED' if self.passed else 'FAILED'} "
            f"({len(self.cells) - len(failures)}/{len(self.cells)} cells)"
        )
        return "\n".join(lines)


def validate(
    spec: SweepSpec,
    tolerance: float = 0.01,
    threads: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    engine: str | None = None,
    analytic_shift: float = 0.0,
) -> ValidationReport:
    """Compare Monte Carlo estimates against the closed forms on the grid.

    A cell passes when |p_mc - p_analytic| <= max(tolerance, 3 * stderr).
    ``analytic_shift`` deliberately corrupts the closed form (sensitivity
    hook for tests). Refuses trial counts whose worst-case standard error
    cannot resolve the tolerance.
    """
    if 0.5 / math.sqrt(spec.trials) >= _VALIDATE_MAX_STDERR:
        raise SpecError(
            f"trials={spec.trials} cannot reach the required precision: "
            f"worst-case stderr 0.5/sqrt(trials) must be below "
            f"{_VALIDATE_MAX_STDERR}"
        )
    spec = replace(
        spec,
        schemes=tuple(s for s in spec.schemes if s is not Scheme.OMA),
    )
    rows = compute_sweep_rows(
        spec, threads, chunk_size, engine, analytic_shift
    )
    cells = []
    max_diff: dict[Scheme, float] = {}
    for row in rows:
        diff = abs(row.estimate.p_hat - row.p_analytic)
        tol = max(tolerance, 3.0 * row.estimate.stderr)
        cells.append(
            CellValidation(
                scheme=row.scheme, duplex=row.duplex, k=row.k,
                omega_li_db=row.omega_li_db, snr_db=row.snr_db,
                p_mc=row.estimate.p_hat, stderr=row.estimate.stderr,
                p_analytic=row.p_analytic, abs_diff=diff, tolerance=tol,
                passed=diff <= tol,
            )
        )
        max_diff[row.scheme] = max(max_diff.get(row.scheme, 0.0), diff)
    return ValidationReport(
        cells=tuple(cells),
        max_abs_diff=max_diff,
        passed=all(c.passed for c in cells),
    )


def _preset(
    schemes: tuple[Scheme, ...],
    k_values: tuple[int, ...],
    li_values_db: tuple[float, ...],
) -> SweepSpec:
    return SweepSpec(
        base=SystemConfig(),
        snr_grid_db=_DEFAULT_SNR_GRID,
        schemes=schemes,
        k_values=k_values,
        li_values_db=li_values_db,
        duplex_modes=(DuplexMode.FULL_DUPLEX, DuplexMode.HALF_DUPLEX),
        trials=_DEFAULT_TRIALS,
        seed=_DEFAULT_SEED,
        distance_mode=DistanceMode.APPROXIMATE,
    )


# Captions that vary the target rates (fig3/fig8) keep the default rate
# pair here: the sweep axes carry no rate grid, rate studies go through
# config overrides.
_FIGURE_PRESETS = {
    "fig2": lambda: _preset((Scheme.SRS, Scheme.RRS_SRS, Scheme.OMA), (2,), (-10.0,)),
    "fig3": lambda: _preset((Scheme.SRS,), (2,), (-10.0,)),
    "fig4": lambda: _preset((Scheme.SRS,), (2, 3, 4), (-10.0,)),
    "fig5": lambda: _preset((Scheme.SRS,), (3,), (-10.0, -5.0, 0.0, 5.0)),
    "fig6": lambda: _preset((Scheme.SRS, Scheme.OMA), (2, 3, 4), (-10.0,)),
    "fig7": lambda: _preset((Scheme.TRS, Scheme.RRS_TRS, Scheme.OMA), (3,), (-20.0,)),
    "fig8": lambda: _preset((Scheme.TRS,), (3,), (-20.0,)),
    "fig9": lambda: _preset((Scheme.TRS,), (3,), (-20.0, -10.0)),
    "fig10": lambda: _preset((Scheme.TRS, Scheme.OMA), (2, 3, 4), (-20.0, -10.0)),
}


def figure_preset(name: str) -> SweepSpec:
    """Sweep spec reproducing one of the reference result figures."""
    try:
        return _FIGURE_PRESETS[name]()
    except KeyError:
        valid = ", ".join(sorted(_FIGURE_PRESETS, key=lambda n: int(n[3:])))
        raise SpecError(f"unknown figure preset {name!r}; valid: {valid}") from None


_DUPLEX_ALIASES = {
    "fd": DuplexMode.FULL_DUPLEX,
    "fullduplex": DuplexMode.FULL_DUPLEX,
    "full-duplex": DuplexMode.FULL_DUPLEX,
    "full_duplex": DuplexMode.FULL_DUPLEX,
    "hd": DuplexMode.HALF_DUPLEX,
    "halfduplex": DuplexMode.HALF_DUPLEX,
    "half-duplex": DuplexMode.HALF_DUPLEX,
    "half_duplex": DuplexMode.HALF_DUPLEX,
}

_SCHEME_ALIASES = {
    "srs": Scheme.SRS,
    "trs": Scheme.TRS,
    "rrs-srs": Scheme.RRS_SRS,
    "rrs_srs": Scheme.RRS_SRS,
    "rrs-trs": Scheme.RRS_TRS,
    "rrs_trs": Scheme.RRS_TRS,
    "oma": Scheme.OMA,
}

_DISTANCE_ALIASES = {
    "exact": DistanceMode.EXACT,
    "approx": DistanceMode.APPROXIMATE,
    "approximate": DistanceMode.APPROXIMATE,
}


def _parse_duplex(value: str) -> DuplexMode:
    try:
        return _DUPLEX_ALIASES[value.strip().lower()]
    except KeyError:
        raise SpecError(f"duplex must be 'fd' or 'hd', got {value!r}") from None


def _parse_scheme(value: str) -> Scheme:
    try:
        return _SCHEME_ALIASES[value.strip().lower()]
    except KeyError:
        raise SpecError(
            f"schemes entries must be one of {sorted(set(_SCHEME_ALIASES))}, "
            f"got {value!r}"
        ) from None


def _parse_distance(value: str) -> DistanceMode:
    try:
        return _DISTANCE_ALIASES[value.strip().lower()]
    except KeyError:
        raise SpecError(
            f"distance_mode must be 'exact' or 'approx', got {value!r}"
        ) from None


_CONFIG_FIELDS = {f.name for f in fields(SystemConfig)}
_SWEEP_FIELDS = {
    "snr_grid_db", "schemes", "k_values", "li_values_db", "duplex_modes",
    "trials", "seed", "distance_mode",
}


def load_spec(
    path: str | None,
    default_snr_grid: tuple[float, ...] = _DEFAULT_SNR_GRID,
) -> SweepSpec:
    """Build a SweepSpec from a JSON config file (all defaults if None)."""
    doc: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise SpecError("config file must hold a JSON object")
    sweep_doc = doc.pop("sweep", {})
    if not isinstance(sweep_doc, dict):
        raise SpecError("'sweep' must be a JSON object")
    unknown = set(doc) - _CONFIG_FIELDS
    if unknown:
        raise SpecError(f"unknown config fields: {sorted(unknown)}")
    unknown = set(sweep_doc) - _SWEEP_FIELDS
    if unknown:
        raise SpecError(f"unknown sweep fields: {sorted(unknown)}")

    duplex_given = "duplex" in doc
    if duplex_given:
        doc["duplex"] = _parse_duplex(doc["duplex"])
    base = SystemConfig(**doc)

    if "duplex_modes" in sweep_doc:
        duplex_modes = tuple(_parse_duplex(d) for d in sweep_doc["duplex_modes"])
    elif duplex_given:
        duplex_modes = (base.duplex,)
    else:
        duplex_modes = (DuplexMode.FULL_DUPLEX, DuplexMode.HALF_DUPLEX)

    return SweepSpec(
        base=base,
        snr_grid_db=tuple(
            float(s) for s in sweep_doc.get("snr_grid_db", default_snr_grid)
        ),
        schemes=tuple(
            _parse_scheme(s)
            for s in sweep_doc.get("schemes", ["srs", "trs"])
        ),
        k_values=tuple(
            int(k) for k in sweep_doc.get("k_values", [base.num_relays])
        ),
        li_values_db=tuple(
            float(v) for v in sweep_doc.get("li_values_db", [base.omega_li_db])
        ),
        duplex_modes=duplex_modes,
        trials=int(sweep_doc.get("trials", _DEFAULT_TRIALS)),
        seed=int(sweep_doc.get("seed", _DEFAULT_SEED)),
        distance_mode=_parse_distance(
            str(sweep_doc.get("distance_mode", "approximate"))
        ),
    )


def _apply_cli_overrides(spec: SweepSpec, args: argparse.Namespace) -> SweepSpec:
    updates = {}
    if getattr(args, "trials", None) is not None:
        updates["trials"] = args.trials
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "distance", None) is not None:
        updates["distance_mode"] = _parse_distance(args.distance)
    return replace(spec, **updates) if updates else spec


def _add_common_run_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, help="Monte Carlo trials per cell")
    p.add_argument("--seed", type=int, help="base RNG seed")
    p.add_argument(
        "--distance", choices=["exact", "approx"],
        help="relay-to-user distance handling",
    )
    p.add_argument("--threads", type=int, default=1, help="worker threads")
    p.add_argument(
        "--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE,
        help="trials per RNG substream chunk",
    )
    p.add_argument(
        "--engine", choices=["auto", "compiled", "python"], default=None,
        help="trial-counting backend (default: NOMA_RELAY_ENGINE or auto)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="noma-relay",
        description="Cooperative-NOMA relay-selection outage laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a sweep and write CSV curve data")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", default="sweep.csv", help="output CSV path")
    _add_common_run_args(p)

    p = sub.add_parser(
        "validate", help="cross-validate Monte Carlo against closed forms"
    )
    p.add_argument("--config", help="JSON config file")
    p.add_argument(
        "--tolerance", type=float, default=0.01,
        help="absolute tolerance floor (cell passes within max(T, 3*stderr))",
    )
    _add_common_run_args(p)

    p = sub.add_parser("figure", help="run a figure-reproduction preset")
    p.add_argument("name", help="preset name (fig2..fig10)")
    p.add_argument("--out", default=None, help="output CSV path")
    _add_common_run_args(p)

    p = sub.add_parser(
        "thresholds", help="print derived SINR thresholds as JSON"
    )
    p.add_argument("--config", help="JSON config file")
    return parser


def _cmd_sweep(args: argparse.Namespace) -> int:
    spec = _apply_cli_overrides(load_spec(args.config), args)
    rows = run_sweep(spec, args.out, args.threads, args.chunk_size, args.engine)
    print(f"wrote {rows} rows to {args.out}")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    spec = _apply_cli_overrides(
        load_spec(args.config, default_snr_grid=_VALIDATE_SNR_GRID), args
    )
    report = validate(
        spec, tolerance=args.tolerance, threads=args.threads,
        chunk_size=args.chunk_size, engine=args.engine,
    )
    print(report.format())
    return 0 if report.passed else 1


def _cmd_figure(args: argparse.Namespace) -> int:
    spec = _apply_cli_overrides(figure_preset(args.name), args)
    out = args.out if args.out is not None else f"{args.name}.csv"
    rows = run_sweep(spec, out, args.threads, args.chunk_size, args.engine)
    print(f"wrote {rows} rows to {out}")
    return 0


def _cmd_thresholds(args: argparse.Namespace) -> int:
    spec = load_spec(args.config)
    violations = validate_config(spec.base)
    if violations:
        raise SpecError("; ".join(violations))
    th = compute_thresholds(spec.base)
    if not th.feasible:
        print(
            "warning: power split cannot support the distant user's rate; "
            "outage is 1 for all schemes",
            file=sys.stderr,
        )
    payload = {
        "gamma_th1": th.gamma_th1,
        "gamma_th2": th.gamma_th2,
        "tau": th.tau if math.isfinite(th.tau) else None,
        "xi": th.xi,
        "theta": th.theta if math.isfinite(th.theta) else None,
        "feasible": th.feasible,
    }
    print(json.dumps(payload, indent=2))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sweep": _cmd_sweep,
        "validate": _cmd_validate,
        "figure": _cmd_figure,
        "thresholds": _cmd_thresholds,
    }
    try:
        return handlers[args.command](args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
