"""Command-line front end: ``harmtwist <command> [flags]``.

Every command produces a :class:`~harmtwist.report.VerificationReport`.  The
exit status is 0 when all of its checks pass, 1 otherwise, and 2 on bad
arguments.  JSON output embeds the resolved :class:`RunConfig`.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from typing import Any, Sequence

import numpy as np

from .determinant import SERIES_COLUMNS, log_series_coefficient, point_with_ratio, series_table
from .gauge import bpst_connection, bpst_density, topological_charge
from .prepotential import align_constant_gauge, instanton_bridge, reconstruct_gauge_field
from .report import Check, VerificationReport, rows_to_csv
from .verify import DEFAULT_SERIES_ORDER, run_identity_suite, verify_theorem

COMMANDS = ("series", "verify-theorem", "reconstruct", "charge", "selftest")

#: per-command defaults; radii are in units of rho
DEFAULTS: dict[str, dict[str, Any]] = {
    "series": {"order": 30, "t": 0.5},
    "verify-theorem": {"order": DEFAULT_SERIES_ORDER, "rmax": 8.0, "n": 400, "stretch": 0.0},
    "reconstruct": {"points": 20},
    "charge": {"rmax": 100.0, "n": 4000, "stretch": 3.0},
    "selftest": {},
}

SERIES_TOLERANCE = 1e-10
RECONSTRUCTION_TOLERANCE = 1e-5
CHARGE_TOLERANCE = 1e-4


@dataclass(frozen=True)
class RunConfig:
    command: str
    rho: float = 1.0
    point: tuple[float, float, float, float] | None = None
    order: int | None = None
    r_max: float | None = None
    n: int | None = None
    stretch: float | None = None
    fd_step: float | None = None
    seed: int = 0
    output_format: str = "json"
    output_path: str | None = None


def _point(text: str) -> tuple[float, float, float, float]:
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of numbers: {text!r}") from None
    if len(vals) != 4 or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("--point needs four finite comma-separated numbers")
    return vals  # type: ignore[return-value]


def _positive(kind):
    def parse(text: str):
        try:
            v = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a {kind.__name__}: {text!r}") from None
        if not v > 0 or (kind is float and not math.isfinite(v)):
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return v

    return parse


def _non_negative_float(text: str) -> float:
    v = float(text)
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="harmtwist", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    helps = {
        "series": "series terms of the determinant against log(1+t)",
        "verify-theorem": "Chern density against sigma * Laplacian^2 T on a radial grid",
        "reconstruct": "gauge field from the bridge against the closed-form instanton",
        "charge": "topological charge by radial quadrature",
        "selftest": "consolidated identity suite",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--rho", type=_positive(float), default=1.0, help="instanton size (default 1)")
        p.add_argument("--point", type=_point, help="x as 'x1,x2,x3,x4'")
        p.add_argument("--t", type=_non_negative_float, help="|x|^2/rho^2 along a fixed direction")
        p.add_argument("--order", type=_positive(int), help="series truncation order")
        p.add_argument("--rmax", type=_positive(float), help="grid radius in units of rho")
        p.add_argument("--n", type=_positive(int), help="number of grid points")
        p.add_argument("--stretch", type=_non_negative_float, help="tanh grid stretching (0 = uniform)")
        p.add_argument("--fd-step", type=_positive(float), help="finite-difference step (default: automatic)")
        p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
        p.add_argument("--format", choices=("json", "csv"), default="json", dest="output_format")
        p.add_argument("--out", dest="output_path", help="write here instead of standard output")
    return parser


def resolve_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> RunConfig:
    d = DEFAULTS[args.command]
    if args.point is not None and args.t is not None:
        parser.error("--point and --t are mutually exclusive")
    point = args.point
    if args.command == "series" and point is None:
        t = d["t"] if args.t is None else args.t
        point = tuple(float(v) for v in point_with_ratio(t, args.rho))
    elif args.t is not None:
        point = tuple(float(v) for v in point_with_ratio(args.t, args.rho))
    uses_grid = args.command in ("verify-theorem", "charge")
    rmax = args.rmax if args.rmax is not None else d.get("rmax")
    cfg = RunConfig(
        command=args.command,
        rho=args.rho,
        point=point,
        order=args.order if args.order is not None else d.get("order"),
        r_max=rmax * args.rho if uses_grid and rmax is not None else None,
        n=args.n if args.n is not None else d.get("n"),
        stretch=args.stretch if args.stretch is not None else d.get("stretch"),
        fd_step=args.fd_step,
        seed=args.seed,
        output_format=args.output_format,
        output_path=args.output_path,
    )
    if cfg.command == "verify-theorem":
        if cfg.stretch:
            parser.error("verify-theorem uses a uniform grid; --stretch must be 0")
        if cfg.r_max < 5 * cfg.rho:
            parser.error("verify-theorem needs --rmax >= 5 (units of rho)")
        if cfg.n < 5:
            parser.error("--n must be at least 5")
    if cfg.command == "charge" and cfg.n < 100:
        parser.error("charge needs --n >= 100")
    return cfg


# ---------------------------------------------------------------------------
# commands; each returns (report, extra JSON fields, CSV table or None)


def run_series(cfg: RunConfig):
    x = np.array(cfg.point)
    table = series_table(x, cfg.rho, cfg.order)
    rows = table.rows()
    report = VerificationReport()
    t = table.t
    for k, term in table.terms[:10]:
        report.add(Check.compare(f"series: term {k}", term, log_series_coefficient(k, t), SERIES_TOLERANCE))
    report.add(Check.compare(f"series: partial sum of order {cfg.order} vs log(1+t)", table.partial_sums[-1], table.closed_form(), SERIES_TOLERANCE))
    return report, {"t": t, "rows": rows}, (SERIES_COLUMNS, rows)


def run_verify_theorem(cfg: RunConfig):
    report = verify_theorem(cfg.rho, cfg.r_max, cfg.n, cfg.order, fd_step=cfg.fd_step)
    return report, {}, None


def run_reconstruct(cfg: RunConfig):
    if cfg.point is not None:
        points = [np.array(cfg.point)]
    else:
        rng = np.random.default_rng(cfg.seed)
        points = [rng.normal(size=4) * cfg.rho for _ in range(DEFAULTS["reconstruct"]["points"])]
    bridge = instanton_bridge(cfg.rho)
    step = {} if cfg.fd_step is None else {"h": cfg.fd_step}
    recon = [reconstruct_gauge_field(bridge, x, **step) for x in points]
    ref = [bpst_connection(x, cfg.rho) for x in points]
    align = align_constant_gauge(ref, recon)
    report = VerificationReport(metadata={"points": [list(map(float, x)) for x in points]})
    report.add(Check.bound("reconstruction: max deviation from BPST after alignment", align.residual, RECONSTRUCTION_TOLERANCE))
    return report, {"rotation": align.rotation.tolist()}, None


def run_charge(cfg: RunConfig):
    density = None if cfg.fd_step is None else (lambda y: bpst_density(y, cfg.rho, cfg.fd_step))
    q = topological_charge(cfg.rho, cfg.r_max, cfg.n, stretch=cfg.stretch, density=density)
    report = VerificationReport()
    report.add(Check.compare("charge: radial quadrature vs 1", q, 1.0, CHARGE_TOLERANCE))
    return report, {"charge": q}, None


def run_selftest(cfg: RunConfig):
    return run_identity_suite(cfg.seed, rho=cfg.rho), {}, None


RUNNERS = {
    "series": run_series,
    "verify-theorem": run_verify_theorem,
    "reconstruct": run_reconstruct,
    "charge": run_charge,
    "selftest": run_selftest,
}


def render(cfg: RunConfig, report: VerificationReport, extra: dict, table) -> str:
    if cfg.output_format == "csv":
        if table is not None:
            columns, rows = table
            return rows_to_csv(columns, rows)
        return report.to_csv()
    doc = report.to_dict()
    doc.update(extra)
    doc["config"] = asdict(cfg)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = resolve_config(args, parser)
    except SystemExit as exc:  # argparse reports usage errors this way
        return int(exc.code or 0)
    report, extra, table = RUNNERS[cfg.command](cfg)
    text = render(cfg, report, extra, table)
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
