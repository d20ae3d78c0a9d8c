"""Command-line SER sweeps.

Exit codes: 0 on success, 2 on usage errors (argparse convention), 3 when
every requested solver refuses to run (exhaustive search above its cap).
In --compare mode, per-solver refusals are reported on stderr and the run
continues with the remaining solvers.
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .precoders import SolverRefusal
from .reporting import build_manifest, format_csv, format_json
from .simulation import SimConfig, available_solvers, check_solver_config, compare_sweeps

__all__ = ["build_parser", "parse_snr", "main"]


def parse_snr(text: str) -> tuple[float, ...]:
    """Parse an SNR grid in dB: 'start:step:stop' (inclusive) or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected start:step:stop, got {text!r}")
        start, step, stop = (float(p) for p in parts)
        if step == 0:
            raise ValueError("step must be nonzero")
        n = int((stop - start) / step + 1e-9) + 1
        if n < 1:
            raise ValueError(f"range {text!r} contains no points")
        return tuple(start + i * step for i in range(n))
    if not text:
        raise ValueError("empty SNR specification")
    return tuple(float(p) for p in text.split(","))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="onebit-precoding",
        description="Monte-Carlo SER sweeps for one-bit downlink precoding with antenna selection.",
    )
    p.add_argument("--nt", type=int, default=128, help="transmit antennas (default 128)")
    p.add_argument("--k", type=int, default=16, help="single-antenna users (default 16)")
    p.add_argument("--mod", type=int, default=4, choices=(4, 8, 16), help="PSK order (default 4)")
    p.add_argument(
        "--snr",
        default="-10:5:25",
        help="SNR grid in dB, start:step:stop inclusive or comma list (default -10:5:25)",
    )
    p.add_argument("--trials", type=int, default=1000, help="channel draws per SNR point (default 1000)")
    p.add_argument("--seed", type=int, default=0, help="base seed of the substream tree (default 0)")
    p.add_argument(
        "--solver",
        default="two-stage",
        help=f"one of: {', '.join(available_solvers())} (default two-stage)",
    )
    p.add_argument("--delta", type=float, default=3.0, help="hard threshold of the two-stage solver (default 3)")
    p.add_argument("--tmax", type=int, default=12, help="iteration budget of the two-stage solver (default 12)")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default csv)")
    p.add_argument("--out", type=Path, default=None, help="output file (default stdout)")
    p.add_argument("--workers", type=int, default=1, help="worker processes; results do not depend on this")
    p.add_argument("--compare", default=None, help="comma-separated solvers to sweep on paired realizations")
    p.add_argument("--plot", action="store_true", help="also render a PNG figure next to --out")
    p.add_argument("--search-cap", type=int, default=16, help="largest 2*Nt exhaustive search accepts (default 16)")
    p.add_argument("--power-norm", choices=("total", "active"), default="total", help="SNR normalization")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        snr = parse_snr(args.snr)
    except ValueError as exc:
        parser.error(f"--snr: {exc}")
    if args.workers < 1:
        parser.error(f"--workers must be >= 1, got {args.workers}")
    if args.plot and args.out is None:
        parser.error("--plot requires --out")

    solvers = [s.strip() for s in args.compare.split(",")] if args.compare else [args.solver]
    solvers = [s for s in solvers if s]
    if not solvers:
        parser.error("--compare must name at least one solver")
    unknown = [s for s in solvers if s not in available_solvers()]
    if unknown:
        parser.error(f"unknown solver(s) {', '.join(unknown)}; available: {', '.join(available_solvers())}")

    try:
        cfg = SimConfig(
            nt=args.nt,
            k=args.k,
            m=args.mod,
            snr_db=snr,
            trials=args.trials,
            seed=args.seed,
            solver=solvers[0],
            delta=args.delta,
            tmax=args.tmax,
            power_norm=args.power_norm,
            search_cap=args.search_cap,
        )
    except ValueError as exc:
        parser.error(str(exc))

    runnable = []
    for s in solvers:
        try:
            check_solver_config(replace(cfg, solver=s))
            runnable.append(s)
        except SolverRefusal as exc:
            print(f"refused: {s}: {exc}", file=sys.stderr)
    if not runnable:
        return 3

    t0 = time.perf_counter()
    curves = compare_sweeps(cfg, runnable, workers=args.workers)
    duration = time.perf_counter() - t0

    if args.format == "csv":
        text = format_csv(curves)
    else:
        text = format_json(curves, build_manifest(cfg, curves, args.workers, duration, __version__))

    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(text)
    else:
        sys.stdout.write(text)

    if args.plot:
        from .plotting import plot_ser_curves

        png = args.out.with_suffix(".png")
        plot_ser_curves(curves, png, title=f"Nt={cfg.nt}, K={cfg.k}, {cfg.m}-PSK")
        print(f"figure written to {png}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
