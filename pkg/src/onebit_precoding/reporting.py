"""Delimited and JSON serialization of sweep results.

CSV rows carry one (SNR point, solver) pair with the fixed header below;
floats are written with 6 significant digits so identical runs produce
byte-identical files. JSON mirrors the same rows with full-precision floats
plus a run manifest (config echo, package version, wall-clock duration,
per-solver complexity summary), so JSON output round-trips to equal
SerCurve objects while CSV round-trips up to the 6-digit formatting.
"""

from __future__ import annotations

import json
from dataclasses import asdict

from .precoders import complexity_formulas
from .simulation import SerCurve, SimConfig, SweepPoint

__all__ = [
    "CSV_HEADER",
    "format_csv",
    "read_csv",
    "format_json",
    "read_json",
    "build_manifest",
]

CSV_HEADER = "snr_db,solver,ser,symbol_errors,symbols_sent,mean_tstar,mean_chi"


def _fmt(x) -> str:
    """6-significant-digit float formatting; None becomes the empty field."""
    if x is None:
        return ""
    return f"{float(x):.6g}"


def format_csv(curves: list[SerCurve]) -> str:
    """Serialize curves as CSV text, one row per (point, solver), grouped by curve."""
    lines = [CSV_HEADER]
    for curve in curves:
        for p in curve.points:
            lines.append(
                ",".join(
                    [
                        _fmt(p.snr_db),
                        curve.solver,
                        _fmt(p.ser),
                        str(p.symbol_errors),
                        str(p.symbols_sent),
                        _fmt(p.mean_tstar),
                        _fmt(p.mean_chi),
                    ]
                )
            )
    return "\n".join(lines) + "\n"


def read_csv(text: str) -> list[SerCurve]:
    """Parse format_csv output back into curves (solver order of first appearance).

    The ser column is redundant (SweepPoint derives it from the counts) and
    is ignored; mean_multiplies is not stored in CSV and comes back None.
    """
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"expected header {CSV_HEADER!r}")
    grouped: dict[str, list[SweepPoint]] = {}
    for ln in lines[1:]:
        fields = ln.split(",")
        if len(fields) != 7:
            raise ValueError(f"expected 7 fields, got {len(fields)}: {ln!r}")
        snr_db, solver, _ser, errors, sent, tstar, chi = fields
        grouped.setdefault(solver, []).append(
            SweepPoint(
                snr_db=float(snr_db),
                symbol_errors=int(errors),
                symbols_sent=int(sent),
                mean_tstar=float(tstar) if tstar else None,
                mean_chi=float(chi) if chi else None,
            )
        )
    return [SerCurve(solver=s, points=tuple(pts)) for s, pts in grouped.items()]


def _curve_to_dict(curve: SerCurve) -> dict:
    return {
        "solver": curve.solver,
        "mean_multiplies": curve.mean_multiplies,
        "points": [
            {
                "snr_db": p.snr_db,
                "ser": p.ser,
                "symbol_errors": p.symbol_errors,
                "symbols_sent": p.symbols_sent,
                "mean_tstar": p.mean_tstar,
                "mean_chi": p.mean_chi,
            }
            for p in curve.points
        ],
    }


def _curve_from_dict(d: dict) -> SerCurve:
    points = tuple(
        SweepPoint(
            snr_db=p["snr_db"],
            symbol_errors=p["symbol_errors"],
            symbols_sent=p["symbols_sent"],
            mean_tstar=p["mean_tstar"],
            mean_chi=p["mean_chi"],
        )
        for p in d["points"]
    )
    return SerCurve(solver=d["solver"], points=points, mean_multiplies=d["mean_multiplies"])


def format_json(curves: list[SerCurve], manifest: dict) -> str:
    """Serialize curves and manifest as stable, indented JSON text."""
    doc = {"manifest": manifest, "curves": [_curve_to_dict(c) for c in curves]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_json(text: str) -> tuple[list[SerCurve], dict]:
    """Parse format_json output back into (curves, manifest)."""
    doc = json.loads(text)
    return [_curve_from_dict(d) for d in doc["curves"]], doc["manifest"]


def build_manifest(cfg: SimConfig, curves: list[SerCurve], workers: int, duration_s: float, version: str) -> dict:
    """Assemble the run manifest: config echo, version, duration, cost summary.

    The complexity reference block evaluates the closed forms at the config's
    dimensions (two_stage at tstar = tmax); per-solver entries aggregate the
    instrumented and formula costs actually observed in the sweep.
    """
    chi = complexity_formulas(cfg.nt, cfg.k, cfg.tmax)
    config = asdict(cfg)
    config["snr_db"] = list(config["snr_db"])  # JSON has no tuples; keep the echo round-trippable
    per_solver = {}
    for c in curves:
        tvals = [p.mean_tstar for p in c.points if p.mean_tstar is not None]
        cvals = [p.mean_chi for p in c.points if p.mean_chi is not None]
        per_solver[c.solver] = {
            "mean_multiplies": c.mean_multiplies,
            "mean_tstar": sum(tvals) / len(tvals) if tvals else None,
            "mean_chi": sum(cvals) / len(cvals) if cvals else None,
        }
    return {
        "config": config,
        "workers": workers,
        "version": version,
        "duration_s": duration_s,
        "complexity_reference": {
            "symbol_scaling": chi.symbol_scaling,
            "binary_exhaustive": chi.binary_exhaustive,
            "ternary_exhaustive": chi.ternary_exhaustive,
            "two_stage_at_tmax": chi.two_stage,
        },
        "per_solver": per_solver,
    }
