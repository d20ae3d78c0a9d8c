"""Render SER-versus-SNR figures from sweep results to image files."""

from __future__ import annotations

import itertools
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .reporting import read_csv
from .simulation import SerCurve

__all__ = ["plot_ser_curves", "plot_csv"]

_MARKERS = "os^dv*"


def plot_ser_curves(curves: list[SerCurve], path, title: str | None = None) -> Path:
    """Save a log-scale SER plot of one or more curves; returns the file path.

    Zero-error points have no log-scale position and are left out of their
    curve rather than plotted at an arbitrary floor.
    """
    path = Path(path)
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for curve, marker in zip(curves, itertools.cycle(_MARKERS)):
        snr = np.array([p.snr_db for p in curve.points])
        ser = np.array([p.ser for p in curve.points])
        ser = np.where(ser > 0, ser, np.nan)
        ax.semilogy(snr, ser, marker=marker, label=curve.solver)
    ax.set_xlabel("SNR [dB]")
    ax.set_ylabel("symbol error rate")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_csv(csv_path, out_path=None, title: str | None = None) -> Path:
    """Render the curves stored in a CSV results file; returns the image path."""
    csv_path = Path(csv_path)
    out_path = Path(out_path) if out_path is not None else csv_path.with_suffix(".png")
    curves = read_csv(csv_path.read_text())
    return plot_ser_curves(curves, out_path, title=title)
