"""Bit-stable file outputs: columnar tables, summary documents, manifests.

Tables are tab-separated text with a header row; floats are written with
shortest round-trip formatting so identical arrays always produce identical
bytes. Timestamps appear only in the run manifest, never in data files.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .correlation import CorrelationSeries
from .integration import Trajectory
from .spectral import BifurcationScan

__all__ = [
    "write_table",
    "write_trajectory",
    "write_spectrum",
    "write_correlation",
    "write_json_doc",
    "write_manifest",
]

TRAJECTORY_COLUMNS = (
    "t",
    "re_psi_l",
    "im_psi_l",
    "re_psi_r",
    "im_psi_r",
    "n_l",
    "n_r",
    "pop_l",
    "pop_r",
    "re_theta",
    "im_theta",
)


def _fmt(x: float) -> str:
    return repr(float(x))


def write_table(path: Path, header: Sequence[str], columns: Sequence[np.ndarray]) -> None:
    if len(header) != len(columns):
        raise ValueError("header and column counts differ")
    n = len(columns[0])
    for col in columns:
        if len(col) != n:
            raise ValueError("columns have unequal lengths")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(header) + "\n")
        for i in range(n):
            fh.write("\t".join(_fmt(col[i]) for col in columns) + "\n")


def write_trajectory(path: Path, traj: Trajectory) -> None:
    theta = traj.theta
    columns = (
        traj.times,
        traj.psi_l.real,
        traj.psi_l.imag,
        traj.psi_r.real,
        traj.psi_r.imag,
        traj.n_l,
        traj.n_r,
        traj.pop_l,
        traj.pop_r,
        theta.real,
        theta.imag,
    )
    write_table(path, TRAJECTORY_COLUMNS, columns)


def write_spectrum(path: Path, scan: BifurcationScan) -> None:
    write_table(
        path,
        ("gamma", "re_lambda_plus", "im_lambda_plus", "re_lambda_minus", "im_lambda_minus"),
        (
            scan.gammas,
            scan.lambda_plus.real,
            scan.lambda_plus.imag,
            scan.lambda_minus.real,
            scan.lambda_minus.imag,
        ),
    )


def write_correlation(path: Path, series: CorrelationSeries) -> None:
    write_table(
        path,
        ("lag", "re_g1", "im_g1", "abs_g1"),
        (series.lags, series.values.real, series.values.imag, series.magnitudes()),
    )


def write_json_doc(path: Path, doc: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_manifest(
    path: Path,
    *,
    experiment: str,
    version: str,
    seed: int,
    wall_seconds: float,
    files: Iterable[str],
    extra: dict | None = None,
) -> None:
    doc = {
        "experiment": experiment,
        "version": version,
        "seed": seed,
        "wall_seconds": wall_seconds,
        "files": sorted(files),
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }
    if extra:
        doc.update(extra)
    write_json_doc(path, doc)
