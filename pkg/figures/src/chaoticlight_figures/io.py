"""Readers for the simulation harness's documented output formats.

All inputs are validated fully before any figure is opened, so a malformed
file never produces a partial image. Errors name the offending file and,
where applicable, the row.
"""

from __future__ import annotations

import hashlib
import os
from typing import Dict, Optional, Sequence, Tuple

import numpy as np


class FigureInputError(Exception):
    """Missing or malformed input artifact."""


def read_csv(path: str, required: Sequence[str] = ()) -> Tuple[Dict[str, str], Dict[str, np.ndarray]]:
    """Harness CSV: '# key=value' metadata lines, a header row, float rows."""
    if not os.path.exists(path):
        raise FigureInputError(f"{path}: file not found")
    meta: Dict[str, str] = {}
    header = None
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key.strip()] = value.strip()
                continue
            if header is None:
                header = line.split(",")
                continue
            parts = line.split(",")
            if len(parts) != len(header):
                raise FigureInputError(
                    f"{path}: row {lineno}: expected {len(header)} fields, got {len(parts)}"
                )
            try:
                rows.append([float(v) for v in parts])
            except ValueError as exc:
                raise FigureInputError(f"{path}: row {lineno}: {exc}") from exc
    if header is None:
        raise FigureInputError(f"{path}: no header row")
    if not rows:
        raise FigureInputError(f"{path}: no data rows")
    data = np.array(rows)
    columns = {name: data[:, i] for i, name in enumerate(header)}
    missing = [name for name in required if name not in columns]
    if missing:
        raise FigureInputError(f"{path}: missing columns {missing}")
    return meta, columns


def read_density(path_base: str) -> Tuple[np.ndarray, dict]:
    """Flat float64 grid plus its text sidecar -> (2D array, sidecar dict)."""
    bin_path = f"{path_base}.f64"
    meta_path = f"{path_base}.meta.txt"
    for p in (bin_path, meta_path):
        if not os.path.exists(p):
            raise FigureInputError(f"{p}: file not found")
    meta = {}
    with open(meta_path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise FigureInputError(f"{meta_path}: row {lineno}: expected key=value")
            meta[key.strip()] = value.strip()
    try:
        rows = int(meta["rows"])
        cols = int(meta["cols"])
        sidecar = {
            "rows": rows,
            "cols": cols,
            "t_min": float(meta["t_min"]),
            "t_max": float(meta["t_max"]),
            "x_min": float(meta["x_min"]),
            "x_max": float(meta["x_max"]),
        }
    except (KeyError, ValueError) as exc:
        raise FigureInputError(f"{meta_path}: {exc}") from exc
    data = np.fromfile(bin_path, dtype=np.float64)
    if data.size != rows * cols:
        raise FigureInputError(
            f"{bin_path}: expected {rows}x{cols} float64 values, found {data.size}"
        )
    return data.reshape(rows, cols), sidecar


def manifest_hash(in_dir: str) -> Optional[str]:
    """Short hash of the input directory's manifest, for figure footers."""
    path = os.path.join(in_dir, "manifest.txt")
    if not os.path.exists(path):
        return None
    return hashlib.sha256(open(path, "rb").read()).hexdigest()[:12]
