"""Profile CSV and run-report serialization.

Profiles are written as ``r,u`` CSV with 17 significant digits so that
re-reading reproduces every float bit for bit. Reports are indented,
key-sorted JSON documents with no timestamps, so identical runs give
identical files.
"""

from __future__ import annotations

import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .radial_core import Profile, build_grid

REPORT_FORMAT = "ringvortex-report/1"


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def profile_csv(profile: Profile) -> str:
    buf = io.StringIO()
    buf.write("r,u\n")
    for r, u in zip(profile.grid.r, profile.values):
        buf.write(f"{r:.17g},{u:.17g}\n")
    return buf.getvalue()


def write_profile(path, profile: Profile) -> None:
    atomic_write(path, profile_csv(profile))


def read_profile(path) -> Profile:
    """Load a profile CSV and rebuild its grid from the node radii."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "r,u":
            raise ValueError(f"{path}: expected header 'r,u', got {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    r, u = data[:, 0], data[:, 1]
    grid = build_grid(float(r[-1]), len(r) - 2)
    if not np.allclose(r, grid.r, rtol=0, atol=1e-12 * grid.R):
        raise ValueError(f"{path}: nodes are not a uniform grid on [0, {r[-1]}]")
    return Profile(grid, u)


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def report_text(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_report(path, report: dict) -> None:
    atomic_write(path, report_text(report))


def read_report(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
