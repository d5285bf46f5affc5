"""Report containers and deterministic JSON/CSV emission.

Reports never embed timestamps so identical inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

__version__ = "0.1.0"

EVIDENCE_CAVEAT = (
    "evidence scan: a bounded maximum over random samples supports but does not "
    "prove an inequality"
)


@dataclass(frozen=True)
class ScanReport:
    """Parameter grid mapped to scalar results, with a deterministic summary."""

    name: str
    grid: dict[str, Any]
    values: tuple[float, ...]
    summary: dict[str, Any]
    seed: int | None = None
    caveat: str | None = None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "grid": self.grid,
            "values": list(self.values),
            "summary": self.summary,
            "seed": self.seed,
            "caveat": self.caveat,
            "version": __version__,
        }


def canonical_json(obj: Any) -> str:
    """Deterministic JSON text: sorted keys, repr-stable floats."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_coerce)


def _coerce(obj):
    if hasattr(obj, "to_json_dict"):
        return obj.to_json_dict()
    if hasattr(obj, "item"):
        return obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    raise TypeError(f"not JSON serializable: {type(obj)}")


def write_json(path: str | Path, obj: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(obj) + "\n")
    return path


def write_csv(path: str | Path, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])
    return path


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if hasattr(v, "item"):
        v = v.item()
        return repr(v) if isinstance(v, float) else str(v)
    return str(v)


# ---------------------------------------------------------------------------
# field / trajectory files: one-line JSON header followed by a CSV body
# ---------------------------------------------------------------------------

def save_field(path: str | Path, f) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [canonical_json({"kind": "field", "cutoff": f.cutoff, "version": __version__})]
    lines.append("xi,re,im")
    for xi, c in zip(f.xi, f.coeffs):
        lines.append(f"{xi},{float(c.real)!r},{float(c.imag)!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def load_field(path: str | Path):
    from .fields import SpectralField

    lines = Path(path).read_text().strip().splitlines()
    header = json.loads(lines[0])
    if header.get("kind") != "field":
        raise ValueError(f"{path} is not a field file")
    cutoff = int(header["cutoff"])
    coeffs = {}
    for line in lines[2:]:
        xi, re, im = line.split(",")
        coeffs[int(xi)] = float(re) + 1j * float(im)
    return SpectralField.from_coeff_dict(cutoff, coeffs)


def save_trajectory(path: str | Path, traj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    profile = None
    if traj.cutoff_profile is not None:
        profile = {"kind": traj.cutoff_profile.kind, "scale": traj.cutoff_profile.scale}
    head = {
        "kind": "trajectory",
        "cutoff": traj.cutoff,
        "window": traj.window,
        "steps": traj.steps,
        "cutoff_profile": profile,
        "version": __version__,
    }
    lines = [canonical_json(head), "k,xi,re,im"]
    for k, s in enumerate(traj.samples):
        for xi, c in zip(s.xi, s.coeffs):
            lines.append(f"{k},{xi},{float(c.real)!r},{float(c.imag)!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def load_trajectory(path: str | Path):
    import numpy as np

    from .fields import CutoffProfile, SpectralField, Trajectory

    lines = Path(path).read_text().strip().splitlines()
    header = json.loads(lines[0])
    if header.get("kind") != "trajectory":
        raise ValueError(f"{path} is not a trajectory file")
    cutoff, steps = int(header["cutoff"]), int(header["steps"])
    width = 2 * cutoff + 1
    mat = np.zeros((steps + 1, width), dtype=complex)
    for line in lines[2:]:
        k, xi, re, im = line.split(",")
        mat[int(k), int(xi) + cutoff] = float(re) + 1j * float(im)
    profile = None
    if header.get("cutoff_profile"):
        p = header["cutoff_profile"]
        profile = CutoffProfile(kind=p["kind"], scale=p["scale"])
    samples = tuple(SpectralField(row, cutoff) for row in mat)
    return Trajectory(samples, float(header["window"]), profile)
