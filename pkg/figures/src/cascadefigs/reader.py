"""Manifest-bundle reading.

A bundle is a directory with ``manifest.json`` plus raw little-endian binary
arrays (complex values as interleaved float64 re/im, row-major).  This module
is an independent reader of that documented layout; it never mutates a
bundle and deliberately shares no code with the simulator that wrote it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MANIFEST_NAME = "manifest.json"

_DTYPES = {"complex128": "<c16", "float64": "<f8"}


@dataclass(frozen=True)
class Bundle:
    folder: Path
    manifest: dict

    @property
    def scalars(self) -> dict:
        return self.manifest["scalars"]

    @property
    def preset(self) -> str | None:
        return self.manifest["config"].get("preset")

    def entry(self, name: str) -> dict:
        for e in self.manifest["arrays"]:
            if e["name"] == name:
                return e
        raise KeyError(f"manifest has no array named {name!r}")

    def has_array(self, name: str) -> bool:
        return any(e["name"] == name for e in self.manifest["arrays"])

    def array(self, name: str) -> np.ndarray:
        e = self.entry(name)
        if e.get("byte_order", "little") != "little" or e.get("order", "C") != "C":
            raise ValueError(f"array {name!r}: unsupported layout")
        path = self.folder / e["file"]
        data = np.fromfile(path, dtype=_DTYPES[e["dtype"]])
        expected = int(np.prod(e["shape"]))
        if data.size != expected:
            raise ValueError(
                f"array {name!r}: file holds {data.size} elements, "
                f"manifest declares shape {e['shape']}")
        return data.reshape(e["shape"])


def load_bundle(path: str | Path) -> Bundle:
    folder = Path(path)
    if folder.is_file():
        folder = folder.parent
    manifest = json.loads((folder / MANIFEST_NAME).read_text(encoding="utf-8"))
    for key in ("arrays", "scalars", "config"):
        if key not in manifest:
            raise ValueError(f"manifest is missing the {key!r} section")
    return Bundle(folder=folder, manifest=manifest)


def validate_figure_inputs(bundle: Bundle) -> None:
    """Check that everything the triptych needs exists and is consistent."""
    needed = ("density_x", "axis_x1", "axis_x2", "axis_x3",
              "marginal_x2_x3", "marginal_x1_x3", "marginal_x1_x2")
    for name in needed:
        if not bundle.has_array(name):
            raise ValueError(f"manifest lacks required array {name!r}")
    shape = tuple(bundle.entry("density_x")["shape"])
    axes = tuple(len(bundle.array(f"axis_x{i}")) for i in (1, 2, 3))
    if shape != axes:
        raise ValueError(f"density shape {shape} does not match axes {axes}")


def recompute_marginals(bundle: Bundle) -> tuple[np.ndarray, ...]:
    """Marginals re-derived from the density array (deserialization check)."""
    dens = bundle.array("density_x")
    out = []
    for axis in range(3):
        x = bundle.array(f"axis_x{axis + 1}")
        w = np.full(len(x), x[1] - x[0])
        w[0] *= 0.5
        w[-1] *= 0.5
        out.append(np.tensordot(w, np.moveaxis(dens, axis, 0), axes=([0], [0])))
    return tuple(out)


def marginal_deviation(bundle: Bundle) -> float:
    """Largest absolute difference between stored and recomputed marginals."""
    stored = (bundle.array("marginal_x2_x3"), bundle.array("marginal_x1_x3"),
              bundle.array("marginal_x1_x2"))
    worst = 0.0
    for got, want in zip(recompute_marginals(bundle), stored):
        worst = max(worst, float(np.abs(got - want).max()))
    return worst
