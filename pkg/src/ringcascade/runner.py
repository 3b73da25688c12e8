"""Simulation orchestration and bit-exact result export.

``run`` executes the pipeline (pair amplitude, triplet amplitude, purities,
rates, projections), writes each exported array as raw little-endian bytes
(complex values as interleaved float64 re/im pairs, row-major), and describes
everything in a UTF-8 JSON manifest.  Reruns of the same configuration
produce byte-identical arrays regardless of the worker count; timing lives
only in the manifest.  Convergence failures remove partial outputs.
"""

from __future__ import annotations

import copy
import json
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import oracle as oracle_mod
from .analysis import projections_and_isosurface, purity, triplet_rate
from .config import ConfigError, SimulationConfig
from .device import BandId, ChannelId, check_energy_conservation
from .pump import amplitude_from_drive, average_power, intracavity_peak_power
from .wavefunctions import (TriphotonAmplitude, _triple_probs, compute_bwf,
                            compute_twf, two_pair_probability_bound)

MANIFEST_NAME = "manifest.json"


@dataclass
class RunManifest:
    """In-memory form of the exported manifest."""

    config: dict
    arrays: list = field(default_factory=list)
    scalars: dict = field(default_factory=dict)
    convergence: dict = field(default_factory=dict)
    timing_seconds: dict = field(default_factory=dict)
    schema_version: int = 1
    generator: str = ""

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "generator": self.generator,
            "config": self.config,
            "arrays": self.arrays,
            "scalars": self.scalars,
            "convergence": self.convergence,
            "timing_seconds": self.timing_seconds,
        }


def _write_array(folder: Path, manifest: RunManifest, name: str,
                 arr: np.ndarray) -> None:
    if np.iscomplexobj(arr):
        data = np.ascontiguousarray(arr, dtype="<c16")
        dtype = "complex128"
    else:
        data = np.ascontiguousarray(arr, dtype="<f8")
        dtype = "float64"
    fname = f"{name}.bin"
    data.tofile(folder / fname)
    manifest.arrays.append({
        "name": name,
        "file": fname,
        "dtype": dtype,
        "byte_order": "little",
        "order": "C",
        "shape": list(arr.shape),
        "size_bytes": int(data.nbytes),
    })


def run(config: SimulationConfig, out_dir: str | Path | None = None,
        force_oracle: bool = False) -> RunManifest:
    """Execute the full pipeline and export a manifest bundle."""
    config.validate()
    folder = Path(out_dir) if out_dir is not None else Path(config.output.directory)
    folder.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        return _run_inner(config, folder, force_oracle, written)
    except Exception:
        for p in written:
            p.unlink(missing_ok=True)
        raise


def _run_inner(config, folder, force_oracle, written):
    t0 = time.perf_counter()
    dev = config.build_device()
    p1_spec, p2_spec = config.build_pump_specs()
    pump1 = amplitude_from_drive(p1_spec, dev.band(BandId.P1))
    pump2 = amplitude_from_drive(p2_spec, dev.band(BandId.P2))
    grids = config.build_grids(dev)
    threads = config.numerics.threads

    t_bwf = time.perf_counter()
    bwf = compute_bwf(dev, pump1, grids)
    t_twf = time.perf_counter()
    twf = compute_twf(dev, pump2, bwf, grids,
                      epsilon=config.numerics.epsilon,
                      check_convergence=(config.numerics.check_convergence
                                         and not force_oracle),
                      threads=threads)
    if force_oracle:
        twf.core[...] = oracle_mod.twf_core_direct(
            dev, pump1, pump2, grids, config.numerics.epsilon)
        twf = _refresh_twf(twf)
    t_post = time.perf_counter()

    pur = purity(twf)
    rate = triplet_rate(twf.sigma2, dev, p1_spec.repetition_rate)
    bundle = projections_and_isosurface(twf, threshold=0.1)
    energy = check_energy_conservation(dev)

    manifest = RunManifest(config=config.to_dict(),
                           generator=f"ringcascade {__version__}")

    def write(name, arr):
        _write_array(folder, manifest, name, arr)
        written.append(folder / f"{name}.bin")

    write("twf_acacac", twf.psi_acacac)
    write("axis_x1", bundle.axes[0])
    write("axis_x2", bundle.axes[1])
    write("axis_x3", bundle.axes[2])
    write("density_x", bundle.density)
    write("marginal_x2_x3", bundle.marginals[0])
    write("marginal_x1_x3", bundle.marginals[1])
    write("marginal_x1_x2", bundle.marginals[2])
    write("bwf_acac", bwf.normalized(ChannelId.AC, ChannelId.AC))
    write("bwf_axis_x1", bwf.grid_s1.x)
    write("bwf_axis_xi", bwf.grid_i.x)
    write("pair_probabilities", bwf.pair_probs)
    write("triple_probabilities", twf.triple_probs)
    for i, s in enumerate(pur.schmidt, start=1):
        write(f"schmidt_x{i}", s)

    p1_avg = average_power(p1_spec.energy(), p1_spec.repetition_rate)
    if p2_spec.is_cw:
        p2_energy, p2_avg = None, p2_spec.cw_power
    else:
        p2_energy = p2_spec.energy()
        p2_avg = average_power(p2_energy, p2_spec.repetition_rate)

    manifest.scalars = {
        "beta2": bwf.beta2,
        "sigma2": twf.sigma2,
        "purity_p1": pur.p1,
        "purity_p2": pur.p2,
        "purity_p3": pur.p3,
        "triplet_rate_hz": rate.rate_hz,
        "eta_product": rate.eta_product,
        "acacac_probability": twf.acacac_prob,
        "post_selection_norm_constant": twf.norm_constant,
        "two_pair_bound": two_pair_probability_bound(bwf),
        "pump1_pulse_energy_j": p1_spec.energy(),
        "pump1_average_power_w": p1_avg,
        "pump2_pulse_energy_j": p2_energy,
        "pump2_average_power_w": p2_avg,
        "pump1_peak_circulating_w": intracavity_peak_power(
            dev.resonance(1, BandId.P1), p1_spec, dev.band(BandId.P1), dev),
        "pump2_peak_circulating_w": intracavity_peak_power(
            dev.resonance(2, BandId.P2), p2_spec, dev.band(BandId.P2), dev),
        "energy_delta1_linewidths": energy.delta1_linewidths,
        "energy_delta2_linewidths": energy.delta2_linewidths,
        "idler_wavelength_nm": energy.idler_wavelength_delta1_zero * 1e9,
    }
    manifest.convergence = {
        "epsilon": twf.epsilon,
        "epsilon_halving_sigma2_drift": twf.epsilon_drift,
        "pump_energy_fraction_outside_grid": twf.pump_coverage,
        "oracle_path": bool(force_oracle),
    }
    t1 = time.perf_counter()
    manifest.timing_seconds = {
        "total": t1 - t0,
        "biphoton": t_twf - t_bwf,
        "triphoton": t_post - t_twf,
        "analysis_and_export": t1 - t_post,
    }
    (folder / MANIFEST_NAME).write_text(
        json.dumps(manifest.to_dict(), indent=1, sort_keys=True),
        encoding="utf-8")
    written.clear()          # success: keep everything
    return manifest


def _refresh_twf(twf: TriphotonAmplitude) -> TriphotonAmplitude:
    """Recompute the derived members after replacing the core (oracle path)."""
    probs = _triple_probs(twf.core, twf.profiles, twf.weights())
    sigma2 = float(probs.sum())
    acacac = float(probs[0, 0, 0])
    t_ac = (twf.profiles[0][ChannelId.AC][:, None, None]
            * twf.profiles[1][ChannelId.AC][None, :, None]
            * twf.profiles[2][ChannelId.AC][None, None, :] * twf.core)
    psi = t_ac / np.sqrt(acacac)
    return TriphotonAmplitude(
        grid_s1=twf.grid_s1, grid_s2=twf.grid_s2, grid_s3=twf.grid_s3,
        sigma2=sigma2, core=twf.core, profiles=twf.profiles,
        triple_probs=probs, psi_acacac=psi,
        norm_constant=float(np.sqrt(sigma2 / acacac)), acacac_prob=acacac,
        epsilon=twf.epsilon, epsilon_drift=twf.epsilon_drift,
        pump_coverage=twf.pump_coverage)


def load_manifest(folder: str | Path) -> dict:
    return json.loads((Path(folder) / MANIFEST_NAME).read_text(encoding="utf-8"))


def read_array(folder: str | Path, entry: dict) -> np.ndarray:
    dtype = "<c16" if entry["dtype"] == "complex128" else "<f8"
    arr = np.fromfile(Path(folder) / entry["file"], dtype=dtype)
    return arr.reshape(entry["shape"])


def _headline(manifest: RunManifest) -> dict:
    s = manifest.scalars
    return {"beta2": s["beta2"], "sigma2": s["sigma2"], "p1": s["purity_p1"],
            "p2": s["purity_p2"], "p3": s["purity_p3"]}


def convergence_sweep(config: SimulationConfig, axis: str) -> list[dict]:
    """Rerun with coarse/base/refined settings along one axis; report drifts.

    ``axis``: ``grid_n`` (signal-grid points halved then doubled),
    ``grid_span`` (signal span halved then doubled) or ``epsilon``
    (regularization doubled then halved).  Each row lists |beta|^2, |sigma|^2
    and purities plus relative changes against the previous row.
    """
    if axis not in ("grid_n", "grid_span", "epsilon"):
        raise ConfigError(f"unknown sweep axis {axis!r}")
    rows: list[dict] = []
    prev = None
    for step in range(3):
        cfg = copy.deepcopy(config)
        cfg.numerics.check_convergence = False
        if axis == "grid_n":
            cfg.grids.signal_n = max(8, config.grids.signal_n // 2 * (2 ** step))
            label = f"signal_n={cfg.grids.signal_n}"
        elif axis == "grid_span":
            cfg.grids.signal_span = config.grids.signal_span / 2.0 * (2 ** step)
            label = f"signal_span={cfg.grids.signal_span:g}"
        else:
            cfg.numerics.epsilon = config.numerics.epsilon * 2.0 / (2.0 ** step)
            label = f"epsilon={cfg.numerics.epsilon:g}"
        with tempfile.TemporaryDirectory() as tmp:
            man = run(cfg, out_dir=tmp)
        row = {"setting": label, **_headline(man)}
        if prev is not None:
            for key in ("beta2", "sigma2", "p1", "p2", "p3"):
                base = prev[key]
                row[f"drift_{key}"] = (abs(row[key] - base) / abs(base)
                                       if base else 0.0)
        rows.append(row)
        prev = row
    return rows
