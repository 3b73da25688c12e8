"""Publication-style rendering of triplet-wavefunction bundles.

The triptych view mirrors the source material: a marching-cubes isosurface of
the triplet density at a fraction of its maximum, drawn in a box whose walls
carry the three 2D marginal projections, plus the marginals as separate
panels on the dimensionless detuning axes.  The report renders a
table-shaped comparison of computed scalars against the published reference
values per configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib import cm, colors
from mpl_toolkits.mplot3d.art3d import Poly3DCollection
from skimage.measure import marching_cubes

from .reader import Bundle, marginal_deviation, validate_figure_inputs

#: published per-configuration values the report compares against
REFERENCE = {
    "A": {"sigma2": 5.94e-6, "rate_hz": 7.43, "purities": (0.974, 0.610, 0.610)},
    "B": {"sigma2": 1.54e-5, "rate_hz": 19.2, "purities": (0.982, 0.806, 0.806)},
    "C": {"sigma2": 2.52e-6, "rate_hz": 5.66, "purities": (0.995, 0.970, 0.970)},
}

MARGINAL_TOL = 1e-9


@dataclass
class FigureJob:
    manifest_path: str
    out_path: str
    threshold: float = 0.1
    elev: float = 22.0
    azim: float = -55.0
    dpi: int = 150
    check_tol: float = MARGINAL_TOL
    extra_outputs: list = field(default_factory=list)

    def __post_init__(self):
        if not 0.0 < self.threshold <= 1.0:
            raise ValueError("threshold must be in (0, 1]")


def _wall(ax, marg, axis, axes_xyz, norm, cmap):
    """Paint one marginal on the box wall perpendicular to its axis."""
    x1, x2, x3 = axes_xyz
    face = cmap(norm(marg))
    if axis == 0:     # wall at x1 = min
        Y, Z = np.meshgrid(x2, x3, indexing="ij")
        X = np.full_like(Y, x1[0])
    elif axis == 1:   # wall at x2 = max
        X, Z = np.meshgrid(x1, x3, indexing="ij")
        Y = np.full_like(X, x2[-1])
    else:             # wall at x3 = min
        X, Y = np.meshgrid(x1, x2, indexing="ij")
        Z = np.full_like(X, x3[0])
    ax.plot_surface(X, Y, Z, rstride=1, cstride=1, facecolors=face,
                    shade=False, zorder=1)


def render_twf_figure(job: FigureJob) -> list:
    """Render the isosurface-plus-projections figure; returns written paths."""
    bundle = _load_checked(job.manifest_path, job.check_tol)
    dens = bundle.array("density_x")
    axes_xyz = tuple(bundle.array(f"axis_x{i}") for i in (1, 2, 3))
    margs = (bundle.array("marginal_x2_x3"), bundle.array("marginal_x1_x3"),
             bundle.array("marginal_x1_x2"))

    level = job.threshold * dens.max()
    spacing = tuple(float(a[1] - a[0]) for a in axes_xyz)
    cmap = cm.viridis
    norm = colors.Normalize(vmin=0.0, vmax=max(m.max() for m in margs))

    fig = plt.figure(figsize=(11, 9))
    ax3 = fig.add_subplot(2, 2, 1, projection="3d")
    try:
        verts, faces, _, _ = marching_cubes(dens, level=level, spacing=spacing)
        verts += np.array([a[0] for a in axes_xyz])
        mesh = Poly3DCollection(verts[faces], alpha=0.85)
        mesh.set_facecolor("crimson")
        mesh.set_edgecolor("none")
        ax3.add_collection3d(mesh)
    except (ValueError, RuntimeError):
        # degenerate threshold (e.g. 1.0): mark the maximum voxel instead
        idx = np.unravel_index(np.argmax(dens), dens.shape)
        ax3.scatter(*[axes_xyz[d][idx[d]] for d in range(3)],
                    color="crimson", s=60)
    for axis in range(3):
        _wall(ax3, margs[axis], axis, axes_xyz, norm, cmap)
    ax3.set_xlim(axes_xyz[0][0], axes_xyz[0][-1])
    ax3.set_ylim(axes_xyz[1][0], axes_xyz[1][-1])
    ax3.set_zlim(axes_xyz[2][0], axes_xyz[2][-1])
    ax3.set_xlabel(r"$x_1$")
    ax3.set_ylabel(r"$x_2$")
    ax3.set_zlabel(r"$x_3$")
    ax3.view_init(elev=job.elev, azim=job.azim)
    preset = bundle.preset or "custom"
    ax3.set_title(f"config {preset}: isosurface at "
                  f"{job.threshold:.0%} of max")

    panel_specs = (
        (margs[0], r"$x_2$", r"$x_3$", axes_xyz[1], axes_xyz[2],
         r"$\int |\Psi|^2 \, dx_1$"),
        (margs[1], r"$x_1$", r"$x_3$", axes_xyz[0], axes_xyz[2],
         r"$\int |\Psi|^2 \, dx_2$"),
        (margs[2], r"$x_1$", r"$x_2$", axes_xyz[0], axes_xyz[1],
         r"$\int |\Psi|^2 \, dx_3$"),
    )
    for pos, (marg, lx, ly, ax_x, ax_y, label) in enumerate(panel_specs, start=2):
        ax = fig.add_subplot(2, 2, pos)
        im = ax.pcolormesh(ax_x, ax_y, marg.T, cmap=cmap, norm=norm,
                           shading="nearest")
        ax.set_xlabel(lx)
        ax.set_ylabel(ly)
        ax.set_aspect("equal")
        fig.colorbar(im, ax=ax, label=label)
    fig.tight_layout()

    out = Path(job.out_path)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, dpi=job.dpi)
    plt.close(fig)
    written = [out]
    for extra in job.extra_outputs:
        written.append(Path(extra))
    return written


def _load_checked(manifest_path, tol) -> Bundle:
    from .reader import load_bundle
    bundle = load_bundle(manifest_path)
    validate_figure_inputs(bundle)
    dev = marginal_deviation(bundle)
    if dev > tol:
        raise ValueError(
            f"stored marginals deviate from the density array by {dev:.2e} "
            f"(> {tol}); bundle corrupt or mis-deserialized")
    return bundle


def render_report(bundles) -> str:
    """Table-shaped comparison of computed scalars vs published references."""
    bundles = list(bundles)
    if not bundles:
        raise ValueError("no manifests given")
    cols = []
    for b in bundles:
        s = b.scalars
        for key in ("sigma2", "purity_p1", "purity_p2", "purity_p3",
                    "triplet_rate_hz", "beta2"):
            if key not in s or s[key] is None:
                raise ValueError(f"manifest scalars lack {key!r}")
        preset = b.preset
        ref = REFERENCE.get(preset, None)
        cols.append((preset or "custom", s, ref))

    def fmt_delta(got, want):
        if want in (None, 0):
            return "     -"
        return f"{(got / want - 1) * 100:+6.1f}%"

    lines = []
    header = f"{'quantity':<24}" + "".join(f"{name:>24}" for name, _, _ in cols)
    lines.append(header)
    lines.append("-" * len(header))
    rows = [
        ("|beta|^2", "beta2", None),
        ("|sigma|^2", "sigma2", "sigma2"),
        ("purity p1", "purity_p1", ("purities", 0)),
        ("purity p2", "purity_p2", ("purities", 1)),
        ("purity p3", "purity_p3", ("purities", 2)),
        ("rate [Hz]", "triplet_rate_hz", "rate_hz"),
    ]
    for label, key, refkey in rows:
        cells = []
        for _, s, ref in cols:
            got = s[key]
            want = None
            if ref is not None and refkey is not None:
                want = (ref[refkey[0]][refkey[1]] if isinstance(refkey, tuple)
                        else ref[refkey])
            val = f"{got:.3e}" if abs(got) < 1e-2 else f"{got:.4f}"
            cells.append(f"{val:>14} {fmt_delta(got, want):>9}")
        lines.append(f"{label:<24}" + "".join(f"{c:>24}" for c in cells))
    lines.append("")
    lines.append("delta columns compare against the published per-"
                 "configuration values where available")
    return "\n".join(lines)
