"""Nonlinear interaction kernels and the effective nonlinear parameter.

The two four-wave-mixing kernels factorize into a scalar prefactor times a
product of the per-band reduced field coefficients:

    K1^{ll'}(k1..k4) = C1 [D_S1^{out,l}(k1) D_I^{out,l'}(k2)]* D_P1^{in}(k3) D_P1^{in}(k4)
    K2^{mm'n}(k1..k4) = C2 [D_S2^{out,m}(k1) D_S3^{out,m'}(k2)]* D_I^{out,n}(k3) D_P2^{in}(k4)

with C1 = hbar^2 sqrt(w_S1 w_I) v_P1^2 L1 g1 / (4 pi^2) and
C2 = hbar^2 sqrt(w_S2 w_S3) v_I v_P2 L2 g2 / (2 pi^2); the relative factor of
two traces back to the quartic-Hamiltonian combinatorics (4!/1! vs 4!/2!).
The nonlinear parameters g (gamma_NL) are normally scalar inputs; they can
also be computed from ingested cross-sectional mode profiles with the cubic
chi3 tensor under Kleinman symmetry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constants import C_VACUUM, EPSILON_0, HBAR
from .device import (BandId, ChannelId, DeviceSpec, asymptotic_coefficient)


@dataclass(frozen=True)
class Chi3Tensor:
    """chi3 of the cubic 4-bar 3m class under Kleinman symmetry.

    One independent component chi_bar; the index structure coincides with the
    isotropic form (delta_ij delta_kl + delta_ik delta_jl + delta_il delta_jk)/3,
    which is what makes the contraction rotation-invariant.  21 nonzero
    entries: the three diagonals equal chi_bar, every distinct-pair permutation
    entry equals chi_bar / 3.
    """

    chi_bar: float  # [m^2/V^2]

    def components(self) -> np.ndarray:
        """Full (3,3,3,3) component array."""
        d = np.eye(3)
        s = (np.einsum("ij,kl->ijkl", d, d)
             + np.einsum("ik,jl->ijkl", d, d)
             + np.einsum("il,jk->ijkl", d, d)) / 3.0
        return self.chi_bar * s

    def contract(self, e1c, e2c, e3, e4) -> np.ndarray:
        """chi_ijkl e1c_i e2c_j e3_k e4_l for fields of shape (..., 3).

        e1c, e2c are supplied already conjugated by the caller when needed.
        """
        dot = lambda a, b: np.sum(a * b, axis=-1)
        return (self.chi_bar / 3.0) * (
            dot(e1c, e2c) * dot(e3, e4)
            + dot(e1c, e3) * dot(e2c, e4)
            + dot(e1c, e4) * dot(e2c, e3)
        )


@dataclass
class ModeProfileGrid:
    """Cross-sectional mode data on a rectilinear cell-centered grid.

    ``e`` holds the complex field samples with shape (nx, nz, 3); ``eps`` the
    relative permittivity and ``vp``/``vg`` the local phase/group velocity
    maps used by the mode-normalization convention
    int (vp/vg) eps0 eps |e|^2 dA = 1.  Integrals use the midpoint rule
    (samples at cell centers).
    """

    dx: float
    dz: float
    e: np.ndarray
    eps: np.ndarray
    vp: np.ndarray | None = None
    vg: np.ndarray | None = None

    def __post_init__(self):
        if self.dx <= 0 or self.dz <= 0:
            raise ValueError("grid spacings must be positive")
        self.e = np.asarray(self.e, dtype=complex)
        if self.e.ndim != 3 or self.e.shape[-1] != 3:
            raise ValueError("field array must have shape (nx, nz, 3)")
        self.eps = np.asarray(self.eps, dtype=float)
        if self.eps.shape != self.e.shape[:2]:
            raise ValueError("eps shape mismatch")
        if self.vp is None:
            self.vp = C_VACUUM / np.sqrt(self.eps)
        if self.vg is None:
            self.vg = C_VACUUM / np.sqrt(self.eps)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dz

    def norm_integral(self) -> float:
        """int (vp/vg) eps0 eps |e|^2 dA; unity for a normalized mode."""
        dens = (self.vp / self.vg) * EPSILON_0 * self.eps * np.sum(
            np.abs(self.e) ** 2, axis=-1)
        return float(np.sum(dens) * self.cell_area)

    def normalized(self) -> "ModeProfileGrid":
        scale = 1.0 / np.sqrt(self.norm_integral())
        return ModeProfileGrid(self.dx, self.dz, self.e * scale, self.eps,
                               self.vp, self.vg)

    def check_normalization(self, tol: float = 1e-3) -> None:
        err = abs(self.norm_integral() - 1.0)
        if err > tol:
            raise ValueError(
                f"mode normalization off by {err:.2e} (> {tol}); "
                "re-ingest with normalize=true")


def gamma_nl(modes, band_specs, chi3: Chi3Tensor) -> tuple[float, float]:
    """Effective nonlinear parameter from four mode profiles [ (W m)^-1 ].

    ``modes`` maps each of the four slots (u1, u2, u3, u4) = (created,
    created', annihilated, annihilated') to a ModeProfileGrid (a single grid
    may be shared); ``band_specs`` is the matching 4-tuple of BandSpec.  For
    phase-matched resonance orders the azimuthal integral cancels the
    circumference and the cross-section integral

        g = 3 chi_bar eps0 sqrt(w3 w4) / (4 v3 v4) *
            int dA (chi_ijkl/chi_bar) [e1_i e2_j]* e3_k e4_l

    remains.  Returns (real part, imaginary residual relative to |g|); the
    residual must vanish for reciprocal mode data.
    """
    grids = list(modes)
    ref = grids[0]
    for g in grids[1:]:
        if (g.e.shape != ref.e.shape or g.dx != ref.dx or g.dz != ref.dz):
            raise ValueError("mode profiles must share one grid")
    e1, e2, e3, e4 = (g.e for g in grids)
    b3, b4 = band_specs[2], band_specs[3]
    w3 = b3.center_angular_frequency
    w4 = b4.center_angular_frequency
    overlap = np.sum(chi3.contract(np.conj(e1), np.conj(e2), e3, e4)) * ref.cell_area
    val = 3.0 * EPSILON_0 * np.sqrt(w3 * w4) / (
        4.0 * b3.group_velocity * b4.group_velocity) * overlap
    mag = abs(val)
    resid = abs(val.imag) / mag if mag > 0 else 0.0
    return float(val.real), float(resid)


def load_mode_profile(manifest_path: str | Path,
                      normalize: bool = True) -> ModeProfileGrid:
    """Read a mode profile from a manifest-described raw binary bundle.

    The manifest is a JSON document with grid spacings ``dx_m``/``dz_m`` and an
    array catalog naming ``ex``, ``ey``, ``ez`` (complex128, shape [nx, nz]),
    ``eps`` (float64) and optional ``vp``/``vg`` maps, stored as little-endian
    row-major raw files next to the manifest.
    """
    manifest_path = Path(manifest_path)
    meta = json.loads(manifest_path.read_text(encoding="utf-8"))
    folder = manifest_path.parent

    def read(name, dtype):
        entry = meta["arrays"][name]
        arr = np.fromfile(folder / entry["file"], dtype=np.dtype(dtype).newbyteorder("<"))
        return arr.reshape(entry["shape"])

    ex = read("ex", "complex128")
    ey = read("ey", "complex128")
    ez = read("ez", "complex128")
    eps = read("eps", "float64")
    vp = read("vp", "float64") if "vp" in meta["arrays"] else None
    vg = read("vg", "float64") if "vg" in meta["arrays"] else None
    grid = ModeProfileGrid(dx=float(meta["dx_m"]), dz=float(meta["dz_m"]),
                           e=np.stack([ex, ey, ez], axis=-1), eps=eps,
                           vp=vp, vg=vg)
    if normalize:
        return grid.normalized()
    grid.check_normalization()
    return grid


@dataclass(frozen=True)
class KernelFactors:
    """Factorized representation of one interaction kernel.

    ``prefactor`` is the scalar C; ``profiles`` maps each of the four slots to
    a dict channel -> complex 1D array on that slot's k-grid.  Slots 0 and 1
    enter conjugated in the kernel.  ``evaluate`` reproduces the direct
    four-argument kernel product for spot checks.
    """

    prefactor: float
    slots: tuple          # (band, direction, ring) per slot, for reference
    grids: tuple          # k arrays per slot
    profiles: tuple       # dict ChannelId -> ndarray per slot

    def evaluate(self, idx, channels) -> complex:
        """Kernel value at grid indices ``idx`` and channel choice ``channels``.

        Slots without a channel sum (the pump slots) take ChannelId.AC.
        """
        i1, i2, i3, i4 = idx
        c1, c2, c3, c4 = channels
        return self.prefactor * (
            np.conj(self.profiles[0][c1][i1] * self.profiles[1][c2][i2])
            * self.profiles[2][c3][i3] * self.profiles[3][c4][i4]
        )


def _profiles_for(dev: DeviceSpec, band: BandId, direction: str, ring: int,
                  k: np.ndarray, channels) -> dict:
    return {
        ch: asymptotic_coefficient(dev, band, direction, ch, ring, k,
                                   include_position_phase=False)
        for ch in channels
    }


def k1_prefactor(dev: DeviceSpec) -> float:
    wS1 = dev.band(BandId.S1).center_angular_frequency
    wI = dev.band(BandId.I).center_angular_frequency
    vP1 = dev.band(BandId.P1).group_velocity
    return HBAR ** 2 * np.sqrt(wS1 * wI) * vP1 * vP1 * dev.circumference(1) * \
        dev.gamma_nl1 / (4.0 * np.pi ** 2)


def k2_prefactor(dev: DeviceSpec) -> float:
    wS2 = dev.band(BandId.S2).center_angular_frequency
    wS3 = dev.band(BandId.S3).center_angular_frequency
    vI = dev.band(BandId.I).group_velocity
    vP2 = dev.band(BandId.P2).group_velocity
    return HBAR ** 2 * np.sqrt(wS2 * wS3) * vI * vP2 * dev.circumference(2) * \
        dev.gamma_nl2 / (2.0 * np.pi ** 2)


def k1_profile(dev: DeviceSpec, k_s1, k_i, k_p1) -> KernelFactors:
    """First-process kernel on the given k-grids (ring-1 coefficients)."""
    for band in (BandId.S1, BandId.I, BandId.P1):
        if not dev.hosts(1, band):
            raise ValueError(f"ring 1 must host {band.value}")
    chans = (ChannelId.AC, ChannelId.PH1, ChannelId.PH2)
    return KernelFactors(
        prefactor=k1_prefactor(dev),
        slots=((BandId.S1, "out", 1), (BandId.I, "out", 1),
               (BandId.P1, "in", 1), (BandId.P1, "in", 1)),
        grids=(np.asarray(k_s1), np.asarray(k_i), np.asarray(k_p1), np.asarray(k_p1)),
        profiles=(
            _profiles_for(dev, BandId.S1, "out", 1, np.asarray(k_s1), chans),
            _profiles_for(dev, BandId.I, "out", 1, np.asarray(k_i), chans),
            _profiles_for(dev, BandId.P1, "in", 1, np.asarray(k_p1), (ChannelId.AC,)),
            _profiles_for(dev, BandId.P1, "in", 1, np.asarray(k_p1), (ChannelId.AC,)),
        ),
    )


def k2_profile(dev: DeviceSpec, k_s2, k_s3, k_i, k_p2) -> KernelFactors:
    """Second-process kernel on the given k-grids (ring-2 coefficients).

    The idler slot uses ring-2 out-coefficients; its ph1 profile is
    identically zero, so the idler channel sum has exactly two live entries.
    """
    for band in (BandId.S2, BandId.S3, BandId.I, BandId.P2):
        if not dev.hosts(2, band):
            raise ValueError(f"ring 2 must host {band.value}")
    chans = (ChannelId.AC, ChannelId.PH1, ChannelId.PH2)
    return KernelFactors(
        prefactor=k2_prefactor(dev),
        slots=((BandId.S2, "out", 2), (BandId.S3, "out", 2),
               (BandId.I, "out", 2), (BandId.P2, "in", 2)),
        grids=(np.asarray(k_s2), np.asarray(k_s3), np.asarray(k_i), np.asarray(k_p2)),
        profiles=(
            _profiles_for(dev, BandId.S2, "out", 2, np.asarray(k_s2), chans),
            _profiles_for(dev, BandId.S3, "out", 2, np.asarray(k_s3), chans),
            _profiles_for(dev, BandId.I, "out", 2, np.asarray(k_i), chans),
            _profiles_for(dev, BandId.P2, "in", 2, np.asarray(k_p2), (ChannelId.AC,)),
        ),
    )
