"""Post-processing of the triplet amplitude.

Single-photon reduced density matrices and their purities quantify how close
the post-selected (all-bus) triplet state is to a product of one supermode
per photon.  Quadrature weights enter the unfoldings as sqrt(w) row/column
scalings so the discrete purity is the discretization of the continuum
Tr rho^2 and converges under grid refinement.  The module also carries the
triplet-rate arithmetic and the marginal/isosurface exports used by the
figure tool.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .device import BandId, ChannelId, DeviceSpec
from .wavefunctions import TriphotonAmplitude


def _weighted_tensor(psi: np.ndarray, weights) -> np.ndarray:
    w1, w2, w3 = weights
    return (psi * np.sqrt(w1)[:, None, None] * np.sqrt(w2)[None, :, None]
            * np.sqrt(w3)[None, None, :])


def _unfold(t: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(t, axis, 0).reshape(t.shape[axis], -1)


def reduced_density(amp: TriphotonAmplitude, axis: int,
                    norm_tol: float = 1e-6) -> np.ndarray:
    """Single-photon reduced density matrix rho^(axis) of the post-selected state.

    ``axis`` is 1, 2 or 3; the other two photons are traced out with
    quadrature weights.  The returned matrix is Hermitian, positive
    semidefinite and unit trace, in the sqrt(w)-scaled discrete basis.
    """
    if axis not in (1, 2, 3):
        raise ValueError("axis must be 1, 2 or 3")
    if amp.psi_acacac is None:
        raise ValueError("amplitude has no post-selected state")
    t = _weighted_tensor(amp.psi_acacac, amp.weights())
    total = float(np.sum(np.abs(t) ** 2))
    if abs(total - 1.0) > norm_tol:
        raise ValueError(f"post-selected amplitude is not normalized "
                         f"(norm^2 = {total:.6g})")
    m = _unfold(t, axis - 1)
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


@dataclass(frozen=True)
class PurityReport:
    """Purities and Schmidt spectra of the three single-photon unfoldings."""

    p1: float
    p2: float
    p3: float
    schmidt: tuple          # three descending singular-value arrays, L2-normalized
    trace_path: tuple       # purities recomputed as Tr(rho^2), cross-check
    grid_shape: tuple

    @property
    def values(self) -> tuple:
        return (self.p1, self.p2, self.p3)


def purity_of_tensor(psi: np.ndarray, weights) -> PurityReport:
    """Purity report for an arbitrary normalized rank-3 amplitude."""
    t = _weighted_tensor(psi, weights)
    t = t / np.linalg.norm(t)
    ps, spectra, tr = [], [], []
    for axis in range(3):
        m = _unfold(t, axis)
        s = np.linalg.svd(m, compute_uv=False)
        s2 = s * s
        ps.append(float(np.sum(s2 * s2) / np.sum(s2) ** 2))
        spectra.append(np.sort(s)[::-1] / np.sqrt(np.sum(s2)))
        rho = m @ m.conj().T
        rho = rho / np.trace(rho).real
        tr.append(float(np.trace(rho @ rho).real))
    return PurityReport(p1=ps[0], p2=ps[1], p3=ps[2], schmidt=tuple(spectra),
                        trace_path=tuple(tr), grid_shape=psi.shape)


def purity(amp: TriphotonAmplitude) -> PurityReport:
    """Purities p1, p2, p3 of the post-selected all-bus triplet state."""
    if amp.psi_acacac is None:
        raise ValueError("amplitude has no post-selected state")
    return purity_of_tensor(amp.psi_acacac, amp.weights())


@dataclass(frozen=True)
class RateReport:
    """Triplet rate bookkeeping at the chip output and after external loss."""

    sigma2: float
    repetition_rate: float
    eta_product: float
    rate_hz: float
    external_loss_db: float
    detected_rate_hz: float


def triplet_rate(sigma2: float, dev: DeviceSpec, repetition_rate: float,
                 external_loss_db: float = 0.0) -> RateReport:
    """R3 = R_R * eta_S1^{ac(1)} eta_S2^{ac(2)} eta_S3^{ac(2)} * |sigma|^2."""
    if sigma2 < 0 or repetition_rate < 0 or external_loss_db < 0:
        raise ValueError("inputs must be non-negative")
    eta = (dev.resonance(1, BandId.S1).eta_ac
           * dev.resonance(2, BandId.S2).eta_ac
           * dev.resonance(2, BandId.S3).eta_ac)
    rate = repetition_rate * eta * sigma2
    detected = rate * 10.0 ** (-external_loss_db / 10.0)
    return RateReport(sigma2=sigma2, repetition_rate=repetition_rate,
                      eta_product=eta, rate_hz=rate,
                      external_loss_db=external_loss_db,
                      detected_rate_hz=detected)


@dataclass
class IsosurfaceBundle:
    """|psi|^2 on dimensionless axes plus marginals and a threshold mask."""

    axes: tuple             # x1, x2, x3 (1D arrays)
    density: np.ndarray     # |psi|^2 rescaled to unit integral in x units
    marginals: tuple        # integral over x1 -> (n2,n3), over x2, over x3
    mask: np.ndarray        # density >= threshold * max
    threshold: float


def projections_and_isosurface(amp: TriphotonAmplitude,
                               threshold: float = 0.1) -> IsosurfaceBundle:
    """Figure-ready exports of the post-selected density.

    The density is expressed on the dimensionless axes
    x_i = v_i (k_i - K_i) / Gamma_i and rescaled to integrate to one there;
    each 2D marginal integrates one axis out; the boolean mask marks voxels
    at or above ``threshold`` times the maximum.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must be in (0, 1]")
    if amp.psi_acacac is None:
        raise ValueError("amplitude has no post-selected state")
    grids = (amp.grid_s1, amp.grid_s2, amp.grid_s3)
    axes = tuple(g.x for g in grids)
    # dk = dx * gamma/v per axis: |psi|^2 dk^3 = |psi|^2 (prod gamma/v) dx^3
    jac = np.prod([g.gamma_ref / g.band.group_velocity for g in grids])
    dens = np.abs(amp.psi_acacac) ** 2 * jac
    wx = [np.full(g.n, g.x[1] - g.x[0]) for g in grids]
    for w in wx:
        w[0] *= 0.5
        w[-1] *= 0.5
    m1 = np.einsum("i,ijl->jl", wx[0], dens)
    m2 = np.einsum("j,ijl->il", wx[1], dens)
    m3 = np.einsum("l,ijl->ij", wx[2], dens)
    mask = dens >= threshold * dens.max()
    return IsosurfaceBundle(axes=axes, density=dens, marginals=(m1, m2, m3),
                            mask=mask, threshold=threshold)
