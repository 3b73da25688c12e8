"""Brute-force reference evaluation of the pair and triplet amplitudes.

This path exists to certify the factorized engine: it evaluates the same
analytically time-reduced integrands by direct nested quadrature over all
remaining wavenumber variables, rebuilding every coefficient inline from the
device operations, with no precomputed convolution or resolvent tables and no
regrouping of the pump double sum.  It shares only the primitive coefficient
evaluators, the pump spectra, and the singularity-subtracted definition of
the resolvent quadrature (part of the fixed time-integral treatment, not of
the factorization under test).  Runtimes are cubic-to-quartic in grid size;
use small grids.
"""

from __future__ import annotations

import numpy as np

from .constants import HBAR
from .device import BandId, ChannelId, CHANNEL_ORDER, DeviceSpec, asymptotic_coefficient
from .kernels import k1_prefactor, k2_prefactor
from .pump import PumpSpectrum
from .wavefunctions import (GridSet, KGrid, _band_center_mismatches)


def _coef(dev, band, direction, channel, ring, k):
    return asymptotic_coefficient(dev, band, direction, channel, ring, k,
                                  include_position_phase=False)


def _conj_out_profile(dev, band, ring, grid: KGrid):
    return {ch: np.conj(asymptotic_coefficient(dev, band, "out", ch, ring,
                                               grid.k,
                                               include_position_phase=True))
            for ch in CHANNEL_ORDER}


def bwf_core_direct(dev: DeviceSpec, pump1: PumpSpectrum,
                    grids: GridSet) -> np.ndarray:
    """Channel-independent pair core by per-point pump quadrature."""
    d1c, _ = _band_center_mismatches(dev)
    vP1 = dev.band(BandId.P1).group_velocity
    pg = grids.pump1
    phi_p = pump1.phi(pg.k)
    d_p = _coef(dev, BandId.P1, "in", ChannelId.AC, 1, pg.k)
    q = pg.k - pg.band.reference_wavenumber
    K_p = pg.band.reference_wavenumber

    pref = 2.0 * np.pi * pump1.alpha ** 2 * k1_prefactor(dev) / (HBAR * vP1)
    n1, n2 = grids.s1.n, grids.idler_out.n
    core = np.empty((n1, n2), dtype=complex)
    for i in range(n1):
        for j in range(n2):
            s = (grids.s1.detuning[i] + grids.idler_out.detuning[j] - d1c) / vP1
            k4 = K_p + (s - q)
            val = np.sum(pg.weights_k * d_p * phi_p
                         * _coef(dev, BandId.P1, "in", ChannelId.AC, 1, k4)
                         * pump1.phi(k4))
            core[i, j] = pref * val
    return core


def _resolvent_direct(dev: DeviceSpec, grid: KGrid, eps_abs: float, x: float) -> complex:
    """Singularity-subtracted resolvent integral at a single argument."""
    band = dev.band(BandId.I)
    v = band.group_velocity
    K = band.reference_wavenumber

    def product(k):
        out = np.zeros(np.shape(k), dtype=complex)
        for nu in CHANNEL_ORDER:
            out = out + (np.conj(_coef(dev, BandId.I, "out", nu, 1, k))
                         * _coef(dev, BandId.I, "out", nu, 2, k))
        return out

    y = v * (grid.k - K)
    P = product(grid.k)
    Px = complex(product(np.array([K + x / v]))[0])
    ie = 1j * eps_abs
    val = np.sum(grid.weights_k * (P - Px) * 1j / (x - y + ie))
    val += Px * (1j / v) * (np.log(x - y[0] + ie) - np.log(x - y[-1] + ie))
    return complex(val)


def twf_core_direct(dev: DeviceSpec, pump1: PumpSpectrum, pump2: PumpSpectrum,
                    grids: GridSet, epsilon: float = 1e-3) -> np.ndarray:
    """Channel-independent triplet core by direct nested quadrature.

    For each output voxel the pump-1 double sum runs over all (k3, k4) grid
    pairs; the energy delta fixes the pump-2 wavenumber (pulsed) or the
    pump-1 total (CW); the idler integral is evaluated afresh at every
    resolvent argument.
    """
    d1c, d2c = _band_center_mismatches(dev)
    dg = d1c + d2c
    vP1 = dev.band(BandId.P1).group_velocity
    vP2 = dev.band(BandId.P2).group_velocity
    eps_abs = epsilon * dev.resonance(1, BandId.I).gamma_total

    pg = grids.pump1
    phi_p = pump1.phi(pg.k)
    d_p = _coef(dev, BandId.P1, "in", ChannelId.AC, 1, pg.k)
    wphi = pg.weights_k * d_p * phi_p
    q = pg.k - pg.band.reference_wavenumber
    K2 = dev.band(BandId.P2).reference_wavenumber

    c12 = k1_prefactor(dev) * k2_prefactor(dev)
    e1 = grids.s1.detuning
    e2 = grids.s2.detuning
    e3 = grids.s3.detuning
    n1, n2, n3 = grids.s1.n, grids.s2.n, grids.s3.n
    core = np.empty((n1, n2, n3), dtype=complex)

    # resolvent argument depends on the pump pair only through q_i + q_j;
    # still evaluate per pair, caching nothing across voxels beyond this row
    if pump2.is_cw:
        pref = (2.0 * np.pi * pump1.alpha ** 2 * pump2.cw_amplitude * c12
                / (HBAR ** 2 * vP1))
        pref *= complex(_coef(dev, BandId.P2, "in", ChannelId.AC, 2,
                              np.array([pump2.center_k]))[0])
        delta_cw = vP2 * (pump2.center_k - K2)
        for i in range(n1):
            for j in range(n2):
                for l in range(n3):
                    etot = e1[i] + e2[j] + e3[l] - dg - delta_cw
                    s = etot / vP1
                    k4 = pg.band.reference_wavenumber + (s - q)
                    conv = np.sum(wphi * _coef(dev, BandId.P1, "in",
                                               ChannelId.AC, 1, k4)
                                  * pump1.phi(k4))
                    R = _resolvent_direct(dev, grids.idler_contraction,
                                          eps_abs, etot + d1c - e1[i])
                    core[i, j, l] = pref * conv * R
        return core

    pref = (2.0 * np.pi * pump1.alpha ** 2 * pump2.alpha * c12
            / (HBAR ** 2 * vP2))
    npg = pg.n
    for i in range(n1):
        # resolvent at every pump-pair total for this slice
        rvals = np.empty((npg, npg), dtype=complex)
        for a in range(npg):
            for b in range(npg):
                x = d1c + vP1 * (q[a] + q[b]) - e1[i]
                rvals[a, b] = _resolvent_direct(dev, grids.idler_contraction,
                                                eps_abs, x)
        wmat = np.outer(wphi, wphi) * rvals
        for j in range(n2):
            for l in range(n3):
                E = e1[i] + e2[j] + e3[l]
                q2 = (E - dg - vP1 * (q[:, None] + q[None, :])) / vP2
                k2 = K2 + q2
                p2 = (_coef(dev, BandId.P2, "in", ChannelId.AC, 2, k2)
                      * pump2.phi(k2))
                core[i, j, l] = pref * np.sum(wmat * p2)
    return core


def twf_slices_direct(dev, pump1, pump2, grids, epsilon=1e-3):
    """Unnormalized channel-triple amplitudes and |sigma|^2, brute force."""
    core = twf_core_direct(dev, pump1, pump2, grids, epsilon)
    prof = (
        _conj_out_profile(dev, BandId.S1, 1, grids.s1),
        _conj_out_profile(dev, BandId.S2, 2, grids.s2),
        _conj_out_profile(dev, BandId.S3, 2, grids.s3),
    )
    w = (grids.s1.weights_k, grids.s2.weights_k, grids.s3.weights_k)
    sigma2 = 0.0
    slices = {}
    for c1 in CHANNEL_ORDER:
        for c2 in CHANNEL_ORDER:
            for c3 in CHANNEL_ORDER:
                t = (prof[0][c1][:, None, None] * prof[1][c2][None, :, None]
                     * prof[2][c3][None, None, :] * core)
                slices[(c1, c2, c3)] = t
                sigma2 += float(np.einsum("i,j,l,ijl->", w[0], w[1], w[2],
                                          np.abs(t) ** 2))
    return core, slices, sigma2
