"""Biphoton and triphoton spectral amplitudes.

The first process creates signal-1/idler pairs in ring 1; the second consumes
the idler in ring 2 together with a second pump, leaving a signal-1/2/3
triplet.  After the interaction-picture time integrals are done analytically
(a total-energy delta plus the causal resolvent ``i / (Omega_1 + i eps)``
from adiabatic switching), both amplitudes factorize into per-axis channel
profiles times a channel-independent core built from three precomputable 1D
objects: the pump-1 self-convolution, the pump-2 spectral profile, and the
idler-exchange resolvent integral between the two rings.

Conventions fixed here and relied on elsewhere:

* pair amplitude  B^{ll'}(k1,k2) = conj(D_S1^{out,l}(k1) D_I^{out,l'}(k2))
  x (2 pi i a1^2 C1 / (hbar v_P1)) Conv(s),  s = (dS1 + dI - D1c)/v_P1,
  with Conv the pump self-convolution over wavenumber detunings;
* triplet amplitude core (pulsed pump 2), per output voxel with total
  detuning E = dS1 + dS2 + dS3:
  (2 pi a1^2 a2 C1 C2 / (hbar^2 v_P2)) *
  sum_u Conv2[u] Phi2((E - Dg - v_P1 u)/v_P2) R(D1c + v_P1 u - dS1)
  where Conv2 is the doubly-weighted discrete self-convolution and R the
  resolvent integral; a CW pump 2 instead pins the pump-1 total energy:
  (2 pi a1^2 A_cw D2(K2) C1 C2 / (hbar^2 v_P1)) Conv(u*) R(D1c + E' - dS1);
* |beta|^2, |sigma|^2 are the squared norms of the unnormalized amplitudes,
  beta and sigma taken real positive;
* coupling-position phases appear only as exact per-axis factors on the
  output profiles; pump envelopes are referenced to their own ring's coupling
  point and the idler transit phase between rings is neglected
  (an O(Gamma a / v) ~ 1e-3 retardation), which makes every reported scalar
  independent of the separation parameter.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .constants import HBAR
from .device import (BandId, BandSpec, ChannelId, CHANNEL_ORDER, DeviceSpec,
                     asymptotic_coefficient)
from .kernels import k1_prefactor, k2_prefactor
from .pump import PumpSpectrum


class ConvergenceError(RuntimeError):
    """A numerical-convergence contract was violated."""


@dataclass
class KGrid:
    """Uniform per-band wavenumber grid in dimensionless detuning units.

    x = v (k - K) / gamma_ref covers [-span, span] with n points; trapezoid
    weights in k sum to the full span 2 * span * gamma_ref / v.
    """

    band: BandSpec
    gamma_ref: float
    n: int
    span: float
    x: np.ndarray = field(init=False)
    k: np.ndarray = field(init=False)
    detuning: np.ndarray = field(init=False)
    weights_k: np.ndarray = field(init=False)

    def __post_init__(self):
        if self.n < 8:
            raise ValueError("grid needs n >= 8")
        if self.span <= 0 or self.gamma_ref <= 0:
            raise ValueError("span and gamma_ref must be positive")
        idx = np.arange(self.n, dtype=float) - (self.n - 1) / 2.0
        dx = 2.0 * self.span / (self.n - 1)
        self.x = idx * dx
        self.detuning = self.x * self.gamma_ref
        v = self.band.group_velocity
        self.k = self.band.reference_wavenumber + self.detuning / v
        dk = dx * self.gamma_ref / v
        w = np.full(self.n, dk)
        w[0] *= 0.5
        w[-1] *= 0.5
        self.weights_k = w

    @property
    def dk(self) -> float:
        return float(self.weights_k[1])


@dataclass
class GridSet:
    """All grids of one simulation run."""

    s1: KGrid
    s2: KGrid
    s3: KGrid
    idler_out: KGrid
    idler_contraction: KGrid
    pump1: KGrid

    @classmethod
    def build(cls, dev: DeviceSpec, pump1_spectrum: PumpSpectrum | None = None,
              signal_n: int = 64, signal_span: float = 8.0,
              idler_out_n: int = 64, idler_out_span: float = 8.0,
              contraction_n: int = 256, contraction_span: float = 16.0,
              pump_n: int = 256, pump_span: float = 16.0,
              pump_auto_widen: bool = True) -> "GridSet":
        def res_gamma(ring, band):
            return dev.resonance(ring, band).gamma_total

        gI = max(res_gamma(1, BandId.I), res_gamma(2, BandId.I))
        gP1 = res_gamma(1, BandId.P1)

        span_p, n_p = pump_span, pump_n
        if pump1_spectrum is not None and not pump1_spectrum.is_cw:
            sigma_e = pump1_spectrum.sigma_k * dev.band(BandId.P1).group_velocity
            needed = (4.5 * sigma_e + 8.0 * gP1) / gP1
            if pump_auto_widen and needed > span_p:
                n_p = int(np.ceil(n_p * needed / span_p))
                span_p = float(needed)
        return cls(
            s1=KGrid(dev.band(BandId.S1), res_gamma(1, BandId.S1), signal_n, signal_span),
            s2=KGrid(dev.band(BandId.S2), res_gamma(2, BandId.S2), signal_n, signal_span),
            s3=KGrid(dev.band(BandId.S3), res_gamma(2, BandId.S3), signal_n, signal_span),
            idler_out=KGrid(dev.band(BandId.I), res_gamma(1, BandId.I),
                            idler_out_n, idler_out_span),
            idler_contraction=KGrid(dev.band(BandId.I), gI, contraction_n,
                                    contraction_span),
            pump1=KGrid(dev.band(BandId.P1), gP1, n_p, span_p),
        )


def _band_center_mismatches(dev: DeviceSpec) -> tuple[float, float]:
    w = {b: dev.band(b).center_angular_frequency for b in BandId}
    d1 = 2.0 * w[BandId.P1] - w[BandId.S1] - w[BandId.I]
    d2 = w[BandId.I] + w[BandId.P2] - w[BandId.S2] - w[BandId.S3]
    return d1, d2


class Pump1Tables:
    """Pump-1 drive profile and its self-convolution on the pump grid.

    Phi(q) = D_P1^{in,ac(1)}(K+q) phi(K+q) over wavenumber detunings q; the
    doubly-weighted discrete convolution represents the exact double
    quadrature sum over (q3, q4) regrouped by total wavenumber, and
    ``conv_at`` evaluates the singly-weighted convolution at arbitrary total
    detuning (used when an energy delta pins the total).
    """

    def __init__(self, dev: DeviceSpec, pump: PumpSpectrum, grid: KGrid):
        if pump.is_cw:
            raise ValueError("pump 1 must be pulsed")
        if pump.alpha <= 0:
            raise ValueError("pump amplitude is zero: pair amplitude undefined")
        self.dev = dev
        self.pump = pump
        self.grid = grid
        K = grid.band.reference_wavenumber
        self.q = grid.k - K
        self.dq = float(self.q[1] - self.q[0])
        self.Phi = self._phi_at(self.q)
        self.wPhi = grid.weights_k * self.Phi
        n = grid.n
        self.u = (np.arange(2 * n - 1, dtype=float) - (n - 1)) * self.dq
        self.Gw = np.convolve(self.wPhi, self.wPhi)

    def _phi_at(self, q) -> np.ndarray:
        k = self.grid.band.reference_wavenumber + np.asarray(q, dtype=float)
        D = asymptotic_coefficient(self.dev, BandId.P1, "in", ChannelId.AC, 1,
                                   k, include_position_phase=False)
        return D * self.pump.phi(k)

    def conv_at(self, s) -> np.ndarray:
        """sum_i w_i Phi(q_i) Phi(s - q_i) at arbitrary total detuning s."""
        s = np.asarray(s, dtype=float)
        flat = s.ravel()
        acc = np.zeros(flat.shape, dtype=complex)
        for i in range(self.grid.n):
            acc += self.wPhi[i] * self._phi_at(flat - self.q[i])
        return acc.reshape(s.shape)

    def coverage_check(self, max_outside: float = 1e-3) -> float:
        half = float(self.q[-1] - (self.pump.center_k
                                   - self.grid.band.reference_wavenumber))
        half = min(half, float((self.pump.center_k
                                - self.grid.band.reference_wavenumber) - self.q[0]))
        outside = self.pump.energy_fraction_outside(half)
        if outside > max_outside:
            raise ConvergenceError(
                f"pump grid truncates {outside:.2e} of the pump energy "
                f"(limit {max_outside}); widen the pump grid span")
        return outside


class IdlerResolvent:
    """Resolvent integral over the idler exchange between the rings.

    R(x) = sum_nu int dk P_nu(k) * i / (x - d_I(k) + i eps_abs) with
    P_nu(k) = conj(D_I^{out,nu(1)}(k)) D_I^{out,nu(2)}(k); the integrable
    near-singularity at d_I(k) = x is subtracted analytically, so coarse
    Lorentzian-scale grids remain accurate for eps much smaller than the
    grid spacing.  The ph1 term vanishes identically (no path from ring 2
    back to ring 1's phantom port).
    """

    def __init__(self, dev: DeviceSpec, grid: KGrid, eps_abs: float):
        if eps_abs <= 0:
            raise ValueError("regularization must be positive")
        self.dev = dev
        self.grid = grid
        self.eps = eps_abs
        band = dev.band(BandId.I)
        self.v = band.group_velocity
        self.K = band.reference_wavenumber
        self.y = band.group_velocity * (grid.k - self.K)
        self.P = self._product_at_k(grid.k)
        self.wk = grid.weights_k

    def _product_at_k(self, k) -> np.ndarray:
        out = np.zeros(np.shape(k), dtype=complex)
        for nu in CHANNEL_ORDER:
            c1 = asymptotic_coefficient(self.dev, BandId.I, "out", nu, 1, k,
                                        include_position_phase=False)
            c2 = asymptotic_coefficient(self.dev, BandId.I, "out", nu, 2, k,
                                        include_position_phase=False)
            out = out + np.conj(c1) * c2
        return out

    def product_at_x(self, x) -> np.ndarray:
        """P evaluated where the resolvent peaks, d_I(k) = x."""
        return self._product_at_k(self.K + np.asarray(x, dtype=float) / self.v)

    def eval(self, x, chunk: int = 8192) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        out = np.empty(flat.shape, dtype=complex)
        ymin, ymax = self.y[0], self.y[-1]
        ie = 1j * self.eps
        for lo in range(0, flat.size, chunk):
            xs = flat[lo:lo + chunk]
            Px = self.product_at_x(xs)
            diff = xs[:, None] - self.y[None, :] + ie
            out[lo:lo + chunk] = np.sum(
                self.wk[None, :] * (self.P[None, :] - Px[:, None]) * 1j / diff,
                axis=1)
            out[lo:lo + chunk] += Px * (1j / self.v) * (
                np.log(xs - ymin + ie) - np.log(xs - ymax + ie))
        return out.reshape(x.shape)


def _conj_profile(dev: DeviceSpec, band: BandId, ring: int,
                  grid: KGrid) -> dict:
    """conj of the out-coefficients per channel, position phases included."""
    return {
        ch: np.conj(asymptotic_coefficient(dev, band, "out", ch, ring, grid.k,
                                           include_position_phase=True))
        for ch in CHANNEL_ORDER
    }


@dataclass
class BiphotonAmplitude:
    """Pair amplitude of the first process on (k_S1, k_I) output grids."""

    grid_s1: KGrid
    grid_i: KGrid
    beta2: float
    core: np.ndarray              # channel-independent unnormalized core (n1, n2)
    profiles_s1: dict             # ChannelId -> conj out-coefficients on grid_s1
    profiles_i: dict
    pair_probs: np.ndarray        # (3, 3), CHANNEL_ORDER x CHANNEL_ORDER
    pump_tables: Pump1Tables
    pump_coverage: float

    @property
    def beta(self) -> float:
        return float(np.sqrt(self.beta2))

    def unnormalized(self, ch1: ChannelId, ch2: ChannelId) -> np.ndarray:
        return np.outer(self.profiles_s1[ch1], self.profiles_i[ch2]) * self.core

    def normalized(self, ch1: ChannelId, ch2: ChannelId) -> np.ndarray:
        """phi^{ll'}: the unnormalized amplitude divided by beta."""
        return self.unnormalized(ch1, ch2) / self.beta

    def norm_check(self) -> float:
        """sum_{ll'} int |phi|^2 after normalization (should be 1)."""
        w = np.outer(self.grid_s1.weights_k, self.grid_i.weights_k)
        total = 0.0
        for c1 in CHANNEL_ORDER:
            for c2 in CHANNEL_ORDER:
                total += float(np.sum(w * np.abs(self.normalized(c1, c2)) ** 2))
        return total


def compute_bwf(dev: DeviceSpec, pump1: PumpSpectrum, grids: GridSet,
                warn_threshold: float = 0.2) -> BiphotonAmplitude:
    """Pair amplitude, pair probability and channel split of process 1."""
    if pump1.band.band != BandId.P1:
        raise ValueError("pump 1 must drive band P1")
    tables = Pump1Tables(dev, pump1, grids.pump1)
    coverage = tables.coverage_check()

    d1c, _ = _band_center_mismatches(dev)
    vP1 = dev.band(BandId.P1).group_velocity
    e_s1 = grids.s1.detuning
    e_i = grids.idler_out.detuning
    s_total = (e_s1[:, None] + e_i[None, :] - d1c) / vP1
    pref = 2.0 * np.pi * pump1.alpha ** 2 * k1_prefactor(dev) / (HBAR * vP1)
    core = pref * tables.conv_at(s_total)

    prof1 = _conj_profile(dev, BandId.S1, 1, grids.s1)
    prof2 = _conj_profile(dev, BandId.I, 1, grids.idler_out)
    w1 = grids.s1.weights_k
    w2 = grids.idler_out.weights_k
    dens = np.abs(core) ** 2
    r1 = {c: np.abs(p) ** 2 * w1 for c, p in prof1.items()}
    r2 = {c: np.abs(p) ** 2 * w2 for c, p in prof2.items()}
    probs = np.zeros((3, 3))
    for i, c1 in enumerate(CHANNEL_ORDER):
        row = r1[c1] @ dens          # (n2,)
        for j, c2 in enumerate(CHANNEL_ORDER):
            probs[i, j] = float(row @ r2[c2])
    beta2 = float(probs.sum())
    if beta2 == 0.0:
        raise ValueError("pair probability is zero; check pump and couplings")
    if beta2 > warn_threshold:
        warnings.warn(
            f"|beta|^2 = {beta2:.3g} exceeds the low-gain comfort zone "
            f"({warn_threshold}); perturbative results degrade", stacklevel=2)
    return BiphotonAmplitude(
        grid_s1=grids.s1, grid_i=grids.idler_out, beta2=beta2, core=core,
        profiles_s1=prof1, profiles_i=prof2, pair_probs=probs,
        pump_tables=tables, pump_coverage=coverage)


@dataclass
class TriphotonAmplitude:
    """Triplet amplitude of the cascade on (k_S1, k_S2, k_S3) grids."""

    grid_s1: KGrid
    grid_s2: KGrid
    grid_s3: KGrid
    sigma2: float
    core: np.ndarray              # channel-independent unnormalized core (n1,n2,n3)
    profiles: tuple               # per-axis dict ChannelId -> conj coefficients
    triple_probs: np.ndarray      # (3,3,3) in CHANNEL_ORDER
    psi_acacac: np.ndarray | None  # unit-norm post-selected amplitude
    norm_constant: float          # N restoring unit norm of the ac,ac,ac slice
    acacac_prob: float            # |sigma^{ac,ac,ac}|^2
    epsilon: float                # regularization in units of Gamma_I (ring 1)
    epsilon_drift: float          # relative |sigma|^2 change under eps -> eps/2
    pump_coverage: float

    @property
    def sigma(self) -> float:
        return float(np.sqrt(self.sigma2))

    def unnormalized(self, c1: ChannelId, c2: ChannelId, c3: ChannelId) -> np.ndarray:
        return (self.profiles[0][c1][:, None, None]
                * self.profiles[1][c2][None, :, None]
                * self.profiles[2][c3][None, None, :] * self.core)

    def normalized(self, c1: ChannelId, c2: ChannelId, c3: ChannelId) -> np.ndarray:
        return self.unnormalized(c1, c2, c3) / self.sigma

    def weights(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.grid_s1.weights_k, self.grid_s2.weights_k,
                self.grid_s3.weights_k)

    def norm_check(self) -> float:
        w1, w2, w3 = self.weights()
        total = 0.0
        dens = np.abs(self.core) ** 2 / self.sigma2
        r = [{c: np.abs(p[c]) ** 2 * w for c in CHANNEL_ORDER}
             for p, w in zip(self.profiles, (w1, w2, w3))]
        for c1 in CHANNEL_ORDER:
            x = np.einsum("i,ijl->jl", r[0][c1], dens)
            for c2 in CHANNEL_ORDER:
                y = r[1][c2] @ x
                for c3 in CHANNEL_ORDER:
                    total += float(y @ r[2][c3])
        return total


def _twf_core(dev, pump2, bwf, grids, eps_values, threads):
    """Assemble the TWF core for one or two regularization strengths."""
    d1c, d2c = _band_center_mismatches(dev)
    dg = d1c + d2c
    vP1 = dev.band(BandId.P1).group_velocity
    vP2 = dev.band(BandId.P2).group_velocity
    tab = bwf.pump_tables
    gI1 = dev.resonance(1, BandId.I).gamma_total

    resolvents = [IdlerResolvent(dev, grids.idler_contraction, e * gI1)
                  for e in eps_values]
    e1 = grids.s1.detuning
    d23 = grids.s2.detuning[:, None] + grids.s3.detuning[None, :]
    n1 = grids.s1.n
    shape = (n1, grids.s2.n, grids.s3.n)
    cores = [np.empty(shape, dtype=complex) for _ in eps_values]

    c12 = k1_prefactor(dev) * k2_prefactor(dev)

    if pump2.is_cw:
        pref = (2.0 * np.pi * tab.pump.alpha ** 2 * pump2.cw_amplitude
                * c12 / (HBAR ** 2 * vP1))
        D2 = complex(asymptotic_coefficient(
            dev, BandId.P2, "in", ChannelId.AC, 2,
            np.array([pump2.center_k]), include_position_phase=False)[0])
        pref = pref * D2
        # CW line sits at the (possibly detuned) pump center
        delta_cw = vP2 * (pump2.center_k - dev.band(BandId.P2).reference_wavenumber)

        def fill(i1):
            E = e1[i1] + d23
            e1_total = E - dg - delta_cw
            conv = tab.conv_at(e1_total / vP1)
            x = d1c + e1_total - e1[i1]
            for core, res in zip(cores, resolvents):
                core[i1] = pref * conv * res.eval(x)

        _run_chunks(fill, n1, threads)
    else:
        if pump2.alpha == 0.0:
            for core in cores:
                core[:] = 0.0
            return cores, True
        alpha2 = pump2.alpha
        pref = (2.0 * np.pi * tab.pump.alpha ** 2 * alpha2 * c12
                / (HBAR ** 2 * vP2))
        keep = np.abs(tab.Gw) > 1e-14 * np.abs(tab.Gw).max()
        u = tab.u[keep]
        Gw = tab.Gw[keep]
        K2 = dev.band(BandId.P2).reference_wavenumber

        def phi2_at(q):
            k = K2 + q
            D = asymptotic_coefficient(dev, BandId.P2, "in", ChannelId.AC, 2,
                                       k, include_position_phase=False)
            return D * pump2.phi(k)

        rtabs = [res.eval(d1c + vP1 * u[:, None] - e1[None, :])
                 for res in resolvents]   # (nu, n1)

        def fill(i1):
            E = e1[i1] + d23
            accs = [np.zeros(d23.shape, dtype=complex) for _ in cores]
            for m in range(u.size):
                p2 = phi2_at((E - dg - vP1 * u[m]) / vP2)
                for acc, rt in zip(accs, rtabs):
                    acc += (Gw[m] * rt[m, i1]) * p2
            for core, acc in zip(cores, accs):
                core[i1] = pref * acc

        _run_chunks(fill, n1, threads)
    return cores, False


def _run_chunks(fill, n1, threads):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(fill, range(n1)))
    else:
        for i1 in range(n1):
            fill(i1)


def _triple_probs(core, profiles, weights):
    dens = np.abs(core) ** 2
    r = [{c: np.abs(p[c]) ** 2 * w for c in CHANNEL_ORDER}
         for p, w in zip(profiles, weights)]
    probs = np.zeros((3, 3, 3))
    for i, c1 in enumerate(CHANNEL_ORDER):
        x = np.einsum("i,ijl->jl", r[0][c1], dens)
        for j, c2 in enumerate(CHANNEL_ORDER):
            y = r[1][c2] @ x
            for l, c3 in enumerate(CHANNEL_ORDER):
                probs[i, j, l] = float(y @ r[2][c3])
    return probs


def compute_twf(dev: DeviceSpec, pump2: PumpSpectrum, bwf: BiphotonAmplitude,
                grids: GridSet, epsilon: float = 1e-3,
                check_convergence: bool = True, threads: int = 1,
                drift_limit: float = 0.01) -> TriphotonAmplitude:
    """Triplet amplitude, probability and channel split of the cascade.

    ``epsilon`` is the adiabatic regularization in units of the ring-1 idler
    linewidth; when ``check_convergence`` is set the core is assembled at
    epsilon and epsilon/2 in one pass and a |sigma|^2 drift beyond
    ``drift_limit`` raises ConvergenceError.
    """
    if pump2.band.band != BandId.P2:
        raise ValueError("pump 2 must drive band P2")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if bwf.grid_s1 is not grids.s1 and not np.array_equal(bwf.grid_s1.k, grids.s1.k):
        raise ValueError("biphoton context was computed on different grids")

    eps_values = [epsilon, epsilon / 2.0] if check_convergence else [epsilon]
    cores, pump2_off = _twf_core(dev, pump2, bwf, grids, eps_values, threads)
    core = cores[0]

    profiles = (
        _conj_profile(dev, BandId.S1, 1, grids.s1),
        _conj_profile(dev, BandId.S2, 2, grids.s2),
        _conj_profile(dev, BandId.S3, 2, grids.s3),
    )
    weights = (grids.s1.weights_k, grids.s2.weights_k, grids.s3.weights_k)

    if pump2_off:
        return TriphotonAmplitude(
            grid_s1=grids.s1, grid_s2=grids.s2, grid_s3=grids.s3,
            sigma2=0.0, core=core, profiles=profiles,
            triple_probs=np.zeros((3, 3, 3)), psi_acacac=None,
            norm_constant=float("nan"), acacac_prob=0.0, epsilon=epsilon,
            epsilon_drift=0.0, pump_coverage=bwf.pump_coverage)

    probs = _triple_probs(core, profiles, weights)
    sigma2 = float(probs.sum())

    drift = 0.0
    if check_convergence:
        sigma2_half = float(_triple_probs(cores[1], profiles, weights).sum())
        drift = abs(sigma2_half - sigma2) / sigma2 if sigma2 > 0 else 0.0
        if drift > drift_limit:
            raise ConvergenceError(
                f"|sigma|^2 drifts by {drift:.2%} when the regularization is "
                f"halved (epsilon={epsilon:g}); the idler grid cannot resolve "
                "the resonant denominator")

    acacac = float(probs[0, 0, 0])
    t_ac = (profiles[0][ChannelId.AC][:, None, None]
            * profiles[1][ChannelId.AC][None, :, None]
            * profiles[2][ChannelId.AC][None, None, :] * core)
    norm = np.sqrt(acacac)
    psi = t_ac / norm
    norm_constant = float(np.sqrt(sigma2) / norm)

    return TriphotonAmplitude(
        grid_s1=grids.s1, grid_s2=grids.s2, grid_s3=grids.s3,
        sigma2=sigma2, core=core, profiles=profiles, triple_probs=probs,
        psi_acacac=psi, norm_constant=norm_constant, acacac_prob=acacac,
        epsilon=epsilon, epsilon_drift=drift, pump_coverage=bwf.pump_coverage)


def channel_probabilities(amp) -> np.ndarray:
    """Channel-resolved probability table of a pair or triplet amplitude.

    Rows/axes follow CHANNEL_ORDER = (ac, ph1, ph2); entries sum to the
    global |beta|^2 or |sigma|^2.
    """
    if isinstance(amp, BiphotonAmplitude):
        return amp.pair_probs.copy()
    if isinstance(amp, TriphotonAmplitude):
        return amp.triple_probs.copy()
    raise TypeError(f"unsupported amplitude type {type(amp)!r}")


def two_pair_probability_bound(bwf: BiphotonAmplitude) -> float:
    """Poissonian magnitude estimate |beta|^4 / 2 of the neglected
    double-pair term (report-only)."""
    return 0.5 * bwf.beta2 ** 2
