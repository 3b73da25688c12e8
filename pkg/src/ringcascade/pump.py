"""Classical pump description.

A pump is a transform-limited Gaussian pulse train or a CW tone entering the
bus waveguide.  The quantized channel operators are replaced classically,
``a(k) -> alpha phi(k)`` with a unit-normalized spectrum phi and
|alpha|^2 = pulse photon number; a CW pump is kept symbolic
(``a(k) -> A_cw delta(k - K)``) with |A_cw|^2 = 2 pi P / (hbar omega v), the
amplitude whose photon flux through the waveguide is P / (hbar omega).  The
module also contains the waveguide/ring power bookkeeping (pulse energy,
average power, and the driven-cavity solver for the peak circulating power).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR
from .device import BandId, BandSpec, DeviceSpec, RingResonance, coupling_constant
from .device import ChannelId

#: E = P_peak * fwhm * sqrt(pi / (4 ln 2)) for a Gaussian intensity profile.
GAUSSIAN_ENERGY_FACTOR = math.sqrt(math.pi / (4.0 * math.log(2.0)))

#: integral of (P(t)/P_peak)^2 = fwhm * sqrt(pi / (8 ln 2)); sets the
#: effective window of pump-squared processes.
GAUSSIAN_SQUARED_WINDOW = math.sqrt(math.pi / (8.0 * math.log(2.0)))


@dataclass(frozen=True)
class PumpSpec:
    """One pump: band, shape, drive strength and repetition rate.

    Exactly one drive quantity is given:
    ``pulse_energy`` [J], ``peak_power`` [W] (peak in the bus waveguide,
    converted through the Gaussian pulse-energy identity) or ``cw_power`` [W].
    ``detuning`` offsets the pump center from the band center [rad/s].
    """

    band: BandId
    fwhm: float | None = None          # [s]; None for CW
    pulse_energy: float | None = None  # [J]
    peak_power: float | None = None    # [W]
    cw_power: float | None = None      # [W]
    repetition_rate: float | None = None  # [Hz]
    detuning: float = 0.0

    def __post_init__(self):
        drives = [q for q in (self.pulse_energy, self.peak_power, self.cw_power)
                  if q is not None]
        if len(drives) != 1:
            raise ValueError("exactly one drive quantity must be set")
        if self.is_cw:
            if self.fwhm is not None:
                raise ValueError("CW pump takes no fwhm")
        else:
            if self.fwhm is None or self.fwhm <= 0:
                raise ValueError("pulsed pump needs fwhm > 0")
            if self.repetition_rate is None or self.repetition_rate <= 0:
                raise ValueError("pulsed pump needs repetition_rate > 0")

    @property
    def is_cw(self) -> bool:
        return self.cw_power is not None

    def energy(self) -> float:
        """Pulse energy [J] (pulsed pumps only)."""
        if self.is_cw:
            raise ValueError("CW pump has no pulse energy")
        if self.pulse_energy is not None:
            return self.pulse_energy
        return pulse_energy(self.peak_power, self.fwhm)


@dataclass(frozen=True)
class PumpSpectrum:
    """Normalized spectral amplitude and photon-number constant of one pump.

    For pulsed pumps ``phi(k)`` is a unit-normalized Gaussian
    (int |phi|^2 dk = 1) and alpha = sqrt(photon number), real positive.
    For CW pumps the spectrum is a symbolic delta at ``center_k``;
    ``cw_amplitude`` = A_cw carries the finite-flux normalization and phi is
    not evaluable.
    """

    band: BandSpec
    alpha: float
    sigma_k: float | None          # intensity-spectrum std [rad/m]; None = CW
    center_k: float                # [rad/m]
    cw_amplitude: float = 0.0      # A_cw [m^-1/2]; 0 for pulsed

    @property
    def is_cw(self) -> bool:
        return self.sigma_k is None

    def phi(self, k) -> np.ndarray:
        """Unit-normalized spectral amplitude (pulsed pumps)."""
        if self.is_cw:
            raise ValueError("CW pump has a symbolic delta spectrum")
        q = np.asarray(k, dtype=float) - self.center_k
        s2 = self.sigma_k ** 2
        return (2.0 * np.pi * s2) ** (-0.25) * np.exp(-q * q / (4.0 * s2))

    def energy_fraction_outside(self, half_span_k: float) -> float:
        """Fraction of int |phi|^2 dk outside [center - H, center + H]."""
        if self.is_cw:
            return 0.0
        from scipy.special import erfc
        return float(erfc(half_span_k / (np.sqrt(2.0) * self.sigma_k)))


def spectral_intensity_fwhm_hz(fwhm_time: float) -> float:
    """Transform-limit identity: spectral intensity FWHM = 2 ln2 / (pi T)."""
    return 2.0 * math.log(2.0) / (math.pi * fwhm_time)


def gaussian_spectrum(fwhm_time: float, band: BandSpec) -> PumpSpectrum:
    """Transform-limited Gaussian spectrum for a pulse of given intensity FWHM.

    The intensity spectrum |phi|^2 is Gaussian with standard deviation
    sigma_omega = sqrt(2 ln 2) / T, i.e. sigma_k = sigma_omega / v; the
    amplitude constant is left at zero (see amplitude_from_drive).
    """
    if fwhm_time <= 0:
        raise ValueError("fwhm must be positive")
    sigma_k = math.sqrt(2.0 * math.log(2.0)) / (fwhm_time * band.group_velocity)
    return PumpSpectrum(band=band, alpha=0.0, sigma_k=sigma_k,
                        center_k=band.reference_wavenumber)


def pulse_energy(peak_power: float, fwhm: float) -> float:
    """Energy of a Gaussian pulse from its peak power and intensity FWHM."""
    if peak_power < 0 or fwhm <= 0:
        raise ValueError("peak_power must be >= 0 and fwhm > 0")
    return peak_power * fwhm * GAUSSIAN_ENERGY_FACTOR


def average_power(energy: float, repetition_rate: float) -> float:
    if energy < 0 or repetition_rate < 0:
        raise ValueError("inputs must be non-negative")
    return energy * repetition_rate


def amplitude_from_drive(spec: PumpSpec, band: BandSpec) -> PumpSpectrum:
    """Attach the photon-number amplitude to a pump spectrum.

    Pulsed: |alpha|^2 = E / (hbar omega), alpha real positive.  CW:
    |A_cw|^2 = 2 pi P / (hbar omega v), the delta-spectrum amplitude whose
    waveguide photon flux is P / (hbar omega).
    """
    if spec.band != band.band:
        raise ValueError("pump/band mismatch")
    w0 = band.center_angular_frequency + spec.detuning
    center_k = band.reference_wavenumber + spec.detuning / band.group_velocity
    if spec.is_cw:
        a_cw = math.sqrt(2.0 * np.pi * spec.cw_power / (HBAR * w0 * band.group_velocity))
        return PumpSpectrum(band=band, alpha=0.0, sigma_k=None,
                            center_k=center_k, cw_amplitude=a_cw)
    alpha = math.sqrt(spec.energy() / (HBAR * w0))
    base = gaussian_spectrum(spec.fwhm, band)
    return PumpSpectrum(band=band, alpha=alpha, sigma_k=base.sigma_k,
                        center_k=center_k)


def cw_circulating_power(res: RingResonance, dev: DeviceSpec,
                         power: float, detuning: float = 0.0) -> float:
    """Steady-state circulating power |F_res|^2 * P, with Lorentzian detuning."""
    band = dev.band(res.band)
    v = band.group_velocity
    L = dev.circumference(res.ring)
    gb = res.gamma_total
    f2_res = 2.0 * v * res.gamma_ac / (L * gb * gb)
    return f2_res * power * gb * gb / (gb * gb + detuning * detuning)


def intracavity_peak_power(res: RingResonance, spec: PumpSpec,
                           band: BandSpec, dev: DeviceSpec) -> float:
    """Peak circulating power in the ring for a given pump drive [W].

    Solves the single-pole driven-cavity amplitude
    ``db/dt = -(i delta + Gamma_total) b - i gamma* psi_in(t)`` with the bus
    coupling constant and a Gaussian (or CW) input, normalized so the CW
    steady state equals |F_res|^2 * P_waveguide.  For a Gaussian drive the
    causal convolution has the closed form
    ``b(t) = -i gamma psi_pk (1/2) sqrt(pi/a) e^{-a t^2} erfcx(z(t))`` with
    a = 2 ln2 / T^2 and z = (i delta + Gamma)/(2 sqrt(a)) - sqrt(a) t, which
    is overflow-safe for arbitrarily long pulses; the peak is taken over a
    dense deterministic time grid.
    """
    if spec.band != res.band:
        raise ValueError("pump drives a different band")
    if spec.is_cw:
        return cw_circulating_power(res, dev, spec.cw_power, spec.detuning)

    from scipy.special import wofz

    gb = res.gamma_total
    gam = coupling_constant(dev, res, ChannelId.AC)
    v = band.group_velocity
    L = dev.circumference(res.ring)
    w0 = band.center_angular_frequency + spec.detuning
    peak = spec.peak_power if spec.peak_power is not None else (
        spec.energy() / (spec.fwhm * GAUSSIAN_ENERGY_FACTOR))

    # amplitude envelope of sqrt(flux density): |psi(t)|^2 v = P(t)/(hbar w)
    T = spec.fwhm
    psi_pk = math.sqrt(peak / (HBAR * w0 * v))
    a = 2.0 * math.log(2.0) / (T * T)
    pole = 1j * spec.detuning + gb
    c = pole / (2.0 * math.sqrt(a))

    # the response peaks between the pulse maximum and a few lifetimes after
    t = np.linspace(-2.0 * T, 2.0 * T + 8.0 / gb, 20001)
    z = c - math.sqrt(a) * t
    # erfcx(z) = wofz(iz); reflect where Re z < 0 to keep exponents negative:
    # e^{-a t^2} erfcx(z) = 2 e^{c^2 - pole t} - e^{-a t^2} erfcx(-z)
    env = np.empty(t.shape, dtype=complex)
    pos = z.real >= 0.0
    env[pos] = np.exp(-a * t[pos] ** 2) * wofz(1j * z[pos])
    env[~pos] = (2.0 * np.exp(c * c - pole * t[~pos])
                 - np.exp(-a * t[~pos] ** 2) * wofz(-1j * z[~pos]))
    b = -1j * gam * psi_pk * 0.5 * math.sqrt(math.pi / a) * env
    photons = np.abs(b) ** 2
    return float(photons.max() * HBAR * w0 * v / L)
