"""Linear physics of the dual-ring device.

Two microring resonators are point-coupled to a common bus waveguide; each ring
is additionally coupled to its own phantom waveguide that models intrinsic
(scattering) loss as an extra decay port.  Ring 1 hosts the first pump, first
signal and the idler; ring 2 hosts the second pump, the idler and the two
output signals.  All quantities here are derived from resonance frequencies,
quality factors and group velocities: decay rates, escape efficiencies, the
linear dispersion around each frequency band, the Lorentzian field-enhancement
factor of each resonance, and the reduced intracavity coefficients of the
scattering (asymptotic in/out) field basis for every supported
(band, direction, channel, ring) combination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .constants import C_VACUUM


class BandId(str, Enum):
    """The six frequency bands: two pumps, three signals, one idler."""

    P1 = "P1"
    S1 = "S1"
    I = "I"
    P2 = "P2"
    S2 = "S2"
    S3 = "S3"

    @property
    def role(self) -> str:
        return _BAND_ROLES[self]


_BAND_ROLES = {
    BandId.P1: "pump-1",
    BandId.S1: "signal-1",
    BandId.I: "idler",
    BandId.P2: "pump-2",
    BandId.S2: "signal-2",
    BandId.S3: "signal-3",
}


class ChannelId(str, Enum):
    """Propagation channels: the physical bus and the two phantom waveguides."""

    AC = "ac"
    PH1 = "ph1"
    PH2 = "ph2"


#: Channel index order used for all exported probability tables.
CHANNEL_ORDER = (ChannelId.AC, ChannelId.PH1, ChannelId.PH2)

#: Bands hosted by each ring (fixed by the device topology).
RING_BANDS = {
    1: frozenset({BandId.P1, BandId.S1, BandId.I}),
    2: frozenset({BandId.P2, BandId.S2, BandId.S3, BandId.I}),
}


def phantom_channel(ring: int) -> ChannelId:
    return ChannelId.PH1 if ring == 1 else ChannelId.PH2


def decay_rate(omega: float, q: float) -> float:
    """Decay rate Gamma = omega / (2 Q) of a resonance into one port [rad/s]."""
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if q <= 0:
        raise ValueError(f"Q must be positive, got {q}")
    if np.isinf(q):
        return 0.0
    return omega / (2.0 * q)


def escape_efficiency(gamma_channel: float, gamma_total: float) -> float:
    """Fraction of a resonance's total decay going into one channel."""
    if gamma_total <= 0:
        raise ValueError(f"total decay rate must be positive, got {gamma_total}")
    if gamma_channel < 0 or gamma_channel > gamma_total * (1 + 1e-15):
        raise ValueError(
            f"channel rate {gamma_channel} outside [0, {gamma_total}]"
        )
    return gamma_channel / gamma_total


@dataclass(frozen=True)
class BandSpec:
    """One frequency band: center wavelength, dispersion reference and slope.

    The dispersion is linear around the band center,
    ``omega(k) = omega0 + v (k - K)``; group-velocity dispersion is neglected
    within a band.  The reference wavenumber K drops out of every observable
    (only detunings k - K enter), so it defaults to omega0 / v.
    """

    band: BandId
    center_wavelength: float          # [m], vacuum
    group_velocity: float             # [m/s]
    reference_wavenumber: float = 0.0  # [rad/m]; 0 means "use omega0/v"

    def __post_init__(self):
        if self.center_wavelength <= 0:
            raise ValueError("center_wavelength must be positive")
        if self.group_velocity <= 0:
            raise ValueError("group_velocity must be positive")
        if self.reference_wavenumber == 0.0:
            object.__setattr__(
                self, "reference_wavenumber",
                self.center_angular_frequency / self.group_velocity,
            )

    @property
    def center_angular_frequency(self) -> float:
        """omega0 = 2 pi c / lambda [rad/s]."""
        return 2.0 * np.pi * C_VACUUM / self.center_wavelength


def dispersion_omega(band: BandSpec, k) -> np.ndarray | float:
    """Linear dispersion omega(k) = omega0 + v (k - K)."""
    return band.center_angular_frequency + band.group_velocity * (
        np.asarray(k) - band.reference_wavenumber
    )


@dataclass(frozen=True)
class RingResonance:
    """A single ring resonance with its coupling and loss rates.

    Intrinsic loss is modeled entirely through the phantom-channel decay rate
    Gamma_ph = omega / (2 Q_int); there is no separate distributed propagation
    loss.  Exactly one of ``q_coupling_ac`` / ``eta_ac`` must pin the bus
    coupling; the other is derived.
    """

    ring: int                      # 1 or 2
    band: BandId
    resonant_frequency: float      # [rad/s]
    q_intrinsic: float
    q_coupling_ac: float

    def __post_init__(self):
        if self.ring not in (1, 2):
            raise ValueError(f"ring must be 1 or 2, got {self.ring}")
        if self.resonant_frequency <= 0:
            raise ValueError("resonant_frequency must be positive")
        if self.q_intrinsic <= 0 or self.q_coupling_ac <= 0:
            raise ValueError("quality factors must be positive")

    @classmethod
    def from_eta(cls, ring, band, resonant_frequency, q_intrinsic, eta_ac):
        """Build from intrinsic Q and bus escape efficiency eta_ac.

        eta = Q_load / Q_ac with 1/Q_load = 1/Q_ac + 1/Q_int gives
        Q_load = (1 - eta) Q_int and Q_ac = Q_load / eta.
        """
        if not 0 < eta_ac < 1:
            raise ValueError(f"eta_ac must be in (0, 1), got {eta_ac}")
        q_load = (1.0 - eta_ac) * q_intrinsic
        return cls(ring, band, resonant_frequency, q_intrinsic, q_load / eta_ac)

    @property
    def gamma_ac(self) -> float:
        return decay_rate(self.resonant_frequency, self.q_coupling_ac)

    @property
    def gamma_ph(self) -> float:
        return decay_rate(self.resonant_frequency, self.q_intrinsic)

    @property
    def gamma_total(self) -> float:
        return self.gamma_ac + self.gamma_ph

    @property
    def q_loaded(self) -> float:
        return self.resonant_frequency / (2.0 * self.gamma_total)

    @property
    def eta_ac(self) -> float:
        return escape_efficiency(self.gamma_ac, self.gamma_total)

    @property
    def eta_ph(self) -> float:
        return escape_efficiency(self.gamma_ph, self.gamma_total)

    @property
    def dwell_time(self) -> float:
        """Intracavity energy decay time 1/(2 Gamma_total) [s]."""
        return 1.0 / (2.0 * self.gamma_total)

    def gamma(self, channel: ChannelId) -> float:
        if channel == ChannelId.AC:
            return self.gamma_ac
        if channel == phantom_channel(self.ring):
            return self.gamma_ph
        return 0.0


@dataclass(frozen=True)
class DeviceSpec:
    """The full dual-ring device."""

    radius1: float                 # [m]
    radius2: float                 # [m]
    half_separation: float         # coupling-point half separation a [m]
    gamma_nl1: float               # [ (W m)^-1 ]
    gamma_nl2: float               # [ (W m)^-1 ]
    bands: dict = field(default_factory=dict)       # BandId -> BandSpec
    resonances: dict = field(default_factory=dict)  # (ring, BandId) -> RingResonance

    def __post_init__(self):
        if self.radius1 <= 0 or self.radius2 <= 0:
            raise ValueError("ring radii must be positive")
        for ring, hosted in RING_BANDS.items():
            for band in hosted:
                if (ring, band) not in self.resonances:
                    raise ValueError(f"ring {ring} must host band {band.value}")
        for (ring, band), res in self.resonances.items():
            if band not in RING_BANDS[ring]:
                raise ValueError(f"band {band.value} not allowed on ring {ring}")
            if res.ring != ring or res.band != band:
                raise ValueError("resonance key/value mismatch")
            if band not in self.bands:
                raise ValueError(f"missing BandSpec for {band.value}")

    def circumference(self, ring: int) -> float:
        return 2.0 * np.pi * (self.radius1 if ring == 1 else self.radius2)

    def hosts(self, ring: int, band: BandId) -> bool:
        return (ring, band) in self.resonances

    def resonance(self, ring: int, band: BandId) -> RingResonance:
        return self.resonances[(ring, band)]

    def band(self, band: BandId) -> BandSpec:
        return self.bands[band]

    def min_gamma_total(self) -> float:
        return min(r.gamma_total for r in self.resonances.values())


def coupling_constant(dev: DeviceSpec, res: RingResonance, channel: ChannelId) -> float:
    """Coupling-Hamiltonian constant |gamma| = sqrt(2 v Gamma_channel).

    The phase of the coupling constant is a gauge choice; it is taken real
    positive throughout.
    """
    v = dev.band(res.band).group_velocity
    return float(np.sqrt(2.0 * v * res.gamma(channel)))


def field_enhancement(dev: DeviceSpec, res: RingResonance, channel: ChannelId,
                      sign: int, k) -> np.ndarray:
    """Resonant field-enhancement factor F_{u +-}^{lambda(ring)}(k).

    F = gamma* / ( sqrt(L) * (delta(k) +- i Gamma_total) ) with
    delta(k) = omega_res - omega(k); for a resonance sitting at the band center
    this is v (K - k).  The + (-) branch carries the out- (in-) field analytic
    structure.  Vanishes identically for a decoupled channel.
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    band = dev.band(res.band)
    g = res.gamma(channel)
    if g == 0.0:
        return np.zeros(np.shape(k), dtype=complex)
    gam = coupling_constant(dev, res, channel)
    L = dev.circumference(res.ring)
    delta = res.resonant_frequency - np.asarray(dispersion_omega(band, k), dtype=float)
    return gam / (np.sqrt(L) * (delta + sign * 1j * res.gamma_total))


def _interring_factor(dev: DeviceSpec, band: BandId, other_ring: int,
                      channel: ChannelId, sign: int, k) -> np.ndarray:
    """(+-) i gamma^{ac(other)} sqrt(L_other) F^{channel(other)} / v term.

    Reduces to 0 when the other ring has no resonance in this band
    (the Gamma_total -> infinity limit of the enhancement factor).
    """
    if not dev.hosts(other_ring, band):
        return np.zeros(np.shape(k), dtype=complex)
    res = dev.resonance(other_ring, band)
    gam_ac = coupling_constant(dev, res, ChannelId.AC)
    F = field_enhancement(dev, res, channel, sign, k)
    v = dev.band(band).group_velocity
    return 1j * gam_ac * np.sqrt(dev.circumference(other_ring)) * F / v


def asymptotic_coefficient(dev: DeviceSpec, band: BandId, direction: str,
                           channel: ChannelId, ring: int, k,
                           include_position_phase: bool = True) -> np.ndarray:
    """Reduced intracavity coefficient of one asymptotic field, per wavenumber.

    Returns the dimensionless scalar multiplying the common mode-profile
    prefactor of the asymptotic in/out fields evaluated inside ``ring``.
    Supported (direction, channel) combinations are in/ac, out/ac, out/ph1 and
    out/ph2; light enters only through the bus.  A band not hosted by the
    evaluation ring contributes zero.  ``include_position_phase`` controls the
    pure coupling-position phase e^{-+ i (k - K) a} (ring 1 / ring 2); every
    reported probability is invariant to it.
    """
    if direction not in ("in", "out"):
        raise ValueError(f"direction must be 'in' or 'out', got {direction!r}")
    if direction == "in" and channel is not ChannelId.AC:
        raise ValueError("asymptotic-in fields exist only for the bus channel")
    if ring not in (1, 2):
        raise ValueError("ring must be 1 or 2")
    k = np.asarray(k, dtype=float)
    if not dev.hosts(ring, band):
        return np.zeros(k.shape, dtype=complex)
    res = dev.resonance(ring, band)
    other = 2 if ring == 1 else 1

    if direction == "in":
        # bus drive: ring 1 is hit first; the drive of ring 2 carries ring 1's
        # all-pass response in this band
        out = field_enhancement(dev, res, ChannelId.AC, -1, k)
        if ring == 2:
            out = out * (1.0 + _interring_factor(dev, band, 1, ChannelId.AC, -1, k))
    elif channel == ChannelId.AC:
        # bus output: ring 1's output passes ring 2 on the way out
        out = field_enhancement(dev, res, ChannelId.AC, +1, k)
        if ring == 1:
            out = out * (1.0 - _interring_factor(dev, band, 2, ChannelId.AC, +1, k))
    elif channel == ChannelId.PH1:
        # ring 2 cannot reach ring 1's phantom port (bus is unidirectional)
        if ring == 2:
            return np.zeros(k.shape, dtype=complex)
        out = field_enhancement(dev, res, ChannelId.PH1, +1, k)
    else:  # PH2
        if ring == 2:
            out = field_enhancement(dev, res, ChannelId.PH2, +1, k)
        else:
            # ring 1 reaches ring 2's phantom only through the bus + ring 2
            out = field_enhancement(dev, res, ChannelId.AC, +1, k) * (
                -_interring_factor(dev, band, 2, ChannelId.PH2, +1, k)
            )

    if include_position_phase:
        a = dev.half_separation
        K = dev.band(band).reference_wavenumber
        phase_sign = -1.0 if ring == 1 else +1.0
        out = out * np.exp(1j * phase_sign * (k - K) * a)
    return out


@dataclass(frozen=True)
class EnergyConservationReport:
    """Detunings of the two four-wave-mixing processes, in rad/s and linewidths."""

    delta1: float                  # 2 w_P1 - w_S1 - w_I [rad/s]
    delta2: float                  # w_I + w_P2 - w_S2 - w_S3 [rad/s]
    min_gamma_total: float
    idler_wavelength_delta1_zero: float  # [m]

    @property
    def delta1_linewidths(self) -> float:
        return self.delta1 / self.min_gamma_total

    @property
    def delta2_linewidths(self) -> float:
        return self.delta2 / self.min_gamma_total

    def aligned(self, tol_linewidths: float = 0.1) -> bool:
        return (abs(self.delta1_linewidths) < tol_linewidths
                and abs(self.delta2_linewidths) < tol_linewidths)


def idler_wavelength_for_conservation(lambda_p1: float, lambda_s1: float) -> float:
    """Idler wavelength solving 2 w_P1 = w_S1 + w_I."""
    return 1.0 / (2.0 / lambda_p1 - 1.0 / lambda_s1)


def check_energy_conservation(dev: DeviceSpec) -> EnergyConservationReport:
    """Report how well the band centers satisfy both SFWM energy constraints."""
    w = {b: dev.band(b).center_angular_frequency for b in BandId}
    delta1 = 2.0 * w[BandId.P1] - w[BandId.S1] - w[BandId.I]
    delta2 = w[BandId.I] + w[BandId.P2] - w[BandId.S2] - w[BandId.S3]
    lam_i = idler_wavelength_for_conservation(
        dev.band(BandId.P1).center_wavelength, dev.band(BandId.S1).center_wavelength
    )
    return EnergyConservationReport(
        delta1=float(delta1),
        delta2=float(delta2),
        min_gamma_total=dev.min_gamma_total(),
        idler_wavelength_delta1_zero=float(lam_i),
    )
