"""Linear-physics unit tests: rates, dispersion, enhancement, coefficients."""

import numpy as np
import pytest
from scipy.constants import c as C0

import ringcascade as rc
from ringcascade.device import (BandId, BandSpec, ChannelId, DeviceSpec,
                                RingResonance, asymptotic_coefficient,
                                check_energy_conservation, coupling_constant,
                                decay_rate, dispersion_omega,
                                escape_efficiency, field_enhancement,
                                idler_wavelength_for_conservation)

W_1546 = 2 * np.pi * C0 / 1546.83e-9


def test_decay_rate_values():
    # direct arithmetic oracle: omega/(2 Q)
    assert decay_rate(W_1546, 5e5) == pytest.approx(W_1546 / 1e6, rel=1e-15)
    assert decay_rate(W_1546, 5e5) == pytest.approx(1.2178e9, rel=1e-4)
    assert decay_rate(W_1546, np.inf) == 0.0
    assert decay_rate(1.0, 0.5) == 1.0


def test_decay_rate_domain_errors():
    with pytest.raises(ValueError):
        decay_rate(-1.0, 1e6)
    with pytest.raises(ValueError):
        decay_rate(W_1546, 0.0)


def test_escape_efficiency_values():
    # critical coupling: Q_ac = Q_int -> eta = 1/2
    g_ac = decay_rate(W_1546, 1e6)
    g_ph = decay_rate(W_1546, 1e6)
    assert escape_efficiency(g_ac, g_ac + g_ph) == pytest.approx(0.5, rel=1e-14)
    assert escape_efficiency(0.0, 1.0) == 0.0
    with pytest.raises(ValueError):
        escape_efficiency(2.0, 1.0)
    with pytest.raises(ValueError):
        escape_efficiency(1.0, 0.0)


def test_resonance_from_eta_q_relations():
    # eta = 0.9 with Q_int = 1e6 <=> Q_load = 1e5, Q_ac = 1.1111e5
    res = RingResonance.from_eta(1, BandId.S1, W_1546, 1e6, 0.9)
    assert res.q_loaded == pytest.approx(1e5, rel=1e-12)
    assert res.q_coupling_ac == pytest.approx(1.11111111e5, rel=1e-8)
    assert res.eta_ac == pytest.approx(0.9, rel=1e-12)
    # loaded-Q composition 1/Q_load = 1/Q_ac + 1/Q_int
    assert 1.0 / res.q_loaded == pytest.approx(
        1.0 / res.q_coupling_ac + 1.0 / res.q_intrinsic, rel=1e-12)


def test_escape_partition_random(rng):
    for _ in range(50):
        q_int = 10 ** rng.uniform(4, 8)
        q_ac = 10 ** rng.uniform(4, 8)
        res = RingResonance(1, BandId.I, W_1546, q_int, q_ac)
        assert res.eta_ac + res.eta_ph == pytest.approx(1.0, abs=1e-12)
        assert 1.0 / res.q_loaded == pytest.approx(
            1.0 / q_ac + 1.0 / q_int, rel=1e-12)


def test_dwell_time_critical_near_1546nm():
    res = RingResonance(1, BandId.P1, W_1546, 1e6, 1e6)
    assert res.dwell_time == pytest.approx(411e-12, rel=2e-3)


def test_dispersion_linear(preset_devices):
    _, dev = preset_devices["A"]
    band = dev.band(BandId.S1)
    gb = dev.resonance(1, BandId.S1).gamma_total
    K = band.reference_wavenumber
    assert dispersion_omega(band, K) == band.center_angular_frequency
    w1 = dispersion_omega(band, K + gb / band.group_velocity)
    assert w1 == pytest.approx(band.center_angular_frequency + gb, rel=1e-14)
    # one-linewidth detuning in wavenumber for the S1 band
    assert gb / band.group_velocity == pytest.approx(14.79, rel=1e-3)


def test_field_enhancement_resonant_magnitude(preset_devices):
    _, dev = preset_devices["A"]
    res = dev.resonance(2, BandId.P2)
    band = dev.band(BandId.P2)
    K = np.array([band.reference_wavenumber])
    f = field_enhancement(dev, res, ChannelId.AC, +1, K)[0]
    expected = 2 * band.group_velocity * res.gamma_ac / (
        dev.circumference(2) * res.gamma_total ** 2)
    assert abs(f) ** 2 == pytest.approx(expected, rel=1e-12)
    # critical coupling near 1584 nm: |F|^2 ~ 1.10e3
    assert abs(f) ** 2 == pytest.approx(1.10e3, rel=0.01)
    # decoupled channel vanishes: a resonance with effectively no phantom rate
    res_lossless = RingResonance(2, BandId.P2, res.resonant_frequency,
                                 np.inf, res.q_coupling_ac)
    f_ph = field_enhancement(dev, res_lossless, ChannelId.PH2, +1, K)
    assert np.all(f_ph == 0)


def test_field_enhancement_lorentzian_area(preset_devices):
    # numerically integrated |F|^2 over +-40 linewidths plus the analytic
    # tails reproduces 2 pi Gamma_ch / (L Gamma_tot) to 1e-6 relative
    _, dev = preset_devices["A"]
    res = dev.resonance(1, BandId.S1)
    band = dev.band(BandId.S1)
    gb = res.gamma_total
    v = band.group_velocity
    K = band.reference_wavenumber
    k = K + np.linspace(-40, 40, 160001) * gb / v
    f2 = np.abs(field_enhancement(dev, res, ChannelId.AC, +1, k)) ** 2
    area_core = np.trapezoid(f2, k)
    # analytic tail of |gamma|^2/(L (y^2 + gb^2)) beyond +-40 linewidths
    gam2 = coupling_constant(dev, res, ChannelId.AC) ** 2
    tail = 2 * gam2 / (dev.circumference(1) * v * gb) * (np.pi / 2 - np.arctan(40.0))
    expected = 2 * np.pi * res.gamma_ac / (dev.circumference(1) * gb)
    assert area_core + tail == pytest.approx(expected, rel=1e-6)


def test_asymptotic_out_ph1_ring2_is_zero(preset_devices):
    _, dev = preset_devices["B"]
    band = dev.band(BandId.I)
    k = band.reference_wavenumber + np.linspace(-1e3, 1e3, 101)
    vals = asymptotic_coefficient(dev, BandId.I, "out", ChannelId.PH1, 2, k)
    assert np.all(vals == 0)


def test_asymptotic_in_ac_modulus_and_phase(preset_devices):
    _, dev = preset_devices["A"]
    band = dev.band(BandId.P1)
    res = dev.resonance(1, BandId.P1)
    K = np.array([band.reference_wavenumber])
    got = asymptotic_coefficient(dev, BandId.P1, "in", ChannelId.AC, 1, K)[0]
    f = field_enhancement(dev, res, ChannelId.AC, -1, K)[0]
    assert abs(got) == pytest.approx(abs(f), rel=1e-14)
    # position phase is pure phase: modulus matches the phase-free value
    k = band.reference_wavenumber + np.linspace(-2e2, 2e2, 41)
    with_phase = asymptotic_coefficient(dev, BandId.P1, "in", ChannelId.AC, 1, k)
    without = asymptotic_coefficient(dev, BandId.P1, "in", ChannelId.AC, 1, k,
                                     include_position_phase=False)
    np.testing.assert_allclose(np.abs(with_phase), np.abs(without), rtol=1e-14)


def test_asymptotic_out_ac_absent_band_reduces_to_plain_f(preset_devices):
    # S1 is not hosted by ring 2, so the inter-ring factor collapses to one
    _, dev = preset_devices["A"]
    band = dev.band(BandId.S1)
    res = dev.resonance(1, BandId.S1)
    k = band.reference_wavenumber + np.linspace(-3e2, 3e2, 61)
    got = asymptotic_coefficient(dev, BandId.S1, "out", ChannelId.AC, 1, k,
                                 include_position_phase=False)
    f = field_enhancement(dev, res, ChannelId.AC, +1, k)
    np.testing.assert_allclose(got, f, rtol=1e-14)
    # the same for ph2: a band absent from ring 2 cannot reach its phantom
    got_ph2 = asymptotic_coefficient(dev, BandId.S1, "out", ChannelId.PH2, 1, k)
    assert np.all(got_ph2 == 0)


def test_asymptotic_coefficient_domain_errors(preset_devices):
    _, dev = preset_devices["A"]
    k = np.array([dev.band(BandId.P1).reference_wavenumber])
    with pytest.raises(ValueError):
        asymptotic_coefficient(dev, BandId.P1, "in", ChannelId.PH1, 1, k)
    with pytest.raises(ValueError):
        asymptotic_coefficient(dev, BandId.P1, "sideways", ChannelId.AC, 1, k)
    # band not hosted by the evaluation ring -> zero, not an error
    vals = asymptotic_coefficient(dev, BandId.S1, "out", ChannelId.AC, 2, k)
    assert np.all(vals == 0)


def test_interring_passage_preserves_channel_norm(preset_devices):
    # the idler leaving ring 1 redistributes over (ac, ph1, ph2) through
    # ring 2; summed |coefficient|^2 must equal the bare ring-1 Lorentzians
    for pid in ("A", "C"):
        _, dev = preset_devices[pid]
        band = dev.band(BandId.I)
        res = dev.resonance(1, BandId.I)
        k = band.reference_wavenumber + np.linspace(-8e2, 8e2, 301)
        total = np.zeros(k.shape)
        for ch in (ChannelId.AC, ChannelId.PH1, ChannelId.PH2):
            total += np.abs(asymptotic_coefficient(
                dev, BandId.I, "out", ch, 1, k)) ** 2
        bare = (np.abs(field_enhancement(dev, res, ChannelId.AC, +1, k)) ** 2
                + np.abs(field_enhancement(dev, res, ChannelId.PH1, +1, k)) ** 2)
        np.testing.assert_allclose(total, bare, rtol=1e-12)


def test_energy_conservation_preset(preset_devices):
    _, dev = preset_devices["A"]
    rep = check_energy_conservation(dev)
    assert rep.idler_wavelength_delta1_zero * 1e9 == pytest.approx(1552.09, abs=0.01)
    assert abs(rep.delta1_linewidths) < 0.1
    assert abs(rep.delta2_linewidths) < 0.1
    assert rep.aligned()


def test_energy_conservation_detects_misalignment(preset_devices):
    cfg, _ = preset_devices["A"]
    import copy
    bad = copy.deepcopy(cfg)
    bad.device.bands["S1"].wavelength_nm += 1.0
    rep = check_energy_conservation(bad.build_device())
    assert abs(rep.delta1_linewidths) > 1.0
    assert not rep.aligned()


def test_energy_conservation_degenerate_triplet():
    # one shared signal resonance: both mismatches vanish by construction
    lam_p1 = 1546.83e-9
    lam_s = 1550.00e-9
    lam_i = idler_wavelength_for_conservation(lam_p1, lam_s)
    lam_p2 = 1.0 / (2.0 / lam_s - 1.0 / lam_i)
    lam = {"P1": lam_p1, "S1": lam_s, "I": lam_i, "P2": lam_p2,
           "S2": lam_s, "S3": lam_s}
    v = 8.2e7
    bands = {b: BandSpec(b, lam[b.value], v) for b in BandId}
    res = {}
    for ring, names in ((1, ("P1", "S1", "I")), (2, ("P2", "S2", "S3", "I"))):
        for name in names:
            b = BandId(name)
            res[(ring, b)] = RingResonance.from_eta(
                ring, b, bands[b].center_angular_frequency, 1e6, 0.5)
    dev = DeviceSpec(radius1=20e-6, radius2=10e-6, half_separation=50e-6,
                     gamma_nl1=250.0, gamma_nl2=250.0, bands=bands,
                     resonances=res)
    rep = check_energy_conservation(dev)
    assert abs(rep.delta1_linewidths) < 1e-9
    assert abs(rep.delta2_linewidths) < 1e-9


def test_device_requires_hosted_bands(preset_devices):
    cfg, dev = preset_devices["A"]
    missing = {k: v for k, v in dev.resonances.items() if k != (1, BandId.S1)}
    with pytest.raises(ValueError):
        DeviceSpec(radius1=dev.radius1, radius2=dev.radius2,
                   half_separation=dev.half_separation,
                   gamma_nl1=dev.gamma_nl1, gamma_nl2=dev.gamma_nl2,
                   bands=dev.bands, resonances=missing)


def test_band_spec_omega_consistency():
    b = BandSpec(BandId.P1, 1546.83e-9, 8.26e7)
    assert b.center_angular_frequency == pytest.approx(
        2 * np.pi * C0 / 1546.83e-9, rel=1e-12)
    with pytest.raises(ValueError):
        BandSpec(BandId.P1, -1.0, 8.26e7)
