"""Reduced density matrices, purities, rates and figure exports."""

import numpy as np
import pytest

import ringcascade as rc
from ringcascade.analysis import (projections_and_isosurface, purity,
                                  purity_of_tensor, reduced_density,
                                  triplet_rate)


def _unit_weights(shape):
    return tuple(np.ones(n) for n in shape)


def test_separable_tensor_is_pure(rng):
    f = rng.normal(size=10) + 1j * rng.normal(size=10)
    g = rng.normal(size=11) + 1j * rng.normal(size=11)
    h = rng.normal(size=12) + 1j * rng.normal(size=12)
    psi = np.einsum("i,j,l->ijl", f, g, h)
    rep = purity_of_tensor(psi, _unit_weights(psi.shape))
    assert rep.p1 == pytest.approx(1.0, abs=1e-12)
    assert rep.p2 == pytest.approx(1.0, abs=1e-12)
    assert rep.p3 == pytest.approx(1.0, abs=1e-12)


def test_svd_path_equals_trace_path(rng):
    for _ in range(5):
        psi = rng.normal(size=(8, 8, 8)) + 1j * rng.normal(size=(8, 8, 8))
        rep = purity_of_tensor(psi, _unit_weights(psi.shape))
        for p, tr in zip(rep.values, rep.trace_path):
            assert p == pytest.approx(tr, rel=1e-12)


def test_purity_bounds_and_schmidt_norm(rng):
    psi = rng.normal(size=(6, 9, 7)) + 1j * rng.normal(size=(6, 9, 7))
    rep = purity_of_tensor(psi, _unit_weights(psi.shape))
    for axis, p in enumerate(rep.values):
        n = psi.shape[axis]
        rest = psi.size // n
        assert 1.0 / min(n, rest) - 1e-12 <= p <= 1.0 + 1e-12
        s = rep.schmidt[axis]
        assert np.all(s >= 0)
        assert np.all(np.diff(s) <= 1e-12)
        assert np.sum(s ** 2) == pytest.approx(1.0, rel=1e-12)


def test_purity_invariant_under_per_axis_phases(rng):
    psi = rng.normal(size=(7, 7, 7)) + 1j * rng.normal(size=(7, 7, 7))
    w = _unit_weights(psi.shape)
    base = purity_of_tensor(psi, w)
    ph = [np.exp(1j * rng.uniform(0, 2 * np.pi, size=7)) for _ in range(3)]
    rotated = psi * ph[0][:, None, None] * ph[1][None, :, None] \
        * ph[2][None, None, :]
    rot = purity_of_tensor(rotated, w)
    np.testing.assert_allclose(rot.values, base.values, rtol=1e-12)


def test_reduced_density_properties(pipeline_b):
    twf = pipeline_b["twf"]
    for axis in (1, 2, 3):
        rho = reduced_density(twf, axis)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-9)
        np.testing.assert_allclose(rho, rho.conj().T, atol=1e-12)
        evals = np.linalg.eigvalsh(rho)
        assert evals.min() > -1e-12
    with pytest.raises(ValueError):
        reduced_density(twf, 4)


def test_reduced_density_matches_purity(pipeline_b):
    twf = pipeline_b["twf"]
    rep = purity(twf)
    for axis in (1, 2, 3):
        rho = reduced_density(twf, axis)
        assert np.trace(rho @ rho).real == pytest.approx(
            rep.values[axis - 1], rel=1e-10)


def test_symmetric_configuration_p2_equals_p3(pipeline_b):
    rep = purity(pipeline_b["twf"])
    assert rep.p2 == pytest.approx(rep.p3, abs=2e-4)


def test_triplet_rate_table_rows(preset_devices):
    _, dev_b = preset_devices["B"]
    r = triplet_rate(1.54e-5, dev_b, 1e7)
    assert r.rate_hz == pytest.approx(1e7 * 0.125 * 1.54e-5, rel=1e-12)
    assert r.rate_hz == pytest.approx(19.2, rel=5e-3)
    _, dev_c = preset_devices["C"]
    r = triplet_rate(2.52e-6, dev_c, 1e7)
    assert r.eta_product == pytest.approx(0.9 * 0.5 * 0.5, rel=1e-12)
    assert r.rate_hz == pytest.approx(5.66, rel=5e-3)
    _, dev_a = preset_devices["A"]
    r = triplet_rate(5.94e-6, dev_a, 1e7, external_loss_db=9.0)
    assert r.rate_hz == pytest.approx(7.43, rel=5e-3)
    assert r.detected_rate_hz == pytest.approx(r.rate_hz * 10 ** -0.9, rel=1e-12)
    assert r.detected_rate_hz == pytest.approx(0.93, rel=1e-2)
    with pytest.raises(ValueError):
        triplet_rate(-1.0, dev_a, 1e7)


def test_projections_marginals_normalized(pipeline_b):
    twf = pipeline_b["twf"]
    bundle = projections_and_isosurface(twf, threshold=0.1)
    for axis, marg in zip(((1, 2), (0, 2), (0, 1)), bundle.marginals):
        grids = [twf.grid_s1, twf.grid_s2, twf.grid_s3]
        total = marg
        for pos in sorted(axis, reverse=True):
            g = grids[pos]
            w = np.full(g.n, g.x[1] - g.x[0])
            w[0] *= 0.5
            w[-1] *= 0.5
            total = np.tensordot(total, w, axes=([len(total.shape) - 1], [0])) \
                if pos == axis[-1] else np.tensordot(w, total, axes=([0], [0]))
        assert float(total) == pytest.approx(1.0, abs=1e-6)


def test_isosurface_mask_thresholds(pipeline_b):
    twf = pipeline_b["twf"]
    b01 = projections_and_isosurface(twf, threshold=0.1)
    assert b01.mask.any()
    assert b01.mask.sum() < b01.mask.size
    b1 = projections_and_isosurface(twf, threshold=1.0)
    argmax = np.unravel_index(np.argmax(b01.density), b01.density.shape)
    assert b1.mask[argmax]
    assert b1.mask.sum() >= 1
    assert b1.mask.sum() <= 8          # ties only
    with pytest.raises(ValueError):
        projections_and_isosurface(twf, threshold=0.0)
