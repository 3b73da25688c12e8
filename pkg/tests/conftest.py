"""Shared fixtures: preset devices and moderately sized pipeline runs."""

import numpy as np
import pytest

import ringcascade as rc
from ringcascade.device import BandId
from ringcascade.pump import amplitude_from_drive


@pytest.fixture(scope="session")
def preset_devices():
    out = {}
    for pid in ("A", "B", "C"):
        cfg = rc.build_preset(pid)
        out[pid] = (cfg, cfg.build_device())
    return out


def run_pipeline(pid, signal_n=32, contraction_n=192, check=False, **overrides):
    cfg = rc.build_preset(pid)
    cfg.grids.signal_n = signal_n
    cfg.grids.idler_contraction_n = contraction_n
    for key, val in overrides.items():
        setattr(cfg.numerics, key, val) if hasattr(cfg.numerics, key) else \
            setattr(cfg.grids, key, val)
    dev = cfg.build_device()
    p1s, p2s = cfg.build_pump_specs()
    pump1 = amplitude_from_drive(p1s, dev.band(BandId.P1))
    pump2 = amplitude_from_drive(p2s, dev.band(BandId.P2))
    grids = cfg.build_grids(dev)
    bwf = rc.compute_bwf(dev, pump1, grids)
    twf = rc.compute_twf(dev, pump2, bwf, grids, epsilon=cfg.numerics.epsilon,
                         check_convergence=check)
    return dict(cfg=cfg, dev=dev, pump1=pump1, pump2=pump2, grids=grids,
                bwf=bwf, twf=twf)


@pytest.fixture(scope="session")
def pipeline_b():
    """Preset B at reduced grids: the workhorse fixture."""
    return run_pipeline("B")


@pytest.fixture(scope="session")
def pipeline_a():
    """Preset A (CW second pump) at reduced grids."""
    return run_pipeline("A")


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260809)
