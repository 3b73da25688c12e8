"""Configuration documents: schema, validation, YAML round-trip, builders.

A run is described by one plain-text YAML document with explicit units in the
key names.  Parsing and serialization round-trip exactly (floats keep their
shortest-repr form).  ``ConfigError`` maps to CLI exit code 2.
"""

from __future__ import annotations

import io
from dataclasses import asdict, dataclass, field
from pathlib import Path

import yaml

from .device import BandId, BandSpec, DeviceSpec, RingResonance
from .pump import PumpSpec
from .wavefunctions import GridSet
from . import pump as pump_mod

SCHEMA_VERSION = 1

BAND_NAMES = ("P1", "S1", "I", "P2", "S2", "S3")


class ConfigError(ValueError):
    """Invalid or inconsistent configuration (CLI exit code 2)."""


@dataclass
class BandConfig:
    wavelength_nm: float
    group_velocity_m_per_s: float


@dataclass
class ResonanceConfig:
    q_intrinsic: float
    eta_ac: float | None = None
    q_coupling_ac: float | None = None
    detuning_rad_per_s: float = 0.0   # resonance offset from the band center

    def validate(self, where: str):
        given = [x for x in (self.eta_ac, self.q_coupling_ac) if x is not None]
        if len(given) != 1:
            raise ConfigError(f"{where}: give exactly one of eta_ac / q_coupling_ac")
        if self.q_intrinsic <= 0:
            raise ConfigError(f"{where}: q_intrinsic must be positive")
        if self.eta_ac is not None and not 0.0 < self.eta_ac < 1.0:
            raise ConfigError(f"{where}: eta_ac must be in (0, 1)")


@dataclass
class RingConfig:
    radius_um: float
    gamma_nl_per_w_m: float


@dataclass
class DeviceConfig:
    ring1: RingConfig
    ring2: RingConfig
    coupling_half_separation_um: float
    bands: dict                       # name -> BandConfig
    resonances: dict                  # ring(int) -> {name -> ResonanceConfig}


@dataclass
class PumpConfig:
    band: str
    shape: str                        # "gaussian" | "cw"
    drive: dict                       # exactly one unit-keyed entry
    fwhm_ps: float | None = None
    repetition_rate_mhz: float | None = None
    detuning_rad_per_s: float = 0.0

    _DRIVE_KEYS = ("pulse_energy_pj", "peak_power_mw", "cw_power_mw")

    def validate(self, where: str):
        if self.shape not in ("gaussian", "cw"):
            raise ConfigError(f"{where}: shape must be 'gaussian' or 'cw'")
        bad = [k for k in self.drive if k not in self._DRIVE_KEYS]
        if bad or len(self.drive) != 1:
            raise ConfigError(
                f"{where}: drive needs exactly one of {self._DRIVE_KEYS}")
        if self.shape == "cw" and "cw_power_mw" not in self.drive:
            raise ConfigError(f"{where}: CW pump requires cw_power_mw")
        if self.shape == "gaussian":
            if "cw_power_mw" in self.drive:
                raise ConfigError(f"{where}: pulsed pump cannot take cw_power_mw")
            if not self.fwhm_ps or self.fwhm_ps <= 0:
                raise ConfigError(f"{where}: pulsed pump needs fwhm_ps > 0")
            if not self.repetition_rate_mhz or self.repetition_rate_mhz <= 0:
                raise ConfigError(f"{where}: pulsed pump needs repetition_rate_mhz > 0")

    def to_pump_spec(self) -> PumpSpec:
        kw = dict(band=BandId(self.band), detuning=self.detuning_rad_per_s)
        if self.shape == "cw":
            return PumpSpec(cw_power=self.drive["cw_power_mw"] * 1e-3, **kw)
        kw.update(fwhm=self.fwhm_ps * 1e-12,
                  repetition_rate=self.repetition_rate_mhz * 1e6)
        if "pulse_energy_pj" in self.drive:
            return PumpSpec(pulse_energy=self.drive["pulse_energy_pj"] * 1e-12, **kw)
        return PumpSpec(peak_power=self.drive["peak_power_mw"] * 1e-3, **kw)


@dataclass
class GridConfig:
    signal_n: int = 64
    signal_span: float = 8.0
    idler_output_n: int = 64
    idler_output_span: float = 8.0
    idler_contraction_n: int = 256
    idler_contraction_span: float = 16.0
    pump_n: int = 256
    pump_span: float = 16.0
    pump_auto_widen: bool = True


@dataclass
class NumericsConfig:
    epsilon: float = 1.0e-3
    check_convergence: bool = True
    threads: int = 1


@dataclass
class OutputConfig:
    directory: str = "runs/out"


@dataclass
class SimulationConfig:
    device: DeviceConfig
    pump1: PumpConfig
    pump2: PumpConfig
    grids: GridConfig = field(default_factory=GridConfig)
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    preset: str | None = None
    schema: int = SCHEMA_VERSION

    # -- validation / builders ------------------------------------------------
    def validate(self) -> "SimulationConfig":
        if self.schema != SCHEMA_VERSION:
            raise ConfigError(f"unsupported schema version {self.schema}")
        dev = self.device
        for name in BAND_NAMES:
            if name not in dev.bands:
                raise ConfigError(f"device.bands missing {name}")
            b = dev.bands[name]
            if b.wavelength_nm <= 0 or b.group_velocity_m_per_s <= 0:
                raise ConfigError(f"device.bands.{name}: values must be positive")
        hosted = {1: ("P1", "S1", "I"), 2: ("P2", "S2", "S3", "I")}
        for ring, names in hosted.items():
            ring_res = dev.resonances.get(ring)
            if ring_res is None:
                raise ConfigError(f"device.resonances missing ring{ring}")
            for name in names:
                if name not in ring_res:
                    raise ConfigError(f"ring{ring} resonance table missing {name}")
                ring_res[name].validate(f"device.resonances.ring{ring}.{name}")
            extra = set(ring_res) - set(names)
            if extra:
                raise ConfigError(f"ring{ring} cannot host {sorted(extra)}")
        if dev.ring1.radius_um <= 0 or dev.ring2.radius_um <= 0:
            raise ConfigError("ring radii must be positive")
        self.pump1.validate("pumps.p1")
        self.pump2.validate("pumps.p2")
        if self.pump1.band != "P1":
            raise ConfigError("pumps.p1 must drive band P1")
        if self.pump2.band != "P2":
            raise ConfigError("pumps.p2 must drive band P2")
        if self.pump1.shape != "gaussian":
            raise ConfigError("pump 1 must be pulsed (the pair probability is per pulse)")
        g = self.grids
        for label, n, span in (("signal", g.signal_n, g.signal_span),
                               ("idler_output", g.idler_output_n, g.idler_output_span),
                               ("idler_contraction", g.idler_contraction_n,
                                g.idler_contraction_span),
                               ("pump", g.pump_n, g.pump_span)):
            if n < 8 or span <= 0:
                raise ConfigError(f"grids.{label}: need n >= 8 and span > 0")
        if self.numerics.epsilon <= 0:
            raise ConfigError("numerics.epsilon must be positive")
        if self.numerics.threads < 1:
            raise ConfigError("numerics.threads must be >= 1")
        return self

    def build_device(self) -> DeviceSpec:
        dev = self.device
        bands = {}
        for name in BAND_NAMES:
            bc = dev.bands[name]
            bands[BandId(name)] = BandSpec(
                band=BandId(name),
                center_wavelength=bc.wavelength_nm * 1e-9,
                group_velocity=bc.group_velocity_m_per_s)
        resonances = {}
        for ring, table in dev.resonances.items():
            for name, rc in table.items():
                band = BandId(name)
                w_res = bands[band].center_angular_frequency + rc.detuning_rad_per_s
                if rc.eta_ac is not None:
                    res = RingResonance.from_eta(ring, band, w_res,
                                                 rc.q_intrinsic, rc.eta_ac)
                else:
                    res = RingResonance(ring, band, w_res, rc.q_intrinsic,
                                        rc.q_coupling_ac)
                resonances[(ring, band)] = res
        return DeviceSpec(
            radius1=dev.ring1.radius_um * 1e-6,
            radius2=dev.ring2.radius_um * 1e-6,
            half_separation=self.device.coupling_half_separation_um * 1e-6,
            gamma_nl1=dev.ring1.gamma_nl_per_w_m,
            gamma_nl2=dev.ring2.gamma_nl_per_w_m,
            bands=bands,
            resonances=resonances)

    def build_pump_specs(self) -> tuple[PumpSpec, PumpSpec]:
        return self.pump1.to_pump_spec(), self.pump2.to_pump_spec()

    def build_grids(self, device: DeviceSpec) -> GridSet:
        p1_spec = self.pump1.to_pump_spec()
        spectrum = pump_mod.amplitude_from_drive(p1_spec, device.band(BandId.P1))
        g = self.grids
        return GridSet.build(
            device, pump1_spectrum=spectrum,
            signal_n=g.signal_n, signal_span=g.signal_span,
            idler_out_n=g.idler_output_n, idler_out_span=g.idler_output_span,
            contraction_n=g.idler_contraction_n,
            contraction_span=g.idler_contraction_span,
            pump_n=g.pump_n, pump_span=g.pump_span,
            pump_auto_widen=g.pump_auto_widen)

    # -- serialization ----------------------------------------------------
    def to_dict(self) -> dict:
        d = {
            "schema": self.schema,
            "device": {
                "ring1": asdict(self.device.ring1),
                "ring2": asdict(self.device.ring2),
                "coupling_half_separation_um": self.device.coupling_half_separation_um,
                "bands": {k: asdict(v) for k, v in self.device.bands.items()},
                "resonances": {
                    f"ring{ring}": {name: _strip_none(asdict(rc))
                                    for name, rc in table.items()}
                    for ring, table in self.device.resonances.items()},
            },
            "pumps": {"p1": _strip_none(asdict(self.pump1)),
                      "p2": _strip_none(asdict(self.pump2))},
            "grids": asdict(self.grids),
            "numerics": asdict(self.numerics),
            "output": asdict(self.output),
        }
        if self.preset:
            d["preset"] = self.preset
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SimulationConfig":
        try:
            dev = d["device"]
            bands = {k: BandConfig(**v) for k, v in dev["bands"].items()}
            resonances = {}
            for ring_name, table in dev["resonances"].items():
                ring = int(ring_name.removeprefix("ring"))
                resonances[ring] = {k: ResonanceConfig(**v) for k, v in table.items()}
            cfg = cls(
                schema=d.get("schema", SCHEMA_VERSION),
                preset=d.get("preset"),
                device=DeviceConfig(
                    ring1=RingConfig(**dev["ring1"]),
                    ring2=RingConfig(**dev["ring2"]),
                    coupling_half_separation_um=dev["coupling_half_separation_um"],
                    bands=bands, resonances=resonances),
                pump1=PumpConfig(**d["pumps"]["p1"]),
                pump2=PumpConfig(**d["pumps"]["p2"]),
                grids=GridConfig(**d.get("grids", {})),
                numerics=NumericsConfig(**d.get("numerics", {})),
                output=OutputConfig(**d.get("output", {})),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed configuration: {exc}") from exc
        return cfg.validate()

    def dump_yaml(self) -> str:
        buf = io.StringIO()
        yaml.safe_dump(self.to_dict(), buf, sort_keys=False,
                       default_flow_style=False)
        return buf.getvalue()

    @classmethod
    def load_yaml(cls, text: str) -> "SimulationConfig":
        try:
            d = yaml.safe_load(text)
        except yaml.YAMLError as exc:
            raise ConfigError(f"invalid YAML: {exc}") from exc
        if not isinstance(d, dict):
            raise ConfigError("configuration document must be a mapping")
        return cls.from_dict(d)

    @classmethod
    def load_file(cls, path: str | Path) -> "SimulationConfig":
        return cls.load_yaml(Path(path).read_text(encoding="utf-8"))


def _strip_none(d: dict) -> dict:
    return {k: v for k, v in d.items() if v is not None}
