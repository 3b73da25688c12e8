"""Command-line interface.

Subcommands: ``run`` (full pipeline + export), ``preset`` (emit a reference
configuration), ``check`` (config validation + energy-conservation and
device diagnostics), ``sweep`` (convergence drift table), ``gamma-nl``
(nonlinear parameter from an ingested mode profile).  Exit codes: 0 success,
2 configuration error, 3 convergence error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import ConfigError, SimulationConfig
from .device import BandId, check_energy_conservation
from .presets import build_preset
from .pump import amplitude_from_drive, intracavity_peak_power, spectral_intensity_fwhm_hz
from .wavefunctions import ConvergenceError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3


def _load_config(args) -> SimulationConfig:
    if getattr(args, "preset", None) and getattr(args, "config", None):
        raise ConfigError("give either --config or --preset, not both")
    if getattr(args, "preset", None):
        cfg = build_preset(args.preset)
    elif getattr(args, "config", None):
        cfg = SimulationConfig.load_file(args.config)
    else:
        raise ConfigError("one of --config PATH or --preset A|B|C is required")
    if getattr(args, "grid_n", None):
        cfg.grids.signal_n = args.grid_n
    if getattr(args, "grid_span", None):
        cfg.grids.signal_span = args.grid_span
    if getattr(args, "epsilon", None):
        cfg.numerics.epsilon = args.epsilon
    if getattr(args, "threads", None):
        cfg.numerics.threads = args.threads
    if getattr(args, "out", None):
        cfg.output.directory = str(args.out)
    return cfg.validate()


def _cmd_run(args) -> int:
    from .runner import run
    cfg = _load_config(args)
    man = run(cfg, force_oracle=args.oracle)
    s = man.scalars
    print(f"run complete -> {cfg.output.directory}")
    print(f"  |beta|^2  = {s['beta2']:.4e}")
    print(f"  |sigma|^2 = {s['sigma2']:.4e}")
    print(f"  purities  = {s['purity_p1']:.4f} / {s['purity_p2']:.4f} / "
          f"{s['purity_p3']:.4f}")
    print(f"  triplet rate = {s['triplet_rate_hz']:.3g} Hz")
    return EXIT_OK


def _cmd_preset(args) -> int:
    cfg = build_preset(args.id)
    text = cfg.dump_yaml()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote preset {args.id.upper()} to {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_check(args) -> int:
    cfg = _load_config(args)
    dev = cfg.build_device()
    rep = check_energy_conservation(dev)
    print("configuration valid")
    print(f"idler wavelength solving first-process conservation: "
          f"{rep.idler_wavelength_delta1_zero * 1e9:.4f} nm")
    print(f"Delta1 = {rep.delta1:+.4e} rad/s ({rep.delta1_linewidths:+.4f} linewidths)")
    print(f"Delta2 = {rep.delta2:+.4e} rad/s ({rep.delta2_linewidths:+.4f} linewidths)")
    print("aligned" if rep.aligned() else "WARNING: bands misaligned (> 0.1 linewidth)")
    print()
    print(f"{'ring':>4} {'band':>4} {'Q_load':>10} {'eta_ac':>7} "
          f"{'Gamma_tot [rad/s]':>18} {'dwell [ps]':>10}")
    for (ring, band), res in sorted(dev.resonances.items(),
                                    key=lambda kv: (kv[0][0], kv[0][1].value)):
        print(f"{ring:>4} {band.value:>4} {res.q_loaded:>10.3e} "
              f"{res.eta_ac:>7.3f} {res.gamma_total:>18.4e} "
              f"{res.dwell_time * 1e12:>10.1f}")
    print()
    for label, pump_cfg in (("pump 1", cfg.pump1), ("pump 2", cfg.pump2)):
        spec = pump_cfg.to_pump_spec()
        band = dev.band(BandId(pump_cfg.band))
        ring = 1 if pump_cfg.band == "P1" else 2
        res = dev.resonance(ring, BandId(pump_cfg.band))
        peak = intracavity_peak_power(res, spec, band, dev)
        if spec.is_cw:
            print(f"{label}: CW {spec.cw_power * 1e3:.3g} mW, "
                  f"circulating {peak:.3g} W")
        else:
            bw = spectral_intensity_fwhm_hz(spec.fwhm)
            print(f"{label}: {spec.fwhm * 1e12:.3g} ps, "
                  f"{spec.energy() * 1e12:.3g} pJ, spectral FWHM {bw / 1e9:.3g} GHz, "
                  f"peak circulating {peak:.3g} W")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    from .runner import convergence_sweep
    cfg = _load_config(args)
    rows = convergence_sweep(cfg, args.axis)
    cols = ["setting", "beta2", "sigma2", "p1", "p2", "p3"]
    print("  ".join(f"{c:>14}" for c in cols + ["d_sigma2", "d_p2"]))
    for row in rows:
        vals = [f"{row['setting']:>14}"] + [f"{row[c]:>14.6e}" for c in cols[1:]]
        vals.append(f"{row.get('drift_sigma2', float('nan')):>14.3e}")
        vals.append(f"{row.get('drift_p2', float('nan')):>14.3e}")
        print("  ".join(vals))
    return EXIT_OK


def _cmd_gamma_nl(args) -> int:
    from .kernels import Chi3Tensor, gamma_nl, load_mode_profile
    cfg = _load_config(args) if (args.config or args.preset) else build_preset("A")
    dev = cfg.build_device()
    grid = load_mode_profile(args.modes, normalize=not args.no_normalize)
    names = args.bands.split(",")
    if len(names) != 4:
        raise ConfigError("--bands needs four comma-separated band names")
    specs = tuple(dev.band(BandId(n.strip())) for n in names)
    val, resid = gamma_nl((grid, grid, grid, grid), specs, Chi3Tensor(args.chi3))
    print(f"gamma_NL = {val:.6g} (W m)^-1   (imaginary residual {resid:.2e})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="ringcascade",
        description="cascaded-SFWM photon-triplet simulator for dual microrings")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, with_grid=True):
        sp.add_argument("--config", type=Path, help="configuration file (YAML)")
        sp.add_argument("--preset", choices=["A", "B", "C", "a", "b", "c"],
                        help="use a built-in reference configuration")
        if with_grid:
            sp.add_argument("--out", type=Path, help="output directory")
            sp.add_argument("--grid-n", type=int, help="signal-grid points per axis")
            sp.add_argument("--grid-span", type=float,
                            help="signal-grid half span in linewidths")
            sp.add_argument("--epsilon", type=float,
                            help="resolvent regularization in idler linewidths")
            sp.add_argument("--threads", type=int, help="assembly worker threads")

    sp = sub.add_parser("run", help="run the pipeline and export a manifest bundle")
    add_common(sp)
    sp.add_argument("--oracle", action="store_true",
                    help="force the brute-force evaluation path (slow)")
    sp.set_defaults(fn=_cmd_run)

    sp = sub.add_parser("preset", help="emit a reference configuration")
    sp.add_argument("id", choices=["A", "B", "C", "a", "b", "c"])
    sp.add_argument("--out", type=Path)
    sp.set_defaults(fn=_cmd_preset)

    sp = sub.add_parser("check", help="validate a configuration and report diagnostics")
    add_common(sp, with_grid=False)
    sp.set_defaults(fn=_cmd_check)

    sp = sub.add_parser("sweep", help="convergence drift table along one axis")
    add_common(sp)
    sp.add_argument("--axis", choices=["grid_n", "grid_span", "epsilon"],
                    required=True)
    sp.set_defaults(fn=_cmd_sweep)

    sp = sub.add_parser("gamma-nl", help="nonlinear parameter from a mode profile")
    sp.add_argument("--modes", required=True, type=Path,
                    help="mode-profile manifest (JSON + raw binary arrays)")
    sp.add_argument("--bands", default="S1,I,P1,P1",
                    help="four band names: created, created', annihilated, annihilated'")
    sp.add_argument("--chi3", type=float, default=5.6e-19,
                    help="chi3 tensor scale [m^2/V^2]")
    sp.add_argument("--no-normalize", action="store_true",
                    help="trust the file normalization instead of renormalizing")
    sp.add_argument("--config", type=Path)
    sp.add_argument("--preset", choices=["A", "B", "C", "a", "b", "c"])
    sp.set_defaults(fn=_cmd_gamma_nl)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
