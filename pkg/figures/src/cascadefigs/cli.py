"""Standalone renderer: triptych figures and comparison reports."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .reader import load_bundle
from .render import FigureJob, render_report, render_twf_figure


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cascadefigs",
        description="render triplet-wavefunction figures and reports "
                    "from simulation manifest bundles")
    p.add_argument("--manifest", action="append", required=True,
                   help="manifest.json (or its directory); repeatable")
    p.add_argument("--out", type=Path,
                   help="output image path (single manifest) or directory")
    p.add_argument("--threshold", type=float, default=0.1,
                   help="isosurface level as a fraction of the maximum")
    p.add_argument("--report", action="store_true",
                   help="print a comparison table instead of rendering")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.report:
            bundles = [load_bundle(m) for m in args.manifest]
            print(render_report(bundles))
            return 0
        outs = []
        for m in args.manifest:
            if args.out and len(args.manifest) == 1 and args.out.suffix:
                out = args.out
            else:
                base = args.out if args.out else Path(".")
                bundle = load_bundle(m)
                tag = bundle.preset or Path(m).resolve().parent.name
                out = Path(base) / f"twf_{tag}.png"
            job = FigureJob(manifest_path=m, out_path=str(out),
                            threshold=args.threshold)
            outs.extend(render_twf_figure(job))
        for o in outs:
            print(f"wrote {o}")
        return 0
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
