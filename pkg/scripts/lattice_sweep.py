"""Sweep the relative NNN strength on a torus and write CSV + SVG.

    python3 scripts/lattice_sweep.py --rows 4 --cols 4 --step 0.1 --samples 500 --out out/torus4
"""
import argparse
import time
from pathlib import Path

import numpy as np

from minscramble.lattice import LatticeSpec, SweepConfig, render_svg, run_sweep, write_csv


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=4)
    ap.add_argument("--cols", type=int, default=4)
    ap.add_argument("--open", action="store_true", help="open boundaries instead of a torus")
    ap.add_argument("--no-nnn", action="store_true")
    ap.add_argument("--xmax", type=float, default=5.0)
    ap.add_argument("--step", type=float, default=0.1)
    ap.add_argument("--samples", type=int, default=500)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--workers", type=int, default=0, help="0 = all cores")
    ap.add_argument("--out", default="out/sweep")
    args = ap.parse_args()

    xs = np.round(np.arange(0.0, args.xmax + args.step / 2, args.step), 10)
    spec = LatticeSpec(args.rows, args.cols, periodic=not args.open, nnn=not args.no_nnn)
    cfg = SweepConfig(spec, tuple(xs), args.samples, args.seed)
    t0 = time.perf_counter()
    records = run_sweep(cfg, workers=args.workers)
    elapsed = time.perf_counter() - t0

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(records, out.with_suffix(".csv"))
    render_svg(records, out.with_name(out.name + "_S.svg"), "mean_S_size")
    render_svg(records, out.with_name(out.name + "_rate.svg"), "mean_rate")
    print(f"{len(records)} points x {args.samples} samples in {elapsed:.1f}s -> {out.with_suffix('.csv')}")
    for r in records[:: max(1, len(records) // 10)]:
        print(f"x={r.x:5.2f}  rate={r.mean_rate:.3f}  |S|={r.mean_S_size:.3f} +- {r.sem('mean_S_size'):.3f}")


if __name__ == "__main__":
    main()
