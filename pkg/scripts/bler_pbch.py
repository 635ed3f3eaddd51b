"""BLER versus Es/N0 for CK, CR and CS on a preset code, all decoders on shared noise.

    python scripts/bler_pbch.py --L 8 --snr-range -10 -7 0.5 --out results/bler_L8
"""
import argparse

import numpy as np

from dcapolar.sim import PRESETS, RunConfig, emit_results, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--preset", default="pbch", choices=sorted(PRESETS))
    ap.add_argument("--L", type=int, nargs="+", default=[8])
    ap.add_argument("--snr-range", type=float, nargs=3, default=[-10.0, -7.0, 0.5])
    ap.add_argument("--min-errors", type=int, default=100)
    ap.add_argument("--max-frames", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/bler")
    args = ap.parse_args()

    start, stop, step = args.snr_range
    snrs = [round(float(s), 6) for s in np.arange(start, stop + step / 2, step)]
    decoders = [f"{v}:{L}" for L in args.L for v in ("ck", "cr", "cs")]
    run = RunConfig(PRESETS[args.preset], decoders, snrs, min_frame_errors=args.min_errors,
                    max_frames=args.max_frames, seed=args.seed, workers=args.workers)
    stats = run_sweep(run, progress=True)
    emit_results(stats, run, args.out)
    labels = [f"{s.variant.value}-L{s.L}" for s in stats[: len(decoders)]]
    print(f"{'SNR':>6} " + " ".join(f"{x:>10}" for x in labels))
    for k, snr in enumerate(snrs):
        row = stats[k * len(decoders):(k + 1) * len(decoders)]
        print(f"{snr:>6} " + " ".join(f"{s.bler:>10.3e}" for s in row))


if __name__ == "__main__":
    main()
