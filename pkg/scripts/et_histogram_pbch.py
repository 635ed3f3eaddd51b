"""Per-CRC-index early-termination histogram (eps_i) for CK and CR on PBCH.

    python scripts/et_histogram_pbch.py --L 2 --snr -8 --out results/et_histogram
"""
import argparse

from dcapolar.sim import PRESETS, RunConfig, emit_results, run_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--L", type=int, default=2)
    ap.add_argument("--snr", type=float, default=-8.0)
    ap.add_argument("--min-errors", type=int, default=500)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/et_histogram")
    args = ap.parse_args()

    run = RunConfig(PRESETS["pbch"], [f"ck:{args.L}", f"cr:{args.L}"], [args.snr],
                    min_frame_errors=args.min_errors, seed=args.seed, workers=args.workers)
    ck, cr = run_sweep(run)
    emit_results([ck, cr], run, args.out)
    width = 50
    print(f"eps: CK {ck.epsilon:.2%}  CR {cr.epsilon:.2%}  ({ck.frames} frames)")
    print(f"{'i':>3} {'CK':>7} {'CR':>7}")
    for i, (a, b) in enumerate(zip(ck.epsilon_i, cr.epsilon_i), start=1):
        print(f"{i:>3} {a:>7.2%} {b:>7.2%}  {'#' * round(a * width):<{width}} | {'*' * round(b * width)}")
    print(f"CR mass at i >= 5: {cr.epsilon_i[4:].sum():.2%}")


if __name__ == "__main__":
    main()
