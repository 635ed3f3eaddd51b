"""Early-termination probability for one frame error, CK vs CR on PBCH, per list size.

    python scripts/et_probability_pbch.py --out results/et_probability [--workers 4]
"""
import argparse

from dcapolar.sim import PRESETS, RunConfig, emit_results, run_sweep

# Es/N0 (dB) where CK decoding of PBCH sits near BLER 1e-2
DEFAULT_POINTS = {2: -8.0, 4: -8.5, 8: -8.75, 16: -9.1, 32: -9.4}


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--lists", type=int, nargs="+", default=list(DEFAULT_POINTS))
    ap.add_argument("--min-errors", type=int, default=300)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="results/et_probability")
    args = ap.parse_args()

    print(f"{'L':>3} {'SNR':>6} {'frames':>8} {'BLER CK':>9} {'eps CK':>8} {'eps CR':>8}")
    for L in args.lists:
        snr = DEFAULT_POINTS.get(L, -9.4)
        run = RunConfig(PRESETS["pbch"], [f"ck:{L}", f"cr:{L}"], [snr], min_frame_errors=args.min_errors,
                        seed=args.seed, workers=args.workers)
        ck, cr = run_sweep(run)
        emit_results([ck, cr], run, f"{args.out}/L{L}")
        print(f"{L:>3} {snr:>6} {ck.frames:>8} {ck.bler:>9.2e} {ck.epsilon:>8.2%} {cr.epsilon:>8.2%}")


if __name__ == "__main__":
    main()
