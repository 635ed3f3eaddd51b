"""Command line entry point: ``dcapolar simulate | inspect | selftest``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .channel import SnrKind
from .sim import PRESETS, CodeSpec, InvariantError, RunConfig, emit_results, run_sweep

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    if path.suffix == ".toml":
        with path.open("rb") as fh:
            return tomllib.load(fh)
    return json.loads(path.read_text())


def snr_grid(values: list[float] | None, span: list[float] | None) -> list[float] | None:
    if values:
        return [float(v) for v in values]
    if span:
        start, stop, step = span
        if step <= 0:
            raise ValueError("--snr-range step must be positive")
        # stop is inclusive up to rounding
        n = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [round(start + k * step, 10) for k in range(n)]
    return None


def _code_from(args, base: dict) -> CodeSpec:
    code = dict(base.get("code", {}))
    preset = args.preset or base.get("preset")
    if preset:
        spec = PRESETS[preset]
        code = {**spec.__dict__, **code}
    for key in ("N", "A", "P", "reliability"):
        v = getattr(args, key)
        if v is not None:
            code[key] = v
    if "crc_exponents" in code:
        code["crc_exponents"] = tuple(code["crc_exponents"])
    missing = {"N", "A"} - code.keys()
    if missing:
        raise ValueError(f"code is missing {sorted(missing)}; give --preset or --N/--A")
    return CodeSpec(**code)


def build_run_config(args) -> RunConfig:
    base = load_config_file(args.config) if args.config else {}
    fields = {k: v for k, v in base.items() if k not in ("code", "preset")}
    overrides = {
        "decoders": args.decoders,
        "snr_db": snr_grid(args.snr, args.snr_range),
        "snr_kind": args.snr_kind,
        "ebn0_rate": args.ebn0_rate,
        "max_frames": args.max_frames,
        "min_frame_errors": args.min_errors,
        "seed": args.seed,
        "batch_size": args.batch_size,
        "workers": args.workers,
        "output_dir": args.out,
    }
    fields.update({k: v for k, v in overrides.items() if v is not None})
    fields.setdefault("decoders", ["ck:8", "cr:8", "cs:8"])
    if "snr_db" not in fields:
        raise ValueError("no SNR points; give --snr or --snr-range")
    return RunConfig(code=_code_from(args, base), **fields)


def cmd_simulate(args) -> int:
    run = build_run_config(args)
    # reject unsatisfiable codes before simulating anything
    run.code.build()
    stats = run_sweep(run, progress=args.verbose)
    paths = emit_results(stats, run)
    for s in stats:
        print(f"{s.code} {s.variant.value}-L{s.L} {s.snr_db:g} dB: frames={s.frames} "
              f"bler={s.bler:.3e} eps={s.epsilon:.4f} (e_e={s.e_e} e_w={s.e_w} e_d={s.e_d})")
    print(f"wrote {paths['results'].parent}")
    return 0


def cmd_inspect(args) -> int:
    code = _code_from(args, {})
    d = code.build().to_dict()
    if args.field:
        d = {k: d[k] for k in args.field}
    print(json.dumps(d, indent=None if args.compact else 2))
    return 0


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    failed = 0
    for r in run_selftest(args.only or None, args.seed):
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name:15s} {r.seconds:6.2f}s  {r.detail}")
        failed += not r.ok
    return 1 if failed else 0


def _add_code_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--N", type=int)
    p.add_argument("--A", type=int)
    p.add_argument("--P", type=int)
    p.add_argument("--reliability", help="nr, bhattacharyya[:snr_db] or a JSON file")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcapolar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="Monte-Carlo BLER and early-termination sweep")
    sim.add_argument("--config", help="TOML or JSON run configuration; flags override it")
    _add_code_args(sim)
    sim.add_argument("--decoders", nargs="+", help="e.g. ck:8 cr:8 cs-L32 plain:1")
    grid = sim.add_mutually_exclusive_group()
    grid.add_argument("--snr", type=float, nargs="+", help="SNR points in dB")
    grid.add_argument("--snr-range", type=float, nargs=3, metavar=("START", "STOP", "STEP"))
    sim.add_argument("--snr-kind", choices=[k.value for k in SnrKind])
    sim.add_argument("--ebn0-rate", choices=["A/N", "K/N"])
    sim.add_argument("--max-frames", type=int)
    sim.add_argument("--min-errors", type=int)
    sim.add_argument("--seed", type=int)
    sim.add_argument("--batch-size", type=int)
    sim.add_argument("--workers", type=int)
    sim.add_argument("--out", help="output directory (default: $DCAPOLAR_OUTPUT_DIR or ./results)")
    sim.add_argument("-v", "--verbose", action="store_true")
    sim.set_defaults(func=cmd_simulate)

    ins = sub.add_parser("inspect", help="dump the code configuration as JSON")
    _add_code_args(ins)
    ins.add_argument("--field", nargs="+", help="restrict output, e.g. pi pi_inv q_set")
    ins.add_argument("--compact", action="store_true")
    ins.set_defaults(func=cmd_inspect)

    st = sub.add_parser("selftest", help="run the built-in oracle checks")
    st.add_argument("--only", nargs="+")
    st.add_argument("--seed", type=int, default=0)
    st.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(asctime)s %(message)s")
    try:
        return args.func(args)
    except InvariantError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
