"""Monte-Carlo BLER / early-termination sweeps with every decoder on shared noise."""
from __future__ import annotations

import csv
import json
import logging
import os
import platform
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .channel import RNG_ALGORITHM, ChannelParams, SnrKind, frame_rng, llr, modulate, transmit
from .crc import CRC24C, CrcSpec
from .list_decoder import DecoderConfig, Status, Variant, scl_decode
from .polar import CodeConfig, bhattacharyya_reliability, build_code_config, encode, load_reliability

log = logging.getLogger(__name__)

OUTPUT_DIR_ENV = "DCAPOLAR_OUTPUT_DIR"


class InvariantError(RuntimeError):
    pass


@dataclass(frozen=True)
class CodeSpec:
    """Static code parameters; ``reliability`` is ``nr``, ``bhattacharyya[:snr_db]`` or a file path."""

    N: int
    A: int
    P: int = 24
    crc_exponents: tuple[int, ...] = tuple(CRC24C.exponents)
    reliability: str = "nr"

    def build(self) -> CodeConfig:
        crc = CrcSpec.from_exponents(self.crc_exponents) if self.P else None
        if self.reliability == "nr":
            rel = None
        elif self.reliability.startswith("bhattacharyya"):
            _, _, snr = self.reliability.partition(":")
            rel = bhattacharyya_reliability(self.N, float(snr or 0.0))
        else:
            rel = load_reliability(self.reliability)
            rel = rel[rel < self.N]
        return build_code_config(self.N, self.A, self.P, crc, rel)


PRESETS = {
    "pbch": CodeSpec(512, 32, 24),
    "pdcch_a": CodeSpec(512, 140, 24),
    "pdcch_b": CodeSpec(256, 128, 24),
}


@dataclass
class RunConfig:
    code: CodeSpec
    decoders: list[DecoderConfig]
    snr_db: list[float]
    snr_kind: SnrKind = SnrKind.ES_N0
    # rate used for Eb/N0: "A/N" or "K/N"
    ebn0_rate: str = "A/N"
    max_frames: int = 1_000_000
    min_frame_errors: int = 100
    seed: int = 0
    batch_size: int = 1000
    workers: int = 1
    output_dir: str | None = None

    def __post_init__(self):
        self.snr_kind = SnrKind(self.snr_kind)
        self.decoders = [d if isinstance(d, DecoderConfig) else DecoderConfig.parse(d) for d in self.decoders]
        if self.min_frame_errors < 1:
            raise ValueError("min_frame_errors must be >= 1")
        if self.max_frames < 1 or self.batch_size < 1:
            raise ValueError("max_frames and batch_size must be positive")
        if not self.decoders:
            raise ValueError("at least one decoder is required")
        if self.ebn0_rate not in ("A/N", "K/N"):
            raise ValueError(f"ebn0_rate must be 'A/N' or 'K/N', got {self.ebn0_rate!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def channel(self, snr_db: float) -> ChannelParams:
        c = self.code
        rate = (c.A if self.ebn0_rate == "A/N" else c.A + c.P) / c.N
        return ChannelParams(snr_db, self.snr_kind, rate)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["code"] = asdict(self.code)
        d["decoders"] = [x.label for x in self.decoders]
        d["snr_kind"] = self.snr_kind.value
        return d


@dataclass
class SnrPointStats:
    code: str
    variant: Variant
    L: int
    snr_db: float
    P: int
    frames: int = 0
    e_tot: int = 0
    e_e: int = 0
    e_w: int = 0
    e_d: int = 0
    et_by_crc_index: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.et_by_crc_index is None:
            self.et_by_crc_index = np.zeros(self.P, dtype=np.int64)

    @property
    def bler(self) -> float:
        return self.e_tot / self.frames if self.frames else float("nan")

    @property
    def epsilon(self) -> float:
        return self.e_e / self.e_tot if self.e_tot else 0.0

    @property
    def epsilon_i(self) -> np.ndarray:
        return self.et_by_crc_index / self.e_tot if self.e_tot else np.zeros(self.P)

    def add(self, tally: np.ndarray) -> None:
        """Fold in a tally vector ``[frames, e_tot, e_e, e_w, e_d, E_e(1..P)...]``."""
        self.frames += int(tally[0])
        self.e_tot += int(tally[1])
        self.e_e += int(tally[2])
        self.e_w += int(tally[3])
        self.e_d += int(tally[4])
        self.et_by_crc_index += tally[5:]

    def check(self) -> None:
        problems = []
        if self.e_tot != self.e_e + self.e_w + self.e_d:
            problems.append("e_tot != e_e + e_w + e_d")
        if int(self.et_by_crc_index.sum()) != self.e_e:
            problems.append("sum of per-CRC-index early terminations != e_e")
        if self.variant is Variant.CS and self.e_e:
            problems.append("check-and-select decoder terminated early")
        if not 0 <= self.e_tot <= self.frames:
            problems.append("frame errors exceed frames")
        if problems:
            raise InvariantError(f"{self.variant.value}-L{self.L} @ {self.snr_db} dB: " + "; ".join(problems))


def tally_frames(
    cfg: CodeConfig,
    decoders: Sequence[DecoderConfig],
    ch: ChannelParams,
    seed: int,
    point: int,
    start: int,
    stop: int,
) -> np.ndarray:
    """Simulate frames ``start..stop-1``; returns one tally row per decoder."""
    out = np.zeros((len(decoders), 5 + cfg.P), dtype=np.int64)
    out[:, 0] = stop - start
    for f in range(start, stop):
        rng = frame_rng(seed, f, point)
        msg = rng.integers(0, 2, cfg.A, dtype=np.uint8)
        y = transmit(modulate(encode(cfg, msg)), ch, rng)
        frame_llr = llr(y, ch)
        for d, dec in enumerate(decoders):
            res = scl_decode(cfg, dec, frame_llr)
            if res.status is Status.OK:
                if not np.array_equal(res.message, msg):
                    out[d, 1] += 1
                    out[d, 3] += 1
            elif res.status is Status.EARLY_TERMINATED:
                out[d, 1] += 1
                out[d, 2] += 1
                out[d, 4 + res.et_crc_index] += 1
            else:
                out[d, 1] += 1
                out[d, 4] += 1
    return out


_worker_state: dict = {}


def _worker_init(code: CodeSpec, decoders: list[DecoderConfig]) -> None:
    _worker_state["cfg"] = code.build()
    _worker_state["decoders"] = decoders


def _worker_run(ch: ChannelParams, seed: int, point: int, start: int, stop: int) -> np.ndarray:
    return tally_frames(_worker_state["cfg"], _worker_state["decoders"], ch, seed, point, start, stop)


def _chunks(start: int, stop: int, parts: int) -> list[tuple[int, int]]:
    edges = np.linspace(start, stop, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def run_sweep(run: RunConfig, progress: bool = False) -> list[SnrPointStats]:
    """Run every SNR point until each decoder has ``min_frame_errors`` or ``max_frames`` is hit.

    The stop rule is evaluated after whole batches of ``batch_size`` frames,
    so results do not depend on the worker count.
    """
    cfg = run.code.build()
    pool = None
    if run.workers > 1:
        pool = ProcessPoolExecutor(run.workers, initializer=_worker_init, initargs=(run.code, run.decoders))
    results: list[SnrPointStats] = []
    try:
        for point, snr in enumerate(run.snr_db):
            ch = run.channel(snr)
            stats = [SnrPointStats(cfg.name, d.variant, d.L, float(snr), cfg.P) for d in run.decoders]
            done = 0
            while done < run.max_frames:
                stop = min(done + run.batch_size, run.max_frames)
                if pool is None:
                    tallies = [tally_frames(cfg, run.decoders, ch, run.seed, point, done, stop)]
                else:
                    jobs = [pool.submit(_worker_run, ch, run.seed, point, a, b)
                            for a, b in _chunks(done, stop, run.workers)]
                    tallies = [j.result() for j in jobs]
                for t in tallies:
                    for s, row in zip(stats, t):
                        s.add(row)
                done = stop
                if progress:
                    log.info("snr %g: %d frames, errors %s", snr, done, [s.e_tot for s in stats])
                if all(s.e_tot >= run.min_frame_errors for s in stats):
                    break
            for s in stats:
                s.check()
            results.extend(stats)
    finally:
        if pool is not None:
            pool.shutdown()
    return results


# ---------------------------------------------------------------------------
# output

RESULT_COLUMNS = [
    "code", "variant", "L", "snr_db", "snr_kind", "frames",
    "e_tot", "e_e", "e_w", "e_d", "bler", "epsilon", "seed",
]
ET_COLUMNS = ["code", "variant", "L", "snr_db", "crc_index", "e_e_i", "epsilon_i"]

MERGE_RULE = (
    "e_tot = e_e + e_w + e_d. e_d counts check-and-keep frames with no CRC-valid "
    "path at the end and no early stop; add it to e_w to recover a two-way split "
    "of failures into early terminations and undetected/undecodable frames."
)


def result_rows(stats: Sequence[SnrPointStats], run: RunConfig) -> list[dict]:
    return [
        {
            "code": s.code, "variant": s.variant.value, "L": s.L, "snr_db": f"{s.snr_db:g}",
            "snr_kind": run.snr_kind.value, "frames": s.frames, "e_tot": s.e_tot, "e_e": s.e_e,
            "e_w": s.e_w, "e_d": s.e_d, "bler": f"{s.bler:.6e}", "epsilon": f"{s.epsilon:.6f}",
            "seed": run.seed,
        }
        for s in stats
    ]


def et_rows(stats: Sequence[SnrPointStats]) -> list[dict]:
    rows = []
    for s in stats:
        eps = s.epsilon_i
        for i in range(s.P):
            rows.append({
                "code": s.code, "variant": s.variant.value, "L": s.L, "snr_db": f"{s.snr_db:g}",
                "crc_index": i + 1, "e_e_i": int(s.et_by_crc_index[i]), "epsilon_i": f"{eps[i]:.6f}",
            })
    return rows


def _write_csv(path: Path, columns: list[str], rows: list[dict]) -> None:
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def default_output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "results"))


def emit_results(stats: Sequence[SnrPointStats], run: RunConfig, out_dir: str | Path | None = None) -> dict[str, Path]:
    """Write ``results.csv``, ``et_by_crc.csv`` and ``manifest.json``."""
    out = Path(out_dir or run.output_dir or default_output_dir())
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "results": out / "results.csv",
        "et_by_crc": out / "et_by_crc.csv",
        "manifest": out / "manifest.json",
    }
    _write_csv(paths["results"], RESULT_COLUMNS, result_rows(stats, run))
    _write_csv(paths["et_by_crc"], ET_COLUMNS, et_rows(stats))
    import numba

    manifest = {
        "config": run.to_dict(),
        "code": run.code.build().to_dict(),
        "rng": RNG_ALGORITHM,
        "noise": "sigma2 = 1 / (2 * 10**(EsN0_dB / 10)), unit-energy BPSK",
        "accounting": MERGE_RULE,
        "versions": {
            "dcapolar": __version__, "numpy": np.__version__, "numba": numba.__version__,
            "python": platform.python_version(),
        },
        "files": {k: v.name for k, v in paths.items() if k != "manifest"},
    }
    paths["manifest"].write_text(json.dumps(manifest, indent=2) + "\n")
    return paths
