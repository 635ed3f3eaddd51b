"""Acceptance criteria 1-10, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` (or ``python tests/test_acceptance.py``).
The statistical criteria run PBCH sweeps at frozen operating points and take
a few minutes on one core.
"""
import itertools
import math
import time

import numpy as np
import pytest

from dcapolar.channel import ChannelParams, frame_rng, llr, modulate, transmit
from dcapolar.crc import CRC24C, CrcSpec, build_crc_matrix, crc_encode, crc_oracle_remainder
from dcapolar.interleaver import build_interleaver, distributed_count
from dcapolar.list_decoder import DecoderConfig, Status, Variant, run_kernel, scl_decode
from dcapolar.oracles import brute_force_min_metric
from dcapolar.polar import build_code_config, encode, polar_transform, sc_decode
from dcapolar.sim import PRESETS, RunConfig, emit_results, run_sweep

REPORT: list[str] = []
SEED = 20240917

# Es/N0 points where check-and-keep decoding of PBCH has BLER near 1e-2
OPERATING_POINT = {2: -8.0, 4: -8.5, 8: -8.75, 32: -9.4}
BLER_BAND = (3e-3, 3e-2)


def report(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    REPORT.append(line)
    print("\n" + line)
    assert ok, line


def noisy_pbch_llrs(cfg, snr_db, frames, seed):
    p = ChannelParams(snr_db)
    for f in range(frames):
        r = frame_rng(seed, f)
        msg = r.integers(0, 2, cfg.A, dtype=np.uint8)
        yield msg, llr(transmit(modulate(encode(cfg, msg)), p, r), p)


@pytest.fixture(scope="module")
def pbch():
    return build_code_config(512, 32, 24)


@pytest.fixture(scope="module")
def sweeps():
    """PBCH sweeps shared by criteria 7-9, keyed by list size."""
    out = {}
    for L, snr in OPERATING_POINT.items():
        decoders = [f"ck:{L}", f"cr:{L}"] + ([f"cs:{L}"] if L == 8 else [])
        run = RunConfig(PRESETS["pbch"], decoders, [snr], max_frames=1_000_000,
                        min_frame_errors=500 if L == 8 else 300, seed=SEED, batch_size=1000)
        out[L] = {s.variant: s for s in run_sweep(run)}
    return out


def test_c01_crc_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    bad = 0
    toy = CrcSpec.from_exponents([3, 1, 0])
    for A in range(1, 13):
        msgs = np.array(list(itertools.product((0, 1), repeat=A)), dtype=np.uint8)
        par = crc_encode(msgs, build_crc_matrix(toy, A))[:, A:]
        bad += sum(not np.array_equal(p, crc_oracle_remainder(m, toy)) for m, p in zip(msgs, par))
    for A in (32, 128, 140):
        msgs = rng.integers(0, 2, (10_000, A), dtype=np.uint8)
        par = crc_encode(msgs, build_crc_matrix(CRC24C, A))[:, A:]
        bad += sum(not np.array_equal(p, crc_oracle_remainder(m, CRC24C)) for m, p in zip(msgs, par))
    dt = time.perf_counter() - t0
    report(1, bad == 0 and dt < 10, f"{bad} mismatches, {dt:.2f}s")


def test_c02_interleaver():
    t0 = time.perf_counter()
    problems = []
    for K in range(25, 165):
        A = K - 24
        il = build_interleaver(K, 24)
        if sorted(il.pi.tolist()) != list(range(K)):
            problems.append(f"K={K} not a permutation")
        rows = build_crc_matrix(CRC24C, A).rows
        pos = np.empty(K, dtype=int)
        pos[il.pi] = np.arange(K)
        for p in range(24):
            deps = np.flatnonzero(rows[:, p])
            if deps.size and pos[deps].max() > pos[A + p]:
                problems.append(f"K={K} CRC bit {p} precedes a message bit it checks")
    counts = {K: distributed_count(build_interleaver(K, 24), K - 24) for K in (56, 152, 164)}
    dt = time.perf_counter() - t0
    ok = not problems and counts == {56: 3, 152: 7, 164: 7} and dt < 5
    report(2, ok, f"{len(problems)} structural problems, distributed counts {counts}, {dt:.2f}s")


def test_c03_involution_and_round_trip(pbch):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    fails = 0
    for N in (8, 64, 512):
        u = rng.integers(0, 2, (1000, N), dtype=np.uint8)
        fails += int((polar_transform(polar_transform(u)) != u).any(axis=1).sum())
    for variant in Variant:
        for L in (1, 2, 4, 8):
            dec = DecoderConfig(L, variant)
            for msg in rng.integers(0, 2, (1000, 32), dtype=np.uint8):
                out = scl_decode(pbch, dec, 2.0 * modulate(encode(pbch, msg)))
                fails += out.status is not Status.OK or not np.array_equal(out.message, msg)
    dt = time.perf_counter() - t0
    report(3, fails == 0 and dt < 60, f"{fails} failures over 3000 vectors and 16000 frames, {dt:.1f}s")


def test_c04_sc_scl_consistency(pbch):
    mismatches = 0
    for k, snr in enumerate((-6.0, -3.0, 0.0)):
        for _, lam in noisy_pbch_llrs(pbch, snr, 1000, SEED + k):
            out = scl_decode(pbch, DecoderConfig(1, Variant.PLAIN), lam)
            mismatches += not np.array_equal(out.u_hat, sc_decode(pbch, lam))
    report(4, mismatches == 0, f"{mismatches} mismatches over 3000 frames")


def test_c05_ml_oracle():
    t0 = time.perf_counter()
    cfg = build_code_config(8, 4, 0, None)
    rng = np.random.default_rng(SEED)
    mismatches = 0
    for _ in range(1000):
        lam = 2 * (modulate(encode(cfg, rng.integers(0, 2, 4))) + rng.normal(0, 1.0, 8))
        out = scl_decode(cfg, DecoderConfig(16, Variant.PLAIN), lam)
        u_ml, _ = brute_force_min_metric(lam, cfg.info_set, 8)
        mismatches += not np.array_equal(out.u_hat, u_ml)
    dt = time.perf_counter() - t0
    report(5, mismatches == 0 and dt < 10, f"{mismatches} mismatches over 1000 frames, {dt:.2f}s")


def test_c06_variant_invariants(pbch):
    cs_bad = cs_et = cr_bad = cr_live = 0
    for _, lam in noisy_pbch_llrs(pbch, OPERATING_POINT[8], 10_000, SEED):
        cs = run_kernel(pbch, DecoderConfig(8, Variant.CS), lam)
        cs_et += cs.status is Status.EARLY_TERMINATED
        for u in cs.paths_u:
            c = pbch.interleaver.deinterleave(u[pbch.info_set])
            cs_bad += not np.array_equal(c[32:], crc_oracle_remainder(c[:32], CRC24C))
        cr = run_kernel(pbch, DecoderConfig(8, Variant.CR), lam, trace=True)
        cr_bad += cr.violations
        cr_live += int(cr.live_trace.max() > 8)
    ok = cs_bad == cs_et == cr_bad == cr_live == 0
    report(6, ok, f"CS: {cs_bad} paths failing the CRC, E_e={cs_et}; "
                  f"CR: {cr_bad} parity violations, {cr_live} frames over L (10^4 frames)")


@pytest.mark.slow
def test_c07_early_termination_trend(sweeps):
    lines, ok = [], True
    for L, cells in sweeps.items():
        ck, cr = cells[Variant.CK], cells[Variant.CR]
        ok &= min(ck.e_tot, cr.e_tot) >= 300
        ok &= BLER_BAND[0] <= ck.bler <= BLER_BAND[1]
        if L in (2, 4, 8):
            ok &= ck.epsilon >= cr.epsilon
        lines.append(f"L={L}@{OPERATING_POINT[L]}dB bler(CK)={ck.bler:.2e} "
                     f"eps CK={ck.epsilon:.2%} CR={cr.epsilon:.2%} (errors {ck.e_tot}/{cr.e_tot})")
    ck2, cr2 = sweeps[2][Variant.CK].epsilon, sweeps[2][Variant.CR].epsilon
    ok &= ck2 > 0.90 and 0.50 <= cr2 <= 0.85
    ok &= sweeps[32][Variant.CK].epsilon < 0.02 and sweeps[32][Variant.CR].epsilon < 0.02
    report(7, ok, "; ".join(lines))


@pytest.mark.slow
def test_c08_bler_ordering(sweeps):
    cells = sweeps[8]
    ck, cr, cs = cells[Variant.CK], cells[Variant.CR], cells[Variant.CS]

    def slack(a, b):
        return 2 * math.sqrt(a.bler * (1 - a.bler) / a.frames + b.bler * (1 - b.bler) / b.frames)

    ok = min(ck.e_tot, cr.e_tot, cs.e_tot) >= 500 and BLER_BAND[0] <= ck.bler <= BLER_BAND[1]
    ok &= cs.bler <= cr.bler + slack(cs, cr)
    ok &= cr.bler <= ck.bler + slack(cr, ck)
    report(8, ok, f"L=8@{OPERATING_POINT[8]}dB, {ck.frames} frames: BLER CS={cs.bler:.3e} "
                  f"CR={cr.bler:.3e} CK={ck.bler:.3e}")


@pytest.mark.slow
def test_c09_histogram_shape(sweeps):
    ck, cr = sweeps[2][Variant.CK], sweeps[2][Variant.CR]
    tail = cr.epsilon_i[4:].sum()
    ok = ck.et_by_crc_index[0] == cr.et_by_crc_index[0] and tail < 0.10 * cr.epsilon
    report(9, ok, f"E_e(1) CK={ck.et_by_crc_index[0]} CR={cr.et_by_crc_index[0]}; "
                  f"CR sum eps_i (i>=5) = {tail:.2%} against eps = {cr.epsilon:.2%} "
                  f"(ratio {tail / cr.epsilon:.1%})")


def test_c10_determinism(tmp_path):
    def once(workers, name):
        run = RunConfig(PRESETS["pbch"], ["ck:4", "cr:4", "cs:4"], [-8.0, -6.0], max_frames=3000,
                        min_frame_errors=40, seed=SEED, batch_size=500, workers=workers)
        return emit_results(run_sweep(run), run, tmp_path / name)

    runs = [once(1, "a"), once(1, "b"), once(2, "c"), once(3, "d")]
    same = all(r[k].read_bytes() == runs[0][k].read_bytes() for r in runs[1:] for k in ("results", "et_by_crc"))
    report(10, same, "results.csv and et_by_crc.csv byte-identical for workers 1, 1, 2, 3")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v", "-s"]))
