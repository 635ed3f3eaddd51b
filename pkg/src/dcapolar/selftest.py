"""Quick oracle checks runnable from an installed package (``dcapolar selftest``)."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .channel import ChannelParams, frame_rng, llr, modulate, transmit
from .crc import CRC24C, CrcSpec, build_crc_matrix, crc_encode, crc_oracle_remainder
from .interleaver import K_MAX, build_interleaver, distributed_count
from .list_decoder import DecoderConfig, Status, Variant, run_kernel, scl_decode
from .oracles import brute_force_min_metric, dense_transform
from .polar import build_code_config, encode, polar_transform, sc_decode


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _crc(rng) -> str:
    toy = CrcSpec.from_exponents([3, 1, 0])
    for A in range(1, 11):
        msgs = np.array(list(itertools.product((0, 1), repeat=A)), dtype=np.uint8)
        got = crc_encode(msgs, build_crc_matrix(toy, A))[:, A:]
        for m, p in zip(msgs, got):
            assert np.array_equal(p, crc_oracle_remainder(m, toy)), f"toy CRC A={A}"
    for A in (32, 140):
        m = build_crc_matrix(CRC24C, A)
        for msg in rng.integers(0, 2, (200, A), dtype=np.uint8):
            assert np.array_equal(crc_encode(msg, m)[A:], crc_oracle_remainder(msg, CRC24C)), f"CRC24C A={A}"
    return "toy CRC exhaustive to A=10, 400 random CRC24C messages"


def _interleaver(rng) -> str:
    for K in range(25, K_MAX + 1):
        il = build_interleaver(K, 24)
        assert sorted(il.pi.tolist()) == list(range(K)), f"K={K} not a permutation"
    counts = {K: distributed_count(build_interleaver(K, 24), K - 24) for K in (56, 152, 164)}
    assert counts == {56: 3, 152: 7, 164: 7}, counts
    return f"permutations for K=25..{K_MAX}, distributed counts {counts}"


def _transform(rng) -> str:
    for N in (8, 64, 512):
        u = rng.integers(0, 2, (50, N), dtype=np.uint8)
        assert np.array_equal(polar_transform(polar_transform(u)), u)
        assert np.array_equal(polar_transform(u[:5]), dense_transform(u[:5]))
    return "involution and dense-matrix agreement at N=8, 64, 512"


def _round_trip(rng) -> str:
    cfg = build_code_config(512, 32, 24)
    for variant in Variant:
        for L in (1, 2, 8):
            msg = rng.integers(0, 2, 32, dtype=np.uint8)
            out = scl_decode(cfg, DecoderConfig(L, variant), 10 * modulate(encode(cfg, msg)))
            assert out.status is Status.OK and np.array_equal(out.message, msg), f"{variant.value} L={L}"
    return "noiseless PBCH frames for every variant"


def _sc_consistency(rng) -> str:
    cfg = build_code_config(512, 32, 24)
    p = ChannelParams(-2.0)
    for f in range(30):
        r = frame_rng(1, f)
        y = transmit(modulate(encode(cfg, r.integers(0, 2, 32, dtype=np.uint8))), p, r)
        lam = llr(y, p)
        assert np.array_equal(scl_decode(cfg, DecoderConfig(1, Variant.PLAIN), lam).u_hat, sc_decode(cfg, lam))
    return "30 noisy PBCH frames, L=1 list equals SC"


def _ml(rng) -> str:
    cfg = build_code_config(8, 4, 0, None)
    for _ in range(100):
        lam = 2 * (modulate(encode(cfg, rng.integers(0, 2, 4))) + rng.normal(0, 1.0, 8))
        out = scl_decode(cfg, DecoderConfig(16, Variant.PLAIN), lam)
        u_ml, _ = brute_force_min_metric(lam, cfg.info_set, 8)
        assert np.array_equal(out.u_hat, u_ml)
    return "100 frames, full list equals exhaustive metric minimum"


def _variants(rng) -> str:
    cfg = build_code_config(512, 32, 24)
    p = ChannelParams(-8.0)
    for f in range(100):
        r = frame_rng(2, f)
        lam = llr(transmit(modulate(encode(cfg, r.integers(0, 2, 32, dtype=np.uint8))), p, r), p)
        cs = run_kernel(cfg, DecoderConfig(8, Variant.CS), lam)
        assert cs.status is Status.OK and all(cs.paths_ok)
        cr = run_kernel(cfg, DecoderConfig(8, Variant.CR), lam, trace=True)
        assert cr.violations == 0 and cr.live_trace.max() <= 8
    return "100 noisy frames: CS paths pass the CRC, CR survivors consistent"


CHECKS: dict[str, Callable] = {
    "crc": _crc,
    "interleaver": _interleaver,
    "transform": _transform,
    "round-trip": _round_trip,
    "sc-consistency": _sc_consistency,
    "ml-oracle": _ml,
    "variants": _variants,
}


def run_selftest(names=None, seed: int = 0) -> list[CheckResult]:
    results = []
    for name in names or CHECKS:
        rng = np.random.default_rng(seed)
        t0 = time.perf_counter()
        try:
            detail, ok = CHECKS[name](rng), True
        except AssertionError as exc:
            detail, ok = f"failed: {exc}", False
        results.append(CheckResult(name, ok, detail, time.perf_counter() - t0))
    return results
