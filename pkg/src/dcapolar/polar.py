"""Polar code construction, the G_N transform and successive-cancellation decoding."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .crc import CRC24C, CrcMatrix, CrcSpec, build_crc_matrix, crc_encode
from .interleaver import K_MAX, Interleaver, build_interleaver, crc_positions

# per-channel role codes shared with the list decoder kernel
FROZEN, MESSAGE, CRC_BIT = 0, 1, 2


class CodeConfigError(ValueError):
    pass


def _log2(N: int) -> int:
    if N < 2 or N & (N - 1):
        raise CodeConfigError(f"block length must be a power of two >= 2, got {N}")
    return N.bit_length() - 1


# ---------------------------------------------------------------------------
# reliability orders (least reliable first)


def load_reliability(path: str | Path) -> np.ndarray:
    """Read a reliability file: JSON with ``sequence`` and ``order`` fields.

    ``order`` is ``least-reliable-first`` or ``most-reliable-first``; the
    returned array is always least reliable first.
    """
    doc = json.loads(Path(path).read_text())
    return _parse_reliability(doc)


def _parse_reliability(doc: dict) -> np.ndarray:
    seq = np.asarray(doc["sequence"], dtype=np.int64)
    order = doc.get("order", "least-reliable-first")
    if order == "most-reliable-first":
        seq = seq[::-1]
    elif order != "least-reliable-first":
        raise CodeConfigError(f"unknown reliability order {order!r}")
    if sorted(seq.tolist()) != list(range(len(seq))):
        raise CodeConfigError("reliability sequence is not a permutation")
    return seq


@lru_cache(maxsize=1)
def _nr_mother() -> np.ndarray:
    with resources.files("dcapolar.data").joinpath("nr_reliability_1024.json").open() as fh:
        return _parse_reliability(json.load(fh))


def nr_reliability(N: int) -> np.ndarray:
    """5G-NR polar sequence restricted to channels < N."""
    _log2(N)
    mother = _nr_mother()
    if N > len(mother):
        raise CodeConfigError(f"5G-NR sequence only covers N <= {len(mother)}")
    return mother[mother < N].copy()


def bhattacharyya_reliability(N: int, design_snr_db: float = 0.0) -> np.ndarray:
    """Reliability order from the Bhattacharyya-parameter recursion on a BEC proxy."""
    n = _log2(N)
    z = np.array([np.exp(-(10 ** (design_snr_db / 10)))])
    for _ in range(n):
        nz = np.empty(2 * len(z))
        nz[0::2] = 2 * z - z * z
        nz[1::2] = z * z
        z = nz
    # larger z = less reliable; ties resolved by index
    return np.lexsort((np.arange(N), -z))


# ---------------------------------------------------------------------------
# code configuration


@dataclass(frozen=True, eq=False)
class CodeConfig:
    N: int
    A: int
    P: int
    info_set: np.ndarray
    frozen_set: np.ndarray
    q_set: np.ndarray
    interleaver: Interleaver
    crc_spec: CrcSpec | None
    crc_matrix: CrcMatrix | None = field(repr=False)
    # stream position carried by each channel, -1 on frozen channels
    stream_pos: np.ndarray = field(repr=False)

    @property
    def K(self) -> int:
        return self.A + self.P

    @property
    def n(self) -> int:
        return self.N.bit_length() - 1

    @property
    def name(self) -> str:
        return f"PC({self.N},{self.K})"

    @property
    def channel_to_stream(self) -> dict[int, int]:
        return {int(i): int(self.stream_pos[i]) for i in self.info_set}

    @cached_property
    def frozen_mask(self) -> np.ndarray:
        m = np.ones(self.N, dtype=bool)
        m[self.info_set] = False
        return m

    @cached_property
    def bit_roles(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Per-channel (role, ref, crc_order) arrays.

        ref is the message index for MESSAGE channels and the CRC index for
        CRC_BIT channels; crc_order is the 1-based rank of the CRC bit in
        decoding order.
        """
        role = np.zeros(self.N, dtype=np.int8)
        ref = np.full(self.N, -1, dtype=np.int64)
        order = np.zeros(self.N, dtype=np.int64)
        rank = 0
        for ch in self.info_set:
            j = self.stream_pos[ch]
            v = int(self.interleaver.pi[j])
            if v < self.A:
                role[ch], ref[ch] = MESSAGE, v
            else:
                rank += 1
                role[ch], ref[ch], order[ch] = CRC_BIT, v - self.A, rank
        for a in (role, ref, order):
            a.setflags(write=False)
        return role, ref, order

    def to_dict(self) -> dict:
        return {
            "code": self.name,
            "N": self.N,
            "K": self.K,
            "A": self.A,
            "P": self.P,
            "crc_exponents": self.crc_spec.exponents if self.crc_spec else [],
            "info_set": self.info_set.tolist(),
            "frozen_set": self.frozen_set.tolist(),
            "q_set": self.q_set.tolist(),
            "pi": self.interleaver.pi.tolist(),
            "pi_inv": self.interleaver.pi_inv.tolist(),
        }


def _identity_interleaver(K: int) -> Interleaver:
    pi = np.arange(K, dtype=np.int64)
    return Interleaver(K, pi, pi.copy())


def build_code_config(
    N: int,
    A: int,
    P: int = 24,
    crc_spec: CrcSpec | None = CRC24C,
    reliability: Sequence[int] | np.ndarray | None = None,
    interleave: bool = True,
) -> CodeConfig:
    """Allocate the K = A + P interleaved bits to the K most reliable channels.

    ``reliability`` lists channels least reliable first and defaults to the
    5G-NR sequence. With ``interleave=False`` the identity permutation is used
    and the 164-bit interleaver limit does not apply.
    """
    _log2(N)
    K = A + P
    if A < 1 and P > 0:
        raise CodeConfigError("a CRC needs at least one message bit")
    if K > N:
        raise CodeConfigError(f"K={K} exceeds N={N}")
    if P > 0:
        if crc_spec is None or crc_spec.degree != P:
            raise CodeConfigError(f"CRC polynomial degree must equal P={P}")
        crc_matrix = build_crc_matrix(crc_spec, A)
    else:
        crc_spec, crc_matrix = None, None
    if interleave:
        if K > K_MAX:
            raise CodeConfigError(f"interleaver input size is limited to {K_MAX}, got K={K}")
        il = build_interleaver(K, P) if K > 0 else _identity_interleaver(0)
    else:
        il = _identity_interleaver(K)

    rel = nr_reliability(N) if reliability is None else np.asarray(reliability, dtype=np.int64)
    if sorted(rel.tolist()) != list(range(N)):
        raise CodeConfigError(f"reliability order must be a permutation of 0..{N - 1}")
    info = np.sort(rel[N - K:]) if K else np.zeros(0, dtype=np.int64)
    frozen = np.sort(rel[: N - K])
    stream_pos = np.full(N, -1, dtype=np.int64)
    stream_pos[info] = np.arange(K)
    q = np.sort(info[[j for j, _ in crc_positions(il, A)]]) if P else np.zeros(0, dtype=np.int64)
    for a in (info, frozen, q, stream_pos):
        a.setflags(write=False)
    return CodeConfig(N, A, P, info, frozen, q, il, crc_spec, crc_matrix, stream_pos)


# ---------------------------------------------------------------------------
# encoding


def polar_transform(u) -> np.ndarray:
    """``x = u G_N`` with ``G_N`` the n-fold Kronecker power of [[1, 0], [1, 1]].

    Works on the last axis, so a batch of input vectors can be passed as rows.
    """
    x = np.array(u, dtype=np.uint8)
    N = x.shape[-1]
    _log2(N)
    lead = x.shape[:-1]
    step = 1
    while step < N:
        v = x.reshape(*lead, -1, 2, step)
        v[..., 0, :] ^= v[..., 1, :]
        step *= 2
    return x


def build_input_vector(cfg: CodeConfig, message) -> np.ndarray:
    """CRC-encode, interleave and place the message on the information channels."""
    message = np.asarray(message, dtype=np.uint8)
    if message.shape[-1] != cfg.A:
        raise CodeConfigError(f"message length {message.shape[-1]} != A={cfg.A}")
    c = crc_encode(message, cfg.crc_matrix) if cfg.P else message
    c_il = cfg.interleaver.interleave(c)
    u = np.zeros(message.shape[:-1] + (cfg.N,), dtype=np.uint8)
    u[..., cfg.info_set] = c_il
    return u


def encode(cfg: CodeConfig, message) -> np.ndarray:
    return polar_transform(build_input_vector(cfg, message))


def extract_message(cfg: CodeConfig, u_hat) -> np.ndarray:
    """Inverse of :func:`build_input_vector`: deinterleave and strip the CRC."""
    c_il = np.asarray(u_hat, dtype=np.uint8)[..., cfg.info_set]
    return cfg.interleaver.deinterleave(c_il)[..., : cfg.A]


# ---------------------------------------------------------------------------
# SC kernels


def f_kernel(a, b):
    """Min-sum check-node update."""
    return np.sign(a) * np.sign(b) * np.minimum(np.abs(a), np.abs(b))


def g_kernel(a, b, beta_l):
    return b + (1 - 2 * np.asarray(beta_l, dtype=np.int64)) * a


def combine_psums(beta_l, beta_r) -> np.ndarray:
    beta_l = np.asarray(beta_l, dtype=np.uint8)
    beta_r = np.asarray(beta_r, dtype=np.uint8)
    if beta_l.shape != beta_r.shape:
        raise ValueError(f"partial-sum halves differ in length: {beta_l.shape} vs {beta_r.shape}")
    return np.concatenate([beta_l ^ beta_r, beta_r])


def _sc_small(alpha: list[float], frozen: list[bool], out: list[int]) -> list[int]:
    # scalar version of _sc_node; same arithmetic, no per-node numpy overhead
    if len(alpha) == 1:
        bit = 0 if frozen[0] or alpha[0] >= 0 else 1
        out.append(bit)
        return [bit]
    h = len(alpha) // 2
    a, b = alpha[:h], alpha[h:]
    left = [_sign(x) * _sign(y) * min(abs(x), abs(y)) for x, y in zip(a, b)]
    beta_l = _sc_small(left, frozen[:h], out)
    right = [y + (1 - 2 * bl) * x for x, y, bl in zip(a, b, beta_l)]
    beta_r = _sc_small(right, frozen[h:], out)
    return [bl ^ br for bl, br in zip(beta_l, beta_r)] + beta_r


def _sign(x: float) -> float:
    return 1.0 if x > 0 else (-1.0 if x < 0 else 0.0)


def _sc_node(alpha: np.ndarray, frozen: np.ndarray, out: list[int]) -> np.ndarray:
    if len(alpha) <= 16:
        bits = _sc_small(alpha.tolist(), frozen.tolist(), out)
        return np.array(bits, dtype=np.uint8)
    h = len(alpha) // 2
    a, b = alpha[:h], alpha[h:]
    beta_l = _sc_node(f_kernel(a, b), frozen[:h], out)
    beta_r = _sc_node(g_kernel(a, b, beta_l), frozen[h:], out)
    return combine_psums(beta_l, beta_r)


def sc_decode(cfg: CodeConfig, llr) -> np.ndarray:
    """Depth-first, left-first SC decoding; returns the estimated input vector."""
    llr = np.asarray(llr, dtype=np.float64)
    if llr.shape != (cfg.N,):
        raise ValueError(f"expected {cfg.N} LLRs, got shape {llr.shape}")
    out: list[int] = []
    _sc_node(llr, cfg.frozen_mask, out)
    return np.array(out, dtype=np.uint8)
