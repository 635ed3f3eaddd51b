"""5G-NR input-bit interleaver derived from the length-164 mother sequence."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

K_MAX = 164


class InterleaverError(ValueError):
    pass


@lru_cache(maxsize=1)
def mother_sequence() -> tuple[int, ...]:
    with resources.files("dcapolar.data").joinpath("interleaver_mother.json").open() as fh:
        doc = json.load(fh)
    entries = tuple(int(v) for v in doc["entries"])
    if len(entries) != doc["length"] or sorted(entries) != list(range(K_MAX)):
        raise InterleaverError("corrupt interleaver mother sequence asset")
    return entries


@dataclass(frozen=True, eq=False)
class Interleaver:
    """``c_interleaved[j] = c[pi[j]]``."""

    K: int
    pi: np.ndarray
    pi_inv: np.ndarray

    @property
    def h(self) -> int:
        return K_MAX - self.K

    def interleave(self, c: np.ndarray) -> np.ndarray:
        return np.asarray(c)[..., self.pi]

    def deinterleave(self, c_il: np.ndarray) -> np.ndarray:
        return np.asarray(c_il)[..., self.pi_inv]


@lru_cache(maxsize=256)
def build_interleaver(K: int, P: int = 0) -> Interleaver:
    """Keep the mother entries >= 164 - K, shifted down by that offset.

    ``P`` is only used for validation (the interleaved block must hold more
    than the CRC bits).
    """
    if K > K_MAX:
        raise InterleaverError(f"interleaver size is limited to {K_MAX}, got K={K}")
    if K <= P or K < 1:
        raise InterleaverError(f"K={K} must exceed the CRC length P={P}")
    h = K_MAX - K
    pi = np.array([v - h for v in mother_sequence() if v >= h], dtype=np.int64)
    assert len(pi) == K
    pi_inv = np.empty_like(pi)
    pi_inv[pi] = np.arange(K)
    pi.setflags(write=False)
    pi_inv.setflags(write=False)
    return Interleaver(K, pi, pi_inv)


def crc_positions(il: Interleaver, A: int) -> list[tuple[int, int]]:
    """(interleaved position, CRC bit index) pairs in stream order."""
    return [(j, int(v) - A) for j, v in enumerate(il.pi) if v >= A]


def distributed_count(il: Interleaver, A: int) -> int:
    """Number of CRC bits that still have a message bit after them in the stream."""
    is_msg = il.pi < A
    if not is_msg.any():
        return 0
    last_msg = int(np.flatnonzero(is_msg)[-1])
    return sum(1 for j, _ in crc_positions(il, A) if j < last_msg)
