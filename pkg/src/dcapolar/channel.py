"""BPSK over AWGN with counter-based, per-frame random streams.

Frame ``f`` of SNR point ``k`` under master seed ``s`` draws from
``Philox(key=s, counter=[0, 0, f, k])`` (numpy's Philox-4x64-10). Streams
are therefore independent of how frames are spread across workers.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

RNG_ALGORITHM = "numpy.random.Philox (Philox4x64-10), key=seed, counter=[0, 0, frame, point]"


class SnrKind(str, enum.Enum):
    ES_N0 = "EsN0"
    EB_N0 = "EbN0"


@dataclass(frozen=True)
class ChannelParams:
    """Noise level for unit-energy BPSK; ``sigma2`` is N0/2 per real dimension."""

    snr_db: float
    snr_kind: SnrKind = SnrKind.ES_N0
    rate_for_ebn0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "snr_kind", SnrKind(self.snr_kind))
        if self.snr_kind is SnrKind.EB_N0 and not 0 < self.rate_for_ebn0 <= 1:
            raise ValueError(f"Eb/N0 needs a code rate in (0, 1], got {self.rate_for_ebn0}")

    @property
    def esn0_db(self) -> float:
        if self.snr_kind is SnrKind.EB_N0:
            return self.snr_db + 10 * np.log10(self.rate_for_ebn0)
        return self.snr_db

    @property
    def sigma2(self) -> float:
        return 1.0 / (2.0 * 10 ** (self.esn0_db / 10))


def frame_rng(seed: int, frame: int, point: int = 0) -> np.random.Generator:
    counter = np.array([0, 0, frame, point], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=seed, counter=counter))


def modulate(x) -> np.ndarray:
    """Bit 0 -> +1.0, bit 1 -> -1.0."""
    return 1.0 - 2.0 * np.asarray(x, dtype=np.float64)


def transmit(s, p: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    return s + np.sqrt(p.sigma2) * rng.standard_normal(s.shape)


def llr(y, p: ChannelParams) -> np.ndarray:
    """Channel LLRs ``2 y / sigma2``; positive favours bit 0."""
    if not p.sigma2 > 0:
        raise ValueError("LLRs need a positive noise variance")
    return 2.0 * np.asarray(y, dtype=np.float64) / p.sigma2
