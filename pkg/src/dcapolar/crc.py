"""CRC polynomials, generator-matrix encoding and per-path parity tracking.

Bit ordering: message bit ``a[0]`` is the highest-degree term of the
dividend, and CRC bit ``p`` (0-based, transmitted at position ``A + p``) is
the coefficient of ``x**(P - 1 - p)`` in the remainder.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np


class CrcError(ValueError):
    pass


@dataclass(frozen=True)
class CrcSpec:
    """Generator polynomial ``g(x) = sum(coeffs[k] * x**k)``."""

    degree: int
    coeffs: tuple[int, ...]
    name: str = ""

    def __post_init__(self):
        if self.degree < 1:
            raise CrcError(f"CRC degree must be positive, got {self.degree}")
        if len(self.coeffs) != self.degree + 1:
            raise CrcError(f"expected {self.degree + 1} coefficients, got {len(self.coeffs)}")
        if any(c not in (0, 1) for c in self.coeffs):
            raise CrcError("coefficients must be bits")
        if self.coeffs[0] != 1 or self.coeffs[-1] != 1:
            raise CrcError("leading and trailing coefficients of g(x) must be 1")

    @classmethod
    def from_exponents(cls, exponents: Iterable[int], name: str = "") -> "CrcSpec":
        exps = sorted(set(int(e) for e in exponents))
        if not exps or exps[0] < 0:
            raise CrcError(f"bad exponent list {exponents!r}")
        degree = exps[-1]
        coeffs = [0] * (degree + 1)
        for e in exps:
            coeffs[e] = 1
        return cls(degree, tuple(coeffs), name)

    @property
    def exponents(self) -> list[int]:
        return [k for k in range(self.degree, -1, -1) if self.coeffs[k]]

    @property
    def low_mask(self) -> int:
        """``g(x) - x**P`` as a P-bit integer, bit k holding g_k."""
        mask = 0
        for k in range(self.degree):
            if self.coeffs[k]:
                mask |= 1 << k
        return mask


CRC24C = CrcSpec.from_exponents([24, 23, 21, 20, 17, 15, 13, 12, 8, 4, 2, 1, 0], name="CRC24C")


@dataclass(frozen=True, eq=False)
class CrcMatrix:
    """A x P generator matrix; ``rows[k]`` is the parity contribution of message bit k."""

    spec: CrcSpec
    rows: np.ndarray
    row_masks: np.ndarray = field(repr=False)

    @property
    def A(self) -> int:
        return self.rows.shape[0]

    @property
    def P(self) -> int:
        return self.rows.shape[1]


def _pack_row(row: np.ndarray) -> int:
    # bit p of the mask <-> column p
    mask = 0
    for p in np.flatnonzero(row):
        mask |= 1 << int(p)
    return mask


@lru_cache(maxsize=64)
def build_crc_matrix(spec: CrcSpec, A: int) -> CrcMatrix:
    """Build C row by row from the bottom, each row being the one below times x mod g."""
    if A < 1:
        raise CrcError(f"message length must be >= 1, got {A}")
    P = spec.degree
    g = spec.coeffs
    C = np.zeros((A, P), dtype=np.uint8)
    # 1-based column i of the recursion is 0-based column i - 1 here
    for i in range(1, P + 1):
        C[A - 1, i - 1] = g[P - i]
    for k in range(A - 2, -1, -1):
        lead = C[k + 1, 0]
        for i in range(1, P):
            C[k, i - 1] = C[k + 1, i] ^ (lead & g[P - i])
        C[k, P - 1] = lead & g[0]
    C.setflags(write=False)
    if P > 64:
        raise CrcError("CRC degree above 64 is not supported by the packed tracker")
    masks = np.array([_pack_row(r) for r in C], dtype=np.uint64)
    masks.setflags(write=False)
    return CrcMatrix(spec, C, masks)


def _as_bits(a: Sequence[int] | np.ndarray) -> np.ndarray:
    arr = np.asarray(a, dtype=np.uint8)
    if arr.size and arr.max() > 1:
        raise CrcError("message must contain only 0/1 values")
    return arr


def crc_parity(a, m: CrcMatrix) -> np.ndarray:
    """``a @ C`` over GF(2); ``a`` may be a single message or a batch (rows)."""
    arr = _as_bits(a)
    if arr.shape[-1] != m.A:
        raise CrcError(f"message length {arr.shape[-1]} != matrix rows {m.A}")
    return ((arr.astype(np.int64) @ m.rows.astype(np.int64)) & 1).astype(np.uint8)


def crc_encode(a, m: CrcMatrix) -> np.ndarray:
    """Systematic encoding ``[a | a C]``."""
    arr = _as_bits(a)
    return np.concatenate([arr, crc_parity(arr, m)], axis=-1)


def crc_oracle_remainder(a, spec: CrcSpec) -> np.ndarray:
    """Remainder of ``a(x) x**P mod g(x)`` by shift-register long division."""
    P = spec.degree
    top = 1 << (P - 1)
    full = (1 << P) - 1
    poly = spec.low_mask
    reg = 0
    for bit in np.asarray(a, dtype=np.uint8).tolist():
        feedback = bit ^ (1 if reg & top else 0)
        reg = (reg << 1) & full
        if feedback:
            reg ^= poly
    return np.array([(reg >> (P - 1 - p)) & 1 for p in range(P)], dtype=np.uint8)


@dataclass(frozen=True)
class CrcTracker:
    """Running parity ``sum(a[k] * C[k])`` over the message bits absorbed so far.

    Immutable: :meth:`absorb` returns a new tracker. ``accumulators`` packs
    CRC column p into bit p.
    """

    matrix: CrcMatrix = field(repr=False)
    accumulators: int = 0
    absorbed: int = 0

    @property
    def consumed(self) -> int:
        return bin(self.absorbed).count("1")

    def absorb(self, k: int, value: int) -> "CrcTracker":
        if not 0 <= k < self.matrix.A:
            raise CrcError(f"bit index {k} out of range [0, {self.matrix.A})")
        if self.absorbed >> k & 1:
            raise CrcError(f"bit index {k} absorbed twice")
        acc = self.accumulators
        if value:
            acc ^= int(self.matrix.row_masks[k])
        return CrcTracker(self.matrix, acc, self.absorbed | (1 << k))

    def expected(self, p: int) -> int:
        return (self.accumulators >> p) & 1

    def bits(self) -> np.ndarray:
        return np.array([self.expected(p) for p in range(self.matrix.P)], dtype=np.uint8)


def tracker_absorb(t: CrcTracker, k: int, value: int) -> CrcTracker:
    return t.absorb(k, value)
