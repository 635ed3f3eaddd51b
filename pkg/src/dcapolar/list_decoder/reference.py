"""Readable object-per-path SCL decoder built from the variant hooks.

Slow; meant for small codes, constructed fixtures and cross-checking the
compiled engine.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from ..crc import CrcTracker
from ..polar import CRC_BIT, FROZEN, MESSAGE, CodeConfig, combine_psums, extract_message, f_kernel, g_kernel
from .types import DecodeOutcome, DecoderConfig, Selection, Status, Variant, pm_update


@dataclass(frozen=True)
class CrcBit:
    channel: int
    index: int  # CRC remainder bit p, 0-based
    order: int  # 1-based rank in decoding order


@dataclass
class DecodePath:
    u: np.ndarray
    pm: float
    tracker: CrcTracker | None
    alpha: list[np.ndarray] = field(repr=False)
    beta: list[np.ndarray] = field(repr=False)
    crc_ok: bool = True
    alive: bool = True

    @classmethod
    def initial(cls, cfg: CodeConfig, llr: np.ndarray) -> "DecodePath":
        n = cfg.n
        alpha = [np.zeros(1 << t) for t in range(n)] + [llr]
        beta = [np.zeros(1 << t, dtype=np.uint8) for t in range(n)]
        tracker = CrcTracker(cfg.crc_matrix) if cfg.P else None
        return cls(np.zeros(cfg.N, dtype=np.uint8), 0.0, tracker, alpha, beta)

    def copy(self) -> "DecodePath":
        return replace(
            self,
            u=self.u.copy(),
            alpha=[a.copy() for a in self.alpha[:-1]] + [self.alpha[-1]],
            beta=[b.copy() for b in self.beta],
        )

    @property
    def leaf_llr(self) -> float:
        return float(self.alpha[0][0])

    def passes(self, bit: CrcBit) -> bool:
        return int(self.u[bit.channel]) == self.tracker.expected(bit.index)


def _llr_update(path: DecodePath, i: int) -> None:
    n = len(path.beta)
    a = path.alpha
    if i == 0:
        top = n - 1
        a[top] = f_kernel(a[n][: 1 << top], a[n][1 << top:])
    else:
        top = (i & -i).bit_length() - 1
        h = 1 << top
        parent = a[top + 1]
        a[top] = g_kernel(parent[:h], parent[h:], path.beta[top])
    for t in range(top - 1, -1, -1):
        h = 1 << t
        a[t] = f_kernel(a[t + 1][:h], a[t + 1][h:])


def _psum_update(path: DecodePath, i: int) -> None:
    n = len(path.beta)
    cur = path.u[i:i + 1].copy()
    t = 0
    while t < n and (i >> t) & 1:
        cur = combine_psums(path.beta[t], cur)
        t += 1
    if t < n:
        path.beta[t] = cur


def variant_hook_ck(paths: list[DecodePath], bit: CrcBit) -> list[DecodePath]:
    """Keep every path unless all fail; an empty result means early termination.

    Paths failing this check are marked and can no longer be selected.
    """
    valid = [p.passes(bit) for p in paths]
    if not any(valid):
        return []
    for p, v in zip(paths, valid):
        p.crc_ok = p.crc_ok and v
    return paths


def variant_hook_cr(paths: list[DecodePath], bit: CrcBit) -> list[DecodePath]:
    """Drop the failing paths; an empty result means early termination."""
    survivors = []
    for p in paths:
        if p.passes(bit):
            survivors.append(p)
        else:
            p.alive = False
    return survivors


def variant_hook_cs(paths: list[DecodePath], bit: CrcBit) -> list[DecodePath]:
    """Decide the CRC bit as its expected parity, like a dynamic frozen bit."""
    for p in paths:
        value = p.tracker.expected(bit.index)
        p.pm = pm_update(p.pm, p.leaf_llr, value)
        p.u[bit.channel] = value
    return paths


def select_output(paths: list[DecodePath], dec: DecoderConfig, cfg: CodeConfig) -> DecodeOutcome:
    candidates = paths
    if dec.selection is Selection.LOWEST_PM_VALID:
        candidates = [p for p in paths if p.crc_ok]
    if not candidates:
        return DecodeOutcome(None, Status.NO_VALID_PATH, None, float("nan"), len(paths))
    best = min(candidates, key=lambda p: p.pm)  # first in list order on ties
    return DecodeOutcome(
        extract_message(cfg, best.u), Status.OK, None, best.pm, len(paths), best.u.copy()
    )


def reference_scl_decode(
    cfg: CodeConfig,
    dec: DecoderConfig,
    llr,
    on_bit: Callable[[int, list[DecodePath]], None] | None = None,
) -> DecodeOutcome:
    """Plain-Python list decoding; ``on_bit(i, paths)`` observes the list after each bit."""
    llr = np.asarray(llr, dtype=np.float64)
    role, ref, order = cfg.bit_roles
    variant = dec.variant
    paths = [DecodePath.initial(cfg, llr)]
    for i in range(cfg.N):
        for p in paths:
            _llr_update(p, i)
        if role[i] == FROZEN:
            for p in paths:
                p.pm = pm_update(p.pm, p.leaf_llr, 0)
                p.u[i] = 0
        elif role[i] == CRC_BIT and variant is Variant.CS:
            paths = variant_hook_cs(paths, CrcBit(i, int(ref[i]), int(order[i])))
        else:
            cands = [(pm_update(p.pm, p.leaf_llr, b), k, b) for k, p in enumerate(paths) for b in (0, 1)]
            if len(cands) > dec.L:
                kept = sorted(range(len(cands)), key=lambda c: cands[c][0])[: dec.L]
                cands = [cands[c] for c in sorted(kept)]
            children = []
            taken = set()
            for pm, k, b in cands:
                # the second child of a parent is a copy; the first reuses it
                child = paths[k].copy() if k in taken else paths[k]
                taken.add(k)
                child.pm = pm
                child.u[i] = b
                children.append(child)
            paths = _finish_info_bit(children, i, role, ref, order, variant)
            if not paths:
                return DecodeOutcome(None, Status.EARLY_TERMINATED, int(order[i]))
        for p in paths:
            _psum_update(p, i)
        if on_bit is not None:
            on_bit(i, paths)
    return select_output(paths, dec, cfg)


def _finish_info_bit(paths, i, role, ref, order, variant):
    if role[i] == MESSAGE:
        if paths and paths[0].tracker is not None:
            for p in paths:
                p.tracker = p.tracker.absorb(int(ref[i]), int(p.u[i]))
        return paths
    bit = CrcBit(i, int(ref[i]), int(order[i]))
    if variant is Variant.CK:
        return variant_hook_ck(paths, bit)
    if variant is Variant.CR:
        return variant_hook_cr(paths, bit)
    for p in paths:
        p.crc_ok = p.crc_ok and p.passes(bit)
    return paths
