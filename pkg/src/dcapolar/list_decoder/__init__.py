"""Successive-cancellation list decoding with distributed-CRC handling."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..polar import CodeConfig, extract_message
from . import _kernel
from .reference import (
    CrcBit,
    DecodePath,
    reference_scl_decode,
    select_output,
    variant_hook_ck,
    variant_hook_cr,
    variant_hook_cs,
)
from .types import DecodeOutcome, DecoderConfig, Selection, Status, Variant, pm_update

__all__ = [
    "CrcBit",
    "DecodeOutcome",
    "DecodePath",
    "DecoderConfig",
    "KernelResult",
    "Selection",
    "Status",
    "Variant",
    "pm_update",
    "reference_scl_decode",
    "run_kernel",
    "scl_decode",
    "select_output",
    "variant_hook_ck",
    "variant_hook_cr",
    "variant_hook_cs",
]

_STATUS = {
    _kernel.ST_OK: Status.OK,
    _kernel.ST_ET: Status.EARLY_TERMINATED,
    _kernel.ST_NOVALID: Status.NO_VALID_PATH,
}


@dataclass
class KernelResult:
    """Raw compiled-decoder output: every final path plus the selection."""

    status: Status
    et_crc_index: int | None
    best: int
    paths_u: np.ndarray  # (survivors, N), list order
    paths_pm: np.ndarray
    paths_ok: np.ndarray
    live_trace: np.ndarray | None
    violations: int


def _kernel_inputs(cfg: CodeConfig):
    role, ref, order = cfg.bit_roles
    masks = cfg.crc_matrix.row_masks if cfg.P else np.zeros(1, dtype=np.uint64)
    return role, ref, order, masks


def run_kernel(cfg: CodeConfig, dec: DecoderConfig, llr, trace: bool = False) -> KernelResult:
    llr = np.ascontiguousarray(llr, dtype=np.float64)
    if llr.shape != (cfg.N,):
        raise ValueError(f"expected {cfg.N} LLRs, got shape {llr.shape}")
    if dec.variant in (Variant.CK, Variant.CR, Variant.CS) and cfg.P == 0:
        raise ValueError(f"variant {dec.variant.value} needs a code with CRC bits")
    role, ref, order, masks = _kernel_inputs(cfg)
    live = np.zeros(cfg.N if trace else 1, dtype=np.int64)
    status, et, best, nlive, active, u, pm, ok, viol = _kernel.scl_kernel(
        llr, role, ref, order, masks, dec.L, dec.variant.code,
        dec.selection is Selection.LOWEST_PM_VALID, trace, live,
    )
    slots = active[:nlive]
    best_pos = int(np.flatnonzero(slots == best)[0]) if best >= 0 else -1
    return KernelResult(
        _STATUS[status], int(et) if et else None, best_pos,
        u[slots], pm[slots], ok[slots], live if trace else None, int(viol),
    )


def scl_decode(cfg: CodeConfig, dec: DecoderConfig, llr, engine: str = "compiled") -> DecodeOutcome:
    """List-decode one frame of channel LLRs (positive favours bit 0)."""
    if engine == "reference":
        return reference_scl_decode(cfg, dec, llr)
    if engine != "compiled":
        raise ValueError(f"unknown engine {engine!r}")
    r = run_kernel(cfg, dec, llr)
    if r.status is not Status.OK:
        return DecodeOutcome(None, r.status, r.et_crc_index, float("nan"), len(r.paths_pm))
    u_hat = r.paths_u[r.best]
    return DecodeOutcome(
        extract_message(cfg, u_hat), Status.OK, None, float(r.paths_pm[r.best]), len(r.paths_pm), u_hat
    )
