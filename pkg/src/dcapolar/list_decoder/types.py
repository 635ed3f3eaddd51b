from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Variant(str, enum.Enum):
    PLAIN = "plain"
    CK = "ck"  # check and keep
    CR = "cr"  # check and remove
    CS = "cs"  # check and select

    @property
    def code(self) -> int:
        return _VARIANT_CODES[self]


_VARIANT_CODES = {Variant.PLAIN: 0, Variant.CK: 1, Variant.CR: 2, Variant.CS: 3}


class Selection(str, enum.Enum):
    LOWEST_PM = "pm"
    LOWEST_PM_VALID = "crc"


class Status(str, enum.Enum):
    OK = "ok"
    EARLY_TERMINATED = "early_terminated"
    NO_VALID_PATH = "no_valid_path"


@dataclass(frozen=True)
class DecoderConfig:
    """List size, variant and final-path rule.

    ``selection`` defaults to lowest-PM-with-valid-CRC for CK and lowest PM
    otherwise (CR and CS survivors pass every check by construction).
    """

    L: int = 8
    variant: Variant = Variant.CK
    selection: Selection | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.L < 1 or self.L & (self.L - 1):
            raise ValueError(f"list size must be a power of two >= 1, got {self.L}")
        if self.selection is None:
            sel = Selection.LOWEST_PM_VALID if self.variant is Variant.CK else Selection.LOWEST_PM
        else:
            sel = Selection(self.selection)
        object.__setattr__(self, "selection", sel)

    @property
    def label(self) -> str:
        return f"{self.variant.value}-L{self.L}"

    @classmethod
    def parse(cls, text: str) -> "DecoderConfig":
        """Parse ``ck:8`` / ``cr-L4`` style labels."""
        t = text.strip().lower().replace("-l", ":").replace("-", ":")
        name, _, size = t.partition(":")
        return cls(L=int(size or 8), variant=Variant(name))


@dataclass
class DecodeOutcome:
    message: np.ndarray | None
    status: Status
    et_crc_index: int | None = None
    final_pm: float = float("nan")
    survivor_count: int = 0
    u_hat: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "message": None if self.message is None else self.message.tolist(),
            "et_crc_index": self.et_crc_index,
            "final_pm": None if np.isnan(self.final_pm) else float(self.final_pm),
            "survivor_count": self.survivor_count,
        }


def pm_update(pm: float, alpha0: float, u_hat: int) -> float:
    """Add ``|alpha0|`` when the decision contradicts the LLR sign."""
    if (alpha0 < 0 and u_hat == 0) or (alpha0 > 0 and u_hat == 1):
        return pm + abs(alpha0)
    return pm
