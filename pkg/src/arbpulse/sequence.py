"""The composite pulse sequence container shared by every family."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Tuple

import numpy as np

from .series import TOL_DEFECT, OrderReport, verify_order
from .su2 import AMPLITUDE, DETUNING, ErrorModel, Pulse, distance, execute_sequence, ideal_rotation

FAMILIES = ("P", "B", "N", "SK", "SB", "RAW", "CORPSE", "SKD")
# families compensating detuning rather than amplitude error
DETUNING_FAMILIES = ("CORPSE", "SKD")


class ConstructionError(RuntimeError):
    """A sequence could not be built or failed its own order check."""


@dataclass(frozen=True)
class PulseSequence:
    family: str
    order: int
    target: Pulse
    pulses: Tuple[Pulse, ...]
    has_base: bool = True  # pulses[0] is the uncorrected target pulse
    narrowband: bool = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not self.pulses:
            raise ValueError("empty pulse sequence")
        if self.order < 0:
            raise ValueError("negative order")
        object.__setattr__(self, "pulses", tuple(self.pulses))

    @property
    def model(self) -> ErrorModel:
        return DETUNING if self.family in DETUNING_FAMILIES else AMPLITUDE

    @property
    def pulse_count(self) -> int:
        return len(self.pulses)

    @property
    def corrective(self) -> Tuple[Pulse, ...]:
        return self.pulses[1:] if self.has_base else self.pulses

    @property
    def two_pi_equivalents(self) -> float:
        total = sum(abs(p.theta) for p in self.corrective) / (2 * math.pi)
        r = round(total)
        return float(r) if abs(total - r) < 1e-9 else total

    def target_unitary(self) -> np.ndarray:
        return ideal_rotation(self.target)

    def execute(self, value: float, model: ErrorModel = None) -> np.ndarray:
        return execute_sequence(self.pulses, model or self.model, value)

    def verify(self, tol: float = TOL_DEFECT, scaled: bool = False) -> OrderReport:
        return verify_order(self.pulses, self.model, self.target_unitary(), self.order, tol, scaled=scaled)

    def check(self, tol: float = TOL_DEFECT, scaled: bool = False) -> OrderReport:
        """Verify order and exactness at zero error, raising on failure."""
        if distance(self.execute(0.0), self.target_unitary()) > 1e-10:
            raise ConstructionError(f"{self.label} does not reproduce its target at zero error")
        report = self.verify(tol, scaled)
        if not report.passed:
            raise ConstructionError(f"{self.label} fails its order-{self.order} check")
        return report

    def shifted(self, dphi: float) -> "PulseSequence":
        """Rotate every phase (and the target) by ``dphi``; exact under both error models."""
        if dphi == 0:
            return self
        return replace(
            self,
            target=self.target.shifted(dphi),
            pulses=tuple(p.shifted(dphi) for p in self.pulses),
        )

    @property
    def label(self) -> str:
        if self.family in ("RAW", "CORPSE"):
            return self.family
        return f"{self.family}{self.order}"
