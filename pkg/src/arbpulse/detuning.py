"""Composite pulses compensating detuning (off-resonance) error.

Under detuning a pulse has no exact inverse (the ``|theta/2| delta Z`` term
never changes sign), so the group commutators of the amplitude ladder are
built from blocks whose *approximate* inverses are good to the order the
parent needs:

* level-one in-plane blocks are palindromic groups of pi-pulse pairs
  ``M_psi(pi) M_{psi+pi}(pi)`` (first order ``-2i delta sigma_{psi+pi/2}``) with
  2pi-pulse units added to cancel their ``delta^3`` z drift;
* level-two in-plane blocks are pairs of ``2 pi k`` pulses, whose detuning
  response starts at ``delta^2``, plus pi-pair units cancelling their z drift;
* in-plane blocks are inverted by a pi phase shift, which is exact
  conjugation by Z and flips every in-plane component;
* commutator blocks are inverted by swapping the commutator.

Every block is checked against the series engine, including the accuracy of
its inverse, so an unsupported order fails loudly instead of silently.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from .sequence import ConstructionError, PulseSequence
from .series import TOL_DEFECT, leading_defect, natural_scale, sequence_series
from .sk import AxisBlock, check_block
from .su2 import DETUNING, Pulse, pauli_decompose

MAX_LEVEL = 6


class BaseSequenceError(ConstructionError):
    """The externally sourced base sequence fails its first-order oracle."""


def corpse(theta: float, tol: float = TOL_DEFECT) -> PulseSequence:
    """CORPSE: ``(0, 2pi + theta/2 - k), (pi, 2pi - 2k), (0, theta/2 - k)``, ``k = asin(sin(theta/2)/2)``.

    The angles come from the NMR literature, so they are only accepted after
    the series engine confirms the delta^1 term cancels.
    """
    if not 0 < theta <= 2 * math.pi:
        raise ValueError(f"target angle must lie in (0, 2 pi], got {theta}")
    k = math.asin(math.sin(theta / 2) / 2)
    pulses = (
        Pulse(0.0, 2 * math.pi + theta / 2 - k),
        Pulse(math.pi, 2 * math.pi - 2 * k),
        Pulse(0.0, theta / 2 - k),
    )
    seq = PulseSequence("CORPSE", 1, Pulse(0.0, theta), pulses, has_base=False)
    s = sequence_series(pulses, DETUNING, 1)
    if float(np.linalg.norm(s[1])) > tol:
        raise BaseSequenceError("base sequence not first-order compensating")
    seq.check(tol)
    return seq


def detuning_u1z(theta: float) -> AxisBlock:
    """``M'(theta/2) M'(-theta) M'(theta/2)``: a first-order Z block in delta.

    The exact delta^1 term is ``-2i sin(theta/2) Z``, i.e. a Z block of
    weight ``4 sin(theta/2)``; it reduces to ``-i theta Z`` only for small
    ``theta``.
    """
    if theta == 0:
        raise ValueError("theta must be nonzero")
    c = 4 * math.sin(theta / 2)
    pulses = (Pulse(0.0, theta / 2), Pulse(0.0, -theta), Pulse(0.0, theta / 2))
    return check_block(AxisBlock("Z", 1, abs(c), 1 if c >= 0 else -1, pulses, DETUNING))


def _pi_pair(psi: float):
    return [Pulse(psi, math.pi), Pulse(psi + math.pi, math.pi)]


def _two_pi_unit(phi: float):
    return [Pulse(phi, 2 * math.pi), Pulse(phi + math.pi, 2 * math.pi)]


def _phase(pulses, dphi: float) -> Tuple[Pulse, ...]:
    return tuple(p.shifted(dphi) for p in pulses)


@dataclass(frozen=True)
class DeltaBlock:
    """A detuning block with its approximate inverse."""

    axis: str  # "X", "Y" or "Z"
    level: int
    coefficient: float
    pulses: Tuple[Pulse, ...]
    inverse: Tuple[Pulse, ...]

    def as_axis_block(self) -> AxisBlock:
        sign = 1 if self.coefficient >= 0 else -1
        amp = abs(self.coefficient) ** (1.0 / self.level)
        return AxisBlock(self.axis, self.level, amp, sign, self.pulses, DETUNING)

    def shifted(self, dphi: float) -> "DeltaBlock":
        return replace(self, pulses=_phase(self.pulses, dphi), inverse=_phase(self.inverse, dphi))


def _inplane_level1(c: float) -> Tuple[Pulse, ...]:
    # 4k pi-pairs give 16 k cos(alpha); 2k 2pi-units cancel their -2 pi k z drift at delta^3
    k = max(1, math.ceil(abs(c) / 16))
    alpha = math.acos(c / (16 * k))
    outer, inner = -math.pi / 2 + alpha, -math.pi / 2 - alpha
    pulses = []
    for _ in range(2 * k):
        pulses += _two_pi_unit(0.0)
    for psi, reps in ((outer, k), (inner, 2 * k), (outer, k)):
        for _ in range(reps):
            pulses += _pi_pair(psi)
    return tuple(pulses)


def _inplane_level2(c: float) -> Tuple[Pulse, ...]:
    # M'_phi(2 pi k) = +-(I - i (pi k / 2) sigma_phi delta^2 + ...); k pi-pair units cancel the z drift
    k = max(1, math.ceil(abs(c) / (2 * math.pi)))
    alpha = math.acos(c / (2 * math.pi * k))
    pulses = [Pulse(alpha, 2 * math.pi * k), Pulse(-alpha, 2 * math.pi * k)]
    for _ in range(k):
        pulses += _pi_pair(0.0) + _pi_pair(math.pi)
    return tuple(pulses)


def _inverse_order(pulses, inverse) -> int:
    """Number of leading orders for which ``inverse * pulses`` is the identity."""
    s = sequence_series(tuple(pulses) + tuple(inverse), DETUNING, MAX_LEVEL + 1)
    norms = s.norms()
    for k in range(1, len(norms)):
        if norms[k] > TOL_DEFECT:
            return k - 1
    return len(norms) - 1


def _commutator(p: DeltaBlock, q: DeltaBlock, axis: str, level: int) -> DeltaBlock:
    """``P Q P^-1 Q^-1`` (matrix order) with the swapped commutator as inverse."""
    for child in (p, q):
        good = _inverse_order(child.pulses, child.inverse)
        if good < level:
            raise ConstructionError(
                f"detuning ladder: level-{child.level} {child.axis} block inverts only to order {good}, "
                f"level {level} needs {level}"
            )
    pulses = q.inverse + p.inverse + q.pulses + p.pulses
    inverse = p.inverse + q.inverse + p.pulses + q.pulses
    return DeltaBlock(axis, level, p.coefficient * q.coefficient, pulses, inverse)


@functools.lru_cache(maxsize=1024)
def delta_block(axis: str, level: int, coefficient: float) -> DeltaBlock:
    """Block ``I - i c P delta^level / 2 + O(delta^(level+1))`` under detuning error."""
    if level < 1 or level > MAX_LEVEL:
        raise ValueError(f"block level must be in 1..{MAX_LEVEL}")
    if axis in ("X", "Y"):
        tau = 0.0 if axis == "X" else math.pi / 2
        if level <= 2:
            make = _inplane_level1 if level == 1 else _inplane_level2
            pulses = _phase(make(coefficient), tau)
            block = DeltaBlock(axis, level, coefficient, pulses, _phase(pulses, math.pi))
        else:
            a = abs(coefficient) ** (1.0 / level)
            sign = 1.0 if coefficient >= 0 else -1.0
            lo, hi = level // 2, level - level // 2
            # [Y, Z] = 2iX, then a quarter-turn phase shift for Y
            x = _commutator(delta_block("Y", lo, sign * a ** lo), delta_block("Z", hi, a ** hi), "X", level)
            block = x if axis == "X" else replace(x.shifted(math.pi / 2), axis="Y")
    elif axis == "Z":
        if level == 1:
            raise ValueError("level-one Z blocks have no accurate inverse; use detuning_u1z")
        a = abs(coefficient) ** (1.0 / level)
        sign = 1.0 if coefficient >= 0 else -1.0
        lo, hi = level // 2, level - level // 2
        block = _commutator(delta_block("X", lo, sign * a ** lo), delta_block("Y", hi, a ** hi), "Z", level)
    else:
        raise ValueError(f"unknown axis {axis!r}")
    check_block(block.as_axis_block())
    return block


def sk_step_detuning(current: PulseSequence, tol: float = TOL_DEFECT) -> PulseSequence:
    """Cancel the next delta order with an in-plane block plus a Z block."""
    n = current.order + 1
    s = sequence_series(current.pulses, DETUNING, n)
    defect = leading_defect(s, current.target_unitary(), tol, scale=natural_scale(s, n))
    if defect is None or defect.order > n:
        return replace(current, order=n, family="SKD")
    if defect.order < n:
        raise ConstructionError(f"{current.label} has a surviving order-{defect.order} error")
    ax, ay, az = pauli_decompose(defect.a_matrix).bloch()
    pulses = list(current.pulses)
    r = math.hypot(ax, ay)
    # components at roundoff level need no block (and would fail its relative check)
    floor = tol * max(1.0, defect.norm)
    if r > floor:
        tau = math.atan2(-ay, -ax)
        pulses += delta_block("X", n, round(r, 15)).shifted(tau).pulses
    if abs(az) > floor:
        pulses += delta_block("Z", n, -az).pulses
    out = replace(current, order=n, family="SKD", pulses=tuple(pulses))
    out.check(tol, scaled=True)
    return out


def make_detuning_corrected(n: int, theta: float, tol: float = TOL_DEFECT) -> PulseSequence:
    """CORPSE followed by ladder steps up to order ``n`` in delta."""
    if n < 2:
        raise ValueError("detuning-corrected sequences start at order 2")
    seq = corpse(theta, tol)
    for _ in range(n - 1):
        seq = sk_step_detuning(seq, tol)
    return seq
