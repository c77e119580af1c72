"""Solovay-Kitaev composite pulses: commutator ladders that cancel one error order per step.

A level-``k`` block is a pulse sequence whose series is
``I - i sign a^k P / 2 x^k + O(x^{k+1})`` for a Pauli axis ``P``.  Level-one X
blocks are two ``2 pi k`` pulses; higher levels come from the group
commutator of a Y block and a Z block, since ``[Y, Z] = 2 i X``.

Each ladder step reads the leading defect ``A_n`` of the current sequence
from the series engine, rotates it onto the x axis with one planar pulse, and
appends a level-``n`` X block of amplitude ``|A_n|^(1/n)`` between that pulse
and its inverse.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from .sequence import ConstructionError, PulseSequence
from .series import TOL_DEFECT, leading_defect, natural_scale, sequence_series
from .su2 import AMPLITUDE, I2, X, Y, Z, ErrorModel, Pulse, ideal_rotation, pauli_decompose
from .ts import make_broadband, make_passband

log = logging.getLogger(__name__)

AXES = {"X": X, "Y": Y, "Z": Z}
MAX_LEVEL = 12
BLOCK_RTOL = 1e-8


@dataclass(frozen=True)
class AxisBlock:
    axis: str
    level: int
    amplitude: float
    sign: int
    pulses: Tuple[Pulse, ...]
    model: ErrorModel = AMPLITUDE

    @property
    def coefficient(self) -> float:
        """Signed weight ``c`` of the leading term ``-i c P / 2``."""
        return self.sign * self.amplitude ** self.level

    def expected_generator(self) -> np.ndarray:
        return self.coefficient * AXES[self.axis] / 2


def block_residual(block: AxisBlock) -> Tuple[float, float]:
    """(largest coefficient below the level, relative error of the leading coefficient)."""
    s = sequence_series(block.pulses, block.model, block.level)
    c0 = s[0]
    if min(np.linalg.norm(c0 - I2), np.linalg.norm(c0 + I2)) > 1e-10:
        return math.inf, math.inf
    low = max((float(np.linalg.norm(s[k])) for k in range(1, block.level)), default=0.0)
    want = -1j * block.expected_generator() @ c0
    scale = max(abs(block.coefficient) / 2, 1e-300)
    return low, float(np.linalg.norm(s[block.level] - want)) / scale


def check_block(block: AxisBlock, tol: float = TOL_DEFECT) -> AxisBlock:
    if not block.pulses:
        return block
    low, rel = block_residual(block)
    if low > tol * max(1.0, abs(block.coefficient)) or rel > BLOCK_RTOL:
        raise ConstructionError(
            f"{block.axis}-block level {block.level} a={block.amplitude}: "
            f"lower orders {low:.2e}, leading term rel. error {rel:.2e}"
        )
    return block


def invert_pulses(pulses) -> Tuple[Pulse, ...]:
    """Exact inverse under amplitude error: reversed order, negated angles."""
    return tuple(p.inverse() for p in reversed(pulses))


def u1x(a: float, sign: int = 1, verify: bool = True) -> AxisBlock:
    """First-order X block ``M_phi(2 pi k) M_{-phi}(2 pi k)`` with ``cos(phi) = sign a / (4 pi k)``."""
    if a == 0:
        return AxisBlock("X", 1, 0.0, sign, ())
    k = math.ceil(abs(a) / (4 * math.pi))
    phi = math.acos(max(-1.0, min(1.0, sign * a / (4 * math.pi * k))))
    block = AxisBlock("X", 1, a, sign, (Pulse(-phi, 2 * math.pi * k), Pulse(phi, 2 * math.pi * k)))
    return check_block(block) if verify else block


def axis_shift(block: AxisBlock, to_axis: str, verify: bool = True) -> AxisBlock:
    """Move an X block onto Y (phase shift) or Z (conjugation by y-axis quarter turns)."""
    if block.axis != "X":
        raise ValueError("axis_shift expects an X block")
    if to_axis == "X":
        return block
    if to_axis == "Y":
        pulses = tuple(p.shifted(math.pi / 2) for p in block.pulses)
    elif to_axis == "Z":
        # M_90(-pi/2) U M_90(pi/2); the paper's 90 is degrees
        pulses = (Pulse(math.pi / 2, math.pi / 2),) + block.pulses + (Pulse(math.pi / 2, -math.pi / 2),)
    else:
        raise ValueError(f"unknown axis {to_axis!r}")
    out = replace(block, axis=to_axis, pulses=pulses)
    return check_block(out) if verify else out


@functools.lru_cache(maxsize=4096)
def unx(n: int, a: float, sign: int = 1, max_level: int = MAX_LEVEL) -> AxisBlock:
    """Level-``n`` X block: ``U_Y(a) U_Z(a) U_Y(a)^-1 U_Z(a)^-1`` on levels ``floor(n/2)``, ``ceil(n/2)``.

    The negative-sign block is the exact inverse of the positive one, not the
    block for ``-a`` (``(-a)^k = a^k`` for even ``k``).
    """
    if n < 1:
        raise ValueError("block level must be >= 1")
    if n > max_level:
        raise ValueError(f"block level {n} exceeds cap {max_level}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if n == 1:
        return u1x(a, sign)
    if sign == -1:
        pos = unx(n, a, 1, max_level)
        return check_block(replace(pos, sign=-1, pulses=invert_pulses(pos.pulses)))
    yb = axis_shift(unx(n // 2, a, 1, max_level), "Y", verify=False)
    zb = axis_shift(unx(n - n // 2, a, 1, max_level), "Z", verify=False)
    # matrix order Y Z Y^-1 Z^-1; execution order is the reverse
    pulses = invert_pulses(zb.pulses) + invert_pulses(yb.pulses) + zb.pulses + yb.pulses
    return check_block(AxisBlock("X", n, a, 1, pulses))


@dataclass(frozen=True)
class PlanarConjugator:
    """Rotation ``R = R_{phi_c}(beta)`` with ``R (-A) R^dag = |A| X``."""

    phi_c: float
    beta: float

    @property
    def pulse(self) -> Pulse:
        return Pulse(self.phi_c, self.beta)

    def residual(self, a_matrix: np.ndarray) -> float:
        r = ideal_rotation(self.pulse)
        norm = float(np.linalg.norm(pauli_decompose(a_matrix).bloch()))
        return float(np.linalg.norm(r @ (-a_matrix) @ r.conj().T - norm * X))


def solve_conjugator(v: np.ndarray) -> PlanarConjugator:
    """Planar rotation taking the Bloch direction ``v`` onto +x.

    The axis ``n = (cos phi, sin phi, 0)`` must satisfy ``n.v = n.x``;
    the angle is the signed angle between the projections of ``v`` and ``x``
    on the plane normal to ``n``.
    """
    v = np.asarray(v, dtype=float)
    v = v / np.linalg.norm(v)
    vx, vy, vz = v
    if abs(vy) > 1e-15:
        phi = math.atan2(1 - vx, vy)
    elif abs(vz) > 1e-15 or vx < 0:
        phi = math.pi / 2
    else:
        return PlanarConjugator(0.0, 0.0)
    n = np.array([math.cos(phi), math.sin(phi), 0.0])
    xh = np.array([1.0, 0.0, 0.0])
    vp = v - (n @ v) * n
    xp = xh - (n @ xh) * n
    beta = math.atan2(float(n @ np.cross(vp, xp)), float(vp @ xp))
    return PlanarConjugator(phi, beta)


def conjugator_for(a_matrix: np.ndarray, tol: float = 1e-10) -> Tuple[PlanarConjugator, int]:
    """Conjugator and block sign cancelling the defect ``A``.

    Either ``R(-A)R^dag = |A| X`` with a ``+`` block or ``R A R^dag = |A| X``
    with a ``-`` block cancels ``A``; the one needing the smaller turn wins.
    """
    bloch = pauli_decompose(a_matrix).bloch()
    sign = 1 if -bloch[0] >= 0 else -1
    conj = solve_conjugator(-sign * bloch)
    res = conj.residual(sign * a_matrix)
    if res > tol * max(1.0, float(np.linalg.norm(bloch))):
        raise ConstructionError(f"planar conjugator residual {res:.2e}")
    return conj, sign


def sk_step(current: PulseSequence, tol: float = TOL_DEFECT, max_level: int = MAX_LEVEL) -> PulseSequence:
    """Cancel the next error order of ``current`` (amplitude error)."""
    n = current.order + 1
    target = current.target_unitary()
    s = sequence_series(current.pulses, current.model, n)
    defect = leading_defect(s, target, tol, scale=natural_scale(s, n))
    if defect is None or defect.order > n:
        log.info("free order: %s already cancels order %d", current.label, n)
        return replace(current, order=n)
    if defect.order < n:
        raise ConstructionError(f"{current.label} has a surviving order-{defect.order} error")
    conj, sign = conjugator_for(defect.a_matrix)
    block = unx(n, defect.norm ** (1.0 / n), sign, max_level)
    pulses = list(current.pulses)
    if conj.beta != 0.0:
        pulses += [conj.pulse] + list(block.pulses) + [conj.pulse.inverse()]
    else:
        pulses += list(block.pulses)
    out = replace(current, order=n, pulses=tuple(pulses))
    out.check(tol, scaled=True)
    return out


def make_sk(n: int, theta: float, tol: float = TOL_DEFECT, max_level: int = MAX_LEVEL) -> PulseSequence:
    if n < 1:
        raise ValueError("SK order must be >= 1")
    seq = replace(make_passband(0, theta), family="SK")
    for _ in range(n):
        seq = sk_step(seq, tol, max_level)
    return seq


def make_sb(n: int, theta: float, tol: float = TOL_DEFECT, max_level: int = MAX_LEVEL) -> PulseSequence:
    """SK ladder on top of B4, for orders above 4."""
    if n < 5:
        raise ValueError("SB sequences are defined for order > 4")
    seq = replace(make_broadband(2, theta), family="SB")
    for _ in range(n - 4):
        seq = sk_step(seq, tol, max_level)
    return seq
