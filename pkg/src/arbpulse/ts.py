"""Trotter-Suzuki composite pulse families: passband (P), broadband (B), narrowband (N).

The passband corrector ``S_j(phi_j, -phi_j, 2)`` is a symmetric product of
triplets ``S_1(phi1, phi2, m) = M_phi1(m pi) M_phi2(2 m pi) M_phi1(m pi)``.
The recursion ``S_n(m) = S_{n-1}(m)^{4^{n-1}} S_{n-1}(-2m) S_{n-1}(m)^{4^{n-1}}``
uses integer weights whose odd power sums vanish, so every odd error order
up to ``2n - 1`` cancels.
"""

from __future__ import annotations

import math
from typing import Callable, List

from .sequence import ConstructionError, PulseSequence
from .su2 import AMPLITUDE, Pulse, ideal_sequence, imperfect_rotation

MAX_SN_LEVEL = 6


def s1(phi1: float, phi2: float, m: int) -> List[Pulse]:
    return [Pulse(phi1, m * math.pi), Pulse(phi2, 2 * m * math.pi), Pulse(phi1, m * math.pi)]


def triplet_scales(n: int, m: int, cap: int = MAX_SN_LEVEL) -> List[int]:
    """The integer scale of every ``S_1`` leaf in ``S_n(., ., m)``, in order."""
    if n < 1:
        raise ValueError(f"S_n needs n >= 1, got {n}")
    if n > cap:
        raise ValueError(f"S_{n} exceeds the recursion cap {cap}")
    if n == 1:
        return [m]
    outer = triplet_scales(n - 1, m, cap) * 4 ** (n - 1)
    return outer + triplet_scales(n - 1, -2 * m, cap) + outer


def sn(n: int, phi1: float, phi2: float, m: int, cap: int = MAX_SN_LEVEL) -> List[Pulse]:
    pulses: List[Pulse] = []
    for k in triplet_scales(n, m, cap):
        pulses.extend(s1(phi1, phi2, k))
    return pulses


def f_weight(j: int) -> int:
    """Net weight of ``S_j``: ``f_1 = 1``, ``f_j = (2^(2j-1) - 2) f_{j-1}``."""
    f = 1
    for i in range(2, j + 1):
        f *= 2 ** (2 * i - 1) - 2
    return f


def _arccos(x: float) -> float:
    if abs(x) > 1:
        raise ConstructionError(f"phase unsolvable: arccos({x})")
    return math.acos(x)


def passband_phase(j: int, theta: float) -> float:
    return _arccos(-theta / (8 * math.pi * f_weight(j)))


def broadband_phase(j: int, theta: float) -> float:
    return _arccos(2 * math.cos(passband_phase(j, theta)))


def _check_theta(theta: float) -> None:
    if not 0 < theta <= 2 * math.pi:
        raise ValueError(f"target angle must lie in (0, 2 pi], got {theta}")


def _build(family, j, theta, leaf: Callable[[int], List[Pulse]], order, cap, narrowband=False, verify=True):
    _check_theta(theta)
    if j < 0:
        raise ValueError("negative order")
    pulses = [Pulse(0.0, theta)]
    if j > 0:
        for m in triplet_scales(j, 2, cap):
            pulses.extend(leaf(m))
    seq = PulseSequence(family, order, Pulse(0.0, theta), tuple(pulses), narrowband=narrowband)
    if verify:
        seq.check()
    return seq


def make_passband(j: int, theta: float, cap: int = MAX_SN_LEVEL, verify: bool = True) -> PulseSequence:
    """P(2j): the target pulse followed by ``S_j(phi_j, -phi_j, 2)``."""
    phi = passband_phase(j, theta) if j > 0 else 0.0
    return _build("P", j, theta, lambda m: s1(phi, -phi, m), 2 * j, cap, verify=verify)


def make_broadband(j: int, theta: float, cap: int = MAX_SN_LEVEL, verify: bool = True) -> PulseSequence:
    """B(2j): each passband leaf ``S_1(phi, -phi, m)`` becomes
    ``S_1(phi_B, -phi_B + 4 phi_B ((m/2) mod 2), m/2)`` with ``cos(phi_B) = 2 cos(phi)``.
    """
    phi = broadband_phase(j, theta) if j > 0 else 0.0

    def leaf(m):
        half = m // 2
        return s1(phi, -phi + 4 * phi * (half % 2), half)

    return _build("B", j, theta, leaf, 2 * j, cap, verify=verify)


def make_narrowband(j: int, theta: float, cap: int = MAX_SN_LEVEL, verify: bool = True) -> PulseSequence:
    """N(2j): the passband sequence with every corrective angle halved.

    Narrowband sequences do not cancel error, so the claimed order is 0.
    """
    phi = passband_phase(j, theta) if j > 0 else 0.0

    def leaf(m):
        return [Pulse(p.phi, p.theta / 2) for p in s1(phi, -phi, m)]

    return _build("N", j, theta, leaf, 0, cap, narrowband=True, verify=verify)


def wimperis(name: str, theta: float) -> PulseSequence:
    makers = {"PB1": make_passband, "BB1": make_broadband, "NB1": make_narrowband}
    try:
        return makers[name](1, theta)
    except KeyError:
        raise ValueError(f"unknown Wimperis sequence {name!r}") from None


def toggled_frame(name: str, theta: float, epsilon: float):
    """True-rotation ("toggled frame") form of PB1 or BB1 under amplitude error.

    Each imperfect ``2 pi k`` multiple collapses to the small true rotation
    ``R_phi(2 pi k epsilon)``, so PB1 becomes
    ``R_{phi1}(2 pi eps) R_{-phi1}(4 pi eps) R_{phi1}(2 pi eps) M_0(theta)`` and BB1
    ``R_{phiB}(pi eps) R_{-phiB}(2 pi eps) R_{phiB}(pi eps) M_0(theta)`` (matrix order).
    Agrees with executing the pulse list up to global sign.
    """
    if name == "PB1":
        phi, unit = passband_phase(1, theta), 2 * math.pi
    elif name == "BB1":
        phi, unit = broadband_phase(1, theta), math.pi
    else:
        raise ValueError(f"toggled frame defined for PB1 and BB1, not {name!r}")
    small = [Pulse(phi, unit * epsilon), Pulse(-phi, 2 * unit * epsilon), Pulse(phi, unit * epsilon)]
    return ideal_sequence(small) @ imperfect_rotation(Pulse(0.0, theta), AMPLITUDE, epsilon)
