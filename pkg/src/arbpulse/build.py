"""One entry point for every sequence family, as named on the command line."""

from __future__ import annotations

import math
from typing import Optional

from .detuning import corpse, make_detuning_corrected
from .sequence import PulseSequence
from .sk import MAX_LEVEL, make_sb, make_sk
from .ts import MAX_SN_LEVEL, make_broadband, make_narrowband, make_passband, wimperis

SYNTH_FAMILIES = ("P", "B", "N", "SK", "SB", "PB1", "BB1", "NB1", "CORPSE")


class FlagError(ValueError):
    """An invalid family/order combination (a usage error, not a numeric one)."""


def check_request(family: str, order: Optional[int]) -> int:
    """Validate a family/order pair and return the effective order."""
    if family not in SYNTH_FAMILIES:
        raise FlagError(f"unknown family {family!r}; expected one of {', '.join(SYNTH_FAMILIES)}")
    if family in ("PB1", "BB1", "NB1"):
        if order not in (None, 2):
            raise FlagError(f"{family} is the order-2 member of its family")
        return 2
    if family == "CORPSE":
        return 1 if order is None else order
    if order is None:
        raise FlagError(f"family {family} needs --order")
    if order < 0:
        raise FlagError("order must be nonnegative")
    if family in ("P", "B", "N") and order % 2:
        raise FlagError(f"{family} sequences exist for even orders only")
    if family == "SK" and order < 1:
        raise FlagError("SK sequences start at order 1")
    if family == "SB" and order < 5:
        raise FlagError("SB sequences are defined for order > 4 (use B for lower orders)")
    return order


def build_sequence(
    family: str,
    order: Optional[int],
    theta: float,
    phi: float = 0.0,
    sn_cap: int = MAX_SN_LEVEL,
    sk_max_level: int = MAX_LEVEL,
    tol: Optional[float] = None,
) -> PulseSequence:
    """Construct and verify a sequence; ``phi`` rotates every phase (target included).

    ``CORPSE`` with an order above 1 continues with the detuning ladder.
    """
    n = check_request(family, order)
    if not 0 < theta <= 2 * math.pi:
        raise FlagError(f"theta must lie in (0, 2 pi], got {theta}")
    kw = {} if tol is None else {"tol": tol}
    if family in ("PB1", "BB1", "NB1"):
        seq = wimperis(family, theta)
    elif family == "P":
        seq = make_passband(n // 2, theta, sn_cap)
    elif family == "B":
        seq = make_broadband(n // 2, theta, sn_cap)
    elif family == "N":
        seq = make_narrowband(n // 2, theta, sn_cap)
    elif family == "SK":
        seq = make_sk(n, theta, max_level=sk_max_level, **kw)
    elif family == "SB":
        seq = make_sb(n, theta, max_level=sk_max_level, **kw)
    elif n <= 1:
        seq = corpse(theta, **kw)
    else:
        seq = make_detuning_corrected(n, theta, **kw)
    return seq.shifted(phi)
