"""Sequence (JSON) and sweep (CSV) file formats."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import List, Tuple, Union

from .analysis import ScalingResult, SweepResult
from .sequence import FAMILIES, PulseSequence
from .series import TOL_DEFECT
from .su2 import Pulse

PathLike = Union[str, Path]
# families whose order check uses coefficient-scaled thresholds (long ladders)
SCALED_FAMILIES = ("SK", "SB", "SKD")


class SequenceFileError(ValueError):
    """A sequence file is malformed or fails re-verification."""


def fmt_float(x: float) -> str:
    """Shortest faithful text for a double: 17 significant digits."""
    if not math.isfinite(x):
        raise ValueError("non-finite number")
    return f"{x:.17g}"


def fmt_sci(x: float) -> str:
    """Scientific notation with 12 fraction digits and a bare exponent, e.g. ``2.219158345397e-1``."""
    mantissa, exp = f"{x:.12e}".split("e")
    return f"{mantissa}e{int(exp)}"


def _pulse_json(p: Pulse) -> str:
    return f'{{"phi": {fmt_float(p.phi)}, "theta": {fmt_float(p.theta)}}}'


def dumps_sequence(seq: PulseSequence) -> str:
    two_pi = seq.two_pi_equivalents
    two_pi_text = str(int(two_pi)) if two_pi == int(two_pi) else fmt_float(two_pi)
    lines = [
        "{",
        f'  "family": {json.dumps(seq.family)},',
        f'  "order": {seq.order},',
        f'  "target": {_pulse_json(seq.target)},',
        '  "pulses": [',
        ",\n".join(f"    {_pulse_json(p)}" for p in seq.pulses),
        "  ],",
        f'  "meta": {{"pulse_count": {seq.pulse_count}, "two_pi_equivalents": {two_pi_text}}}',
        "}",
    ]
    return "\n".join(lines) + "\n"


def save_sequence(seq: PulseSequence, path: PathLike) -> None:
    Path(path).write_text(dumps_sequence(seq), encoding="utf-8", newline="\n")


def _pulse(obj, where: str) -> Pulse:
    try:
        return Pulse(float(obj["phi"]), float(obj["theta"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise SequenceFileError(f"bad {where}: {exc}") from None


def loads_sequence(text: str, verify: bool = True, tol: float = TOL_DEFECT) -> PulseSequence:
    """Parse a sequence file; by default it must re-pass its order check."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SequenceFileError(f"not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise SequenceFileError("sequence file must hold a JSON object")
    missing = {"family", "order", "target", "pulses"} - data.keys()
    if missing:
        raise SequenceFileError(f"missing keys: {', '.join(sorted(missing))}")
    family = data["family"]
    if family not in FAMILIES:
        raise SequenceFileError(f"unknown family {family!r}")
    order = data["order"]
    if not isinstance(order, int) or isinstance(order, bool) or order < 0:
        raise SequenceFileError("order must be a nonnegative integer")
    if not isinstance(data["pulses"], list) or not data["pulses"]:
        raise SequenceFileError("pulses must be a nonempty list")
    pulses = tuple(_pulse(p, f"pulse {i}") for i, p in enumerate(data["pulses"]))
    seq = PulseSequence(
        family,
        order,
        _pulse(data["target"], "target"),
        pulses,
        has_base=family not in ("CORPSE", "SKD", "RAW"),
        narrowband=family == "N",
    )
    meta = data.get("meta", {})
    if "pulse_count" in meta and meta["pulse_count"] != seq.pulse_count:
        raise SequenceFileError(f"meta pulse_count {meta['pulse_count']} != {seq.pulse_count} pulses")
    if verify:
        try:
            seq.check(tol, scaled=family in SCALED_FAMILIES)
        except Exception as exc:
            raise SequenceFileError(f"sequence fails re-verification: {exc}") from None
    return seq


def load_sequence(path: PathLike, verify: bool = True, tol: float = TOL_DEFECT) -> PulseSequence:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SequenceFileError(f"cannot read {path}: {exc}") from None
    return loads_sequence(text, verify, tol)


def dumps_sweep(result: SweepResult) -> str:
    rows = [",".join(("epsilon",) + tuple(result.labels))]
    for eps, errs in zip(result.epsilons, result.errors):
        rows.append(",".join([fmt_sci(float(eps))] + [fmt_sci(float(e)) for e in errs]))
    return "\n".join(rows) + "\n"


def loads_sweep(text: str) -> Tuple[List[str], List[List[float]]]:
    """Inverse of :func:`dumps_sweep`: (labels, rows of floats)."""
    lines = text.rstrip("\n").split("\n")
    header = lines[0].split(",")
    if header[0] != "epsilon":
        raise ValueError("sweep file must start with an epsilon column")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    if any(len(r) != len(header) for r in rows):
        raise ValueError("ragged sweep file")
    return header[1:], rows


def dumps_scaling(result: ScalingResult) -> str:
    rows = ["n,count"] + [f"{n},{c}" for n, c in zip(result.orders, result.pulse_counts)]
    return "\n".join(rows) + "\n"


def write_text(text: str, path: PathLike) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")

