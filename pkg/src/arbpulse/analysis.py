"""Error metrics, parameter sweeps, order fits and pulse-count scaling."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .sequence import PulseSequence
from .sk import make_sb, make_sk
from .su2 import ErrorModel, distance, fidelity

log = logging.getLogger(__name__)

METRICS = ("trace", "infidelity", "signal")
NOISE_FLOOR = 1e-13
MIN_FIT_POINTS = 4
MIN_WINDOW_POINTS = 8
FIT_LIMITS = (1e-3, 0.3)
DEFAULT_WINDOW = (10 ** -2.5, 10 ** -1.5)
DEFAULT_GRID = (1e-3, 0.5, 61)


class FitError(ValueError):
    """Too few usable points for a log-log slope."""


def evaluate(seq: PulseSequence, model: Optional[ErrorModel], value: float, metric: str = "trace") -> float:
    """Error of ``seq`` at error ``value``.

    ``trace`` is the sign-minimized Frobenius distance to the target,
    ``infidelity`` is ``1 - |tr(V^dag U)|/2`` and ``signal`` is the population
    ``|<0| U_ideal^dag U_exec |0>|^2`` (1 when the pulse is perfect).
    """
    ideal = seq.target_unitary()
    u = seq.execute(value, model)
    if metric == "trace":
        return distance(ideal, u)
    if metric == "infidelity":
        return max(0.0, 1.0 - fidelity(ideal, u))
    if metric == "signal":
        return float(abs((ideal.conj().T @ u)[0, 0]) ** 2)
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def log_grid(start: float, stop: float, points: int) -> np.ndarray:
    if not 0 < start < stop:
        raise ValueError("log grid needs 0 < start < stop")
    if points < 2:
        raise ValueError("grid needs at least 2 points")
    return np.logspace(math.log10(start), math.log10(stop), points)


def linear_grid(start: float, stop: float, points: int) -> np.ndarray:
    if not start < stop:
        raise ValueError("grid needs start < stop")
    if points < 2:
        raise ValueError("grid needs at least 2 points")
    return np.linspace(start, stop, points)


@dataclass(frozen=True)
class SweepResult:
    labels: Tuple[str, ...]
    epsilons: np.ndarray
    errors: np.ndarray  # rows follow epsilons, columns follow labels
    metric: str

    def column(self, label: str) -> np.ndarray:
        return self.errors[:, self.labels.index(label)]


def _column(args) -> np.ndarray:
    seq, model, grid, metric = args
    return np.array([evaluate(seq, model, float(e), metric) for e in grid])


def sweep(
    seqs: Sequence[PulseSequence],
    model: Optional[ErrorModel],
    grid: Sequence[float],
    metric: str = "trace",
    jobs: int = 1,
) -> SweepResult:
    """Evaluate every sequence on every grid point.

    With ``jobs > 1`` sequences are evaluated in worker processes; each value is
    computed by the same code path either way, so results are bit-identical.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("grid must be a nonempty 1-d sequence")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be strictly increasing")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    tasks = [(s, model, grid, metric) for s in seqs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cols = list(pool.map(_column, tasks))
    else:
        cols = [_column(t) for t in tasks]
    errors = np.column_stack(cols) if cols else np.empty((grid.size, 0))
    return SweepResult(tuple(s.label for s in seqs), grid, errors, metric)


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of ``log y`` against ``log x``, ignoring ``y`` below the noise floor."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = y >= NOISE_FLOOR
    if keep.sum() < MIN_FIT_POINTS:
        raise FitError("below noise floor — use series oracle")
    slope, _ = np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)
    return float(slope)


def fit_order(
    seq: PulseSequence,
    model: Optional[ErrorModel] = None,
    window: Tuple[float, float] = DEFAULT_WINDOW,
    points: int = 16,
    metric: str = "trace",
) -> float:
    """Fitted log-log slope of the error over ``window``; about ``n + 1`` for an order-``n`` sequence."""
    lo, hi = window
    if lo < FIT_LIMITS[0] * (1 - 1e-12) or hi > FIT_LIMITS[1] * (1 + 1e-12) or lo >= hi:
        raise ValueError(f"fit window must lie within {FIT_LIMITS}")
    if points < MIN_WINDOW_POINTS:
        raise FitError(f"fit needs at least {MIN_WINDOW_POINTS} grid points")
    grid = log_grid(lo, hi, points)
    return loglog_slope(grid, [evaluate(seq, model, e, metric) for e in grid])


def count_two_pi(seq: PulseSequence) -> float:
    """Total corrective rotation in units of 2 pi (the base pulse is excluded)."""
    return seq.two_pi_equivalents


@dataclass(frozen=True)
class ScalingResult:
    family: str
    orders: Tuple[int, ...]
    pulse_counts: Tuple[int, ...]
    two_pi_equivalents: Tuple[float, ...]
    fit_orders: Tuple[int, int]
    fitted_exponent: float  # of the pulse count
    two_pi_exponent: float


def scaling_study(
    family: str,
    n_max: int,
    theta: float = math.pi / 2,
    fit_range: Tuple[int, int] = (4, 12),
    max_order: int = 16,
) -> ScalingResult:
    """Build SKn or SBn up to ``n_max`` and fit ``count ~ n^p`` over ``fit_range``."""
    if family not in ("SK", "SB"):
        raise ValueError("scaling study supports the SK and SB families")
    if n_max > max_order:
        raise ValueError(f"n_max must be <= {max_order}")
    first = 2 if family == "SK" else 5
    if n_max < first:
        raise ValueError(f"n_max must be >= {first} for {family}")
    make = make_sk if family == "SK" else make_sb
    orders: List[int] = list(range(first, n_max + 1))
    counts, two_pi = [], []
    for n in orders:
        seq = make(n, theta, max_level=max(12, n))
        counts.append(seq.pulse_count)
        two_pi.append(seq.two_pi_equivalents)
        log.info("%s: %d pulses, %.3f 2pi-equivalents", seq.label, seq.pulse_count, seq.two_pi_equivalents)
    lo, hi = max(fit_range[0], first), min(fit_range[1], n_max)
    sel = [i for i, n in enumerate(orders) if lo <= n <= hi]
    if len(sel) < 2:
        sel = list(range(len(orders)))
    if len(sel) < 2:
        raise FitError("scaling fit needs at least two orders")
    ns = np.log([orders[i] for i in sel])
    p = float(np.polyfit(ns, np.log([counts[i] for i in sel]), 1)[0])
    q = float(np.polyfit(ns, np.log([two_pi[i] for i in sel]), 1)[0])
    return ScalingResult(
        family, tuple(orders), tuple(counts), tuple(two_pi), (orders[sel[0]], orders[sel[-1]]), p, q
    )
