"""Truncated power series in the error parameter with 2x2 matrix coefficients.

``U(x) = C_0 + C_1 x + ... + C_N x^N + O(x^{N+1})``.  The series of a pulse
sequence is the exact order-by-order oracle used to certify compensation
order; evaluating residuals numerically at small ``x`` runs into the
floating-point floor long before high orders are visible.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .su2 import (
    AMPLITUDE,
    I2,
    X,
    Y,
    Z,
    Amplitude,
    ErrorModel,
    Pulse,
    THETA_EPS,
    pauli_decompose,
)

MAX_DEGREE = 64
TOL_DEFECT = 1e-9
# extended precision keeps roundoff in long (~10^3 pulse) products well below
# the defect tolerance
DTYPE = np.clongdouble
_REAL = np.longdouble
_I2 = np.eye(2, dtype=DTYPE)
_X = X.astype(DTYPE)
_Y = Y.astype(DTYPE)
_Z = Z.astype(DTYPE)


class SeriesError(ValueError):
    pass


class DefectError(SeriesError):
    """The series does not start at the target, or its defect is not Hermitian."""


@dataclass(frozen=True, eq=False)
class MatrixSeries:
    coeffs: np.ndarray  # shape (N+1, 2, 2)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=DTYPE)
        if c.ndim != 3 or c.shape[1:] != (2, 2) or c.shape[0] < 1:
            raise SeriesError(f"bad coefficient array shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def __getitem__(self, k: int) -> np.ndarray:
        return self.coeffs[k].astype(complex)

    def __matmul__(self, other: "MatrixSeries") -> "MatrixSeries":
        return series_multiply(self, other)

    @classmethod
    def identity(cls, degree: int) -> "MatrixSeries":
        c = np.zeros((degree + 1, 2, 2), dtype=DTYPE)
        c[0] = _I2
        return cls(c)

    def evaluate(self, x: float) -> np.ndarray:
        powers = _REAL(x) ** np.arange(self.degree + 1)
        return np.tensordot(powers, self.coeffs, axes=1).astype(complex)

    def adjoint(self) -> "MatrixSeries":
        """Term-wise conjugate transpose; the inverse series of a unitary family."""
        return MatrixSeries(np.conj(np.swapaxes(self.coeffs, 1, 2)))

    def unitarity_residual(self) -> float:
        """Largest entry of ``sum_{i+j=k} C_i^dag C_j - delta_k0 I`` over all ``k``."""
        prod = series_multiply(self.adjoint(), self)
        return float(np.max(np.abs(prod.coeffs - MatrixSeries.identity(self.degree).coeffs)))

    def norms(self) -> np.ndarray:
        return np.sqrt(np.sum(np.abs(self.coeffs) ** 2, axis=(1, 2))).astype(float)


def _check_degree(n: int) -> None:
    if n < 0:
        raise SeriesError(f"negative degree {n}")
    if n > MAX_DEGREE:
        raise SeriesError(f"degree {n} exceeds cap {MAX_DEGREE}")


def series_multiply(a: MatrixSeries, b: MatrixSeries) -> MatrixSeries:
    """Cauchy product ``a(x) b(x)`` truncated at the common degree."""
    if a.degree != b.degree:
        raise SeriesError(f"degree mismatch {a.degree} != {b.degree}")
    n = a.degree
    out = np.zeros_like(a.coeffs)
    for k in range(n + 1):
        out[k] = np.einsum("iab,ibc->ac", a.coeffs[: k + 1], b.coeffs[k::-1])
    return MatrixSeries(out)


# scalar truncated series helpers (real or complex 1-d coefficient arrays)

def _smul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: len(a)]


def _ssqrt(a: np.ndarray) -> np.ndarray:
    s = np.zeros_like(a)
    s[0] = np.sqrt(a[0])
    for k in range(1, len(a)):
        s[k] = (a[k] - np.dot(s[1:k], s[k - 1:0:-1])) / (2 * s[0])
    return s


def _srecip(a: np.ndarray) -> np.ndarray:
    r = np.zeros_like(a)
    r[0] = 1 / a[0]
    for k in range(1, len(a)):
        r[k] = -np.dot(a[1 : k + 1], r[k - 1 :: -1]) / a[0]
    return r


def _sexp(w: np.ndarray) -> np.ndarray:
    """exp of a series with zero constant term: ``k e_k = sum_j j w_j e_{k-j}``."""
    e = np.zeros(len(w), dtype=DTYPE)
    e[0] = 1.0
    for k in range(1, len(w)):
        j = np.arange(1, k + 1)
        e[k] = np.dot(j * w[1 : k + 1], e[k - j]) / k
    return e


@functools.lru_cache(maxsize=65536)
def _pulse_series_cached(phi: float, theta: float, model: ErrorModel, degree: int) -> MatrixSeries:
    c = np.zeros((degree + 1, 2, 2), dtype=DTYPE)
    phi_l, theta_l = _REAL(phi), _REAL(theta)
    sig = np.cos(phi_l) * _X + np.sin(phi_l) * _Y
    if isinstance(model, Amplitude):
        # M(eps) = R(theta) exp(-i theta eps sigma/2)
        step = -1j * theta_l / 2 * sig
        term = np.cos(theta_l / 2) * _I2 - 1j * np.sin(theta_l / 2) * sig
        c[0] = term
        for k in range(1, degree + 1):
            term = term @ step / k
            c[k] = term
        return MatrixSeries(c)

    if abs(theta) < THETA_EPS:
        c[0] = _I2
        return MatrixSeries(c)
    # exp(-i(H0 + x H1)) = cos(h) I - i sin(h)/h (H0 + x H1), h = |theta|/2 sqrt(1 + x^2)
    half = abs(theta_l) / 2
    h0 = np.zeros(degree + 1, dtype=_REAL)
    h0[0] = 1.0
    if degree >= 2:
        h0[2] = 1.0
    h = half * _ssqrt(h0)
    u = h.copy()
    u[0] = 0.0
    eih = (np.cos(h[0]) + 1j * np.sin(h[0])) * _sexp(1j * u)
    cos_h, sin_h = eih.real, eih.imag
    sinc = _smul(sin_h, _srecip(h))
    gen0 = theta_l / 2 * sig
    gen1 = half * _Z
    for k in range(degree + 1):
        c[k] = cos_h[k] * _I2 - 1j * sinc[k] * gen0
        if k >= 1:
            c[k] -= 1j * sinc[k - 1] * gen1
    return MatrixSeries(c)


def pulse_series(p: Pulse, model: ErrorModel, degree: int) -> MatrixSeries:
    """Exact Taylor coefficients of ``imperfect_rotation(p, model, x)`` in ``x``."""
    _check_degree(degree)
    return _pulse_series_cached(float(p.phi), float(p.theta), model, degree)


def sequence_series(pulses: Sequence[Pulse], model: ErrorModel, degree: int) -> MatrixSeries:
    """Series of the executed product (first pulse acts first)."""
    if len(pulses) == 0:
        raise SeriesError("empty pulse sequence")
    _check_degree(degree)
    acc = pulse_series(pulses[0], model, degree)
    for p in pulses[1:]:
        acc = series_multiply(pulse_series(p, model, degree), acc)
    return acc


@dataclass(frozen=True, eq=False)
class DefectTerm:
    """Leading left defect ``U = (I - i G x^n + ...) C_0`` with ``A = 2 G``."""

    order: int
    generator: np.ndarray
    a_matrix: np.ndarray = field(init=False)
    norm: float = field(init=False)

    def __post_init__(self):
        a = 2 * self.generator
        object.__setattr__(self, "a_matrix", a)
        object.__setattr__(self, "norm", float(np.linalg.norm(pauli_decompose(a).bloch())))

    @property
    def pauli(self):
        return pauli_decompose(self.a_matrix)


def _target_sign(c0: np.ndarray, target: np.ndarray) -> None:
    if min(np.linalg.norm(c0 - target), np.linalg.norm(c0 + target)) > 1e-12 * max(1.0, np.linalg.norm(target)):
        raise DefectError("series does not start at the target rotation")


def _thresholds(tol: float, target: np.ndarray, degree: int, scale: Optional[float]) -> np.ndarray:
    base = tol * max(1.0, float(np.linalg.norm(target, 2)))
    k = np.arange(degree + 1)
    if scale is None:
        return np.full(degree + 1, base)
    return base * np.maximum(1.0, float(scale) ** k)


def natural_scale(s: MatrixSeries, order: int) -> float:
    """``|C_order|^(1/order)``: the radius against which lower coefficients count as zero."""
    return float(s.norms()[order]) ** (1.0 / order)


def leading_defect(
    s: MatrixSeries, target: np.ndarray, tol: float = TOL_DEFECT, scale: Optional[float] = None
) -> Optional[DefectTerm]:
    """First nonvanishing order of ``s`` as a Hermitian traceless left generator.

    A coefficient vanishes when its norm is below ``tol`` (times ``scale^k``
    when a natural scale is given).  Returns ``None`` when coefficients
    1..degree all vanish.
    """
    _target_sign(s[0], target)
    thresholds = _thresholds(tol, target, s.degree, scale)
    norms = s.norms()
    for n in range(1, s.degree + 1):
        if norms[n] > thresholds[n]:
            return defect_at(s, n)
    return None


def defect_at(s: MatrixSeries, n: int) -> DefectTerm:
    """Left generator ``G = i C_n C_0^dag`` at order ``n`` (Hermitian part, checked)."""
    g = 1j * s[n] @ s[0].conj().T
    herm = (g + g.conj().T) / 2
    scale = max(1.0, float(np.linalg.norm(g)))
    anti = float(np.linalg.norm(g - herm))
    if anti > 1e-9 * scale:
        raise DefectError(f"order-{n} defect is not Hermitian (residue {anti:.3e})")
    if abs(np.trace(herm)) > 1e-9 * scale:
        raise DefectError(f"order-{n} defect is not traceless")
    return DefectTerm(n, herm - np.trace(herm) / 2 * I2)


@dataclass(frozen=True)
class OrderReport:
    claimed: int
    passed: bool
    status: str  # "ok", "exceeds claimed order" or "fails"
    norms: tuple
    thresholds: tuple

    def lines(self) -> list:
        out = [f"claimed order {self.claimed}: {self.status}"]
        for k in range(1, len(self.norms)):
            mark = "vanishes" if self.norms[k] <= self.thresholds[k] else "nonzero"
            out.append(f"  |C_{k}| = {self.norms[k]:.3e}  {mark}")
        return out


def verify_order(
    pulses: Sequence[Pulse],
    model: ErrorModel,
    target: np.ndarray,
    claimed: int,
    tol: float = TOL_DEFECT,
    series: Optional[MatrixSeries] = None,
    scaled: bool = False,
) -> OrderReport:
    """Check that coefficients 1..claimed vanish and ``claimed + 1`` survives.

    With ``scaled`` the threshold at order ``k`` is multiplied by ``rho^k``,
    ``rho = |C_{claimed+1}|^(1/(claimed+1))``.  High-order ladders need this:
    pulse parameters are doubles, so cancellation is only good to ~1e-16
    relative to the coefficient scale.
    """
    s = series if series is not None else sequence_series(pulses, model, claimed + 1)
    norms = tuple(float(v) for v in s.norms()[: claimed + 2])
    scale = natural_scale(s, claimed + 1) if scaled else None
    thresholds = _thresholds(tol, target, claimed + 1, scale)
    try:
        _target_sign(s[0], target)
    except DefectError:
        return OrderReport(claimed, False, "fails", norms, tuple(thresholds))
    if any(v > t for v, t in zip(norms[1 : claimed + 1], thresholds[1:])):
        return OrderReport(claimed, False, "fails", norms, tuple(thresholds))
    status = "ok" if norms[claimed + 1] > thresholds[claimed + 1] else "exceeds claimed order"
    return OrderReport(claimed, True, status, norms, tuple(thresholds))
