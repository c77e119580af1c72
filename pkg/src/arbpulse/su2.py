"""Ideal and imperfect single-qubit rotations on SU(2).

Unitaries are plain ``(2, 2)`` complex numpy arrays with unit determinant.
A rotation about the axis at azimuth ``phi`` in the x-y plane by angle
``theta`` is ``exp(-i theta/2 (cos(phi) X + sin(phi) Y))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (I2, X, Y, Z)

# pulses shorter than this are treated as the identity (avoids 0 * inf in the
# detuning generator)
THETA_EPS = 1e-300


@dataclass(frozen=True)
class Pulse:
    """One rotation instruction: axis azimuth ``phi`` and signed angle ``theta`` (radians)."""

    phi: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.phi) and math.isfinite(self.theta)):
            raise ValueError(f"non-finite pulse {self.phi!r}, {self.theta!r}")

    def shifted(self, dphi: float) -> "Pulse":
        return Pulse(self.phi + dphi, self.theta)

    def inverse(self) -> "Pulse":
        """Same axis, negated angle; an exact inverse under amplitude error."""
        return Pulse(self.phi, -self.theta)


@dataclass(frozen=True)
class Amplitude:
    """Every rotation angle is scaled by ``1 + epsilon``."""

    name = "amplitude"


@dataclass(frozen=True)
class Detuning:
    """An off-resonance term ``|theta/2| * delta * Z`` is added to each generator."""

    name = "detuning"


ErrorModel = Union[Amplitude, Detuning]
AMPLITUDE = Amplitude()
DETUNING = Detuning()


def error_model(name: str) -> ErrorModel:
    try:
        return {"amplitude": AMPLITUDE, "detuning": DETUNING}[name]
    except KeyError:
        raise ValueError(f"unknown error model {name!r}") from None


@dataclass(frozen=True)
class PauliVector:
    """Coefficients of ``A = i*I + x*X + y*Y + z*Z``."""

    i: complex
    x: complex
    y: complex
    z: complex

    def matrix(self) -> np.ndarray:
        return self.i * I2 + self.x * X + self.y * Y + self.z * Z

    def bloch(self) -> np.ndarray:
        """Real part of the (x, y, z) components."""
        return np.array([self.x.real, self.y.real, self.z.real])

    def __str__(self):
        return " ".join(f"{k}={complex(v):+.6e}" for k, v in zip("IXYZ", (self.i, self.x, self.y, self.z)))


def pauli_decompose(a: np.ndarray) -> PauliVector:
    """Decompose a 2x2 matrix as ``sum_P tr(P^dag a)/2 * P``."""
    a = np.asarray(a, dtype=complex)
    return PauliVector(*(complex(np.trace(p.conj().T @ a) / 2) for p in PAULIS))


def sigma(phi: float) -> np.ndarray:
    return math.cos(phi) * X + math.sin(phi) * Y


def ideal_rotation(p: Pulse) -> np.ndarray:
    half = p.theta / 2
    return math.cos(half) * I2 - 1j * math.sin(half) * sigma(p.phi)


def _exp_traceless(v: np.ndarray) -> np.ndarray:
    """``exp(-i v.sigma)`` for a real 3-vector ``v``."""
    h = float(np.linalg.norm(v))
    if h == 0.0:
        return I2.copy()
    gen = v[0] * X + v[1] * Y + v[2] * Z
    return math.cos(h) * I2 - 1j * (math.sin(h) / h) * gen


def imperfect_rotation(p: Pulse, model: ErrorModel, value: float) -> np.ndarray:
    """The rotation actually executed for pulse ``p`` under ``model`` with error ``value``."""
    if isinstance(model, Amplitude):
        return ideal_rotation(Pulse(p.phi, p.theta * (1.0 + value)))
    if abs(p.theta) < THETA_EPS:
        return I2.copy()
    half = p.theta / 2
    v = np.array([half * math.cos(p.phi), half * math.sin(p.phi), abs(half) * value])
    return _exp_traceless(v)


def _renormalize(u: np.ndarray) -> np.ndarray:
    # divide out det drift with the root nearest 1 so the sign is preserved
    d = np.linalg.det(u)
    return u / np.sqrt(d)


def execute_sequence(pulses: Sequence[Pulse], model: ErrorModel, value: float) -> np.ndarray:
    """Product of imperfect pulses; the first pulse in the list acts first (rightmost)."""
    if len(pulses) == 0:
        raise ValueError("empty pulse sequence")
    u = I2.copy()
    for p in pulses:
        u = imperfect_rotation(p, model, value) @ u
    return _renormalize(u)


def ideal_sequence(pulses: Iterable[Pulse]) -> np.ndarray:
    u = I2.copy()
    for p in pulses:
        u = ideal_rotation(p) @ u
    return u


def to_su2(a: np.ndarray) -> np.ndarray:
    """Project onto unit determinant with a deterministic sign.

    The square root of the determinant is chosen so that the first nonzero
    entry (row-major) has phase in ``(-pi/2, pi/2]``.
    """
    a = np.asarray(a, dtype=complex)
    u = a / np.sqrt(np.linalg.det(a))
    for entry in u.flat:
        if abs(entry) > 1e-15:
            ang = np.angle(entry)
            if not (-math.pi / 2 < ang <= math.pi / 2):
                u = -u
            break
    return u


def distance(u: np.ndarray, v: np.ndarray) -> float:
    """Frobenius distance minimised over the global sign of ``v``."""
    return float(min(np.linalg.norm(u - v), np.linalg.norm(u + v)))


def fidelity(u: np.ndarray, v: np.ndarray) -> float:
    return float(min(1.0, abs(np.trace(v.conj().T @ u)) / 2))


def unitarity_residual(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - I2)))


def determinant_residual(u: np.ndarray) -> float:
    return float(abs(np.linalg.det(u) - 1))
