"""Independent high-precision reference, sharing no code with the package.

Rotations are rebuilt from their closed forms in mpmath at 40 digits, and
series coefficients are taken as Taylor coefficients of the executed
product by mpmath's numerical differentiation.
"""

from __future__ import annotations

import mpmath as mp

mp.mp.dps = 40


def _rot(phi, theta, model, x):
    phi, theta, x = mp.mpf(phi), mp.mpf(theta), mp.mpf(x)
    if model == "amplitude":
        half = theta * (1 + x) / 2
        v = (half * mp.cos(phi), half * mp.sin(phi), mp.mpf(0))
    else:
        half = theta / 2
        v = (half * mp.cos(phi), half * mp.sin(phi), abs(half) * x)
    h = mp.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)
    c = mp.cos(h)
    s = mp.sin(h) / h if h != 0 else mp.mpf(1)
    # exp(-i v.sigma) = cos h I - i sin h / h (v.sigma)
    return mp.matrix(
        [
            [c - 1j * s * v[2], -1j * s * (v[0] - 1j * v[1])],
            [-1j * s * (v[0] + 1j * v[1]), c + 1j * s * v[2]],
        ]
    )


def execute(pulses, model, x):
    """Product of the pulses, first pulse rightmost.  ``pulses`` is ``[(phi, theta), ...]``."""
    u = mp.eye(2)
    for phi, theta in pulses:
        u = _rot(phi, theta, model, x) * u
    return u


def to_complex(m):
    return [[complex(m[i, j]) for j in range(2)] for i in range(2)]


def taylor(pulses, model, degree):
    """Coefficients ``C_0 .. C_degree`` of the executed product in the error parameter."""
    out = [[[0j, 0j], [0j, 0j]] for _ in range(degree + 1)]
    for i in range(2):
        for j in range(2):
            coeffs = mp.taylor(lambda x: execute(pulses, model, x)[i, j], 0, degree)
            for k, c in enumerate(coeffs):
                out[k][i][j] = complex(c)
    return out
