"""Arbitrarily accurate composite pulse sequences for single-qubit rotations.

Trotter-Suzuki (P, B, N) and Solovay-Kitaev (SK, SB) constructions that cancel
systematic amplitude error to any order, a detuning ladder built on CORPSE,
and an exact error-series engine that certifies each sequence's order.
"""

from .analysis import ScalingResult, SweepResult, count_two_pi, evaluate, fit_order, scaling_study, sweep
from .build import build_sequence
from .detuning import corpse, detuning_u1z, make_detuning_corrected
from .sequence import ConstructionError, PulseSequence
from .series import (
    DefectTerm,
    MatrixSeries,
    OrderReport,
    leading_defect,
    pulse_series,
    sequence_series,
    series_multiply,
    verify_order,
)
from .sk import AxisBlock, axis_shift, make_sb, make_sk, sk_step, solve_conjugator, u1x, unx
from .su2 import (
    AMPLITUDE,
    DETUNING,
    Pulse,
    distance,
    error_model,
    execute_sequence,
    fidelity,
    ideal_rotation,
    imperfect_rotation,
    pauli_decompose,
)
from .ts import make_broadband, make_narrowband, make_passband, s1, sn, wimperis

__version__ = "0.1.0"
