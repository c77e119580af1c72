import math

import numpy as np
import pytest

import oracle
from arbpulse.detuning import (
    BaseSequenceError,
    corpse,
    delta_block,
    detuning_u1z,
    make_detuning_corrected,
)
from arbpulse.sequence import ConstructionError
from arbpulse.series import sequence_series
from arbpulse.su2 import DETUNING, X, Y, Z, distance

PI = math.pi
THETAS = [PI / 3, PI / 2, PI]


@pytest.mark.parametrize("theta", THETAS)
def test_corpse_cancels_first_order(theta):
    seq = corpse(theta)
    s = sequence_series(seq.pulses, DETUNING, 2)
    assert np.linalg.norm(s[1]) < 1e-9
    assert np.linalg.norm(s[2]) > 1e-3
    assert distance(seq.execute(0.0), seq.target_unitary()) < 1e-12


def test_corpse_angles():
    k = math.asin(math.sin(PI / 4) / 2)
    seq = corpse(PI / 2)
    assert [p.theta for p in seq.pulses] == pytest.approx([2 * PI + PI / 4 - k, 2 * PI - 2 * k, PI / 4 - k])
    assert [p.phi for p in seq.pulses] == [0.0, PI, 0.0]


def test_corpse_oracle_gate(monkeypatch):
    import arbpulse.detuning as det

    monkeypatch.setattr(det.math, "asin", lambda x: 0.1)
    with pytest.raises(BaseSequenceError, match="base sequence not first-order compensating"):
        det.corpse(PI / 2)


@pytest.mark.parametrize("theta", [PI / 3, PI / 2, PI, 0.01])
def test_u1z_first_order_term(theta):
    b = detuning_u1z(theta)
    ref = oracle.taylor([(p.phi, p.theta) for p in b.pulses], "detuning", 1)
    # exact weight is 4 sin(theta/2): C_1 = -2i sin(theta/2) Z C_0
    np.testing.assert_allclose(np.array(ref[1]), -2j * math.sin(theta / 2) * Z @ np.array(ref[0]), atol=1e-14)
    assert b.coefficient == pytest.approx(4 * math.sin(theta / 2))


def test_u1z_approaches_two_theta_for_small_angles():
    for theta in (1e-2, 1e-3):
        assert detuning_u1z(theta).coefficient == pytest.approx(2 * theta, rel=theta**2)


def test_u1z_rejects_zero():
    with pytest.raises(ValueError):
        detuning_u1z(0.0)


@pytest.mark.parametrize(
    "axis, level, c",
    [("X", 1, 0.7), ("Y", 1, -3.0), ("X", 2, 1.5), ("Y", 2, -0.4), ("Z", 2, 0.8), ("X", 3, 0.7), ("Z", 3, -0.9)],
)
def test_delta_blocks(axis, level, c):
    b = delta_block(axis, level, c)
    s = sequence_series(b.pulses, DETUNING, level)
    assert max(s.norms()[1:level], default=0.0) < 1e-9
    pauli = {"X": X, "Y": Y, "Z": Z}[axis]
    np.testing.assert_allclose(s[level] @ s[0].conj().T, -0.5j * c * pauli, atol=1e-9)


def test_inplane_inverse_by_phase_flip():
    b = delta_block("X", 1, 2.0)
    s = sequence_series(b.pulses + b.inverse, DETUNING, 4)
    assert max(s.norms()[1:]) < 1e-9


def test_level_one_z_block_refused():
    with pytest.raises(ValueError):
        delta_block("Z", 1, 1.0)


@pytest.mark.parametrize("theta", THETAS)
@pytest.mark.parametrize("n", [2, 3])
def test_detuning_ladder(n, theta):
    seq = make_detuning_corrected(n, theta)
    rep = seq.verify(scaled=True)
    assert rep.passed and rep.status == "ok"
    assert seq.verify().passed
    assert distance(seq.execute(0.0), seq.target_unitary()) < 1e-12


def test_detuning_ladder_suppresses_error():
    base, seq = corpse(PI / 2), make_detuning_corrected(3, PI / 2)
    d = 1e-2
    assert distance(seq.execute(d), seq.target_unitary()) < distance(base.execute(d), base.target_unitary())


def test_detuning_ladder_limit_is_loud():
    with pytest.raises(ConstructionError, match="inverts only to order"):
        make_detuning_corrected(4, PI / 2)


def test_detuning_ladder_needs_order_two():
    with pytest.raises(ValueError):
        make_detuning_corrected(1, PI / 2)
