import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from arbpulse.series import (
    MAX_DEGREE,
    DefectError,
    MatrixSeries,
    SeriesError,
    defect_at,
    leading_defect,
    pulse_series,
    sequence_series,
    series_multiply,
    verify_order,
)
from arbpulse.su2 import AMPLITUDE, DETUNING, I2, X, Z, Pulse, execute_sequence, ideal_rotation, ideal_sequence

PI = math.pi


def _pairs(pulses):
    return [(p.phi, p.theta) for p in pulses]


@pytest.mark.parametrize("model", [AMPLITUDE, DETUNING])
@pytest.mark.parametrize(
    "pulses",
    [
        [Pulse(0.0, PI)],
        [Pulse(0.3, -1.1)],
        [Pulse(0.0, PI), Pulse(1.82, PI), Pulse(5.47, 2 * PI), Pulse(1.82, PI)],
        [Pulse(2.0, 7.0), Pulse(-0.4, 0.2), Pulse(1.0, -3.0)],
    ],
)
def test_coefficients_match_high_precision_oracle(pulses, model):
    ref = oracle.taylor(_pairs(pulses), model.name, 3)
    s = sequence_series(pulses, model, 3)
    for k in range(4):
        want = np.array(ref[k])
        scale = max(1e-12, np.abs(want).max())
        assert np.abs(s[k] - want).max() <= 1e-6 * scale + 1e-14


def test_amplitude_pulse_series_closed_form():
    # C_k = R (-i theta sigma / 2)^k / k!
    s = pulse_series(Pulse(0.0, PI), AMPLITUDE, 3)
    np.testing.assert_allclose(s[0], -1j * X, atol=1e-15)
    np.testing.assert_allclose(s[1], -1j * X @ (-1j * PI / 2 * X), atol=1e-15)
    np.testing.assert_allclose(s[2], -1j * X @ (-1j * PI / 2 * X) @ (-1j * PI / 2 * X) / 2, atol=1e-15)


@pytest.mark.parametrize("x", [0.0, 0.01, -0.03])
def test_series_evaluates_to_execution_for_small_error(x):
    pulses = [Pulse(0.2, 1.3), Pulse(-1.0, 2.5)]
    for model in (AMPLITUDE, DETUNING):
        s = sequence_series(pulses, model, 20)
        np.testing.assert_allclose(s.evaluate(x), execute_sequence(pulses, model, x), atol=1e-13)


def test_multiply_identity_and_associativity():
    a = pulse_series(Pulse(0.1, 1.0), AMPLITUDE, 5)
    b = pulse_series(Pulse(0.7, -2.0), DETUNING, 5)
    c = pulse_series(Pulse(-1.2, 0.4), AMPLITUDE, 5)
    one = MatrixSeries.identity(5)
    np.testing.assert_allclose((a @ one).coeffs, a.coeffs, atol=0)
    left = series_multiply(series_multiply(a, b), c)
    right = series_multiply(a, series_multiply(b, c))
    np.testing.assert_allclose(left.coeffs.astype(complex), right.coeffs.astype(complex), atol=1e-14)


def test_multiply_rejects_degree_mismatch():
    with pytest.raises(SeriesError):
        series_multiply(MatrixSeries.identity(2), MatrixSeries.identity(3))


def test_degree_cap():
    with pytest.raises(SeriesError):
        pulse_series(Pulse(0, 1), AMPLITUDE, MAX_DEGREE + 1)
    with pytest.raises(SeriesError):
        sequence_series([], AMPLITUDE, 2)


def test_series_is_read_only():
    s = pulse_series(Pulse(0, 1), AMPLITUDE, 2)
    with pytest.raises(ValueError):
        s.coeffs[0, 0, 0] = 5


@given(
    st.lists(
        st.tuples(st.floats(-6, 6), st.floats(-12, 12)),
        min_size=1,
        max_size=6,
    ),
    st.sampled_from([AMPLITUDE, DETUNING]),
)
@settings(max_examples=60, deadline=None)
def test_unitarity_holds_order_by_order(pairs, model):
    s = sequence_series([Pulse(a, b) for a, b in pairs], model, 6)
    assert s.unitarity_residual() < 1e-11 * max(1.0, float(s.norms().max()) ** 2)


def test_zero_angle_pulse_series_is_identity():
    s = pulse_series(Pulse(0.4, 0.0), DETUNING, 4)
    np.testing.assert_allclose(s.coeffs.astype(complex), MatrixSeries.identity(4).coeffs.astype(complex))


def test_leading_defect_of_a_single_pulse():
    # M_0(theta) = R exp(-i theta eps X/2): defect A_1 = theta X
    theta = 1.3
    s = sequence_series([Pulse(0, theta)], AMPLITUDE, 3)
    d = leading_defect(s, ideal_rotation(Pulse(0, theta)))
    assert d.order == 1
    np.testing.assert_allclose(d.a_matrix, theta * X, atol=1e-14)
    assert d.norm == pytest.approx(theta)
    # left-multiplicative form: C_1 = -i A/2 C_0
    np.testing.assert_allclose(s[1], -0.5j * d.a_matrix @ s[0], atol=1e-14)


def test_leading_defect_none_when_everything_cancels():
    p = Pulse(0.5, 1.0)
    s = sequence_series([p, p.inverse()], AMPLITUDE, 4)
    assert leading_defect(s, I2) is None


def test_leading_defect_rejects_wrong_target():
    s = sequence_series([Pulse(0, 1.0)], AMPLITUDE, 2)
    with pytest.raises(DefectError):
        leading_defect(s, ideal_rotation(Pulse(0, 2.0)))


def test_defect_is_hermitian_traceless():
    pulses = [Pulse(0.3, 2.0), Pulse(1.4, 0.7), Pulse(-2.0, 1.1)]
    s = sequence_series(pulses, DETUNING, 3)
    d = defect_at(s, 1)
    np.testing.assert_allclose(d.a_matrix, d.a_matrix.conj().T, atol=1e-14)
    assert abs(np.trace(d.a_matrix)) < 1e-14
    # the detuning defect of (0, theta) is |theta| ... direction mixes X and Z in general
    assert d.norm > 0


def test_verify_order_statuses():
    theta = PI / 2
    target = ideal_rotation(Pulse(0, theta))
    single = [Pulse(0, theta)]
    assert verify_order(single, AMPLITUDE, target, 0).status == "ok"
    rep = verify_order(single, AMPLITUDE, target, 1)
    assert not rep.passed and rep.status == "fails"
    # a sequence that cancels error entirely exceeds any claim
    exact = [Pulse(0.5, 1.0), Pulse(0.5, -1.0)]
    rep = verify_order(exact, AMPLITUDE, I2, 2)
    assert rep.passed and rep.status == "exceeds claimed order"
    assert verify_order(single, AMPLITUDE, ideal_sequence([Pulse(0, 1.0)]), 0).status == "fails"
    assert rep.lines()[0] == "claimed order 2: exceeds claimed order"


@pytest.mark.parametrize("theta", [PI / 2, PI, 2 * PI, 3.0])
def test_detuning_first_order_coefficient_of_a_pulse(theta):
    # h = |theta|/2 sqrt(1 + delta^2) is flat at delta = 0, so
    # C_1 = -i sin(theta/2)/(theta/2) * (|theta|/2) Z = -i sin(|theta|/2) Z
    s = pulse_series(Pulse(0.0, theta), DETUNING, 1)
    np.testing.assert_allclose(s[1], -1j * math.sin(abs(theta) / 2) * Z, atol=1e-15)
