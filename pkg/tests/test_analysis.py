import math

import numpy as np
import pytest

from arbpulse.analysis import (
    FitError,
    count_two_pi,
    evaluate,
    fit_order,
    log_grid,
    loglog_slope,
    scaling_study,
    sweep,
)
from arbpulse.detuning import corpse, make_detuning_corrected
from arbpulse.sk import make_sk
from arbpulse.su2 import AMPLITUDE, DETUNING
from arbpulse.ts import make_broadband, make_narrowband, make_passband

PI = math.pi


def test_evaluate_p0_closed_form():
    p0 = make_passband(0, PI)
    assert evaluate(p0, AMPLITUDE, 0.1) == pytest.approx(2 * math.sqrt(2) * math.sin(0.025 * PI), rel=1e-13)
    assert evaluate(p0, AMPLITUDE, 0.1, "infidelity") == pytest.approx(1 - math.cos(0.05 * PI), rel=1e-10)
    # |<0| R(pi)^dag R(1.1 pi) |0>|^2 = cos^2(0.05 pi)
    assert evaluate(p0, AMPLITUDE, 0.1, "signal") == pytest.approx(math.cos(0.05 * PI) ** 2, rel=1e-13)


@pytest.mark.parametrize("metric, value", [("trace", 0.0), ("infidelity", 0.0), ("signal", 1.0)])
def test_evaluate_at_zero_error(metric, value):
    for seq in (make_broadband(1, PI / 2), make_sk(3, PI / 2), corpse(PI / 2)):
        assert evaluate(seq, None, 0.0, metric) == pytest.approx(value, abs=1e-12)


def test_evaluate_unknown_metric():
    with pytest.raises(ValueError):
        evaluate(make_passband(0, PI), AMPLITUDE, 0.1, "purity")


def test_broadband_suppression():
    assert evaluate(make_broadband(1, PI), AMPLITUDE, 0.1) < evaluate(make_passband(0, PI), AMPLITUDE, 0.1)


def test_monotone_improvement():
    e = [evaluate(make(j, PI), AMPLITUDE, 0.05) for make, j in ((make_broadband, 2), (make_broadband, 1), (make_passband, 0))]
    assert e[0] < e[1] < e[2]


def test_sweep_shape_and_zero_grid():
    r = sweep([make_passband(0, PI)], AMPLITUDE, [0.0])
    assert r.errors.shape == (1, 1) and r.errors[0, 0] == pytest.approx(0.0, abs=1e-15)
    seqs = [make_passband(1, PI), make_broadband(1, PI)]
    r = sweep(seqs, AMPLITUDE, log_grid(1e-3, 0.5, 61))
    assert r.errors.shape == (61, 2) and r.labels == ("P2", "B2")
    assert np.all(r.errors >= 0)


def test_sweep_rejects_bad_grids():
    with pytest.raises(ValueError):
        sweep([make_passband(0, PI)], AMPLITUDE, [])
    with pytest.raises(ValueError):
        sweep([make_passband(0, PI)], AMPLITUDE, [0.2, 0.1])


def test_sweep_parallel_identical():
    seqs = [make_passband(1, PI), make_broadband(1, PI), make_narrowband(1, PI)]
    grid = log_grid(1e-3, 0.5, 25)
    a = sweep(seqs, AMPLITUDE, grid, jobs=1)
    b = sweep(seqs, AMPLITUDE, grid, jobs=3)
    assert a.errors.tobytes() == b.errors.tobytes()


def test_sweep_slopes():
    p0 = sweep([make_passband(0, PI)], AMPLITUDE, log_grid(1e-3, 1e-1, 30))
    assert loglog_slope(p0.epsilons, p0.errors[:, 0]) == pytest.approx(1.0, abs=0.05)
    b2 = sweep([make_broadband(1, PI)], AMPLITUDE, log_grid(1e-2, 1e-1, 30))
    assert loglog_slope(b2.epsilons, b2.errors[:, 0]) == pytest.approx(3.0, abs=0.15)


@pytest.mark.parametrize(
    "seq, slope",
    [
        (make_passband(0, PI), 1.0),
        (make_broadband(2, PI), 5.0),
        (make_sk(2, PI / 2), 3.0),
    ],
)
def test_fit_order(seq, slope):
    assert fit_order(seq) == pytest.approx(slope, abs=0.15)


def test_infidelity_doubles_the_order():
    b2 = make_broadband(1, PI)
    assert fit_order(b2, metric="infidelity") == pytest.approx(6.0, abs=0.3)
    assert fit_order(b2) == pytest.approx(3.0, abs=0.15)


def test_fit_detuning_sequence():
    assert fit_order(make_detuning_corrected(2, PI / 2), DETUNING) == pytest.approx(3.0, abs=0.15)
    # CORPSE's delta^2 term is tiny at pi/2 (|C_2| ~ 0.013 vs |C_3| ~ 2.9): the window sees a blend
    assert 2.0 < fit_order(corpse(PI / 2), DETUNING) < 3.0


def test_fit_noise_floor():
    x = np.logspace(-3, -1, 10)
    with pytest.raises(FitError, match="noise floor"):
        loglog_slope(x, np.full(10, 1e-15))


def test_fit_window_and_points():
    with pytest.raises(ValueError):
        fit_order(make_passband(0, PI), window=(1e-4, 1e-2))
    with pytest.raises(FitError):
        fit_order(make_passband(0, PI), points=5)


def test_count_two_pi():
    assert count_two_pi(make_broadband(1, PI)) == 2
    assert count_two_pi(make_passband(1, PI)) == 4
    assert count_two_pi(make_passband(0, PI)) == 0


def test_scaling_study_small():
    r = scaling_study("SK", 6)
    assert r.orders == (2, 3, 4, 5, 6)
    assert list(r.pulse_counts) == sorted(set(r.pulse_counts))
    assert r.fit_orders == (4, 6)
    assert r.fitted_exponent > 2


def test_scaling_study_arguments():
    with pytest.raises(ValueError):
        scaling_study("P", 6)
    with pytest.raises(ValueError):
        scaling_study("SK", 17)
    with pytest.raises(ValueError):
        scaling_study("SB", 4)
