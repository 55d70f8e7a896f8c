"""Tests for the detuning scan, window detection, and gain detection."""

from dataclasses import replace

import numpy as np
import pytest

from diamondsim import (
    CSV_COLUMNS,
    OBSERVABLE_KEYS,
    SweepError,
    SweepResult,
    SweepSpec,
    detect_gain,
    detect_windows,
    extract_observable,
    preset,
    run_sweep,
)
from diamondsim import Scenario


def synthetic_result(delta, im_cd):
    """SweepResult whose probe absorption column is the given array."""
    delta = np.asarray(delta, dtype=float)
    states = np.zeros((len(delta), 4, 4), dtype=complex)
    states[:, 2, 3] = 1j * np.asarray(im_cd, dtype=float)
    return SweepResult(delta=delta, states=states)


def test_spec_validation():
    base = Scenario()
    with pytest.raises(ValueError):
        SweepSpec(base=base, delta_min=1.0, delta_max=1.0)
    with pytest.raises(ValueError):
        SweepSpec(base=base, delta_min=2.0, delta_max=-2.0)
    with pytest.raises(ValueError):
        SweepSpec(base=base, points=1)


def test_run_sweep_grid_and_shapes():
    s, _ = preset("fig5")
    spec = SweepSpec(base=s, delta_min=-5.0, delta_max=5.0, points=11)
    result = run_sweep(spec)
    assert np.array_equal(result.delta, np.linspace(-5.0, 5.0, 11))
    assert result.states.shape == (11, 4, 4)
    sums = result.states.trace(axis1=1, axis2=2).real
    assert np.max(np.abs(sums - 1.0)) < 1e-9


def test_run_sweep_deterministic():
    s, _ = preset("fig6b")
    spec = SweepSpec(base=s, delta_min=-2.0, delta_max=2.0, points=7)
    first = run_sweep(spec)
    second = run_sweep(spec)
    assert np.array_equal(first.delta, second.delta)
    assert np.array_equal(first.states, second.states)


def test_run_sweep_reports_failing_detuning():
    dead = Scenario(omega_a1=1.0, gamma1=0.0, gamma2=0.0, gamma3=0.0, gamma4=0.0)
    spec = SweepSpec(base=dead, delta_min=-1.0, delta_max=1.0, points=3)
    with pytest.raises(SweepError, match="probe detuning"):
        run_sweep(spec)


def test_probe_target_pins_the_scan_flat():
    # completing the probe detuning itself overwrites the swept value
    s, _ = preset("fig5")
    spec = SweepSpec(base=replace(s, closure_target="c2"), delta_min=-3.0, delta_max=3.0, points=5)
    result = run_sweep(spec)
    for k in range(1, 5):
        assert np.array_equal(result.states[k], result.states[0])


def test_column_access():
    rng = np.random.default_rng(8)
    states = rng.standard_normal((5, 4, 4)) + 1j * rng.standard_normal((5, 4, 4))
    result = SweepResult(delta=np.arange(5.0), states=states)
    assert np.array_equal(result.column("delta"), result.delta)
    assert np.array_equal(result.column("rho_bb"), states[:, 1, 1].real)
    assert np.array_equal(result.column("im_cd"), states[:, 2, 3].imag)
    assert np.array_equal(result.column("re_db"), states[:, 3, 1].real)
    with pytest.raises(ValueError, match="unknown column"):
        result.column("im_xy")


def test_csv_columns_cover_all_entries():
    assert CSV_COLUMNS[0] == "delta"
    assert len(CSV_COLUMNS) == 19  # grid + 4 populations + 7 complex coherences


def test_extract_observable():
    rng = np.random.default_rng(4)
    raw = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    rho = raw @ raw.conj().T
    rho = rho / np.trace(rho).real
    assert extract_observable(rho, "pop_b") == rho[1, 1].real
    assert extract_observable(rho, "cd") == complex(rho[2, 3])
    assert extract_observable(rho, "ab") == complex(rho[0, 1])
    assert set(OBSERVABLE_KEYS) >= {"pop_a", "cd", "bd"}
    with pytest.raises(ValueError, match="valid keys"):
        extract_observable(rho, "qq")


def test_window_on_a_linear_dip():
    delta = np.linspace(-5.0, 5.0, 101)
    y = np.minimum(1.0, 0.02 + 0.7 * np.abs(delta))
    windows = detect_windows(synthetic_result(delta, y), "im_cd")
    assert len(windows) == 1
    w = windows[0]
    assert w.center == 0.0
    assert w.depth == 0.02
    # crossings of threshold 0.1 sit at |delta| = 0.08 / 0.7, interpolation exact on a line
    assert w.half_width == pytest.approx(0.08 / 0.7, rel=1e-9)


def test_window_threshold_fraction_parameter():
    delta = np.linspace(-5.0, 5.0, 101)
    y = np.minimum(1.0, 0.02 + 0.7 * np.abs(delta))
    narrow = detect_windows(synthetic_result(delta, y), "im_cd", threshold_fraction=0.1)
    wide = detect_windows(synthetic_result(delta, y), "im_cd", threshold_fraction=0.5)
    assert len(wide) == 1
    assert wide[0].half_width > narrow[0].half_width


def test_edge_tail_is_not_a_window():
    delta = np.linspace(-5.0, 5.0, 101)
    y = np.minimum(1.0, 0.02 + 0.7 * (delta + 5.0))
    assert detect_windows(synthetic_result(delta, y), "im_cd") == []


def test_single_sample_gap_merges():
    delta = np.arange(31.0)
    y = np.ones(31)
    y[10:13] = (0.05, 0.02, 0.05)
    y[13] = 0.5
    y[14:17] = (0.05, 0.02, 0.05)
    windows = detect_windows(synthetic_result(delta, y), "im_cd")
    assert len(windows) == 1
    assert windows[0].center == 11.0


def test_two_sample_gap_stays_split():
    delta = np.arange(31.0)
    y = np.ones(31)
    y[10:13] = (0.05, 0.02, 0.05)
    y[13:15] = 0.5
    y[15:18] = (0.05, 0.02, 0.05)
    windows = detect_windows(synthetic_result(delta, y), "im_cd")
    assert [w.center for w in windows] == [11.0, 16.0]


def test_window_validation():
    delta = np.linspace(-1.0, 1.0, 11)
    result = synthetic_result(delta, np.ones(11))
    with pytest.raises(ValueError, match="im_"):
        detect_windows(result, "re_cd")
    short = synthetic_result([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(ValueError, match="grid points"):
        detect_windows(short, "im_cd")


def test_gain_intervals():
    delta = np.arange(5.0)
    result = synthetic_result(delta, [0.1, -0.2, -0.3, 0.0, 0.5])
    assert detect_gain(result, "im_cd") == [(1.0, 2.0)]


def test_gain_ignores_rounding_noise():
    delta = np.arange(3.0)
    result = synthetic_result(delta, [0.1, -1e-10, 0.1])
    assert detect_gain(result, "im_cd") == []
