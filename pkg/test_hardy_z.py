"""
Tests for Z(t) evaluation, the zero scan and the gap statistics
"""

import math

import mpmath
import numpy as np
import pytest

import hardy_z
from hardy_z import (COUNT_REGIME, TWO_PI, ZeroTable, count_allowance, count_main_term, empirical_moment,
                     expected_zero_count, find_zeros, gap_histogram, gap_stats, normalize_gaps, scan_grid, theta,
                     z_error_bound, z_eval, z_values, zeros_frame)
from zeta_errors import (DomainError, InsufficientZerosError, OutOfRegimeError, PanelBudgetError,
                         UnsupportedParameterError)

FIRST_ZEROS = [14.134725142, 21.022039639, 25.010857580, 30.424876126, 32.935061588,
               37.586178159, 40.918719012, 43.327073281, 48.005150881, 49.773832478]


@pytest.fixture(scope="module")
def wide_scan():
    return find_zeros(10.0, 10000.0)


def test_theta_matches_mpmath():
    for t in (100.0, 1000.0, 12345.678):
        assert theta(t) == pytest.approx(float(mpmath.siegeltheta(t)), abs=1e-9)


def test_theta_derivative():
    t, step = 1000.0, 1e-3
    derivative = (theta(t + step) - theta(t - step)) / (2 * step)
    assert derivative == pytest.approx(0.5 * math.log(t / TWO_PI), rel=1e-6)


def test_theta_below_regime():
    with pytest.raises(OutOfRegimeError):
        theta(5.0)


def test_z_sign_changes_around_first_zeros():
    assert z_eval(14.0) * z_eval(14.3) < 0
    assert z_eval(18.0) * z_eval(24.5) < 0


def test_z_matches_mpmath():
    for t in (1000.0, 5000.0, 20000.5):
        assert z_eval(t) == pytest.approx(float(mpmath.siegelz(t)), abs=1e-4)
        assert abs(z_eval(t)) < 1e-4 + abs(complex(mpmath.zeta(complex(0.5, t))))


def test_z_values_total_on_random_heights():
    rng = np.random.default_rng(7)
    values = z_values(rng.uniform(10.0, 1e5, 1000))
    assert values.shape == (1000,)
    assert np.all(np.isfinite(values))


def test_z_below_regime():
    with pytest.raises(OutOfRegimeError):
        z_eval(9.99)
    with pytest.raises(OutOfRegimeError):
        z_values([20.0, 3.0])


def test_z_error_bound():
    assert z_error_bound(1000.0) == pytest.approx(0.053 * 1000.0 ** -1.25)


def test_count_main_term():
    assert count_main_term(COUNT_REGIME) == 0.0
    assert count_main_term(100.0) == pytest.approx(28.127, abs=1e-3)
    with pytest.raises(DomainError):
        count_main_term(10.0)
    assert expected_zero_count(10.0, 15.0) == 0.0
    assert expected_zero_count(10.0, 100.0) == pytest.approx(28.127, abs=1e-3)


def test_count_allowance():
    assert count_allowance(math.e) == pytest.approx(2 + 2 / math.pi)


def test_scan_grid_is_closed_and_increasing():
    grid = scan_grid(10.0, 100.0, 0.25)
    assert grid[0] == 10.0 and grid[-1] == 100.0
    assert np.all(np.diff(grid) > 0)


def test_find_zeros_first_ten():
    table = find_zeros(10.0, 50.0)
    assert table.count == 10
    np.testing.assert_allclose(table.as_array(), FIRST_ZEROS, atol=2e-2)
    assert table.warnings == ()


def test_find_zeros_up_to_100():
    assert find_zeros(10.0, 100.0).count == 29


def test_find_zeros_empty_range():
    table = find_zeros(50.0, 50.0)
    assert table.count == 0
    assert table.range == (50.0, 50.0)


def test_find_zeros_are_sign_changes():
    table = find_zeros(10.0, 100.0)
    t = table.as_array()
    delta = 10 * table.refine_tolerance
    assert np.all(z_values(t - delta) * z_values(t + delta) < 0)
    assert np.all(np.diff(t) > 0)


def test_find_zeros_parameter_errors():
    with pytest.raises(OutOfRegimeError):
        find_zeros(5.0, 50.0)
    with pytest.raises(DomainError):
        find_zeros(50.0, 20.0)
    with pytest.raises(DomainError):
        find_zeros(10.0, 50.0, grid_factor=0.8)
    with pytest.raises(DomainError):
        find_zeros(10.0, 50.0, refine_tol=0.0)


@pytest.mark.parametrize("t_min, t_max", [(10.0, math.nan), (math.nan, 50.0), (10.0, math.inf)])
def test_find_zeros_rejects_non_finite_bounds(t_min, t_max):
    with pytest.raises(DomainError):
        find_zeros(t_min, t_max)
    with pytest.raises(DomainError):
        scan_grid(t_min, t_max, 0.25)


def test_zero_count_discrepancy_is_reported(monkeypatch):
    monkeypatch.setattr(hardy_z, "expected_zero_count", lambda t_min, t_max: 20.0)
    monkeypatch.setattr(hardy_z, "_rescan", lambda interval, grid_factor, refine_tol: [])
    table = find_zeros(10.0, 50.0)
    assert table.count == 10
    assert len(table.warnings) == 1
    assert table.warnings[0].startswith("zero count 10 differs from the main term 20.000")


def test_find_zeros_is_deterministic():
    assert find_zeros(100.0, 400.0).ordinates == find_zeros(100.0, 400.0).ordinates


def test_parallel_scan_matches_serial():
    serial = find_zeros(100.0, 1500.0, chunk_points=128)
    parallel = find_zeros(100.0, 1500.0, chunk_points=128, threads=2)
    assert parallel.ordinates == serial.ordinates


def test_checkpoint_resume(tmp_path):
    path = tmp_path / "scan.csv"
    fresh = find_zeros(100.0, 1500.0, chunk_points=128, checkpoint=str(path))
    resumed = find_zeros(100.0, 1500.0, chunk_points=128, checkpoint=str(path))
    assert resumed.ordinates == fresh.ordinates

    # keep only the first chunk, as if the scan had been interrupted
    lines = path.read_text().splitlines()
    kept = lines[:2] + [line for line in lines[2:] if line.startswith("0,")]
    path.write_text("\n".join(kept) + "\n")
    partial = find_zeros(100.0, 1500.0, chunk_points=128, checkpoint=str(path))
    assert partial.ordinates == fresh.ordinates


def test_checkpoint_with_other_parameters_is_ignored(tmp_path):
    path = tmp_path / "scan.csv"
    find_zeros(100.0, 400.0, checkpoint=str(path))
    other = find_zeros(100.0, 400.0, grid_factor=0.2, checkpoint=str(path))
    assert other.ordinates == find_zeros(100.0, 400.0, grid_factor=0.2).ordinates


def test_wide_scan_count(wide_scan):
    assert wide_scan.count == pytest.approx(10142, abs=2)
    assert abs(wide_scan.count - wide_scan.expected_count) <= wide_scan.allowance
    assert wide_scan.warnings == ()


def test_wide_scan_keeps_close_pair(wide_scan):
    t = wide_scan.as_array()
    pair = t[(t > 7005.0) & (t < 7005.2)]
    assert pair.size == 2
    assert pair[1] - pair[0] < 0.05


def test_wide_scan_gap_statistics(wide_scan):
    upper = tuple(t for t in wide_scan.ordinates if t >= 1000.0)
    stats = gap_stats(ZeroTable(upper, 1000.0, 10000.0, wide_scan.refine_tolerance))
    assert 0.85 <= stats.mean_local_gap <= 1.15
    assert stats.max_local_gap > 1.5
    assert stats.max_gap > stats.max_local_gap
    assert sum(stats.histogram.values()) == len(stats.normalized_gaps)


def test_gap_stats_on_mean_spaced_ordinates():
    ordinates = [1000.0]
    for _ in range(50):
        ordinates.append(ordinates[-1] + TWO_PI / math.log(ordinates[-1]))
    table = ZeroTable(tuple(ordinates), 1000.0, ordinates[-1], 1e-9)
    stats = gap_stats(table)
    np.testing.assert_allclose(stats.normalized_gaps, 1.0, rtol=1e-9)
    assert stats.max_gap == pytest.approx(1.0, rel=1e-9)
    assert stats.histogram["[1.00,1.25)"] + stats.histogram["[0.75,1.00)"] == 50


def test_gap_stats_needs_two_zeros():
    with pytest.raises(InsufficientZerosError):
        gap_stats(ZeroTable((20.0,), 10.0, 30.0, 1e-9))


def test_normalize_gaps_scales_linearly():
    single = normalize_gaps([500.0], gaps=[0.7])
    double = normalize_gaps([500.0], gaps=[1.4])
    assert double[0] == pytest.approx(2 * single[0])
    assert single[0] == pytest.approx(0.7 * math.log(500.0) / TWO_PI)
    local = normalize_gaps([500.0], gaps=[0.7], local_density=True)
    assert local[0] == pytest.approx(0.7 * math.log(500.0 / TWO_PI) / TWO_PI)


def test_gap_histogram_overflow_bin():
    histogram = gap_histogram(np.array([0.1, 0.3, 5.0]))
    assert histogram["[0.00,0.25)"] == 1
    assert histogram["[0.25,0.50)"] == 1
    assert histogram[">=4.00"] == 1


def test_zeros_frame():
    frame = zeros_frame(find_zeros(10.0, 50.0))
    assert list(frame.columns) == ["index", "t", "gap", "r"]
    assert len(frame) == 10
    assert math.isnan(frame["gap"].iloc[-1])
    assert frame["gap"].iloc[0] == pytest.approx(FIRST_ZEROS[1] - FIRST_ZEROS[0], abs=4e-2)


def test_empirical_second_moment():
    moment = empirical_moment(1, 0, 5000.0)
    assert 0.6 <= moment.ratio <= 1.4
    assert moment.predicted == pytest.approx(5000.0 * math.log(5000.0), rel=1e-9)


def test_empirical_moment_is_additive():
    first = empirical_moment(1, 0, 1010.0, panels=20000, t_lower=10.0)
    second = empirical_moment(1, 0, 2010.0, panels=20000, t_lower=1010.0)
    whole = empirical_moment(1, 0, 2010.0, panels=40000, t_lower=10.0)
    assert first.integral_value + second.integral_value == pytest.approx(whole.integral_value, rel=1e-8)


def test_empirical_mixed_moment():
    moment = empirical_moment(2, 1, 2000.0, panels=40000)
    assert moment.integral_value > 0
    assert math.isfinite(moment.ratio)
    assert moment.to_dict()["h"] == 1


def test_empirical_moment_odd_panels_rounded_up():
    assert empirical_moment(1, 0, 100.0, panels=101).panels == 102


def test_empirical_moment_errors():
    with pytest.raises(PanelBudgetError):
        empirical_moment(1, 0, 100.0, panels=11, max_panels=10)
    with pytest.raises(UnsupportedParameterError):
        empirical_moment(4, 0, 100.0)
    with pytest.raises(DomainError):
        empirical_moment(2, 3, 100.0)
    with pytest.raises(OutOfRegimeError):
        empirical_moment(1, 0, 100.0, t_lower=5.0)
    with pytest.raises(DomainError):
        empirical_moment(1, 0, 10.0)
    for T in (math.nan, math.inf):
        with pytest.raises(DomainError):
            empirical_moment(1, 0, T)
