"""
Tests for the inequality property checks
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ineq_verify import (TrialFunction, bp_constant, is_violation, opial_one_sided_margin, opial_one_sided_sides,
                         opial_yang_sides, random_trial, run_property_suite, suite_by_inequality,
                         transformed_interval_check, verify_opial_yang, verify_wirtinger_ap, verify_wirtinger_bp,
                         wirtinger_ap_sides, wirtinger_bp_sides, yang_exponents)
from wirtinger_constants import i_integral
from zeta_errors import DomainError, UnsupportedParameterError

SINE = TrialFunction((1.0,))
ZERO = TrialFunction((0.0, 0.0, 0.0))


def test_trial_function_values():
    f = TrialFunction((1.0, 0.5))
    assert f.value(math.pi / 2)[0] == pytest.approx(1.0)
    assert f.derivative(0.0)[0] == pytest.approx(2.0)
    assert f.value(np.array([0.0, math.pi])) == pytest.approx([0.0, 0.0], abs=1e-15)
    assert f.scaled(2.0).coefficients == (2.0, 1.0)


def test_random_trial_is_reproducible():
    assert random_trial(11) == random_trial(11)
    assert random_trial(11) != random_trial(12)
    assert random_trial(11, n_terms=3).n_terms == 3
    assert all(abs(c) <= 2.0 for c in random_trial(5, amplitude=2.0).coefficients)


def test_random_trial_scales_with_amplitude():
    base = random_trial(3)
    assert random_trial(3, amplitude=4.0).coefficients == pytest.approx([4.0 * c for c in base.coefficients])


def test_random_trial_parameter_errors():
    with pytest.raises(UnsupportedParameterError):
        random_trial(1, n_terms=0)
    with pytest.raises(UnsupportedParameterError):
        random_trial(1, n_terms=65)
    with pytest.raises(UnsupportedParameterError):
        random_trial(1, amplitude=0.0)


def test_bp_sine_k2():
    lhs, rhs = wirtinger_bp_sides(SINE, 2)
    assert lhs == pytest.approx(3 * math.pi / 8, rel=1e-10)
    assert rhs == pytest.approx(3 * math.pi / 8 / (math.pi ** 4 * i_integral(2).value), rel=1e-10)
    assert verify_wirtinger_bp(SINE, 2) > 0


def test_bp_constant_k1():
    assert bp_constant(1) == pytest.approx(6 / math.pi ** 2, rel=1e-10)


def test_yang_sine_m2_n2():
    lhs, rhs = opial_yang_sides(SINE, 2, 2)
    assert lhs == pytest.approx(math.pi / 8, rel=1e-10)
    assert rhs == pytest.approx(3 * math.pi ** 3 / 64, rel=1e-10)
    assert verify_opial_yang(SINE, 2, 2) > 0


def test_ap_sine_k1():
    lhs, rhs = wirtinger_ap_sides(SINE, 1)
    assert lhs == pytest.approx(math.pi / 2, rel=1e-10)
    assert verify_wirtinger_ap(SINE, 1) == pytest.approx(math.pi / 2 - 16 / math.pi ** 3 * math.pi / 2, rel=1e-9)


def test_zero_function_has_zero_margins():
    for k in (1, 2, 3):
        assert verify_wirtinger_bp(ZERO, k) == 0.0
        assert verify_wirtinger_ap(ZERO, k) == 0.0
        assert verify_opial_yang(ZERO, *yang_exponents(k)) == 0.0


@pytest.mark.parametrize("k", [1, 2, 3])
def test_margins_are_homogeneous(k):
    f = random_trial(99, n_terms=5)
    doubled = f.scaled(2.0)
    assert verify_wirtinger_bp(doubled, k) == pytest.approx(2 ** (2 * k) * verify_wirtinger_bp(f, k), rel=1e-9)
    assert verify_wirtinger_ap(doubled, k) == pytest.approx(2 ** (2 * k) * verify_wirtinger_ap(f, k), rel=1e-9)
    m, n = yang_exponents(k)
    assert verify_opial_yang(doubled, m, n) == pytest.approx(2 ** (m + n) * verify_opial_yang(f, m, n), rel=1e-9)


def test_verify_rejects_unsupported_k():
    with pytest.raises(UnsupportedParameterError):
        verify_wirtinger_bp(SINE, 8)
    with pytest.raises(UnsupportedParameterError):
        verify_wirtinger_ap(SINE, 0)


def test_yang_exponents():
    assert yang_exponents(1) == (2, 2)
    assert yang_exponents(3) == (2, 6)


def test_transformed_interval_on_base_interval():
    f = random_trial(21, n_terms=4)
    assert transformed_interval_check(f, 0.0, math.pi, 2) == pytest.approx(verify_wirtinger_bp(f, 2), rel=1e-9)


def test_transformed_interval_scales_with_length():
    f = random_trial(21, n_terms=4)
    base = verify_wirtinger_bp(f, 2)
    assert transformed_interval_check(f, 5.0, 5.0 + math.pi, 2) == pytest.approx(base, rel=1e-8)
    assert transformed_interval_check(f, 0.0, 2 * math.pi, 2) == pytest.approx(2 * base, rel=1e-8)
    with pytest.raises(DomainError):
        transformed_interval_check(f, 1.0, 1.0, 2)


def test_transformed_interval_half_frequency_sine():
    # sin on [0, pi] pulled back to sin(s / 2) on [0, 2 pi]
    for k in (1, 2, 3):
        assert transformed_interval_check(SINE, 0.0, 2 * math.pi, k) > 0


@settings(max_examples=100, deadline=None)
@given(st.floats(-50.0, 50.0), st.floats(0.1, 20.0))
def test_transformed_interval_preserves_sign(a, width):
    f = TrialFunction((1.0, -0.4, 0.2))
    assert transformed_interval_check(f, a, a + width, 2) > 0


def test_opial_one_sided_is_sharp_for_linear_functions():
    # both sides equal 1/2 for x(t) = t on [0, 1]
    lhs, rhs = opial_one_sided_sides(np.asarray, np.ones_like, 0.0, 1.0, 1, 1)
    assert lhs == pytest.approx(0.5, rel=1e-12)
    assert lhs / rhs >= 0.999
    assert opial_one_sided_margin(np.asarray, np.ones_like, 0.0, 1.0, 1, 1) == pytest.approx(0.0, abs=1e-12)


def test_opial_one_sided_holds_for_quadratics():
    margin = opial_one_sided_margin(lambda t: t * t, lambda t: 2.0 * t, 0.0, 1.0, 2, 4)
    assert margin > 0
    with pytest.raises(DomainError):
        opial_one_sided_margin(lambda t: t, np.ones_like, 1.0, 0.0, 2, 2)


def test_is_violation():
    assert not is_violation(1.0, 1.0, 0.0)
    assert not is_violation(1.0, 1.0, -1e-12)
    assert is_violation(1.0, 1.0, -1e-3)
    assert not is_violation(1e6, 1e6, -1e-3)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_trials_satisfy_all_inequalities(seed):
    f = random_trial(seed)
    for k in (1, 2, 3):
        assert verify_wirtinger_bp(f, k) >= -1e-8 * wirtinger_bp_sides(f, k)[0]
        assert verify_wirtinger_ap(f, k) >= -1e-8 * wirtinger_ap_sides(f, k)[0]
        m, n = yang_exponents(k)
        assert verify_opial_yang(f, m, n) >= -1e-8 * opial_yang_sides(f, m, n)[1]


def test_property_suite_small():
    summaries = run_property_suite(20, seed=5, ks=(1, 2))
    assert len(summaries) == 6
    assert all(summary.violations == 0 for summary in summaries)
    assert all(summary.min_margin > 0 for summary in summaries)
    collapsed = suite_by_inequality(summaries)
    assert set(collapsed) == {"bp", "yang", "ap"}
    assert collapsed["bp"]["trials"] == 40
    assert collapsed["ap"]["ks"] == [1, 2]


def test_property_suite_is_independent_of_workers():
    serial = run_property_suite(10, seed=8, inequalities=("bp", "yang"), ks=(2,))
    parallel = run_property_suite(10, seed=8, inequalities=("bp", "yang"), ks=(2,), threads=2)
    assert serial == parallel


def test_property_suite_thousand_trials():
    summaries = run_property_suite(1000, seed=20240101, ks=(1, 2, 3), threads=2)
    assert sum(summary.violations for summary in summaries) == 0


def test_property_suite_argument_errors():
    with pytest.raises(UnsupportedParameterError):
        run_property_suite(0, seed=1)
    with pytest.raises(ValueError):
        run_property_suite(5, seed=1, inequalities=("hardy",))
