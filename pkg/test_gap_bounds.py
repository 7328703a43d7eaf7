"""
Tests for the gap lower bounds
"""

import math

import pytest

from gap_bounds import (PUBLISHED_AP, PUBLISHED_BP, PUBLISHED_OPIAL, WIRTINGER_K_RANGE, Hypothesis, Method, all_bounds,
                        ap_table, best_bounds, bounds_frame, bp_table, lambda_ap, lambda_bp, lambda_opial,
                        opial_family, opial_table, reference_bounds, reference_value, steuding_reference,
                        unconditional_base, unconditional_bound)
from rational_core import ExactRational
from zeta_errors import DomainError, UnsupportedParameterError


def test_unconditional_base_is_exact():
    assert unconditional_base() == ExactRational(10000000, 409)


def test_unconditional_bound():
    bound = unconditional_bound()
    assert 1.98 < bound.value < 2.00
    assert bound.value == pytest.approx(1.9902, abs=1e-3)
    assert bound.recomputed == pytest.approx(bound.value, abs=1e-3)
    assert not bound.conditional
    assert bound.hypothesis is Hypothesis.NONE


def test_unconditional_beats_older_values():
    value = unconditional_bound().value
    assert value > reference_value(Method.MUELLER_REF)
    assert value > reference_value(Method.MONTGOMERY_ODLYZKO_REF)


def test_opial_table_matches_printed():
    table = opial_table()
    assert [row.k for row in table] == [2, 3, 4, 5, 6, 7]
    for row in table:
        assert row.h == 1
        assert row.value == pytest.approx(PUBLISHED_OPIAL[row.k], abs=5e-4)


def test_opial_k2_example():
    assert lambda_opial(1, 2).value == pytest.approx(1.3753, abs=5e-4)


def test_ap_table_matches_printed():
    for row in ap_table():
        assert row.value == pytest.approx(PUBLISHED_AP[row.k], abs=2e-3)
        assert row.method is Method.WIRTINGER_AP


def test_bp_table_matches_printed():
    for row in bp_table():
        assert row.value == pytest.approx(PUBLISHED_BP[row.k], abs=2e-3)
        assert row.abs_diff < 2e-3


def test_bp_k3_example():
    assert lambda_bp(3).value == pytest.approx(2.4905, abs=2e-3)
    assert lambda_ap(3).value == pytest.approx(2.2265, abs=2e-3)


def test_method_ordering():
    for k in WIRTINGER_K_RANGE:
        opial, ap, bp = lambda_opial(1, k).value, lambda_ap(k).value, lambda_bp(k).value
        assert bp > ap > opial, k


def test_tables_increase_in_k():
    for table in (opial_table(), ap_table(), bp_table()):
        values = [row.value for row in table]
        assert all(a < b for a, b in zip(values, values[1:]))


def test_bounds_are_deterministic():
    assert lambda_bp(5) == lambda_bp(5)
    assert lambda_ap(6).value == lambda_ap(6).value


def test_opial_parameter_errors():
    with pytest.raises(DomainError):
        lambda_opial(2, 2)
    with pytest.raises(DomainError):
        lambda_opial(0, 3)
    with pytest.raises(UnsupportedParameterError):
        lambda_opial(1, 8)
    with pytest.raises(UnsupportedParameterError):
        lambda_opial(3, 2)


def test_wirtinger_k_range():
    with pytest.raises(UnsupportedParameterError):
        lambda_ap(2)
    with pytest.raises(UnsupportedParameterError):
        lambda_bp(8)


def test_opial_family():
    family, best = opial_family(5)
    assert [row.h for row in family] == [1, 2, 3, 4]
    assert best.value == max(row.value for row in family)
    assert family[0].paper_value == PUBLISHED_OPIAL[5]
    assert all(row.paper_value is None for row in family[1:])
    with pytest.raises(UnsupportedParameterError):
        opial_family(1)


def test_steuding_reference_is_linear_in_k():
    assert steuding_reference(1, 1).value == pytest.approx(4 / (math.pi * math.e))
    assert steuding_reference(6, 2).value == pytest.approx(3 * steuding_reference(1, 1).value)
    with pytest.raises(DomainError):
        steuding_reference(0, 1)


def test_reference_bounds():
    references = reference_bounds()
    hall = [row for row in references if row.method is Method.HALL_REF]
    assert hall[0].value == pytest.approx(2.2635, abs=1e-4)
    assert hall[1].value == pytest.approx(2.3452, abs=1e-4)
    assert hall[2].value == pytest.approx(math.sqrt(7533 / 901))
    assert hall[2].paper_value == 2.8915
    assert hall[2].abs_diff < 1e-4
    assert all(row.paper_value is not None for row in hall)
    assert reference_value(Method.NG_REF) == 3.0
    assert len([row for row in references if row.method is Method.STEUDING_REF]) == 7
    with pytest.raises(ValueError):
        reference_value(Method.OPIAL)


def test_best_bounds():
    rows = best_bounds()
    assert rows[0].method is Method.UNCONDITIONAL
    by_k = {row.k: row for row in rows[1:]}
    assert sorted(by_k) == [2, 3, 4, 5, 6, 7]
    assert by_k[2].method is Method.OPIAL
    assert by_k[2].value == pytest.approx(1.3753, abs=5e-4)
    for k in WIRTINGER_K_RANGE:
        assert by_k[k].method is Method.WIRTINGER_BP
    assert by_k[3].value == pytest.approx(2.4905, abs=2e-3)


def test_bounds_frame():
    bounds = all_bounds()
    frame = bounds_frame(bounds)
    assert list(frame.columns) == ["method", "k", "h", "value", "conditional", "paper_value", "abs_diff"]
    assert len(frame) == 1 + 6 + 5 + 5 + len(reference_bounds())
    assert frame.iloc[0]["method"] == "thm21_unconditional"
