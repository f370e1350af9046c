import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from critpoly.degrees import (
    DegreeQuery,
    cegm_ml_degree,
    ed_degree_ci,
    ed_degree_curve,
    evaluate_query,
    gaussian_ml_degrees_n4,
    ml_degree_ci,
    polar_degrees_surface,
    space_curve_degree_genus,
)


def test_trott_ed_degree():
    assert ed_degree_ci(2, 1, [4]) == 16


@pytest.mark.parametrize("d1,d2", [(2, 2), (3, 2), (3, 3), (4, 2), (4, 4)])
def test_space_curve_closed_form(d1, d2):
    assert ed_degree_ci(3, 2, [d1, d2]) == d1 * d2 * (d1 + d2 - 1)


@pytest.mark.parametrize("d", range(1, 8))
def test_surface_closed_form(d):
    assert ed_degree_ci(3, 1, [d]) == d**3 - d**2 + d


def test_unsorted_degrees_rejected():
    with pytest.raises(ValueError):
        ed_degree_ci(3, 2, [2, 3])
    with pytest.raises(ValueError):
        ml_degree_ci(3, 2, [2, 3])


def test_curve_formula():
    assert ed_degree_curve(4, 1) == 12
    assert ed_degree_curve(1, 0) == 1


def test_space_curve_genus_cases():
    assert space_curve_degree_genus(2, 2) == (4, 1)
    # d = 6 and g = 9*2/2 + 3*4/2 - 12 + 1 = 4
    assert space_curve_degree_genus(3, 2) == (6, 4)
    assert ed_degree_curve(6, 4) == 24 == ed_degree_ci(3, 2, [3, 2])


@pytest.mark.parametrize("d1", [2, 3, 4])
@pytest.mark.parametrize("d2", [2, 3, 4])
def test_genus_formula_agrees_with_ci(d1, d2):
    d, g = space_curve_degree_genus(d1, d2)
    assert ed_degree_curve(d, g) == ed_degree_ci(3, 2, sorted([d1, d2], reverse=True))


def test_polar_degrees():
    assert polar_degrees_surface(2) == (2, 2, 2)
    assert polar_degrees_surface(3) == (12, 6, 3)


@pytest.mark.parametrize("d", range(2, 11))
def test_polar_sum_identity(d):
    assert sum(polar_degrees_surface(d)) == ed_degree_ci(3, 1, [d])


def test_ml_degree_space_curve():
    assert ml_degree_ci(3, 2, [2, 2]) == 20
    for d1, d2 in [(3, 2), (3, 3), (4, 1)]:
        assert ml_degree_ci(3, 2, [d1, d2]) == d1 * d2 * (d1 + d2 + 1)


def test_ml_degree_zero_dimensional():
    assert ml_degree_ci(3, 3, [3, 2, 2]) == 12


@given(st.lists(st.integers(1, 5), min_size=1, max_size=3), st.integers(0, 2), st.integers(0, 2))
def test_monotone_in_each_degree(degs, extra_n, j):
    degs = sorted(degs, reverse=True)
    n = len(degs) + extra_n
    j = j % len(degs)
    bigger = list(degs)
    bigger[j] += 1
    bigger.sort(reverse=True)
    assert ed_degree_ci(n, len(degs), bigger) >= ed_degree_ci(n, len(degs), degs)
    assert ml_degree_ci(n, len(degs), bigger) >= ml_degree_ci(n, len(degs), degs)


def test_gaussian_table():
    assert gaussian_ml_degrees_n4(4) == (17, 45)
    assert gaussian_ml_degrees_n4(2) == (3, 5)
    assert gaussian_ml_degrees_n4(9) == (3, 7)
    with pytest.raises(ValueError):
        gaussian_ml_degrees_n4(10)


def test_cegm_values():
    assert cegm_ml_degree(2, 6) == 6
    assert cegm_ml_degree(2, 13) == 3628800
    assert cegm_ml_degree(3, 6) == 26
    assert cegm_ml_degree(4, 8) == 5211816
    assert cegm_ml_degree(3, 10) is None


@pytest.mark.parametrize("m", range(4, 10))
def test_cegm_duality(m):
    for k in range(2, m - 1):
        assert cegm_ml_degree(k, m) == cegm_ml_degree(m - k, m)
    assert cegm_ml_degree(3, 5) == cegm_ml_degree(2, 5) == 2


def test_cegm_factorial_exact():
    assert cegm_ml_degree(2, 40) == math.factorial(37)


def test_query_dispatch():
    assert evaluate_query(DegreeQuery("ed-ci", {"n": 2, "c": 1, "degrees": [4]}))[0] == 16
    assert evaluate_query(DegreeQuery("cegm", {"k": 3, "m": 11}))[0] == "unknown"
    assert evaluate_query(DegreeQuery("ed-space-curve", {"degrees": [3, 3]}))[0] == 45
    with pytest.raises(ValueError):
        evaluate_query(DegreeQuery("nope", {}))
