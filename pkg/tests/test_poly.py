from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from critpoly.poly import (
    FLOAT,
    PolyMatrix,
    PolyParseError,
    PolySystem,
    Polynomial,
    RingMismatch,
    det,
    differentiate,
    evaluate,
    exact_div,
    format_poly,
    jacobian,
    minors,
    parse,
    random_polynomial,
    substitute_linear,
)
from critpoly.systems import build_cegm_matrix

TROTT = "144*x1^4+144*x2^4-225*x1^2-225*x2^2+350*x1^2*x2^2+81"


def P(s, ring=None):
    return parse(s, ring)


# arithmetic


def test_difference_of_squares():
    assert P("x1+1") * P("x1-1") == P("x1^2-1")


def test_additive_identity():
    f = P("3*x1^2*x2 - 1/2")
    assert f + Polynomial.zero(2) == f


def test_binomial_expansion():
    assert P("x1+x2") ** 2 == P("x1^2 + 2*x1*x2 + x2^2")


def test_ring_mismatch_raises():
    with pytest.raises(RingMismatch):
        P("x1", ("x1", "x2")) + P("x1", ("x1", "y"))


def test_exact_and_float_do_not_mix():
    with pytest.raises((TypeError, RingMismatch)):
        P("x1") + P("x1").to_float()


def test_no_zero_coefficients_stored():
    f = P("x1 + x2") - P("x2")
    assert f.terms == {(1, 0): 1}


# differentiation


def test_power_rule():
    assert differentiate(P("x1^2*x2"), 0) == P("2*x1*x2")


def test_derivative_in_absent_variable():
    f = P(TROTT, 3)
    assert differentiate(f, 2).is_zero()


def test_trott_partial():
    assert differentiate(P(TROTT), 0) == P("576*x1^3 - 450*x1 + 700*x1*x2^2")


def test_derivative_index_out_of_range():
    with pytest.raises(IndexError):
        differentiate(P("x1"), 3)


# evaluation


def test_evaluate_simple():
    assert evaluate(P("x1^2+x2^2"), (3, 4)) == 25


def test_trott_through_one_zero():
    assert evaluate(P(TROTT), (1, 0)) == 0


def test_constant():
    assert evaluate(Polynomial.constant(7, 3), (1.5, 2j, -1)) == 7


def test_evaluate_length_mismatch():
    with pytest.raises(RingMismatch):
        evaluate(P("x1+x2"), (1,))


def test_exact_evaluation_stays_rational():
    v = evaluate(P("x1^2/3 + x2"), (Fraction(1, 2), Fraction(1, 5)))
    assert v == Fraction(1, 12) + Fraction(1, 5)


# jacobian, det, minors


def test_jacobian_circle():
    J = jacobian([P("x1^2+x2^2-1")])
    assert J.shape == (1, 2)
    assert J[0, 0] == P("2*x1", 2) and J[0, 1] == P("2*x2")


def test_space_curve_augmented_layout():
    ring = ("x1", "x2", "x3")
    f1, f2 = P("x1^2 + x2*x3 - 1", ring), P("x1*x2 - x3^2", ring)
    J = jacobian([f1, f2])
    assert J.shape == (2, 3)
    assert J.row(1) == (P("x2", ring), P("x1", ring), P("-2*x3", ring))


def test_det_two_by_two():
    x = Polynomial.gens(4)
    assert det([[x[0], x[1]], [x[2], x[3]]]) == P("x1*x4 - x2*x3")


def test_det_identity():
    assert det(PolyMatrix.identity(5, 2)) == Polynomial.constant(1, 2)


def test_det_non_square():
    with pytest.raises(ValueError):
        det([[P("x1"), P("x1")]])


def test_cegm_minors_of_m26():
    M = build_cegm_matrix(2, 6)
    ring = M.ring

    def p(i, j):
        return det(M.submatrix([0, 1], [i - 1, j - 1]))

    assert p(2, 4) == P("x1", ring)
    assert p(3, 4) == P("x1 - 1", ring)
    assert p(4, 5) == P("x2 - x1", ring)


def test_minors_of_entries_row_major():
    M = PolyMatrix(((P("x1", 2), P("x2")), (P("x1*x2"), P("1", 2))))
    assert list(minors(M, 1)) == [P("x1", 2), P("x2"), P("x1*x2"), P("1", 2)]


def test_two_by_two_minors_count():
    x = Polynomial.gens(6)
    M = PolyMatrix((tuple(x[:3]), tuple(x[3:])))
    assert len(minors(M, 2)) == 3


def test_plucker_count():
    for k, m in [(2, 5), (2, 6), (3, 6)]:
        from math import comb

        assert len(minors(build_cegm_matrix(k, m), k)) == comb(m, k)


def test_minors_size_out_of_range():
    with pytest.raises(ValueError):
        minors(PolyMatrix.identity(2, 1), 3)


@pytest.mark.parametrize("size", [3, 4])
def test_laplace_matches_bareiss(size):
    rng = np.random.default_rng(size)
    for _ in range(5):
        M = [[random_polynomial(2, 1, rng, -3, 3) for _ in range(size)] for _ in range(size)]
        assert det(M, "laplace") == det(M, "bareiss")


def test_det_agrees_with_sympy():
    rng = np.random.default_rng(11)
    M = [[random_polynomial(2, 1, rng, -4, 4) for _ in range(5)] for _ in range(5)]
    x1, x2 = sympy.symbols("x1 x2")
    ref = sympy.Matrix([[sympy.sympify(str(p).replace("^", "**")) for p in row] for row in M]).det()
    assert sympy.expand(sympy.sympify(str(det(M)).replace("^", "**")) - ref) == 0


# substitution


def test_substitute_linear_square():
    out = substitute_linear(P("x1^2"), [[2, -1]], ring=("z1", "z2"))
    assert out == P("4*z1^2 - 4*z1*z2 + z2^2", ("z1", "z2"))


def test_substitute_identity():
    f = P("x1^3*x2 - 2*x2 + 5")
    assert substitute_linear(f, [[1, 0], [0, 1]]) == f


def test_wave_forms_substitution():
    # psi = zeta1 * zeta2 with zeta1 = 2z1 - z2, zeta2 = 2z2 - z3
    ring = ("z1", "z2", "z3", "z4")
    A = [[2, -1, 0, 0], [0, 2, -1, 0], [0, 0, 2, -1]]
    out = substitute_linear(P("x1*x2", 3), A, ring=ring)
    assert out == P("4*z1*z2 - 2*z1*z3 - 2*z2^2 + z2*z3", ring)


def test_substitute_dimension_mismatch():
    with pytest.raises(RingMismatch):
        substitute_linear(P("x1*x2"), [[1, 0]])


# text format


def test_parse_trott():
    f = P(TROTT)
    assert f.coefficient((4, 0)) == 144 and f.coefficient((2, 2)) == 350 and f.constant_term() == 81
    assert len(f.terms) == 6


def test_parse_zero():
    assert P("0").is_zero() and P("0").terms == {}


def test_parse_error_has_position():
    with pytest.raises(PolyParseError) as info:
        P("x1 + * x2")
    assert info.value.pos == 5


def test_parse_complex_literal():
    f = P("(1+2j)*x1 + 3")
    assert f.kind == FLOAT and f.coefficient((1,)) == 1 + 2j


def test_exact_div():
    a, b = P("x1^2 - x2^2"), P("x1 - x2")
    assert exact_div(a, b) == P("x1 + x2")
    with pytest.raises(ValueError):
        exact_div(P("x1^2 + 1", 2), b)


def test_random_round_trip():
    rng = np.random.default_rng(5)
    f = random_polynomial(3, 3, rng)
    f = Polynomial({e: c / 7 for e, c in list(f.terms.items())[:10]}, 3)
    assert len(f.terms) == 10
    assert parse(format_poly(f), 3) == f


# properties

coef = st.fractions(min_value=-20, max_value=20, max_denominator=9)
mono = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(mono, coef, max_size=6).map(lambda d: Polynomial(d, 3))
points = st.tuples(*[st.fractions(min_value=-3, max_value=3, max_denominator=5)] * 3)


@settings(max_examples=60, deadline=None)
@given(polys, polys, coef, coef, st.integers(0, 2))
def test_derivative_linearity(f, g, a, b, i):
    assert differentiate(f * a + g * b, i) == differentiate(f, i) * a + differentiate(g, i) * b


@settings(max_examples=60, deadline=None)
@given(polys, polys, st.integers(0, 2))
def test_product_rule(f, g, i):
    assert differentiate(f * g, i) == f * differentiate(g, i) + g * differentiate(f, i)


@settings(max_examples=60, deadline=None)
@given(polys, polys, points)
def test_evaluation_homomorphism_exact(f, g, pt):
    assert evaluate(f * g, pt) == evaluate(f, pt) * evaluate(g, pt)


@settings(max_examples=60, deadline=None)
@given(polys, polys, points)
def test_evaluation_homomorphism_float(f, g, pt):
    z = [complex(float(a), 0.3) for a in pt]
    lhs = evaluate((f * g).to_float(), z)
    rhs = evaluate(f.to_float(), z) * evaluate(g.to_float(), z)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@settings(max_examples=60, deadline=None)
@given(polys)
def test_format_parse_round_trip(f):
    assert parse(format_poly(f), 3) == f


def test_jacobian_matches_central_differences():
    rng = np.random.default_rng(0)
    F = [random_polynomial(3, 3, rng) for _ in range(3)]
    J = jacobian(F)
    h = 1e-5
    for _ in range(100):
        x = rng.uniform(-1, 1, 3)
        for i, f in enumerate(F):
            for j in range(3):
                e = np.zeros(3)
                e[j] = h
                fd = (evaluate(f.to_float(), x + e) - evaluate(f.to_float(), x - e)) / (2 * h)
                exact = evaluate(J[i, j].to_float(), x)
                assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


def test_polysystem_requires_shared_ring():
    with pytest.raises(ValueError):
        PolySystem((P("x1"), P("x1", ("x1", "x2"))))
    with pytest.raises(ValueError):
        PolySystem(())
