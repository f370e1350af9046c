from fractions import Fraction

import numpy as np
import pytest

from critpoly.homotopy import negative_loglik, select_minimizer, simplex_feasible, solve
from critpoly.poly import PolySystem, evaluate, jacobian, parse
from critpoly.systems import (
    LSSM,
    ModelSpec,
    SquareSystem,
    affine_span_equations,
    build_cegm_scattering,
    build_discrete_mle,
    build_ed_system,
    build_gaussian_concentration,
    build_gaussian_covariance,
    build_linear_section_system,
    cegm_minors,
    closed_form_mle_coin,
    closed_form_mle_independence,
    coin_model,
    gaussian_matrices,
    independence_model,
    model_from_json,
    model_to_json,
    parse_data_point,
    random_cegm_data,
    random_complete_intersection,
    random_simplex_model,
    sample_covariance,
)

TROTT = "144*x1^4+144*x2^4-225*x1^2-225*x2^2+350*x1^2*x2^2+81"


def smallest_singular(rows):
    return np.linalg.svd(np.array(rows, dtype=complex), compute_uv=False)[-1]


# model and system containers


def test_model_spec_rejects_bad_codim():
    with pytest.raises(ValueError):
        ModelSpec([parse("x1^2 + x2^2 - 1")], 2)


def test_square_system_shape_enforced():
    with pytest.raises(ValueError):
        SquareSystem(PolySystem((parse("x1 + x2"),)), ("x1", "x2"))


def test_model_json_round_trip():
    m = ModelSpec([parse("x1^2 + x2*x3 - 1", 3), parse("x1*x2 - x3^2")], 2)
    back = model_from_json(model_to_json(m))
    assert list(back.generators) == list(m.generators) and back.codim == 2


def test_parse_data_point_forms():
    assert parse_data_point("1/2, 3") == [Fraction(1, 2), 3]
    assert parse_data_point("[[1, 2], [3, 4]]") == [1, 2, 3, 4]
    assert parse_data_point('{"24": 3, "2,5": 1}') == {(2, 4): 3, (2, 5): 1}


# euclidean distance


def test_ed_forms_by_codimension():
    curve = random_complete_intersection(3, [2, 2], seed=1)
    det_form = build_ed_system(curve, [1, 2, 3])
    assert det_form.multiplier_vars == () and len(det_form.equations) == 3
    mult = build_ed_system(curve, [1, 2, 3], form="multiplier")
    assert mult.multiplier_vars == ("y1", "y2") and len(mult.equations) == 5
    with pytest.raises(ValueError):
        build_ed_system(curve, [1, 2])


def test_ed_expected_counts():
    assert build_ed_system(ModelSpec([parse(TROTT)], 1), [1, 1]).expected_count == 16
    assert build_ed_system(random_complete_intersection(3, [3, 2]), [0, 0, 0]).expected_count == 24


@pytest.mark.parametrize("form", ["determinant", "multiplier"])
def test_ed_critical_points_satisfy_definition(form):
    u = [Fraction(1, 3), Fraction(-2, 5), Fraction(1, 2)]
    model = random_complete_intersection(3, [2, 2], seed=2)
    S = solve(build_ed_system(model, u, form=form))
    assert len(S) == 12
    J = jacobian(list(model.generators))
    for s in S:
        x = np.array(s.point[:3])
        rows = [x - np.array(u, dtype=float)]
        rows += [[evaluate(J[i, j].to_float(), x) for j in range(3)] for i in range(2)]
        scale = max(1.0, np.abs(np.array(rows)).max())
        assert smallest_singular(rows) / scale < 1e-7
        for f in model.generators:
            assert abs(evaluate(f.to_float(), x)) < 1e-7 * max(1.0, np.abs(x).max() ** 2)


def test_affine_span_equations():
    eqs = affine_span_equations([1, 2, 3], [[1, 1, 0]])
    assert len(eqs) == 2
    for t in (0, 2, Fraction(-1, 3)):
        pt = [1 + t, 2 + t, 3]
        assert all(evaluate(e, pt) == 0 for e in eqs)
    assert any(evaluate(e, [1, 2, 4]) != 0 for e in eqs)


def test_linear_section_counts():
    surf = random_complete_intersection(3, [3], seed=0)
    sys = build_linear_section_system(surf, 2, seed=1)
    assert sys.expected_count == 6
    assert len(solve(sys)) == 6
    with pytest.raises(ValueError):
        build_linear_section_system(surf, 4)


# gaussian models


def test_lssm_validation():
    with pytest.raises(ValueError):
        LSSM(([[1, 0], [0, 0]], [[2, 0], [0, 0]]))
    with pytest.raises(ValueError):
        LSSM(([[1, 2], [0, 0]],))
    L = LSSM.random(4, 3, seed=0)
    assert (L.n, L.k) == (4, 3)
    assert LSSM.full(3).k == 6


def test_sample_covariance_positive_definite():
    for seed in range(5):
        S = np.array(sample_covariance(4, seed), dtype=float)
        assert np.allclose(S, S.T) and np.linalg.eigvalsh(S).min() > 0


@pytest.mark.parametrize("covariance,k,expected", [(False, 2, 3), (False, 3, 9), (True, 2, 5), (True, 3, 19)])
def test_gaussian_eliminated_counts(covariance, k, expected):
    L = LSSM.random(4, k, seed=k)
    S = sample_covariance(4, seed=k)
    build = build_gaussian_covariance if covariance else build_gaussian_concentration
    system = build(L, S, formulation="eliminated")
    assert system.expected_count == expected
    result = solve(system)
    assert len(result) == expected
    Sn = np.array(S, dtype=float)
    for s in result:
        K, Sigma = gaussian_matrices(system, L, S, s.point)
        assert np.abs(K @ Sigma - np.eye(4)).max() < 1e-8
        # likelihood equations: projection of Sigma - S (or K - S^-1 weighted) onto L vanishes
        A = [np.array(B, dtype=float) for B in L.basis]
        if covariance:
            vals = [np.trace(K @ (Sigma - Sn) @ K @ B) for B in A]
        else:
            vals = [np.trace((Sigma - Sn) @ B) for B in A]
        assert max(abs(v) for v in vals) < 1e-7 * max(1.0, np.abs(K).max() ** 2)


def test_gaussian_primal_dual_structure():
    L = LSSM.random(4, 2, seed=0)
    system = build_gaussian_concentration(L, sample_covariance(4))
    assert len(system.equations) == 2 + 10
    assert len(system.vanishing_checks) == 6
    assert system.expected_count == 3


def test_gaussian_full_space_has_one_solution():
    L = LSSM.full(2)
    S = sample_covariance(2, seed=3)
    system = build_gaussian_concentration(L, S, formulation="eliminated")
    assert system.expected_count == 1
    result = solve(system)
    assert len(result) == 1
    K, Sigma = gaussian_matrices(system, L, S, result.solutions[0].point)
    assert np.allclose(Sigma, np.array(S, dtype=float), atol=1e-9)


def test_gaussian_input_errors():
    L = LSSM.random(4, 2)
    with pytest.raises(ValueError):
        build_gaussian_concentration(L, sample_covariance(3))
    with pytest.raises(ValueError):
        build_gaussian_concentration(L, sample_covariance(4), formulation="dual")


@pytest.mark.slow
def test_gaussian_primal_dual_concentration_small():
    L = LSSM.random(4, 2, seed=2)
    assert len(solve(build_gaussian_concentration(L, sample_covariance(4, 2)))) == 3


@pytest.mark.slow
def test_gaussian_concentration_k4():
    L = LSSM.random(4, 4, seed=4)
    assert len(solve(build_gaussian_concentration(L, sample_covariance(4, 4), formulation="eliminated"))) == 17


# discrete models


def test_independence_closed_form_example():
    assert closed_form_mle_independence([[4, 2], [2, 1]]) == tuple(Fraction(v, 81) for v in (36, 18, 18, 9))


def test_coin_closed_form_example():
    assert closed_form_mle_coin([1, 1, 1]) == (Fraction(9, 25), Fraction(6, 25), Fraction(2, 5))


@pytest.mark.parametrize(
    "model,u,closed",
    [
        (independence_model, [4, 2, 2, 1], closed_form_mle_independence),
        (independence_model, [3, 7, 1, 5], closed_form_mle_independence),
        (coin_model, [2, 2, 1], closed_form_mle_coin),
        (coin_model, [5, 1, 3], closed_form_mle_coin),
    ],
)
def test_numerical_mle_matches_closed_form(model, u, closed):
    result = solve(build_discrete_mle(model(), u))
    best = select_minimizer(result, negative_loglik(u), feasible=simplex_feasible(len(u)))
    probs = best.real_point()[: len(u)]
    assert np.allclose(probs, [float(v) for v in closed(u)], atol=1e-10)


def test_discrete_mle_space_curve():
    model = random_simplex_model([2, 2], seed=4)
    system = build_discrete_mle(model, [3, 5, 7, 11])
    assert system.multiplier_vars == ()
    assert build_discrete_mle(model, [3, 5, 7, 11], form="multiplier").multiplier_vars == ("y0", "y1", "y2")
    assert system.expected_count == 20
    assert len(solve(system)) == 20


def test_discrete_mle_rejects_nonpositive_data():
    with pytest.raises(ValueError):
        build_discrete_mle(coin_model(), [1, 0, 2])
    with pytest.raises(ValueError):
        build_discrete_mle(coin_model(), [1, 2])


# scattering equations


def test_cegm_minor_counts():
    assert len(cegm_minors(2, 6)) == 9  # 15 Plücker coordinates, 6 constant
    assert len(cegm_minors(2, 5)) == 5


@pytest.mark.parametrize("k,m", [(2, 5), (2, 6), (3, 5)])
def test_cegm_solution_counts(k, m):
    u = random_cegm_data(k, m, seed=1)
    system = build_cegm_scattering(k, m, u)
    result = solve(system)
    assert len(result) == system.expected_count
    minors = cegm_minors(k, m)
    for s in result:
        x = s.point
        # the log-likelihood gradient vanishes
        grad = [sum(float(u[I]) * evaluate(p.diff(v).to_float(), x) / evaluate(p.to_float(), x)
                    for I, p in minors.items()) for v in range(len(x))]
        assert max(abs(g) for g in grad) < 1e-6


def test_cegm_data_must_match_minors():
    u = random_cegm_data(2, 5)
    u.pop(next(iter(u)))
    with pytest.raises(ValueError):
        build_cegm_scattering(2, 5, u)
