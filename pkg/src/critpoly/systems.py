"""Builders for square critical-point systems.

Every builder returns a :class:`SquareSystem` with exact coefficients.  Instead
of saturating a critical ideal, the rank condition on the augmented Jacobian is
encoded either by its determinant (when it is square) or by Lagrange
multipliers; spurious endpoints are removed afterwards by the side conditions
stored on the system (nonvanishing polynomials, rank checks, extra equations).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import degrees as deg
from .linalg import nullspace, rank
from .poly import (
    Polynomial,
    PolyMatrix,
    PolySystem,
    det,
    exact_div,
    jacobian,
    parse,
    random_polynomial,
)


@dataclass(frozen=True)
class ModelSpec:
    """Variety cut out by ``generators``, of codimension ``codim``.

    ``expected_count`` overrides the generic degree formula for special models.
    """

    generators: PolySystem
    codim: int
    expected_count: int | None = None

    def __post_init__(self):
        if not isinstance(self.generators, PolySystem):
            object.__setattr__(self, "generators", PolySystem(tuple(self.generators)))
        if not (1 <= self.codim <= len(self.generators) and self.codim <= self.n):
            raise ValueError(f"invalid codimension {self.codim}")

    @property
    def n(self) -> int:
        return self.generators.nvars

    @property
    def ring(self):
        return self.generators.ring

    @property
    def degrees(self) -> list[int]:
        return sorted(self.generators.degrees(), reverse=True)


@dataclass(frozen=True)
class SquareSystem:
    equations: PolySystem
    model_vars: tuple[str, ...]
    multiplier_vars: tuple[str, ...] = ()
    expected_count: int | None = None
    nonvanishing: tuple[Polynomial, ...] = ()
    rank_conditions: tuple[tuple[PolyMatrix, int], ...] = ()
    vanishing_checks: tuple[Polynomial, ...] = ()
    description: str = ""

    def __post_init__(self):
        eqs = self.equations
        if len(eqs) != eqs.nvars:
            raise ValueError(f"system is not square: {len(eqs)} equations in {eqs.nvars} unknowns")
        ring = eqs.ring
        for p in itertools.chain(self.nonvanishing, self.vanishing_checks):
            if p.ring != ring:
                raise ValueError("side conditions must live in the system's ring")
        if tuple(self.model_vars) + tuple(self.multiplier_vars) != tuple(ring):
            raise ValueError("variable roles must list the ring's variables in order")

    @property
    def ring(self):
        return self.equations.ring

    def bezout_number(self) -> int:
        return int(np.prod([max(d, 1) for d in self.equations.degrees()]))


# generic critical equations


def _critical_equations(constraints: Sequence[Polynomial], top_row: Sequence[Polynomial], form: str,
                        multiplier_prefix: str = "y"):
    """Equations saying ``[top_row; Jacobian(constraints)]`` has rank <= len(constraints).

    Returns (equations, ring, multiplier names, rank condition on the Jacobian).
    """
    ring = constraints[0].ring
    n = len(ring)
    c = len(constraints)
    if c > n:
        raise ValueError(f"{c} constraints in {n} unknowns")
    if form == "auto":
        form = "plain" if c == n else ("determinant" if c == n - 1 else "multiplier")
    J = jacobian(constraints)
    if c == n or form == "plain":
        if c != n:
            raise ValueError("plain form needs as many constraints as unknowns")
        return list(constraints), ring, (), (J, c)
    if form == "determinant":
        if c != n - 1:
            raise ValueError("determinant form needs a square augmented Jacobian")
        return list(constraints) + [det([list(top_row)] + [list(r) for r in J.rows])], ring, (), (J, c)
    if form != "multiplier":
        raise ValueError(f"unknown form {form!r}")
    names = tuple(f"{multiplier_prefix}{i}" for i in range(1, c + 1))
    big = tuple(ring) + names
    lift = lambda p: p.with_ring(big, list(range(n)))
    ys = [Polynomial.variable(n + i, big) for i in range(c)]
    eqs = [lift(f) for f in constraints]
    for j in range(n):
        e = lift(top_row[j])
        for i in range(c):
            e = e + ys[i] * lift(J[i, j])
        eqs.append(e)
    Jbig = PolyMatrix(tuple(tuple(lift(p) for p in row) for row in J.rows))
    return eqs, big, names, (Jbig, c)


def build_ed_system(model: ModelSpec, u: Sequence, form: str = "auto") -> SquareSystem:
    """Critical points of the squared distance from ``u`` to the variety."""
    k = len(model.generators)
    if model.codim != k:
        raise ValueError("only complete intersections (codim == number of generators) are supported")
    if len(u) != model.n:
        raise ValueError(f"data point has length {len(u)}, expected {model.n}")
    u = [Fraction(a) for a in u]
    xs = Polynomial.gens(model.ring)
    top = [x - a for x, a in zip(xs, u)]
    eqs, ring, names, rankc = _critical_equations(list(model.generators), top, form)
    expected = model.expected_count
    if expected is None:
        expected = deg.ed_degree_ci(model.n, model.codim, model.degrees)
    return SquareSystem(PolySystem(tuple(eqs)), tuple(model.ring), names, expected,
                        rank_conditions=(rankc,), description="euclidean distance critical points")


def _random_rational(rng, low=-9, high=9, nonzero=False) -> Fraction:
    while True:
        a = int(rng.integers(low, high + 1))
        if a or not nonzero:
            return Fraction(a)


def affine_span_equations(u: Sequence, span: Sequence[Sequence], ring=None) -> list[Polynomial]:
    """Affine-linear equations whose common zeros are ``u + span(span)``."""
    n = len(u)
    ring = n if ring is None else ring
    if span:
        normals = nullspace([list(v) for v in span])
    else:
        normals = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    u = [Fraction(a) for a in u]
    return [Polynomial.linear(v, -sum(a * b for a, b in zip(v, u)), ring) for v in normals]


def build_linear_section_system(model: ModelSpec, i: int, seed: int = 0,
                                affine_equations: Sequence[Polynomial] | None = None,
                                objective: Sequence | None = None, form: str = "auto") -> SquareSystem:
    """Critical points of a linear form on the variety cut with an affine space of codimension i-1.

    Without ``affine_equations``/``objective`` both are drawn at random from ``seed``.
    For a polyhedral-norm face problem pass the equations of ``u + L_F`` and the
    functional that is minimised over the unit ball at the face.
    """
    n = model.n
    if not 1 <= i <= n:
        raise ValueError(f"section index i must be in 1..{n}")
    rng = np.random.default_rng(seed)
    if affine_equations is None:
        affine_equations = [
            Polynomial.linear([_random_rational(rng) for _ in range(n)], _random_rational(rng), model.ring)
            for _ in range(i - 1)
        ]
    affine_equations = list(affine_equations)
    if len(affine_equations) != i - 1:
        raise ValueError(f"need {i - 1} affine equations for section index {i}")
    if objective is None:
        objective = [_random_rational(rng, nonzero=True) for _ in range(n)]
    if len(objective) != n:
        raise ValueError("objective must have one coefficient per variable")
    constraints = list(model.generators) + affine_equations
    if len(constraints) > n:
        raise ValueError(f"section index {i} too large for codimension {model.codim}")
    top = [Polynomial.constant(Fraction(a), model.ring) for a in objective]
    eqs, ring, names, rankc = _critical_equations(constraints, top, form)
    expected = None
    if n == 3 and model.codim == 1 and len(model.generators) == 1:
        d = model.generators[0].degree()
        if d >= 2:
            expected = deg.polar_degrees_surface(d)[i - 1]
    return SquareSystem(PolySystem(tuple(eqs)), tuple(model.ring), names, expected,
                        rank_conditions=(rankc,), description=f"linear form on codimension-{i - 1} section")


def random_complete_intersection(n: int, degrees: Sequence[int], seed: int = 0, ring=None) -> ModelSpec:
    rng = np.random.default_rng(seed)
    gens = [random_polynomial(n, d, rng, ring=ring) for d in degrees]
    return ModelSpec(PolySystem(tuple(gens)), len(gens))


# Gaussian models


@dataclass(frozen=True)
class LSSM:
    """Linear space of symmetric matrices spanned by ``basis``."""

    basis: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        basis = tuple(tuple(tuple(Fraction(a) for a in row) for row in A) for A in self.basis)
        object.__setattr__(self, "basis", basis)
        if not basis:
            raise ValueError("LSSM needs at least one basis matrix")
        n = len(basis[0])
        for A in basis:
            if len(A) != n or any(len(r) != n for r in A):
                raise ValueError("basis matrices must be n x n")
            if any(A[i][j] != A[j][i] for i in range(n) for j in range(n)):
                raise ValueError("basis matrices must be symmetric")
        vec = [[A[i][j] for i in range(n) for j in range(i, n)] for A in basis]
        if rank(vec) != len(basis):
            raise ValueError("degenerate LSSM basis (linearly dependent)")

    @property
    def n(self) -> int:
        return len(self.basis[0])

    @property
    def k(self) -> int:
        return len(self.basis)

    @classmethod
    def random(cls, n: int, k: int, seed: int = 0) -> "LSSM":
        rng = np.random.default_rng(seed)
        basis = []
        for _ in range(k):
            A = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    A[i][j] = A[j][i] = Fraction(int(rng.integers(-9, 10)))
            basis.append(A)
        return cls(tuple(tuple(tuple(r) for r in A) for A in basis))

    @classmethod
    def full(cls, n: int) -> "LSSM":
        basis = []
        for i in range(n):
            for j in range(i, n):
                A = [[Fraction(0)] * n for _ in range(n)]
                A[i][j] = A[j][i] = Fraction(1)
                basis.append(A)
        return cls(tuple(tuple(tuple(r) for r in A) for A in basis))

    def element(self, lam: Sequence) -> np.ndarray:
        return sum(complex(l) * np.array(A, dtype=float) for l, A in zip(lam, self.basis))

    def generic_invertible(self, seed: int = 1) -> bool:
        rng = np.random.default_rng(seed)
        M = self.element(rng.normal(size=self.k))
        return abs(np.linalg.det(M)) > 1e-9 * max(1.0, np.abs(M).max()) ** self.n


def sample_covariance(n: int, seed: int = 0) -> list[list[Fraction]]:
    """``S = G G^T / N`` for a seeded random rational n x N matrix ``G`` with ``N = n + 2``."""
    rng = np.random.default_rng(seed)
    N = n + 2
    G = [[Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 4))) for _ in range(N)] for _ in range(n)]
    return [[sum((G[i][l] * G[j][l] for l in range(N)), Fraction(0)) / N for j in range(n)] for i in range(n)]


def _sym_vars(prefix: str, n: int) -> list[str]:
    return [f"{prefix}{i + 1}{j + 1}" for i in range(n) for j in range(i, n)]


def _sym_matrix(ring, names: list[str], n: int) -> list[list[Polynomial]]:
    idx = {}
    pos = 0
    for i in range(n):
        for j in range(i, n):
            idx[i, j] = idx[j, i] = ring.index(names[pos])
            pos += 1
    return [[Polynomial.variable(idx[i, j], ring) for j in range(n)] for i in range(n)]


def _lssm_matrix(L: LSSM, ring, offset: int) -> list[list[Polynomial]]:
    lam = [Polynomial.variable(offset + m, ring) for m in range(L.k)]
    zero = Polynomial.zero(ring)
    n = L.n
    return [[sum((lam[m] * L.basis[m][i][j] for m in range(L.k)), zero) for j in range(n)] for i in range(n)]


def _matmul(A, B):
    n = len(A)
    zero = A[0][0] * 0
    return [[sum((A[i][l] * B[l][j] for l in range(n)), zero) for j in range(len(B[0]))] for i in range(n)]


def _trace_with(A, C) -> Polynomial:
    """trace(A C) for a polynomial matrix A and rational matrix C."""
    n = len(A)
    zero = A[0][0] * 0
    return sum((A[i][j] * C[j][i] for i in range(n) for j in range(n) if C[j][i] != 0), zero)


def _adjugate(M) -> list[list[Polynomial]]:
    n = len(M)
    adj = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            sub = [[M[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            d = det(sub) if n > 1 else M[0][0] ** 0
            adj[i][j] = d if (i + j) % 2 == 0 else -d
    return adj


def _check_gaussian_inputs(L: LSSM, S):
    S = [[Fraction(a) for a in row] for row in S]
    n = L.n
    if len(S) != n or any(len(r) != n for r in S):
        raise ValueError("S must be n x n")
    if any(S[i][j] != S[j][i] for i in range(n) for j in range(n)):
        raise ValueError("S must be symmetric")
    if not L.generic_invertible():
        raise ValueError("generic element of the LSSM is singular")
    return S


def _gaussian_primal_dual(L: LSSM, S, covariance: bool) -> SquareSystem:
    n, k = L.n, L.k
    lam_names = [f"l{m + 1}" for m in range(k)]
    other = _sym_vars("k" if covariance else "s", n)
    ring = tuple(lam_names + other)
    lin = _lssm_matrix(L, ring, 0)
    sym = _sym_matrix(ring, other, n)
    K, Sig = (sym, lin) if covariance else (lin, sym)
    KS = _matmul(K, Sig)
    eqs, checks = [], []
    for i in range(n):
        for j in range(n):
            e = KS[i][j] - (1 if i == j else 0)
            (eqs if i <= j else checks).append(e)
    if covariance:
        Sp = [[Polynomial.constant(a, ring) for a in row] for row in S]
        KSK = _matmul(_matmul(K, Sp), K)
        D = [[KSK[i][j] - K[i][j] for j in range(n)] for i in range(n)]
    else:
        D = [[Sig[i][j] - S[i][j] for j in range(n)] for i in range(n)]
    for A in L.basis:
        eqs.append(_trace_with(D, A))
    nonvanishing = (det(lin),)
    system = SquareSystem(PolySystem(tuple(eqs)), ring, (), None, nonvanishing=nonvanishing,
                          vanishing_checks=tuple(checks),
                          description=("linear covariance" if covariance else "linear concentration")
                          + " model, primal-dual form")
    _assert_generically_finite(system)
    return system


def _gaussian_eliminated(L: LSSM, S, covariance: bool, seed: int = 0) -> SquareSystem:
    """Projective form in the k coordinates of the linear matrix M = sum mu_m A_m.

    The critical condition is invariant under scaling up to a single factor t,
    so we solve for the direction mu on a random affine patch and recover t
    afterwards (see :func:`gaussian_matrices`).  This removes the highly
    singular root at the origin that clearing denominators would introduce.

    Concentration (M = K/t):  tr(adj M A_m) proportional to tr(S A_m).
    Covariance (M = Sigma/t):  tr(adj M S adj M A_m) proportional to tr(adj M A_m),
    with the common factor det M divided out of each 2x2 minor.
    """
    n, k = L.n, L.k
    ring = tuple(f"l{m + 1}" for m in range(k))
    M = _lssm_matrix(L, ring, 0)
    adj = _adjugate(M)
    d = det(M)
    g = [_trace_with(adj, A) for A in L.basis]
    if covariance:
        Sp = [[Polynomial.constant(a, ring) for a in row] for row in S]
        num = _matmul(_matmul(adj, Sp), adj)
        b = [_trace_with(num, A) for A in L.basis]
        # every such minor vanishes where det M = 0 (adj M has rank one there)
        eqs = [exact_div(b[m] * g[0] - b[0] * g[m], d) for m in range(1, k)]
        nonvanishing = (d, g[0], b[0])
    else:
        c = [sum((S[i][j] * A[j][i] for i in range(n) for j in range(n)), Fraction(0)) for A in L.basis]
        p = max(range(k), key=lambda m: (abs(c[m]), -m))
        if c[p] == 0:
            raise ValueError("S is orthogonal to the LSSM; the likelihood has no critical points")
        eqs = [g[m] * c[p] - g[p] * c[m] for m in range(k) if m != p]
        nonvanishing = (d, g[p])
    rng = np.random.default_rng(seed)
    patch = [Fraction(int(rng.integers(1, 10)), int(rng.integers(1, 10))) for _ in range(k)]
    eqs.append(Polynomial.linear(patch, -1, ring))
    return SquareSystem(PolySystem(tuple(eqs)), ring, (), None, nonvanishing=nonvanishing,
                        description=("linear covariance" if covariance else "linear concentration")
                        + " model, eliminated form")


def _assert_generically_finite(system: SquareSystem, seed: int = 7):
    from .homotopy import CompiledSystem

    C = CompiledSystem(list(system.equations))
    rng = np.random.default_rng(seed)
    x = rng.normal(size=C.nvars) + 1j * rng.normal(size=C.nvars)
    _, J = C.values_and_jacobian(x[None, :])
    if np.linalg.matrix_rank(J[0]) != C.nvars:
        raise ValueError("Gaussian critical system is not generically finite (rank-deficient Jacobian)")


def _gaussian_expected(L: LSSM, covariance: bool):
    full = L.n * (L.n + 1) // 2
    if L.k == full:
        return 1
    if L.n == 4 and L.k in deg.GAUSSIAN_N4:
        return deg.gaussian_ml_degrees_n4(L.k)[1 if covariance else 0]
    return None


def build_gaussian_concentration(L: LSSM, S, formulation: str = "primal-dual", seed: int = 0) -> SquareSystem:
    """MLE critical equations of the linear concentration model ``K in L``.

    ``primal-dual``: unknowns are the coordinates of K in the basis of L and the
    upper triangle of Sigma.  ``eliminated``: Sigma = adj(K)/det(K) is substituted
    and denominators cleared, leaving only the k coordinates of K.
    """
    S = _check_gaussian_inputs(L, S)
    if formulation == "primal-dual":
        system = _gaussian_primal_dual(L, S, covariance=False)
    elif formulation == "eliminated":
        system = _gaussian_eliminated(L, S, covariance=False, seed=seed)
    else:
        raise ValueError(f"unknown formulation {formulation!r}")
    return _with_expected(system, _gaussian_expected(L, False))


def build_gaussian_covariance(L: LSSM, S, formulation: str = "primal-dual", seed: int = 0) -> SquareSystem:
    """MLE critical equations of the linear covariance model ``Sigma in L``."""
    S = _check_gaussian_inputs(L, S)
    if formulation == "primal-dual":
        system = _gaussian_primal_dual(L, S, covariance=True)
    elif formulation == "eliminated":
        system = _gaussian_eliminated(L, S, covariance=True, seed=seed)
    else:
        raise ValueError(f"unknown formulation {formulation!r}")
    return _with_expected(system, _gaussian_expected(L, True))


def _with_expected(system: SquareSystem, expected) -> SquareSystem:
    from dataclasses import replace

    return replace(system, expected_count=expected)


def gaussian_matrices(system: SquareSystem, L: LSSM, S, point) -> tuple[np.ndarray, np.ndarray]:
    """Recover (K, Sigma) from a solution point of either Gaussian formulation."""
    n, k = L.n, L.k
    point = np.asarray(point, dtype=complex)
    lin = L.element(point[:k])
    covariance = "covariance" in system.description
    if "eliminated" in system.description:
        Sn = np.array(S, dtype=float)
        A = [np.array(B, dtype=float) for B in L.basis]
        Mi = np.linalg.inv(lin)
        if covariance:
            t = np.trace(Mi @ Sn @ Mi @ A[0]) / np.trace(Mi @ A[0])
            Sigma = t * lin
            return np.linalg.inv(Sigma), Sigma
        c = [np.trace(Sn @ B) for B in A]
        p = int(np.argmax(np.abs(c)))
        K = np.trace(Mi @ A[p]) / c[p] * lin
        return K, np.linalg.inv(K)
    other = np.zeros((n, n), dtype=complex)
    pos = k
    for i in range(n):
        for j in range(i, n):
            other[i, j] = other[j, i] = point[pos]
            pos += 1
    return (other, lin) if covariance else (lin, other)


# discrete models


def build_discrete_mle(model: ModelSpec, u: Sequence, form: str = "auto") -> SquareSystem:
    """Likelihood critical equations for a model inside the probability simplex.

    Unknowns are the probabilities ``p_0..p_n`` (the model ring) and, in
    multiplier form, ``y0..yk`` with ``u_j = p_j (y0 + sum_i y_i df_i/dp_j)``.
    """
    k = len(model.generators)
    if model.codim != k:
        raise ValueError("only complete intersections (codim == number of generators) are supported")
    n1 = model.n
    if len(u) != n1:
        raise ValueError(f"data vector has length {len(u)}, expected {n1}")
    u = [Fraction(a) for a in u]
    if any(a <= 0 for a in u):
        raise ValueError("data must be positive")
    ring = tuple(model.ring)
    ps = Polynomial.gens(ring)
    total = sum(ps[1:], ps[0])
    J = jacobian(list(model.generators))
    if form == "auto":
        form = "determinant" if k + 2 == n1 else "multiplier"
    if form == "determinant":
        if k + 2 != n1:
            raise ValueError("determinant form needs a square augmented Jacobian")
        rows = [[Polynomial.constant(a, ring) for a in u], list(ps)]
        rows += [[ps[j] * J[i, j] for j in range(n1)] for i in range(k)]
        eqs = list(model.generators) + [total - 1, det(rows)]
        names: tuple[str, ...] = ()
        nonvanishing = tuple(ps)
    elif form == "multiplier":
        names = tuple(f"y{i}" for i in range(k + 1))
        big = ring + names
        lift = lambda p: p.with_ring(big, list(range(n1)))
        ys = [Polynomial.variable(n1 + i, big) for i in range(k + 1)]
        eqs = [lift(f) for f in model.generators] + [lift(total) - 1]
        for j in range(n1):
            inner = ys[0]
            for i in range(k):
                inner = inner + ys[i + 1] * lift(J[i, j])
            eqs.append(lift(ps[j]) * inner - u[j])
        nonvanishing = tuple(lift(p) for p in ps)
    else:
        raise ValueError(f"unknown form {form!r}")
    expected = model.expected_count
    if expected is None:
        expected = deg.ml_degree_ci(n1 - 1, model.codim, model.degrees)
    return SquareSystem(PolySystem(tuple(eqs)), ring, names, expected, nonvanishing=nonvanishing,
                        description="discrete likelihood critical points")


def closed_form_mle_independence(u) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """MLE of the 2x2 independence model: products of row and column sums over |u|^2."""
    flat = [Fraction(a) for row in u for a in row] if isinstance(u[0], (list, tuple)) else [Fraction(a) for a in u]
    if len(flat) != 4 or any(a < 0 for a in flat):
        raise ValueError("need a nonnegative 2x2 table")
    u0, u1, u2, u3 = flat
    size = u0 + u1 + u2 + u3
    if size == 0:
        raise ValueError("zero sample size")
    s2 = size * size
    return ((u0 + u1) * (u0 + u2) / s2, (u0 + u1) * (u1 + u3) / s2,
            (u2 + u3) * (u0 + u2) / s2, (u2 + u3) * (u1 + u3) / s2)


def closed_form_mle_coin(u) -> tuple[Fraction, Fraction, Fraction]:
    """MLE of the coin model ``p0 p2 = (p0 + p1) p1`` (flip; if heads, flip again)."""
    u0, u1, u2 = (Fraction(a) for a in u)
    if min(u0, u1, u2) < 0:
        raise ValueError("data must be nonnegative")
    den = 2 * u0 + 2 * u1 + u2
    if den == 0:
        raise ValueError("degenerate data")
    a = 2 * u0 + u1
    return a * a / den**2, a * (u1 + u2) / den**2, (u1 + u2) / den


def independence_model() -> ModelSpec:
    ring = ("p0", "p1", "p2", "p3")
    return ModelSpec(PolySystem((parse("p0*p3 - p1*p2", ring),)), 1, expected_count=1)


def coin_model() -> ModelSpec:
    ring = ("p0", "p1", "p2")
    return ModelSpec(PolySystem((parse("p0*p2 - p0*p1 - p1^2", ring),)), 1, expected_count=1)


def random_simplex_model(degrees: Sequence[int], n: int = 3, seed: int = 0) -> ModelSpec:
    ring = tuple(f"p{i}" for i in range(n + 1))
    return random_complete_intersection(n + 1, degrees, seed, ring=ring)


# CEGM scattering


def cegm_ring(k: int, m: int) -> tuple[str, ...]:
    cols = m - k - 1
    if k == 2:
        return tuple(f"x{j}" for j in range(1, cols + 1))
    return tuple(f"x{i}_{j}" for i in range(1, k) for j in range(1, cols + 1))


def build_cegm_matrix(k: int, m: int) -> PolyMatrix:
    """The k x m matrix whose non-constant k x k minors are coordinates on X(k, m)."""
    if not 2 <= k <= m - 2:
        raise ValueError(f"need 2 <= k <= m-2, got k={k}, m={m}")
    ring = cegm_ring(k, m)
    cols = m - k - 1
    zero, one = Polynomial.zero(ring), Polynomial.constant(1, ring)
    rows = []
    for r in range(1, k + 1):
        row = [zero] * m
        a = k + 1 - r
        row[a - 1] = Polynomial.constant((-1) ** a, ring)
        row[k] = one
        for j in range(1, cols + 1):
            if r == 1:
                row[k + j] = one
            else:
                row[k + j] = Polynomial.variable((r - 2) * cols + (j - 1), ring)
        rows.append(tuple(row))
    return PolyMatrix(tuple(rows))


def cegm_minors(k: int, m: int, nonconstant_only: bool = True) -> dict[tuple[int, ...], Polynomial]:
    """Plücker coordinates p_I (1-based column indices) of the CEGM matrix."""
    M = build_cegm_matrix(k, m)
    out = {}
    for cols in itertools.combinations(range(m), k):
        p = det(M.submatrix(range(k), cols))
        if nonconstant_only and p.is_constant():
            continue
        out[tuple(c + 1 for c in cols)] = p
    return out


def random_cegm_data(k: int, m: int, seed: int = 0) -> dict[tuple[int, ...], Fraction]:
    rng = np.random.default_rng(seed)
    return {I: Fraction(int(rng.integers(1, 100)), int(rng.integers(1, 20))) for I in cegm_minors(k, m)}


def build_cegm_scattering(k: int, m: int, u: Mapping[tuple[int, ...], object]) -> SquareSystem:
    """Scattering equations, each cleared by the product of the p_I occurring in it."""
    minors = cegm_minors(k, m)
    keys = {tuple(I) for I in u}
    if keys != set(minors):
        raise ValueError("data must be indexed exactly by the non-constant Plücker coordinates")
    u = {tuple(I): Fraction(v) for I, v in u.items()}
    ring = cegm_ring(k, m)
    eqs = []
    for v in range(len(ring)):
        parts = [(I, p, p.diff(v)) for I, p in minors.items() if not p.diff(v).is_zero()]
        e = Polynomial.zero(ring)
        for I, p, dp in parts:
            term = dp * u[I]
            for J, q, _ in parts:
                if J != I:
                    term = term * q
            e = e + term
        eqs.append(e)
    return SquareSystem(PolySystem(tuple(eqs)), ring, (), deg.cegm_ml_degree(k, m),
                        nonvanishing=tuple(minors.values()), description=f"CEGM scattering equations k={k}, m={m}")


# JSON model files


def model_from_json(obj) -> ModelSpec:
    """Load ``{"variables": [...], "generators": [...], "codim": c}`` from a dict, path or JSON text."""
    if isinstance(obj, (str, Path)):
        p = Path(obj)
        obj = json.loads(p.read_text()) if p.exists() else json.loads(str(obj))
    ring = obj.get("variables")
    gens = [parse(s, ring) for s in obj["generators"]]
    if ring is None:
        n = max(g.nvars for g in gens)
        gens = [parse(s, n) for s in obj["generators"]]
    return ModelSpec(PolySystem(tuple(gens)), int(obj.get("codim", len(gens))), obj.get("expected_count"))


def model_to_json(model: ModelSpec) -> dict:
    d = {"variables": list(model.ring), "generators": [str(g) for g in model.generators], "codim": model.codim}
    if model.expected_count is not None:
        d["expected_count"] = model.expected_count
    return d


def parse_data_point(obj):
    """Data as a JSON array, comma-separated rationals, or a map such as {"24": 3, "2,5": 1}."""
    if isinstance(obj, str):
        obj = obj.strip()
        if obj.startswith("[") or obj.startswith("{"):
            obj = json.loads(obj)
        else:
            return [Fraction(a) for a in obj.split(",")]
    if isinstance(obj, Mapping):
        out = {}
        for key, val in obj.items():
            key = str(key)
            idx = tuple(int(a) for a in key.split(",")) if "," in key else tuple(int(ch) for ch in key)
            out[idx] = Fraction(str(val))
        return out
    flat = []
    for a in obj:
        flat.extend(a if isinstance(a, (list, tuple)) else [a])
    return [Fraction(str(a)) for a in flat]
