"""Linear PDE with constant coefficients, read off from polynomials.

A polynomial ``g(x)`` acts on functions of ``z`` by ``x_i -> d/dz_i``.  Solutions
are represented exactly in the class of exponential polynomials
``sum_j p_j(z) exp(a_j . z)``, which is closed under differentiation and linear
changes of variables.  Membership in primary ideals with linear associated
primes is tested with Noetherian operators written in normal order
(x-coefficients to the left of the partial derivatives).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .linalg import matvec, nullspace, rank
from .poly import EXACT, FLOAT, Polynomial, PolySystem, default_ring, evaluate, parse, substitute_linear


def _zring(n: int) -> tuple[str, ...]:
    return tuple(f"z{i}" for i in range(1, n + 1))


def _apply_partials(f: Polynomial, alpha: Sequence[int]) -> Polynomial:
    for i, a in enumerate(alpha):
        if a:
            f = f.diff(i, a)
            if f.is_zero():
                break
    return f


# exponential polynomials


@dataclass(frozen=True)
class ExpPolyFunction:
    """``sum over frequencies a of terms[a](z) * exp(a . z)``.

    Frequencies are tuples of Fractions (or complex numbers); zero polynomial
    parts are dropped so that ``is_zero`` is a structural test.
    """

    terms: Mapping[tuple, Polynomial]
    n: int

    def __post_init__(self):
        clean = {}
        for a, p in self.terms.items():
            a = tuple(a)
            if len(a) != self.n or p.nvars != self.n:
                raise ValueError("frequency and polynomial sizes must match n")
            if not p.is_zero():
                clean[a] = clean[a] + p if a in clean else p
        object.__setattr__(self, "terms", {a: p for a, p in clean.items() if not p.is_zero()})

    @classmethod
    def polynomial(cls, p: Polynomial) -> "ExpPolyFunction":
        return cls({(Fraction(0),) * p.nvars: p}, p.nvars)

    @classmethod
    def exponential(cls, a: Sequence, coeff: Polynomial | None = None) -> "ExpPolyFunction":
        a = tuple(Fraction(x) if isinstance(x, (int, Fraction)) else x for x in a)
        n = len(a)
        coeff = Polynomial.constant(1, _zring(n)) if coeff is None else coeff
        return cls({a: coeff}, n)

    @classmethod
    def zero(cls, n: int) -> "ExpPolyFunction":
        return cls({}, n)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ExpPolyFunction") -> "ExpPolyFunction":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        terms = dict(self.terms)
        for a, p in other.terms.items():
            terms[a] = terms[a] + p if a in terms else p
        return ExpPolyFunction(terms, self.n)

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar) -> "ExpPolyFunction":
        if isinstance(scalar, ExpPolyFunction):
            terms: dict = {}
            for (a, p), (b, q) in itertools.product(self.terms.items(), scalar.terms.items()):
                c = tuple(x + y for x, y in zip(a, b))
                terms[c] = terms[c] + p * q if c in terms else p * q
            return ExpPolyFunction(terms, self.n)
        return ExpPolyFunction({a: p * scalar for a, p in self.terms.items()}, self.n)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, ExpPolyFunction) and (self - other).is_zero()

    def __hash__(self):
        return hash((self.n, frozenset(self.terms)))

    def diff(self, i: int, times: int = 1) -> "ExpPolyFunction":
        """Partial derivative: d/dz_i (p e^{a.z}) = (dp/dz_i + a_i p) e^{a.z}."""
        if not 0 <= i < self.n:
            raise IndexError(f"variable index {i} out of range")
        out = self
        for _ in range(times):
            out = ExpPolyFunction({a: p.diff(i) + p * a[i] for a, p in out.terms.items()}, self.n)
        return out

    def apply(self, g: Polynomial) -> "ExpPolyFunction":
        """``g(d/dz) . self`` for a polynomial g in n variables (names ignored)."""
        if g.nvars != self.n:
            raise ValueError(f"operator has {g.nvars} variables, function has {self.n}")
        out = ExpPolyFunction.zero(self.n)
        for alpha, c in g.terms.items():
            term = self
            for i, k in enumerate(alpha):
                if k:
                    term = term.diff(i, k)
            out = out + term * c
        return out

    def compose_linear(self, A: Sequence[Sequence]) -> "ExpPolyFunction":
        """``w -> self(A w)``; A has one row per current variable."""
        if len(A) != self.n:
            raise ValueError("A must have one row per variable")
        m = len(A[0])
        ring = _zring(m)
        terms = {}
        for a, p in self.terms.items():
            b = tuple(sum((a[i] * A[i][j] for i in range(self.n)), Fraction(0) * 0) for j in range(m))
            q = substitute_linear(p, A, ring=ring)
            terms[b] = terms[b] + q if b in terms else q
        return ExpPolyFunction(terms, m)

    def __call__(self, z: Sequence) -> complex:
        z = [complex(x) for x in z]
        return sum(complex(evaluate(p, z)) * np.exp(sum(complex(x) * y for x, y in zip(a, z)))
                   for a, p in self.terms.items()) if self.terms else 0j

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for a, p in sorted(self.terms.items(), key=lambda t: str(t[0])):
            if all(x == 0 for x in a):
                parts.append(f"({p})")
            else:
                expo = "+".join(f"{x}*z{i + 1}" for i, x in enumerate(a) if x != 0)
                parts.append(f"({p})*exp({expo})")
        return " + ".join(parts)


def as_function(f, n: int | None = None) -> ExpPolyFunction:
    if isinstance(f, ExpPolyFunction):
        return f
    if isinstance(f, Polynomial):
        return ExpPolyFunction.polynomial(f)
    if n is None:
        raise TypeError("cannot convert to ExpPolyFunction")
    return ExpPolyFunction.polynomial(Polynomial.constant(f, _zring(n)))


# differential operators


@dataclass(frozen=True)
class DiffOp:
    """Weyl-algebra element ``sum_alpha c_alpha(x) d^alpha`` in normal order."""

    terms: Mapping[tuple[int, ...], Polynomial]
    n: int

    def __post_init__(self):
        clean = {}
        for alpha, c in self.terms.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.n or any(a < 0 for a in alpha):
                raise ValueError(f"bad partial exponent {alpha}")
            if c.nvars != self.n:
                raise ValueError("coefficient ring does not match n")
            if not c.is_zero():
                clean[alpha] = clean[alpha] + c if alpha in clean else c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def identity(cls, n: int) -> "DiffOp":
        return cls({(0,) * n: Polynomial.constant(1, n)}, n)

    @classmethod
    def partial(cls, alpha: Sequence[int], coeff: Polynomial | None = None) -> "DiffOp":
        n = len(alpha)
        return cls({tuple(alpha): coeff if coeff is not None else Polynomial.constant(1, n)}, n)

    @classmethod
    def from_multiplier(cls, B: Polynomial) -> "DiffOp":
        """Read ``B(x, z)`` (ring of 2n variables, x first) as ``B(x, d_x)``."""
        if B.nvars % 2:
            raise ValueError("multiplier ring must hold x and z variables")
        n = B.nvars // 2
        xring = default_ring(n)
        terms: dict = {}
        for e, c in B.terms.items():
            mono = Polynomial({e[:n]: c}, xring)
            terms[e[n:]] = terms[e[n:]] + mono if e[n:] in terms else mono
        return cls(terms, n)

    def __add__(self, other: "DiffOp") -> "DiffOp":
        terms = dict(self.terms)
        for a, c in other.terms.items():
            terms[a] = terms[a] + c if a in terms else c
        return DiffOp(terms, self.n)

    def to_json(self) -> list[dict]:
        return [{"coeff": str(c), "partial": list(a)} for a, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, items: Iterable[Mapping], n: int) -> "DiffOp":
        ring = default_ring(n)
        return cls({tuple(it["partial"]): parse(str(it["coeff"]), ring) for it in items}, n)


def apply_diffop(D: DiffOp, f: Polynomial) -> Polynomial:
    """``D . f``: differentiate first, then multiply by the x-coefficient."""
    if f.nvars != D.n:
        raise ValueError(f"operator acts on {D.n} variables, polynomial has {f.nvars}")
    out = Polynomial.zero(f.ring, f.kind)
    for alpha, c in D.terms.items():
        out = out + c.with_ring(f.ring) * _apply_partials(f, alpha)
    return out


@dataclass(frozen=True)
class LinearPrime:
    """Prime ideal generated by the coordinates in ``vanishing`` (empty = zero ideal)."""

    vanishing: frozenset[int]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "vanishing", frozenset(int(i) for i in self.vanishing))
        if any(not 0 <= i < self.n for i in self.vanishing):
            raise ValueError("variable index out of range")

    def contains(self, f: Polynomial) -> bool:
        """f lies in the prime iff it vanishes identically after zeroing those coordinates."""
        if f.nvars != self.n:
            raise ValueError("ring size mismatch")
        return all(any(e[i] for i in self.vanishing) for e in f.terms)

    def generators(self) -> list[Polynomial]:
        return [Polynomial.variable(i, self.n) for i in sorted(self.vanishing)]


def membership(Q_ops: Sequence[tuple[DiffOp, LinearPrime]], f: Polynomial) -> bool:
    """Noetherian-operator membership test: every ``B . f`` must lie in its prime."""
    return all(P.contains(apply_diffop(D, f)) for D, P in Q_ops)


# exponential solutions and modules


def is_exponential_solution(I, a: Sequence, tol: float = 1e-10) -> bool:
    """exp(a . z) solves the PDE of I iff every generator vanishes at a."""
    gens = list(I)
    if any(g.nvars != len(a) for g in gens):
        raise ValueError("point length does not match the ring")
    exact = all(isinstance(x, (int, Fraction)) for x in a) and all(g.is_exact for g in gens)
    if exact:
        return all(evaluate(g, [Fraction(x) for x in a]) == 0 for g in gens)
    return all(abs(complex(evaluate(g, [complex(x) for x in a]))) < tol for g in gens)


def is_ideal_solution(I, phi: ExpPolyFunction) -> bool:
    return all(phi.apply(g).is_zero() for g in I)


@dataclass(frozen=True)
class PDEModule:
    """Submodule of R^k given by generator vectors of polynomials in n variables."""

    generators: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self):
        gens = tuple(tuple(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValueError("module needs at least one generator")
        k = len(gens[0])
        n = gens[0][0].nvars
        if any(len(g) != k or any(p.nvars != n for p in g) for g in gens):
            raise ValueError("generators must share length k and ring")

    @property
    def k(self) -> int:
        return len(self.generators[0])

    @property
    def n(self) -> int:
        return self.generators[0][0].nvars

    @classmethod
    def from_json(cls, rows: Sequence[Sequence[str]], n: int) -> "PDEModule":
        ring = default_ring(n)
        return cls(tuple(tuple(parse(s, ring) for s in row) for row in rows))

    def to_json(self) -> list[list[str]]:
        return [[str(p) for p in g] for g in self.generators]


def apply_module_generator(g: Sequence[Polynomial], phi: Sequence[ExpPolyFunction]) -> ExpPolyFunction:
    """``sum_j g_j(d/dz) . phi_j``."""
    if len(g) != len(phi):
        raise ValueError(f"generator has length {len(g)}, function has {len(phi)} components")
    n = g[0].nvars
    out = ExpPolyFunction.zero(n)
    for gj, fj in zip(g, phi):
        if not gj.is_zero():
            out = out + as_function(fj, n).apply(gj)
    return out


def is_module_solution(M: PDEModule, phi: Sequence) -> bool:
    phi = [as_function(f, M.n) for f in phi]
    return all(apply_module_generator(g, phi).is_zero() for g in M.generators)


def multiplier_solution(B: Polynomial, a: Sequence) -> ExpPolyFunction:
    """``B(a, z) exp(a . z)`` for a Noetherian multiplier B in x1..xn, z1..zn."""
    n = len(a)
    if B.nvars != 2 * n:
        raise ValueError("multiplier must live in 2n variables")
    ring = _zring(n)
    A = [[Fraction(0)] * n for _ in range(n)] + [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    b = [Fraction(x) for x in a] + [Fraction(0)] * n
    return ExpPolyFunction.exponential(a, substitute_linear(B, A, b, ring))


# the three-variable example


def question_ideal() -> PolySystem:
    """Generators x1^2, x2^2, x1*x3 - x2*x3^2 of the running three-variable example."""
    return PolySystem(tuple(parse(s, 3) for s in ("x1^2", "x2^2", "x1*x3 - x2*x3^2")))


def question_primary_ops() -> list[tuple[DiffOp, LinearPrime]]:
    """Noetherian operators for the intersection of <x1^2, x2^2, x1 - x2 x3> and <x1^2, x2^2, x3>.

    Two operators along the x3-axis and two at the origin: f and d2 f + x3 d1 f on
    the axis, d1 d2 f and d1 f at the origin (arithmetic multiplicity four).
    """
    axis = LinearPrime(frozenset({0, 1}), 3)
    origin = LinearPrime(frozenset({0, 1, 2}), 3)
    x3 = Polynomial.variable(2, 3)
    twist = DiffOp({(1, 0, 0): x3, (0, 1, 0): Polynomial.constant(1, 3)}, 3)
    return [
        (DiffOp.identity(3), axis),
        (twist, axis),
        (DiffOp.partial((1, 1, 0)), origin),
        (DiffOp.partial((1, 0, 0)), origin),
    ]


def first_primary_ops() -> list[tuple[DiffOp, LinearPrime]]:
    """Operators 1 and x3 d1 + d2 for Q = <x1^2, x2^2, x1 - x2 x3>."""
    return question_primary_ops()[:2]


def havetheform(xi, psi, alpha, beta) -> ExpPolyFunction:
    """xi(z3) + z2 psi(z3) + z1 psi'(z3) + alpha z1 z2 + beta z1.

    ``xi`` and ``psi`` are univariate polynomials or ExpPolyFunctions in one variable.
    """
    xi = as_function(xi, 1)
    psi = as_function(psi, 1)
    if xi.n != 1 or psi.n != 1:
        raise ValueError("xi and psi must be univariate")
    lift = [[0, 0, 1]]
    ring = _zring(3)
    z1, z2, _ = Polynomial.gens(ring)
    out = xi.compose_linear(lift)
    out = out + psi.compose_linear(lift) * ExpPolyFunction.polynomial(z2)
    out = out + psi.diff(0).compose_linear(lift) * ExpPolyFunction.polynomial(z1)
    out = out + ExpPolyFunction.polynomial(z1 * z2 * Fraction(alpha) + z1 * Fraction(beta))
    return out


def verify_havetheform(xi, psi, alpha, beta) -> bool:
    return is_ideal_solution(question_ideal(), havetheform(xi, psi, alpha, beta))


# Hankel wave solutions


def hankel(u: Sequence) -> list[list[Fraction]]:
    """4x4 Hankel matrix with entries u_{i+j-1}."""
    if len(u) != 7:
        raise ValueError(f"need 7 entries, got {len(u)}")
    u = [Fraction(x) for x in u]
    return [[u[i + j] for j in range(4)] for i in range(4)]


def hankel_rank(u: Sequence) -> int:
    return rank(hankel(u))


def hankel_kernel(u: Sequence) -> list[list[Fraction]]:
    return nullspace(hankel(u))


def hankel_module() -> PDEModule:
    """Four shifted copies of (x1, x2, x3, x4) inside R^7."""
    xs = Polynomial.gens(default_ring(4))
    zero = Polynomial.zero(4)
    rows = []
    for s in range(4):
        row = [zero] * 7
        row[s : s + 4] = xs
        rows.append(tuple(row))
    return PDEModule(tuple(rows))


def build_wave_solution(u: Sequence, psi: Polynomial, kernel: Sequence[Sequence] | None = None):
    """``psi(c_1 . z, ..., c_r . z) * u`` for a basis c_1..c_r of ker H(u).

    ``kernel`` may be supplied to pick a particular basis; it is checked exactly.
    """
    H = hankel(u)
    if kernel is None:
        kernel = nullspace(H)
    kernel = [[Fraction(x) for x in c] for c in kernel]
    if not kernel:
        raise ValueError("H(u) has full rank; there are no wave solutions")
    if any(len(c) != 4 or any(matvec(H, c)) for c in kernel):
        raise ValueError("supplied vectors are not in the kernel of H(u)")
    if rank(kernel) != len(kernel):
        raise ValueError("supplied kernel vectors are dependent")
    if psi.nvars != len(kernel):
        raise ValueError(f"psi must have {len(kernel)} variables (kernel dimension)")
    # psi(C z) with C having the kernel vectors as rows
    base = ExpPolyFunction.polynomial(psi).compose_linear(kernel)
    return tuple(base * Fraction(x) for x in u)


NOETHERIAN_MULTIPLIERS = (
    ("x2^4 - 3*x1*x2^2*x3 + x1^2*x3^2 + 2*x1^2*x2*x4", "2*x1^2*x2*x3 - x1*x2^3 - x1^3*x4",
     "x1^2*x2^2 - x1^3*x3", "-x1^3*x2", "x1^4", "0", "0"),
    ("x2^3*x3 - 2*x1*x2*x3^2 - x1*x2^2*x4 + 2*x1^2*x3*x4", "x1^2*x3^2 - x1*x2^2*x3 + x1^2*x2*x4",
     "x1^2*x2*x3 - x1^3*x4", "-x1^3*x3", "0", "x1^4", "0"),
    ("x2^3*x4 - 2*x1*x2*x3*x4 + x1^2*x4^2", "-x1*x2^2*x4 + x1^2*x3*x4", "x1^2*x2*x4", "-x1^3*x4",
     "0", "0", "x1^4"),
)


def noetherian_multipliers() -> list[tuple[Polynomial, ...]]:
    ring = default_ring(4)
    return [tuple(parse(s, ring) for s in row) for row in NOETHERIAN_MULTIPLIERS]


def is_syzygy(M: PDEModule, row: Sequence[Polynomial]) -> bool:
    """``sum_j g_j * row_j == 0`` for every generator g (exact)."""
    if len(row) != M.k:
        raise ValueError("length mismatch")
    for g in M.generators:
        s = Polynomial.zero(g[0].ring)
        for a, b in zip(g, row):
            s = s + a * b
        if not s.is_zero():
            return False
    return True


def syzygy_solution(row: Sequence[Polynomial], f) -> tuple[ExpPolyFunction, ...]:
    """``phi_j = row_j(d/dz) . f`` for a scalar function f."""
    f = as_function(f)
    return tuple(f.apply(b) for b in row)
