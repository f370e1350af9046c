"""Sparse multivariate polynomials with exact-rational or complex-float coefficients.

A polynomial is an immutable map from exponent tuples to nonzero coefficients
over a fixed ring (an ordered tuple of variable names).  Exact polynomials hold
:class:`fractions.Fraction` coefficients; float polynomials hold ``complex``.
The two kinds are never mixed implicitly: use :meth:`Polynomial.to_float`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]

EXACT = "exact"
FLOAT = "float"


class RingMismatch(ValueError):
    pass


class PolyParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text[:pos]}<here>{text[pos:]}")
        self.text = text
        self.pos = pos


@lru_cache(maxsize=None)
def default_ring(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1))


def _as_ring(ring) -> tuple[str, ...]:
    if isinstance(ring, int):
        return default_ring(ring)
    return tuple(ring)


def _is_exact(c) -> bool:
    return isinstance(c, (int, Rational)) and not isinstance(c, bool) or isinstance(c, Fraction)


def _coerce(c, kind: str):
    if kind == EXACT:
        return Fraction(c)
    return complex(c)


def grevlex_key(e: Exponent):
    """Sort key; larger key means larger monomial in graded reverse lex order."""
    return (sum(e), tuple(-a for a in reversed(e)))


class Polynomial:
    """Immutable sparse polynomial.

    ``terms`` maps exponent tuples (length ``len(ring)``) to nonzero coefficients.
    """

    __slots__ = ("ring", "terms", "kind", "_hash")

    def __init__(self, terms: Mapping[Exponent, object] | None = None, ring=1, kind: str | None = None):
        ring = _as_ring(ring)
        terms = dict(terms or {})
        if kind is None:
            kind = EXACT if all(_is_exact(c) for c in terms.values()) else FLOAT
        if kind not in (EXACT, FLOAT):
            raise ValueError(f"unknown coefficient kind {kind!r}")
        clean = {}
        n = len(ring)
        for e, c in terms.items():
            e = tuple(int(a) for a in e)
            if len(e) != n:
                raise RingMismatch(f"exponent {e} does not fit ring of size {n}")
            if any(a < 0 for a in e):
                raise ValueError(f"negative exponent {e}")
            if kind == EXACT and not _is_exact(c):
                raise TypeError(f"non-rational coefficient {c!r} in exact polynomial")
            c = _coerce(c, kind)
            if c != 0:
                clean[e] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def _raw(cls, terms: dict, ring: tuple[str, ...], kind: str) -> "Polynomial":
        # trusted fast path: exponents valid, coefficients already of the right kind
        self = object.__new__(cls)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", {e: c for e, c in terms.items() if c != 0})
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_hash", None)
        return self

    # construction helpers

    @classmethod
    def constant(cls, c, ring=1, kind: str | None = None) -> "Polynomial":
        ring = _as_ring(ring)
        return cls({(0,) * len(ring): c}, ring, kind)

    @classmethod
    def zero(cls, ring=1, kind: str = EXACT) -> "Polynomial":
        return cls({}, ring, kind)

    @classmethod
    def variable(cls, i: int, ring=1, kind: str = EXACT) -> "Polynomial":
        ring = _as_ring(ring)
        e = [0] * len(ring)
        e[i] = 1
        return cls({tuple(e): 1}, ring, kind)

    @classmethod
    def gens(cls, ring, kind: str = EXACT) -> list["Polynomial"]:
        ring = _as_ring(ring)
        return [cls.variable(i, ring, kind) for i in range(len(ring))]

    @classmethod
    def linear(cls, coeffs: Sequence, const=0, ring=None) -> "Polynomial":
        ring = _as_ring(len(coeffs) if ring is None else ring)
        n = len(ring)
        terms = {}
        for i, a in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = a
        terms[(0,) * n] = const
        return cls(terms, ring)

    # basic properties

    @property
    def nvars(self) -> int:
        return len(self.ring)

    @property
    def is_exact(self) -> bool:
        return self.kind == EXACT

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, _coerce(0, self.kind))

    def coefficient(self, e: Exponent):
        return self.terms.get(tuple(e), _coerce(0, self.kind))

    def sorted_terms(self) -> list[tuple[Exponent, object]]:
        """Terms in decreasing graded reverse lexicographic order."""
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def leading_term(self) -> tuple[Exponent, object]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def variables_used(self) -> set[int]:
        return {i for e in self.terms for i, a in enumerate(e) if a}

    # conversions

    def to_float(self) -> "Polynomial":
        if self.kind == FLOAT:
            return self
        return Polynomial({e: complex(float(c)) for e, c in self.terms.items()}, self.ring, FLOAT)

    def with_ring(self, ring, index_map: Sequence[int] | None = None) -> "Polynomial":
        """Embed into another ring; variable ``i`` goes to position ``index_map[i]``."""
        ring = _as_ring(ring)
        if index_map is None:
            index_map = [ring.index(v) for v in self.ring]
        n = len(ring)
        terms = {}
        for e, c in self.terms.items():
            new = [0] * n
            for i, a in enumerate(e):
                if a:
                    new[index_map[i]] += a
            terms[tuple(new)] = c
        return Polynomial(terms, ring, self.kind)

    def map_coefficients(self, fn) -> "Polynomial":
        return Polynomial({e: fn(c) for e, c in self.terms.items()}, self.ring)

    # arithmetic

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"ring {other.ring} differs from {self.ring}")
            if other.kind != self.kind:
                raise TypeError("cannot mix exact and float polynomials; convert with to_float()")
            return other
        if self.kind == EXACT and not _is_exact(other):
            raise TypeError(f"non-rational scalar {other!r} with exact polynomial")
        return Polynomial.constant(other, self.ring, self.kind)

    def __add__(self, other):
        other = self._lift(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial._raw(terms, self.ring, self.kind)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({e: -c for e, c in self.terms.items()}, self.ring, self.kind)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            other = self._lift(other)
            c0 = other.constant_term()
            return Polynomial._raw({e: c * c0 for e, c in self.terms.items()}, self.ring, self.kind)
        other = self._lift(other)
        terms: dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial._raw(terms, self.ring, self.kind)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, Polynomial):
            return exact_div(self, scalar)
        if self.kind == EXACT:
            scalar = Fraction(scalar)
        return Polynomial({e: c / scalar for e, c in self.terms.items()}, self.ring, self.kind)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1, self.ring, self.kind)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self == self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # calculus and evaluation

    def diff(self, i: int, times: int = 1) -> "Polynomial":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for ring of size {self.nvars}")
        terms = {}
        for e, c in self.terms.items():
            a = e[i]
            if a < times:
                continue
            mult = 1
            for j in range(times):
                mult *= a - j
            new = list(e)
            new[i] = a - times
            terms[tuple(new)] = c * mult
        return Polynomial._raw(terms, self.ring, self.kind)

    def evaluate(self, point: Sequence):
        return evaluate(self, point)

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return evaluate(self, point)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Compose: replace variable ``i`` by ``images[i]`` (all in one target ring)."""
        if len(images) != self.nvars:
            raise RingMismatch(f"need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        ring = images[0].ring
        kind = images[0].kind
        powers: list[list[Polynomial]] = [[Polynomial.constant(1, ring, kind)] for _ in images]
        result = Polynomial.zero(ring, kind)
        for e, c in self.terms.items():
            term = Polynomial.constant(c if kind == self.kind else complex(c), ring, kind)
            for i, a in enumerate(e):
                if a == 0:
                    continue
                pw = powers[i]
                while len(pw) <= a:
                    pw.append(pw[-1] * images[i])
                term = term * pw[a]
            result = result + term
        return result

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({format_poly(self)!r}, ring={self.ring})"


def evaluate(f: Polynomial, point: Sequence):
    """Evaluate ``f`` at ``point``.

    Exact polynomials at rational points give an exact :class:`Fraction`;
    otherwise coefficients are rounded to nearest double and the result is complex.
    """
    if len(point) != f.nvars:
        raise RingMismatch(f"point has length {len(point)}, ring has {f.nvars} variables")
    exact = f.kind == EXACT and all(_is_exact(p) for p in point)
    if exact:
        pt = [Fraction(p) for p in point]
        total = Fraction(0)
    else:
        pt = [complex(p) for p in point]
        total = 0j
    maxdeg = [0] * f.nvars
    for e in f.terms:
        for i, a in enumerate(e):
            if a > maxdeg[i]:
                maxdeg[i] = a
    powers = []
    for i, d in enumerate(maxdeg):
        pw = [pt[i] ** 0]
        for _ in range(d):
            pw.append(pw[-1] * pt[i])
        powers.append(pw)
    for e, c in f.terms.items():
        term = c if exact else complex(c)
        for i, a in enumerate(e):
            if a:
                term = term * powers[i][a]
        total += term
    return total


def differentiate(f: Polynomial, var: int) -> Polynomial:
    return f.diff(var)


def exact_div(a: Polynomial, b: Polynomial) -> Polynomial:
    """Quotient ``a / b``; raises ``ValueError`` if ``b`` does not divide ``a``."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    lb, cb = b.leading_term()
    q: dict[Exponent, object] = {}
    r = a
    while not r.is_zero():
        lr, cr = r.leading_term()
        if any(x < y for x, y in zip(lr, lb)):
            raise ValueError("polynomial division is not exact")
        e = tuple(x - y for x, y in zip(lr, lb))
        c = cr / cb
        q[e] = c
        r = r - Polynomial({e: c}, a.ring, a.kind) * b
    return Polynomial(q, a.ring, a.kind)


def random_polynomial(nvars: int, degree: int, rng, low: int = -9, high: int = 9, ring=None) -> Polynomial:
    """Dense polynomial of the given total degree with seeded random integer coefficients.

    Coefficients of top-degree monomials are drawn nonzero so the degree is exact.
    """
    ring = _as_ring(nvars if ring is None else ring)
    terms = {}
    for e in monomials_up_to(nvars, degree):
        c = int(rng.integers(low, high + 1))
        if sum(e) == degree:
            while c == 0:
                c = int(rng.integers(low, high + 1))
        terms[e] = c
    return Polynomial(terms, ring)


def monomials_up_to(nvars: int, degree: int) -> list[Exponent]:
    out = []
    for d in range(degree + 1):
        for combo in itertools.combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


# systems and matrices


@dataclass(frozen=True)
class PolySystem:
    polys: tuple[Polynomial, ...]

    def __post_init__(self):
        polys = tuple(self.polys)
        object.__setattr__(self, "polys", polys)
        if not polys:
            raise ValueError("PolySystem must be nonempty")
        ring = polys[0].ring
        if any(p.ring != ring for p in polys):
            raise RingMismatch("all polynomials of a system must share one ring")

    @property
    def ring(self) -> tuple[str, ...]:
        return self.polys[0].ring

    @property
    def nvars(self) -> int:
        return len(self.ring)

    def degrees(self) -> list[int]:
        return [p.degree() for p in self.polys]

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def evaluate(self, point) -> list:
        return [evaluate(p, point) for p in self.polys]

    def to_float(self) -> "PolySystem":
        return PolySystem(tuple(p.to_float() for p in self.polys))


@dataclass(frozen=True)
class PolyMatrix:
    rows: tuple[tuple[Polynomial, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        if not rows or not rows[0]:
            raise ValueError("PolyMatrix must be nonempty")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("PolyMatrix rows must have equal length")
        ring = rows[0][0].ring
        if any(p.ring != ring for r in rows for p in r):
            raise RingMismatch("all entries of a PolyMatrix must share one ring")

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def ring(self):
        return self.rows[0][0].ring

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix(tuple(tuple(self.rows[i][j] for j in cols) for i in rows))

    def evaluate(self, point):
        return [[evaluate(p, point) for p in r] for r in self.rows]

    @classmethod
    def identity(cls, n: int, ring=1) -> "PolyMatrix":
        one = Polynomial.constant(1, ring)
        zero = Polynomial.zero(ring)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))


def jacobian(F: PolySystem | Sequence[Polynomial]) -> PolyMatrix:
    polys = list(F)
    n = polys[0].nvars
    return PolyMatrix(tuple(tuple(f.diff(j) for j in range(n)) for f in polys))


def _det_laplace(rows: list[list[Polynomial]]) -> Polynomial:
    n = len(rows)
    ring, kind = rows[0][0].ring, rows[0][0].kind
    cache: dict[tuple[int, ...], Polynomial] = {}

    def minor(r: int, cols: tuple[int, ...]) -> Polynomial:
        # determinant of rows r.. restricted to cols
        if not cols:
            return Polynomial.constant(1, ring, kind)
        key = cols
        if key in cache:
            return cache[key]
        total = Polynomial.zero(ring, kind)
        for pos, j in enumerate(cols):
            entry = rows[r][j]
            if entry.is_zero():
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1 :])
            term = entry * sub
            total = total - term if pos % 2 else total + term
        cache[key] = total
        return total

    return minor(0, tuple(range(n)))


def _det_bareiss(rows: list[list[Polynomial]]) -> Polynomial:
    a = [list(r) for r in rows]
    n = len(a)
    ring, kind = a[0][0].ring, a[0][0].kind
    sign = 1
    prev = Polynomial.constant(1, ring, kind)
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return Polynomial.zero(ring, kind)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return d if sign > 0 else -d


def det(M: PolyMatrix | Sequence[Sequence[Polynomial]], method: str = "auto") -> Polynomial:
    """Determinant by cofactor expansion (size <= 4 or float entries) or Bareiss elimination."""
    if not isinstance(M, PolyMatrix):
        M = PolyMatrix(tuple(tuple(r) for r in M))
    r, c = M.shape
    if r != c:
        raise ValueError(f"determinant of non-square {r}x{c} matrix")
    rows = [list(row) for row in M.rows]
    if method == "auto":
        method = "laplace" if r <= 4 or M.rows[0][0].kind == FLOAT else "bareiss"
    if method == "laplace":
        return _det_laplace(rows)
    if method == "bareiss":
        if M.rows[0][0].kind != EXACT:
            raise ValueError("fraction-free elimination needs exact coefficients")
        return _det_bareiss(rows)
    raise ValueError(f"unknown method {method!r}")


def minors(M: PolyMatrix, size: int) -> PolySystem:
    """All ``size`` x ``size`` minors, ordered lexicographically by (row tuple, column tuple)."""
    r, c = M.shape
    if not 1 <= size <= min(r, c):
        raise ValueError(f"minor size {size} out of range for {r}x{c} matrix")
    out = []
    for rows in itertools.combinations(range(r), size):
        for cols in itertools.combinations(range(c), size):
            out.append(det(M.submatrix(rows, cols)))
    return PolySystem(tuple(out))


def substitute_linear(f: Polynomial, A: Sequence[Sequence], b: Sequence | None = None, ring=None) -> Polynomial:
    """Return ``f(A z + b)`` as a polynomial in the new variables ``z``.

    ``A`` has one row per old variable and one column per new variable.
    """
    if len(A) != f.nvars:
        raise RingMismatch(f"A has {len(A)} rows, polynomial has {f.nvars} variables")
    m = len(A[0]) if A else 0
    if any(len(row) != m for row in A):
        raise ValueError("A must be rectangular")
    if b is None:
        b = [0] * f.nvars
    if len(b) != f.nvars:
        raise RingMismatch("offset vector length does not match the ring")
    ring = _as_ring(m if ring is None else ring)
    if len(ring) != m:
        raise RingMismatch("target ring size does not match the columns of A")
    images = [Polynomial.linear(list(row), const, ring) for row, const in zip(A, b)]
    if f.kind == FLOAT:
        images = [p.to_float() for p in images]
    elif any(p.kind == FLOAT for p in images):
        f = f.to_float()
    return f.substitute(images)


# text format

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<cplx>\([^()]*\))"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<pow>\*\*|\^)"
    r"|(?P<op>[-+*/]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyParseError("unexpected character", text, pos)
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


def parse(text: str, ring=None) -> Polynomial:
    """Parse text such as ``"144*x1^4 - 225*x1^2 + 3/4"``.

    Without a ring, variables must be named ``x<i>`` and the ring is ``x1..xN``
    with ``N`` the largest index seen.  Parenthesised complex literals such as
    ``(1.5-2j)`` produce a float polynomial.
    """
    tokens = _tokenize(text)
    if ring is None:
        idx = []
        for k, v, p in tokens:
            if k == "name":
                m = re.fullmatch(r"x([1-9]\d*)", v)
                if not m:
                    raise PolyParseError(f"unknown variable {v!r} (no ring given)", text, p)
                idx.append(int(m.group(1)))
        ring = default_ring(max(idx, default=0))
    ring = _as_ring(ring)
    index = {v: i for i, v in enumerate(ring)}
    n = len(ring)
    pos = 0
    terms: dict[Exponent, object] = {}
    floaty = False

    def peek():
        return tokens[pos]

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def number(tok):
        nonlocal floaty
        kind, val, p = tok
        if kind == "num":
            return Fraction(val)
        if kind == "cplx":
            try:
                c = complex(val.replace(" ", ""))
            except ValueError:
                raise PolyParseError("bad complex literal", text, p) from None
            floaty = True
            return c
        raise PolyParseError("expected a number", text, p)

    def parse_int(tok):
        kind, val, p = tok
        if kind != "num" or not val.isdigit():
            raise PolyParseError("expected a nonnegative integer exponent", text, p)
        return int(val)

    def factor(coef, expo):
        kind, val, p = peek()
        if kind in ("num", "cplx"):
            take()
            return coef * number((kind, val, p)), expo
        if kind == "name":
            take()
            if val not in index:
                raise PolyParseError(f"unknown variable {val!r}", text, p)
            a = 1
            if peek()[0] == "pow":
                take()
                a = parse_int(take())
            expo[index[val]] += a
            return coef, expo
        raise PolyParseError("expected a number or variable", text, p)

    def term(sign):
        coef = Fraction(sign)
        expo = [0] * n
        coef, expo = factor(coef, expo)
        while peek()[0] == "op" and peek()[1] in "*/":
            _, op, p = take()
            if op == "*":
                coef, expo = factor(coef, expo)
            else:
                tok = take()
                d = number(tok)
                if d == 0:
                    raise PolyParseError("division by zero", text, tok[2])
                coef = coef / d
        return coef, tuple(expo)

    if peek()[0] == "end":
        raise PolyParseError("empty polynomial", text, 0)
    sign = 1
    first = True
    while True:
        kind, val, p = peek()
        if kind == "op" and val in "+-":
            take()
            sign = -1 if val == "-" else 1
        elif not first:
            raise PolyParseError("expected '+' or '-'", text, p)
        coef, e = term(sign)
        terms[e] = terms.get(e, 0) + coef
        first = False
        sign = 1
        if peek()[0] == "end":
            break
    if floaty:
        return Polynomial({e: complex(c) for e, c in terms.items()}, ring, FLOAT)
    return Polynomial(terms, ring, EXACT)


def _format_coef_exact(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_monomial(e: Exponent, ring) -> str:
    parts = []
    for i, a in enumerate(e):
        if a == 1:
            parts.append(ring[i])
        elif a > 1:
            parts.append(f"{ring[i]}^{a}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    if f.is_zero():
        return "0"
    out = []
    for e, c in f.sorted_terms():
        mono = _format_monomial(e, f.ring)
        if f.kind == FLOAT:
            body = repr(complex(c))
            if not body.startswith("("):
                body = f"({body})"
            s = body if not mono else f"{body}*{mono}"
            out.append(("+", s))
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            s = _format_coef_exact(mag)
        elif mag == 1:
            s = mono
        else:
            s = f"{_format_coef_exact(mag)}*{mono}"
        out.append((sign, s))
    first_sign, first = out[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, s in out[1:]:
        text += sign + s
    return text


def polys_from_strings(strings: Iterable[str], ring=None) -> PolySystem:
    return PolySystem(tuple(parse(s, ring) for s in strings))
