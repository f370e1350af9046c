"""Closed-form counts of complex critical points (ED, ML and polar degrees).

All arithmetic is on Python integers, so factorials and large sums are exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

UNKNOWN = None

GAUSSIAN_N4 = {
    # k: (ML degree, reciprocal ML degree) for a generic LSSM in Sym^2(R^4)
    2: (3, 5),
    3: (9, 19),
    4: (17, 45),
    5: (21, 71),
    6: (21, 81),
    7: (17, 63),
    8: (9, 29),
    9: (3, 7),
}

CEGM_KNOWN = {
    (3, 5): 2,
    (3, 6): 26,
    (3, 7): 1272,
    (3, 8): 188112,
    (3, 9): 74570400,
    (4, 8): 5211816,
}


def _check_sorted(degrees: Sequence[int]) -> list[int]:
    degrees = [int(d) for d in degrees]
    if any(d < 1 for d in degrees):
        raise ValueError("degrees must be positive")
    if any(a < b for a, b in zip(degrees, degrees[1:])):
        raise ValueError(f"degrees must be sorted in decreasing order, got {degrees}")
    return degrees


def _bounded_sum(bases: Sequence[int], budget: int) -> int:
    """Sum of prod(b_j^{i_j}) over all exponent vectors with sum(i) <= budget."""
    total = 0
    for exps in itertools.product(range(budget + 1), repeat=len(bases)):
        if sum(exps) <= budget:
            total += math.prod(b**i for b, i in zip(bases, exps))
    return total


def ed_degree_ci(n: int, c: int, degrees: Sequence[int]) -> int:
    """ED degree of a generic complete intersection of codimension c in n-space.

    ``degrees`` lists d_1 >= ... >= d_c.  For special varieties this is an upper bound.
    """
    degrees = _check_sorted(degrees)
    if len(degrees) != c or not 1 <= c <= n:
        raise ValueError(f"need c = len(degrees) with 1 <= c <= n, got n={n}, c={c}, degrees={degrees}")
    return math.prod(degrees) * _bounded_sum([d - 1 for d in degrees], n - c)


def ml_degree_ci(n: int, c: int, degrees: Sequence[int]) -> int:
    """ML degree of a generic complete intersection of codimension c in the simplex of dimension n."""
    degrees = _check_sorted(degrees)
    if len(degrees) != c or not 1 <= c <= n:
        raise ValueError(f"need c = len(degrees) with 1 <= c <= n, got n={n}, c={c}, degrees={degrees}")
    return math.prod(degrees) * _bounded_sum(degrees, n - c)


def ed_degree_curve(d: int, g: int) -> int:
    """ED degree of a general smooth curve of degree d and genus g."""
    if d < 1 or g < 0:
        raise ValueError("need d >= 1 and g >= 0")
    return 3 * d + 2 * g - 2


def space_curve_degree_genus(d1: int, d2: int) -> tuple[int, int]:
    """Degree and genus of a general complete-intersection curve in 3-space."""
    g = Fraction(d1 * d1 * d2, 2) + Fraction(d1 * d2 * d2, 2) - 2 * d1 * d2 + 1
    assert g.denominator == 1
    return d1 * d2, int(g)


def polar_degrees_surface(d: int) -> tuple[int, int, int]:
    """Polar degrees of a general surface of degree d in 3-space."""
    if d < 2:
        raise ValueError("need d >= 2")
    return d * (d - 1) ** 2, d * (d - 1), d


def gaussian_ml_degrees_n4(k: int) -> tuple[int, int]:
    """(ML degree, reciprocal ML degree) of a generic k-dimensional LSSM of 4x4 matrices."""
    if k not in GAUSSIAN_N4:
        raise ValueError(f"k must be in 2..9, got {k}")
    return GAUSSIAN_N4[k]


def cegm_ml_degree(k: int, m: int) -> int | None:
    """ML degree of the CEGM model X(k, m), or ``None`` when no value is known."""
    if not 2 <= k <= m - 2:
        raise ValueError(f"need 2 <= k <= m-2, got k={k}, m={m}")
    k = min(k, m - k)
    if k == 2:
        return math.factorial(m - 3)
    return CEGM_KNOWN.get((k, m), UNKNOWN)


@dataclass(frozen=True)
class DegreeQuery:
    family: str
    params: dict = field(default_factory=dict)


FAMILIES = ("ed-ci", "ed-curve", "ed-space-curve", "ed-surface-polar", "ml-ci", "ml-gaussian-n4", "cegm")


def evaluate_query(q: DegreeQuery) -> tuple[object, str]:
    """Evaluate a degree query; returns (value, human-readable formula)."""
    p = q.params
    if q.family == "ed-ci":
        degs = sorted(p["degrees"], reverse=True)
        return ed_degree_ci(p["n"], p["c"], degs), "d1...dc * sum_{|i|<=n-c} prod (dj-1)^ij"
    if q.family == "ed-curve":
        return ed_degree_curve(p["d"], p["g"]), "3d + 2g - 2"
    if q.family == "ed-space-curve":
        d1, d2 = sorted(p["degrees"], reverse=True)
        d, g = space_curve_degree_genus(d1, d2)
        return ed_degree_curve(d, g), f"3d + 2g - 2 with d={d}, g={g}"
    if q.family == "ed-surface-polar":
        return polar_degrees_surface(p["d"]), "(d(d-1)^2, d(d-1), d)"
    if q.family == "ml-ci":
        degs = sorted(p["degrees"], reverse=True)
        return ml_degree_ci(p["n"], p["c"], degs), "d1...dc * sum_{|i|<=n-c} prod dj^ij"
    if q.family == "ml-gaussian-n4":
        return gaussian_ml_degrees_n4(p["k"]), "table for generic LSSM, n=4"
    if q.family == "cegm":
        k, m = p["k"], p["m"]
        value = cegm_ml_degree(k, m)
        formula = "(m-3)!" if min(k, m - k) == 2 else "table of known values (k <-> m-k duality)"
        return ("unknown" if value is None else value), formula
    raise ValueError(f"unknown degree family {q.family!r}")
