"""Total-degree homotopy continuation for square polynomial systems.

Paths are tracked in projective coordinates on a random affine chart, with an
Euler predictor and a Newton corrector.  All paths of a chunk advance together
as numpy batches; each path keeps its own ``t`` and step size.  Chunks are
fixed by path index, so any thread count yields bit-identical results.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .poly import FLOAT, Polynomial, PolySystem, evaluate

log = logging.getLogger(__name__)

CONVERGED = "converged"
DIVERGED = "diverged"
TRUNCATED = "truncated"
_RUNNING = "running"


@dataclass(frozen=True)
class TrackerConfig:
    initial_step: float = 0.05
    min_step: float = 1e-7
    corrector_tol: float = 1e-10
    max_corrector_iters: int = 3
    endpoint_tol: float = 1e-13
    dedup_tol: float = 1e-8
    reality_tol: float = 1e-8
    seed: int = 0
    divergence_norm: float = 1e8
    nonvanishing_tol: float = 1e-8
    residual_tol: float = 1e-8
    certificate_max: float = 0.25  # a double root contracts at ~0.5
    rank_tol: float = 1e-8
    max_steps: int = 20000
    chunk_size: int = 256
    salvage_t: float = 0.9999  # truncated paths past this t still hand their endpoint to Newton

    def __post_init__(self):
        tols = (self.initial_step, self.min_step, self.corrector_tol, self.endpoint_tol,
                self.dedup_tol, self.reality_tol, self.residual_tol)
        if any(not (x > 0) for x in tols):
            raise ValueError("tolerances and step sizes must be positive")
        if not self.min_step < self.initial_step:
            raise ValueError("min_step must be smaller than initial_step")


# compiled evaluation


class CompiledSystem:
    """Batched evaluator for a list of polynomials and their Jacobian.

    All distinct monomials of the polynomials and their partial derivatives are
    evaluated once per point; values and Jacobian are then dense products.
    """

    def __init__(self, polys: Sequence[Polynomial]):
        polys = [p.to_float() for p in polys]
        self.nvars = n = polys[0].nvars
        self.neq = len(polys)
        derivs = [[p.diff(j) for j in range(n)] for p in polys]
        monos: dict[tuple[int, ...], int] = {}
        for p in itertools.chain(polys, itertools.chain.from_iterable(derivs)):
            for e in p.terms:
                monos.setdefault(e, len(monos))
        if not monos:
            monos[(0,) * n] = 0
        self.exponents = np.array(list(monos), dtype=np.int64).reshape(len(monos), n)
        self.maxdeg = int(self.exponents.max(initial=0))
        M = len(monos)
        self.cf = np.zeros((M, self.neq), dtype=complex)
        self.cj = np.zeros((M, self.neq * n), dtype=complex)
        for i, p in enumerate(polys):
            for e, c in p.terms.items():
                self.cf[monos[e], i] = c
            for j, d in enumerate(derivs[i]):
                for e, c in d.terms.items():
                    self.cj[monos[e], i * n + j] = c
        self._active_vars = [j for j in range(n) if self.exponents[:, j].any()]

    def monomials(self, X: np.ndarray) -> np.ndarray:
        P = X.shape[0]
        V = np.ones((P, len(self.exponents)), dtype=complex)
        for j in self._active_vars:
            col = X[:, j]
            pw = np.empty((self.maxdeg + 1, P), dtype=complex)
            pw[0] = 1.0
            for d in range(1, self.maxdeg + 1):
                pw[d] = pw[d - 1] * col
            V *= pw[self.exponents[:, j]].T
        return V

    def values(self, X: np.ndarray) -> np.ndarray:
        return self.monomials(X) @ self.cf

    def residuals(self, X: np.ndarray) -> np.ndarray:
        """Per-equation |f_i(x)| / max(1, sum_a |c_a x^a|), a backward-error style residual."""
        V = self.monomials(X)
        scale = np.maximum(1.0, np.abs(V) @ np.abs(self.cf))
        return np.abs(V @ self.cf) / scale

    def values_and_jacobian(self, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        V = self.monomials(X)
        F = V @ self.cf
        J = (V @ self.cj).reshape(X.shape[0], self.neq, self.nvars)
        return F, J


def homogenize(f: Polynomial, degree: int | None = None) -> Polynomial:
    """Homogenize with a new leading variable ``x0``."""
    d = f.degree() if degree is None else degree
    ring = ("x0",) + tuple(f.ring)
    return Polynomial._raw({(d - sum(e),) + e: c for e, c in f.terms.items()}, ring, f.kind)


def normalize(f: Polynomial) -> Polynomial:
    """Scale so the largest coefficient has modulus one (float kind)."""
    f = f.to_float()
    if f.is_zero():
        return f
    s = max(abs(c) for c in f.terms.values())
    return Polynomial._raw({e: c / s for e, c in f.terms.items()}, f.ring, FLOAT)


def _solve(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched linear solve; singular members come back as NaN."""
    try:
        return np.linalg.solve(A, b[..., None])[..., 0]
    except np.linalg.LinAlgError:
        out = np.full(b.shape, np.nan, dtype=complex)
        for i in range(A.shape[0]):
            try:
                out[i] = np.linalg.solve(A[i], b[i])
            except np.linalg.LinAlgError:
                pass
        return out


# start system and homotopy


def start_system(degrees: Sequence[int], seed: int = 0):
    """Total-degree start system ``x_i^d_i - r_i`` with seeded unit-modulus ``r_i``.

    Returns ``(PolySystem, roots)`` where ``roots()`` yields all prod(d_i) start roots.
    """
    degrees = [int(d) for d in degrees]
    if any(d < 1 for d in degrees):
        raise ValueError("start system degrees must be >= 1")
    rng = np.random.default_rng(seed)
    r = np.exp(2j * np.pi * rng.random(len(degrees)))
    return _start_system_from(degrees, r)


def _start_system_from(degrees, r):
    n = len(degrees)
    polys = []
    for i, d in enumerate(degrees):
        e = [0] * n
        e[i] = d
        polys.append(Polynomial({tuple(e): 1.0 + 0j, (0,) * n: -complex(r[i])}, n, FLOAT))

    def roots() -> Iterator[np.ndarray]:
        bases = [complex(r[i]) ** (1.0 / d) for i, d in enumerate(degrees)]
        for ks in itertools.product(*(range(d) for d in degrees)):
            yield np.array([bases[i] * np.exp(2j * np.pi * k / degrees[i]) for i, k in enumerate(ks)])

    return PolySystem(tuple(polys)), roots


class Homotopy:
    """``H(X, t) = gamma (1 - t) G(X) + t F(X)`` on the chart ``a . X = 1``.

    ``X = (x0, x1, ..., xn)`` are homogeneous coordinates; ``F`` and ``G`` are the
    homogenized target and start systems.
    """

    def __init__(self, target: Sequence[Polynomial], seed: int = 0):
        target = [normalize(p) for p in target]
        self.n = n = target[0].nvars
        if len(target) != n:
            raise ValueError(f"system is not square: {len(target)} equations in {n} unknowns")
        self.target = target
        self.degrees = [max(p.degree(), 1) for p in target]
        rng = np.random.default_rng(seed)
        self.gamma = complex(np.exp(2j * np.pi * rng.random()))
        self.r = np.exp(2j * np.pi * rng.random(n))
        patch = rng.normal(size=n + 1) + 1j * rng.normal(size=n + 1)
        self.patch = patch / np.linalg.norm(patch)
        self.start, self._roots = _start_system_from(self.degrees, self.r)
        self.F = CompiledSystem([homogenize(p, d) for p, d in zip(target, self.degrees)])
        self.G = CompiledSystem([homogenize(p, d) for p, d in zip(self.start, self.degrees)])
        self.affine = CompiledSystem(target)

    @property
    def n_paths(self) -> int:
        return math.prod(self.degrees)

    def start_points(self) -> np.ndarray:
        pts = []
        for x in self._roots():
            X = np.concatenate([[1.0 + 0j], x])
            pts.append(X / (self.patch @ X))
        return np.array(pts, dtype=complex).reshape(-1, self.n + 1)

    def evaluate(self, X: np.ndarray, t: np.ndarray, need_t: bool = True):
        F, JF = self.F.values_and_jacobian(X)
        G, JG = self.G.values_and_jacobian(X)
        s = (self.gamma * (1.0 - t))[:, None]
        tt = t[:, None]
        P, N = X.shape
        H = np.empty((P, N), dtype=complex)
        H[:, :-1] = s * G + tt * F
        H[:, -1] = X @ self.patch - 1.0
        HX = np.empty((P, N, N), dtype=complex)
        HX[:, :-1, :] = s[:, :, None] * JG + tt[:, :, None] * JF
        HX[:, -1, :] = self.patch
        if not need_t:
            return H, HX
        Ht = np.zeros((P, N), dtype=complex)
        Ht[:, :-1] = F - self.gamma * G
        return H, HX, Ht

    def affine_norm(self, X: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.linalg.norm(X[:, 1:], axis=1) / np.abs(X[:, 0])


@dataclass
class PathResult:
    path_id: int
    status: str
    point: np.ndarray | None  # affine endpoint, when finite
    t: float
    steps: int


def _correct(hom: Homotopy, X: np.ndarray, t: np.ndarray, cfg: TrackerConfig):
    P = X.shape[0]
    done = np.zeros(P, dtype=bool)
    bad = np.zeros(P, dtype=bool)
    prev = np.full(P, np.inf)
    for _ in range(cfg.max_corrector_iters):
        idx = np.nonzero(~done & ~bad)[0]
        if idx.size == 0:
            break
        H, HX = hom.evaluate(X[idx], t[idx], need_t=False)
        d = _solve(HX, -H)
        nd = np.linalg.norm(d, axis=1)
        X[idx] += d
        nx = np.linalg.norm(X[idx], axis=1)
        finite = np.isfinite(nd) & np.isfinite(nx)
        bad[idx] = ~finite | (nd > prev[idx])
        done[idx] = finite & (nd <= cfg.corrector_tol * np.maximum(1.0, nx))
        prev[idx] = nd
    return done & ~bad, X


def _track_chunk(hom: Homotopy, X0: np.ndarray, cfg: TrackerConfig):
    P = X0.shape[0]
    X = X0.copy()
    t = np.zeros(P)
    dt = np.full(P, cfg.initial_step)
    streak = np.zeros(P, dtype=int)
    steps = np.zeros(P, dtype=int)
    status = np.full(P, _RUNNING, dtype=object)
    while True:
        act = np.nonzero(status == _RUNNING)[0]
        if act.size == 0:
            break
        Xa, ta = X[act], t[act]
        remaining = 1.0 - ta
        last = dt[act] >= remaining
        h = np.where(last, remaining, dt[act])
        _, HX, Ht = hom.evaluate(Xa, ta)
        v = _solve(HX, -Ht)
        t1 = np.where(last, 1.0, ta + h)
        ok, Xc = _correct(hom, Xa + h[:, None] * v, t1, cfg)
        ok &= np.isfinite(v).all(axis=1)
        steps[act] += 1

        acc = act[ok]
        X[acc] = Xc[ok]
        t[acc] = t1[ok]
        streak[acc] += 1
        grow = acc[streak[acc] >= 4]
        dt[grow] = np.minimum(dt[grow] * 1.5, cfg.initial_step)
        streak[grow] = 0

        rej = act[~ok]
        dt[rej] *= 0.5
        streak[rej] = 0
        status[rej[dt[rej] < cfg.min_step]] = TRUNCATED

        big = hom.affine_norm(X[acc]) > cfg.divergence_norm
        status[acc[big & (t[acc] > 0.99)]] = DIVERGED
        finished = acc[(t[acc] >= 1.0) & (status[acc] == _RUNNING)]
        status[finished] = CONVERGED
        status[act[(steps[act] >= cfg.max_steps) & (status[act] == _RUNNING)]] = TRUNCATED
    return X, t, status, steps


def track_all(hom: Homotopy, cfg: TrackerConfig, threads: int = 1) -> list[PathResult]:
    starts = hom.start_points()
    chunks = [starts[i : i + cfg.chunk_size] for i in range(0, len(starts), cfg.chunk_size)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outs = list(pool.map(lambda c: _track_chunk(hom, c, cfg), chunks))
    else:
        outs = [_track_chunk(hom, c, cfg) for c in chunks]
    results = []
    pid = 0
    for X, t, status, steps in outs:
        norms = hom.affine_norm(X)
        for i in range(X.shape[0]):
            st = status[i]
            if st == CONVERGED and not norms[i] <= cfg.divergence_norm:
                st = DIVERGED
            salvage = st == TRUNCATED and t[i] >= cfg.salvage_t and norms[i] <= cfg.divergence_norm
            pt = X[i, 1:] / X[i, 0] if st == CONVERGED or salvage else None
            results.append(PathResult(pid, st, pt, float(t[i]), int(steps[i])))
            pid += 1
    return results


def track(hom: Homotopy, root: np.ndarray, cfg: TrackerConfig | None = None) -> PathResult:
    """Track one path from an affine start root of ``hom.start``."""
    cfg = cfg or TrackerConfig()
    X = np.concatenate([[1.0 + 0j], np.asarray(root, dtype=complex)])
    X = (X / (hom.patch @ X))[None, :]
    Xe, t, status, steps = _track_chunk(hom, X, cfg)
    st = status[0]
    norm = hom.affine_norm(Xe)[0]
    if st == CONVERGED and not norm <= cfg.divergence_norm:
        st = DIVERGED
    salvage = st == TRUNCATED and t[0] >= cfg.salvage_t and norm <= cfg.divergence_norm
    pt = Xe[0, 1:] / Xe[0, 0] if st == CONVERGED or salvage else None
    return PathResult(0, st, pt, float(t[0]), int(steps[0]))


# endpoint processing


@dataclass(frozen=True)
class Solution:
    point: tuple[complex, ...]
    residual: float
    is_real: bool
    certificate: float
    path_id: int

    def real_point(self) -> np.ndarray:
        return np.array([z.real for z in self.point])

    def to_json(self) -> dict:
        return {
            "point": [[z.real, z.imag] for z in self.point],
            "residual": self.residual,
            "is_real": self.is_real,
            "certificate": self.certificate,
            "path_id": self.path_id,
        }


@dataclass
class SolutionSet:
    solutions: list[Solution]
    n_paths: int
    n_failed: int
    n_filtered: int
    n_diverged: int
    n_duplicates: int = 0
    expected_count: int | None = None
    warnings: list[str] = field(default_factory=list)
    config: TrackerConfig = field(default_factory=TrackerConfig)
    paths: list[PathResult] = field(default_factory=list, repr=False)

    def __len__(self):
        return len(self.solutions)

    def __iter__(self):
        return iter(self.solutions)

    def points(self) -> np.ndarray:
        return np.array([s.point for s in self.solutions], dtype=complex)

    def to_json(self) -> dict:
        return {
            "solutions": [s.to_json() for s in self.solutions],
            "counts": {
                "paths": self.n_paths,
                "solutions": len(self.solutions),
                "real": count_real(self),
                "failed": self.n_failed,
                "duplicates": self.n_duplicates,
                "filtered": self.n_filtered,
                "diverged": self.n_diverged,
            },
            "expected_count": self.expected_count,
            "warnings": list(self.warnings),
            "config": asdict(self.config),
        }


def newton_refine(system: CompiledSystem, x: np.ndarray, tol: float, max_iter: int = 20):
    """Affine Newton iteration; returns (point, list of update norms)."""
    x = np.array(x, dtype=complex)
    updates = []
    for _ in range(max_iter):
        F, J = system.values_and_jacobian(x[None, :])
        d = _solve(J, -F)[0]
        nd = float(np.linalg.norm(d))
        if not np.isfinite(nd):
            break
        x = x + d
        updates.append(nd)
        if nd <= tol * max(1.0, float(np.linalg.norm(x))):
            break
    return x, updates


def contraction_certificate(system: CompiledSystem, x: np.ndarray, scale: float = 1e-6) -> float:
    """Ratio of two consecutive Newton steps started from a small fixed perturbation of ``x``.

    Near a regular root the ratio is of the order of the perturbation; near a
    singular root Newton converges linearly and the ratio approaches (m-1)/m.
    This is a heuristic, not a proof of convergence.
    """
    n = x.size
    direction = np.exp(1j * (1.0 + np.arange(n))) / math.sqrt(n)
    x0 = x + scale * max(1.0, float(np.linalg.norm(x))) * direction
    pts = [x0]
    for _ in range(2):
        F, J = system.values_and_jacobian(pts[-1][None, :])
        pts.append(pts[-1] + _solve(J, -F)[0])
    s1 = np.linalg.norm(pts[1] - pts[0])
    s2 = np.linalg.norm(pts[2] - pts[1])
    if not (np.isfinite(s1) and np.isfinite(s2)) or s1 == 0:
        return math.inf
    return float(s2 / s1)


def is_real_point(point, tol: float) -> bool:
    return all(abs(z.imag) / (1.0 + abs(z.real)) < tol for z in point)


def canonical_key(point, granularity: float = 1e-6):
    key = []
    for z in point:
        key.append(int(round(z.real / granularity)))
        key.append(int(round(z.imag / granularity)))
    return tuple(key)


def _close(a, b, tol: float) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    scale = 1.0 + max(np.max(np.abs(a)), np.max(np.abs(b)))
    return float(np.max(np.abs(a - b))) <= tol * scale


def dedup(solutions: Sequence[Solution], tol: float = 1e-8) -> list[Solution]:
    """Canonically sort, then keep each solution not within ``tol`` of one already kept."""
    kept: list[Solution] = []
    for s in sorted(solutions, key=lambda s: (canonical_key(s.point), s.path_id)):
        if not any(_close(s.point, k.point, tol) for k in kept):
            kept.append(s)
    return kept


def count_real(S: SolutionSet | Sequence[Solution]) -> int:
    sols = S.solutions if isinstance(S, SolutionSet) else S
    return sum(1 for s in sols if s.is_real)


def vanishes(p: Polynomial, point, tol: float) -> bool:
    """True when ``p(point)`` is below ``tol`` absolutely (after scaling p to unit max
    coefficient) or relative to the sum of the absolute values of its terms."""
    if p.is_zero():
        return True
    x = np.asarray(point, dtype=complex)
    coeffs = np.array([complex(c) for c in p.terms.values()])
    exps = np.array(list(p.terms.keys()), dtype=int).reshape(len(coeffs), -1)
    mags = np.abs(coeffs) * np.prod(np.abs(x)[None, :] ** exps, axis=1)
    value = abs(complex(np.sum(coeffs * np.prod(x[None, :] ** exps, axis=1))))
    return value < tol * float(np.max(np.abs(coeffs))) or value < tol * float(np.sum(mags))


def _numeric_rank_ok(matrix_polys, point, rank: int, tol: float) -> bool:
    A = np.array([[complex(evaluate(p, point)) for p in row] for row in matrix_polys.rows])
    sv = np.linalg.svd(A, compute_uv=False)
    if rank == 0:
        return True
    if sv.size < rank or sv[0] == 0:
        return False
    return sv[rank - 1] / sv[0] > tol


def solve(system, config: TrackerConfig | None = None, threads: int = 1) -> SolutionSet:
    """Solve a :class:`~critpoly.systems.SquareSystem` (or a bare square ``PolySystem``)."""
    cfg = config or TrackerConfig()
    equations = system.equations if hasattr(system, "equations") else system
    polys = list(equations)
    hom = Homotopy(polys, seed=cfg.seed)
    paths = track_all(hom, cfg, threads=threads)

    nonvanishing = list(getattr(system, "nonvanishing", ()) or ())
    vanishing = list(getattr(system, "vanishing_checks", ()) or ())
    rank_checks = list(getattr(system, "rank_conditions", ()) or ())
    expected = getattr(system, "expected_count", None)

    candidates: list[Solution] = []
    n_failed = n_filtered = n_diverged = 0
    for pr in paths:
        if pr.status == DIVERGED:
            n_diverged += 1
            continue
        if pr.point is None:
            n_failed += 1
            continue
        x, _ = newton_refine(hom.affine, pr.point, cfg.endpoint_tol)
        if not np.all(np.isfinite(x)):
            n_failed += 1
            continue
        if np.linalg.norm(x) > cfg.divergence_norm:
            n_diverged += 1
            continue
        residual = float(np.max(hom.affine.residuals(x[None, :])[0]))
        cert = contraction_certificate(hom.affine, x)
        if not (residual < cfg.residual_tol and cert < cfg.certificate_max):
            n_failed += 1
            continue
        pt = tuple(complex(z) for z in x)
        if any(vanishes(p, pt, cfg.nonvanishing_tol) for p in nonvanishing) or any(
            abs(evaluate(p, pt)) > cfg.residual_tol for p in vanishing
        ) or not all(_numeric_rank_ok(M, pt, r, cfg.rank_tol) for M, r in rank_checks):
            n_filtered += 1
            continue
        candidates.append(Solution(pt, residual, is_real_point(pt, cfg.reality_tol), cert, pr.path_id))

    sols = dedup(candidates, cfg.dedup_tol)
    n_dup = len(candidates) - len(sols)
    result = SolutionSet(
        solutions=sols,
        n_paths=len(paths),
        n_failed=n_failed + n_dup,
        n_filtered=n_filtered,
        n_diverged=n_diverged,
        n_duplicates=n_dup,
        expected_count=expected,
        config=cfg,
        paths=paths,
    )
    if n_dup:
        result.warnings.append(f"{n_dup} duplicate endpoints (possible path jumping)")
    if expected is not None and len(sols) != expected:
        result.warnings.append(f"found {len(sols)} solutions, expected {expected}")
        log.warning("solution count %d differs from expected %d", len(sols), expected)
    return result


def select_minimizer(S: SolutionSet | Sequence[Solution], objective: Callable[[np.ndarray], float],
                     feasible: Callable[[np.ndarray], bool] | None = None) -> Solution:
    """Real solution with the smallest objective value; ties keep the earlier one in canonical order."""
    sols = S.solutions if isinstance(S, SolutionSet) else list(S)
    best, best_val = None, math.inf
    for s in sols:
        if not s.is_real:
            continue
        x = s.real_point()
        if feasible is not None and not feasible(x):
            continue
        val = objective(x)
        if val < best_val:
            best, best_val = s, val
    if best is None:
        raise ValueError("no feasible real solution")
    return best


def ed_objective(u: Sequence) -> Callable[[np.ndarray], float]:
    u = np.array([float(a) for a in u])
    return lambda x: float(np.sum((x[: u.size] - u) ** 2))


def negative_loglik(u: Sequence) -> Callable[[np.ndarray], float]:
    u = np.array([float(a) for a in u])
    return lambda p: float(-np.sum(u * np.log(p[: u.size])))


def simplex_feasible(npoints: int) -> Callable[[np.ndarray], bool]:
    return lambda p: bool(np.all(p[:npoints] > 0))
