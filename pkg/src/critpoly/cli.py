"""Command-line entry point: ``critpoly <command> ...``.

Every solve command prints a short summary and, with ``--json-out FILE``
(``-`` for stdout), writes a JSON report that is byte-identical across runs
with the same seed apart from the ``wall_time`` field.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import degrees as deg
from . import pde
from . import systems as sy
from .homotopy import (
    SolutionSet,
    TrackerConfig,
    count_real,
    ed_objective,
    negative_loglik,
    select_minimizer,
    simplex_feasible,
    solve,
)
from .poly import PolyParseError, parse

EXIT_PARSE = 2
EXIT_MISMATCH = 3


class InputError(Exception):
    """Bad user input; reported with exit code 2."""


@dataclass
class RunReport:
    command: list[str]
    config: dict
    expected_count: int | None = None
    found_count: int | None = None
    real_count: int | None = None
    solutions: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    wall_time: float = 0.0

    @classmethod
    def from_solutions(cls, argv, result: SolutionSet, **details) -> "RunReport":
        js = result.to_json()
        return cls(
            command=list(argv),
            config=js["config"],
            expected_count=result.expected_count,
            found_count=len(result),
            real_count=count_real(result),
            solutions=js["solutions"],
            warnings=list(result.warnings),
            details={"counts": js["counts"], **details},
        )

    @property
    def mismatch(self) -> bool:
        return self.expected_count is not None and self.found_count is not None and self.expected_count != self.found_count

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True, default=_json_default)


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _fractions(text: str) -> list[Fraction]:
    try:
        return [Fraction(t.strip()) for t in text.replace(";", ",").split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot parse number list {text!r}: {exc}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"cannot parse integer list {text!r}") from exc


def _load_json(text: str):
    p = Path(text)
    try:
        return json.loads(p.read_text()) if p.exists() else json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {text!r}: {exc}") from exc


def _config(args) -> TrackerConfig:
    return TrackerConfig(seed=args.seed)


def _point_json(x) -> list:
    return [float(v) for v in np.real(x)]


# commands


def cmd_solve_ed(args) -> RunReport:
    if args.model:
        try:
            model = sy.model_from_json(_load_json(args.model))
        except (KeyError, TypeError) as exc:
            raise InputError(f"model JSON is missing fields: {exc}") from exc
    elif args.random_degrees:
        degs = sorted(_ints(args.random_degrees), reverse=True)
        model = sy.random_complete_intersection(args.n, degs, seed=args.seed)
    else:
        raise InputError("give --model FILE or --random-degrees")
    rng = np.random.default_rng(args.seed)
    u = _fractions(args.u) if args.u else [Fraction(int(rng.integers(-20, 21)), 7) for _ in range(model.n)]
    S = sy.build_ed_system(model, u, form=args.form)
    result = solve(S, _config(args), threads=args.threads)
    details = {"model": sy.model_to_json(model), "u": [str(a) for a in u], "bezout": S.bezout_number()}
    try:
        best = select_minimizer(result, ed_objective(u))
        details["minimizer"] = _point_json(best.point[: model.n])
    except ValueError:
        details["minimizer"] = None
    return RunReport.from_solutions(args.argv, result, **details)


def cmd_solve_section(args) -> RunReport:
    if args.model:
        model = sy.model_from_json(_load_json(args.model))
    else:
        model = sy.random_complete_intersection(3, [args.degree], seed=args.seed)
    S = sy.build_linear_section_system(model, args.i, seed=args.seed)
    result = solve(S, _config(args), threads=args.threads)
    return RunReport.from_solutions(args.argv, result, model=sy.model_to_json(model), i=args.i)


def _gaussian_inputs(args):
    if args.lssm:
        L = sy.LSSM(tuple(_load_json(args.lssm)))
    else:
        L = sy.LSSM.random(args.n, args.k, seed=args.seed)
    if args.S:
        S = [[Fraction(str(a)) for a in row] for row in _load_json(args.S)]
    else:
        S = sy.sample_covariance(L.n, seed=args.seed)
    return L, S


def _gaussian_mle(system, L, S, result):
    """Real solution with positive definite Sigma and the smallest -2/N log-likelihood."""
    Sn = np.array(S, dtype=float)
    best, best_val = None, np.inf
    for sol in result.solutions:
        if not sol.is_real:
            continue
        K, Sigma = sy.gaussian_matrices(system, L, S, np.array(sol.point))
        Sigma = np.real(Sigma)
        if np.min(np.linalg.eigvalsh((Sigma + Sigma.T) / 2)) <= 0:
            continue
        val = float(np.linalg.slogdet(Sigma)[1] + np.trace(Sn @ np.linalg.inv(Sigma)))
        if val < best_val:
            best, best_val = Sigma, val
    return None if best is None else {"Sigma": best.tolist(), "objective": best_val}


def cmd_solve_mle(args) -> RunReport:
    if args.variant in ("gaussian-conc", "gaussian-cov"):
        L, S = _gaussian_inputs(args)
        build = sy.build_gaussian_concentration if args.variant == "gaussian-conc" else sy.build_gaussian_covariance
        system = build(L, S, formulation=args.formulation, seed=args.seed)
        result = solve(system, _config(args), threads=args.threads)
        details = {
            "n": L.n,
            "k": L.k,
            "formulation": args.formulation,
            "S": [[str(a) for a in row] for row in S],
            "mle": _gaussian_mle(system, L, S, result),
        }
        report = RunReport.from_solutions(args.argv, result, **details)
        if details["mle"] is None:
            report.warnings.append("no real critical point has positive definite Sigma "
                                   "(the linear space may miss the positive definite cone)")
        return report
    # discrete
    if args.model in (None, "independence"):
        model = sy.independence_model()
    elif args.model == "coin":
        model = sy.coin_model()
    else:
        model = sy.model_from_json(_load_json(args.model))
    if not args.u:
        raise InputError("discrete MLE needs --u")
    u = sy.parse_data_point(args.u)
    if isinstance(u, dict):
        raise InputError("discrete data must be a vector")
    system = sy.build_discrete_mle(model, u)
    result = solve(system, _config(args), threads=args.threads)
    details = {"model": sy.model_to_json(model), "u": [str(a) for a in u]}
    try:
        best = select_minimizer(result, negative_loglik(u), simplex_feasible(model.n))
        details["maximizer"] = _point_json(best.point[: model.n])
    except ValueError:
        details["maximizer"] = None
    return RunReport.from_solutions(args.argv, result, **details)


def cmd_solve_cegm(args) -> RunReport:
    if args.u:
        raw = _load_json(args.u)
        u = sy.parse_data_point(raw)
    else:
        u = sy.random_cegm_data(args.k, args.m, seed=args.seed)
    system = sy.build_cegm_scattering(args.k, args.m, u)
    result = solve(system, _config(args), threads=args.threads)
    minors = sy.cegm_minors(args.k, args.m)
    smallest = None
    if result.solutions:
        from .poly import evaluate

        smallest = min(abs(complex(evaluate(p, s.point))) for s in result.solutions for p in minors.values())
    details = {
        "k": args.k,
        "m": args.m,
        "u": {"".join(map(str, I)) if args.m < 10 else ",".join(map(str, I)): str(v) for I, v in sorted(u.items())},
        "min_abs_plucker": smallest,
    }
    return RunReport.from_solutions(args.argv, result, **details)


def cmd_degree(args) -> RunReport:
    params = {}
    for key in ("n", "c", "d", "g", "k", "m"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if args.degs:
        params["degrees"] = _ints(args.degs)
    try:
        value, formula = deg.evaluate_query(deg.DegreeQuery(args.family, params))
    except KeyError as exc:
        raise InputError(f"family {args.family} needs parameter {exc}") from exc
    report = RunReport(command=list(args.argv), config={"seed": args.seed})
    report.details = {"family": args.family, "params": params, "value": value, "formula": formula}
    return report


def cmd_pde(args) -> RunReport:
    report = RunReport(command=list(args.argv), config={"seed": args.seed})
    check = args.check
    if check == "hankel-wave":
        u = _fractions(args.u or "1,2,4,8,16,32,64")
        r = pde.hankel_rank(u)
        if r == 4:
            raise InputError("H(u) has full rank; no wave solutions")
        kernel = pde.hankel_kernel(u)
        psi = parse(args.psi, len(kernel)) if args.psi else _default_psi(len(kernel))
        phi = pde.build_wave_solution(u, psi, kernel)
        ok = pde.is_module_solution(pde.hankel_module(), phi)
        report.details = {"rank": r, "kernel": [[str(a) for a in c] for c in kernel], "psi": str(psi),
                          "verified": ok}
    elif check == "syzygy":
        M = pde.hankel_module()
        rows = pde.noetherian_multipliers()
        f = parse(args.f or "z1^3*z2*z3*z4", ("z1", "z2", "z3", "z4"))
        syz = [pde.is_syzygy(M, row) for row in rows]
        sols = [pde.is_module_solution(M, pde.syzygy_solution(row, f)) for row in rows]
        report.details = {"syzygies": syz, "solutions_verified": sols, "f": str(f), "verified": all(syz + sols)}
    elif check == "havetheform":
        xi = parse(args.xi or "x1^3", 1)
        psi = parse(args.psi or "x1^2", 1)
        ok = pde.verify_havetheform(xi, psi, Fraction(args.alpha), Fraction(args.beta))
        report.details = {"xi": str(xi), "psi": str(psi), "alpha": args.alpha, "beta": args.beta, "verified": ok}
    elif check == "membership":
        if not args.f:
            raise InputError("membership needs --f")
        f = parse(args.f, 3)
        report.details = {"f": str(f), "in_ideal": pde.membership(pde.question_primary_ops(), f)}
    return report


def _default_psi(r: int):
    from .poly import Polynomial

    p = Polynomial.constant(1, r)
    for x in Polynomial.gens(r):
        p = p * x
    return p


# argument parsing


def _add_common(p: argparse.ArgumentParser, top: bool):
    default = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    p.add_argument("--seed", type=int, default=default(0), help="seed for all random choices (default 0)")
    p.add_argument("--threads", type=int, default=default(1), help="worker threads for path tracking")
    p.add_argument("--strict", action="store_true", default=default(False),
                   help="exit with code 3 when the solution count differs from the expected count")
    p.add_argument("--json-out", default=default(None), metavar="FILE", help="write the JSON report ('-' = stdout)")
    p.add_argument("-v", "--verbose", action="store_true", default=default(False))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="critpoly", description=__doc__.splitlines()[0])
    _add_common(parser, top=True)
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _add_common(common, top=False)

    p = sub.add_parser("solve-ed", parents=[common], help="critical points of the Euclidean distance")
    p.add_argument("--model", help="model JSON file or inline JSON")
    p.add_argument("--random-degrees", help="seeded random complete intersection with these degrees, e.g. 2,2")
    p.add_argument("--n", type=int, default=3, help="ambient dimension for --random-degrees")
    p.add_argument("--u", help="data point, comma-separated rationals (default: seeded random)")
    p.add_argument("--form", choices=["auto", "multiplier", "determinant"], default="auto")
    p.set_defaults(func=cmd_solve_ed)

    p = sub.add_parser("solve-section", parents=[common], help="linear form on a linear section (polar degrees)")
    p.add_argument("--model", help="model JSON (default: seeded random surface)")
    p.add_argument("--degree", type=int, default=2, help="degree of the random surface in 3-space")
    p.add_argument("--i", type=int, required=True, help="section index, codimension i-1")
    p.set_defaults(func=cmd_solve_section)

    p = sub.add_parser("solve-mle", parents=[common], help="maximum likelihood critical points")
    p.add_argument("variant", choices=["gaussian-conc", "gaussian-cov", "discrete"])
    p.add_argument("--n", type=int, default=4)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--lssm", help="JSON list of symmetric basis matrices")
    p.add_argument("--S", help="JSON sample covariance matrix")
    p.add_argument("--formulation", choices=["eliminated", "primal-dual"], default="eliminated")
    p.add_argument("--model", help="'independence', 'coin' or a model JSON in p0..pn")
    p.add_argument("--u", help="data vector, e.g. 4,2,2,1 or [[4,2],[2,1]]")
    p.set_defaults(func=cmd_solve_mle)

    p = sub.add_parser("solve-cegm", parents=[common], help="scattering equations on X(k, m)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--u", help="JSON map from Plücker index (e.g. \"24\") to value; default seeded random")
    p.set_defaults(func=cmd_solve_cegm)

    p = sub.add_parser("degree", parents=[common], help="closed-form degree formulas")
    p.add_argument("family", choices=deg.FAMILIES)
    for key in ("n", "c", "d", "g", "k", "m"):
        p.add_argument(f"--{key}", type=int)
    p.add_argument("--degs", help="comma-separated degrees")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("pde", parents=[common], help="checks for PDE solutions and ideal membership")
    p.add_argument("check", choices=["hankel-wave", "syzygy", "havetheform", "membership"])
    p.add_argument("--u", help="7 comma-separated rationals for the Hankel matrix")
    p.add_argument("--psi", help="polynomial psi (in x1..xr)")
    p.add_argument("--xi", help="univariate polynomial xi in x1")
    p.add_argument("--alpha", default="1")
    p.add_argument("--beta", default="2")
    p.add_argument("--f", help="polynomial to test or to differentiate")
    p.set_defaults(func=cmd_pde)
    return parser


def _summary(report: RunReport) -> str:
    d = report.details
    if "family" in d:
        return f"{d['value']}    [{d['formula']}]"
    if "verified" in d or "in_ideal" in d:
        return ", ".join(f"{k}={v}" for k, v in sorted(d.items()) if k not in ("kernel",))
    lines = [f"found {report.found_count} complex solutions ({report.real_count} real), expected {report.expected_count}"]
    for key in ("minimizer", "maximizer", "mle", "min_abs_plucker"):
        if key in d:
            lines.append(f"{key}: {d[key]}")
    lines.extend(f"warning: {w}" for w in report.warnings)
    return "\n".join(lines)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    start = time.perf_counter()
    try:
        report = args.func(args)
    except (InputError, PolyParseError, json.JSONDecodeError) as exc:
        print(f"critpoly: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"critpoly: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    report.wall_time = round(time.perf_counter() - start, 6)
    print(_summary(report))
    if args.json_out:
        text = report.to_json()
        if args.json_out == "-":
            print(text)
        else:
            Path(args.json_out).write_text(text + "\n")
    if args.strict and report.mismatch:
        print(f"critpoly: count mismatch: found {report.found_count}, expected {report.expected_count}", file=sys.stderr)
        return EXIT_MISMATCH
    return 0


if __name__ == "__main__":
    sys.exit(main())
