"""Command-line front end.

Exit codes: 0 success, 1 computation failure, 2 bad input, 3 no
convergence, 4 certificate violated.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .exceptions import DomainError, FracLyapError, GridIndexError, ZeroSumError
from .exprlang import ExprError, parse
from .green import check_b, check_order, cone_window, green_table, lambda_constant
from .lyapunov import (
    certify,
    check_H1_H2,
    eigen_exclusion,
    existence_constants,
    gamma_exact,
    gamma_paper,
    interior_spectrum,
)
from .problemfile import ProblemFile, digest, dumps, fmt_real, load_problem, write_csv
from .reproduce import format_table, reproduce
from .solver import cone_check, residual_terms, solve_picard

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_NOCONV, EXIT_VIOLATED = 0, 1, 2, 3, 4

log = logging.getLogger("fraclyap")


class InputError(Exception):
    """Bad command-line input; mapped to exit code 2."""


def _report(command: str, inputs: dict, outputs: dict, warnings: list[str], status: int) -> dict:
    return {
        "command": command,
        "input_digest": digest(inputs),
        "inputs": inputs,
        "outputs": outputs,
        "warnings": warnings,
        "exit_status": status,
    }


def _emit(report: dict) -> int:
    sys.stdout.write(dumps(report))
    return report["exit_status"]


def _problem_from_args(args) -> ProblemFile:
    if getattr(args, "spec", None):
        try:
            problem = load_problem(args.spec)
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read problem file: {exc}") from None
        overrides = {
            k: getattr(args, k)
            for k in ("r1", "r2", "tol", "max_iter", "damping")
            if getattr(args, k, None) is not None
        }
        if overrides:
            problem = ProblemFile.from_dict({**problem.to_dict(), **overrides})
        return problem
    missing = [flag for flag in ("alpha", "b", "q", "f") if getattr(args, flag, None) is None]
    if missing:
        raise InputError("give --spec or all of " + ", ".join("--" + m for m in missing))
    data = {"alpha": args.alpha, "b": args.b, "q": args.q, "f": args.f}
    for key in ("r1", "r2", "tol", "max_iter", "damping", "f_prefactor"):
        if getattr(args, key, None) is not None:
            data[key] = getattr(args, key)
    return ProblemFile.from_dict(data)


def cmd_green(args) -> int:
    alpha, b = check_order(args.alpha), check_b(args.b)
    table = green_table(alpha, b)
    lam = lambda_constant(alpha, b, table)
    window = cone_window(alpha, b)
    t_max, s_max, g_max = table.argmax()
    header = ["t\\s"] + [str(s) for s in table.s]
    rows = [[float(t)] + [float(v) for v in row] for t, row in zip(table.t, table.values)]
    outputs = {
        "max": g_max,
        "argmax": {"t": t_max, "s": s_max},
        "lambda": lam,
        "window": {"lower": window.lower, "upper": window.upper,
                   "grid_indices": list(window.grid_indices)},
    }
    if args.out:
        if args.format == "csv":
            write_csv(args.out, header, rows)
        else:
            Path(args.out).write_text(
                dumps({"alpha": alpha, "b": b, "t": table.t.tolist(), "s": table.s.tolist(),
                       "values": table.values.tolist()}),
                encoding="utf-8", newline="\n",
            )
        outputs["table_path"] = str(args.out)
    else:
        outputs["table"] = {"t": table.t.tolist(), "values": table.values.tolist()}
    return _emit(_report("green", {"alpha": alpha, "b": b}, outputs, [], EXIT_OK))


def _solution_rows(p, sol) -> list[list]:
    terms = residual_terms(p, sol.y)
    rows = []
    for j, (t, y) in enumerate(zip(sol.y.points, sol.y.values)):
        k = j - 1
        term = float(terms[k]) if 0 <= k <= p.b + 1 else None
        rows.append([k, float(t), float(y), term])
    return rows


def cmd_solve(args) -> int:
    problem = _problem_from_args(args)
    p = problem.to_spec()
    sol = solve_picard(
        p,
        tol=problem.tol if problem.tol is not None else 1e-12,
        max_iter=problem.max_iter if problem.max_iter is not None else 100_000,
        damping=problem.damping if problem.damping is not None else 1.0,
    )
    lam = lambda_constant(p.alpha, p.b)
    warnings = []
    nonneg = bool(np.all(sol.interior >= 0.0))
    in_cone = cone_check(sol.y, lam, cone_window(p.alpha, p.b)) if nonneg else False
    outputs = {
        "eta": sol.eta,
        "norm": sol.norm,
        "residual_sup": sol.residual_sup,
        "iterations": sol.iterations,
        "converged": sol.converged,
        "cone_check": in_cone,
        "lambda": lam,
    }
    if p.r1 is not None:
        outputs["norm_bounds"] = {
            "r1": p.r1,
            "r2": p.r2,
            "upper_holds": sol.norm <= p.r2,
            "lower_holds": sol.norm >= p.r1,
        }
        if sol.norm < p.r1:
            warnings.append("the Picard limit lies below r1; the existence bound concerns some fixed point in the shell")
    rows = _solution_rows(p, sol)
    if args.out:
        if args.format == "csv":
            write_csv(args.out, ["k", "t", "y", "residual_term"], rows)
        else:
            Path(args.out).write_text(
                dumps({"converged": sol.converged,
                       "rows": [dict(zip(["k", "t", "y", "residual_term"], r)) for r in rows]}),
                encoding="utf-8", newline="\n",
            )
        outputs["solution_path"] = str(args.out)
    else:
        outputs["y"] = [r[2] for r in rows]
    status = EXIT_OK
    if not sol.converged:
        warnings.append(f"no convergence after {sol.iterations} iterations")
        status = EXIT_NOCONV
    return _emit(_report("solve", problem.to_dict(), outputs, warnings, status))


def cmd_certify(args) -> int:
    problem = _problem_from_args(args)
    p = problem.to_spec()
    warnings: list[str] = []
    inputs = {**problem.to_dict(), "theorem": args.theorem, "variant": args.variant}
    if args.theorem == "3.4":
        if args.auto_eta:
            sol = solve_picard(
                p,
                tol=problem.tol if problem.tol is not None else 1e-12,
                max_iter=problem.max_iter if problem.max_iter is not None else 100_000,
                damping=problem.damping if problem.damping is not None else 1.0,
            )
            if not sol.converged:
                raise FracLyapError("cannot take eta from a solve that did not converge")
            eta = sol.eta
            inputs["eta"] = "auto"
        elif args.eta is not None:
            eta = args.eta
            inputs["eta"] = eta
        else:
            raise InputError("theorem 3.4 needs --eta or --auto-eta")
        cert = certify(p, "th3_4", eta=eta, variant=args.variant)
        outputs = {**cert.to_dict(), "eta": eta}
    else:
        if args.gamma is not None:
            gamma = args.gamma
        elif args.gamma_source == "exact":
            gamma = gamma_exact(p.alpha, p.b, p.q)
        else:
            gamma = gamma_paper(p.alpha, p.b, p.q)
        prefactor = problem.prefactor_value()
        cert = certify(p, "th3_6", r1=args.r1, r2=args.r2, gamma=gamma,
                       variant=args.variant, f_prefactor=prefactor)
        other = certify(p, "th3_6", r1=args.r1, r2=args.r2, gamma=gamma,
                        variant="paper" if args.variant == "exact" else "exact",
                        f_prefactor=prefactor)
        outputs = {**cert.to_dict(), "gamma": gamma}
        if prefactor != 1.0:
            warnings.append(
                f"discrepancy: variant '{cert.variant}' rhs {cert.rhs!r} vs variant "
                f"'{other.variant}' rhs {other.rhs!r}; they differ by the constant factor "
                f"{1.0 / prefactor!r} of f"
            )
    status = EXIT_OK if cert.satisfied else EXIT_VIOLATED
    return _emit(_report("certify", inputs, outputs, warnings, status))


def cmd_constants(args) -> int:
    problem = _problem_from_args(args)
    p = problem.to_spec()
    consts = existence_constants(p.alpha, p.b, p.q, lam=args.lam)
    outputs = consts.to_dict()
    warnings = []
    if p.r1 is not None:
        gamma = consts.gamma_paper if args.variant == "paper" else consts.gamma_exact
        gamma_star = consts.gamma_star_paper if args.variant == "paper" else consts.gamma_star_exact
        hyp = check_H1_H2(p.f, p.r1, p.r2, gamma, gamma_star, f_nondecreasing=args.f_nondecreasing)
        outputs["hypotheses"] = {"variant": args.variant, **hyp.to_dict()}
        if hyp.caveat:
            warnings.append(hyp.caveat)
    return _emit(_report("constants", {**problem.to_dict(), "lambda": args.lam}, outputs, warnings, EXIT_OK))


def cmd_eigen_bound(args) -> int:
    alpha, b = check_order(args.alpha), check_b(args.b)
    radius = eigen_exclusion(alpha, b)
    outputs: dict = {"radius": radius}
    status = EXIT_OK
    if args.verify:
        spectrum = interior_spectrum(alpha, b)
        mags = np.abs(spectrum)
        outputs["spectrum"] = [{"re": float(z.real), "im": float(z.imag)} for z in spectrum]
        outputs["min_abs_eigenvalue"] = float(mags.min())
        outputs["all_outside"] = bool(np.all(mags > radius))
        if not outputs["all_outside"]:
            status = EXIT_FAIL
    return _emit(_report("eigen-bound", {"alpha": alpha, "b": b}, outputs, [], status))


def cmd_reproduce(args) -> int:
    result = reproduce(args.example)
    if args.report:
        Path(args.report).write_text(dumps(result), encoding="utf-8", newline="\n")
    sys.stdout.write(format_table(result) + "\n")
    return EXIT_OK if result["all_passed"] else EXIT_FAIL


def _add_problem_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--spec", help="JSON problem file")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--b", type=int)
    sp.add_argument("--q", help="expression in t")
    sp.add_argument("--f", help="expression in y")
    sp.add_argument("--r1", type=float)
    sp.add_argument("--r2", type=float)
    sp.add_argument("--f-prefactor", dest="f_prefactor",
                    help="constant factor of f (expression), used by the paper variant")


def _add_solver_args(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--tol", type=float)
    sp.add_argument("--max-iter", dest="max_iter", type=int)
    sp.add_argument("--damping", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraclyap",
        description="Discrete fractional boundary value problems: Green's function, "
        "fixed-point solutions and Lyapunov-type inequalities.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("green", help="tabulate the Green's function")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_green)

    sp = sub.add_parser("solve", help="solve the nonlinear problem by Picard iteration")
    _add_problem_args(sp)
    _add_solver_args(sp)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("certify", help="evaluate a Lyapunov-type inequality")
    _add_problem_args(sp)
    _add_solver_args(sp)
    sp.add_argument("--theorem", choices=["3.4", "3.6"], required=True)
    eta = sp.add_mutually_exclusive_group()
    eta.add_argument("--eta", type=float)
    eta.add_argument("--auto-eta", dest="auto_eta", action="store_true")
    sp.add_argument("--variant", choices=["exact", "paper"], default="exact")
    sp.add_argument("--gamma", type=float, help="override gamma for theorem 3.6")
    sp.add_argument("--gamma-source", dest="gamma_source", choices=["exact", "paper"],
                    default="paper", help="how gamma is computed when --gamma is absent")
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("constants", help="existence constants and hypothesis checks")
    _add_problem_args(sp)
    sp.add_argument("--lambda", dest="lam", type=float,
                    help="cone constant for the max-G variant (default: enumerated)")
    sp.add_argument("--variant", choices=["exact", "paper"], default="paper",
                    help="which constants the hypothesis checks use")
    sp.add_argument("--f-nondecreasing", dest="f_nondecreasing", action="store_true")
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("eigen-bound", help="eigenvalue exclusion radius")
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--verify", action="store_true", help="also compute the spectrum")
    sp.set_defaults(func=cmd_eigen_bound)

    sp = sub.add_parser("reproduce", help="recompute the worked examples")
    sp.add_argument("--example", type=int, choices=[1, 2], required=True)
    sp.add_argument("--report", help="write the comparison as JSON")
    sp.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, DomainError, ExprError, GridIndexError, ZeroSumError) as exc:
        print(f"fraclyap {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (FracLyapError, ArithmeticError, OSError) as exc:
        print(f"fraclyap {args.command}: computation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
