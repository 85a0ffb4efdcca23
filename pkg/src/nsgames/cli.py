"""Command-line front end.

Exit codes: 0 decision true / witness exists, 1 decision false, 2 usage
or input error, 3 capacity error, 4 inconclusive (npa1 only).  With
--quiet the exit code is the only output, for scripting.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from . import bcs as bcs_mod
from . import graphs, npa, polytope, strategies
from .errors import CapacityError, FormatError, InvalidSolutionError, NsGamesError
from .game import Correlation, Game, classify, is_perfect_strategy

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3
EXIT_INCONCLUSIVE = 4


class _CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}") from exc


def _load_game(path: str) -> Game:
    try:
        return Game.from_json(_read(path))
    except FormatError as exc:
        raise _CliError(str(exc)) from exc


def _load_graph(path: str) -> graphs.Graph:
    text = _read(path)
    try:
        if text.lstrip().startswith("{"):
            return graphs.Graph.from_json(text)
        return graphs.Graph.from_text(text)
    except FormatError as exc:
        raise _CliError(str(exc)) from exc


def _load_corr(path: str) -> Correlation:
    try:
        return Correlation.from_json(_read(path))
    except (FormatError, ValueError) as exc:
        raise _CliError(str(exc)) from exc


def _load_bcs(path: str) -> bcs_mod.LinearBCS:
    try:
        return bcs_mod.LinearBCS.from_text(_read(path))
    except (FormatError, ValueError) as exc:
        raise _CliError(str(exc)) from exc


def _load_sol(path: str) -> bcs_mod.OperatorSolution:
    try:
        return bcs_mod.OperatorSolution.from_json(_read(path))
    except FormatError as exc:
        raise _CliError(str(exc)) from exc


def _emit(args, payload: dict, text: str) -> None:
    if args.quiet:
        return
    if args.format == "json":
        print(json.dumps(payload))
    else:
        print(text)


def _lp_cap(args) -> Optional[int]:
    return args.cap if getattr(args, "cap", None) else None


def _cmd_classify(args) -> int:
    g = _load_game(args.game)
    rep = classify(g)
    d = rep.to_json_dict()
    text = ", ".join(f"{k}={v}" for k, v in d.items()
                     if k in ("synchronous", "imitation", "mirror", "unique"))
    _emit(args, d, text)
    return EXIT_TRUE


def _cmd_solve(args) -> int:
    g = _load_game(args.game)
    cls = args.strategy_class
    if cls in ("det", "loc"):
        found = strategies.enumerate_deterministic_perfect(g, limit=1)
        if not found:
            _emit(args, {"exists": False}, f"no perfect {cls}-strategy")
            return EXIT_FALSE
        witness = found[0]
        payload = {"exists": True, "strategy": witness.to_json_dict()}
        _emit(args, payload, f"perfect {cls}-strategy: f={list(witness.f)} "
                             f"g={list(witness.g)}")
        return EXIT_TRUE
    if cls == "ns":
        corr = polytope.ns_perfect_feasible(g, cap=_lp_cap(args))
        if corr is None:
            _emit(args, {"exists": False}, "no perfect ns-strategy")
            return EXIT_FALSE
        _emit(args, {"exists": True, "correlation": corr.to_json_dict()},
              "perfect ns-strategy found (exact witness)")
        return EXIT_TRUE
    mp = npa.build_moment_problem(g)
    out = npa.npa_feasible(mp)
    payload = out.to_json_dict()
    if out.status == npa.FEASIBLE and out.correlation is not None:
        payload["correlation"] = out.correlation.to_json_dict()
    _emit(args, payload,
          f"npa1: {out.status} (residual {out.residual:.3g}, "
          f"{out.iterations} iterations)")
    if out.status == npa.FEASIBLE:
        return EXIT_TRUE
    if out.status == npa.INFEASIBLE_NUMERIC:
        return EXIT_FALSE
    return EXIT_INCONCLUSIVE


def _cmd_cover(args) -> int:
    g = _load_game(args.game)
    if args.strategy_class == "det":
        cov = strategies.reflexive_cover_det(g)
    else:
        cov = polytope.reflexive_cover_ns(g, cap=_lp_cap(args), jobs=args.jobs)
    added = len(cov.zeros) - len(g.zeros)
    _emit(args, cov.to_json_dict(),
          f"{args.strategy_class}-cover: {added} added zeros\n" + cov.to_json())
    return EXIT_TRUE


def _cmd_graph_game(args) -> int:
    if args.kind == "hom":
        g = graphs.homomorphism_game(_load_graph(args.inputs[0]),
                                     _load_graph(args.inputs[1]))
    elif args.kind == "iso":
        g = graphs.isomorphism_game(_load_graph(args.inputs[0]),
                                    _load_graph(args.inputs[1]))
    else:
        if len(args.inputs) != 2:
            raise _CliError("color needs GRAPH and a colour count")
        try:
            c = int(args.inputs[1])
        except ValueError as exc:
            raise _CliError(f"invalid colour count {args.inputs[1]!r}") from exc
        g = graphs.coloring_game(_load_graph(args.inputs[0]), c)
    _emit(args, g.to_json_dict(), g.to_json())
    return EXIT_TRUE


def _cmd_cep(args) -> int:
    g = _load_graph(args.graph)
    if args.graph2 is None:
        part = graphs.coarsest_equitable_partition(g)
        _emit(args, part.to_json_dict(),
              f"{len(part.parts)} parts: " +
              " ".join(str(sorted(p)) for p in part.parts))
        return EXIT_TRUE
    h = _load_graph(args.graph2)
    common = graphs.common_cep(g, h)
    _emit(args, {"common": common},
          "common coarsest equitable partitions" if common
          else "no common coarsest equitable partitions")
    return EXIT_TRUE if common else EXIT_FALSE


def _cmd_chrom_cover(args) -> int:
    g = _load_graph(args.graph)
    cov = graphs.chromatic_cover(g)
    _emit(args, cov.to_json_dict(), cov.to_json())
    return EXIT_TRUE


def _cmd_bcs(args) -> int:
    if args.action == "magic":
        system, sol = bcs_mod.magic_square()
        if args.what == "system":
            _emit(args, {"system": system.to_text()}, system.to_text().rstrip())
        else:
            _emit(args, sol.to_json_dict(), sol.to_json())
        return EXIT_TRUE
    s = _load_bcs(args.bcs)
    if args.action == "sat":
        z = bcs_mod.classical_satisfiable(s)
        if z is None:
            _emit(args, {"satisfiable": False}, "unsatisfiable over GF(2)")
            return EXIT_FALSE
        _emit(args, {"satisfiable": True, "assignment": list(z)},
              f"satisfiable, witness bits {list(z)}")
        return EXIT_TRUE
    if args.action == "game":
        g = bcs_mod.bcs_game(s)
        _emit(args, g.to_json_dict(), g.to_json())
        return EXIT_TRUE
    sol = _load_sol(args.solution)
    if args.action == "verify":
        residual = bcs_mod.operator_solution_residual(s, sol)
        ok = residual <= args.tol
        _emit(args, {"valid": ok, "residual": residual},
              f"{'valid' if ok else 'invalid'} (residual {residual:.3g})")
        return EXIT_TRUE if ok else EXIT_FALSE
    try:
        corr = bcs_mod.strategy_from_operator_solution(s, sol)
    except InvalidSolutionError as exc:
        if not args.quiet:
            print(f"invalid operator solution: {exc}", file=sys.stderr)
        return EXIT_FALSE
    _emit(args, corr.to_json_dict(), corr.to_json())
    return EXIT_TRUE


def _cmd_verify_strategy(args) -> int:
    g = _load_game(args.game)
    p = _load_corr(args.corr)
    tol = args.tol if args.tol is not None else (0 if p.mode == "exact" else 1e-9)
    try:
        ok = is_perfect_strategy(g, p, tol)
    except NsGamesError as exc:
        raise _CliError(str(exc)) from exc
    _emit(args, {"perfect": ok}, "perfect" if ok else "not perfect")
    return EXIT_TRUE if ok else EXIT_FALSE


def _cmd_verify_rep(args) -> int:
    g = _load_game(args.game)
    try:
        p_mats, q_mats = bcs_mod.rep_from_json_dict(json.loads(_read(args.rep)))
    except (json.JSONDecodeError, FormatError) as exc:
        raise _CliError(f"invalid representation file: {exc}") from exc
    try:
        ok = bcs_mod.verify_representation(g, p_mats, q_mats,
                                           tol=args.tol if args.tol else 1e-9)
    except NsGamesError as exc:
        raise _CliError(str(exc)) from exc
    _emit(args, {"valid": ok}, "representation valid" if ok else "not a representation")
    return EXIT_TRUE if ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--quiet", action="store_true",
                        help="no stdout; exit code carries the decision")

    parser = argparse.ArgumentParser(prog="nsgames",
                                     description="non-signalling game toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common])
    p.add_argument("game")
    p.set_defaults(fn=_cmd_classify)

    p = sub.add_parser("solve", parents=[common])
    p.add_argument("--class", dest="strategy_class", required=True,
                   choices=("det", "loc", "ns", "npa1"))
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("game")
    p.set_defaults(fn=_cmd_solve)

    p = sub.add_parser("cover", parents=[common])
    p.add_argument("--class", dest="strategy_class", required=True,
                   choices=("det", "ns"))
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("game")
    p.set_defaults(fn=_cmd_cover)

    p = sub.add_parser("graph-game", parents=[common])
    p.add_argument("kind", choices=("hom", "iso", "color"))
    p.add_argument("inputs", nargs=2, metavar="ARG")
    p.set_defaults(fn=_cmd_graph_game)

    p = sub.add_parser("cep", parents=[common])
    p.add_argument("graph")
    p.add_argument("graph2", nargs="?", default=None)
    p.set_defaults(fn=_cmd_cep)

    p = sub.add_parser("chrom-cover", parents=[common])
    p.add_argument("graph")
    p.set_defaults(fn=_cmd_chrom_cover)

    p = sub.add_parser("bcs", parents=[common])
    bsub = p.add_subparsers(dest="action", required=True)
    b = bsub.add_parser("sat", parents=[common])
    b.add_argument("bcs")
    b = bsub.add_parser("game", parents=[common])
    b.add_argument("bcs")
    b = bsub.add_parser("verify", parents=[common])
    b.add_argument("bcs")
    b.add_argument("solution")
    b.add_argument("--tol", type=float, default=1e-9)
    b = bsub.add_parser("strategy", parents=[common])
    b.add_argument("bcs")
    b.add_argument("solution")
    b = bsub.add_parser("magic", parents=[common])
    b.add_argument("what", choices=("system", "solution"))
    p.set_defaults(fn=_cmd_bcs)

    p = sub.add_parser("verify-strategy", parents=[common])
    p.add_argument("game")
    p.add_argument("corr")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(fn=_cmd_verify_strategy)

    p = sub.add_parser("verify-rep", parents=[common])
    p.add_argument("game")
    p.add_argument("rep")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(fn=_cmd_verify_rep)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0,) else 0
    if os.environ.get("NSGAMES_LP_CAP") and getattr(args, "cap", None) is None \
            and hasattr(args, "cap"):
        try:
            args.cap = int(os.environ["NSGAMES_LP_CAP"])
        except ValueError:
            print("ignoring malformed NSGAMES_LP_CAP", file=sys.stderr)
    try:
        return args.fn(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except NsGamesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
