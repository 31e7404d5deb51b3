"""Command-line interface: JSON in, JSON out, deterministic for fixed inputs.

Exit codes for the decision commands (membership, cycle-check, cycle-fiber):
0 member / success, 1 non-member, 2 undecidable or input error.  All other
commands use 0 for success and 2 for any error.  Vertices are 1-based in
every file and argument.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import selftest
from .chordal import chordal_fiber, clique_complex, is_chordal
from .core import (FactorParams, Graph, SimplicialComplex, SymmetricMatrix,
                   edge_complex, load_json, underlying_graph)
from .cycle import (CycleMatrix, counterexample_det, counterexample_sigma,
                    cycle_fiber, cycle_membership)
from .errors import (AsymmetricInput, Degenerate, InternalInconsistency,
                     NotChordal, NotMember, NotPsd, PatternViolation,
                     PsdConeError, TooManyCliques, ZeroDiagonal,
                     ZeroDiagonalParam)
from .latent import build_digraph, simulate_y
from .linalg import DEFAULT_TOL
from .param import phi
from .quotient import complex_quotient, schur_witness
from .volume import estimate_volume, format_table, volume_table

ERROR_CODES = {
    NotPsd: "not_psd",
    PatternViolation: "pattern_violation",
    NotChordal: "not_chordal",
    NotMember: "not_member",
    Degenerate: "degenerate",
    ZeroDiagonal: "zero_diagonal",
    ZeroDiagonalParam: "zero_diagonal_param",
    TooManyCliques: "too_many_cliques",
    InternalInconsistency: "internal_inconsistency",
    AsymmetricInput: "asymmetric_input",
}


def _print_json(obj):
    print(json.dumps(obj, indent=2, sort_keys=True))


def _error_json(code: str, message: str) -> int:
    _print_json({"error": {"code": code, "message": message}})
    return 2


def _code_for(exc: Exception) -> str:
    for cls, code in ERROR_CODES.items():
        if isinstance(exc, cls):
            return code
    if isinstance(exc, json.JSONDecodeError):
        return "parse_error"
    if isinstance(exc, OSError):
        return "io_error"
    return "invalid_input"


def _load_graph_or_complex(path):
    """Accept either a graph JSON ({"edges": ...}) or a complex JSON ({"facets": ...})."""
    data = load_json(path)
    if "facets" in data:
        delta = SimplicialComplex.from_json_dict(data)
        return underlying_graph(delta), delta
    if "edges" in data:
        return Graph.from_json_dict(data), None
    raise ValueError(f"{path}: expected a graph ('edges') or complex ('facets') JSON")


def _is_cycle_graph(g: Graph) -> bool:
    if g.m < 3 or len(g.edges) != g.m:
        return False
    if any(g.degree(v) != 2 for v in range(g.m)):
        return False
    # connected 2-regular with m edges: a single cycle
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.m


def _cycle_order(g: Graph) -> list[int]:
    """Vertices of a cycle graph in traversal order starting at 0."""
    order = [0]
    prev = None
    cur = 0
    while len(order) < g.m:
        nxt = min(w for w in g.neighbors(cur) if w != prev)
        order.append(nxt)
        prev, cur = cur, nxt
    return order


def _relabeled_cycle_matrix(sigma: SymmetricMatrix, order: list[int]) -> CycleMatrix:
    idx = np.array(order)
    return CycleMatrix.from_symmetric(SymmetricMatrix(sigma.a[np.ix_(idx, idx)]))


def cmd_phi(args) -> int:
    delta = SimplicialComplex.from_json_dict(load_json(args.complex))
    gamma = FactorParams.from_json_dict(delta, load_json(args.params))
    _print_json(phi(delta, gamma).to_json_dict())
    return 0


def cmd_fiber(args) -> int:
    if not args.chordal:
        raise ValueError("only --chordal fibers are implemented; pass --chordal")
    sigma = SymmetricMatrix.from_json_dict(load_json(args.matrix))
    g, delta = _load_graph_or_complex(args.graph)
    gamma = chordal_fiber(g, sigma, tol=args.tol)
    _print_json(gamma.to_json_dict())
    return 0


def cmd_cycle_check(args) -> int:
    sigma = CycleMatrix.from_symmetric(SymmetricMatrix.from_json_dict(load_json(args.matrix)))
    try:
        verdict = cycle_membership(sigma, tol=args.tol)
    except NotPsd as exc:
        _print_json({"member": False, "reason": "not_psd", "message": str(exc)})
        return 1
    _print_json(verdict.to_json_dict())
    return 0 if verdict.member else 1


def cmd_cycle_fiber(args) -> int:
    sigma = CycleMatrix.from_symmetric(SymmetricMatrix.from_json_dict(load_json(args.matrix)))
    try:
        fib = cycle_fiber(sigma, tol=args.tol)
    except (NotMember, NotPsd) as exc:
        _print_json({"error": {"code": _code_for(exc), "message": str(exc)}})
        return 1
    _print_json({
        "m": fib.m,
        "count_total": fib.count_total,
        "complex": fib.complex.to_json_dict(),
        "representatives": [rep.to_json_dict() for rep in fib.representatives],
    })
    return 0


def cmd_counterexample(args) -> int:
    sigma = counterexample_sigma(args.m, args.rho)
    out = sigma.to_symmetric().to_json_dict()
    out["det_closed_form"] = counterexample_det(args.m, args.rho)
    _print_json(out)
    return 0


def cmd_quotient(args) -> int:
    delta = SimplicialComplex.from_json_dict(load_json(args.complex))
    block = [int(v) - 1 for v in args.remove.split(",") if v.strip()]
    quot = complex_quotient(delta, block)
    keep = [v for v in range(delta.m) if v not in set(block)]
    out = quot.to_json_dict()
    out["vertex_map"] = {str(v + 1): k + 1 for k, v in enumerate(keep)}
    _print_json(out)
    return 0


def cmd_schur_witness(args) -> int:
    delta = SimplicialComplex.from_json_dict(load_json(args.complex))
    gamma = FactorParams.from_json_dict(delta, load_json(args.params))
    witness = schur_witness(delta, gamma, args.vertex - 1, tol=args.tol)
    from .linalg import schur_complement

    target = schur_complement(phi(delta, gamma), {args.vertex - 1})
    resid = float(np.abs(witness.image().a - target.a).max())
    _print_json({
        "quotient_complex": witness.quotient_complex.to_json_dict(),
        "params": witness.params.to_json_dict(),
        "vertex_map": {str(k + 1): v + 1 for k, v in witness.vertex_map.items()},
        "eliminated": [u + 1 for u in witness.eliminated],
        "residual": resid,
    })
    return 0


def cmd_volume(args) -> int:
    if args.table:
        estimates = volume_table(args.samples, args.seed, workers=args.workers,
                                 progress=args.progress)
        if args.json:
            _print_json([e.to_json_dict() for e in estimates])
        else:
            print(format_table(estimates))
        return 0
    if args.m is None:
        raise ValueError("volume needs --m or --table")
    est = estimate_volume(args.m, args.samples, args.seed, workers=args.workers,
                          progress=args.progress)
    _print_json(est.to_json_dict())
    return 0


def cmd_digraph(args) -> int:
    delta = SimplicialComplex.from_json_dict(load_json(args.complex))
    sys.stdout.write(build_digraph(delta))
    return 0


def cmd_simulate(args) -> int:
    delta = SimplicialComplex.from_json_dict(load_json(args.complex))
    gamma = FactorParams.from_json_dict(delta, load_json(args.params))
    _print_json(simulate_y(delta, gamma, args.n, args.seed).to_json_dict())
    return 0


def cmd_membership(args) -> int:
    sigma = SymmetricMatrix.from_json_dict(load_json(args.matrix))
    g, delta = _load_graph_or_complex(args.graph)
    if sigma.m != g.m:
        return _error_json("invalid_input", "matrix and graph sizes differ")
    if not sigma.respects_pattern(g):
        return _error_json("pattern_violation",
                           "matrix has a nonzero entry at a non-edge of the graph")

    chordal_ok, _ = is_chordal(g)
    if chordal_ok and (delta is None or delta == clique_complex(g)):
        try:
            gamma = chordal_fiber(g, sigma, tol=args.tol)
        except NotPsd as exc:
            _print_json({"member": False, "method": "chordal",
                         "reason": "not_psd", "message": str(exc)})
            return 1
        image = phi(gamma.complex, gamma)
        if np.abs(image.a - sigma.a).max() > 1e-8 * sigma.scale():
            raise InternalInconsistency("certificate does not reproduce the input")
        _print_json({"member": True, "boundary": False, "method": "chordal",
                     "certificate": gamma.to_json_dict(),
                     "complex": gamma.complex.to_json_dict()})
        return 0

    if _is_cycle_graph(g) and (delta is None or delta == edge_complex(g)):
        order = _cycle_order(g)
        cyc = _relabeled_cycle_matrix(sigma, order)
        try:
            verdict = cycle_membership(cyc, tol=args.tol)
        except NotPsd as exc:
            _print_json({"member": False, "method": "cycle",
                         "reason": "not_psd", "message": str(exc)})
            return 1
        out = verdict.to_json_dict()
        out["vertex_order"] = [v + 1 for v in order]
        if not verdict.member:
            worst = int(np.argmin(verdict.flip_determinants))
            out["violated"] = {
                "edge": [order[worst] + 1, order[(worst + 1) % g.m] + 1],
                "flip_determinant": verdict.flip_determinants[worst],
                "det": verdict.det,
            }
            _print_json(out)
            return 1
        try:
            fib = cycle_fiber(cyc, tol=args.tol)
        except (Degenerate, NotMember):
            out["certificate"] = None
        else:
            # map the representative back to the original vertex labels
            rep = fib.representatives[0]
            delta_orig = edge_complex(g)
            values = {}
            for (face, i), v in rep.values.items():
                orig_face = tuple(sorted(order[w] for w in face))
                values[(orig_face, order[i])] = v
            cert = FactorParams(delta_orig, values)
            image = phi(delta_orig, cert)
            if np.abs(image.a - sigma.a).max() > 1e-8 * sigma.scale():
                raise InternalInconsistency("certificate does not reproduce the input")
            out["certificate"] = cert.to_json_dict()
            out["complex"] = delta_orig.to_json_dict()
        _print_json(out)
        return 0

    return _error_json(
        "undecidable",
        "graph is neither chordal nor a chordless cycle; no exact test applies",
    )


def cmd_selftest(args) -> int:
    names = args.suite if args.suite else None
    ok, lines = selftest.run_suites(names, n=args.n, seed=args.seed, inject=args.inject)
    for line in lines:
        print(line)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psdcone",
        description="PSD cones with prescribed zeros: parametrization, membership, fibers",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="relative tolerance for PSD and membership decisions")
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument("--json", action="store_true",
                        help="force JSON output where a text form is the default")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("phi", help="evaluate the parametrization")
    p.add_argument("--complex", required=True)
    p.add_argument("--params", required=True)
    p.set_defaults(func=cmd_phi)

    p = add_parser("fiber", help="solve for a preimage on a chordal graph")
    p.add_argument("--chordal", action="store_true",
                   help="use the chordal Cholesky construction (required)")
    p.add_argument("--matrix", required=True)
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_fiber)

    p = add_parser("cycle-check", help="membership test for a cycle-patterned matrix")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_cycle_check)

    p = add_parser("cycle-fiber", help="solve the fiber over a cycle-patterned member")
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_cycle_fiber)

    p = add_parser("counterexample", help="the PSD-but-not-member family")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--rho", type=float, required=True)
    p.set_defaults(func=cmd_counterexample)

    p = add_parser("quotient", help="complex quotient by a vertex block")
    p.add_argument("--complex", required=True)
    p.add_argument("--remove", required=True, help="comma-separated 1-based vertices")
    p.set_defaults(func=cmd_quotient)

    p = add_parser("schur-witness", help="witness parameters for a Schur complement")
    p.add_argument("--complex", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--vertex", type=int, required=True, help="1-based vertex to eliminate")
    p.set_defaults(func=cmd_schur_witness)

    p = add_parser("volume", help="Monte Carlo spherical volume fraction")
    p.add_argument("--m", type=int)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--table", action="store_true", help="run m = 3..7")
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_volume)

    p = add_parser("digraph", help="bipartite factor digraph in DOT form")
    p.add_argument("--complex", required=True)
    p.set_defaults(func=cmd_digraph)

    p = add_parser("simulate", help="empirical covariance of the latent model")
    p.add_argument("--complex", required=True)
    p.add_argument("--params", required=True)
    p.add_argument("--n", type=int, default=10_000)
    p.set_defaults(func=cmd_simulate)

    p = add_parser("membership", help="decide membership for chordal or cycle graphs")
    p.add_argument("--matrix", required=True)
    p.add_argument("--graph", required=True, help="graph or complex JSON file")
    p.set_defaults(func=cmd_membership)

    p = add_parser("selftest", help="run reduced property suites")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--suite", action="append",
                   help="restrict to a suite (repeatable): " + ", ".join(selftest.SUITES))
    p.add_argument("--inject", choices=sorted(selftest.SUITES),
                   help="test hook: perturb one suite so it must fail")
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PsdConeError as exc:
        return _error_json(_code_for(exc), str(exc))
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        return _error_json(_code_for(exc), str(exc))


if __name__ == "__main__":
    sys.exit(main())
