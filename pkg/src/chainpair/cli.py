"""Command-line surface for the solvers and the benchmark harness.

Chain inputs are csv/json files or PDB selectors of the form
``entry.pdb:A``.  Exit codes: 0 success, 1 no solution, 2 usage or parse
errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import ChainPairError, NoSolutionError
from .geometry import Chain, discrete_frechet
from .one_sided import one_sided_cps3f_min, simplify_min_delta, simplify_min_k
from .pdb_io import load_chain, parse_pdb
from .solver import (
    ANCHORED,
    DEFAULT_CELL_BUDGET,
    FREE_DOGS,
    CpsParams,
    cps3f_min_dp,
    solve_with_cap_doubling,
    wcps3f_decision,
    wcps3f_min,
)
from . import bench as bench_mod

JSON_SCHEMA_VERSION = 1


def _load_input(spec: str, args) -> Chain:
    """Resolve a chain argument: ``file.pdb:C`` selector or csv/json path."""
    if ":" in spec and spec.rsplit(":", 1)[0].lower().endswith(".pdb"):
        path, chain_id = spec.rsplit(":", 1)
        rec = parse_pdb(path, chain_id, altloc=args.altloc, model=args.model,
                        include_hetatm=args.include_hetatm)
        return rec.chain
    if spec.lower().endswith(".pdb"):
        raise ChainPairError(f"{spec}: PDB inputs need a chain selector, e.g. {spec}:A")
    return load_chain(spec)


def _chain_parent() -> argparse.ArgumentParser:
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("chain_a", help="first chain: csv/json file or file.pdb:CHAIN")
    parent.add_argument("chain_b", help="second chain: csv/json file or file.pdb:CHAIN")
    parent.add_argument("--altloc", default="A",
                        help="alternate location kept besides blank (default A)")
    parent.add_argument("--model", type=int, default=1,
                        help="model number for multi-model PDB entries (default 1)")
    parent.add_argument("--include-hetatm", action="store_true",
                        help="also scan HETATM records for alpha carbons")
    return parent


def _emit_json(args, payload: dict) -> None:
    payload = {"schema_version": JSON_SCHEMA_VERSION, **payload}
    if args.json == "-":
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2)


def _cmd_frechet(args) -> int:
    a = _load_input(args.chain_a, args)
    b = _load_input(args.chain_b, args)
    res = discrete_frechet(a, b)
    print(f"{res.value:.17g}")
    if args.witness:
        print(" ".join(f"{i},{j}" for i, j in res.coupling))
    if args.json:
        _emit_json(args, {
            "command": "frechet",
            "value": res.value,
            "coupling": [list(pair) for pair in res.coupling] if args.witness else None,
        })
    return 0


def _params_from(args) -> CpsParams:
    return CpsParams(args.d1, args.d2, args.d3,
                     endpoint_mode=args.endpoint_mode, r_cap=args.r_cap)


def _cmd_cps3f(args) -> int:
    a = _load_input(args.chain_a, args)
    b = _load_input(args.chain_b, args)
    params = _params_from(args)
    if args.k is not None and args.k < 1:
        raise ValueError("--k must be a positive integer")
    if args.warm_cap:
        sol = solve_with_cap_doubling(a, b, params)
    else:
        sol = cps3f_min_dp(a, b, params, reconstruct=args.reconstruct,
                           cell_budget=args.cell_budget)
    k_star = int(sol.k_star)
    if args.k is not None:
        print("yes" if k_star <= args.k else "no")
    print(f"k_star={k_star}")
    if args.reconstruct and sol.a_indices is not None:
        print("a_indices=" + ",".join(map(str, sol.a_indices)))
        print("b_indices=" + ",".join(map(str, sol.b_indices)))
    if args.json:
        _emit_json(args, {
            "command": "cps3f",
            "delta1": params.delta1, "delta2": params.delta2, "delta3": params.delta3,
            "endpoint_mode": params.endpoint_mode,
            "len_a": len(a), "len_b": len(b),
            "k_star": k_star,
            "k": args.k,
            "decision": (k_star <= args.k) if args.k is not None else None,
            "r_cap_used": sol.r_cap_used,
            "a_indices": list(sol.a_indices) if sol.a_indices else None,
            "b_indices": list(sol.b_indices) if sol.b_indices else None,
            "stats": {
                "possible_configs": sol.stats.possible_configs,
                "peak_cells": sol.stats.peak_cells,
                "elapsed_seconds": sol.stats.elapsed_seconds,
            },
        })
    return 0


def _cmd_wcps3f(args) -> int:
    a = _load_input(args.chain_a, args)
    b = _load_input(args.chain_b, args)
    params = CpsParams(args.d1, args.d2, args.d3, endpoint_mode=args.endpoint_mode)
    if args.k is not None:
        print("yes" if wcps3f_decision(a, b, args.k, params) else "no")
        return 0
    best, sol = wcps3f_min(a, b, params)
    print(f"k_star_weight={best:.17g}")
    if args.json:
        _emit_json(args, {
            "command": "wcps3f",
            "delta1": params.delta1, "delta2": params.delta2, "delta3": params.delta3,
            "endpoint_mode": params.endpoint_mode,
            "len_a": len(a), "len_b": len(b),
            "k_star_weight": best,
            "stats": {
                "possible_configs": sol.stats.possible_configs,
                "peak_cells": sol.stats.peak_cells,
                "elapsed_seconds": sol.stats.elapsed_seconds,
            },
        })
    return 0


def _cmd_one_sided(args) -> int:
    a = _load_input(args.chain_a, args)
    b = _load_input(args.chain_b, args)
    k_star, indices = one_sided_cps3f_min(a, b, args.d1, args.d3)
    print(f"k_star={k_star}")
    print("a_indices=" + ",".join(map(str, indices)))
    return 0


def _cmd_min_k(args) -> int:
    a = _load_input(args.chain_a, args)
    b = _load_input(args.chain_b, args)
    length, indices = simplify_min_k(a, b, args.delta)
    print(f"length={length}")
    print("a_indices=" + ",".join(map(str, indices)))
    return 0


def _cmd_min_delta(args) -> int:
    a = _load_input(args.chain_a, args)
    b = _load_input(args.chain_b, args)
    delta_star, indices = simplify_min_delta(a, b, args.k)
    print(f"delta_star={delta_star:.17g}")
    print("a_indices=" + ",".join(map(str, indices)))
    return 0


def _cmd_bench(args) -> int:
    report = print if args.out is None else lambda msg: print(msg, file=sys.stderr)
    rows = bench_mod.run_table(
        args.table, rows=args.rows, cache_dir=args.cache_dir, fetch=args.fetch,
        endpoint_mode=args.endpoint_mode, warm_cap=args.warm_cap,
        timeout=args.timeout, report=report,
    )
    if args.out == "csv":
        sys.stdout.write(bench_mod.rows_to_csv(rows))
    elif args.out == "json":
        print(bench_mod.rows_to_json(rows))
    return 0 if all(r.status == "PASS" for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chainpair",
        description="Exact chain pair simplification under the discrete Frechet distance",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    chain_parent = _chain_parent()

    p = sub.add_parser("frechet", parents=[chain_parent],
                       help="discrete Frechet distance between two chains")
    p.add_argument("--witness", action="store_true", help="also print a coupling")
    p.add_argument("--json", metavar="PATH", help="write a JSON report (- for stdout)")
    p.set_defaults(func=_cmd_frechet)

    p = sub.add_parser("cps3f", parents=[chain_parent],
                       help="minimize max simplification length")
    p.add_argument("--d1", type=float, required=True, help="fidelity tolerance for A")
    p.add_argument("--d2", type=float, required=True, help="fidelity tolerance for B")
    p.add_argument("--d3", type=float, required=True, help="cross tolerance between A' and B'")
    p.add_argument("--k", type=int, help="also answer the at-most-k decision")
    p.add_argument("--endpoint-mode", choices=[FREE_DOGS, ANCHORED], default=FREE_DOGS)
    p.add_argument("--r-cap", type=int, help="cap on the budget axis (provable when beaten)")
    p.add_argument("--warm-cap", action="store_true",
                   help="grow the cap by doubling until the result is provable")
    p.add_argument("--reconstruct", action="store_true", help="emit witness index lists")
    p.add_argument("--cell-budget", type=int, default=DEFAULT_CELL_BUDGET,
                   help="cell budget guarding reconstruction memory")
    p.add_argument("--json", metavar="PATH", help="write a JSON report (- for stdout)")
    p.set_defaults(func=_cmd_cps3f)

    p = sub.add_parser("wcps3f", parents=[chain_parent],
                       help="minimize max simplification weight (weighted chains)")
    p.add_argument("--d1", type=float, required=True)
    p.add_argument("--d2", type=float, required=True)
    p.add_argument("--d3", type=float, required=True)
    p.add_argument("--k", type=float, help="answer the at-most-k weight decision")
    p.add_argument("--endpoint-mode", choices=[FREE_DOGS, ANCHORED], default=FREE_DOGS)
    p.add_argument("--json", metavar="PATH", help="write a JSON report (- for stdout)")
    p.set_defaults(func=_cmd_wcps3f)

    p = sub.add_parser("one-sided", parents=[chain_parent],
                       help="simplify only A, honoring both tolerances")
    p.add_argument("--d1", type=float, required=True)
    p.add_argument("--d3", type=float, required=True)
    p.set_defaults(func=_cmd_one_sided)

    p = sub.add_parser("simplify-min-k", parents=[chain_parent],
                       help="shortest simplification of A within delta of B")
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(func=_cmd_min_k)

    p = sub.add_parser("simplify-min-delta", parents=[chain_parent],
                       help="least achievable distance with at most k vertices")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_min_delta)

    p = sub.add_parser("bench", help="rerun the published PDB comparisons")
    p.add_argument("--table", required=True, choices=["1", "2", "3"])
    p.add_argument("--rows", nargs="+", metavar="LABEL",
                   help="subset of row labels, e.g. 1hfj.c")
    p.add_argument("--fetch", action="store_true",
                   help="download missing PDB entries into the cache")
    p.add_argument("--cache-dir", help="override the PDB cache directory")
    p.add_argument("--out", choices=["csv", "json"],
                   help="emit machine-readable rows on stdout")
    p.add_argument("--timeout", type=float, help="per-row timeout in seconds")
    p.add_argument("--warm-cap", action="store_true",
                   help="solve each row with the doubling cap strategy")
    p.add_argument("--endpoint-mode", choices=[FREE_DOGS, ANCHORED], default=FREE_DOGS)
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoSolutionError as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return 1
    except (ChainPairError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
