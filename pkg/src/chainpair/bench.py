"""Benchmark harness: rerun the published PDB comparisons and diff results.

Row specifications (ids, tolerances, expected optima) ship as a bundled
data file; each run parses the alpha-carbon traces, gates on the published
chain lengths, solves, and reports PASS/FAIL per row.  A length-gate
mismatch is a parsing problem, not a solver failure, and is reported as
its own status.
"""

from __future__ import annotations

import csv
import io
import json
import multiprocessing
import time
from dataclasses import asdict, dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .errors import ChainPairError, NoSolutionError
from .geometry import Chain
from .pdb_io import default_cache_dir, fetch_pdb, parse_pdb
from .solver import CpsParams, FREE_DOGS, cps3f_min_dp, solve_with_cap_doubling

__all__ = ["BenchRow", "load_reference_tables", "run_table", "rows_to_csv", "rows_to_json"]

BENCH_SCHEMA_VERSION = 1


@dataclass
class BenchRow:
    """One benchmark comparison in machine-readable form."""

    chain_a_id: str
    chain_b_id: str
    len_a: int
    len_b: int
    delta1: float
    delta2: float
    delta3: float
    endpoint_mode: str
    r_cap_used: Optional[int]
    k_star: Optional[int]
    expected_k: Optional[int]
    status: str  # PASS | FAIL | TIMEOUT | GATE_FAIL | ERROR
    elapsed_seconds: float
    peak_cells: int
    message: str = ""


def load_reference_tables() -> dict:
    with resources.files("chainpair.data").joinpath("bench_tables.json").open() as fh:
        return json.load(fh)


def _load_backbone(pdb_id: str, chain: str, cache_dir, fetch: bool):
    cache = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    path = cache / f"{pdb_id.lower()}.pdb"
    if not path.exists():
        if not fetch:
            raise ChainPairError(
                f"missing PDB data for {pdb_id} (expected {path}); rerun with --fetch"
            )
        fetch_pdb(pdb_id, cache_dir=cache)
    return parse_pdb(path, chain)


def _solve_row(chain_a: Chain, chain_b: Chain, params: CpsParams, warm_cap: bool):
    if warm_cap:
        return solve_with_cap_doubling(chain_a, chain_b, params)
    return cps3f_min_dp(chain_a, chain_b, params)


def _solve_row_child(conn, chain_a, chain_b, params, warm_cap):
    try:
        sol = _solve_row(chain_a, chain_b, params, warm_cap)
        conn.send(("ok", sol.k_star, sol.stats.elapsed_seconds,
                   sol.stats.peak_cells, sol.r_cap_used))
    except Exception as exc:  # reported as a row ERROR by the parent
        conn.send(("error", repr(exc)))
    finally:
        conn.close()


def run_row(spec: dict, anchor: dict, cache_dir=None, fetch: bool = False,
            endpoint_mode: str = FREE_DOGS, warm_cap: bool = False,
            timeout: Optional[float] = None) -> BenchRow:
    """Run one reference row and diff against its expected optimum."""
    base = BenchRow(
        chain_a_id=anchor["label"], chain_b_id=spec["label"],
        len_a=anchor["length"], len_b=spec["length"],
        delta1=spec["delta1"], delta2=spec["delta2"], delta3=spec["delta3"],
        endpoint_mode=endpoint_mode, r_cap_used=None,
        k_star=None, expected_k=spec["expected_k"], status="ERROR",
        elapsed_seconds=0.0, peak_cells=0,
    )
    t0 = time.perf_counter()
    try:
        rec_a = _load_backbone(anchor["pdb_id"], anchor["chain"], cache_dir, fetch)
        rec_b = _load_backbone(spec["pdb_id"], spec["chain"], cache_dir, fetch)
    except ChainPairError as exc:
        base.message = str(exc)
        base.elapsed_seconds = time.perf_counter() - t0
        raise

    gate = []
    if len(rec_a.chain) != anchor["length"]:
        gate.append(f"{anchor['label']}: parsed {len(rec_a.chain)}, published {anchor['length']}")
    if len(rec_b.chain) != spec["length"]:
        gate.append(f"{spec['label']}: parsed {len(rec_b.chain)}, published {spec['length']}")
    base.len_a = len(rec_a.chain)
    base.len_b = len(rec_b.chain)
    if gate:
        base.status = "GATE_FAIL"
        base.message = "; ".join(gate)
        base.elapsed_seconds = time.perf_counter() - t0
        return base

    params = CpsParams(spec["delta1"], spec["delta2"], spec["delta3"],
                       endpoint_mode=endpoint_mode)
    try:
        if timeout is None:
            sol = _solve_row(rec_a.chain, rec_b.chain, params, warm_cap)
            base.k_star = int(sol.k_star)
            base.peak_cells = sol.stats.peak_cells
            base.r_cap_used = sol.r_cap_used
        else:
            parent, child = multiprocessing.Pipe(duplex=False)
            proc = multiprocessing.Process(
                target=_solve_row_child,
                args=(child, rec_a.chain, rec_b.chain, params, warm_cap),
            )
            proc.start()
            child.close()
            if parent.poll(timeout):
                msg = parent.recv()
                proc.join()
                if msg[0] == "error":
                    base.status = "ERROR"
                    base.message = msg[1]
                    base.elapsed_seconds = time.perf_counter() - t0
                    return base
                _, k_star, _, peak, cap_used = msg
                base.k_star = int(k_star)
                base.peak_cells = peak
                base.r_cap_used = cap_used
            else:
                proc.terminate()
                proc.join()
                base.status = "TIMEOUT"
                base.message = f"aborted after {timeout}s"
                base.elapsed_seconds = time.perf_counter() - t0
                return base
    except NoSolutionError as exc:
        base.status = "FAIL"
        base.message = f"no solution: {exc}"
        base.elapsed_seconds = time.perf_counter() - t0
        return base

    base.elapsed_seconds = time.perf_counter() - t0
    base.status = "PASS" if base.k_star == base.expected_k else "FAIL"
    if base.status == "FAIL":
        base.message = f"k_star {base.k_star} != expected {base.expected_k}"
    return base


def run_table(table: str, rows=None, cache_dir=None, fetch: bool = False,
              endpoint_mode: str = FREE_DOGS, warm_cap: bool = False,
              timeout: Optional[float] = None, report=print) -> list[BenchRow]:
    """Run a whole reference table (optionally a subset of row labels)."""
    data = load_reference_tables()
    table = str(table)
    if table not in data["tables"]:
        raise ValueError(f"unknown table {table!r}; choose from {sorted(data['tables'])}")
    specs = data["tables"][table]
    if rows:
        wanted = set(rows)
        unknown = wanted - {s["label"] for s in specs}
        if unknown:
            raise ValueError(f"unknown row labels: {sorted(unknown)}")
        specs = [s for s in specs if s["label"] in wanted]
    results = []
    for spec in specs:
        row = run_row(spec, data["anchor"], cache_dir=cache_dir, fetch=fetch,
                      endpoint_mode=endpoint_mode, warm_cap=warm_cap,
                      timeout=timeout)
        report(f"[{row.status}] {row.chain_a_id} vs {row.chain_b_id} "
               f"d=({row.delta1},{row.delta2},{row.delta3}) "
               f"k_star={row.k_star} expected={row.expected_k} "
               f"elapsed={row.elapsed_seconds:.1f}s"
               + (f" ({row.message})" if row.message else ""))
        results.append(row)
    return results


_CSV_FIELDS = [
    "chain_a_id", "chain_b_id", "len_a", "len_b", "delta1", "delta2", "delta3",
    "endpoint_mode", "r_cap_used", "k_star", "expected_k", "status",
    "elapsed_seconds", "peak_cells", "message",
]


def rows_to_csv(rows: list[BenchRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS)
    writer.writeheader()
    for row in rows:
        writer.writerow(asdict(row))
    return buf.getvalue()


def rows_to_json(rows: list[BenchRow]) -> str:
    return json.dumps(
        {"schema_version": BENCH_SCHEMA_VERSION, "rows": [asdict(r) for r in rows]},
        indent=2,
    )
