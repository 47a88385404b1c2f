"""Protein backbone ingestion and plain chain file formats.

PDB parsing is strict fixed-column (format v3.3): numeric fields can abut,
so whitespace splitting would mis-parse real entries.  The default
selection is ATOM records only, alpha-carbon atoms, the requested chain,
the first model, alternate location blank or 'A', and the first occurrence
per residue sequence number.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .errors import ChainFormatError, PdbParseError
from .geometry import Chain

__all__ = [
    "BackboneRecord",
    "parse_pdb",
    "load_chain",
    "save_chain",
    "fetch_pdb",
    "default_cache_dir",
]

_PDB_ID_RE = re.compile(r"^[0-9][A-Za-z0-9]{3}$")
_DOWNLOAD_URL = "https://files.rcsb.org/download/{pdb_id}.pdb"
CACHE_ENV_VAR = "CHAINPAIR_PDB_CACHE"


@dataclass(frozen=True)
class BackboneRecord:
    """Alpha-carbon trace of one chain of a PDB entry (angstroms)."""

    pdb_id: str
    chain_id: str
    chain: Chain
    residue_numbers: tuple[int, ...]


def _float_field(line: str, lo: int, hi: int, lineno: int, what: str) -> float:
    raw = line[lo:hi]
    try:
        return float(raw)
    except ValueError:
        raise PdbParseError(
            f"line {lineno}: malformed {what} field {raw!r}"
        ) from None


def _int_field(line: str, lo: int, hi: int, lineno: int, what: str) -> int:
    raw = line[lo:hi]
    try:
        return int(raw)
    except ValueError:
        raise PdbParseError(
            f"line {lineno}: malformed {what} field {raw!r}"
        ) from None


def parse_pdb(source, chain_id: str, altloc: str = "A", model: int = 1,
              include_hetatm: bool = False) -> BackboneRecord:
    """Extract one chain's alpha-carbon trace from PDB-format text.

    ``source`` may be bytes, text, or a path.  ``altloc`` selects which
    alternate-location indicator is kept besides blank; ``model`` selects
    the coordinate model in multi-model entries.
    """
    if len(chain_id) != 1:
        raise PdbParseError(f"chain id must be one character, got {chain_id!r}")
    if isinstance(source, bytes):
        text = source.decode("ascii", errors="replace")
    elif isinstance(source, Path):
        text = source.read_text()
    elif isinstance(source, str) and "\n" not in source and (
            source.lower().endswith(".pdb") or os.path.exists(source)):
        text = Path(source).read_text()
    else:
        text = str(source)

    record_types = ("ATOM",) if not include_hetatm else ("ATOM", "HETATM")
    pdb_id = ""
    current_model = 1
    chain_seen = False
    points: list[tuple[float, float, float]] = []
    residues: list[int] = []
    seen: set[int] = set()

    for lineno, line in enumerate(text.splitlines(), start=1):
        rec = line[0:6].strip()
        if rec == "HEADER" and len(line) >= 66:
            pdb_id = line[62:66].strip().lower()
            continue
        if rec == "MODEL":
            current_model = _int_field(line, 10, 14, lineno, "model number")
            continue
        if rec not in record_types:
            continue
        if current_model != model:
            continue
        if len(line) < 54:
            raise PdbParseError(f"line {lineno}: coordinate record too short")
        if line[21] != chain_id:
            continue
        chain_seen = True
        if line[12:16] != " CA ":
            continue
        if line[16] not in (" ", altloc):
            continue
        resseq = _int_field(line, 22, 26, lineno, "residue number")
        if resseq in seen:
            continue
        seen.add(resseq)
        x = _float_field(line, 30, 38, lineno, "x coordinate")
        y = _float_field(line, 38, 46, lineno, "y coordinate")
        z = _float_field(line, 46, 54, lineno, "z coordinate")
        points.append((x, y, z))
        residues.append(resseq)

    if not chain_seen:
        raise PdbParseError(f"chain {chain_id!r} not found")
    if not points:
        raise PdbParseError(f"chain {chain_id!r} has no matching alpha-carbon records")
    for a, b in zip(residues, residues[1:]):
        if b <= a:
            raise PdbParseError(
                f"residue numbers not strictly increasing after filtering: {a} -> {b}"
            )
    return BackboneRecord(
        pdb_id=pdb_id,
        chain_id=chain_id,
        chain=Chain(points),
        residue_numbers=tuple(residues),
    )


# ----------------------------------------------------------------------
# Plain chain formats

_CSV_HEADERS = {
    ("x", "y"): (2, False),
    ("x", "y", "z"): (3, False),
    ("x", "y", "weight"): (2, True),
    ("x", "y", "z", "weight"): (3, True),
}


def _format_for(path, fmt: str | None) -> str:
    if fmt is not None:
        if fmt not in ("csv", "json"):
            raise ChainFormatError(f"unsupported format {fmt!r}")
        return fmt
    suffix = Path(path).suffix.lower().lstrip(".")
    if suffix in ("csv", "json"):
        return suffix
    raise ChainFormatError(f"cannot infer format from {path!r}; pass format=")


def load_chain(path, format: str | None = None) -> Chain:
    """Load a chain from csv (``x,y[,z][,weight]``) or json.

    A csv header row from x,y[,z][,weight] is honored; without one, three
    columns mean a 3D point and four mean 3D plus weight.  JSON is either a
    bare list of coordinate rows or an object with ``points`` and an
    optional parallel ``weights`` list.  Loaded weights must be positive.
    """
    fmt = _format_for(path, format)
    text = Path(path).read_text()
    if not text.strip():
        raise ChainFormatError(f"{path}: empty chain file")
    if fmt == "json":
        points, weights = _parse_json_chain(text, path)
    else:
        points, weights = _parse_csv_chain(text, path)
    if weights is not None and any(w <= 0 for w in weights):
        raise ChainFormatError(f"{path}: weights must be positive")
    try:
        return Chain(points, weights)
    except ChainFormatError as exc:
        raise ChainFormatError(f"{path}: {exc}") from None


def _parse_json_chain(text: str, path):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ChainFormatError(f"{path}: invalid json ({exc})") from None
    if isinstance(data, list):
        return data, None
    if isinstance(data, dict) and "points" in data:
        return data["points"], data.get("weights")
    raise ChainFormatError(f"{path}: expected a list of points or a points/weights object")


def _parse_csv_chain(text: str, path):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    first = tuple(cell.strip().lower() for cell in lines[0].split(","))
    weights: list[float] | None = None
    if first in _CSV_HEADERS:
        dim, has_w = _CSV_HEADERS[first]
        rows = lines[1:]
        if not rows:
            raise ChainFormatError(f"{path}: header but no data rows")
    else:
        ncol = len(first)
        if ncol not in (2, 3, 4):
            raise ChainFormatError(f"{path}: rows must have 2-4 columns, got {ncol}")
        dim, has_w = (ncol, False) if ncol <= 3 else (3, True)
        rows = lines
    width = dim + (1 if has_w else 0)
    points = []
    if has_w:
        weights = []
    for lineno, row in enumerate(rows, start=1):
        cells = [c.strip() for c in row.split(",")]
        if len(cells) != width:
            raise ChainFormatError(
                f"{path}: row {lineno} has {len(cells)} columns, expected {width}"
            )
        try:
            nums = [float(c) for c in cells]
        except ValueError:
            raise ChainFormatError(f"{path}: row {lineno} has a non-numeric cell") from None
        points.append(tuple(nums[:dim]))
        if has_w:
            weights.append(nums[dim])
    return points, weights


def save_chain(chain: Chain, path, format: str | None = None) -> None:
    """Save a chain so that loading reproduces it bit-exactly.

    Coordinates are written with 17 significant decimal digits.  Weights
    are emitted only when some differ from one.
    """
    fmt = _format_for(path, format)
    has_w = bool((chain.weights != 1.0).any())
    if fmt == "json":
        payload: object = [[float(c) for c in row] for row in chain.coords]
        if has_w:
            payload = {"points": payload, "weights": [float(w) for w in chain.weights]}
        Path(path).write_text(json.dumps(payload))
        return
    lines = []
    if has_w:
        lines.append(",".join(("x", "y", "z")[: chain.dim]) + ",weight")
    for idx, row in enumerate(chain.coords):
        cells = [f"{c:.17g}" for c in row]
        if has_w:
            cells.append(f"{chain.weights[idx]:.17g}")
        lines.append(",".join(cells))
    Path(path).write_text("\n".join(lines) + "\n")


# ----------------------------------------------------------------------
# Archive fetch with a local cache


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "chainpair" / "pdb"


def fetch_pdb(pdb_id: str, cache_dir=None, timeout: float = 60.0) -> bytes:
    """Return the PDB-format entry, downloading once and caching by id."""
    pdb_id = str(pdb_id).lower()
    if not _PDB_ID_RE.match(pdb_id):
        raise ValueError(f"invalid PDB id {pdb_id!r}")
    cache = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    target = cache / f"{pdb_id}.pdb"
    if target.exists():
        return target.read_bytes()

    import requests

    try:
        resp = requests.get(_DOWNLOAD_URL.format(pdb_id=pdb_id), timeout=timeout)
        resp.raise_for_status()
    except requests.RequestException as exc:
        raise PdbParseError(f"fetch of {pdb_id!r} failed: {exc}") from None
    data = resp.content
    cache.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=cache, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return data
