"""JSON and CSV formats for signatures, models, SEMs and model classes.

Model file::

    {"signature": {"X": ["0", "1"], ...},
     "functions": {"Y": {"args": ["X"], "table": {"0": "1", "1": "0"}}},
     "rows": [{"assignment": {"X": "0", "Y": "1"}, "count": 2}, ...]}

Table keys are the argument values joined by commas, in ``args`` order.
"""

from __future__ import annotations

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Optional, Union

from .core import CausalFunction, CausalMultiteam, FunctionComponent, Multiteam, Signature
from .errors import ValidationError
from .rescaling import FiniteClass
from .sem_bridge import Sem

PathLike = Union[str, Path]


def _read_json(path: PathLike) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from None


def _require(data: dict, key: str, where: str) -> Any:
    if not isinstance(data, dict) or key not in data:
        raise ValidationError(f"{where}: missing key {key!r}")
    return data[key]


def signature_from_json(data: Any) -> Signature:
    if isinstance(data, dict) and "signature" in data:
        data = data["signature"]
    if not isinstance(data, dict) or not data:
        raise ValidationError("signature must be a nonempty object {var: [values]}")
    for var, values in data.items():
        if not isinstance(values, list):
            raise ValidationError(f"range of {var} must be a list")
    return Signature.from_dict(data)


def load_signature(path: PathLike) -> Signature:
    return signature_from_json(_read_json(path))


def functions_from_json(data: Any, sig: Signature) -> FunctionComponent:
    if data is None:
        return FunctionComponent()
    if not isinstance(data, dict):
        raise ValidationError("functions must be an object {var: {args, table}}")
    fns = []
    for var, spec in data.items():
        args = [str(a) for a in _require(spec, "args", f"function {var}")]
        raw = _require(spec, "table", f"function {var}")
        if not isinstance(raw, dict):
            raise ValidationError(f"table of {var} must be an object")
        table = {}
        for key, out in raw.items():
            values = tuple(key.split(",")) if args else ()
            if len(values) != len(args):
                raise ValidationError(f"table key {key!r} of {var} does not match args {args}")
            table[values] = str(out)
        fns.append(CausalFunction(str(var), args, table))
    return FunctionComponent(fns)


def rows_from_json(data: Any, sig: Signature) -> Multiteam:
    counts = []
    for i, row in enumerate(data or []):
        assignment = _require(row, "assignment", f"row {i}")
        count = row.get("count", 1)
        if not isinstance(count, int) or isinstance(count, bool) or count < 1:
            raise ValidationError(f"row {i}: count must be a positive integer")
        counts.append((sig.assignment(assignment), count))
    return Multiteam(counts)


def model_from_json(data: Any) -> CausalMultiteam:
    sig = signature_from_json(_require(data, "signature", "model"))
    laws = functions_from_json(data.get("functions"), sig)
    team = rows_from_json(data.get("rows"), sig)
    return CausalMultiteam(sig, team, laws)


def _infer_signature(header: list[str], records: list[list[str]]) -> Signature:
    ranges: dict[str, list[str]] = {v: [] for v in header}
    for rec in records:
        for var, value in zip(header, rec):
            if value not in ranges[var]:
                ranges[var].append(value)
    return Signature.from_dict(ranges)


def load_csv_model(path: PathLike, sidecar: Optional[PathLike] = None) -> CausalMultiteam:
    """One row per CSV record (count 1, duplicates aggregate); laws from a sidecar JSON.

    The sidecar defaults to the CSV path with a ``.json`` suffix and may also
    carry the signature; otherwise ranges are read off the data.
    """
    path = Path(path)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise ValidationError(f"{path}: empty CSV file") from None
        records = [[c.strip() for c in rec] for rec in reader if rec]
    for i, rec in enumerate(records):
        if len(rec) != len(header):
            raise ValidationError(f"{path}: record {i + 1} has {len(rec)} fields, expected {len(header)}")
    side_path = Path(sidecar) if sidecar else path.with_suffix(".json")
    side = _read_json(side_path) if side_path.exists() else {}
    sig = signature_from_json(side["signature"]) if "signature" in side else _infer_signature(header, records)
    laws = functions_from_json(side.get("functions"), sig)
    team = Multiteam((sig.assignment(dict(zip(header, rec))), 1) for rec in records)
    return CausalMultiteam(sig, team, laws)


def load_model(path: PathLike) -> CausalMultiteam:
    if str(path).lower().endswith(".csv"):
        return load_csv_model(path)
    return model_from_json(_read_json(path))


def functions_to_json(laws: FunctionComponent, sig: Signature) -> dict:
    out = {}
    for var in sorted(laws, key=sig.index):
        f = laws[var]
        table = {",".join(k): v for k, v in sorted(f.table.items(), key=lambda kv: _key_rank(f, sig, kv[0]))}
        out[var] = {"args": list(f.args), "table": table}
    return out


def _key_rank(f: CausalFunction, sig: Signature, key: tuple) -> tuple:
    return tuple(sig.ran(a).index(x) for a, x in zip(f.args, key))


def model_to_json(m: CausalMultiteam) -> dict:
    return {
        "signature": m.sig.to_dict(),
        "functions": functions_to_json(m.laws, m.sig),
        "rows": [{"assignment": m.sig.as_dict(s), "count": c} for s, c in m.rows()],
    }


def save_model(m: CausalMultiteam, path: PathLike) -> None:
    Path(path).write_text(json.dumps(model_to_json(m), indent=2) + "\n", encoding="utf-8")


def sem_from_json(data: Any) -> Sem:
    sig = signature_from_json(_require(data, "signature", "SEM"))
    laws = functions_from_json(data.get("functions"), sig)
    exo = [v for v in sig.dom if v not in laws]
    dist = {}
    for i, entry in enumerate(_require(data, "exo_dist", "SEM")):
        u = _require(entry, "u", f"exo_dist entry {i}")
        p = _require(entry, "p", f"exo_dist entry {i}")
        if set(u) != set(exo):
            raise ValidationError(f"exo_dist entry {i} must assign exactly {exo}")
        try:
            prob = Fraction(str(p))
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"exo_dist entry {i}: {p!r} is not a rational") from None
        key = tuple(str(u[v]) for v in exo)
        dist[key] = dist.get(key, Fraction(0)) + prob
    return Sem(sig, laws, dist)


def load_sem(path: PathLike) -> Sem:
    return sem_from_json(_read_json(path))


def sem_to_json(sem: Sem) -> dict:
    exo = sem.exogenous
    entries = sorted(sem.exo_dist.items(), key=lambda kv: tuple(sem.sig.ran(v).index(x) for v, x in zip(exo, kv[0])))
    return {
        "signature": sem.sig.to_dict(),
        "functions": functions_to_json(sem.laws, sem.sig),
        "exo_dist": [{"u": dict(zip(exo, u)), "p": str(p)} for u, p in entries],
    }


def load_class(path: PathLike) -> FiniteClass:
    """A JSON list whose entries are model paths (relative to the file) or inline models."""
    path = Path(path)
    data = _read_json(path)
    if not isinstance(data, list):
        raise ValidationError(f"{path}: a class file must hold a JSON list")
    members = []
    for entry in data:
        if isinstance(entry, str):
            members.append(load_model(path.parent / entry))
        else:
            members.append(model_from_json(entry))
    return FiniteClass(members)
