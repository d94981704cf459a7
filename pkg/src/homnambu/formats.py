"""Text files for algebras (``.alg``), vectors (``.vec``) and matrices (``.mat``).

All three are JSON objects with a fixed set of keys written in a fixed order.
Indices are 1-based and scalars are strings (``"3"``, ``"-1/2"``; residues
over ``F_p``).  Parsing is strict: missing, unknown or duplicate keys and
out-of-range indices are errors.

``.alg``::

    {"field": {"kind": "Q"}, "arity": n, "dim": d, "basis": [...],
     "twists": [n-1 row-major d x d matrices],
     "product": [{"in": [i_1, .., i_n], "out": j, "c": "s"}, ...]}
"""

from __future__ import annotations

import json
from typing import List, Sequence

from .exactlin import FieldSpec, LinMap, MultiMap, Vector
from .homalg import HomAlgebra

ALG_KEYS = ("field", "arity", "dim", "basis", "twists", "product")
VEC_KEYS = ("field", "dim", "entries")
MAT_KEYS = ("field", "rows", "cols", "entries")


class FormatError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise FormatError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _load(text: str, keys: Sequence[str], what: str) -> dict:
    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{what}: not valid JSON ({exc})") from None
    if not isinstance(obj, dict):
        raise FormatError(f"{what}: top level must be an object")
    extra = set(obj) - set(keys)
    missing = [k for k in keys if k not in obj]
    if extra:
        raise FormatError(f"{what}: unknown field(s) {sorted(extra)}")
    if missing:
        raise FormatError(f"{what}: missing field(s) {missing}")
    return obj


def _int(x, name: str, lo: int = 0, hi: int = None) -> int:
    if type(x) is not int or x < lo or (hi is not None and x > hi):
        rng = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
        raise FormatError(f"{name} must be an integer in {rng}, got {x!r}")
    return x


def field_to_json(F: FieldSpec) -> dict:
    return {"kind": "Q"} if F.kind == "Q" else {"kind": "Fp", "p": F.p}


def field_from_json(obj) -> FieldSpec:
    if not isinstance(obj, dict):
        raise FormatError("field must be an object")
    kind = obj.get("kind")
    if kind == "Q" and set(obj) == {"kind"}:
        return FieldSpec.Q()
    if kind == "Fp" and set(obj) == {"kind", "p"}:
        try:
            return FieldSpec.Fp(_int(obj["p"], "p", 2))
        except ValueError as exc:
            raise FormatError(str(exc)) from None
    raise FormatError(f"bad field {obj!r}")


def _scalar(F: FieldSpec, s, where: str):
    if not isinstance(s, str):
        raise FormatError(f"{where}: scalars are strings, got {s!r}")
    try:
        return F.parse(s)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"{where}: bad scalar {s!r}") from None


def _matrix(F: FieldSpec, m, rows: int, cols: int, where: str) -> LinMap:
    if not isinstance(m, list) or len(m) != rows:
        raise FormatError(f"{where}: expected {rows} rows")
    out = []
    for r, row in enumerate(m):
        if not isinstance(row, list) or len(row) != cols:
            raise FormatError(f"{where}: row {r + 1} must have {cols} entries")
        out.append([_scalar(F, s, f"{where}[{r + 1}]") for s in row])
    return LinMap(F, out, cols)


def _dump(F: FieldSpec, head: List[str], blocks: List[tuple]) -> str:
    """Canonical layout: one key per line, one row / entry per line."""
    lines = ["{"]
    parts = [f'  "field": {json.dumps(field_to_json(F))}'] + head
    for key, items in blocks:
        if not items:
            parts.append(f'  "{key}": []')
        else:
            parts.append(f'  "{key}": [\n' + ",\n".join("    " + it for it in items) + "\n  ]")
    lines.append(",\n".join(parts))
    lines.append("}")
    return "\n".join(lines) + "\n"


def _row(F: FieldSpec, row) -> str:
    return json.dumps([F.format(c) for c in row])


# ---------------------------------------------------------------------------
# Algebras
# ---------------------------------------------------------------------------

def dump_algebra(A: HomAlgebra) -> str:
    F = A.field
    twists = []
    for t in A.twists:
        twists.append("[" + ", ".join(_row(F, r) for r in t.entries) + "]")
    product = []
    for inputs, out, c in A.product.entries():
        entry = {"in": [i + 1 for i in inputs], "out": out + 1, "c": F.format(c)}
        product.append(json.dumps(entry))
    head = [f'  "arity": {A.arity}', f'  "dim": {A.dim}', f'  "basis": {json.dumps(list(A.labels), ensure_ascii=False)}']
    return _dump(F, head, [("twists", twists), ("product", product)])


def parse_algebra(text: str) -> HomAlgebra:
    obj = _load(text, ALG_KEYS, "algebra file")
    F = field_from_json(obj["field"])
    n = _int(obj["arity"], "arity", 2)
    d = _int(obj["dim"], "dim", 0)
    basis = obj["basis"]
    if not isinstance(basis, list) or len(basis) != d or not all(isinstance(b, str) for b in basis):
        raise FormatError(f"basis must list {d} string labels")
    if len(set(basis)) != d:
        raise FormatError("basis labels must be distinct")
    tw = obj["twists"]
    if not isinstance(tw, list) or len(tw) != n - 1:
        raise FormatError(f"a {n}-ary algebra needs exactly {n - 1} twist matrices")
    twists = [_matrix(F, m, d, d, f"twist {k + 1}") for k, m in enumerate(tw)]
    entries = {}
    if not isinstance(obj["product"], list):
        raise FormatError("product must be a list of entries")
    for e in obj["product"]:
        if not isinstance(e, dict) or set(e) != {"in", "out", "c"}:
            raise FormatError(f"product entry must have exactly in/out/c: {e!r}")
        ins = e["in"]
        if not isinstance(ins, list) or len(ins) != n:
            raise FormatError(f"product entry needs {n} input indices: {e!r}")
        key = tuple(_int(i, "input index", 1, d) - 1 for i in ins)
        out = _int(e["out"], "output index", 1, d) - 1
        if out in entries.get(key, {}):
            raise FormatError(f"duplicate product entry {e!r}")
        entries.setdefault(key, {})[out] = _scalar(F, e["c"], "product")
    return HomAlgebra(MultiMap(F, n, d, entries), twists, basis)


# ---------------------------------------------------------------------------
# Vectors and matrices
# ---------------------------------------------------------------------------

def dump_vector(v: Vector, dim: int) -> str:
    F = v.field
    head = [f'  "dim": {dim}', f'  "entries": {_row(F, [v[k] for k in range(dim)])}']
    return _dump(F, head, [])


def parse_vector(text: str, field: FieldSpec = None, dim: int = None) -> Vector:
    obj = _load(text, VEC_KEYS, "vector file")
    F = field_from_json(obj["field"])
    d = _int(obj["dim"], "dim", 0)
    if field is not None and F != field:
        raise FormatError(f"vector over {F}, expected {field}")
    if dim is not None and d != dim:
        raise FormatError(f"vector of dimension {d}, expected {dim}")
    ent = obj["entries"]
    if not isinstance(ent, list) or len(ent) != d:
        raise FormatError(f"vector needs {d} entries")
    return Vector.from_dense(F, [_scalar(F, s, "vector") for s in ent])


def dump_matrix(L: LinMap) -> str:
    F = L.field
    head = [f'  "rows": {L.rows}', f'  "cols": {L.cols}']
    return _dump(F, head, [("entries", [_row(F, r) for r in L.entries])])


def parse_matrix(text: str, field: FieldSpec = None) -> LinMap:
    obj = _load(text, MAT_KEYS, "matrix file")
    F = field_from_json(obj["field"])
    if field is not None and F != field:
        raise FormatError(f"matrix over {F}, expected {field}")
    rows = _int(obj["rows"], "rows", 0)
    cols = _int(obj["cols"], "cols", 0)
    return _matrix(F, obj["entries"], rows, cols, "matrix")
