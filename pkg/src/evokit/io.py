"""Algebra file format (JSON) and DOT export helpers.

Evolution form:
    {"field": "Q"|"F<p>", "dim": n, "kind": "evolution", "matrix": [[..str..]]}
General commutative form:
    {"field": ..., "dim": n, "kind": "tensor",
     "tensor": [{"i": 1, "j": 1, "k": 2, "c": "1"}, ...]}   # 1-based, i <= j

Scalars are serialized as strings ("a/b" over Q with the denominator omitted
when 1, the decimal residue over F_p); integers are accepted on input.
"""

from __future__ import annotations

import json

from .algebra import EvolutionMatrix, StructureTensor
from .errors import ParseError
from .field import make_field


def _coerce_scalar_text(value):
    if isinstance(value, bool):
        raise ParseError("booleans are not scalars")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return value
    raise ParseError(f"scalar must be a string or integer, got {value!r}")


def algebra_to_dict(obj) -> dict:
    field = obj.field
    if isinstance(obj, EvolutionMatrix):
        return {
            "field": str(field.spec),
            "dim": obj.dim,
            "kind": "evolution",
            "matrix": [[field.format_scalar(a) for a in row] for row in obj.rows],
        }
    if isinstance(obj, StructureTensor):
        records = []
        for (i, j) in sorted(obj.table):
            vec = obj.table[(i, j)]
            for k, c in enumerate(vec):
                if not field.is_zero(c):
                    records.append(
                        {"i": i + 1, "j": j + 1, "k": k + 1, "c": field.format_scalar(c)}
                    )
        return {
            "field": str(field.spec),
            "dim": obj.dim,
            "kind": "tensor",
            "tensor": records,
        }
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def algebra_from_dict(data):
    if not isinstance(data, dict):
        raise ParseError("algebra file must be a JSON object")
    try:
        field = make_field(str(data["field"]))
        dim = data["dim"]
        kind = data["kind"]
    except KeyError as exc:
        raise ParseError(f"missing key {exc.args[0]!r}") from exc
    if not isinstance(dim, int) or dim < 1:
        raise ParseError(f"dim must be a positive integer, got {dim!r}")
    if kind == "evolution":
        matrix = data.get("matrix")
        if not isinstance(matrix, list) or len(matrix) != dim:
            raise ParseError("matrix must be a dim x dim array")
        rows = []
        for row in matrix:
            if not isinstance(row, list) or len(row) != dim:
                raise ParseError("matrix must be a dim x dim array")
            rows.append([field.parse_scalar(_coerce_scalar_text(a)) for a in row])
        return EvolutionMatrix(field, rows)
    if kind == "tensor":
        records = data.get("tensor")
        if not isinstance(records, list):
            raise ParseError("tensor must be a list of records")
        table = {}
        for rec in records:
            try:
                i, j, k = int(rec["i"]) - 1, int(rec["j"]) - 1, int(rec["k"]) - 1
                c = field.parse_scalar(_coerce_scalar_text(rec["c"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"bad tensor record {rec!r}") from exc
            if not (0 <= i <= j < dim) or not (0 <= k < dim):
                raise ParseError(f"tensor record indices out of range: {rec!r}")
            vec = table.setdefault((i, j), [field.zero] * dim)
            vec[k] = field.add(vec[k], c)
        return StructureTensor(field, dim, table)
    raise ParseError(f"unknown kind {kind!r}")


def dump_algebra(obj, path=None) -> str:
    text = json.dumps(algebra_to_dict(obj), indent=2, sort_keys=True) + "\n"
    if path is not None:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def load_algebra(path):
    with open(path) as fh:
        return loads_algebra(fh.read())


def loads_algebra(text: str):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return algebra_from_dict(data)
