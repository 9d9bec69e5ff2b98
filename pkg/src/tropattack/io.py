"""Matrix documents: JSON ``{rows, cols, data}`` and plain TSV.

Entries are written as integers, ``"p/q"`` strings or ``"-inf"``, so a
round trip is exact.
"""

from __future__ import annotations

import json
import os

from .errors import InputError, ParseError
from .matrix import TropMatrix
from .scalar import NEG_INF, as_scalar, format_scalar

FORMATS = ("json", "tsv")


def to_document(M: TropMatrix) -> dict:
    return {
        "rows": M.rows,
        "cols": M.cols,
        "data": [[scalar_out(x) for x in row] for row in M.to_rows()],
    }


def _entry_in(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise ParseError(f"entry must be an integer, 'p/q' or '-inf', got {x!r}", entry=where)
    try:
        return as_scalar(x)
    except InputError:
        raise ParseError(f"bad entry {x!r}", entry=where) from None


def from_document(doc) -> TropMatrix:
    """Inverse of ``to_document``; a bare list of rows is also accepted."""
    if isinstance(doc, list):
        data = doc
        rows = cols = None
    elif isinstance(doc, dict):
        if "data" not in doc:
            raise ParseError("document has no 'data' field")
        data, rows, cols = doc["data"], doc.get("rows"), doc.get("cols")
    else:
        raise ParseError("document must be an object or a list of rows")
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ParseError("'data' must be a non-empty list of rows")
    if rows is not None and rows != len(data):
        raise ParseError(f"'rows' says {rows} but data has {len(data)} rows")
    width = len(data[0])
    for i, r in enumerate(data):
        if len(r) != width:
            raise ParseError(f"row {i + 1} has {len(r)} entries, expected {width}", entry=(i, 0))
    if cols is not None and cols != width:
        raise ParseError(f"'cols' says {cols} but rows have {width} entries")
    if width == 0:
        raise ParseError("rows are empty")
    vals = [[_entry_in(x, (i, j)) for j, x in enumerate(r)] for i, r in enumerate(data)]
    return TropMatrix(vals)


def dumps_json(M: TropMatrix) -> str:
    doc = to_document(M)
    body = ",\n".join("    " + json.dumps(r) for r in doc["data"])
    return f'{{\n  "rows": {M.rows},\n  "cols": {M.cols},\n  "data": [\n{body}\n  ]\n}}\n'


def loads_json(text: str) -> TropMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return from_document(doc)


def dumps_tsv(M: TropMatrix) -> str:
    return "".join(
        "\t".join(format_scalar(x) for x in row) + "\n" for row in M.to_rows()
    )


def loads_tsv(text: str) -> TropMatrix:
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        row = []
        col = 1
        for field in line.split("\t"):
            tok = field.strip()
            try:
                row.append(as_scalar(tok))
            except InputError:
                raise ParseError(
                    f"bad entry {tok!r}", line=lineno, column=col, entry=(len(rows), len(row))
                ) from None
            col += len(field) + 1
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"expected {width} entries, found {len(row)}", line=lineno, column=1)
        rows.append(row)
    if not rows:
        raise ParseError("no matrix rows found")
    return TropMatrix(rows)


def dumps(M: TropMatrix, fmt: str = "json") -> str:
    if fmt == "json":
        return dumps_json(M)
    if fmt == "tsv":
        return dumps_tsv(M)
    raise InputError(f"unknown format {fmt!r}")


def loads(text: str, fmt: str | None = None) -> TropMatrix:
    """Parse ``text``; without ``fmt`` a leading ``{`` or ``[`` means JSON."""
    if fmt is None:
        fmt = "json" if text.lstrip()[:1] in ("{", "[") else "tsv"
    if fmt == "json":
        return loads_json(text)
    if fmt == "tsv":
        return loads_tsv(text)
    raise InputError(f"unknown format {fmt!r}")


def _format_for(path, fmt):
    if fmt:
        return fmt
    ext = os.path.splitext(str(path))[1].lower()
    return {".json": "json", ".tsv": "tsv", ".txt": "tsv"}.get(ext)


def read_matrix(path, fmt: str | None = None) -> TropMatrix:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read(), _format_for(path, fmt))


def write_matrix(M: TropMatrix, path, fmt: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(M, _format_for(path, fmt) or "json"))


def matrix_io_roundtrip(M: TropMatrix, fmt: str = "json") -> TropMatrix:
    return loads(dumps(M, fmt), fmt)


def scalar_out(x) -> int | str:
    """JSON-friendly scalar: int when integral, else a string."""
    x = as_scalar(x)
    if x is NEG_INF:
        return "-inf"
    return int(x) if x.denominator == 1 else format_scalar(x)
