"""Input documents: parsing (JSON or bare CSV), validation and serialization."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional

import jsonschema

from .errors import InvalidInput, ParseError

DMAX = 3


@lru_cache(maxsize=1)
def input_schema() -> dict:
    text = resources.files("sdgkit").joinpath("schema/input.schema.json").read_text("utf-8")
    return json.loads(text)


@dataclass
class InputDocument:
    points: list
    trajectories: Optional[list] = None
    body: Optional[dict] = None
    metadata: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        d = {"points": [[float(x), float(y)] for x, y in self.points]}
        if self.trajectories is not None:
            d["trajectories"] = [{"x": [float(c) for c in t["x"]], "y": [float(c) for c in t["y"]]}
                                 for t in self.trajectories]
        if self.body is not None:
            d["body"] = self.body
        if self.metadata:
            d["metadata"] = self.metadata
        return d


def _reject_constant(name):
    raise InvalidInput(f"non-finite number {name} in input")


def _location(text: str, pos: int) -> str:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return f"line {line}, column {col}"


def _parse_csv(text: str) -> dict:
    pts = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, found {len(row)}", f"line {lineno}, column 1")
        vals = []
        col = 1
        for cell in row:
            try:
                v = float(cell)
            except ValueError:
                raise ParseError(f"not a number: {cell.strip()!r}", f"line {lineno}, column {col}") from None
            if not math.isfinite(v):
                raise InvalidInput(f"non-finite coordinate at line {lineno}")
            vals.append(v)
            col += len(cell) + 1
        pts.append(vals)
    return {"points": pts}


def parse_input(data, dmax: int = DMAX) -> InputDocument:
    """Parse UTF-8 JSON (an input document) or CSV (bare points)."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError("input is not UTF-8", f"byte {exc.start}") from None
    else:
        text = data
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            raw = json.loads(text, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    else:
        raw = _parse_csv(text)
    try:
        jsonschema.validate(raw, input_schema())
    except jsonschema.ValidationError as exc:
        path = "$" + "".join(f"[{p!r}]" if isinstance(p, str) else f"[{p}]" for p in exc.absolute_path)
        raise ParseError(exc.message, path) from None
    trajs = raw.get("trajectories")
    if trajs is not None:
        if len(trajs) != len(raw["points"]):
            raise ParseError("need one trajectory per point", "$['trajectories']")
        for i, t in enumerate(trajs):
            for c in ("x", "y"):
                if len(t[c]) - 1 > dmax:
                    raise ParseError(f"trajectory degree {len(t[c]) - 1} exceeds {dmax}",
                                     f"$['trajectories'][{i}][{c!r}]")
    return InputDocument(raw["points"], trajs, raw.get("body"), raw.get("metadata") or {})


def dumps(obj) -> bytes:
    """Canonical JSON bytes: sorted keys, fixed indentation, trailing newline."""
    return (json.dumps(obj, sort_keys=True, indent=1, allow_nan=False) + "\n").encode("utf-8")


def serialize(doc: InputDocument) -> bytes:
    return dumps(doc.to_json())


def write_atomic(path: str, data: bytes) -> None:
    """Write the whole file or nothing (temp file in the same directory)."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
