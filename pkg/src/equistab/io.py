"""JSON input handling: reading values given as files, inline JSON or stdin,
schema validation, and digests for run manifests."""
from __future__ import annotations

import hashlib
import json
import sys
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema

from .errors import ValidationError

SCHEMAS = ("gcw", "gset", "mackey", "manifold", "module", "sequence", "representation")


@lru_cache(maxsize=None)
def load_schema(kind: str) -> dict:
    if kind not in SCHEMAS:
        raise KeyError(kind)
    text = resources.files("equistab.schemas").joinpath(f"{kind}.json").read_text()
    return json.loads(text)


def validate(data, kind: str) -> None:
    """Check ``data`` against the shipped schema; a declared "schema" tag must match."""
    tag = data.get("schema") if isinstance(data, dict) else None
    if tag is not None and tag != f"equistab.{kind}/1":
        raise ValidationError(f"input declares schema {tag!r}, expected 'equistab.{kind}/1'")
    try:
        jsonschema.validate(data, load_schema(kind))
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ValidationError(f"{kind} input invalid at {where}: {exc.message}") from None


class InputSource:
    """A JSON value read from a path, '-' (stdin) or inline text, with its digest."""

    def __init__(self, spec: str):
        self.spec = spec
        if spec == "-":
            raw = sys.stdin.read()
            self.origin = "stdin"
        elif Path(spec).is_file():
            raw = Path(spec).read_text()
            self.origin = spec
        else:
            raw = spec
            self.origin = "inline"
        self.digest = hashlib.sha256(raw.encode()).hexdigest()
        try:
            self.data = json.loads(raw)
        except json.JSONDecodeError as exc:
            if self.origin == "inline" and not raw.lstrip().startswith(("{", "[", '"')) and not raw.strip().isdigit():
                raise ValidationError(f"{spec!r} is neither a readable file nor JSON") from None
            raise ValidationError(f"malformed JSON in {self.origin}: {exc.msg} (line {exc.lineno})") from None


def dumps(obj, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)
    return render_table(obj)


def _cell(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, separators=(",", ":"), ensure_ascii=False)
    if v is None:
        return "-"
    return str(v)


def render_table(obj) -> str:
    """Plain-text rendering: lists of flat records become aligned columns."""
    if isinstance(obj, list) and obj and all(isinstance(r, dict) for r in obj):
        cols: list[str] = []
        for r in obj:
            for k in r:
                if k not in cols:
                    cols.append(k)
        rows = [[_cell(r.get(c)) for c in cols] for r in obj]
        widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(cols)]
        line = lambda cells: "  ".join(s.ljust(w) for s, w in zip(cells, widths)).rstrip()
        return "\n".join([line(cols), line(["-" * w for w in widths])] + [line(r) for r in rows])
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            if isinstance(v, list) and v and all(isinstance(r, dict) for r in v):
                out.append(f"{k}:")
                out.extend("  " + s for s in render_table(v).splitlines())
            else:
                out.append(f"{k}: {_cell(v)}")
        return "\n".join(out)
    return _cell(obj)
