"""JSON reading with located errors, and a stable compact writer."""

from __future__ import annotations

import json
import re
from pathlib import Path
from typing import Any

from .abelian import AbelianGroupError, FGAbelianGroup, GroupHom, group_from_relations

_FLAT_LIST = re.compile(r"\[\s*((?:(?:\"[^\"\\]*\"|-?\d+|true|false|null)\s*,\s*)*(?:\"[^\"\\]*\"|-?\d+|true|false|null))\s*\]")


class InputError(ValueError):
    """Malformed or unreadable input; the message carries its location."""


def dumps(obj: Any, sort_keys: bool = False) -> str:
    """Indented JSON with lists of scalars kept on one line."""
    text = json.dumps(obj, indent=2, sort_keys=sort_keys, ensure_ascii=False)
    return _FLAT_LIST.sub(lambda m: json.dumps(json.loads(m.group(0)), ensure_ascii=False), text)


def load(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror or exc})") from None
    return loads(text, str(path))


def loads(text: str, where: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{where}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def parse_int(v, where: str = "value") -> int:
    if isinstance(v, bool):
        raise InputError(f"{where}: expected an integer")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip())
        except ValueError:
            pass
    raise InputError(f"{where}: expected an integer or decimal string, got {v!r}")


def group_from_json(obj: Any, where: str = "group") -> FGAbelianGroup:
    if not isinstance(obj, dict) or "generators" not in obj:
        raise InputError(f"{where}: expected {{'generators': k, 'relations': [...]}}")
    k = parse_int(obj["generators"], f"{where}.generators")
    if k < 0:
        raise InputError(f"{where}.generators: must be >= 0")
    rels = obj.get("relations", [])
    if not isinstance(rels, list):
        raise InputError(f"{where}.relations: expected a list")
    out = []
    for i, r in enumerate(rels):
        if not isinstance(r, list) or len(r) != k:
            raise InputError(f"{where}.relations[{i}]: expected {k} integers")
        out.append([parse_int(c, f"{where}.relations[{i}]") for c in r])
    return group_from_relations(k, out)


def group_to_json(A: FGAbelianGroup) -> dict:
    return {"generators": A.num_generators, "relations": [[str(c) for c in r] for r in A.relations.data]}


def matrix_from_json(obj: Any, rows: int, cols: int, where: str) -> list[list[int]]:
    if not isinstance(obj, list) or len(obj) != rows:
        raise InputError(f"{where}: expected {rows} rows")
    out = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise InputError(f"{where}[{i}]: expected {cols} entries")
        out.append([parse_int(c, f"{where}[{i}]") for c in row])
    return out


def hom_from_json(obj: Any, source: FGAbelianGroup | None = None, target: FGAbelianGroup | None = None,
                  where: str = "hom") -> GroupHom:
    """Parse ``{"source", "target", "matrix"}``; groups may be supplied instead."""
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise InputError(f"{where}: expected an object with 'matrix'")
    src = group_from_json(obj["source"], f"{where}.source") if "source" in obj else source
    tgt = group_from_json(obj["target"], f"{where}.target") if "target" in obj else (target or src)
    if src is None or tgt is None:
        raise InputError(f"{where}: source group missing")
    if source is not None and src != source:
        raise InputError(f"{where}.source: does not match the given group")
    M = matrix_from_json(obj["matrix"], tgt.num_generators, src.num_generators, f"{where}.matrix")
    try:
        return GroupHom(src, tgt, M)
    except AbelianGroupError as exc:
        raise InputError(f"{where}: {exc}") from None


def hom_to_json(h: GroupHom) -> dict:
    return {"source": group_to_json(h.source), "target": group_to_json(h.target),
            "matrix": [[str(c) for c in r] for r in h.matrix.tolist()]}
