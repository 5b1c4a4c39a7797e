"""JSON presentations: ``sset/v1``, ``algsset/v1``, ``diagram/v1`` and ``category/v1``.

Writers emit sorted keys with levels in creation order, so equal values
serialize to identical bytes.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .algebraic import AlgebraicComplex, make_algebraic
from .colimits import DiagramSpec, Edge
from .errors import SchemaError, SimplicialError
from .horns import Horn, Mode
from .sset import (
    FiniteCategory,
    Provenance,
    SimplicialMap,
    TruncatedSimplicialSet,
    validate_map,
    validate_sset,
)

SSET = "sset/v1"
ALGSSET = "algsset/v1"
DIAGRAM = "diagram/v1"
CATEGORY = "category/v1"


class _Ctx:
    """Field paths with a best-effort line number into the source text."""

    def __init__(self, text: str | None, origin: str = ""):
        self.text = text
        self.origin = origin

    def line_of(self, key: str) -> int | None:
        if not self.text:
            return None
        idx = self.text.find(json.dumps(key))
        if idx < 0:
            return None
        return self.text.count("\n", 0, idx) + 1

    def error(self, message: str, path: str, key: str | None = None) -> SchemaError:
        where = f"{self.origin}:" if self.origin else ""
        line = self.line_of(key) if key is not None else None
        where += f"line {line}: " if line else ""
        return SchemaError(message, f"{where}{path}")


def _expect(cond: bool, ctx: _Ctx, message: str, path: str, key: str | None = None) -> None:
    if not cond:
        raise ctx.error(message, path, key)


# ---------------------------------------------------------------------------
# sset/v1


def dump_sset(X: TruncatedSimplicialSet, *, provenance: bool = True) -> dict:
    out: dict = {
        "schema": SSET,
        "truncation": X.truncation,
        "levels": [{"dim": n, "simplices": list(level)} for n, level in enumerate(X.levels)],
        "faces": {t: list(X.faces[t]) for t in X.tokens() if X.dim(t) > 0},
        "degeneracies": {t: list(X.degeneracies[t]) for t in X.tokens() if X.dim(t) < X.truncation},
    }
    if provenance and X.provenance:
        out["provenance"] = {t: p.to_json() for t, p in X.provenance.items()}
    return out


def load_sset(data: Any, ctx: _Ctx | None = None, path: str = "$") -> TruncatedSimplicialSet:
    ctx = ctx or _Ctx(None)
    _expect(isinstance(data, dict), ctx, "expected an object", path)
    schema = data.get("schema", SSET)
    _expect(schema == SSET, ctx, f"expected schema {SSET!r}, got {schema!r}", f"{path}.schema", "schema")
    D = data.get("truncation")
    _expect(isinstance(D, int) and D >= 0, ctx, "truncation must be a natural number", f"{path}.truncation", "truncation")
    raw_levels = data.get("levels")
    _expect(isinstance(raw_levels, list), ctx, "levels must be a list", f"{path}.levels", "levels")
    levels: list = [[] for _ in range(D + 1)]
    seen: dict = {}
    for j, entry in enumerate(raw_levels):
        p = f"{path}.levels[{j}]"
        _expect(isinstance(entry, dict) and "dim" in entry and "simplices" in entry, ctx, "expected {dim, simplices}", p)
        n = entry["dim"]
        _expect(isinstance(n, int) and 0 <= n <= D, ctx, f"dim {n!r} outside 0..{D}", f"{p}.dim")
        _expect(isinstance(entry["simplices"], list), ctx, "simplices must be a list", f"{p}.simplices")
        for t in entry["simplices"]:
            _expect(isinstance(t, str), ctx, f"token {t!r} is not a string", f"{p}.simplices")
            _expect(t not in seen, ctx, f"duplicate token {t!r}", f"{p}.simplices", t)
            seen[t] = n
            levels[n].append(t)
    faces_raw = data.get("faces", {})
    degens_raw = data.get("degeneracies", {})
    _expect(isinstance(faces_raw, dict), ctx, "faces must be an object", f"{path}.faces", "faces")
    _expect(isinstance(degens_raw, dict), ctx, "degeneracies must be an object", f"{path}.degeneracies", "degeneracies")
    faces, degens = {}, {}
    for t, n in seen.items():
        if n == 0:
            faces[t] = ()
        else:
            fs = faces_raw.get(t)
            _expect(fs is not None, ctx, f"simplex {t!r} has no face entry", f"{path}.faces[{t!r}]", t)
            _expect(isinstance(fs, list), ctx, "face entry must be a list", f"{path}.faces[{t!r}]", t)
            for i in range(n + 1):
                _expect(i < len(fs), ctx, f"simplex {t!r} is missing face {i}", f"{path}.faces[{t!r}][{i}]", t)
                f = fs[i]
                _expect(seen.get(f) == n - 1, ctx, f"face {i} of {t!r} ({f!r}) is not a {n - 1}-simplex",
                        f"{path}.faces[{t!r}][{i}]", t)
            _expect(len(fs) == n + 1, ctx, f"simplex {t!r} has {len(fs)} faces, expected {n + 1}", f"{path}.faces[{t!r}]", t)
            faces[t] = tuple(fs)
        if n == D:
            degens[t] = ()
            continue
        ds = degens_raw.get(t)
        _expect(ds is not None, ctx, f"simplex {t!r} has no degeneracy entry", f"{path}.degeneracies[{t!r}]", t)
        _expect(isinstance(ds, list) and len(ds) == n + 1, ctx,
                f"simplex {t!r} needs {n + 1} degeneracies", f"{path}.degeneracies[{t!r}]", t)
        for i, s in enumerate(ds):
            _expect(seen.get(s) == n + 1, ctx, f"degeneracy {i} of {t!r} ({s!r}) is not a {n + 1}-simplex",
                    f"{path}.degeneracies[{t!r}][{i}]", t)
        degens[t] = tuple(ds)
    for t in list(faces_raw) + list(degens_raw):
        _expect(t in seen, ctx, f"operator entry for unknown simplex {t!r}", path, t)
    prov = {}
    for t, p in (data.get("provenance") or {}).items():
        _expect(t in seen, ctx, f"provenance for unknown simplex {t!r}", f"{path}.provenance", t)
        prov[t] = Provenance.from_json(p)
    X = TruncatedSimplicialSet(D, tuple(tuple(level) for level in levels), faces, degens, prov)
    bad = validate_sset(X)
    if bad:
        v = bad[0]
        raise SimplicialError(f"{len(bad)} simplicial identity violations, first at {v.simplex!r}: {v.identity} {v.detail}", bad)
    return X


# ---------------------------------------------------------------------------
# algsset/v1


def dump_alg(
    A: AlgebraicComplex,
    *,
    partial: bool | None = None,
    residue=None,
    stage_of: Mapping[str, int] | None = None,
    uncovered=None,
) -> dict:
    X = A.underlying
    entries = sorted(A.table.items(), key=lambda kv: kv[0].sort_key(X))
    out: dict = {
        "schema": ALGSSET,
        "sset": dump_sset(X),
        "mode": A.mode.value,
        "table": [{"n": h.n, "k": h.k, "faces": list(h.faces), "filler": t} for h, t in entries],
    }
    if residue is not None:
        out["residue"] = [h.to_json() for h in residue]
    if uncovered is not None:
        out["uncovered"] = [h.to_json() for h in uncovered]
    if partial is None:
        partial = bool(residue) or bool(uncovered)
    out["partial"] = bool(partial)
    if stage_of is not None:
        out["stage_of"] = dict(stage_of)
    return out


def load_alg(data: Any, ctx: _Ctx | None = None, path: str = "$") -> AlgebraicComplex:
    ctx = ctx or _Ctx(None)
    _expect(isinstance(data, dict), ctx, "expected an object", path)
    _expect(data.get("schema") == ALGSSET, ctx, f"expected schema {ALGSSET!r}", f"{path}.schema", "schema")
    _expect("sset" in data, ctx, "missing field 'sset'", f"{path}.sset")
    X = load_sset(data["sset"], ctx, f"{path}.sset")
    try:
        mode = Mode.parse(data.get("mode"))
    except ValueError as exc:
        raise ctx.error(str(exc), f"{path}.mode", "mode") from None
    table = {}
    raw = data.get("table", [])
    _expect(isinstance(raw, list), ctx, "table must be a list", f"{path}.table", "table")
    for j, e in enumerate(raw):
        p = f"{path}.table[{j}]"
        _expect(isinstance(e, dict) and {"n", "k", "faces", "filler"} <= set(e), ctx,
                "table entries need n, k, faces, filler", p)
        h = Horn(int(e["n"]), int(e["k"]), tuple(e["faces"]))
        _expect(h not in table, ctx, f"duplicate table entry for {h}", p)
        table[h] = e["filler"]
    return make_algebraic(X, mode, table, require_total=not data.get("partial", False))


# ---------------------------------------------------------------------------
# category/v1


def dump_category(C: FiniteCategory) -> dict:
    return {
        "schema": CATEGORY,
        "objects": list(C.objects),
        "morphisms": {f: list(st) for f, st in C.morphisms.items()},
        "identities": dict(C.identities),
        "compose": [[f, g, h] for (f, g), h in C.compose.items()],
    }


def load_category(data: Any, ctx: _Ctx | None = None, path: str = "$") -> FiniteCategory:
    ctx = ctx or _Ctx(None)
    _expect(isinstance(data, dict) and data.get("schema") == CATEGORY, ctx, f"expected schema {CATEGORY!r}", path)
    for key in ("objects", "morphisms", "identities", "compose"):
        _expect(key in data, ctx, f"missing field {key!r}", f"{path}.{key}")
    try:
        return FiniteCategory(
            tuple(data["objects"]),
            {f: tuple(st) for f, st in data["morphisms"].items()},
            dict(data["identities"]),
            {(f, g): h for f, g, h in data["compose"]},
        )
    except (TypeError, ValueError) as exc:
        raise ctx.error(str(exc), path) from None


# ---------------------------------------------------------------------------
# diagram/v1


@dataclass(frozen=True, eq=False)
class LoadedDiagram:
    spec: DiagramSpec
    algebras: Mapping[str, AlgebraicComplex]

    @property
    def is_algebraic(self) -> bool:
        return bool(self.algebras) and len(self.algebras) == len(self.spec.nodes)


def load_diagram(data: Any, ctx: _Ctx | None = None, base_dir: str | os.PathLike = ".") -> LoadedDiagram:
    ctx = ctx or _Ctx(None)
    _expect(isinstance(data, dict) and data.get("schema") == DIAGRAM, ctx, f"expected schema {DIAGRAM!r}", "$")
    nodes_raw = data.get("nodes")
    _expect(isinstance(nodes_raw, dict) and nodes_raw, ctx, "nodes must be a non-empty object", "$.nodes", "nodes")
    nodes, algebras = {}, {}
    for name, node in nodes_raw.items():
        p = f"$.nodes[{name!r}]"
        if isinstance(node, dict) and "file" in node:
            value = parse_presentation(Path(base_dir) / node["file"])
        else:
            _expect(isinstance(node, dict), ctx, "node must be an object", p, name)
            value = _load_value(node, ctx, p, base_dir)
        if isinstance(value, AlgebraicComplex):
            algebras[name] = value
            nodes[name] = value.underlying
        elif isinstance(value, TruncatedSimplicialSet):
            nodes[name] = value
        else:
            raise ctx.error("nodes must be sset/v1 or algsset/v1", p, name)
    edges = []
    for j, e in enumerate(data.get("edges", [])):
        p = f"$.edges[{j}]"
        _expect(isinstance(e, dict) and {"name", "source", "target", "map"} <= set(e), ctx,
                "edges need name, source, target, map", p)
        _expect(e["source"] in nodes and e["target"] in nodes, ctx, f"edge {e['name']!r} refers to an unknown node", p)
        f = SimplicialMap(nodes[e["source"]], nodes[e["target"]], dict(e["map"]))
        spec_edge = Edge(e["name"], e["source"], e["target"], f)
        missing = [t for t in f.source.tokens() if t not in f.mapping]
        _expect(not missing, ctx, f"edge {e['name']!r} has no value for {missing[:1]}", f"{p}.map")
        stray = [v for v in f.mapping.values() if v not in f.target]
        _expect(not stray, ctx, f"edge {e['name']!r} maps to unknown simplex {stray[:1]}", f"{p}.map")
        bad = validate_map(f)
        if bad:
            raise ctx.error(f"edge {e['name']!r} is not simplicial: {bad[0].detail}", p)
        edges.append(spec_edge)
    return LoadedDiagram(DiagramSpec(nodes, tuple(edges)), algebras)


def dump_diagram(nodes: Mapping[str, Any], edges) -> dict:
    out_nodes = {}
    for name, v in nodes.items():
        out_nodes[name] = dump_alg(v) if isinstance(v, AlgebraicComplex) else dump_sset(v)
    return {
        "schema": DIAGRAM,
        "nodes": out_nodes,
        "edges": [{"name": e.name, "source": e.source, "target": e.target, "map": dict(e.map.mapping)} for e in edges],
    }


# ---------------------------------------------------------------------------
# entry points


def _load_value(data: Any, ctx: _Ctx, path: str = "$", base_dir: str | os.PathLike = "."):
    schema = data.get("schema") if isinstance(data, dict) else None
    if schema is None and isinstance(data, dict) and "truncation" in data:
        schema = SSET
    if schema == SSET:
        return load_sset(data, ctx, path)
    if schema == ALGSSET:
        return load_alg(data, ctx, path)
    if schema == DIAGRAM:
        return load_diagram(data, ctx, base_dir)
    if schema == CATEGORY:
        return load_category(data, ctx, path)
    raise ctx.error(f"unknown schema {schema!r}", f"{path}.schema", "schema")


def parse_presentation(source):
    """Load a presentation from a path, JSON text, or ``builtin:NAME``.

    Returns a :class:`TruncatedSimplicialSet`, :class:`AlgebraicComplex`,
    :class:`LoadedDiagram` or :class:`FiniteCategory`.
    """
    from . import corpus

    base_dir: str | os.PathLike = "."
    origin = ""
    if isinstance(source, str) and source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name in corpus.ALGEBRAIC:
            return corpus.algebraic_named(name)
        return corpus.complex_named(name)
    if isinstance(source, (str, os.PathLike)) and not str(source).lstrip().startswith("{"):
        p = Path(source)
        text = p.read_text()
        base_dir, origin = p.parent, str(p)
    else:
        text = str(source)
    ctx = _Ctx(text, origin)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc.msg}", f"{origin + ':' if origin else ''}line {exc.lineno} column {exc.colno}") from None
    return _load_value(data, ctx, "$", base_dir)


def to_text(obj: Any) -> str:
    """Canonical serialization: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def write_json(obj: Any, path) -> None:
    Path(path).write_text(to_text(obj))
