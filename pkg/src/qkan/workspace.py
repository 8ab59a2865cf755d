"""JSON workspaces: a base quantaloid plus named categories, functors and distributors.

Document shape::

    {
      "quantale": {"kind": "chain-tnorm", "size": 3, "tnorm": "lukasiewicz"},
      "categories": {"A": {"objects": [{"id": "a", "type": "*"}], "hom": [["a", "a", "1"]]}},
      "functors": {"F": {"from": "A", "to": "A", "map": {"a": "a"}}},
      "distributors": {"phi": {"from": "A", "to": "A", "matrix": [["a", "a", "1/2"]]}}
    }

``"quantaloid"`` may be used in place of ``"quantale"``.  Omitted hom entries
are the identity on the diagonal and bottom elsewhere; omitted matrix entries
are bottom; an omitted object type is the first object of the base.
"""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import QkanError, StructureError
from .qcat import QCategory, QFunctor, validate_category, validate_functor
from .qdist import QDistributor, validate_distributor
from .quantaloid import Quantaloid, build


class WorkspaceError(QkanError):
    """Any problem with a workspace document (CLI exit code 2)."""


class ParseError(WorkspaceError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")
        self.line, self.column = line, column


class UnknownName(WorkspaceError):
    pass


class InvalidEntity(WorkspaceError):
    """An entity failed its validation; ``axiom`` and ``entry`` say where."""

    def __init__(self, kind: str, name: str, axiom: str, entry: Any = None):
        super().__init__(f"{kind} {name!r} fails {axiom}" + (f" at {entry}" if entry is not None else ""))
        self.kind, self.name, self.axiom, self.entry = kind, name, axiom, entry


@dataclass
class Workspace:
    base: Quantaloid
    base_spec: dict
    categories: dict[str, QCategory] = field(default_factory=dict)
    functors: dict[str, QFunctor] = field(default_factory=dict)
    distributors: dict[str, QDistributor] = field(default_factory=dict)

    def category(self, name: str) -> QCategory:
        try:
            return self.categories[name]
        except KeyError:
            raise UnknownName(f"unknown category {name!r}") from None

    def distributor(self, name: str) -> QDistributor:
        try:
            return self.distributors[name]
        except KeyError:
            raise UnknownName(f"unknown distributor {name!r}") from None

    def category_name(self, A: QCategory) -> str | None:
        for k, v in self.categories.items():
            if v is A:
                return k
        return None


def _element(Q: Quantaloid, X: int, Y: int, literal, where: str) -> int:
    L = Q.hom(X, Y)
    try:
        if isinstance(literal, bool):
            raise StructureError("booleans are not element names")
        if isinstance(literal, int):
            if not 0 <= literal < L.n:
                raise StructureError("index out of range")
            return literal
        return L.index(str(literal))
    except (StructureError, KeyError, ValueError):
        raise UnknownName(f"{where}: {literal!r} is not an element of hom({Q.objects[X]}, {Q.objects[Y]})") from None


def _parse_category(Q: Quantaloid, name: str, decl: dict) -> QCategory:
    if not isinstance(decl, dict) or "objects" not in decl:
        raise ParseError(f"category {name!r} needs an 'objects' list")
    ids, types = [], []
    for obj in decl["objects"]:
        if isinstance(obj, str):
            obj = {"id": obj}
        if "id" not in obj:
            raise ParseError(f"category {name!r}: object without id")
        ids.append(str(obj["id"]))
        t = obj.get("type", Q.objects[0])
        try:
            types.append(Q.obj(str(t)) if not isinstance(t, int) else Q.obj(t))
        except StructureError:
            raise UnknownName(f"category {name!r}: unknown type {t!r}") from None
    if len(set(ids)) != len(ids):
        raise InvalidEntity("category", name, "distinct object ids")
    pos = {s: i for i, s in enumerate(ids)}
    n = len(ids)
    hom = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        for y in range(n):
            L = Q.hom(types[x], types[y])
            hom[x, y] = Q.identities[types[x]] if x == y else L.bottom
    for entry in decl.get("hom", []):
        x, y, q = _triple(entry, f"category {name!r} hom")
        if x not in pos or y not in pos:
            raise UnknownName(f"category {name!r}: unknown object in hom entry {entry!r}")
        i, j = pos[x], pos[y]
        hom[i, j] = _element(Q, types[i], types[j], q, f"category {name!r} hom[{x},{y}]")
    A = QCategory(Q, ids, types, hom)
    report = validate_category(A)
    if not report:
        raise InvalidEntity("category", name, report.axiom, report.witness)
    return A


def _triple(entry, where: str):
    if not isinstance(entry, (list, tuple)) or len(entry) != 3:
        raise ParseError(f"{where}: entries must be [x, y, q] triples, got {entry!r}")
    x, y, q = entry
    return str(x), str(y), q


def _parse_functor(cats: dict, name: str, decl: dict) -> QFunctor:
    try:
        A, B = cats[decl["from"]], cats[decl["to"]]
    except KeyError as exc:
        raise UnknownName(f"functor {name!r}: unknown category {exc.args[0]!r}") from None
    mapping = decl.get("map", {})
    if isinstance(mapping, list):
        mapping = dict(mapping)
    try:
        image = [B.obj(mapping[x]) for x in A.names]
    except KeyError as exc:
        raise UnknownName(f"functor {name!r}: no image for object {exc.args[0]!r}") from None
    except StructureError as exc:
        raise UnknownName(f"functor {name!r}: {exc}") from None
    F = QFunctor(A, B, image)
    report = validate_functor(F)
    if not report:
        raise InvalidEntity("functor", name, report.axiom, report.witness)
    return F


def _parse_distributor(Q: Quantaloid, cats: dict, name: str, decl: dict) -> QDistributor:
    try:
        A, B = cats[decl["from"]], cats[decl["to"]]
    except KeyError as exc:
        raise UnknownName(f"distributor {name!r}: unknown category {exc.args[0]!r}") from None
    M = np.empty((A.n, B.n), dtype=np.int64)
    for x in range(A.n):
        for y in range(B.n):
            M[x, y] = Q.hom(A.types[x], B.types[y]).bottom
    for entry in decl.get("matrix", []):
        x, y, q = _triple(entry, f"distributor {name!r} matrix")
        try:
            i, j = A.obj(x), B.obj(y)
        except StructureError:
            raise UnknownName(f"distributor {name!r}: unknown object in entry {entry!r}") from None
        M[i, j] = _element(Q, A.types[i], B.types[j], q, f"distributor {name!r}[{x},{y}]")
    phi = QDistributor(A, B, M)
    report = validate_distributor(phi)
    if not report:
        raise InvalidEntity("distributor", name, report.axiom, report.witness)
    return phi


def parse_workspace(document: str | bytes | dict) -> Workspace:
    """Parse and validate a workspace from JSON text or an already-decoded mapping."""
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    else:
        doc = copy.deepcopy(document)
    if not isinstance(doc, dict):
        raise ParseError("a workspace must be a JSON object")
    keys = [k for k in ("quantale", "quantaloid") if k in doc]
    if len(keys) != 1:
        raise ParseError("exactly one of 'quantale' or 'quantaloid' is required")
    spec = doc[keys[0]]
    if not isinstance(spec, dict):
        raise ParseError("the base quantaloid spec must be an object")
    try:
        Q = build(spec)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"incomplete quantaloid spec: missing {exc}") from None
    except QkanError as exc:
        raise InvalidEntity("quantaloid", keys[0], str(exc)) from None
    unknown = set(doc) - {"quantale", "quantaloid", "categories", "functors", "distributors"}
    if unknown:
        raise ParseError(f"unknown top-level keys: {sorted(unknown)}")
    ws = Workspace(Q, spec)
    for name, decl in doc.get("categories", {}).items():
        ws.categories[name] = _parse_category(Q, name, decl)
    for name, decl in doc.get("functors", {}).items():
        ws.functors[name] = _parse_functor(ws.categories, name, decl)
    for name, decl in doc.get("distributors", {}).items():
        ws.distributors[name] = _parse_distributor(Q, ws.categories, name, decl)
    return ws


def load(path: str) -> Workspace:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8") from None
    return parse_workspace(text)


# ---------------------------------------------------------------- serialization


def category_decl(A: QCategory) -> dict:
    Q = A.base
    hom = []
    for x in range(A.n):
        for y in range(A.n):
            L = Q.hom(A.types[x], A.types[y])
            default = Q.identities[A.types[x]] if x == y else L.bottom
            if A.hom[x, y] != default:
                hom.append([A.names[x], A.names[y], L.names[A.hom[x, y]]])
    return {"objects": [{"id": s, "type": Q.objects[t]} for s, t in zip(A.names, A.types)], "hom": hom}


def distributor_decl(phi: QDistributor, dom: str, cod: str) -> dict:
    Q, A, B = phi.base, phi.dom, phi.cod
    entries = []
    for x in range(A.n):
        for y in range(B.n):
            L = Q.hom(A.types[x], B.types[y])
            if phi.matrix[x, y] != L.bottom:
                entries.append([A.names[x], B.names[y], L.names[phi.matrix[x, y]]])
    return {"from": dom, "to": cod, "matrix": entries}


def functor_decl(F: QFunctor, dom: str, cod: str) -> dict:
    return {"from": dom, "to": cod, "map": {F.dom.names[x]: F.cod.names[F.mapping[x]] for x in range(F.dom.n)}}


def to_document(ws: Workspace) -> dict:
    """Canonical form: defaults omitted, keys in a fixed order."""
    key = "quantale" if ws.base.m == 1 else "quantaloid"
    names = {id(A): k for k, A in ws.categories.items()}
    doc: dict = {key: copy.deepcopy(ws.base_spec)}
    doc["categories"] = {k: category_decl(A) for k, A in ws.categories.items()}
    doc["functors"] = {k: functor_decl(F, names[id(F.dom)], names[id(F.cod)]) for k, F in ws.functors.items()}
    doc["distributors"] = {
        k: distributor_decl(p, names[id(p.dom)], names[id(p.cod)]) for k, p in ws.distributors.items()
    }
    return doc


def serialize(ws: Workspace) -> str:
    return json.dumps(to_document(ws), indent=2, ensure_ascii=False)


def witness_document(base_spec: dict, categories: dict[str, QCategory], distributors: dict | None = None) -> dict:
    """A self-contained workspace holding just the entities of a witness.

    ``distributors`` maps a name to ``(phi, dom_name, cod_name)``.
    """
    key = "quantale" if "kind" in base_spec and _one_object(base_spec) else "quantaloid"
    doc: dict = {key: copy.deepcopy(base_spec), "categories": {k: category_decl(A) for k, A in categories.items()}}
    doc["distributors"] = {k: distributor_decl(p, a, b) for k, (p, a, b) in (distributors or {}).items()}
    return doc


def _one_object(spec: dict) -> bool:
    return spec.get("kind") in ("chain-tnorm", "boolean-frame", "table") or (
        spec.get("kind") in ("girard-envelope", "opposite") and _one_object(spec["of"])
    )
