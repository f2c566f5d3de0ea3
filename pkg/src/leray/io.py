"""JSON job documents: schema, parsing with diagnostics, serialization."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field

import jsonschema

from .linalg import Field
from .maps import MapViolation, SimplicialMap
from .simplicial import SimplicialComplex, close_under_faces

COMMANDS = ("homology", "pages", "cosheaf", "levelset", "reeb", "verify")

_COMPLEX = {
    "type": "object",
    "required": ["simplices"],
    "additionalProperties": False,
    "properties": {
        "simplices": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 0}},
        }
    },
}

SCHEMA = {
    "type": "object",
    "required": ["domain", "codomain", "vertex_map"],
    "additionalProperties": False,
    "properties": {
        "field": {"type": "string", "pattern": "^(F[0-9]+|Q)$"},
        "domain": _COMPLEX,
        "codomain": _COMPLEX,
        "vertex_map": {
            "type": "object",
            "patternProperties": {"^[0-9]+$": {"type": "integer", "minimum": 0}},
            "additionalProperties": False,
        },
        "command": {"enum": list(COMMANDS)},
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "r": {"type": "integer", "minimum": 0},
                "degrees": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                "q": {"type": "integer", "minimum": 0},
                "format": {"enum": ["text", "json"]},
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft7Validator(SCHEMA)


class InputError(ValueError):
    """A job document was rejected; ``where`` names the JSON field, ``line`` the source line if known."""

    def __init__(self, message: str, where: str = "", line: int | None = None):
        self.where = where
        self.line = line
        self.reason = message
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if where:
            loc.append(where)
        super().__init__((", ".join(loc) + ": " if loc else "") + message)


@dataclass
class JobSpec:
    field: Field
    f: SimplicialMap
    command: str | None = None
    options: dict = dc_field(default_factory=dict)

    @property
    def domain(self) -> SimplicialComplex:
        return self.f.domain

    @property
    def codomain(self) -> SimplicialComplex:
        return self.f.codomain


def _path(parts) -> str:
    out = ""
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


def _line_of(text: str, parts) -> int | None:
    """Best-effort source line of the innermost named key of a JSON path."""
    keys = [p for p in parts if isinstance(p, str)]
    if not keys:
        return None
    pos = 0
    for k in keys:
        hit = text.find(json.dumps(k), pos)
        if hit < 0:
            return None
        pos = hit
    return text.count("\n", 0, pos) + 1


def parse_input(text: str) -> JobSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} (column {exc.colno})", line=exc.lineno) from exc
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        parts = list(e.absolute_path)
        raise InputError(e.message, _path(parts) or "<document>", _line_of(text, parts))
    return job_from_dict(doc, text)


def job_from_dict(doc: dict, text: str = "") -> JobSpec:
    try:
        field = Field.parse(doc.get("field", "F2"))
    except ValueError as exc:
        raise InputError(str(exc), "field", _line_of(text, ["field"])) from exc
    complexes = {}
    for key in ("domain", "codomain"):
        gens = doc[key]["simplices"]
        for i, s in enumerate(gens):
            if len(set(s)) != len(s):
                raise InputError(f"simplex {s} repeats a vertex", f"{key}.simplices[{i}]", _line_of(text, [key]))
        complexes[key] = close_under_faces(gens)
    X, Y = complexes["domain"], complexes["codomain"]
    vmap = {int(k): v for k, v in doc["vertex_map"].items()}
    missing = [v for v in X.vertices if v not in vmap]
    if missing:
        raise InputError(f"no image given for domain vertices {missing}", "vertex_map", _line_of(text, ["vertex_map"]))
    extra = sorted(set(vmap) - set(X.vertices))
    if extra:
        raise InputError(f"{extra} are not domain vertices", f"vertex_map.{extra[0]}", _line_of(text, ["vertex_map"]))
    stray = sorted(u for u, v in vmap.items() if (v,) not in Y)
    if stray:
        u = stray[0]
        raise InputError(
            f"vertex {u} maps to {vmap[u]}, which is not a codomain vertex",
            f"vertex_map.{u}",
            _line_of(text, ["vertex_map", str(u)]),
        )
    try:
        f = SimplicialMap(X, Y, vmap)
    except MapViolation as exc:
        raise InputError(f"map is not simplicial: {exc}", "vertex_map", _line_of(text, ["vertex_map"])) from exc
    return JobSpec(field, f, doc.get("command"), dict(doc.get("options", {})))


def serialize(job: JobSpec) -> str:
    doc = {"field": job.field.name, **job.f.to_dict()}
    if job.command is not None:
        doc["command"] = job.command
    if job.options:
        doc["options"] = job.options
    return dumps(doc)


_INT_LIST = re.compile(r"\[\s*(-?\d+(?:,\s*-?\d+)*)\s*\]")


def dumps(doc) -> str:
    """Indented, key-sorted JSON with integer lists (simplices) kept on one line."""
    text = json.dumps(doc, indent=2, sort_keys=True)
    return _INT_LIST.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",")) + "]", text)


def map_to_json(f: SimplicialMap, field: Field, command: str | None = None) -> str:
    return serialize(JobSpec(field, f, command))
