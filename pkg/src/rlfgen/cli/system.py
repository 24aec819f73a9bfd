"""System definition files: JSON with ``vars``, ``field``, ``template``, ``params``, ``config``."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from ..dynamics import Template, VectorField
from .parser import parse_poly

KEYS = {"vars", "field", "template", "params", "config"}


class SystemDefinitionError(ValueError):
    """Malformed system definition."""


@dataclass
class SystemDefinition:
    vars: tuple
    field: VectorField
    template: Template | None = None
    params: tuple = ()
    config: dict = field(default_factory=dict)

    @property
    def ring(self) -> tuple:
        return self.params + self.vars


def _names(doc, key) -> tuple:
    v = doc.get(key, [])
    if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
        raise SystemDefinitionError(f"{key!r} must be a list of names")
    if len(set(v)) != len(v):
        raise SystemDefinitionError(f"{key!r} has duplicate names")
    return tuple(v)


def system_from_dict(doc: dict) -> SystemDefinition:
    if not isinstance(doc, dict):
        raise SystemDefinitionError("system definition must be a JSON object")
    extra = sorted(set(doc) - KEYS)
    if extra:
        raise SystemDefinitionError(f"unknown keys {extra}")
    vars_ = _names(doc, "vars")
    params = _names(doc, "params")
    if not vars_:
        raise SystemDefinitionError("'vars' must name at least one state variable")
    clash = set(vars_) & set(params)
    if clash:
        raise SystemDefinitionError(f"names used as both state variables and parameters: {sorted(clash)}")
    fmap = doc.get("field")
    if not isinstance(fmap, dict) or set(fmap) != set(vars_):
        raise SystemDefinitionError("'field' must map every state variable to an expression")
    comps = []
    for v in vars_:
        try:
            comps.append(parse_poly(str(fmap[v]), vars_))
        except ValueError as e:
            raise SystemDefinitionError(f"field component {v!r}: {e}") from None
    template = None
    if doc.get("template") is not None:
        try:
            body = parse_poly(str(doc["template"]), params + vars_)
        except ValueError as e:
            raise SystemDefinitionError(f"template: {e}") from None
        template = Template(params, vars_, body)
    config = doc.get("config", {})
    if not isinstance(config, dict):
        raise SystemDefinitionError("'config' must be an object")
    return SystemDefinition(vars_, VectorField(vars_, tuple(comps)), template, params, config)


def load_system(path: str | Path) -> SystemDefinition:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise SystemDefinitionError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}") from None
    return system_from_dict(doc)
