"""JSON loading and dumping for settings, representations, tableaux and matrices."""

from __future__ import annotations

import json

from .fields import QQ, FieldError
from .matrix import Matrix, ShapeError
from .quiver import FORMS, GROUPS, Arrow, MixedQuiverSetting, Quiver, Representation, SettingError
from .tableaux import Tableau, TableauError


class SchemaError(ValueError):
    """Input that does not match the expected JSON layout."""


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing key {key!r}")
    value = obj[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise SchemaError(f"{where}: {key!r} must be an integer")
    if kind is not int and not isinstance(value, kind):
        raise SchemaError(f"{where}: {key!r} has the wrong type")
    return value


def _no_extra(obj, allowed, where):
    extra = set(obj) - set(allowed)
    if extra:
        raise SchemaError(f"{where}: unknown keys {sorted(extra)}")


def setting_from_json(data) -> MixedQuiverSetting:
    if not isinstance(data, dict):
        raise SchemaError("setting: expected an object")
    _no_extra(data, ("vertices", "arrows", "involution"), "setting")
    vertices = _require(data, "vertices", list, "setting")
    arrows = _require(data, "arrows", list, "setting")
    l = len(vertices)
    dims, groups = [0] * l, [None] * l
    for k, v in enumerate(vertices):
        where = f"setting.vertices[{k}]"
        _no_extra(v, ("id", "dim", "group"), where)
        vid = _require(v, "id", int, where)
        if not 1 <= vid <= l or groups[vid - 1] is not None:
            raise SchemaError(f"{where}: vertex ids must be 1..{l}, each used once")
        dims[vid - 1] = _require(v, "dim", int, where)
        g = v.get("group", "GL")
        if g not in GROUPS:
            raise SchemaError(f"{where}: unknown group {g!r}")
        groups[vid - 1] = g
    qarrows = []
    for k, a in enumerate(arrows):
        where = f"setting.arrows[{k}]"
        _no_extra(a, ("id", "head", "tail", "form"), where)
        aid = _require(a, "id", str, where)
        h = _require(a, "head", int, where)
        t = _require(a, "tail", int, where)
        form = a.get("form", "M")
        if form not in FORMS:
            raise SchemaError(f"{where}: unknown form {form!r}")
        if not (1 <= h <= l and 1 <= t <= l):
            raise SchemaError(f"{where}: head/tail outside 1..{l}")
        qarrows.append(Arrow(aid, h, t, form))
    inv = list(range(1, l + 1))
    for k, pair in enumerate(data.get("involution", [])):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) and 1 <= x <= l for x in pair)):
            raise SchemaError(f"setting.involution[{k}]: expected a pair of vertex ids")
        u, v = pair
        inv[u - 1] = v
        inv[v - 1] = u
    try:
        return MixedQuiverSetting(Quiver(l, qarrows), tuple(dims), tuple(groups), tuple(inv))
    except SettingError as exc:
        raise SchemaError(f"setting: {exc}") from exc


def setting_to_json(s: MixedQuiverSetting):
    pairs = sorted({tuple(sorted((v, s.inv(v)))) for v in range(1, s.vertex_count + 1)})
    return {
        "vertices": [{"id": v, "dim": s.dim(v), "group": s.group(v)} for v in range(1, s.vertex_count + 1)],
        "arrows": [{"id": a.id, "head": a.head, "tail": a.tail, "form": a.form} for a in s.quiver.arrows],
        "involution": [list(p) for p in pairs],
    }


def matrix_from_json(data, field=QQ, where="matrix"):
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise SchemaError(f"{where}: expected an array of rows")
    for r in data:
        for x in r:
            if isinstance(x, bool) or not isinstance(x, (str, int)):
                raise SchemaError(f"{where}: entries must be strings like \"3/4\" or integers")
    try:
        return Matrix.from_json(data, field)
    except (ShapeError, FieldError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def representation_from_json(data, setting, field=QQ) -> Representation:
    """Shapes and forms are preconditions (ValueError), the layout is schema."""
    if not isinstance(data, dict):
        raise SchemaError("representation: expected an object mapping arrow ids to matrices")
    ids = {a.id for a in setting.quiver.arrows}
    unknown = set(data) - ids
    if unknown:
        raise SchemaError(f"representation: unknown arrows {sorted(unknown)}")
    missing = ids - set(data)
    if missing:
        raise SchemaError(f"representation: missing arrows {sorted(missing)}")
    mats = {k: matrix_from_json(v, field, f"representation[{k!r}]") for k, v in data.items()}
    return Representation(setting, mats, field)


def representation_to_json(rep: Representation):
    return {k: m.to_json() for k, m in rep.matrices.items()}


def tableau_from_json(data) -> Tableau:
    if not isinstance(data, dict):
        raise SchemaError("tableau: expected an object")
    cols = _require(data, "columns", list, "tableau")
    arrows = _require(data, "arrows", list, "tableau")
    for c in cols:
        if isinstance(c, bool) or not isinstance(c, int):
            raise SchemaError("tableau.columns: expected integers")
    for k, a in enumerate(arrows):
        where = f"tableau.arrows[{k}]"
        _no_extra(a, ("head", "tail", "slot"), where)
        for key in ("head", "tail"):
            cell = _require(a, key, list, where)
            if len(cell) != 2 or not all(isinstance(x, int) and not isinstance(x, bool) for x in cell):
                raise SchemaError(f"{where}.{key}: expected [column, row]")
        _require(a, "slot", int, where)
    try:
        return Tableau.from_json(data)
    except TableauError as exc:
        # structurally well formed but violating the tableau invariants
        raise ValueError(str(exc)) from exc


def matrices_from_json(data, field=QQ):
    """A list of matrices, or an object {"matrices": [...]}."""
    if isinstance(data, dict):
        _no_extra(data, ("matrices",), "matrices")
        data = _require(data, "matrices", list, "matrices")
    if not isinstance(data, list):
        raise SchemaError("matrices: expected a list of matrices")
    return [matrix_from_json(m, field, f"matrices[{k}]") for k, m in enumerate(data)]
