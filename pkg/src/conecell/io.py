"""JSON interchange for fans, groups, periodic fans and complexes; DOT output."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable, Mapping

from .complexes import ChainComplex
from .equivariant import (
    EquivariantError,
    GroupData,
    GroupRingComplex,
    PeriodicFan,
    Representation,
)
from .fans import ConeSubset, Fan, FanError

SAFE_INT = 2 ** 53


class InputError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


def jsonable(obj: Any) -> Any:
    """Integers beyond 53 bits become decimal strings; containers are copied."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= SAFE_INT else obj
    if isinstance(obj, Mapping):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(jsonable(obj), indent=2, sort_keys=True)


def _int(x, where: str) -> int:
    if isinstance(x, bool):
        raise InputError("SCHEMA_ERROR", f"{where}: expected integer")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x)
        except ValueError:
            pass
    raise InputError("SCHEMA_ERROR", f"{where}: expected integer, got {x!r}")


def _vec(v, where: str) -> list[int]:
    if not isinstance(v, list):
        raise InputError("SCHEMA_ERROR", f"{where}: expected a list of integers")
    return [_int(x, where) for x in v]


def _matrix(m, where: str) -> list[list[int]]:
    if not isinstance(m, list):
        raise InputError("SCHEMA_ERROR", f"{where}: expected a matrix")
    return [_vec(r, f"{where}[{i}]") for i, r in enumerate(m)]


def _field(d: Mapping, key: str, where: str):
    if not isinstance(d, Mapping) or key not in d:
        raise InputError("SCHEMA_ERROR", f"{where}: missing field {key!r}")
    return d[key]


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError("IO_ERROR", str(e)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError("PARSE_ERROR", f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


# ---------------------------------------------------------------------------
# fans


def fan_to_json(fan: Fan, subset: ConeSubset | Iterable[str] | None = None) -> dict:
    out = {
        "rank": fan.rank,
        "name": fan.name,
        "cones": [{"id": c.id, "rays": [list(r) for r in c.rays]} for c in fan.cones if c.dim > 0],
    }
    if subset is not None:
        ids = subset.ids if isinstance(subset, ConeSubset) else sorted(subset)
        out["subset"] = list(ids)
    return out


def fan_from_json(data: Mapping) -> tuple[Fan, ConeSubset | None]:
    rank = _int(_field(data, "rank", "fan"), "fan.rank")
    cones = _field(data, "cones", "fan")
    if not isinstance(cones, list):
        raise InputError("SCHEMA_ERROR", "fan.cones: expected a list")
    parsed = []
    for k, c in enumerate(cones):
        cid = _field(c, "id", f"fan.cones[{k}]")
        rays = _field(c, "rays", f"fan.cones[{k}]")
        if not isinstance(rays, list):
            raise InputError("SCHEMA_ERROR", f"fan.cones[{k}].rays: expected a list")
        if str(cid) == "0":
            raise InputError("SCHEMA_ERROR", f"fan.cones[{k}].id: the zero cone is implicit")
        parsed.append((str(cid), [_vec(r, f"fan.cones[{k}].rays") for r in rays]))
    fan = Fan(rank, parsed, name=str(data.get("name", "")))
    if fan.duplicate_ids:
        raise InputError("SCHEMA_ERROR", f"fan.cones: duplicate cone id {fan.duplicate_ids[0]!r}")
    if fan.bad_rays:
        cid, msg = fan.bad_rays[0]
        raise InputError("SCHEMA_ERROR", f"fan.cones[{cid}].rays: {msg}")
    subset = None
    if "subset" in data:
        try:
            subset = ConeSubset(fan, [str(x) for x in data["subset"]])
        except FanError as e:
            raise InputError("SCHEMA_ERROR", f"fan.subset: {e}") from None
    return fan, subset


def parse_fan(path: str | Path) -> tuple[Fan, ConeSubset | None]:
    return fan_from_json(load_json(path))


# ---------------------------------------------------------------------------
# groups and representations


def group_to_json(g: GroupData) -> dict:
    out: dict = {
        "rank": g.rank,
        "name": g.name,
        "generators": [[list(r) for r in m] for m in g.generators],
        "relations": [list(w) for w in g.relations],
    }
    if g.resolution is not None:
        out["resolution"] = g.resolution.to_json()
        out["augmentation"] = list(g.augmentation)
    return out


def group_from_json(data: Mapping) -> GroupData:
    rank = _int(_field(data, "rank", "group"), "group.rank")
    gens = [_matrix(m, f"group.generators[{k}]") for k, m in enumerate(data.get("generators", []))]
    rels = [_vec(w, f"group.relations[{k}]") for k, w in enumerate(data.get("relations", []))]
    try:
        g = GroupData(rank, gens, rels, name=str(data.get("name", "")))
        if "resolution" in data:
            res = data["resolution"]
            res = {
                "degrees": {q: _int(r, f"group.resolution.degrees[{q}]") for q, r in _field(res, "degrees", "group.resolution").items()},
                "differentials": res.get("differentials", {}),
            }
            for q, rows in res["differentials"].items():
                for row in rows:
                    for entry in row:
                        for t in entry:
                            t["word"] = _vec(_field(t, "word", "group.resolution term"), "word")
                            t["coeff"] = _int(_field(t, "coeff", "group.resolution term"), "coeff")
            aug = data.get("augmentation")
            g.set_resolution(GroupRingComplex.from_json(g, res),
                             None if aug is None else _vec(aug, "group.augmentation"))
    except EquivariantError as e:
        raise InputError(e.code if e.code != "SHAPE_MISMATCH" else "SCHEMA_ERROR", str(e)) from None
    return g


def parse_group(path: str | Path) -> GroupData:
    return group_from_json(load_json(path))


def rep_to_json(a: Representation) -> dict:
    return {"rank": a.rank, "name": a.name, "matrices": [[list(r) for r in m] for m in a.matrices]}


def rep_from_json(data: Mapping, group: GroupData) -> Representation:
    rank = _int(_field(data, "rank", "rep"), "rep.rank")
    mats = [_matrix(m, f"rep.matrices[{k}]") for k, m in enumerate(_field(data, "matrices", "rep"))]
    try:
        return Representation(group, rank, mats, name=str(data.get("name", "")))
    except EquivariantError as e:
        raise InputError(e.code, str(e)) from None


def parse_rep(path: str | Path, group: GroupData) -> Representation:
    return rep_from_json(load_json(path), group)


def periodic_to_json(pf: PeriodicFan) -> dict:
    return {
        "name": pf.name,
        "group": group_to_json(pf.group),
        "reps": [{"id": rid, "rays": [list(r) for r in pf.reps[rid]]} for rid in pf.rep_ids()],
        "default_radius": pf.default_radius,
    }


def periodic_from_json(data: Mapping) -> PeriodicFan:
    g = group_from_json(_field(data, "group", "periodic"))
    reps = []
    for k, c in enumerate(_field(data, "reps", "periodic")):
        reps.append((str(_field(c, "id", f"periodic.reps[{k}]")),
                     [_vec(r, f"periodic.reps[{k}].rays") for r in _field(c, "rays", f"periodic.reps[{k}]")]))
    radius = _int(data.get("default_radius", 3), "periodic.default_radius")
    try:
        return PeriodicFan(g, reps, default_radius=radius, name=str(data.get("name", "")))
    except EquivariantError as e:
        raise InputError(e.code, str(e)) from None


def parse_periodic(path: str | Path) -> PeriodicFan:
    return periodic_from_json(load_json(path))


def complex_from_json(data: Mapping) -> ChainComplex:
    degrees = {q: _int(r, f"degrees[{q}]") for q, r in _field(data, "degrees", "complex").items()}
    diffs = {q: _matrix(m, f"differentials[{q}]") for q, m in data.get("differentials", {}).items()}
    return ChainComplex.from_json({"degrees": degrees, "differentials": diffs})


# ---------------------------------------------------------------------------
# DOT


def emit_dot(t: ConeSubset | None, path: str | Path | None = None, name: str = "T") -> str:
    """Face poset of T as a DOT digraph; edges go from a facet to the larger cone."""
    lines = [f'digraph "{name}" {{']
    if t is not None:
        fan = t.fan
        ids = t.ids
        for cid in ids:
            lines.append(f'  "{cid}" [label="{cid}:{fan[cid].dim}"];')
        members = set(ids)
        for cid in ids:
            for f in fan.codim1_faces(cid):
                if f in members:
                    lines.append(f'  "{f}" -> "{cid}";')
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if path is not None:
        try:
            Path(path).write_text(text)
        except OSError as e:
            raise InputError("IO_ERROR", str(e)) from None
    return text
