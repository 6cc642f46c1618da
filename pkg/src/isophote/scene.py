"""Scene files: surfaces, curves and jobs in YAML.

A scene has three lists, each entry a mapping::

    surfaces:
      - {id: ball, kind: sphere, params: {radius: 1.0}}
    curves:
      - {id: gamma, kind: slant_helix, params: {a: 2.0, b: 1.0}}
    jobs:
      - {verb: trace, args: {surface: ball, d: [0, 0, 1], theta: 60deg}}

plus optional ``seed`` and ``tolerances`` at the top level.  Angles are
numbers in radians or strings with a ``deg``/``rad`` suffix; vectors are
lists or comma-separated strings; grids are ``NxM`` strings or pairs.
Parsing fills in every default, so ``serialize`` writes the canonical form
and ``parse_scene(serialize(c)) == c``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

import numpy as np
import yaml

from .errors import ParameterOutOfRange, ParseError, UnknownCatalogId
from .tolerances import DEFAULT

# ----------------------------------------------------------------- converters

_ANGLE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(deg|rad|°)?\s*$")


def to_angle(x) -> float:
    """Radians from a number (radians) or a string with an optional unit."""
    if isinstance(x, bool):
        raise ValueError("expected an angle")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        m = _ANGLE.match(x)
        if m:
            # YAML reads 1e-05 as a string; a bare number is radians either way
            val = float(m.group(1))
            return float(np.deg2rad(val)) if m.group(2) in ("deg", "°") else val
        raise ValueError(f"angle {x!r} must be a number with an optional 'deg' or 'rad' suffix")
    raise ValueError(f"expected an angle, got {type(x).__name__}")


def to_float(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float, str)):
        raise ValueError(f"expected a number, got {x!r}")
    try:
        return float(x)
    except ValueError:
        raise ValueError(f"expected a number, got {x!r}") from None


def to_int(x) -> int:
    if isinstance(x, bool):
        raise ValueError(f"expected an integer, got {x!r}")
    try:
        v = float(x)
    except (TypeError, ValueError):
        raise ValueError(f"expected an integer, got {x!r}") from None
    if v != int(v):
        raise ValueError(f"expected an integer, got {x!r}")
    return int(v)


def to_bool(x) -> bool:
    if isinstance(x, bool):
        return x
    if isinstance(x, str) and x.lower() in ("true", "yes", "on", "1", "false", "no", "off", "0"):
        return x.lower() in ("true", "yes", "on", "1")
    raise ValueError(f"expected true/false, got {x!r}")


def to_floats(n: int) -> Callable:
    def conv(x) -> list[float]:
        if isinstance(x, str):
            x = [p for p in x.replace(";", ",").split(",") if p.strip()]
        if not isinstance(x, (list, tuple)) or len(x) != n:
            raise ValueError(f"expected {n} numbers, got {x!r}")
        return [to_float(v) for v in x]
    return conv


def to_direction(x) -> list[float]:
    v = to_floats(3)(x)
    if np.linalg.norm(v) == 0:
        raise ValueError("direction must be nonzero")
    return v


def to_grid(x) -> list[int]:
    if isinstance(x, str):
        parts = re.split(r"[xX*, ]+", x.strip())
        x = parts if len(parts) == 2 else parts * 2
    elif isinstance(x, (int, float)) and not isinstance(x, bool):
        x = [x, x]
    if not isinstance(x, (list, tuple)) or len(x) != 2:
        raise ValueError(f"expected a grid like 128x128, got {x!r}")
    g = [to_int(v) for v in x]
    if min(g) < 4:
        raise ValueError("grid needs at least 4 cells per direction")
    return g


def to_angles(x) -> list[float]:
    if isinstance(x, str) and "," in x:
        x = [p for p in x.split(",") if p.strip()]
    if not isinstance(x, (list, tuple)):
        x = [x]
    return [to_angle(v) for v in x]


def choice(*options: str) -> Callable:
    def conv(x) -> str:
        if x not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {x!r}")
        return x
    return conv


def to_mapping(x) -> dict:
    if not isinstance(x, dict):
        raise ValueError(f"expected a mapping, got {x!r}")
    return dict(x)


def checked(conv: Callable, test: Callable[[Any], bool], why: str) -> Callable:
    def inner(x):
        v = conv(x)
        if not test(v):
            raise ValueError(f"{v!r}: {why}")
        return v
    return inner


positive = checked(to_float, lambda v: v > 0, "must be positive")
interval = checked(to_floats(2), lambda v: v[0] < v[1], "needs lo < hi")


@dataclass(frozen=True)
class Param:
    conv: Callable
    default: Any = None
    required: bool = False
    ref: Optional[str] = None  # "curve" or "surface" for id references


REF_CURVE = Param(str, required=True, ref="curve")
REF_SURFACE = Param(str, required=True, ref="surface")

CURVE_KINDS: dict[str, dict[str, Param]] = {
    "circle": {"radius": Param(positive, 1.0),
               "rate": Param(checked(to_float, lambda v: v != 0, "must be nonzero"), 1.0)},
    "circular_helix": {"a": Param(positive, 2.0),
                       "b": Param(checked(to_float, lambda v: v >= 0, "must be >= 0"), 1.0)},
    "slant_helix": {"a": Param(positive, 2.0), "b": Param(positive, 1.0),
                    "t_range": Param(interval, [-1.2, 1.2])},
    "uv_line": {"surface": REF_SURFACE, "start": Param(to_floats(2), required=True),
                "direction": Param(to_floats(2), required=True),
                "t_range": Param(interval, required=True)},
}

LAW_KINDS = ("Constant", "LinearCor3a", "IntegralCor3b", "LinearProp1")

SURFACE_KINDS: dict[str, dict[str, Param]] = {
    "sphere": {"radius": Param(positive, 1.0)},
    "cylinder": {"radius": Param(positive, 1.0), "height": Param(interval, [-2.0, 2.0])},
    "torus": {"major": Param(positive, 2.0), "minor": Param(positive, 0.5)},
    "graph_wave": {"amplitude": Param(checked(to_float, lambda v: abs(v) <= 10, "|a| <= 10"), 0.3)},
    "rectifying_developable": {"curve": REF_CURVE, "ruling": Param(interval, [-0.5, 0.5])},
    "tube": {"spine": REF_CURVE, "r": Param(positive, required=True),
             "branch": Param(choice("minus", "plus"), "minus")},
    "canal": {"spine": REF_CURVE, "law": Param(to_mapping, required=True),
              "branch": Param(choice("minus", "plus"), "minus")},
}

_LAW_PARAMS: dict[str, dict[str, Param]] = {
    "Constant": {"r": Param(positive, required=True)},
    "LinearCor3a": {"theta": Param(to_angle, required=True), "v": Param(to_angle, required=True),
                    "sign": Param(checked(to_int, lambda v: v in (1, -1), "must be 1 or -1"), 1),
                    "intercept": Param(positive, 1.0)},
    "IntegralCor3b": {"beta": Param(to_angle, required=True), "v": Param(to_angle, required=True),
                      "phi": Param(to_angle, 0.0), "intercept": Param(positive, 1.0)},
    "LinearProp1": {"theta": Param(to_angle, required=True), "v": Param(to_angle, required=True),
                    "intercept": Param(positive, 1.0)},
}

_TRACE_ARGS = {"surface": REF_SURFACE, "d": Param(to_direction, required=True),
               "theta": Param(to_angle, required=True), "grid": Param(to_grid, [128, 128]),
               "polish": Param(to_bool, False)}
_STUDY_ARGS = {"surface": Param(str, None, ref="surface"), "curve": Param(str, None, ref="curve"),
               "d": Param(to_direction, required=True), "theta": Param(to_angle, required=True),
               "grid": Param(to_grid, [128, 128]), "index": Param(to_int, 0),
               "samples": Param(checked(to_int, lambda v: v >= 8, "need >= 8"), 400)}
_TUBE_ARGS = {"spine": REF_CURVE, "r": Param(positive, 0.3),
              "branch": Param(choice("minus", "plus"), "minus"),
              "samples": Param(checked(to_int, lambda v: v >= 8, "need >= 8"), 300)}

VERBS: dict[str, dict[str, Param]] = {
    "trace": {**_TRACE_ARGS, "expect_polylines": Param(to_int, None)},
    "silhouette": {k: v for k, v in _TRACE_ARGS.items() if k != "theta"},
    "axis": _STUDY_ARGS,
    "mu": _STUDY_ARGS,
    "classify": _STUDY_ARGS,
    "gauss-map": _STUDY_ARGS,
    "canal": {"surface": REF_SURFACE, "resolution": Param(to_grid, [64, 32]),
              "samples": Param(checked(to_int, lambda v: v >= 1, "need >= 1"), 1000)},
    "tube": {**_TUBE_ARGS, "resolution": Param(to_grid, [64, 32])},
    "radius-law": {"law": Param(choice(*LAW_KINDS[1:], "sweep"), required=True),
                   "theta": Param(to_angle, None), "v": Param(to_angle, None),
                   "sign": Param(checked(to_int, lambda v: v in (1, -1), "must be 1 or -1"), 1),
                   "beta": Param(to_angle, None), "phi": Param(to_angle, 0.0),
                   "n": Param(checked(to_int, lambda v: v >= 2, "need >= 2"), 50)},
    "verify-theorem4": {**_TUBE_ARGS, "v0": Param(to_angles, None)},
    "verify-prop2": {**_TUBE_ARGS, "control": Param(to_angles, [np.pi / 4])},
    "verify-prop3": {**_TUBE_ARGS, "r": Param(positive, 0.2), "control": Param(to_angles, [np.pi / 4])},
    "example1": {"a": Param(positive, 2.0), "b": Param(positive, 1.0),
                 "samples": Param(checked(to_int, lambda v: v >= 8, "need >= 8"), 200)},
}

# the positional target of a command-line job fills this argument
PRIMARY_ARG = {"trace": "surface", "silhouette": "surface", "axis": "surface", "mu": "surface",
               "classify": "surface", "gauss-map": "surface", "canal": "surface", "tube": "spine",
               "radius-law": "law", "verify-theorem4": "spine", "verify-prop2": "spine",
               "verify-prop3": "spine", "example1": None}

# ---------------------------------------------------------------- data model


@dataclass(frozen=True)
class Entity:
    id: str
    kind: str
    params: dict

    def to_yaml(self) -> dict:
        return {"id": self.id, "kind": self.kind, "params": _plain(self.params)}


@dataclass(frozen=True)
class Job:
    verb: str
    args: dict
    tolerances: dict = field(default_factory=dict)

    def to_yaml(self) -> dict:
        out = {"verb": self.verb, "args": _plain(self.args)}
        if self.tolerances:
            out["tolerances"] = dict(self.tolerances)
        return out


@dataclass
class SceneConfig:
    surfaces: list[Entity] = field(default_factory=list)
    curves: list[Entity] = field(default_factory=list)
    jobs: list[Job] = field(default_factory=list)
    seed: Optional[int] = None
    tolerances: dict = field(default_factory=dict)

    def entity(self, kind: str, ident: str) -> Entity:
        pool = self.curves if kind == "curve" else self.surfaces
        for e in pool:
            if e.id == ident:
                return e
        raise UnknownCatalogId(f"no {kind} with id {ident!r}")


def _plain(x):
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.generic):
        return x.item()
    return x


# -------------------------------------------------------------------- parsing

class _Located:
    """Python values built from a YAML node tree, with source marks per path."""

    def __init__(self, text: str):
        try:
            node = yaml.compose(text, Loader=yaml.SafeLoader)
        except yaml.MarkedYAMLError as exc:
            mark = exc.problem_mark or exc.context_mark
            raise ParseError(str(exc.problem or exc), mark.line + 1 if mark else None,
                             mark.column + 1 if mark else None) from None
        self.marks: dict[tuple, tuple[int, int]] = {}
        self._loader = yaml.SafeLoader("")
        self.value = {} if node is None else self._build(node, ())

    def _build(self, node, path):
        self.marks[path] = (node.start_mark.line + 1, node.start_mark.column + 1)
        if isinstance(node, yaml.MappingNode):
            out = {}
            for knode, vnode in node.value:
                key = self._loader.construct_object(knode, deep=True)
                if key in out:
                    raise ParseError(f"duplicate key {key!r}", knode.start_mark.line + 1,
                                     knode.start_mark.column + 1)
                out[key] = self._build(vnode, path + (key,))
                # errors about an entry point at its key
                self.marks[path + (key,)] = (knode.start_mark.line + 1,
                                             knode.start_mark.column + 1)
            return out
        if isinstance(node, yaml.SequenceNode):
            return [self._build(v, path + (i,)) for i, v in enumerate(node.value)]
        return self._loader.construct_object(node, deep=True)

    def where(self, path) -> tuple[Optional[int], Optional[int]]:
        path = tuple(path)
        while path and path not in self.marks:
            path = path[:-1]
        return self.marks.get(path, (None, None))


def _fail(cls, src: Optional[_Located], path, message: str):
    line, col = src.where(path) if src else (None, None)
    loc = f"line {line}, column {col}: " if line is not None else ""
    if cls is ParseError:
        return ParseError(message, line, col)
    err = cls(loc + message)
    err.line, err.column = line, col
    return err


def _convert(schema: dict[str, Param], raw, src, path, what: str) -> dict:
    if raw is None:
        raw = {}
    if not isinstance(raw, dict):
        raise _fail(ParseError, src, path, f"{what}: expected a mapping")
    unknown = [k for k in raw if k not in schema]
    if unknown:
        raise _fail(ParseError, src, path + (unknown[0],),
                    f"{what}: unknown parameter {unknown[0]!r} (allowed: {', '.join(schema)})")
    out = {}
    for name, p in schema.items():
        if name not in raw or raw[name] is None:
            if p.required:
                raise _fail(ParseError, src, path, f"{what}: missing parameter {name!r}")
            if p.default is not None:
                out[name] = _plain(p.default)
            continue
        try:
            out[name] = p.conv(raw[name])
        except (ValueError, TypeError) as exc:
            raise _fail(ParameterOutOfRange, src, path + (name,), f"{what}.{name}: {exc}") from None
    return out


def convert_law(raw: dict, src=None, path=()) -> dict:
    if not isinstance(raw, dict) or raw.get("kind") not in LAW_KINDS:
        raise _fail(ParameterOutOfRange, src, path + ("kind",),
                    f"law.kind must be one of {', '.join(LAW_KINDS)}")
    body = {k: v for k, v in raw.items() if k != "kind"}
    return {"kind": raw["kind"], **_convert(_LAW_PARAMS[raw["kind"]], body, src, path, "law")}


def _entity(raw, kinds, src, path, what) -> Entity:
    if not isinstance(raw, dict):
        raise _fail(ParseError, src, path, f"{what} entry must be a mapping")
    extra = set(raw) - {"id", "kind", "params"}
    if extra:
        key = sorted(extra)[0]
        raise _fail(ParseError, src, path + (key,), f"{what}: unexpected key {key!r}")
    ident, kind = raw.get("id"), raw.get("kind")
    if not isinstance(ident, str) or not ident:
        raise _fail(ParseError, src, path, f"{what} needs a string id")
    if kind not in kinds:
        raise _fail(UnknownCatalogId, src, path + ("kind",),
                    f"unknown {what} kind {kind!r} (known: {', '.join(kinds)})")
    params = _convert(kinds[kind], raw.get("params"), src, path + ("params",), f"{ident}")
    if kind == "canal":
        params["law"] = convert_law(params["law"], src, path + ("params", "law"))
    return Entity(ident, kind, params)


def convert_job(raw, src=None, path=()) -> Job:
    if not isinstance(raw, dict):
        raise _fail(ParseError, src, path, "job entry must be a mapping")
    verb = raw.get("verb")
    if verb not in VERBS:
        raise _fail(ParseError, src, path + ("verb",),
                    f"unknown verb {verb!r} (known: {', '.join(VERBS)})")
    extra = set(raw) - {"verb", "args", "tolerances"}
    if extra:
        key = sorted(extra)[0]
        raise _fail(ParseError, src, path + (key,), f"job: unexpected key {key!r}")
    args = _convert(VERBS[verb], raw.get("args"), src, path + ("args",), verb)
    if verb in ("axis", "mu", "classify", "gauss-map") and ("surface" in args) == ("curve" in args):
        raise _fail(ParseError, src, path + ("args",), f"{verb}: give exactly one of surface, curve")
    tol = _tolerances(raw.get("tolerances"), src, path + ("tolerances",))
    return Job(verb, args, tol)


def _tolerances(raw, src, path) -> dict:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise _fail(ParseError, src, path, "tolerances must be a mapping")
    known = DEFAULT.as_dict()
    out = {}
    for k, v in raw.items():
        if k not in known:
            raise _fail(ParseError, src, path + (k,), f"unknown tolerance {k!r}")
        try:
            out[k] = positive(v)
        except ValueError as exc:
            raise _fail(ParameterOutOfRange, src, path + (k,), f"tolerance {k}: {exc}") from None
    return out


def _check_refs(cfg: SceneConfig, src) -> None:
    curve_ids = [c.id for c in cfg.curves]
    surface_ids = [s.id for s in cfg.surfaces]
    for pool, key in ((curve_ids, "curves"), (surface_ids, "surfaces")):
        dup = {x for x in pool if pool.count(x) > 1}
        if dup:
            i = pool.index(sorted(dup)[0])
            raise _fail(ParseError, src, (key, i, "id"), f"duplicate id {sorted(dup)[0]!r}")
    space_curves = {c.id for c in cfg.curves if c.kind != "uv_line"}

    def need(kind, ident, path):
        pool = space_curves if kind == "curve" else set(surface_ids)
        kinds = CURVE_KINDS if kind == "curve" else SURFACE_KINDS
        if ident not in pool and ident in kinds and ident not in curve_ids + surface_ids:
            # a bare catalog kind with all-default parameters stands for itself
            if not any(p.required for p in kinds[ident].values()):
                return
        if ident not in pool:
            hint = " (a space curve is required)" if kind == "curve" and ident in curve_ids else ""
            raise _fail(UnknownCatalogId, src, path, f"unknown {kind} id {ident!r}{hint}")

    for i, s in enumerate(cfg.surfaces):
        for name, p in SURFACE_KINDS[s.kind].items():
            if p.ref and name in s.params:
                need(p.ref, s.params[name], ("surfaces", i, "params", name))
    for i, c in enumerate(cfg.curves):
        if c.kind == "uv_line":
            need("surface", c.params["surface"], ("curves", i, "params", "surface"))
    for i, j in enumerate(cfg.jobs):
        for name, p in VERBS[j.verb].items():
            if p.ref and name in j.args:
                if p.ref == "curve" and j.verb in ("axis", "mu", "classify", "gauss-map"):
                    if j.args[name] not in curve_ids:
                        raise _fail(UnknownCatalogId, src, ("jobs", i, "args", name),
                                    f"unknown curve id {j.args[name]!r}")
                    continue
                need(p.ref, j.args[name], ("jobs", i, "args", name))


def parse_scene(text: str) -> SceneConfig:
    """Parse and fully resolve a scene document."""
    src = _Located(text)
    doc = src.value
    if not isinstance(doc, dict):
        raise _fail(ParseError, src, (), "scene must be a mapping at the top level")
    extra = set(doc) - {"surfaces", "curves", "jobs", "seed", "tolerances"}
    if extra:
        key = sorted(extra)[0]
        raise _fail(ParseError, src, (key,), f"unexpected top-level key {key!r}")

    def seq(key):
        v = doc.get(key) or []
        if not isinstance(v, list):
            raise _fail(ParseError, src, (key,), f"{key} must be a list")
        return v

    cfg = SceneConfig(
        surfaces=[_entity(r, SURFACE_KINDS, src, ("surfaces", i), "surface")
                  for i, r in enumerate(seq("surfaces"))],
        curves=[_entity(r, CURVE_KINDS, src, ("curves", i), "curve")
                for i, r in enumerate(seq("curves"))],
        jobs=[convert_job(r, src, ("jobs", i)) for i, r in enumerate(seq("jobs"))],
        tolerances=_tolerances(doc.get("tolerances"), src, ("tolerances",)),
    )
    if doc.get("seed") is not None:
        try:
            cfg.seed = to_int(doc["seed"])
        except ValueError as exc:
            raise _fail(ParameterOutOfRange, src, ("seed",), f"seed: {exc}") from None
    _check_refs(cfg, src)
    return cfg


def serialize(cfg: SceneConfig) -> str:
    """Canonical YAML text of a scene."""
    doc: dict = {}
    if cfg.seed is not None:
        doc["seed"] = cfg.seed
    if cfg.tolerances:
        doc["tolerances"] = dict(cfg.tolerances)
    doc["surfaces"] = [e.to_yaml() for e in cfg.surfaces]
    doc["curves"] = [e.to_yaml() for e in cfg.curves]
    doc["jobs"] = [j.to_yaml() for j in cfg.jobs]
    return yaml.safe_dump(doc, sort_keys=False, default_flow_style=None)


def job_from_tokens(verb: str, target: Optional[str], tokens: list[str]) -> tuple[Job, dict]:
    """A job from command-line ``key=value`` tokens.

    Values are read as YAML scalars (so ``3``, ``true`` and ``[1, 2]`` get
    their natural types).  Returns the job and the raw argument mapping.
    """
    if verb not in VERBS:
        raise ParseError(f"unknown verb {verb!r} (known: {', '.join(VERBS)})")
    raw: dict = {}
    tol: dict = {}
    for tok in tokens:
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}")
        key, val = tok.split("=", 1)
        value = yaml.safe_load(val) if val else None
        if key.startswith("tol."):
            tol[key[4:]] = value
        else:
            raw[key] = value
    if target is not None:
        primary = PRIMARY_ARG[verb]
        if primary is None:
            raise ParseError(f"{verb} takes no positional target")
        raw.setdefault(primary, target)
    return convert_job({"verb": verb, "args": raw, "tolerances": tol or None}), raw
