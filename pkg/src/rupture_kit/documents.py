"""The JSON document formats consumed and produced by the CLI.

Every file is a single JSON object with a ``format`` of "rupture-kit/1"
and a ``kind`` discriminator. Simplices are referenced by (dimension,
index); face lists are ordered d_0..d_n. The parsers raise
:class:`DocumentError` with a key path on any schema mismatch, and the
serializers emit values the parsers map back to equal in-memory objects.

Document kinds:

    complex          dim_bound, simplices {"n": count | [labels]},
                     faces {"n": [[i0..in], ...]}
    ruptured         complex keys plus coh {"n": [indices]} and
                     gap [{n, k, faces {"i": index}, mode?}]
    fibration        total and base (ruptured bodies), map {"n": [targets]},
                     gap_lifts [{horn, base_simplex, mode?}],
                     composites [{first, second, composite}]
    covering-task    basepoint plus loops [[{edge, dir "+"|"-"}], ...]
    derive-task      gamma and delta binding lists, sigma, term, goal
    judgment-script  script of add / is_open / horn / level_up commands
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping, Optional

from .covering import EdgePath, FiberPermutation
from .derivability import (
    Annotation,
    AtomType,
    Binding,
    Pair,
    ProdType,
    ResourceContext,
    Substitution,
    TupleTerm,
    TypeExpr,
    UnitTerm,
    UnitType,
    Var,
)
from .errors import DocumentError
from .fibration import LiftingProblemKey, RupturedFibrationData
from .judgments import ArrowJudgment, BaseJudgment, JudgmentAtom, Polarity
from .ruptured import GapMode, RupturedComplex
from .simplicial import HornSpec, SimplexId, SimplicialMap, TruncatedComplex

FORMAT = "rupture-kit/1"

KINDS = (
    "complex",
    "ruptured",
    "fibration",
    "covering-task",
    "derive-task",
    "judgment-script",
)


@dataclass(frozen=True)
class Document:
    kind: str
    body: object


# -- helpers -------------------------------------------------------------------


def _expect(cond: bool, message: str, where: str):
    if not cond:
        raise DocumentError(message, where)


def _get(obj: Mapping, key: str, where: str, expected=None):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(f"missing key '{key}'", where)
    value = obj[key]
    if expected is not None and not isinstance(value, expected):
        raise DocumentError(
            f"key '{key}' has type {type(value).__name__}", where
        )
    return value


def _int(value, where: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise DocumentError("expected an integer", where)
    return value


# -- complexes -----------------------------------------------------------------


def complex_to_body(x: TruncatedComplex) -> dict:
    simplices = {}
    for n in range(x.dim_bound + 1):
        per_dim = x.labels[n] if n < len(x.labels) else None
        if per_dim is not None:
            simplices[str(n)] = list(per_dim)
        else:
            simplices[str(n)] = x.count(n)
    faces = {}
    for n in range(1, x.dim_bound + 1):
        if x.count(n):
            faces[str(n)] = [list(x.face_row(n, i)) for i in range(x.count(n))]
    return {"dim_bound": x.dim_bound, "simplices": simplices, "faces": faces}


def body_to_complex(body: Mapping, where: str = "complex") -> TruncatedComplex:
    dim_bound = _int(_get(body, "dim_bound", where), f"{where}.dim_bound")
    _expect(dim_bound >= 0, "dim_bound must be non-negative", f"{where}.dim_bound")
    simplices = _get(body, "simplices", where, dict)
    counts = []
    labels = {}
    for n in range(dim_bound + 1):
        entry = simplices.get(str(n), 0)
        here = f"{where}.simplices.{n}"
        if isinstance(entry, int) and not isinstance(entry, bool):
            _expect(entry >= 0, "count must be non-negative", here)
            counts.append(entry)
        elif isinstance(entry, list):
            _expect(
                all(isinstance(l, str) for l in entry), "labels must be strings", here
            )
            counts.append(len(entry))
            labels[n] = entry
        else:
            raise DocumentError("expected a count or a label array", here)
    faces_obj = body.get("faces", {})
    _expect(isinstance(faces_obj, dict), "faces must be an object", f"{where}.faces")
    faces = {}
    for n in range(1, dim_bound + 1):
        rows = faces_obj.get(str(n), [])
        here = f"{where}.faces.{n}"
        _expect(isinstance(rows, list), "expected a list of face rows", here)
        _expect(
            len(rows) == counts[n],
            f"{counts[n]} simplices need {counts[n]} face rows, got {len(rows)}",
            here,
        )
        parsed_rows = []
        for i, row in enumerate(rows):
            _expect(isinstance(row, list), "face row must be a list", f"{here}[{i}]")
            _expect(
                len(row) == n + 1,
                f"face row needs {n + 1} entries, got {len(row)}",
                f"{here}[{i}]",
            )
            parsed_rows.append([_int(v, f"{here}[{i}]") for v in row])
        faces[n] = parsed_rows
    return TruncatedComplex.create(dim_bound, counts, faces, labels)


# -- gap modes -----------------------------------------------------------------


def mode_to_body(mode: Optional[GapMode]) -> Optional[dict]:
    if mode is None:
        return None
    payload: Any = None
    if isinstance(mode.payload, FiberPermutation):
        payload = {
            "fiber": list(mode.payload.fiber),
            "images": [list(pair) for pair in mode.payload.mapping],
        }
    elif isinstance(mode.payload, tuple):
        payload = [
            list(item) if isinstance(item, tuple) else item for item in mode.payload
        ]
    elif mode.payload is not None:
        payload = mode.payload
    return {"kind": mode.kind, "payload": payload}


def body_to_mode(body, where: str) -> Optional[GapMode]:
    if body is None:
        return None
    kind = _get(body, "kind", where, str)
    _expect(bool(kind), "mode kind must be non-empty", f"{where}.kind")
    payload = body.get("payload")
    if kind == "plain":
        _expect(payload is None, "plain mode carries no payload", f"{where}.payload")
        return GapMode("plain")
    if kind == "monodromy":
        here = f"{where}.payload"
        fiber = [_int(v, here) for v in _get(payload, "fiber", here, list)]
        images = _get(payload, "images", here, list)
        mapping = {}
        for pair in images:
            _expect(
                isinstance(pair, list) and len(pair) == 2,
                "images must be [source, image] pairs",
                here,
            )
            mapping[_int(pair[0], here)] = _int(pair[1], here)
        try:
            return GapMode("monodromy", FiberPermutation.of(fiber, mapping))
        except Exception as exc:
            raise DocumentError(str(exc), here)
    if kind == "semantic":
        here = f"{where}.payload"
        _expect(
            isinstance(payload, list) and all(isinstance(v, str) for v in payload),
            "semantic payload must be a list of feature strings",
            here,
        )
        return GapMode("semantic", tuple(payload))
    if kind == "resource":
        here = f"{where}.payload"
        _expect(isinstance(payload, list), "resource payload must be a list", here)
        counts = []
        for pair in payload:
            _expect(
                isinstance(pair, list)
                and len(pair) == 2
                and isinstance(pair[0], str),
                "resource payload entries are [variable, count] pairs",
                here,
            )
            counts.append((pair[0], _int(pair[1], here)))
        return GapMode("resource", tuple(counts))
    _expect(payload is None, f"unknown mode kind '{kind}' cannot carry payload", where)
    return GapMode(kind)


# -- ruptured complexes ----------------------------------------------------------


def horn_to_body(h: HornSpec) -> dict:
    return {
        "n": h.n,
        "k": h.k,
        "faces": {str(i): f for i, f in h.face_map().items()},
    }


def body_to_horn(body: Mapping, where: str) -> HornSpec:
    n = _int(_get(body, "n", where), f"{where}.n")
    k = _int(_get(body, "k", where), f"{where}.k")
    _expect(n >= 1 and 0 <= k <= n, f"bad horn shape (n={n}, k={k})", where)
    faces_obj = _get(body, "faces", where, dict)
    mapping = {}
    for key, value in faces_obj.items():
        try:
            i = int(key)
        except ValueError:
            raise DocumentError(f"face index '{key}' is not an integer", f"{where}.faces")
        mapping[i] = _int(value, f"{where}.faces.{key}")
    expected = [i for i in range(n + 1) if i != k]
    _expect(
        sorted(mapping) == expected,
        f"horn faces must cover indices {expected}",
        f"{where}.faces",
    )
    return HornSpec.from_mapping(n, k, mapping)


def ruptured_to_body(r: RupturedComplex) -> dict:
    body = complex_to_body(r.underlying)
    body["coh"] = {
        str(n): sorted(r.coh[n]) for n in range(r.underlying.dim_bound + 1)
    }
    gap_rows = []
    for h in sorted(r.gap):
        row = horn_to_body(h)
        mode = r.gap_modes.get(h)
        if mode is not None:
            row["mode"] = mode_to_body(mode)
        gap_rows.append(row)
    body["gap"] = gap_rows
    return body


def body_to_ruptured(body: Mapping, where: str = "ruptured") -> RupturedComplex:
    underlying = body_to_complex(body, where)
    coh_obj = body.get("coh", {})
    _expect(isinstance(coh_obj, dict), "coh must be an object", f"{where}.coh")
    coh = {}
    for key, members in coh_obj.items():
        here = f"{where}.coh.{key}"
        try:
            n = int(key)
        except ValueError:
            raise DocumentError(f"dimension '{key}' is not an integer", here)
        _expect(isinstance(members, list), "expected a list of indices", here)
        coh[n] = [_int(v, here) for v in members]
    gap_rows = body.get("gap", [])
    _expect(isinstance(gap_rows, list), "gap must be a list", f"{where}.gap")
    gap = []
    modes = {}
    for i, row in enumerate(gap_rows):
        here = f"{where}.gap[{i}]"
        h = body_to_horn(row, here)
        gap.append(h)
        if row.get("mode") is not None:
            mode = body_to_mode(row["mode"], f"{here}.mode")
            if mode is not None:
                modes[h] = mode
    return RupturedComplex.create(underlying, coh, gap, modes)


# -- fibrations -------------------------------------------------------------------


def fibration_to_body(f: RupturedFibrationData) -> dict:
    gap_rows = []
    for key in sorted(f.gap_lifts, key=lambda k: (k.horn, k.base)):
        row = {
            "horn": horn_to_body(key.horn),
            "base_simplex": key.base.index,
        }
        mode = f.gap_lifts[key]
        if mode is not None:
            row["mode"] = mode_to_body(mode)
        gap_rows.append(row)
    composites = [
        {"first": first, "second": second, "composite": comp}
        for (first, second), comp in sorted(f.composites.items())
    ]
    return {
        "total": ruptured_to_body(f.total),
        "base": ruptured_to_body(f.base),
        "map": {
            str(n): list(f.proj.levels[n]) for n in range(f.proj.top_dim + 1)
        },
        "gap_lifts": gap_rows,
        "composites": composites,
    }


def body_to_fibration(body: Mapping, where: str = "fibration") -> RupturedFibrationData:
    total = body_to_ruptured(_get(body, "total", where, dict), f"{where}.total")
    base = body_to_ruptured(_get(body, "base", where, dict), f"{where}.base")
    map_obj = _get(body, "map", where, dict)
    top = min(total.underlying.dim_bound, base.underlying.dim_bound)
    levels = []
    for n in range(top + 1):
        here = f"{where}.map.{n}"
        row = map_obj.get(str(n), [])
        _expect(isinstance(row, list), "expected a list of targets", here)
        levels.append(tuple(_int(v, here) for v in row))
    proj = SimplicialMap(tuple(levels))
    gap_lifts = {}
    for i, row in enumerate(body.get("gap_lifts", [])):
        here = f"{where}.gap_lifts[{i}]"
        horn = body_to_horn(_get(row, "horn", here, dict), f"{here}.horn")
        base_index = _int(_get(row, "base_simplex", here), f"{here}.base_simplex")
        mode = body_to_mode(row.get("mode"), f"{here}.mode")
        gap_lifts[LiftingProblemKey(horn, SimplexId(horn.n, base_index))] = mode
    composites = {}
    for i, row in enumerate(body.get("composites", [])):
        here = f"{where}.composites[{i}]"
        first = _int(_get(row, "first", here), here)
        second = _int(_get(row, "second", here), here)
        comp = _int(_get(row, "composite", here), here)
        composites[(first, second)] = comp
    return RupturedFibrationData(total, base, proj, gap_lifts, composites)


# -- covering tasks -----------------------------------------------------------------


@dataclass(frozen=True)
class CoveringTask:
    basepoint: SimplexId
    loops: tuple[EdgePath, ...]


def covering_task_to_body(task: CoveringTask) -> dict:
    return {
        "basepoint": task.basepoint.index,
        "loops": [
            [{"edge": e, "dir": "+" if fwd else "-"} for e, fwd in loop.steps]
            for loop in task.loops
        ],
    }


def body_to_covering_task(body: Mapping, where: str = "covering-task") -> CoveringTask:
    basepoint = _int(_get(body, "basepoint", where), f"{where}.basepoint")
    loops = []
    rows = _get(body, "loops", where, list)
    for i, row in enumerate(rows):
        here = f"{where}.loops[{i}]"
        _expect(isinstance(row, list), "loop must be a list of steps", here)
        steps = []
        for j, step in enumerate(row):
            there = f"{here}[{j}]"
            edge = _int(_get(step, "edge", there), there)
            direction = _get(step, "dir", there, str)
            _expect(direction in ("+", "-"), "dir must be '+' or '-'", there)
            steps.append((edge, direction == "+"))
        loops.append(EdgePath(tuple(steps)))
    return CoveringTask(SimplexId(0, basepoint), tuple(loops))


# -- derive tasks ---------------------------------------------------------------------


@dataclass(frozen=True)
class DeriveTask:
    gamma: ResourceContext
    delta: ResourceContext
    sigma: Substitution
    term: TupleTerm
    goal: TypeExpr


def type_to_body(t: TypeExpr) -> dict:
    if isinstance(t, AtomType):
        return {"atom": t.name}
    if isinstance(t, UnitType):
        return {"unit": {}}
    return {"prod": [type_to_body(t.left), type_to_body(t.right)]}


def body_to_type(body, where: str) -> TypeExpr:
    if not isinstance(body, dict) or len(body) != 1:
        raise DocumentError("type must be one of atom/unit/prod", where)
    if "atom" in body:
        name = body["atom"]
        _expect(isinstance(name, str) and bool(name), "atom needs a name", where)
        return AtomType(name)
    if "unit" in body:
        return UnitType()
    if "prod" in body:
        parts = body["prod"]
        _expect(
            isinstance(parts, list) and len(parts) == 2,
            "prod needs two components",
            where,
        )
        return ProdType(
            body_to_type(parts[0], f"{where}.prod[0]"),
            body_to_type(parts[1], f"{where}.prod[1]"),
        )
    raise DocumentError("type must be one of atom/unit/prod", where)


def term_to_body(t: TupleTerm) -> dict:
    if isinstance(t, Var):
        return {"var": t.name}
    if isinstance(t, UnitTerm):
        return {"unit": {}}
    return {"pair": [term_to_body(t.left), term_to_body(t.right)]}


def body_to_term(body, where: str) -> TupleTerm:
    if not isinstance(body, dict) or len(body) != 1:
        raise DocumentError("term must be one of var/unit/pair", where)
    if "var" in body:
        name = body["var"]
        _expect(isinstance(name, str) and bool(name), "var needs a name", where)
        return Var(name)
    if "unit" in body:
        return UnitTerm()
    if "pair" in body:
        parts = body["pair"]
        _expect(
            isinstance(parts, list) and len(parts) == 2,
            "pair needs two components",
            where,
        )
        return Pair(
            body_to_term(parts[0], f"{where}.pair[0]"),
            body_to_term(parts[1], f"{where}.pair[1]"),
        )
    raise DocumentError("term must be one of var/unit/pair", where)


def context_to_body(ctx: ResourceContext) -> list:
    return [
        {
            "var": b.var,
            "type": type_to_body(b.type),
            "annotation": b.annotation.value,
        }
        for b in ctx.bindings
    ]


def body_to_context(rows, where: str) -> ResourceContext:
    _expect(isinstance(rows, list), "context must be a list of bindings", where)
    bindings = []
    for i, row in enumerate(rows):
        here = f"{where}[{i}]"
        var = _get(row, "var", here, str)
        t = body_to_type(_get(row, "type", here), f"{here}.type")
        ann_text = _get(row, "annotation", here, str)
        try:
            ann = Annotation(ann_text)
        except ValueError:
            raise DocumentError(f"unknown annotation '{ann_text}'", f"{here}.annotation")
        bindings.append(Binding(var, t, ann))
    try:
        return ResourceContext(tuple(bindings))
    except Exception as exc:
        raise DocumentError(str(exc), where)


def derive_task_to_body(task: DeriveTask) -> dict:
    return {
        "gamma": context_to_body(task.gamma),
        "delta": context_to_body(task.delta),
        "sigma": {src: dst for src, dst in task.sigma.mapping},
        "term": term_to_body(task.term),
        "goal": type_to_body(task.goal),
    }


def body_to_derive_task(body: Mapping, where: str = "derive-task") -> DeriveTask:
    gamma = body_to_context(_get(body, "gamma", where), f"{where}.gamma")
    delta = body_to_context(_get(body, "delta", where), f"{where}.delta")
    sigma_obj = _get(body, "sigma", where, dict)
    for key, value in sigma_obj.items():
        _expect(isinstance(value, str), "sigma images must be variable names", f"{where}.sigma.{key}")
    sigma = Substitution.of(sigma_obj)
    term = body_to_term(_get(body, "term", where), f"{where}.term")
    goal = body_to_type(_get(body, "goal", where), f"{where}.goal")
    return DeriveTask(gamma, delta, sigma, term, goal)


# -- judgment scripts ------------------------------------------------------------------


@dataclass(frozen=True)
class ScriptCommand:
    op: str
    judgment: Optional[JudgmentAtom] = None
    polarity: Optional[Polarity] = None
    payload: object = None
    first: Optional[str] = None
    second: Optional[str] = None
    gap: Optional[str] = None


def judgment_to_body(j: JudgmentAtom) -> dict:
    if isinstance(j, BaseJudgment):
        return {"atom": j.label}
    return {"arrow": [j.source, j.target]}


def body_to_judgment(body, where: str) -> JudgmentAtom:
    if not isinstance(body, dict) or len(body) != 1:
        raise DocumentError("judgment must be atom or arrow", where)
    if "atom" in body:
        label = body["atom"]
        _expect(isinstance(label, str) and bool(label), "atom needs a label", where)
        return BaseJudgment(label)
    if "arrow" in body:
        pair = body["arrow"]
        _expect(
            isinstance(pair, list)
            and len(pair) == 2
            and all(isinstance(v, str) and v for v in pair),
            "arrow needs [source, target] labels",
            where,
        )
        return ArrowJudgment(pair[0], pair[1])
    raise DocumentError("judgment must be atom or arrow", where)


def script_to_body(commands) -> dict:
    rows = []
    for cmd in commands:
        if cmd.op == "add":
            row = {
                "op": "add",
                "judgment": judgment_to_body(cmd.judgment),
                "polarity": cmd.polarity.value,
            }
            if cmd.payload is not None:
                row["payload"] = cmd.payload
        elif cmd.op == "is_open":
            row = {"op": "is_open", "judgment": judgment_to_body(cmd.judgment)}
        elif cmd.op == "horn":
            row = {"op": "horn", "first": cmd.first, "second": cmd.second, "gap": cmd.gap}
        else:
            row = {"op": "level_up"}
        rows.append(row)
    return {"script": rows}


def body_to_script(body: Mapping, where: str = "judgment-script") -> list[ScriptCommand]:
    rows = _get(body, "script", where, list)
    commands = []
    for i, row in enumerate(rows):
        here = f"{where}.script[{i}]"
        op = _get(row, "op", here, str)
        if op == "add":
            judgment = body_to_judgment(_get(row, "judgment", here), f"{here}.judgment")
            pol_text = _get(row, "polarity", here, str)
            try:
                polarity = Polarity(pol_text)
            except ValueError:
                raise DocumentError(f"unknown polarity '{pol_text}'", f"{here}.polarity")
            commands.append(
                ScriptCommand("add", judgment, polarity, row.get("payload"))
            )
        elif op == "is_open":
            judgment = body_to_judgment(_get(row, "judgment", here), f"{here}.judgment")
            commands.append(ScriptCommand("is_open", judgment))
        elif op == "horn":
            commands.append(
                ScriptCommand(
                    "horn",
                    first=_get(row, "first", here, str),
                    second=_get(row, "second", here, str),
                    gap=_get(row, "gap", here, str),
                )
            )
        elif op == "level_up":
            commands.append(ScriptCommand("level_up"))
        else:
            raise DocumentError(f"unknown op '{op}'", here)
    return commands


# -- top level -----------------------------------------------------------------------


_PARSERS = {
    "complex": body_to_complex,
    "ruptured": body_to_ruptured,
    "fibration": body_to_fibration,
    "covering-task": body_to_covering_task,
    "derive-task": body_to_derive_task,
    "judgment-script": body_to_script,
}


def parse_document(text: str) -> Document:
    """Parse one document from JSON text, dispatching on its kind."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, f"line {exc.lineno}, column {exc.colno}")
    if not isinstance(raw, dict):
        raise DocumentError("document must be a JSON object", "top level")
    fmt = _get(raw, "format", "top level", str)
    _expect(fmt == FORMAT, f"unsupported format '{fmt}'", "format")
    kind = _get(raw, "kind", "top level", str)
    if kind not in _PARSERS:
        raise DocumentError(f"unknown kind '{kind}'", "kind")
    return Document(kind, _PARSERS[kind](raw, kind))


def serialize_document(doc: Document) -> str:
    """Deterministic JSON text for a document (sorted keys, 2-space indent)."""
    if doc.kind == "complex":
        body = complex_to_body(doc.body)
    elif doc.kind == "ruptured":
        body = ruptured_to_body(doc.body)
    elif doc.kind == "fibration":
        body = fibration_to_body(doc.body)
    elif doc.kind == "covering-task":
        body = covering_task_to_body(doc.body)
    elif doc.kind == "derive-task":
        body = derive_task_to_body(doc.body)
    elif doc.kind == "judgment-script":
        body = script_to_body(doc.body)
    else:
        raise DocumentError(f"unknown kind '{doc.kind}'", "kind")
    payload = {"format": FORMAT, "kind": doc.kind}
    payload.update(body)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def load_document(path) -> Document:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise DocumentError(str(exc), str(path))
    return parse_document(text)
