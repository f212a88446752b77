"""Ruptured fibrations: lifting problems over a structure-preserving
projection, transport with coherent/gapped/open outcomes, fibers, and
composition.

A lifting problem pairs a horn in the total space (all faces coherent) with
a coherent base simplex whose faces are the projected horn faces. Exactly
one of three things holds for it: a coherent solution exists, the problem
is gap-marked, or it is open. Transport is the 1-dimensional case anchored
at the source vertex: the lift of an edge from a fiber point, whose target
endpoint is the transported point.

Based-loop closure problems (lifting a multi-edge loop to a loop at a fiber
point) cannot be keyed by a single horn in a face-map-only model; they live
in a dedicated registry attached to the fibration, populated by the
covering machinery.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import KernelError, Violation
from .ruptured import (
    CoherentlyFilled,
    GapMode,
    GapWitnessed,
    Open,
    RupturedComplex,
    Trichotomy,
    validate_ruptured,
)
from .simplicial import (
    HornSpec,
    SimplexId,
    SimplicialMap,
    TruncatedComplex,
    check_simplicial_map,
    enumerate_horns,
)


@dataclass(frozen=True)
class LiftingProblemKey:
    """A horn in the total space together with the coherent base simplex it
    should lift. The base simplex's dimension equals the horn's."""

    horn: HornSpec
    base: SimplexId

    def __str__(self) -> str:
        return f"lift({self.horn} over {self.base})"


@dataclass(frozen=True)
class LoopProblem:
    """One based-loop closure problem: lift a loop to a loop at ``start``.

    Coherent entries carry the closing lift; gapped entries carry a
    monodromy-style gap mode whose payload is the fiber permutation.
    """

    loop_key: tuple[tuple[int, bool], ...]
    start: SimplexId
    gapped: bool
    mode: Optional[GapMode] = None
    closing_lift: Optional[object] = None  # EdgePath when coherent


@dataclass(frozen=True)
class RupturedFibrationData:
    """A projection between ruptured complexes plus its gap-marked lifting
    problems, composite-edge designations, and based-loop registry."""

    total: RupturedComplex
    base: RupturedComplex
    proj: SimplicialMap
    gap_lifts: Mapping[LiftingProblemKey, Optional[GapMode]] = field(
        default_factory=dict
    )
    composites: Mapping[tuple[int, int], int] = field(default_factory=dict)
    loop_gaps: Mapping[tuple[tuple[tuple[int, bool], ...], int], LoopProblem] = field(
        default_factory=dict
    )

    def with_loop_gaps(self, registry) -> "RupturedFibrationData":
        return RupturedFibrationData(
            self.total, self.base, self.proj, dict(self.gap_lifts),
            dict(self.composites), dict(registry),
        )


@dataclass(frozen=True)
class Coherent:
    """Transport succeeded; ``multiplicity`` counts the coherent lifts and
    ``target`` is the endpoint of the least one."""

    target: SimplexId
    multiplicity: int = 1


@dataclass(frozen=True)
class Gapped:
    mode: Optional[GapMode] = None


@dataclass(frozen=True)
class OpenTransport:
    pass


TransportOutcome = Coherent | Gapped | OpenTransport


@dataclass(frozen=True)
class TransportHornInhabitant:
    """A coherent term, a coherent path, and the gap witness of their
    lifting problem. ``path`` is a base edge, or an edge path for
    based-loop closure problems."""

    term: SimplexId
    path: object
    gap: Optional[GapMode]


@dataclass(frozen=True)
class FunctorialityHornInhabitant:
    """Stepwise transport succeeded but the designated composite is gapped."""

    term: SimplexId
    first: SimplexId
    second: SimplexId
    composite: SimplexId
    midpoint: SimplexId
    endpoint: SimplexId
    gap: Optional[GapMode]


# -- key validation ----------------------------------------------------------


def key_violations(f: RupturedFibrationData, key: LiftingProblemKey) -> list[Violation]:
    """Well-formedness of a lifting problem: horn faces exist and are
    coherent in the total space, the base simplex is coherent with matching
    dimension, and proj(face_i) = d_i(base) for every present i."""
    report: list[Violation] = []
    e, b = f.total.underlying, f.base.underlying
    h = key.horn
    if not 1 <= h.n <= e.dim_bound:
        report.append(Violation("lift-horn-dim", f"{key}: horn dimension out of range"))
        return report
    for i, fc in h.face_map().items():
        if not 0 <= fc < e.count(h.n - 1):
            report.append(
                Violation("lift-horn-face", f"{key}: face {i} missing in total space")
            )
        elif not f.total.is_coherent(SimplexId(h.n - 1, fc)):
            report.append(
                Violation(
                    "lift-horn-coherence",
                    f"{key}: face {i} = {h.n - 1}/{fc} is not coherent",
                )
            )
    if key.base.dim != h.n:
        report.append(
            Violation("lift-base-dim", f"{key}: base dimension {key.base.dim} != {h.n}")
        )
    elif not b.has(key.base):
        report.append(Violation("lift-base-missing", f"{key}: base simplex missing"))
    elif not f.base.is_coherent(key.base):
        report.append(Violation("lift-base-coherence", f"{key}: base simplex not coherent"))
    if report:
        return report
    for i, fc in h.face_map().items():
        if f.proj.apply(SimplexId(h.n - 1, fc)) != b.face(key.base, i):
            report.append(
                Violation(
                    "lift-compatibility",
                    f"{key}: proj(face {i}) != d_{i}(base)",
                )
            )
    return report


def _solutions(f: RupturedFibrationData, key: LiftingProblemKey) -> list[SimplexId]:
    """Coherent total-space simplices that fill the horn and project onto
    the base simplex, in ascending index order."""
    e = f.total.underlying
    fm = key.horn.face_map()
    out = []
    for idx in range(e.count(key.horn.n)):
        sid = SimplexId(key.horn.n, idx)
        if not f.total.is_coherent(sid):
            continue
        row = e.face_row(key.horn.n, idx)
        if all(row[i] == fc for i, fc in fm.items()):
            if f.proj.apply(sid) == key.base:
                out.append(sid)
    return out


# -- operations --------------------------------------------------------------


def validate_fibration(f: RupturedFibrationData) -> list[Violation]:
    """Projection validity, well-formedness of every gap-marked problem,
    and lifting-exclusion: no gap-marked problem may have a coherent
    solution."""
    report = list(
        check_simplicial_map(f.proj, f.total.underlying, f.base.underlying)
    )
    for key in sorted(f.gap_lifts, key=lambda k: (k.horn, k.base)):
        bad = key_violations(f, key)
        report.extend(bad)
        if bad:
            continue
        for sol in _solutions(f, key):
            report.append(
                Violation(
                    "lifting-exclusion",
                    f"{key} is gap-marked but coherent {sol} solves it",
                )
            )
    return report


def validate_fibration_deep(f: RupturedFibrationData) -> list[Violation]:
    """validate_fibration plus full validation of both ruptured complexes."""
    report = []
    for name, r in (("total", f.total), ("base", f.base)):
        for v in validate_ruptured(r):
            report.append(Violation(v.kind, f"{name}: {v.message}"))
    report.extend(validate_fibration(f))
    return report


def classify_lift(f: RupturedFibrationData, key: LiftingProblemKey) -> Trichotomy:
    """Trichotomy for one lifting problem: coherent solutions if any exist,
    else the gap mark, else open. Malformed keys are rejected."""
    bad = key_violations(f, key)
    if bad:
        raise KernelError("; ".join(v.message for v in bad))
    sols = _solutions(f, key)
    if sols:
        return CoherentlyFilled(tuple(sols))
    if key in f.gap_lifts:
        return GapWitnessed(f.gap_lifts[key])
    return Open()


def transport_key(f: RupturedFibrationData, e: SimplexId, path: SimplexId) -> LiftingProblemKey:
    """The lifting problem of transporting fiber point ``e`` along base
    edge ``path``: the source-anchored 1-horn (present face index 1, the
    target face missing) over the edge."""
    return LiftingProblemKey(
        HornSpec.from_mapping(1, 0, {1: e.index}), path
    )


def transport(
    f: RupturedFibrationData, e: SimplexId, path: SimplexId
) -> TransportOutcome:
    """Transport a coherent fiber point along a coherent base edge.

    Coherent with the endpoint of the least coherent lift (an edge starting
    at ``e`` projecting onto ``path``) and the lift multiplicity; gapped
    when the problem is gap-marked; open otherwise.
    """
    _check_transport_inputs(f, e, path)
    lifts = []
    eu = f.total.underlying
    for idx in range(eu.count(1)):
        sid = SimplexId(1, idx)
        if not f.total.is_coherent(sid):
            continue
        if eu.face(sid, 1) == e and f.proj.apply(sid) == path:
            lifts.append(sid)
    if lifts:
        least = min(lifts)
        return Coherent(eu.face(least, 0), len(lifts))
    key = transport_key(f, e, path)
    if key in f.gap_lifts:
        return Gapped(f.gap_lifts[key])
    return OpenTransport()


def _check_transport_inputs(f: RupturedFibrationData, e: SimplexId, path: SimplexId):
    if e.dim != 0 or not f.total.underlying.has(e):
        raise KernelError(f"transport needs a total-space vertex, got {e}")
    if not f.total.is_coherent(e):
        raise KernelError(f"fiber point {e} is not coherent")
    if path.dim != 1 or not f.base.underlying.has(path):
        raise KernelError(f"transport needs a base edge, got {path}")
    if not f.base.is_coherent(path):
        raise KernelError(f"base edge {path} is not coherent")
    if f.proj.apply(e) != f.base.underlying.face(path, 1):
        raise KernelError(
            f"source mismatch: proj({e}) is not the source of {path}"
        )


def detect_transport_horn(
    f: RupturedFibrationData, e: SimplexId, path
) -> Optional[TransportHornInhabitant]:
    """The transport-horn inhabitant (term, path, gap witness) when the
    transport problem is gapped; None otherwise.

    ``path`` may be a base edge, or an edge path for based-loop closure
    problems registered by the covering machinery.
    """
    if isinstance(path, SimplexId):
        outcome = transport(f, e, path)
        if isinstance(outcome, Gapped):
            return TransportHornInhabitant(e, path, outcome.mode)
        return None
    key = (path.key(), e.index)
    entry = f.loop_gaps.get(key)
    if entry is not None and entry.gapped:
        return TransportHornInhabitant(e, path, entry.mode)
    return None


def fiber(
    f: RupturedFibrationData, b: SimplexId
) -> tuple[RupturedComplex, SimplicialMap]:
    """The ruptured sub-complex of the total space over a coherent base
    vertex, with its inclusion map.

    Contains the simplices all of whose vertices project to ``b``, with
    coherence restricted and gap restricted to horns lying in the fiber.
    """
    if b.dim != 0 or not f.base.underlying.has(b):
        raise KernelError(f"fiber needs a base vertex, got {b}")
    if not f.base.is_coherent(b):
        raise KernelError(f"base vertex {b} is not coherent")
    e = f.total.underlying
    keep: list[list[int]] = []
    for n in range(e.dim_bound + 1):
        members = [
            idx
            for idx in range(e.count(n))
            if all(
                f.proj.apply(v) == b for v in e.vertices_of(SimplexId(n, idx))
            )
        ]
        keep.append(members)
    new_index = [{old: new for new, old in enumerate(dim)} for dim in keep]
    counts = [len(dim) for dim in keep]
    faces = {}
    for n in range(1, e.dim_bound + 1):
        faces[n] = [
            [new_index[n - 1][fc] for fc in e.face_row(n, old)] for old in keep[n]
        ]
    labels = {}
    for n in range(e.dim_bound + 1):
        per_dim = [e.label(SimplexId(n, old)) for old in keep[n]]
        if any(l is not None for l in per_dim):
            labels[n] = [l if l is not None else "" for l in per_dim]
    sub = TruncatedComplex.create(e.dim_bound, counts, faces, labels)
    coh = {
        n: {new_index[n][old] for old in keep[n] if old in f.total.coh[n]}
        for n in range(e.dim_bound + 1)
    }
    gap = []
    modes = {}
    for h in f.total.gap:
        if all(fc in new_index[h.n - 1] for fc in h.faces):
            translated = HornSpec(
                h.n, h.k, tuple(new_index[h.n - 1][fc] for fc in h.faces)
            )
            gap.append(translated)
            mode = f.total.gap_modes.get(h)
            if mode is not None:
                modes[translated] = mode
    inclusion = SimplicialMap(tuple(tuple(dim) for dim in keep))
    return RupturedComplex.create(sub, coh, gap, modes), inclusion


def enumerate_lifting_problems(f: RupturedFibrationData) -> list[LiftingProblemKey]:
    """Every well-formed lifting problem representable in the truncation,
    in (horn, base) order."""
    e, b = f.total.underlying, f.base.underlying
    out = []
    top = min(e.dim_bound, b.dim_bound)
    for n in range(1, top + 1):
        for k in range(n + 1):
            for h in enumerate_horns(e, n, k):
                if not all(
                    f.total.is_coherent(SimplexId(n - 1, fc)) for fc in h.faces
                ):
                    continue
                fm = h.face_map()
                for idx in range(b.count(n)):
                    base_sid = SimplexId(n, idx)
                    if not f.base.is_coherent(base_sid):
                        continue
                    row = b.face_row(n, idx)
                    if all(
                        f.proj.apply(SimplexId(n - 1, fc)) == SimplexId(n - 1, row[i])
                        for i, fc in fm.items()
                    ):
                        out.append(LiftingProblemKey(h, base_sid))
    out.sort(key=lambda key: (key.horn, key.base))
    return out


def compose_fibrations(
    f: RupturedFibrationData, g: RupturedFibrationData
) -> RupturedFibrationData:
    """Compose p: E -> B with q: B -> A into E -> A.

    The composite's gap-marked problems are materialized over every
    well-formed problem of the composite: a problem is gapped when its
    base-level step is gapped, or that step is coherent and the total-level
    step over every coherent middle lift is gapped (the least middle's mode
    is used). It is coherent when some middle admits a coherent total-level
    solution, and open otherwise. Loop registries and composite
    designations of the first stage do not survive composition.
    """
    if f.base != g.total:
        raise KernelError("composition needs the first base to equal the second total")
    proj = SimplicialMap.compose(g.proj, f.proj)
    composite = RupturedFibrationData(f.total, g.base, proj)
    mid_bound = f.base.underlying.dim_bound
    gap_lifts: dict[LiftingProblemKey, Optional[GapMode]] = {}
    for key in enumerate_lifting_problems(composite):
        h = key.horn
        if h.n > mid_bound:
            continue
        mid_horn = f.proj.apply_horn(h)
        step1 = LiftingProblemKey(mid_horn, key.base)
        bad = key_violations(g, step1)
        if bad:
            continue
        s1 = classify_lift(g, step1)
        if isinstance(s1, GapWitnessed):
            gap_lifts[key] = s1.mode
            continue
        if isinstance(s1, Open):
            continue
        statuses = []
        for mid in s1.fillers:
            step2 = LiftingProblemKey(h, mid)
            if key_violations(f, step2):
                continue
            statuses.append(classify_lift(f, step2))
        if any(isinstance(st, CoherentlyFilled) for st in statuses):
            continue
        gapped = [st for st in statuses if isinstance(st, GapWitnessed)]
        if gapped:
            gap_lifts[key] = gapped[0].mode
    return RupturedFibrationData(f.total, g.base, proj, gap_lifts)


def detect_functoriality_horn(
    f: RupturedFibrationData,
    e: SimplexId,
    first: SimplexId,
    second: SimplexId,
) -> Optional[FunctorialityHornInhabitant]:
    """The functoriality-horn inhabitant when stepwise transport along two
    composable base edges succeeds but transport along their designated
    composite edge is gapped; None otherwise.

    The composite edge must be designated in the fibration data, since a
    face-map-only model has no canonical composite of two edges.
    """
    b = f.base.underlying
    for edge in (first, second):
        if edge.dim != 1 or not b.has(edge):
            raise KernelError(f"{edge} is not a base edge")
    if b.face(first, 0) != b.face(second, 1):
        raise KernelError("edges do not compose: target of first != source of second")
    designation = f.composites.get((first.index, second.index))
    if designation is None:
        raise KernelError(
            f"no composite edge designated for ({first.index}, {second.index})"
        )
    composite = SimplexId(1, designation)
    step1 = transport(f, e, first)
    if not isinstance(step1, Coherent):
        return None
    step2 = transport(f, step1.target, second)
    if not isinstance(step2, Coherent):
        return None
    direct = transport(f, e, composite)
    if not isinstance(direct, Gapped):
        return None
    return FunctorialityHornInhabitant(
        e, first, second, composite, step1.target, step2.target, direct.mode
    )
