"""Finite face-map-only simplicial structures.

A complex stores, for each dimension n up to a truncation bound, a finite
set of n-simplices indexed 0..count-1, and for n >= 1 the ordered face list
of each simplex: entry i is d_i, a simplex of dimension n-1. Degeneracy
maps are deliberately absent, so every enumeration below is exhaustive over
finite data.

Orientation of edges follows the face indices: for an edge e, d_1(e) is the
source vertex and d_0(e) the target.

Horns are partial simplices: a (n, k)-horn assigns a face to every index
i != k, and a filler is an n-simplex whose i-th face matches the assignment
for each present i. One-dimensional horn complexes are anchored so that the
(1, 1)-horn retains the source vertex {0} and the (1, 0)-horn the target
vertex {1}, matching the anchoring used by transport problems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator, Mapping, Optional, Sequence

from .errors import KernelError, Violation


@dataclass(frozen=True, order=True)
class SimplexId:
    """Identity of a simplex inside one complex: (dimension, index)."""

    dim: int
    index: int

    def __str__(self) -> str:
        return f"{self.dim}/{self.index}"


@dataclass(frozen=True, order=True)
class HornSpec:
    """A (n, k)-horn: faces for every index i != k, the k-th face missing.

    ``faces`` lists the assigned face indices (into dimension n-1) for the
    present indices in ascending order of i. Ordering of HornSpec values is
    lexicographic on (n, k, faces).
    """

    n: int
    k: int
    faces: tuple[int, ...]

    def __post_init__(self):
        if not (self.n >= 1 and 0 <= self.k <= self.n):
            raise KernelError(f"horn index k={self.k} out of range for n={self.n}")
        if len(self.faces) != self.n:
            raise KernelError(
                f"(n={self.n}, k={self.k})-horn needs {self.n} faces, got {len(self.faces)}"
            )

    @property
    def present_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n + 1) if i != self.k)

    def face(self, i: int) -> int:
        """Assigned face index at position i (i != k)."""
        if i == self.k or not 0 <= i <= self.n:
            raise KernelError(f"horn has no face at index {i}")
        return self.faces[i if i < self.k else i - 1]

    def face_map(self) -> dict[int, int]:
        return dict(zip(self.present_indices, self.faces))

    @classmethod
    def from_mapping(cls, n: int, k: int, mapping: Mapping[int, int]) -> "HornSpec":
        present = tuple(i for i in range(n + 1) if i != k)
        if set(mapping) != set(present):
            raise KernelError(
                f"(n={n}, k={k})-horn needs faces exactly at indices {present}"
            )
        return cls(n, k, tuple(mapping[i] for i in present))

    def __str__(self) -> str:
        inner = ", ".join(f"{i}:{f}" for i, f in zip(self.present_indices, self.faces))
        return f"horn(n={self.n}, k={self.k}, faces={{{inner}}})"


@dataclass(frozen=True)
class TruncatedComplex:
    """A finite simplicial structure truncated at ``dim_bound``.

    ``counts[n]`` is the number of n-simplices. ``face_table[n-1][i]`` holds
    the ordered face indices (d_0 .. d_n) of simplex (n, i), each an index
    into dimension n-1. ``labels[n]`` is an optional tuple of human-readable
    names; labels are metadata only and carry no semantics.
    """

    dim_bound: int
    counts: tuple[int, ...]
    face_table: tuple[tuple[tuple[int, ...], ...], ...]
    labels: tuple[Optional[tuple[str, ...]], ...] = field(default=())

    @classmethod
    def create(
        cls,
        dim_bound: int,
        counts: Sequence[int],
        faces: Mapping[int, Sequence[Sequence[int]]] | None = None,
        labels: Mapping[int, Sequence[str]] | None = None,
    ) -> "TruncatedComplex":
        """Build a complex from per-dimension counts and face lists.

        ``faces[n]`` lists, for each n-simplex in index order, its d_0..d_n
        face indices. No validation beyond basic shape is performed here;
        run :func:`validate_complex` to check references and identities.
        """
        if dim_bound < 0:
            raise KernelError("dim_bound must be non-negative")
        counts = tuple(counts)
        if len(counts) != dim_bound + 1:
            raise KernelError(f"need {dim_bound + 1} counts, got {len(counts)}")
        faces = faces or {}
        table = []
        for n in range(1, dim_bound + 1):
            rows = faces.get(n, ())
            if len(rows) != counts[n]:
                raise KernelError(
                    f"dimension {n}: {counts[n]} simplices but {len(rows)} face rows"
                )
            table.append(tuple(tuple(row) for row in rows))
        labels = labels or {}
        label_tuple = tuple(
            tuple(labels[n]) if n in labels else None for n in range(dim_bound + 1)
        )
        if all(l is None for l in label_tuple):
            label_tuple = ()
        return cls(dim_bound, counts, tuple(table), label_tuple)

    # -- basic queries -----------------------------------------------------

    def count(self, n: int) -> int:
        if 0 <= n <= self.dim_bound:
            return self.counts[n]
        return 0

    def has(self, sid: SimplexId) -> bool:
        return 0 <= sid.dim <= self.dim_bound and 0 <= sid.index < self.counts[sid.dim]

    def simplices(self, n: int) -> Iterator[SimplexId]:
        for i in range(self.count(n)):
            yield SimplexId(n, i)

    def all_simplices(self) -> Iterator[SimplexId]:
        for n in range(self.dim_bound + 1):
            yield from self.simplices(n)

    def face_row(self, n: int, index: int) -> tuple[int, ...]:
        return self.face_table[n - 1][index]

    def face(self, sid: SimplexId, i: int) -> SimplexId:
        """d_i of a simplex of dimension >= 1."""
        if sid.dim < 1:
            raise KernelError(f"simplex {sid} has no faces")
        row = self.face_row(sid.dim, sid.index)
        if not 0 <= i < len(row):
            raise KernelError(f"face index {i} out of range for {sid}")
        return SimplexId(sid.dim - 1, row[i])

    def faces_of(self, sid: SimplexId) -> tuple[SimplexId, ...]:
        if sid.dim == 0:
            return ()
        return tuple(
            SimplexId(sid.dim - 1, j) for j in self.face_row(sid.dim, sid.index)
        )

    def vertices_of(self, sid: SimplexId) -> frozenset[SimplexId]:
        """All dimension-0 iterated faces of a simplex."""
        frontier = {sid}
        while any(s.dim > 0 for s in frontier):
            nxt = set()
            for s in frontier:
                if s.dim == 0:
                    nxt.add(s)
                else:
                    nxt.update(self.faces_of(s))
            frontier = nxt
        return frozenset(frontier)

    def label(self, sid: SimplexId) -> Optional[str]:
        if not self.labels or sid.dim >= len(self.labels):
            return None
        per_dim = self.labels[sid.dim]
        if per_dim is None or sid.index >= len(per_dim):
            return None
        return per_dim[sid.index]

    def name(self, sid: SimplexId) -> str:
        """Label when present, else the dim/index form."""
        return self.label(sid) or str(sid)


@dataclass(frozen=True)
class SimplicialMap:
    """A per-dimension total map of simplex indices between two complexes.

    ``levels[n][i]`` is the target index of source simplex (n, i). The map
    covers dimensions 0..len(levels)-1; whether it commutes with faces is
    checked by :func:`check_simplicial_map`.
    """

    levels: tuple[tuple[int, ...], ...]

    @property
    def top_dim(self) -> int:
        return len(self.levels) - 1

    def apply(self, sid: SimplexId) -> SimplexId:
        if sid.dim > self.top_dim or sid.index >= len(self.levels[sid.dim]):
            raise KernelError(f"map not defined on {sid}")
        return SimplexId(sid.dim, self.levels[sid.dim][sid.index])

    def apply_horn(self, h: HornSpec) -> HornSpec:
        level = self.levels[h.n - 1]
        return HornSpec(h.n, h.k, tuple(level[f] for f in h.faces))

    @classmethod
    def identity(cls, x: TruncatedComplex) -> "SimplicialMap":
        return cls(tuple(tuple(range(x.count(n))) for n in range(x.dim_bound + 1)))

    @classmethod
    def compose(cls, outer: "SimplicialMap", inner: "SimplicialMap") -> "SimplicialMap":
        """outer after inner, defined up to the smaller top dimension."""
        top = min(outer.top_dim, inner.top_dim)
        return cls(
            tuple(
                tuple(outer.levels[n][j] for j in inner.levels[n])
                for n in range(top + 1)
            )
        )


# -- construction of standard shapes ---------------------------------------


def standard_simplex(n: int, dim_bound: int) -> TruncatedComplex:
    """The standard n-simplex, truncated at ``dim_bound``.

    m-simplices are the strictly increasing (m+1)-subsequences of {0..n};
    d_i deletes the i-th vertex. Cells above the bound are dropped, so
    standard_simplex(3, 2) keeps the 2-skeleton of the 3-simplex.
    """
    if n < 0:
        raise KernelError("n must be non-negative")
    if dim_bound < 0:
        raise KernelError("dim_bound must be non-negative")
    subsets: list[list[tuple[int, ...]]] = []
    index_of: list[dict[tuple[int, ...], int]] = []
    for m in range(dim_bound + 1):
        level = list(combinations(range(n + 1), m + 1))
        subsets.append(level)
        index_of.append({c: i for i, c in enumerate(level)})
    faces = {}
    for m in range(1, dim_bound + 1):
        rows = []
        for combo in subsets[m]:
            rows.append(
                [index_of[m - 1][combo[:i] + combo[i + 1 :]] for i in range(m + 1)]
            )
        faces[m] = rows
    labels = {
        m: ["-".join(str(v) for v in combo) for combo in subsets[m]]
        for m in range(dim_bound + 1)
        if subsets[m]
    }
    return TruncatedComplex.create(
        dim_bound, [len(level) for level in subsets], faces, labels
    )


def horn_complex(n: int, k: int) -> TruncatedComplex:
    """The standard (n, k)-horn as a complex: the n-simplex boundary with
    one (n-1)-face removed, plus all lower simplices.

    For n == 1 the result is a single vertex and follows the anchoring
    convention: (1, 1) retains the source vertex {0}, (1, 0) the target
    vertex {1}.
    """
    if n < 1:
        raise KernelError("horn dimension must be >= 1")
    if not 0 <= k <= n:
        raise KernelError(f"horn index k={k} out of range for n={n}")
    if n == 1:
        kept = 1 - k
        return TruncatedComplex.create(0, [1], labels={0: [str(kept)]})
    full = standard_simplex(n, n)
    removed = tuple(v for v in range(n + 1) if v != k)  # the k-th (n-1)-face
    kept_top = [
        combo
        for combo in combinations(range(n + 1), n)
        if combo != removed
    ]
    # Reindex dimension n-1; dimensions below n-1 carry over unchanged.
    old_level = list(combinations(range(n + 1), n))
    new_index = {c: i for i, c in enumerate(kept_top)}
    counts = [full.count(m) for m in range(n - 1)] + [len(kept_top)]
    faces = {}
    for m in range(1, n - 1):
        faces[m] = [list(full.face_row(m, i)) for i in range(full.count(m))]
    if n - 1 >= 1:
        rows = []
        for combo in kept_top:
            rows.append(
                [
                    # faces of an (n-1)-cell live in dimension n-2 and keep
                    # their indices from the full simplex
                    full.face_row(n - 1, old_level.index(combo))[i]
                    for i in range(n)
                ]
            )
        faces[n - 1] = rows
    labels = {}
    for m in range(n - 1):
        labels[m] = ["-".join(str(v) for v in c) for c in combinations(range(n + 1), m + 1)]
    labels[n - 1] = ["-".join(str(v) for v in c) for c in kept_top]
    return TruncatedComplex.create(n - 1, counts, faces, labels)


# -- validation -------------------------------------------------------------


def validate_complex(x: TruncatedComplex) -> list[Violation]:
    """Check face-reference resolution and the simplicial identities.

    Returns an empty report iff every face reference resolves to a simplex
    of the correct dimension and d_i d_j = d_{j-1} d_i holds for all i < j
    on every simplex of dimension >= 2.
    """
    report: list[Violation] = []
    for n in range(1, x.dim_bound + 1):
        for idx in range(x.count(n)):
            row = x.face_row(n, idx)
            if len(row) != n + 1:
                report.append(
                    Violation(
                        "face-arity",
                        f"simplex {n}/{idx} has {len(row)} faces, expected {n + 1}",
                    )
                )
                continue
            for i, f in enumerate(row):
                if not 0 <= f < x.count(n - 1):
                    report.append(
                        Violation(
                            "dangling-face",
                            f"simplex {n}/{idx} face d_{i} references missing {n - 1}/{f}",
                        )
                    )
    if report:
        return report
    for n in range(2, x.dim_bound + 1):
        for idx in range(x.count(n)):
            sid = SimplexId(n, idx)
            for j in range(n + 1):
                for i in range(j):
                    left = x.face(x.face(sid, j), i)
                    right = x.face(x.face(sid, i), j - 1)
                    if left != right:
                        report.append(
                            Violation(
                                "simplicial-identity",
                                f"d_{i} d_{j} != d_{j - 1} d_{i} on simplex {sid}",
                            )
                        )
    return report


def horn_violations(x: TruncatedComplex, h: HornSpec) -> list[Violation]:
    """Well-formedness of a horn inside a complex: references and boundary
    compatibility d_i(faces[j]) = d_{j-1}(faces[i]) for present i < j."""
    report: list[Violation] = []
    if not 1 <= h.n <= x.dim_bound:
        report.append(
            Violation("horn-dimension", f"horn dimension {h.n} exceeds bound {x.dim_bound}")
        )
        return report
    fm = h.face_map()
    for i, f in fm.items():
        if not 0 <= f < x.count(h.n - 1):
            report.append(
                Violation(
                    "horn-dangling-face",
                    f"{h} face {i} references missing {h.n - 1}/{f}",
                )
            )
    if report:
        return report
    if h.n >= 2:
        for j in h.present_indices:
            for i in h.present_indices:
                if i >= j:
                    continue
                left = x.face(SimplexId(h.n - 1, fm[j]), i)
                right = x.face(SimplexId(h.n - 1, fm[i]), j - 1)
                if left != right:
                    report.append(
                        Violation(
                            "horn-compatibility",
                            f"{h}: d_{i}(faces[{j}]) != d_{j - 1}(faces[{i}])",
                        )
                    )
    return report


# -- horn enumeration and filling -------------------------------------------


def enumerate_horns(x: TruncatedComplex, n: int, k: int) -> list[HornSpec]:
    """All boundary-compatible (n, k)-horns of the complex, each once, in
    lexicographic order on the assigned face indices."""
    if not 1 <= n <= x.dim_bound:
        raise KernelError(f"horn dimension {n} not in 1..{x.dim_bound}")
    if not 0 <= k <= n:
        raise KernelError(f"horn index k={k} out of range for n={n}")
    present = tuple(i for i in range(n + 1) if i != k)
    face_count = x.count(n - 1)
    result: list[HornSpec] = []

    def compatible(chosen: dict[int, int], i: int, f: int) -> bool:
        if n < 2:
            return True
        cand = SimplexId(n - 1, f)
        for j, g in chosen.items():
            lo, hi = (j, i) if j < i else (i, j)
            lo_face, hi_face = (g, f) if j < i else (f, g)
            # d_lo(faces[hi]) == d_{hi-1}(faces[lo])
            if x.face(SimplexId(n - 1, hi_face), lo) != x.face(
                SimplexId(n - 1, lo_face), hi - 1
            ):
                return False
        return True

    def extend(pos: int, chosen: dict[int, int]):
        if pos == len(present):
            result.append(
                HornSpec(n, k, tuple(chosen[i] for i in present))
            )
            return
        i = present[pos]
        for f in range(face_count):
            if compatible(chosen, i, f):
                chosen[i] = f
                extend(pos + 1, chosen)
                del chosen[i]

    extend(0, {})
    return result


def find_fillers(x: TruncatedComplex, h: HornSpec) -> list[SimplexId]:
    """All n-simplices whose i-th face matches the horn for every present i,
    in ascending index order."""
    bad = horn_violations(x, h)
    if any(v.kind == "horn-dangling-face" or v.kind == "horn-dimension" for v in bad):
        raise KernelError("; ".join(v.message for v in bad))
    fm = h.face_map()
    out = []
    for idx in range(x.count(h.n)):
        row = x.face_row(h.n, idx)
        if all(row[i] == f for i, f in fm.items()):
            out.append(SimplexId(h.n, idx))
    return out


def is_kan_up_to(
    x: TruncatedComplex, max_dim: int
) -> tuple[bool, Optional[HornSpec]]:
    """Check horn filling for every inner horn of dimension <= max_dim.

    Only inner horns (0 < k < n) are checked: outer and 1-dimensional horn
    specs have fillers only through degenerate simplices, which the
    face-map-only model omits. Returns (True, None) when every inner horn
    has a filler, else (False, first unfilled horn) in (n, k, faces) order.
    The check says nothing about horns above the truncation bound.
    """
    if max_dim > x.dim_bound:
        raise KernelError(f"max_dim {max_dim} exceeds bound {x.dim_bound}")
    for n in range(2, max_dim + 1):
        for k in range(1, n):
            for h in enumerate_horns(x, n, k):
                if not find_fillers(x, h):
                    return False, h
    return True, None


def check_simplicial_map(
    f: SimplicialMap, x: TruncatedComplex, y: TruncatedComplex
) -> list[Violation]:
    """Totality and face-commutation report for f: X -> Y.

    Empty iff f is defined on every simplex of X up to the common bound,
    lands in Y, and satisfies f(d_i(s)) = d_i(f(s)) everywhere.
    """
    report: list[Violation] = []
    expected_top = min(x.dim_bound, y.dim_bound)
    if f.top_dim != expected_top:
        report.append(
            Violation(
                "map-levels",
                f"map covers dimensions 0..{f.top_dim}, expected 0..{expected_top}",
            )
        )
    for n in range(min(f.top_dim, expected_top) + 1):
        if len(f.levels[n]) != x.count(n):
            report.append(
                Violation(
                    "map-totality",
                    f"dimension {n}: {len(f.levels[n])} entries for {x.count(n)} simplices",
                )
            )
            continue
        for i, t in enumerate(f.levels[n]):
            if not 0 <= t < y.count(n):
                report.append(
                    Violation(
                        "map-range",
                        f"f({n}/{i}) = {n}/{t} is not a simplex of the target",
                    )
                )
    if report:
        return report
    for n in range(1, f.top_dim + 1):
        for idx in range(x.count(n)):
            src = SimplexId(n, idx)
            img = f.apply(src)
            for i in range(n + 1):
                if f.apply(x.face(src, i)) != y.face(img, i):
                    report.append(
                        Violation(
                            "face-commutation",
                            f"f(d_{i}({src})) != d_{i}(f({src}))",
                        )
                    )
    return report
