"""Finite abstract simplicial complexes with explicit face storage.

A complex is stored as the full set of its faces (not just facets).  Faces
are ``frozenset`` instances over integer vertex ids.  The empty face is a
member of every nonempty complex, which makes the reduced Euler
characteristic a plain signed count over all stored faces and gives the
f-vector its leading ``f_{-1}`` entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

Face = frozenset

#: Refuse to close over facets larger than this (closure is 2**size faces).
MAX_FACET_SIZE = 16


class FormatError(ValueError):
    """Raised for malformed facet-list text, JSON documents, or witnesses."""


def face_key(face: Iterable[int]) -> tuple[int, ...]:
    """Deterministic sort key for a face: its sorted vertex tuple."""
    return tuple(sorted(face))


def face_sort_key(face: Iterable[int]) -> tuple:
    """Sort faces by dimension first, then lexicographically."""
    k = face_key(face)
    return (len(k), k)


class UnionFind:
    """Disjoint sets over arbitrary hashable items, with path compression."""

    def __init__(self) -> None:
        self._parent: dict = {}

    def find(self, x):
        parent = self._parent
        if x not in parent:
            parent[x] = x
            return x
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[rb] = ra

    def groups(self) -> list[set]:
        out: dict = {}
        for x in self._parent:
            out.setdefault(self.find(x), set()).add(x)
        return list(out.values())


def _validate_vertex(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise FormatError(f"vertex id must be an int, got {v!r}")
    return v


class Complex:
    """An immutable abstract simplicial complex.

    Construct through :meth:`from_facets` (validates and closes downward) or
    :meth:`from_faces` (trusted input: the face set must already be closed
    under taking subsets).  The void complex has no faces at all; every other
    complex contains the empty face.
    """

    __slots__ = ("_faces", "_hash", "_facets", "_vertices", "_dim")

    def __init__(self, faces: frozenset, _trusted: bool = False):
        if not _trusted:
            raise TypeError("use Complex.from_facets or Complex.from_faces")
        self._faces = faces
        self._hash = None
        self._facets = None
        self._vertices = None
        self._dim = None

    # -- construction ---------------------------------------------------

    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]]) -> "Complex":
        """Build the closure of a facet list.

        Rejects empty facets, repeated vertices inside a facet, and
        non-integer vertex ids.  Facets that are faces of other facets are
        harmless (they disappear into the closure).
        """
        faces: set = set()
        seen_any = False
        for raw in facets:
            vs = [_validate_vertex(v) for v in raw]
            if not vs:
                raise FormatError("empty facet")
            if len(set(vs)) != len(vs):
                raise FormatError(f"facet {vs} repeats a vertex")
            if len(vs) > MAX_FACET_SIZE:
                raise FormatError(f"facet with {len(vs)} vertices exceeds limit")
            seen_any = True
            for r in range(len(vs) + 1):
                for sub in combinations(sorted(vs), r):
                    faces.add(frozenset(sub))
        if not seen_any:
            return cls(frozenset(), _trusted=True)
        return cls(frozenset(faces), _trusted=True)

    @classmethod
    def from_faces(cls, faces: Iterable[frozenset]) -> "Complex":
        """Wrap an already-closed face set (the empty face is added)."""
        fs = set(faces)
        fs.discard(frozenset())
        if fs:
            fs.add(frozenset())
        return cls(frozenset(fs), _trusted=True)

    @classmethod
    def empty(cls) -> "Complex":
        """The void complex (no faces, not even the empty one)."""
        return cls(frozenset(), _trusted=True)

    # -- basic queries ---------------------------------------------------

    @property
    def faces(self) -> frozenset:
        return self._faces

    @property
    def nonempty_faces(self) -> Iterator[frozenset]:
        return (f for f in self._faces if f)

    def __contains__(self, face) -> bool:
        return frozenset(face) in self._faces

    def __bool__(self) -> bool:
        return bool(self._faces)

    def __len__(self) -> int:
        return len(self._faces)

    def __eq__(self, other) -> bool:
        return isinstance(other, Complex) and self._faces == other._faces

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._faces)
        return self._hash

    def __repr__(self) -> str:
        return f"Complex(dim={self.dim}, facets={len(self.facets)})"

    @property
    def vertices(self) -> tuple[int, ...]:
        if self._vertices is None:
            self._vertices = tuple(sorted(v for f in self._faces if len(f) == 1 for v in f))
        return self._vertices

    @property
    def dim(self) -> int:
        """Largest face dimension; -1 for the void and empty-face complexes."""
        if self._dim is None:
            self._dim = max((len(f) for f in self._faces), default=0) - 1
        return self._dim

    @property
    def facets(self) -> frozenset:
        """Inclusion-maximal nonempty faces."""
        if self._facets is None:
            by_size: dict[int, set] = {}
            for f in self._faces:
                if f:
                    by_size.setdefault(len(f), set()).add(f)
            out = set()
            for size, group in by_size.items():
                bigger = by_size.get(size + 1, ())
                for f in group:
                    # In a closed complex a non-maximal face always has a
                    # coface one dimension up.
                    if not any(f < g for g in bigger):
                        out.add(f)
            self._facets = frozenset(out)
        return self._facets

    def faces_of_dim(self, d: int) -> list[frozenset]:
        return sorted((f for f in self._faces if len(f) == d + 1), key=face_key)

    def f_vector(self) -> tuple[int, ...]:
        """(f_{-1}, f_0, ..., f_d); the void complex reports (0,)."""
        if not self._faces:
            return (0,)
        counts = [0] * (self.dim + 2)
        for f in self._faces:
            counts[len(f)] += 1
        return tuple(counts)

    def reduced_euler_characteristic(self) -> int:
        """Sum of (-1)^dim over every face, the empty face included."""
        return sum(-1 if len(f) % 2 == 0 else 1 for f in self._faces)

    def is_pure(self, d: int | None = None) -> bool:
        """True when every facet has dimension ``d`` (default: ``self.dim``)."""
        if not self._faces:
            return True
        if d is None:
            d = self.dim
        return all(len(f) == d + 1 for f in self.facets)

    # -- local operations -------------------------------------------------

    def link(self, sigma: Iterable[int]) -> "Complex":
        """Faces disjoint from ``sigma`` whose union with it is a face.

        ``link(())`` is the complex itself.  The link of a face not in the
        complex is void.
        """
        s = frozenset(sigma)
        if s not in self._faces:
            return Complex.empty()
        if not s:
            return self
        out = {f for f in self._faces if not (f & s) and (f | s) in self._faces}
        return Complex(frozenset(out), _trusted=True)

    def delete(self, sigma: Iterable[int]) -> "Complex":
        """Remove every face containing ``sigma`` (a no-op if absent)."""
        s = frozenset(sigma)
        if not s:
            return Complex.empty()
        out = frozenset(f for f in self._faces if not s <= f)
        return Complex(out, _trusted=True)

    def remove_facet(self, facet: Iterable[int]) -> "Complex":
        """Drop a single maximal face, keeping all of its proper faces."""
        f = frozenset(facet)
        if f not in self.facets:
            raise ValueError(f"{face_key(f)} is not a facet")
        return Complex(self._faces - {f}, _trusted=True)

    def subcomplex_closure(self, faces: Iterable[Iterable[int]]) -> "Complex":
        """Closure of the given faces, which must all belong to the complex."""
        out: set = set()
        for raw in faces:
            f = frozenset(raw)
            if f not in self._faces:
                raise ValueError(f"{face_key(f)} is not a face of the complex")
            for r in range(len(f) + 1):
                out.update(frozenset(c) for c in combinations(sorted(f), r))
        return Complex.from_faces(out)


# -- joins and cones -------------------------------------------------------


def join(k: Complex, l: Complex) -> Complex:
    """Simplicial join: all unions of a face of ``k`` with a face of ``l``.

    The vertex sets must be disjoint.  The empty-face complex is the join
    identity and the void complex annihilates.
    """
    if set(k.vertices) & set(l.vertices):
        overlap = sorted(set(k.vertices) & set(l.vertices))
        raise ValueError(f"join requires disjoint vertex ids, shared: {overlap}")
    if not k.faces or not l.faces:
        return Complex.empty()
    out = {a | b for a in k.faces for b in l.faces}
    return Complex(frozenset(out), _trusted=True)


def cone(k: Complex, ell: int = 0) -> Complex:
    """Join ``k`` with a full ``ell``-simplex on fresh vertex ids."""
    if ell < 0:
        raise ValueError("cone dimension must be >= 0")
    base = max(k.vertices, default=-1) + 1
    apex = Complex.from_facets([range(base, base + ell + 1)])
    return join(k, apex)


# -- pseudomanifold and link checks ----------------------------------------


def is_pseudomanifold(k: Complex) -> str:
    """Classify a pure complex by its ridge degrees.

    Returns ``"closed"`` (every (d-1)-face in exactly two facets),
    ``"with_boundary"`` (degrees one or two, at least one boundary ridge),
    or ``"no"`` (some ridge in three or more facets).  Raises on non-pure
    input.
    """
    if not k.faces:
        raise ValueError("pseudomanifold check needs a nonempty complex")
    d = k.dim
    if not k.is_pure(d):
        raise ValueError("pseudomanifold check needs a pure complex")
    degree: dict[frozenset, int] = {}
    for facet in k.facets:
        for ridge in combinations(sorted(facet), d):
            degree[frozenset(ridge)] = degree.get(frozenset(ridge), 0) + 1
    if any(c > 2 for c in degree.values()):
        return "no"
    if all(c == 2 for c in degree.values()):
        return "closed"
    return "with_boundary"


def _skeleton_connected(vertices: Iterable[int], edges: Iterable[frozenset]) -> bool:
    vs = list(vertices)
    if len(vs) <= 1:
        return True
    uf = UnionFind()
    for v in vs:
        uf.find(v)
    for e in edges:
        a, b = sorted(e)
        uf.union(a, b)
    root = uf.find(vs[0])
    return all(uf.find(v) == root for v in vs)


def one_skeleton_connected(k: Complex) -> bool:
    """Connectivity of the graph of vertices and edges (void: True)."""
    return _skeleton_connected(k.vertices, (f for f in k.faces if len(f) == 2))


def vertex_links_connected(k: Complex) -> tuple[bool, tuple[int, ...]]:
    """Check every vertex link for 1-skeleton connectivity.

    Returns ``(ok, failing_vertices)``.  A link that is empty or a single
    vertex counts as connected.
    """
    bad = []
    for v in k.vertices:
        lk = k.link((v,))
        if not _skeleton_connected(lk.vertices, (f for f in lk.faces if len(f) == 2)):
            bad.append(v)
    return (not bad, tuple(bad))


def boundary_ridges(k: Complex) -> list[frozenset]:
    """Ridges ((d-1)-faces) contained in exactly one facet."""
    d = k.dim
    degree: dict[frozenset, int] = {}
    for facet in k.facets:
        if len(facet) != d + 1:
            continue
        for ridge in combinations(sorted(facet), d):
            degree[frozenset(ridge)] = degree.get(frozenset(ridge), 0) + 1
    return sorted((r for r, c in degree.items() if c == 1), key=face_key)


# -- barycentric subdivision ------------------------------------------------


@dataclass(frozen=True)
class Subdivision:
    """A subdivided complex plus the carrier table back to the original.

    ``vertex_carrier`` maps each new vertex id to the original face it
    subdivides (after composing through all levels).  The carrier of a new
    face is the union of its vertices' carriers, which is always an original
    face because carriers along a chain are nested.
    """

    complex: Complex
    vertex_carrier: Mapping[int, frozenset]
    levels: int

    def face_carrier(self, face: Iterable[int]) -> frozenset:
        out: frozenset = frozenset()
        for v in face:
            out = out | self.vertex_carrier[v]
        return out

    def preimage_faces(self, faces: Iterable[Iterable[int]]) -> frozenset:
        """All subdivided faces whose carrier lies in the given face set."""
        allowed = {frozenset(f) for f in faces}
        return frozenset(
            f for f in self.complex.faces if f and self.face_carrier(f) in allowed
        )


def _subdivide_once(k: Complex) -> tuple[Complex, dict[int, frozenset]]:
    originals = sorted((f for f in k.faces if f), key=face_sort_key)
    vid = {f: i for i, f in enumerate(originals)}
    carrier = {i: f for f, i in vid.items()}
    faces: set = {frozenset()}
    # Chains of strict inclusion among nonempty faces.  Built by extending
    # chains upward; every chain's faces are nested so the top determines
    # the carrier.
    stack: list[tuple[frozenset, tuple[int, ...]]] = [(f, (vid[f],)) for f in originals]
    while stack:
        top, chain = stack.pop()
        faces.add(frozenset(chain))
        for g in originals:
            if len(g) > len(top) and top < g:
                stack.append((g, chain + (vid[g],)))
    return Complex(frozenset(faces), _trusted=True), carrier


def barycentric_subdivision(k: Complex, levels: int = 1) -> Subdivision:
    """Barycentric subdivision iterated ``levels`` times.

    ``levels=0`` returns an identity subdivision (each vertex carried by
    itself).  New vertex ids are assigned by sorting the subdivided faces
    by dimension then lexicographically, so the numbering is deterministic.
    """
    if levels < 0:
        raise ValueError("levels must be >= 0")
    current = k
    carrier = {v: frozenset([v]) for v in k.vertices}
    for _ in range(levels):
        current, table = _subdivide_once(current)
        carrier = {
            new: _compose_carrier(prev_face, carrier)
            for new, prev_face in table.items()
        }
    return Subdivision(complex=current, vertex_carrier=carrier, levels=levels)


def _compose_carrier(prev_face: frozenset, carrier: Mapping[int, frozenset]) -> frozenset:
    out: frozenset = frozenset()
    for v in prev_face:
        out = out | carrier[v]
    return out


def _subdivide_once_chains_in(faces: Iterable[frozenset], vid: Mapping[frozenset, int]) -> set:
    """Chains (as vid-sets) lying inside the given closed face family."""
    members = sorted((f for f in faces if f), key=face_sort_key)
    out: set = set()
    stack: list[tuple[frozenset, tuple[int, ...]]] = [(f, (vid[f],)) for f in members]
    member_set = set(members)
    while stack:
        top, chain = stack.pop()
        out.add(frozenset(chain))
        for g in member_set:
            if len(g) > len(top) and top < g:
                stack.append((g, chain + (vid[g],)))
    return out


# -- canonical form ---------------------------------------------------------


def canonical_form(k: Complex) -> tuple:
    """Hashable memoization key: equal keys imply isomorphic complexes.

    Vertices are colored by iterated refinement (facet-size profile, then
    neighbor color multisets over the 1-skeleton) and renamed in
    (color, original id) order.  The key is the renamed facet set.  The
    converse direction is not promised: isomorphic complexes with different
    ids may produce different keys, which only costs memo hits.
    """
    if not k.faces:
        return ("void",)
    verts = k.vertices
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for f in k.faces:
        if len(f) == 2:
            a, b = f
            adj[a].append(b)
            adj[b].append(a)
    profile: dict[int, list[int]] = {v: [] for v in verts}
    for facet in k.facets:
        for v in facet:
            profile[v].append(len(facet))
    color = {v: (tuple(sorted(profile[v])),) for v in verts}
    ranks = _rank_colors(color, verts)
    while True:
        sig = {
            v: (ranks[v], tuple(sorted(ranks[u] for u in adj[v]))) for v in verts
        }
        new_ranks = _rank_colors(sig, verts)
        if len(set(new_ranks.values())) == len(set(ranks.values())):
            break
        ranks = new_ranks
    order = sorted(verts, key=lambda v: (ranks[v], v))
    rename = {v: i for i, v in enumerate(order)}
    facets = tuple(
        sorted(tuple(sorted(rename[v] for v in f)) for f in k.facets)
    )
    return ("cx", facets)


def _rank_colors(color: Mapping[int, tuple], verts: Iterable[int]) -> dict[int, int]:
    distinct = sorted(set(color.values()))
    rank = {c: i for i, c in enumerate(distinct)}
    return {v: rank[color[v]] for v in verts}


# -- labels -----------------------------------------------------------------

_FEATURE_KINDS = ("vertex", "edge", "path", "subcomplex")


@dataclass(frozen=True)
class Feature:
    """A named landmark inside a complex.

    kind "vertex": value is an int.
    kind "edge": value is an ordered vertex pair (orientation matters for
        amalgamation).
    kind "path": value is an ordered vertex tuple; closed paths repeat the
        first vertex at the end.
    kind "subcomplex": value is a tuple of facet tuples.
    """

    kind: str
    value: tuple

    def __post_init__(self):
        if self.kind not in _FEATURE_KINDS:
            raise ValueError(f"unknown feature kind {self.kind!r}")

    @classmethod
    def vertex(cls, v: int) -> "Feature":
        return cls("vertex", (v,))

    @classmethod
    def edge(cls, a: int, b: int) -> "Feature":
        return cls("edge", (a, b))

    @classmethod
    def path(cls, vs: Iterable[int]) -> "Feature":
        return cls("path", tuple(vs))

    @classmethod
    def subcomplex(cls, facets: Iterable[Iterable[int]]) -> "Feature":
        return cls("subcomplex", tuple(sorted(face_key(f) for f in facets)))

    def edge_list(self) -> list[frozenset]:
        """Edges traversed by a path or edge feature."""
        if self.kind == "edge":
            return [frozenset(self.value)]
        if self.kind == "path":
            return [frozenset(p) for p in zip(self.value, self.value[1:])]
        raise ValueError(f"{self.kind} feature has no edge list")

    def face_set(self) -> set[frozenset]:
        """Closure of the feature as a set of nonempty faces."""
        if self.kind == "vertex":
            return {frozenset(self.value)}
        if self.kind in ("edge", "path"):
            out = {frozenset([v]) for v in self.value}
            out.update(self.edge_list())
            return out
        out = set()
        for facet in self.value:
            for r in range(1, len(facet) + 1):
                out.update(frozenset(c) for c in combinations(facet, r))
        return out


def _validate_feature(name: str, feat: Feature, k: Complex) -> None:
    for face in feat.face_set():
        if face not in k.faces:
            raise ValueError(
                f"label {name!r}: face {face_key(face)} is not in the complex"
            )
    if feat.kind == "path":
        vs = feat.value
        if len(vs) < 2:
            raise ValueError(f"label {name!r}: path needs at least two vertices")
        interior = vs[:-1] if vs[0] == vs[-1] else vs
        if len(set(interior)) != len(interior):
            raise ValueError(f"label {name!r}: path revisits a vertex")


@dataclass(frozen=True)
class LabeledComplex:
    """A complex together with a name -> Feature landmark table."""

    complex: Complex
    labels: Mapping[str, Feature]

    def __post_init__(self):
        object.__setattr__(self, "labels", dict(self.labels))
        for name, feat in self.labels.items():
            _validate_feature(name, feat, self.complex)

    def feature(self, name: str) -> Feature:
        if name not in self.labels:
            raise KeyError(f"no label {name!r}")
        return self.labels[name]

    def subcomplex(self, name: str) -> Complex:
        feat = self.feature(name)
        if feat.kind != "subcomplex":
            raise ValueError(f"label {name!r} has kind {feat.kind}, not subcomplex")
        return Complex.from_facets(feat.value)


def subdivide_labeled(lc: LabeledComplex, levels: int = 1) -> tuple[LabeledComplex, Subdivision]:
    """Subdivide a labeled complex, mapping every label through.

    Vertices map to vertices, edges to two-edge paths, paths to paths twice
    as long, and subcomplexes to their carrier preimage (one level at a
    time).
    """
    current = lc
    overall = barycentric_subdivision(lc.complex, 0)
    for _ in range(levels):
        sub = barycentric_subdivision(current.complex, 1)
        vid = {sub.vertex_carrier[i]: i for i in sub.vertex_carrier}
        labels: dict[str, Feature] = {}
        for name, feat in current.labels.items():
            labels[name] = _map_feature_once(feat, vid)
        current = LabeledComplex(sub.complex, labels)
        overall = Subdivision(
            complex=sub.complex,
            vertex_carrier={
                v: _compose_carrier(sub.vertex_carrier[v], overall.vertex_carrier)
                for v in sub.vertex_carrier
            },
            levels=overall.levels + 1,
        )
    return current, overall


def _map_feature_once(feat: Feature, vid: Mapping[frozenset, int]) -> Feature:
    if feat.kind == "vertex":
        return Feature.vertex(vid[frozenset(feat.value)])
    if feat.kind == "edge":
        a, b = feat.value
        return Feature.path(
            (vid[frozenset([a])], vid[frozenset((a, b))], vid[frozenset([b])])
        )
    if feat.kind == "path":
        vs = feat.value
        out = [vid[frozenset([vs[0]])]]
        for a, b in zip(vs, vs[1:]):
            out.append(vid[frozenset((a, b))])
            out.append(vid[frozenset([b])])
        return Feature.path(out)
    closure: set = set()
    for facet in feat.value:
        for r in range(1, len(facet) + 1):
            closure.update(frozenset(c) for c in combinations(facet, r))
    chains = _subdivide_once_chains_in(closure, vid)
    maximal = [c for c in chains if not any(c < d for d in chains)]
    return Feature.subcomplex(maximal)


# -- serialization -----------------------------------------------------------


def parse_facet_lines(text: str) -> Complex:
    """Facet-list text: one facet per line, whitespace-separated vertex ids.

    ``#`` starts a comment; blank lines are skipped.
    """
    facets = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            facets.append([int(tok) for tok in line.split()])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
    return Complex.from_facets(facets)


def format_facet_lines(k: Complex) -> str:
    lines = [" ".join(str(v) for v in face_key(f)) for f in sorted(k.facets, key=face_sort_key)]
    return "\n".join(lines) + "\n"


def to_json(lc: LabeledComplex | Complex) -> str:
    """Canonical JSON for a (labeled) complex; round-trips bit-exactly."""
    if isinstance(lc, Complex):
        lc = LabeledComplex(lc, {})
    doc = {
        "vertices": [{"id": v} for v in lc.complex.vertices],
        "facets": [list(face_key(f)) for f in sorted(lc.complex.facets, key=face_sort_key)],
        "labels": {
            name: {"kind": feat.kind, "value": _feature_value_json(feat)}
            for name, feat in sorted(lc.labels.items())
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _feature_value_json(feat: Feature):
    if feat.kind == "vertex":
        return feat.value[0]
    if feat.kind in ("edge", "path"):
        return list(feat.value)
    return [list(f) for f in feat.value]


def from_json(text: str) -> LabeledComplex:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("top level must be an object")
    for key in ("vertices", "facets"):
        if key not in doc:
            raise FormatError(f"missing key {key!r}")
    k = Complex.from_facets(doc["facets"])
    declared = {v["id"] if isinstance(v, dict) else v for v in doc["vertices"]}
    used = set(k.vertices)
    if not used <= declared:
        raise FormatError(f"facets use undeclared vertices: {sorted(used - declared)}")
    isolated = declared - used
    if isolated:
        # Isolated vertices are legitimate 0-faces.
        faces = set(k.faces) | {frozenset([v]) for v in isolated} | {frozenset()}
        k = Complex(frozenset(faces), _trusted=True)
    labels: dict[str, Feature] = {}
    for name, spec in (doc.get("labels") or {}).items():
        labels[name] = _feature_from_json(name, spec)
    try:
        return LabeledComplex(k, labels)
    except ValueError as exc:
        raise FormatError(str(exc)) from None


def _feature_from_json(name: str, spec) -> Feature:
    if not isinstance(spec, dict) or "kind" not in spec or "value" not in spec:
        raise FormatError(f"label {name!r}: need kind and value")
    kind, value = spec["kind"], spec["value"]
    if kind == "vertex":
        return Feature.vertex(_validate_vertex(value))
    if kind == "edge":
        if not isinstance(value, list) or len(value) != 2:
            raise FormatError(f"label {name!r}: edge value must be a pair")
        return Feature.edge(*map(_validate_vertex, value))
    if kind == "path":
        if not isinstance(value, list) or len(value) < 2:
            raise FormatError(f"label {name!r}: path value must list vertices")
        return Feature.path([_validate_vertex(v) for v in value])
    if kind == "subcomplex":
        if not isinstance(value, list):
            raise FormatError(f"label {name!r}: subcomplex value must list facets")
        return Feature.subcomplex([[_validate_vertex(v) for v in f] for f in value])
    raise FormatError(f"label {name!r}: unknown kind {kind!r}")
