"""Free faces, elementary collapses, and collapsibility deciders.

A face is free when the faces strictly containing it have a unique maximal
element; equivalently, exactly one facet strictly contains it.  An
elementary collapse deletes a free face together with every face containing
it, which preserves the reduced Euler characteristic.

Witness sequences emitted by the deciders here always pair a free face with
a coface exactly one dimension up; searches branch over such pairs, which
is complete because any wider collapse factors into one-dimension steps.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from shellkit.complex_core import (
    Complex,
    Face,
    FormatError,
    canonical_form,
    face_key,
    face_sort_key,
    is_pseudomanifold,
    one_skeleton_connected,
)

DEFAULT_BUDGET = 10**6


class CollapseError(ValueError):
    """A collapse step or gluing precondition failed."""


@dataclass(frozen=True)
class CollapsePair:
    """One collapse step: remove ``free`` and everything above it."""

    free: Face
    coface: Face

    def __post_init__(self):
        if not self.free or not self.free < self.coface:
            raise CollapseError(
                f"free face {face_key(self.free)} must be a proper nonempty "
                f"subface of {face_key(self.coface)}"
            )

    def as_lists(self) -> list[list[int]]:
        return [list(face_key(self.free)), list(face_key(self.coface))]


CollapseSequence = tuple  # of CollapsePair


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a budgeted search: yes / no / budget_exceeded."""

    verdict: str
    witness: tuple | None
    nodes: int

    @property
    def yes(self) -> bool:
        return self.verdict == "yes"


def _facet_containment_counts(k: Complex) -> dict[Face, int]:
    """For every nonempty face, the number of facets strictly containing it."""
    from itertools import combinations

    counts: dict[Face, int] = {f: 0 for f in k.faces if f}
    for facet in k.facets:
        vs = sorted(facet)
        for r in range(1, len(vs)):
            for sub in combinations(vs, r):
                counts[frozenset(sub)] += 1
    return counts


def free_faces(k: Complex) -> list[tuple[Face, Face]]:
    """All free faces with their unique maximal coface, sorted.

    The maximal coface is always a facet; the dimension gap may exceed one
    (a pendant triangle's interior vertex is free with the triangle as its
    coface).
    """
    counts = _facet_containment_counts(k)
    facet_of: dict[Face, Face] = {}
    from itertools import combinations

    for facet in k.facets:
        vs = sorted(facet)
        for r in range(1, len(vs)):
            for sub in combinations(vs, r):
                facet_of[frozenset(sub)] = facet
    out = [
        (f, facet_of[f]) for f, c in counts.items() if c == 1
    ]
    out.sort(key=lambda p: face_sort_key(p[0]))
    return out


def elementary_collapse(k: Complex, free: Iterable[int], coface: Iterable[int] | None = None) -> Complex:
    """Collapse away ``free`` and all faces containing it.

    ``free`` must be a free face of ``k``; when ``coface`` is supplied it
    must be that unique maximal coface.
    """
    f = frozenset(free)
    if f not in k.faces or not f:
        raise CollapseError(f"{face_key(f)} is not a nonempty face")
    maximal = [g for g in k.facets if f < g]
    if len(maximal) != 1:
        raise CollapseError(
            f"{face_key(f)} is not free: {len(maximal)} facets strictly contain it"
        )
    if coface is not None and frozenset(coface) != maximal[0]:
        raise CollapseError(
            f"coface of {face_key(f)} is {face_key(maximal[0])}, "
            f"not {face_key(frozenset(coface))}"
        )
    return k.delete(f)


class _ReplayState:
    """Incremental face store for verifying long collapse sequences."""

    def __init__(self, k: Complex):
        self.faces: set[Face] = set(k.faces)
        self.by_vertex: dict[int, set[Face]] = {}
        for f in k.faces:
            for v in f:
                self.by_vertex.setdefault(v, set()).add(f)

    def cofaces(self, face: Face) -> list[Face]:
        """Faces strictly containing ``face`` (face itself excluded)."""
        it = iter(face)
        first = next(it)
        cands = self.by_vertex.get(first, set())
        for v in it:
            cands = cands & self.by_vertex.get(v, set())
        return [g for g in cands if len(g) > len(face)]

    def remove_interval(self, face: Face) -> list[Face]:
        doomed = self.cofaces(face) + [face]
        for g in doomed:
            self.faces.discard(g)
            for v in g:
                self.by_vertex[v].discard(g)
        return doomed

    def complex(self) -> Complex:
        return Complex.from_faces(f for f in self.faces if f)


def verify_collapse_sequence(
    k: Complex,
    pairs: Sequence[CollapsePair],
    target: Complex | None = None,
) -> Complex:
    """Replay ``pairs`` on ``k``, checking each step, and return the result.

    Each step requires the free face to be present with a unique maximal
    coface equal to the recorded one.  When ``target`` is given the final
    face set must match it exactly.
    """
    state = _ReplayState(k)
    for i, pair in enumerate(pairs):
        f = pair.free
        if f not in state.faces:
            raise CollapseError(f"step {i}: {face_key(f)} already removed")
        cof = state.cofaces(f)
        maximal = [g for g in cof if not any(g < h for h in cof)]
        if len(maximal) != 1:
            raise CollapseError(
                f"step {i}: {face_key(f)} is not free "
                f"({len(maximal)} maximal cofaces)"
            )
        if maximal[0] != pair.coface:
            raise CollapseError(
                f"step {i}: recorded coface {face_key(pair.coface)} but the "
                f"unique maximal coface is {face_key(maximal[0])}"
            )
        state.remove_interval(f)
    result = state.complex()
    if target is not None and result != target:
        missing = sorted(
            (face_key(f) for f in target.faces - result.faces if f), key=lambda t: (len(t), t)
        )
        extra = sorted(
            (face_key(f) for f in result.faces - target.faces if f), key=lambda t: (len(t), t)
        )
        raise CollapseError(
            f"sequence ends at the wrong complex (missing {missing[:5]}, "
            f"extra {extra[:5]})"
        )
    return result


# -- greedy 2-dimensional decider -------------------------------------------


def _prune_tree(
    vertices: set[int],
    edges: set[Face],
    keep: int | None,
) -> list[CollapsePair]:
    """Collapse a tree down to one vertex by removing lex-least leaves.

    ``keep`` forces which vertex survives; by default the pruning order
    decides.  The caller guarantees the graph is a tree.
    """
    degree: dict[int, int] = {v: 0 for v in vertices}
    incident: dict[int, set[Face]] = {v: set() for v in vertices}
    for e in edges:
        for v in e:
            degree[v] += 1
            incident[v].add(e)
    heap = [v for v in vertices if degree[v] == 1 and v != keep]
    heapq.heapify(heap)
    live_edges = set(edges)
    live = set(vertices)
    pairs: list[CollapsePair] = []
    while heap:
        v = heapq.heappop(heap)
        if v not in live or degree[v] != 1 or v == keep:
            continue
        (edge,) = (e for e in incident[v] if e in live_edges)
        pairs.append(CollapsePair(frozenset([v]), edge))
        live.discard(v)
        live_edges.discard(edge)
        (other,) = edge - {v}
        degree[other] -= 1
        incident[other].discard(edge)
        if degree[other] == 1 and other != keep:
            heapq.heappush(heap, other)
    return pairs


def is_collapsible_2d_greedy(
    k: Complex, keep_vertex: int | None = None
) -> tuple[bool, tuple | None]:
    """Greedy collapsibility decider for complexes of dimension <= 2.

    Repeatedly collapses the lexicographically least free edge until no
    triangle-bearing free edge remains, then demands the residue be a tree
    and prunes pendant vertices.  Complete in dimension two: a greedy stall
    with triangles left or a non-tree residue means the complex is not
    collapsible.  Returns ``(verdict, witness)`` where the witness collapses
    the complex to a single vertex.
    """
    if k.dim > 2:
        raise ValueError("greedy decider requires dimension <= 2")
    if not k.faces:
        return (False, None)
    triangles = {f for f in k.faces if len(f) == 3}
    edges = {f for f in k.faces if len(f) == 2}
    vertices = set(k.vertices)
    tris_of_edge: dict[Face, set[Face]] = {e: set() for e in edges}
    for t in triangles:
        a, b, c = sorted(t)
        for e in (frozenset((a, b)), frozenset((a, c)), frozenset((b, c))):
            tris_of_edge[e].add(t)
    heap = [face_key(e) for e in edges if len(tris_of_edge[e]) == 1]
    heapq.heapify(heap)
    live_tris = set(triangles)
    live_edges = set(edges)
    pairs: list[CollapsePair] = []
    while heap:
        e = frozenset(heapq.heappop(heap))
        if e not in live_edges or len(tris_of_edge[e]) != 1:
            continue
        (t,) = tris_of_edge[e]
        pairs.append(CollapsePair(e, t))
        live_tris.discard(t)
        live_edges.discard(e)
        for other in _triangle_edges(t):
            tris_of_edge[other].discard(t)
            if other in live_edges and len(tris_of_edge[other]) == 1:
                heapq.heappush(heap, face_key(other))
    if live_tris:
        return (False, None)
    if len(live_edges) != len(vertices) - 1:
        return (False, None)
    if not _connected_graph(vertices, live_edges):
        return (False, None)
    pairs.extend(_prune_tree(vertices, live_edges, keep_vertex))
    return (True, tuple(pairs))


def _triangle_edges(t: Face) -> list[Face]:
    a, b, c = sorted(t)
    return [frozenset((a, b)), frozenset((a, c)), frozenset((b, c))]


def _connected_graph(vertices: set[int], edges: set[Face]) -> bool:
    if len(vertices) <= 1:
        return True
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for e in edges:
        a, b = e
        adj[a].append(b)
        adj[b].append(a)
    seen = set()
    stack = [next(iter(vertices))]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(u for u in adj[v] if u not in seen)
    return len(seen) == len(vertices)


# -- budgeted depth-first searches -------------------------------------------


class _SearchState:
    """Mutable face set with undo, for the DFS deciders."""

    def __init__(self, k: Complex):
        self.faces: set[Face] = {f for f in k.faces if f}
        self.by_vertex: dict[int, set[Face]] = {}
        for f in self.faces:
            for v in f:
                self.by_vertex.setdefault(v, set()).add(f)

    def facets(self) -> list[Face]:
        out = []
        for f in self.faces:
            if not any(len(g) == len(f) + 1 for g in self._cofaces(f)):
                out.append(f)
        return out

    def _cofaces(self, face: Face) -> list[Face]:
        it = iter(face)
        cands = set(self.by_vertex.get(next(it), set()))
        for v in it:
            cands &= self.by_vertex.get(v, set())
        return [g for g in cands if len(g) > len(face)]

    def free_gap_one_pairs(self) -> list[tuple[Face, Face]]:
        """Pairs (free face, facet one dimension up) legal to collapse now."""
        from itertools import combinations

        candidates: set[Face] = set()
        for facet in self.facets():
            vs = sorted(facet)
            if len(vs) < 2:
                continue
            candidates.update(frozenset(sub) for sub in combinations(vs, len(vs) - 1))
        out = []
        for ridge in candidates:
            strict = self._cofaces(ridge)
            maximal = [g for g in strict if not any(g < h for h in strict)]
            if len(maximal) == 1 and len(maximal[0]) == len(ridge) + 1:
                out.append((ridge, maximal[0]))
        return out

    def remove_pair(self, ridge: Face, facet: Face) -> None:
        for g in (ridge, facet):
            self.faces.discard(g)
            for v in g:
                self.by_vertex[v].discard(g)

    def restore_pair(self, ridge: Face, facet: Face) -> None:
        for g in (ridge, facet):
            self.faces.add(g)
            for v in g:
                self.by_vertex.setdefault(v, set()).add(g)

    def snapshot(self) -> frozenset:
        return frozenset(self.faces)

    def complex(self) -> Complex:
        return Complex.from_faces(self.faces)


def _order_moves(
    moves: list[tuple[Face, Face]], last_removed: Face | None
) -> list[tuple[Face, Face]]:
    """Deterministic move order: deeper collapses first, near the last
    removal first, then lexicographic."""

    def key(mv):
        ridge, facet = mv
        local = 0 if (last_removed is not None and ridge & last_removed) else 1
        return (-len(facet), local, face_key(ridge), face_key(facet))

    return sorted(moves, key=key)


def is_collapsible_dfs(k: Complex, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Exhaustive collapsibility decider with memoization and a node budget.

    Branches over one-dimension collapse pairs; states are memoized by
    canonical form.  The verdict "no" is only returned after the search
    space is exhausted within budget.

    Elementary collapses preserve the reduced Euler characteristic and
    connectivity, so complexes failing either invariant of the point are
    refused without search.
    """
    if not k.faces:
        return SearchResult("no", None, 0)
    if k.reduced_euler_characteristic() != 0 or not one_skeleton_connected(k):
        return SearchResult("no", None, 0)
    state = _SearchState(k)
    memo: set = set()
    nodes = 0
    budget_hit = False

    def vertex_count():
        return sum(1 for f in state.faces if len(f) == 1)

    def dfs(last: Face | None) -> tuple | None:
        nonlocal nodes, budget_hit
        if budget_hit:
            return None
        nodes += 1
        if nodes > budget:
            budget_hit = True
            return None
        if len(state.faces) == 1 and vertex_count() == 1:
            return ()
        key = canonical_form(state.complex())
        if key in memo:
            return None
        for ridge, facet in _order_moves(state.free_gap_one_pairs(), last):
            state.remove_pair(ridge, facet)
            suffix = dfs(ridge | facet)
            state.restore_pair(ridge, facet)
            if suffix is not None:
                return (CollapsePair(ridge, facet),) + suffix
            if budget_hit:
                return None
        memo.add(key)
        return None

    witness = dfs(None)
    if witness is not None:
        return SearchResult("yes", witness, nodes)
    return SearchResult("budget_exceeded" if budget_hit else "no", None, nodes)


def collapses_to(
    k: Complex, target: Complex, budget: int = DEFAULT_BUDGET
) -> SearchResult:
    """Search for a collapse of ``k`` onto the subcomplex ``target``.

    Moves never remove a target face.  The leftmost branch follows the
    lexicographic greedy order (with a locality preference), so when greedy
    succeeds no backtracking happens.  States are memoized by exact face
    set, deduplicating orders of commuting moves.
    """
    target_faces = {f for f in target.faces if f}
    if not target_faces <= {f for f in k.faces if f}:
        raise CollapseError("target is not a subcomplex")
    state = _SearchState(k)
    memo: set = set()
    nodes = 0
    budget_hit = False

    def dfs(last: Face | None) -> tuple | None:
        nonlocal nodes, budget_hit
        if budget_hit:
            return None
        nodes += 1
        if nodes > budget:
            budget_hit = True
            return None
        if state.faces == target_faces:
            return ()
        snap = state.snapshot()
        if snap in memo:
            return None
        moves = [
            (r, f) for r, f in state.free_gap_one_pairs() if r not in target_faces
        ]
        for ridge, facet in _order_moves(moves, last):
            state.remove_pair(ridge, facet)
            suffix = dfs(ridge | facet)
            state.restore_pair(ridge, facet)
            if suffix is not None:
                return (CollapsePair(ridge, facet),) + suffix
            if budget_hit:
                return None
        memo.add(snap)
        return None

    witness = dfs(None)
    if witness is not None:
        return SearchResult("yes", witness, nodes)
    return SearchResult("budget_exceeded" if budget_hit else "no", None, nodes)


# -- disks onto trees ---------------------------------------------------------


def _boundary_edges_2d(k: Complex) -> set[Face]:
    count: dict[Face, int] = {}
    for f in k.faces:
        if len(f) == 3:
            a, b, c = sorted(f)
            for e in (frozenset((a, b)), frozenset((a, c)), frozenset((b, c))):
                count[e] = count.get(e, 0) + 1
    return {e for e in k.faces if len(e) == 2 and count.get(e, 0) == 1}


def check_disk(k: Complex) -> None:
    """Raise unless ``k`` triangulates a disk.

    Checks: pure 2-dimensional, pseudomanifold with boundary, reduced Euler
    characteristic zero, connected, and a single boundary cycle (every
    boundary vertex on exactly two boundary edges).
    """
    if k.dim != 2 or not k.is_pure(2):
        raise CollapseError("not pure 2-dimensional")
    if is_pseudomanifold(k) != "with_boundary":
        raise CollapseError("not a pseudomanifold with boundary")
    if k.reduced_euler_characteristic() != 0:
        raise CollapseError("reduced Euler characteristic is not 0")
    if not one_skeleton_connected(k):
        raise CollapseError("not connected")
    boundary = _boundary_edges_2d(k)
    deg: dict[int, int] = {}
    for e in boundary:
        for v in e:
            deg[v] = deg.get(v, 0) + 1
    if any(c != 2 for c in deg.values()):
        raise CollapseError("boundary is not a single cycle")
    if not _connected_graph(set(deg), boundary):
        raise CollapseError("boundary has several components")


def _check_tree(vertices: set[int], edges: set[Face]) -> None:
    if not vertices:
        raise CollapseError("tree target has no vertices")
    if len(edges) != len(vertices) - 1 or not _connected_graph(vertices, edges):
        raise CollapseError("target is not a tree")


def collapse_disk_to_tree(disk: Complex, tree: Complex) -> tuple:
    """Collapse a triangulated disk onto a tree in its 1-skeleton.

    Greedily removes the least free edge outside the tree; such an edge
    always exists while triangles remain (a stall would make the remaining
    triangles a nonzero 2-cycle mod 2, impossible in a disk), then prunes
    pendant vertices outside the tree.  Returns the collapse pairs.
    """
    check_disk(disk)
    tree_faces = {f for f in tree.faces if f}
    if not tree_faces <= {f for f in disk.faces if f}:
        raise CollapseError("tree is not a subcomplex of the disk")
    tree_vertices = {v for f in tree_faces if len(f) == 1 for v in f}
    tree_edges = {f for f in tree_faces if len(f) == 2}
    if any(len(f) > 2 for f in tree_faces):
        raise CollapseError("target contains a face of dimension 2 or more")
    _check_tree(tree_vertices, tree_edges)

    triangles = {f for f in disk.faces if len(f) == 3}
    edges = {f for f in disk.faces if len(f) == 2}
    tris_of_edge: dict[Face, set[Face]] = {e: set() for e in edges}
    for t in triangles:
        for e in _triangle_edges(t):
            tris_of_edge[e].add(t)
    heap = [
        face_key(e)
        for e in edges
        if e not in tree_edges and len(tris_of_edge[e]) == 1
    ]
    heapq.heapify(heap)
    live_tris = set(triangles)
    live_edges = set(edges)
    pairs: list[CollapsePair] = []
    while live_tris:
        while heap:
            e = frozenset(heap[0])
            if e in live_edges and e not in tree_edges and len(tris_of_edge[e]) == 1:
                break
            heapq.heappop(heap)
        if not heap:
            raise CollapseError(
                "greedy collapse stalled with triangles left; input is not a disk"
            )
        e = frozenset(heapq.heappop(heap))
        (t,) = tris_of_edge[e]
        pairs.append(CollapsePair(e, t))
        live_tris.discard(t)
        live_edges.discard(e)
        for other in _triangle_edges(t):
            tris_of_edge[other].discard(t)
            if (
                other in live_edges
                and other not in tree_edges
                and len(tris_of_edge[other]) == 1
            ):
                heapq.heappush(heap, face_key(other))
    vertices = set(disk.vertices)
    # The residue is a tree containing the target (an extra edge between two
    # target vertices would close a cycle); prune leaves outside the target.
    doomed_pairs = _prune_tree_to_subtree(vertices, live_edges, tree_vertices)
    pairs.extend(doomed_pairs)
    return tuple(pairs)


def _prune_tree_to_subtree(
    vertices: set[int], edges: set[Face], keep_vertices: set[int]
) -> list[CollapsePair]:
    degree: dict[int, int] = {v: 0 for v in vertices}
    incident: dict[int, set[Face]] = {v: set() for v in vertices}
    for e in edges:
        for v in e:
            degree[v] += 1
            incident[v].add(e)
    heap = [v for v in vertices if degree[v] == 1 and v not in keep_vertices]
    heapq.heapify(heap)
    live_edges = set(edges)
    live = set(vertices)
    pairs: list[CollapsePair] = []
    while heap:
        v = heapq.heappop(heap)
        if v not in live or degree[v] != 1 or v in keep_vertices:
            continue
        (edge,) = (e for e in incident[v] if e in live_edges)
        pairs.append(CollapsePair(frozenset([v]), edge))
        live.discard(v)
        live_edges.discard(edge)
        (other,) = edge - {v}
        degree[other] -= 1
        incident[other].discard(edge)
        if degree[other] == 1 and other not in keep_vertices:
            heapq.heappush(heap, other)
    return pairs


# -- constrain complex and gluing --------------------------------------------


def constrain_complex(k: Complex, m: Complex) -> Complex:
    """Faces of ``m`` having a strict coface outside ``m``.

    This is the part of ``m`` the rest of ``k`` leans on: a local collapse
    of ``m`` may only be glued into ``k`` if it keeps all of it.
    """
    m_faces = {f for f in m.faces if f}
    if not m_faces <= {f for f in k.faces if f}:
        raise ValueError("m is not a subcomplex of k")
    from itertools import combinations

    out: set[Face] = set()
    for eta in k.faces:
        if not eta or eta in m_faces:
            continue
        vs = sorted(eta)
        for r in range(1, len(vs)):
            for sub in combinations(vs, r):
                s = frozenset(sub)
                if s in m_faces:
                    out.add(s)
    return Complex.from_faces(out)


def glue_local_collapse(
    k: Complex,
    m: Complex,
    m_prime: Complex,
    pairs: Sequence[CollapsePair],
) -> CollapseSequence:
    """Globalize a local collapse ``m`` -> ``m_prime`` inside ``k``.

    Requires ``m_prime`` to be a subcomplex of ``m``, the constrain complex
    of ``m`` in ``k`` to lie inside ``m_prime``, the pairs to replay as a
    collapse of ``m`` onto ``m_prime``, and the same pairs to replay inside
    ``k`` with result ``(k - m) + m_prime``.  Returns the sequence, now
    valid as a global collapse of ``k``.
    """
    m_faces = {f for f in m.faces if f}
    mp_faces = {f for f in m_prime.faces if f}
    if not mp_faces <= m_faces:
        raise CollapseError("m_prime is not a subcomplex of m")
    gamma = constrain_complex(k, m)
    offenders = sorted(
        (face_key(f) for f in gamma.faces if f and f not in mp_faces),
        key=lambda t: (len(t), t),
    )
    if offenders:
        raise CollapseError(
            f"constrain complex is not contained in the kept subcomplex; "
            f"offending faces: {offenders[:8]}"
        )
    verify_collapse_sequence(m, pairs, m_prime)
    expected = Complex.from_faces(
        ({f for f in k.faces if f} - m_faces) | mp_faces
    )
    verify_collapse_sequence(k, pairs, expected)
    return tuple(pairs)


# -- witness serialization ----------------------------------------------------


def collapse_witness_to_json(pairs: Sequence[CollapsePair], target: Complex) -> str:
    doc = {
        "kind": "collapse",
        "pairs": [p.as_lists() for p in pairs],
        "target_facets": [list(face_key(f)) for f in sorted(target.facets, key=face_sort_key)],
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def collapse_witness_from_json(doc: Mapping) -> tuple[tuple, Complex]:
    if doc.get("kind") != "collapse":
        raise FormatError("witness kind is not 'collapse'")
    raw_pairs = doc.get("pairs")
    if not isinstance(raw_pairs, list):
        raise FormatError("collapse witness needs a 'pairs' list")
    pairs = []
    for entry in raw_pairs:
        if not (isinstance(entry, list) and len(entry) == 2):
            raise FormatError(f"bad collapse pair: {entry!r}")
        try:
            pairs.append(CollapsePair(frozenset(entry[0]), frozenset(entry[1])))
        except CollapseError as exc:
            raise FormatError(str(exc)) from None
    target_facets = doc.get("target_facets")
    if not isinstance(target_facets, list):
        raise FormatError("collapse witness needs 'target_facets'")
    target = Complex.from_facets(target_facets) if target_facets else Complex.empty()
    return tuple(pairs), target
