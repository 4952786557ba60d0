"""Shelling orders and k-decomposability.

An order of the facets of a pure d-complex is a shelling when each facet
after the first meets the union of its predecessors in a nonempty pure
(d-1)-dimensional complex.  For d = 0 that intersection is the empty face
alone, so any set of isolated vertices is shellable.  A single facet is
always shellable.
"""

from __future__ import annotations

import itertools
import json
import math
from typing import Iterable, Mapping, Sequence

from shellkit.complex_core import (
    Complex,
    Face,
    FormatError,
    UnionFind,
    canonical_form,
    face_key,
    vertex_links_connected,
)
from shellkit.collapse import DEFAULT_BUDGET, SearchResult, is_collapsible_2d_greedy


class ShellingError(ValueError):
    """A shelling or decomposition verification failed."""


def _check_pure_input(k: Complex) -> int:
    if not k.faces:
        raise ShellingError("shellability needs a nonempty complex")
    d = k.dim
    if not k.is_pure(d):
        raise ShellingError("shellability is defined for pure complexes only")
    return d


def _prefix_intersection_ok(candidate: Face, chosen: Sequence[Face], d: int) -> bool:
    """Does ``candidate`` meet the union of ``chosen`` in a nonempty pure
    (d-1)-complex?  (For d = 0: in exactly the empty face.)"""
    inters = [candidate & prev for prev in chosen]
    if d == 0:
        return all(not x for x in inters)
    tops = [x for x in inters if len(x) == d]
    if not tops:
        return False
    return all(any(x <= t for t in tops) for x in inters)


def verify_shelling(k: Complex, order: Sequence[Iterable[int]]) -> None:
    """Raise ShellingError unless ``order`` is a shelling of ``k``."""
    d = _check_pure_input(k)
    facets = [frozenset(f) for f in order]
    if len(set(facets)) != len(facets):
        raise ShellingError("order repeats a facet")
    if set(facets) != set(k.facets):
        raise ShellingError("order does not enumerate the facets exactly")
    for i in range(1, len(facets)):
        if not _prefix_intersection_ok(facets[i], facets[:i], d):
            raise ShellingError(
                f"facet #{i + 1} {face_key(facets[i])} meets its predecessors "
                f"in a set that is not pure {d - 1}-dimensional and nonempty"
            )


def _facet_graph_connected(facets: Sequence[Face], d: int) -> bool:
    """Facets adjacent when sharing a (d-1)-face.  Sound precheck: every
    shelling glues each new facet along such a face, so a shellable complex
    has a connected facet graph."""
    if len(facets) <= 1:
        return True
    uf = UnionFind()
    for i in range(len(facets)):
        uf.find(i)
    for i in range(len(facets)):
        for j in range(i + 1, len(facets)):
            if len(facets[i] & facets[j]) == d:
                uf.union(i, j)
    root = uf.find(0)
    return all(uf.find(i) == root for i in range(len(facets)))


def decide_shellable(k: Complex, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Backtracking shellability decider with a node budget.

    Failed prefixes are memoized as facet index sets: whether a partial
    order extends depends only on which facets it uses, not their order.
    The verdict "no" is an exhaustive refutation.
    """
    d = _check_pure_input(k)
    facets = sorted(k.facets, key=face_key)
    m = len(facets)
    if m == 1 or d == 0:
        return SearchResult("yes", tuple(facets), 0)
    if not _facet_graph_connected(facets, d):
        return SearchResult("no", None, 0)

    dead: set[frozenset] = set()
    nodes = 0
    budget_hit = False
    chosen: list[Face] = []
    chosen_idx: list[int] = []

    def candidate_order(remaining: list[int]) -> list[int]:
        def key(i: int):
            shared = sum(1 for f in chosen if len(facets[i] & f) == d)
            return (-shared, face_key(facets[i]))

        return sorted(remaining, key=key)

    def extend(used: frozenset) -> bool:
        nonlocal nodes, budget_hit
        if len(chosen) == m:
            return True
        if used in dead:
            return False
        nodes += 1
        if nodes > budget:
            budget_hit = True
            return False
        remaining = [i for i in range(m) if i not in used]
        for i in candidate_order(remaining):
            if chosen and not _prefix_intersection_ok(facets[i], chosen, d):
                continue
            chosen.append(facets[i])
            chosen_idx.append(i)
            if extend(used | {i}):
                return True
            chosen.pop()
            chosen_idx.pop()
            if budget_hit:
                return False
        dead.add(used)
        return False

    if extend(frozenset()):
        return SearchResult("yes", tuple(chosen), nodes)
    return SearchResult("budget_exceeded" if budget_hit else "no", None, nodes)


# -- k-decomposability --------------------------------------------------------


def _is_full_simplex(k: Complex) -> bool:
    return len(k.facets) == 1


def decide_k_decomposable(k: Complex, kk: int, budget: int = DEFAULT_BUDGET) -> SearchResult:
    """Provan–Billera style k-decomposability decider.

    A pure complex is k-decomposable when it is a full simplex, or some
    nonempty shedding face of dimension <= k has a pure k-decomposable
    link and a pure (same-dimensional) k-decomposable deletion.  Witness
    is a nested shedding tree.  0-decomposable is vertex-decomposable and
    d-decomposable coincides with shellable.
    """
    if kk < 0:
        raise ShellingError("k must be >= 0")
    _check_pure_input(k)
    memo: dict[tuple, tuple[str, dict | None]] = {}
    nodes = 0
    budget_hit = False

    def rec(c: Complex) -> dict | None:
        nonlocal nodes, budget_hit
        if budget_hit:
            return None
        nodes += 1
        if nodes > budget:
            budget_hit = True
            return None
        if len(c.faces) <= 1:
            # Void or empty-face complex: nothing left to shed.
            return {"leaf": []}
        if _is_full_simplex(c):
            (facet,) = c.facets
            return {"leaf": list(face_key(facet))}
        key = (canonical_form(c), kk)
        if key in memo:
            verdict, tree = memo[key]
            return tree if verdict == "yes" else None
        d = c.dim
        if not c.is_pure(d):
            memo[key] = ("no", None)
            return None
        sheddable = sorted(
            (f for f in c.faces if f and len(f) <= kk + 1), key=face_key
        )
        for sigma in sheddable:
            lk = c.link(sigma)
            if lk.dim != d - len(sigma) or not lk.is_pure(lk.dim):
                continue
            dl = c.delete(sigma)
            if not dl.faces or dl.dim != d or not dl.is_pure(d):
                continue
            lk_tree = rec(lk)
            if lk_tree is None:
                if budget_hit:
                    return None
                continue
            dl_tree = rec(dl)
            if dl_tree is None:
                if budget_hit:
                    return None
                continue
            tree = {"shedding": list(face_key(sigma)), "link": lk_tree, "delete": dl_tree}
            memo[key] = ("yes", tree)
            return tree
        memo[key] = ("no", None)
        return None

    tree = rec(k)
    if tree is not None:
        return SearchResult("yes", (tree,), nodes)
    return SearchResult("budget_exceeded" if budget_hit else "no", None, nodes)


def verify_decomposition(k: Complex, kk: int, tree: Mapping) -> None:
    """Check a shedding tree: links and deletions are recomputed, never
    trusted from the witness."""
    if "leaf" in tree:
        facet = tree["leaf"]
        if not isinstance(facet, (list, tuple)) or not all(
            isinstance(v, int) for v in facet
        ):
            raise ShellingError("leaf must be a list of vertex ids")
        if not facet:
            if len(k.faces) > 1:
                raise ShellingError("leaf [] claims an empty complex")
            return
        expected = Complex.from_facets([facet])
        if k != expected:
            raise ShellingError(
                f"leaf {facet} does not match the complex at this node"
            )
        return
    if "shedding" not in tree:
        raise ShellingError("tree node needs 'leaf' or 'shedding'")
    if not isinstance(tree["shedding"], (list, tuple)) or not all(
        isinstance(v, int) for v in tree["shedding"]
    ):
        raise ShellingError("shedding face must be a list of vertex ids")
    sigma = frozenset(tree["shedding"])
    if not sigma or sigma not in k.faces:
        raise ShellingError(f"shedding face {sorted(tree['shedding'])} not in complex")
    if len(sigma) > kk + 1:
        raise ShellingError(
            f"shedding face of dimension {len(sigma) - 1} exceeds k={kk}"
        )
    d = k.dim
    if not k.is_pure(d):
        raise ShellingError("node complex is not pure")
    lk = k.link(sigma)
    if lk.dim != d - len(sigma) or not lk.is_pure(lk.dim):
        raise ShellingError(f"link of {sorted(sigma)} is not pure of the right dim")
    dl = k.delete(sigma)
    if not dl.faces or dl.dim != d or not dl.is_pure(d):
        raise ShellingError(f"deletion of {sorted(sigma)} is not pure {d}-dimensional")
    for child_key, sub in (("link", lk), ("delete", dl)):
        if child_key not in tree:
            raise ShellingError(f"tree node missing {child_key!r}")
        verify_decomposition(sub, kk, tree[child_key])


# -- shellability of the double barycentric subdivision -----------------------


def hachimori_decide_sd2(
    k: Complex,
    budget: int = DEFAULT_BUDGET,
    pool: Sequence[Iterable[int]] | None = None,
) -> tuple[str, Mapping | None]:
    """Decide shellability of sd²(k) without constructing it.

    The double barycentric subdivision of a 2-complex is shellable
    exactly when every vertex link of the complex itself is connected
    and removing some set of χ̃ triangles leaves it collapsible.  The
    removal subsets are searched in lexicographic order, restricted to
    ``pool`` when one is supplied; the search is skipped as
    budget_exceeded when the subset count alone overruns ``budget``.

    Returns ``(verdict, certificate)`` with verdict one of
    ``"shellable"``, ``"not_shellable"``, ``"budget_exceeded"``; the
    certificate carries the removed triangles and a collapse witness
    for the remainder.
    """
    if k.dim != 2:
        raise ShellingError("the sd2 criterion applies to 2-dimensional complexes")
    ok, _ = vertex_links_connected(k)
    if not ok:
        return "not_shellable", None
    chi = k.reduced_euler_characteristic()
    if chi < 0:
        return "not_shellable", None
    triangles = {f for f in k.faces if len(f) == 3}
    if pool is None:
        candidates = sorted(triangles, key=face_key)
    else:
        wanted = {frozenset(f) for f in pool}
        if not wanted <= triangles:
            raise ShellingError("removal pool contains non-triangles of the complex")
        candidates = sorted(wanted, key=face_key)
    if math.comb(len(candidates), chi) > budget:
        return "budget_exceeded", None
    for removal in itertools.combinations(candidates, chi):
        trimmed = k
        for tau in removal:
            trimmed = trimmed.remove_facet(tau)
        good, pairs = is_collapsible_2d_greedy(trimmed)
        if good:
            return "shellable", {"removal": removal, "pairs": pairs}
    return "not_shellable", None


# -- witness serialization ----------------------------------------------------


def shelling_witness_to_json(order: Sequence[Face]) -> str:
    doc = {"kind": "shelling", "order": [list(face_key(f)) for f in order]}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def shelling_witness_from_json(doc: Mapping) -> tuple[Face, ...]:
    if doc.get("kind") != "shelling":
        raise FormatError("witness kind is not 'shelling'")
    order = doc.get("order")
    if not isinstance(order, list) or not order:
        raise FormatError("shelling witness needs a nonempty 'order' list")
    return tuple(frozenset(f) for f in order)


def decomposition_witness_to_json(kk: int, tree: Mapping) -> str:
    doc = {"kind": "decomposition", "k": kk, "tree": tree}
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def decomposition_witness_from_json(doc: Mapping) -> tuple[int, Mapping]:
    if doc.get("kind") != "decomposition":
        raise FormatError("witness kind is not 'decomposition'")
    if not isinstance(doc.get("k"), int) or not isinstance(doc.get("tree"), dict):
        raise FormatError("decomposition witness needs integer 'k' and object 'tree'")
    return doc["k"], doc["tree"]
