"""Compile 3-CNF formulas into marked 2-complexes and collapse them.

``build_K_phi`` assembles one conjunction house, a sphere/annulus/house
bundle per variable, and a three-house per clause into a single labeled
complex whose reduced Euler characteristic equals the variable count.
``schedule_collapse`` turns a satisfying assignment into a removal set
plus a replayable collapse of the punctured complex down to one vertex,
``assignment_from_removal`` reads an assignment back off a removal set,
and ``decide_phi_via_complex`` closes the loop at desk scale by
enumerating admissible removals and testing each with the greedy
collapser.  ``sat_oracle`` provides brute-force ground truth.
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

from shellkit.collapse import (
    CollapsePair,
    CollapseSequence,
    collapse_disk_to_tree,
    collapses_to,
    glue_local_collapse,
    is_collapsible_2d_greedy,
    verify_collapse_sequence,
)
from shellkit.complex_core import (
    Complex,
    Face,
    Feature,
    LabeledComplex,
    face_key,
    subdivide_labeled,
    vertex_links_connected,
)
from shellkit.gadgets import (
    HouseAttachment,
    OneHouseSpec,
    _amalgamate_with_maps,
    build_literal_house,
    build_O,
    build_one_house,
    build_three_house,
    build_variable_sphere,
    collapse_house,
    house_frame,
    map_feature,
)

Assignment = Mapping[int, bool]

# Ceiling on simplices per unit of formula size, checked at compile time.
_SIZE_CONSTANT = 400
# Ceiling on enumerated removal candidates in decide_phi_via_complex.
_SWEEP_CAP = 200_000


class CnfError(ValueError):
    """Raised on malformed DIMACS input."""


class ReductionError(ValueError):
    """Raised on bad reduction inputs, blown scale guards, or broken
    internal collapse preconditions."""


@dataclass(frozen=True)
class Formula:
    """A 3-CNF formula over variables ``1..n``.

    Clauses are ordered triples of nonzero literals (sign = polarity);
    literals may repeat within a clause.
    """

    n: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        if self.n < 0:
            raise ReductionError("variable count must be nonnegative")
        for clause in self.clauses:
            if len(clause) != 3:
                raise ReductionError(f"clause {clause!r} does not have 3 literals")
            for lit in clause:
                if not isinstance(lit, int) or lit == 0 or abs(lit) > self.n:
                    raise ReductionError(
                        f"literal {lit!r} out of range for {self.n} variables"
                    )

    @property
    def size(self) -> int:
        """Total number of literal occurrences."""
        return sum(len(c) for c in self.clauses)


def parse_cnf(text: str) -> Formula:
    """Parse DIMACS CNF, accepting only 3-literal clauses."""
    n = m = None
    lits: list[int] = []
    clauses: list[tuple[int, int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            if n is not None:
                raise CnfError(f"line {lineno}: duplicate problem header")
            fields = line.split()
            if len(fields) != 4 or fields[:2] != ["p", "cnf"]:
                raise CnfError(f"line {lineno}: malformed header {line!r}")
            try:
                n, m = int(fields[2]), int(fields[3])
            except ValueError:
                raise CnfError(f"line {lineno}: malformed header {line!r}") from None
            if n < 0 or m < 0:
                raise CnfError(f"line {lineno}: negative counts in header")
            continue
        if n is None:
            raise CnfError(f"line {lineno}: clause before the problem header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise CnfError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                if len(lits) != 3:
                    raise CnfError(
                        f"clause {len(clauses) + 1} has {len(lits)} literals; "
                        "exactly 3 required"
                    )
                clauses.append((lits[0], lits[1], lits[2]))
                lits.clear()
            else:
                if abs(lit) > n:
                    raise CnfError(
                        f"line {lineno}: variable {abs(lit)} out of range 1..{n}"
                    )
                lits.append(lit)
    if n is None:
        raise CnfError("missing 'p cnf' header")
    if lits:
        raise CnfError("unterminated clause at end of input")
    if len(clauses) != m:
        raise CnfError(f"header declares {m} clauses, found {len(clauses)}")
    return Formula(n, tuple(clauses))


def _satisfies(phi: Formula, a: Assignment) -> bool:
    return all(
        any(a[abs(lit)] == (lit > 0) for lit in clause) for clause in phi.clauses
    )


def sat_oracle(phi: Formula) -> dict[int, bool] | None:
    """Brute-force satisfiability; returns a model or None.

    Exhausts all assignments, so it is guarded to at most 24 variables.
    """
    if phi.n > 24:
        raise ReductionError(f"sat_oracle is exhaustive; n={phi.n} exceeds 24")
    for bits in itertools.product((False, True), repeat=phi.n):
        a = {i: bits[i - 1] for i in range(1, phi.n + 1)}
        if _satisfies(phi, a):
            return a
    return None


def random_formula(n: int, m: int, rng: random.Random) -> Formula:
    """A uniformly random 3-CNF with n variables and m clauses."""
    clauses = tuple(
        tuple(rng.randint(1, n) * rng.choice((1, -1)) for _ in range(3))
        for _ in range(m)
    )
    return Formula(n, clauses)


# -- compilation -----------------------------------------------------------------


def _lit_name(lit: int) -> str:
    return f"u{lit}" if lit > 0 else f"~u{-lit}"


def _occurrences(phi: Formula) -> dict[int, tuple[tuple[int, int], ...]]:
    """Literal -> ordered (clause index, position) slots, both 1-based."""
    occ: dict[int, list[tuple[int, int]]] = {}
    for j, clause in enumerate(phi.clauses, start=1):
        for t, lit in enumerate(clause, start=1):
            occ.setdefault(lit, []).append((j, t))
    return {lit: tuple(slots) for lit, slots in occ.items()}


@dataclass(frozen=True)
class _Compiled:
    phi: Formula
    labeled: LabeledComplex
    parts: Mapping[str, LabeledComplex]
    vmaps: Mapping[str, Mapping[int, int]]
    occ: Mapping[int, tuple[tuple[int, int], ...]]


@functools.lru_cache(maxsize=8)
def _compile(phi: Formula) -> _Compiled:
    occ = _occurrences(phi)
    occ_slot = {
        jt: k
        for slots in occ.values()
        for k, jt in enumerate(slots, start=1)
    }
    attachments = tuple(
        HouseAttachment(f"f(u{i})") for i in range(1, phi.n + 1)
    )
    parts: list[tuple[str, LabeledComplex]] = [
        ("A", build_one_house(OneHouseSpec(attachments=attachments)))
    ]
    idents: list[tuple[str, str, str, str]] = []
    for i in range(1, phi.n + 1):
        u, nu = f"u{i}", f"~u{i}"
        parts.extend(
            [
                (f"S({u})", build_variable_sphere(u)),
                (f"O({u})", build_O(u)),
                (
                    f"B({u})",
                    build_one_house(
                        OneHouseSpec(attachments=(HouseAttachment("b"),))
                    ),
                ),
                (f"X[{u}]", build_literal_house(len(occ.get(i, ())))),
                (f"X[{nu}]", build_literal_house(len(occ.get(-i, ())))),
            ]
        )
        idents.extend(
            [
                (f"B({u})", "f", "A", f"f({u})"),
                (f"B({u})", "b", f"O({u})", f"b({u})"),
                (f"O({u})", f"p({u})", f"X[{u}]", "p"),
                (f"O({u})", f"p({u})", f"X[{nu}]", "p"),
                (f"S({u})", f"s({u})", f"O({u})", f"s({u})"),
                (f"S({u})", f"f[{u}]", f"X[{u}]", "f"),
                (f"S({u})", f"f[{nu}]", f"X[{nu}]", "f"),
            ]
        )
    for j, clause in enumerate(phi.clauses, start=1):
        cname = f"C(c{j})"
        parts.append((cname, build_three_house()))
        idents.append((cname, "e", "A", "f"))
        for t, lit in enumerate(clause, start=1):
            xname = f"X[{_lit_name(lit)}]"
            k = occ_slot[(j, t)]
            idents.append((cname, f"p{t}", xname, f"occ{k}.p"))
            idents.append((cname, f"f{t}", xname, f"occ{k}.f"))

    merged, vmaps = _amalgamate_with_maps(parts, idents)
    table = dict(parts)

    def feat(part: str, label: str) -> Feature:
        return map_feature(table[part].feature(label), vmaps[part])

    def whole(part: str) -> Feature:
        vmap = vmaps[part]
        return Feature.subcomplex(
            tuple(vmap[v] for v in f) for f in table[part].complex.facets
        )

    labels: dict[str, Feature] = {
        "A": whole("A"),
        "v_and": feat("A", "anchor"),
        "f_and": feat("A", "f"),
    }
    for i in range(1, phi.n + 1):
        u, nu = f"u{i}", f"~u{i}"
        labels[f"f({u})"] = feat("A", f"f({u})")
        for name in (
            f"v({u})",
            f"s({u})",
            f"f[{u}]",
            f"f[{nu}]",
            f"D[{u}]",
            f"D[{nu}]",
        ):
            labels[name] = feat(f"S({u})", name)
        labels[f"b({u})"] = feat(f"O({u})", f"b({u})")
        labels[f"p({u})"] = feat(f"O({u})", f"p({u})")
        for part in (f"S({u})", f"O({u})", f"B({u})", f"X[{u}]", f"X[{nu}]"):
            labels[part] = whole(part)
    for j, clause in enumerate(phi.clauses, start=1):
        labels[f"C(c{j})"] = whole(f"C(c{j})")
        for t, lit in enumerate(clause, start=1):
            name, k = _lit_name(lit), occ_slot[(j, t)]
            labels[f"p[{name},c{j}#{t}]"] = feat(f"X[{name}]", f"occ{k}.p")
            labels[f"f[{name},c{j}#{t}]"] = feat(f"X[{name}]", f"occ{k}.f")

    lc = LabeledComplex(merged.complex, labels)
    _check_compiled(phi, lc)
    return _Compiled(phi, lc, table, vmaps, occ)


def _check_compiled(phi: Formula, lc: LabeledComplex) -> None:
    k = lc.complex
    if not k.is_pure(2):
        raise ReductionError("compiled complex is not pure 2-dimensional")
    chi = k.reduced_euler_characteristic()
    if chi != phi.n:
        raise ReductionError(
            f"compiled complex has reduced Euler characteristic {chi}, "
            f"expected {phi.n}"
        )
    ok, failing = vertex_links_connected(k)
    if not ok:
        raise ReductionError(f"compiled complex has a disconnected link at {failing}")
    count = sum(k.f_vector()[1:])
    bound = _SIZE_CONSTANT * max(1, phi.n + phi.size)
    if count > bound:
        raise ReductionError(f"compiled complex has {count} simplices > {bound}")


def build_K_phi(phi: Formula) -> LabeledComplex:
    """Compile a formula into its marked 2-complex.

    The output is pure 2-dimensional with all vertex links connected, its
    reduced Euler characteristic equals the variable count, and its label
    table names every gadget feature: the conjunction house ``A`` with
    ``v_and``/``f_and`` and one ``f(u_i)`` per variable, each variable's
    sphere ``S(u_i)`` with disks ``D[u_i]``/``D[~u_i]``, the connector
    gadgets ``O``/``B``/``X``, and per-occurrence rays ``p[lit,cj#t]`` /
    ``f[lit,cj#t]`` indexed by clause and position, so repeated literals
    in a clause stay distinguishable.  All of these postconditions are
    machine-checked before returning.
    """
    return _compile(phi).labeled


# -- the collapse schedule --------------------------------------------------------


def _features_complex(lc: LabeledComplex, names: Iterable[str]) -> Complex:
    faces: set[Face] = set()
    for name in names:
        faces |= lc.feature(name).face_set()
    return Complex.from_faces(faces)


def _part_complex(comp: _Compiled, part: str) -> Complex:
    vmap = comp.vmaps[part]
    return Complex.from_facets(
        frozenset(vmap[v] for v in f) for f in comp.parts[part].complex.facets
    )


def _glue_step(
    k: Complex, m: Complex, m_prime: Complex, pairs: Sequence[CollapsePair]
) -> Complex:
    glue_local_collapse(k, m, m_prime, pairs)
    kept = {f for f in k.faces if f} - {f for f in m.faces if f}
    kept |= {f for f in m_prime.faces if f}
    return Complex.from_faces(kept)


@functools.lru_cache(maxsize=3)
def _clause_exit_pairs(entry: int) -> tuple[CollapseSequence, frozenset[Face]]:
    """Collapse of the canonical three-house once door ``entry`` is free.

    Returns the witness and the kept faces: the hub edge, all three
    two-edge paths, and the two doors other than ``entry``.
    """
    lc = build_three_house()
    names = ["e", "p1", "p2", "p3"]
    names += [f"f{t}" for t in (1, 2, 3) if t != entry]
    faces: set[Face] = set()
    for name in names:
        faces |= lc.feature(name).face_set()
    res = collapses_to(lc.complex, Complex.from_faces(faces), budget=10**7)
    if not res.yes:
        raise ReductionError("three-house failed to collapse onto its exit tree")
    return res.witness, frozenset(faces)


def _entry_position(clause: tuple[int, int, int], a: Assignment) -> int:
    for t, lit in enumerate(clause, start=1):
        if a[abs(lit)] == (lit > 0):
            return t
    raise ReductionError(f"clause {clause!r} is not satisfied")


def schedule_collapse(
    phi: Formula, assignment: Assignment
) -> tuple[frozenset[Face], CollapseSequence]:
    """Turn a satisfying assignment into a removal set plus collapse.

    Removes one triangle from the satisfied disk ``D[l(u)]`` of every
    variable sphere, then replays the phase schedule: (a) retract each
    punctured disk to its rim and spoke, (b) collapse each satisfied
    literal house onto its occurrence star, (c) collapse each clause
    house through its first satisfied door, (d) open the conjunction
    house down to its variable star, (e) flatten each ``B(u)`` onto
    ``b(u)`` and each ``O(u)`` onto ``s(u) + p(u)``, (f) finish the
    unsatisfied disks and literal houses, and (g) prune the residual
    star to ``v_and``.  Every phase is globalized via
    ``glue_local_collapse``, and the concatenated sequence is verified
    end to end before returning, so the result is replayable evidence,
    not a trace of intent.
    """
    comp = _compile(phi)
    a = {int(v): bool(assignment[v]) for v in assignment}
    if set(a) != set(range(1, phi.n + 1)):
        raise ReductionError("assignment must cover exactly the formula's variables")
    if not _satisfies(phi, a):
        raise ReductionError("assignment does not satisfy the formula")

    lc = comp.labeled
    k = lc.complex
    v_and = lc.feature("v_and").value[0]
    lit_of = {i: _lit_name(i if a[i] else -i) for i in a}
    neg_of = {i: _lit_name(-i if a[i] else i) for i in a}
    pairs: list[CollapsePair] = []
    removal: list[Face] = []

    # (a) puncture each satisfied disk and retract it to rim plus spoke.
    for i in range(1, phi.n + 1):
        lit = lit_of[i]
        disk_faces = {f for f in lc.subcomplex(f"D[{lit}]").faces if f}
        tau = min((f for f in disk_faces if len(f) == 3), key=face_key)
        k = k.remove_facet(tau)
        removal.append(tau)
        m = Complex.from_faces(disk_faces - {tau})
        m_prime = _features_complex(lc, [f"s(u{i})", f"f[{lit}]"])
        res = collapses_to(m, m_prime, budget=10**5)
        if not res.yes:
            raise ReductionError(f"punctured disk D[{lit}] failed to retract")
        k = _glue_step(k, m, m_prime, res.witness)
        pairs.extend(res.witness)

    # (b) collapse each satisfied literal house onto its occurrence star.
    for i in range(1, phi.n + 1):
        lit, sign = lit_of[i], (i if a[i] else -i)
        names = [f"p(u{i})"]
        for j, t in comp.occ.get(sign, ()):
            names += [f"p[{lit},c{j}#{t}]", f"f[{lit},c{j}#{t}]"]
        frame = house_frame(comp.parts[f"X[{lit}]"]).mapped(comp.vmaps[f"X[{lit}]"])
        seq, k = collapse_house(k, frame, _features_complex(lc, names))
        pairs.extend(seq)

    # (c) collapse each clause house through its first satisfied door.
    for j, clause in enumerate(phi.clauses, start=1):
        local_pairs, local_faces = _clause_exit_pairs(_entry_position(clause, a))
        vmap = comp.vmaps[f"C(c{j})"]
        mapped = tuple(
            CollapsePair(
                frozenset(vmap[v] for v in p.free),
                frozenset(vmap[v] for v in p.coface),
            )
            for p in local_pairs
        )
        m = _part_complex(comp, f"C(c{j})")
        m_prime = Complex.from_faces(
            {frozenset(vmap[v] for v in f) for f in local_faces}
        )
        k = _glue_step(k, m, m_prime, mapped)
        pairs.extend(mapped)

    # (d) open the conjunction house down to its variable star.
    frame = house_frame(comp.parts["A"]).mapped(comp.vmaps["A"])
    if phi.n:
        target = _features_complex(lc, [f"f(u{i})" for i in range(1, phi.n + 1)])
    else:
        target = Complex.from_facets([[v_and]])
    seq, k = collapse_house(k, frame, target)
    pairs.extend(seq)

    # (e) flatten B(u) onto b(u), then O(u) onto s(u) + p(u).
    for i in range(1, phi.n + 1):
        u = f"u{i}"
        frame = house_frame(comp.parts[f"B({u})"]).mapped(comp.vmaps[f"B({u})"])
        seq, k = collapse_house(k, frame, _features_complex(lc, [f"b({u})"]))
        pairs.extend(seq)
        m = _part_complex(comp, f"O({u})")
        m_prime = _features_complex(lc, [f"s({u})", f"p({u})"])
        res = collapses_to(m, m_prime, budget=10**5)
        if not res.yes:
            raise ReductionError(f"O({u}) failed to retract onto s+p")
        k = _glue_step(k, m, m_prime, res.witness)
        pairs.extend(res.witness)

    # (f) finish each unsatisfied disk, then its literal house.
    for i in range(1, phi.n + 1):
        lit, sign = neg_of[i], (-i if a[i] else i)
        m = lc.subcomplex(f"D[{lit}]")
        m_prime = _features_complex(lc, [f"f[{lit}]"])
        dpairs = collapse_disk_to_tree(m, m_prime)
        k = _glue_step(k, m, m_prime, dpairs)
        pairs.extend(dpairs)
        names = [f"p(u{i})"]
        for j, t in comp.occ.get(sign, ()):
            names += [f"p[{lit},c{j}#{t}]", f"f[{lit},c{j}#{t}]"]
        frame = house_frame(comp.parts[f"X[{lit}]"]).mapped(comp.vmaps[f"X[{lit}]"])
        seq, k = collapse_house(k, frame, _features_complex(lc, names))
        pairs.extend(seq)

    # (g) prune the residual star down to the hub vertex.
    ok, tail = is_collapsible_2d_greedy(k, keep_vertex=v_and)
    if not ok or tail is None:
        raise ReductionError("residual complex failed to collapse to v_and")
    pairs.extend(tail)

    sequence = tuple(pairs)
    _check_conjunction_precedence(lc, phi, sequence, neg_of)
    start = lc.complex
    for tau in removal:
        start = start.remove_facet(tau)
    verify_collapse_sequence(start, sequence, Complex.from_facets([[v_and]]))
    return frozenset(removal), sequence


def _check_conjunction_precedence(
    lc: LabeledComplex,
    phi: Formula,
    sequence: CollapseSequence,
    neg_of: Mapping[int, str],
) -> None:
    """Assert the first conjunction-house step precedes every step inside
    an unsatisfied disk."""
    a_facets = set(lc.subcomplex("A").facets)
    first_a = min(
        idx for idx, p in enumerate(sequence) if p.coface in a_facets
    )
    for i in range(1, phi.n + 1):
        d_faces = {f for f in lc.subcomplex(f"D[{neg_of[i]}]").faces if f}
        first_d = min(
            idx for idx, p in enumerate(sequence) if p.coface in d_faces
        )
        if first_d <= first_a:
            raise ReductionError(
                f"disk D[{neg_of[i]}] collapsed before the conjunction house"
            )


# -- reading removals back --------------------------------------------------------


def assignment_from_removal(
    k: LabeledComplex, removal: frozenset[Face]
) -> dict[int, bool] | None:
    """Read an assignment off a removal set; None when inadmissible.

    A removal is admissible when every variable sphere loses a triangle
    (necessarily exactly one, as the cardinality matches the variable
    count); the variable is true iff its triangle sits in ``D[u]``.
    """
    chi = k.complex.reduced_euler_characteristic()
    if len(removal) != chi:
        raise ReductionError(
            f"removal has {len(removal)} triangles; expected {chi}"
        )
    out: dict[int, bool] = {}
    for name in k.labels:
        if not (name.startswith("S(u") and name.endswith(")")):
            continue
        i = int(name[3:-1])
        mine = removal & set(k.subcomplex(name).facets)
        if not mine:
            return None
        out[i] = min(mine, key=face_key) in set(k.subcomplex(f"D[u{i}]").facets)
    return out


@dataclass(frozen=True)
class ReductionCertificate:
    """Replayable evidence that a removal collapses the compiled complex."""

    removal: tuple[Face, ...]
    pairs: CollapseSequence
    assignment: Mapping[int, bool]


def decide_phi_via_complex(
    phi: Formula,
    *,
    full_sweep: bool = False,
    jobs: int = 1,
    subdivisions: int = 0,
) -> ReductionCertificate | None:
    """Decide satisfiability through the compiled complex, at desk scale.

    Enumerates admissible removal sets (one triangle per variable
    sphere; with ``full_sweep`` every subset of the right size) and
    greedily collapses each punctured complex.  Returns a certificate
    with the first winning removal, its collapse witness, and the
    extracted assignment cross-checked against the formula, or None when
    no candidate collapses.  ``subdivisions`` reruns the search on a
    barycentric subdivision with the removal pool mapped along.
    """
    comp = _compile(phi)
    lc = comp.labeled
    if subdivisions:
        lc, _ = subdivide_labeled(lc, subdivisions)
    base = lc.complex
    if full_sweep:
        chi = base.reduced_euler_characteristic()
        pool = sorted((f for f in base.faces if len(f) == 3), key=face_key)
        count = math.comb(len(pool), chi)
        candidates: Iterator[tuple[Face, ...]] = itertools.combinations(pool, chi)
    else:
        pools = [
            sorted(lc.subcomplex(f"S(u{i})").facets, key=face_key)
            for i in range(1, phi.n + 1)
        ]
        count = math.prod(len(p) for p in pools)
        candidates = itertools.product(*pools)
    if count > _SWEEP_CAP:
        raise ReductionError(
            f"removal enumeration needs {count} candidates; cap is {_SWEEP_CAP}"
        )

    def attempt(cand: tuple[Face, ...]) -> tuple[bool, CollapseSequence | None]:
        punctured = base
        for tau in cand:
            punctured = punctured.remove_facet(tau)
        return is_collapsible_2d_greedy(punctured)

    executor = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 else None
    if executor is not None:
        outcomes = executor.map(lambda c: (c, attempt(c)), candidates)
    else:
        outcomes = ((c, attempt(c)) for c in candidates)
    try:
        for cand, (ok, cpairs) in outcomes:
            if not ok or cpairs is None:
                continue
            extracted = assignment_from_removal(lc, frozenset(cand))
            if extracted is None or not _satisfies(phi, extracted):
                raise ReductionError(
                    "collapsible removal fails to read back as a model: "
                    f"{sorted(map(face_key, cand))}"
                )
            return ReductionCertificate(tuple(cand), cpairs, extracted)
    finally:
        if executor is not None:
            executor.shutdown(wait=False, cancel_futures=True)
    return None
