"""Core complex machinery against independent brute-force oracles."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_complex, random_pure_2complex
from shellkit.complex_core import (
    Complex,
    Feature,
    FormatError,
    LabeledComplex,
    barycentric_subdivision,
    canonical_form,
    cone,
    format_facet_lines,
    from_json,
    is_pseudomanifold,
    join,
    parse_facet_lines,
    subdivide_labeled,
    to_json,
    vertex_links_connected,
)
from shellkit.gadgets import fixtures

BD3 = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
STRIP = [[0, 1, 2], [1, 2, 3]]
WEDGE = [[0, 1, 2], [2, 3, 4]]


# -- independent oracles --


def all_faces_brute(facets) -> set:
    faces = set()
    for f in facets:
        for r in range(1, len(f) + 1):
            faces.update(map(frozenset, itertools.combinations(f, r)))
    return faces


def chi_reduced_brute(facets) -> int:
    return sum((-1) ** (len(f) - 1) for f in all_faces_brute(facets)) - 1


def link_brute(k: Complex, sigma: frozenset) -> set:
    out = set()
    for tau in k.faces:
        if tau and not (tau & sigma) and (tau | sigma) in k.faces:
            out.add(tau)
    return out


def count_chains_brute(faces) -> int:
    """Number of nonempty chains under strict inclusion, by DFS."""
    faces = sorted(faces, key=len)
    total = 0
    stack = [(f,) for f in faces]
    while stack:
        chain = stack.pop()
        total += 1
        for g in faces:
            if len(g) > len(chain[-1]) and chain[-1] < g:
                stack.append(chain + (g,))
    return total


# -- construction and enumeration --


def test_face_enumeration_small():
    k = Complex.from_facets(STRIP)
    assert k.f_vector() == (1, 4, 5, 2)
    assert k.dim == 2
    assert k.facets == frozenset({frozenset({0, 1, 2}), frozenset({1, 2, 3})})
    assert frozenset({1, 2}) in k
    assert frozenset({0, 3}) not in k
    assert k.vertices == (0, 1, 2, 3)


def test_from_facets_drops_nested_faces():
    k = Complex.from_facets([[0, 1, 2], [0, 1], [2]])
    assert k.facets == frozenset({frozenset({0, 1, 2})})


def test_f_vector_frozen():
    assert Complex.from_facets(BD3).f_vector() == (1, 4, 6, 4)
    assert fixtures()["torus_7"].complex.f_vector() == (1, 7, 21, 14)
    assert fixtures()["boundary_delta_4"].complex.f_vector() == (1, 5, 10, 10, 5)


def test_chi_frozen_values():
    assert Complex.from_facets(BD3).reduced_euler_characteristic() == 1
    assert fixtures()["torus_7"].complex.reduced_euler_characteristic() == -1
    assert fixtures()["dunce_hat"].complex.reduced_euler_characteristic() == 0
    assert fixtures()["modified_dunce_hat"].complex.reduced_euler_characteristic() == 0


def test_chi_matches_alternating_sum_oracle():
    rng = random.Random(7)
    samples = [BD3, STRIP, WEDGE] + [
        [sorted(f) for f in random_complex(rng).facets] for _ in range(20)
    ]
    for facets in samples:
        k = Complex.from_facets(facets)
        assert k.reduced_euler_characteristic() == chi_reduced_brute(facets)


def test_is_pure():
    assert Complex.from_facets(BD3).is_pure()
    assert Complex.from_facets(BD3).is_pure(2)
    assert not Complex.from_facets(BD3).is_pure(1)
    assert not Complex.from_facets([[0, 1, 2], [3, 4]]).is_pure()


def test_link_matches_definition_oracle():
    rng = random.Random(11)
    for _ in range(10):
        k = random_complex(rng)
        for sigma in list(k.faces)[:40]:
            if not sigma:
                continue
            got = set(k.link(sigma).nonempty_faces)
            assert got == link_brute(k, sigma)


def test_link_frozen():
    k = Complex.from_facets(BD3)
    assert k.link([0]).facets == frozenset(
        {frozenset({1, 2}), frozenset({1, 3}), frozenset({2, 3})}
    )
    assert k.link([0, 1]).facets == frozenset({frozenset({2}), frozenset({3})})


def test_delete_and_remove_facet():
    k = Complex.from_facets(STRIP)
    assert k.delete([1, 2]).facets == frozenset(
        {frozenset({0, 1}), frozenset({0, 2}), frozenset({1, 3}), frozenset({2, 3})}
    )
    trimmed = k.remove_facet([0, 1, 2])
    assert frozenset({0, 1, 2}) not in trimmed.faces
    assert frozenset({0, 1}) in trimmed.faces
    with pytest.raises(ValueError):
        k.remove_facet([1, 2])


# -- join, cone --


def test_join_chi_product_rule():
    rng = random.Random(13)
    for _ in range(15):
        a = random_complex(rng, max_facets=4, pool=5)
        b_raw = random_complex(rng, max_facets=4, pool=5)
        b = Complex.from_facets([[v + 10 for v in f] for f in b_raw.facets])
        j = join(a, b)
        assert (
            j.reduced_euler_characteristic()
            == -a.reduced_euler_characteristic() * b.reduced_euler_characteristic()
        )


def test_cone_frozen():
    bd3 = Complex.from_facets(BD3)
    assert cone(bd3, 0).f_vector() == (1, 5, 10, 10, 4)
    assert cone(bd3, 1).f_vector() == (1, 6, 15, 20, 14, 4)
    assert cone(bd3, 0).reduced_euler_characteristic() == 0


def test_join_disjointness_check():
    a = Complex.from_facets([[0, 1]])
    with pytest.raises(ValueError):
        join(a, a)


# -- structural predicates --


def test_is_pseudomanifold_frozen():
    assert is_pseudomanifold(Complex.from_facets(BD3)) == "closed"
    assert is_pseudomanifold(fixtures()["torus_7"].complex) == "closed"
    assert is_pseudomanifold(Complex.from_facets(STRIP)) == "with_boundary"
    assert is_pseudomanifold(Complex.from_facets(WEDGE)) == "with_boundary"
    assert is_pseudomanifold(fixtures()["modified_dunce_hat"].complex) == "no"


def test_pseudomanifold_matches_ridge_count_oracle():
    rng = random.Random(17)
    for _ in range(20):
        k = random_pure_2complex(rng)
        counts = {}
        for f in k.facets:
            for e in itertools.combinations(sorted(f), 2):
                counts[e] = counts.get(e, 0) + 1
        expected = (
            "no"
            if max(counts.values()) > 2
            else ("closed" if min(counts.values()) == 2 else "with_boundary")
        )
        assert is_pseudomanifold(k) == expected


def test_vertex_links_connected():
    ok, bad = vertex_links_connected(Complex.from_facets(BD3))
    assert ok and bad == ()
    ok, bad = vertex_links_connected(Complex.from_facets(WEDGE))
    assert not ok and bad == (2,)


# -- canonical form --


def test_canonical_form_distinguishes():
    tri = Complex.from_facets([[0, 1, 2]])
    path = Complex.from_facets([[0, 1], [1, 2]])
    assert canonical_form(tri) != canonical_form(path)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**30), st.integers(0, 2**30))
def test_canonical_form_stable_and_faithful(seed, shuffle_seed):
    # Degree-refined renaming, not full canonization: the guarantees are
    # determinism, insensitivity to input order, and idempotence of the
    # renaming (equal keys always mean isomorphic complexes).
    rng = random.Random(seed)
    k = random_complex(rng)
    form = canonical_form(k)
    assert form == canonical_form(k)

    facets = [sorted(f) for f in k.facets]
    random.Random(shuffle_seed).shuffle(facets)
    assert canonical_form(Complex.from_facets(facets)) == form

    renamed = Complex.from_facets(form[1])
    assert canonical_form(renamed) == form


# -- barycentric subdivision --


def test_subdivision_frozen():
    sd = barycentric_subdivision(Complex.from_facets(BD3)).complex
    assert sd.f_vector() == (1, 14, 36, 24)
    assert sd.reduced_euler_characteristic() == 1


def test_subdivision_faces_are_chains_oracle():
    for facets in (BD3, STRIP, [[0, 1, 2, 3]]):
        k = Complex.from_facets(facets)
        sd = barycentric_subdivision(k).complex
        nonempty = sum(1 for _ in sd.nonempty_faces)
        assert nonempty == count_chains_brute(all_faces_brute(facets))


def test_subdivision_preserves_chi():
    rng = random.Random(19)
    for _ in range(8):
        k = random_complex(rng)
        chi = k.reduced_euler_characteristic()
        sub = barycentric_subdivision(k, 2)
        assert sub.complex.reduced_euler_characteristic() == chi


def test_subdivision_carriers():
    k = Complex.from_facets(STRIP)
    sub = barycentric_subdivision(k)
    for v in sub.complex.vertices:
        carrier = sub.face_carrier([v])
        assert carrier in k.faces and carrier


def test_subdivide_labeled_transports_features():
    lc = LabeledComplex(
        Complex.from_facets(STRIP),
        {"rim": Feature.path([0, 1, 3]), "spot": Feature.vertex(2)},
    )
    sub, _ = subdivide_labeled(lc, 1)
    rim = sub.feature("rim")
    assert rim.kind == "path"
    assert rim.value[0] != rim.value[-1]
    assert len(rim.value) == 5
    assert sub.feature("spot").kind == "vertex"


# -- features and labels --


def test_feature_face_sets():
    assert Feature.vertex(3).face_set() == {frozenset({3})}
    assert Feature.edge(1, 2).face_set() == {
        frozenset({1}),
        frozenset({2}),
        frozenset({1, 2}),
    }
    path = Feature.path([0, 1, 2])
    assert frozenset({0, 1}) in path.face_set()
    assert frozenset({0, 2}) not in path.face_set()


def test_labeled_complex_validates_features():
    k = Complex.from_facets(STRIP)
    with pytest.raises(ValueError):
        LabeledComplex(k, {"bad": Feature.edge(0, 3)})
    with pytest.raises(ValueError, match="revisits"):
        LabeledComplex(k, {"p": Feature.path([0, 1, 2, 1])})


# -- serialization --


def test_parse_format_round_trip():
    k = Complex.from_facets(BD3)
    assert parse_facet_lines(format_facet_lines(k)) == k


def test_parse_errors_carry_line_numbers():
    with pytest.raises(FormatError, match="line 2"):
        parse_facet_lines("0 1 2\n0 1 x\n")


def test_parse_skips_blank_and_comment_lines():
    k = parse_facet_lines("# comment\n0 1 2\n\n1 2 3\n")
    assert len(k.facets) == 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**30))
def test_parse_format_round_trip_random(seed):
    k = random_complex(random.Random(seed))
    assert parse_facet_lines(format_facet_lines(k)) == k


def test_json_round_trip_with_labels():
    k = Complex.from_facets([[0, 1, 2], [1, 2, 3], [9]])
    lc = LabeledComplex(
        k,
        {
            "f": Feature.edge(0, 1),
            "p": Feature.path([0, 2, 3]),
            "v": Feature.vertex(9),
            "wall": Feature.subcomplex([[1, 2, 3]]),
        },
    )
    back = from_json(to_json(lc))
    assert back.complex == lc.complex
    assert back.labels == lc.labels


def test_json_accepts_bare_complex():
    k = Complex.from_facets(STRIP)
    back = from_json(to_json(k))
    assert back.complex == k and back.labels == {}
