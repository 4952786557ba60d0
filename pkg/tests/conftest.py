import random

from shellkit.complex_core import Complex


def random_pure_2complex(rng: random.Random, max_facets: int = 8, pool: int = 9) -> Complex:
    """Random pure 2-complex: distinct triangles on a small vertex pool."""
    want = rng.randint(1, max_facets)
    facets = set()
    while len(facets) < want:
        facets.add(frozenset(rng.sample(range(pool), 3)))
    return Complex.from_facets(facets)


def random_complex(rng: random.Random, max_facets: int = 6, pool: int = 8) -> Complex:
    """Random complex with mixed facet dimensions (1 to 3 vertices each)."""
    want = rng.randint(1, max_facets)
    facets = [rng.sample(range(pool), rng.randint(1, 3)) for _ in range(want)]
    return Complex.from_facets(facets)
