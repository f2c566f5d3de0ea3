"""Deterministic random simplicial maps for property checks."""
from __future__ import annotations

import random
from itertools import combinations

from .linalg import Field
from .maps import SimplicialMap
from .simplicial import SimplicialComplex, close_under_faces

FIELDS = (Field(2), Field(5), Field(None))


def _size_after(current: set, gen: tuple) -> set:
    new = set()
    for k in range(1, len(gen) + 1):
        for face in combinations(gen, k):
            if face not in current:
                new.add(face)
    return new


def random_complex(rng: random.Random, n_vertices: int, top_dim: int, n_generators: int) -> SimplicialComplex:
    verts = list(range(n_vertices))
    gens = [tuple(sorted(rng.sample(verts, top_dim + 1)))]
    for _ in range(n_generators - 1):
        d = rng.randint(min(1, top_dim), top_dim)
        gens.append(tuple(sorted(rng.sample(verts, d + 1))))
    gens += [(v,) for v in verts]
    return close_under_faces(gens)


def random_map(rng: random.Random, max_simplices: int = 200, max_codim: int = 3, max_domain_dim: int = 3) -> SimplicialMap:
    """A random simplicial map with ``dim Y <= max_codim`` and at most ``max_simplices`` domain simplices."""
    m = rng.randint(0, max_codim)
    ny = rng.randint(m + 1, m + 4)
    Y = random_complex(rng, ny, m, rng.randint(1, 5))
    nx = rng.randint(3, 12)
    ycodes = Y.vertices
    vmap = {u: rng.choice(ycodes) for u in range(nx)}
    # bias some domain vertices onto a common top simplex so fibers get interesting
    top = rng.choice(Y.simplices(Y.dim))
    for u in range(nx):
        if rng.random() < 0.5:
            vmap[u] = rng.choice(top)
    current: set = {(u,) for u in range(nx)}
    attempts = rng.randint(5, 60)
    for _ in range(attempts):
        k = rng.randint(2, max_domain_dim + 1)
        if k > nx:
            continue
        gen = tuple(sorted(rng.sample(range(nx), k)))
        img = tuple(sorted({vmap[u] for u in gen}))
        if img not in Y:
            continue
        new = _size_after(current, gen)
        if len(current) + len(new) > max_simplices:
            continue
        current |= new
    X = SimplicialComplex(current)
    return SimplicialMap(X, Y, vmap)


def random_path_map(rng: random.Random, max_edges: int = 10, max_simplices: int = 200, max_domain_dim: int = 3) -> SimplicialMap:
    """A random simplicial map onto the path ``0 - 1 - ... - n``."""
    n = rng.randint(1, max_edges)
    Y = close_under_faces([(i, i + 1) for i in range(n)])
    nx = rng.randint(n + 1, n + 12)
    vmap = {u: (u if u <= n else rng.randint(0, n)) for u in range(nx)}
    current: set = {(u,) for u in range(nx)}
    # keep the domain spread over the whole path
    for i in range(n):
        a = rng.choice([u for u in range(nx) if vmap[u] == i])
        b = rng.choice([u for u in range(nx) if vmap[u] == i + 1])
        current |= _size_after(current, tuple(sorted((a, b))))
    for _ in range(rng.randint(5, 60)):
        k = rng.randint(2, max_domain_dim + 1)
        gen = tuple(sorted(rng.sample(range(nx), min(k, nx))))
        imgs = {vmap[u] for u in gen}
        if max(imgs) - min(imgs) > 1:
            continue
        new = _size_after(current, gen)
        if len(current) + len(new) > max_simplices:
            continue
        current |= new
    return SimplicialMap(SimplicialComplex(current), Y, vmap)


def corpus(n: int = 100, seed: int = 0, **kw) -> list[tuple[SimplicialMap, Field]]:
    rng = random.Random(seed)
    return [(random_map(rng, **kw), FIELDS[i % len(FIELDS)]) for i in range(n)]


def path_corpus(n: int = 50, seed: int = 1, **kw) -> list[tuple[SimplicialMap, Field]]:
    rng = random.Random(seed)
    return [(random_path_map(rng, **kw), FIELDS[i % len(FIELDS)]) for i in range(n)]
