"""Simplicial maps given by vertex assignments, their fibers and filtrations."""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .linalg import Field, Subspace
from .simplicial import Simplex, SimplicialComplex


class MapViolation(ValueError):
    """The vertex assignment does not carry some simplex onto a simplex."""

    def __init__(self, simplex: Simplex, image: Simplex):
        super().__init__(f"simplex {list(simplex)} maps to {list(image)}, which is not a simplex of the codomain")
        self.simplex = simplex
        self.image = image


@dataclass(frozen=True, eq=False)
class SimplicialMap:
    domain: SimplicialComplex
    codomain: SimplicialComplex
    vertex_map: dict[int, int] = dc_field(hash=False)

    def __post_init__(self):
        missing = [v for v in self.domain.vertices if v not in self.vertex_map]
        if missing:
            raise ValueError(f"vertex map is undefined on domain vertices {missing}")
        bad = validate_map(self)
        if bad is not None:
            raise bad

    @property
    def m(self) -> int:
        return self.codomain.dim

    def image(self, sigma: Simplex) -> Simplex:
        return tuple(sorted({self.vertex_map[u] for u in sigma}))

    def __call__(self, sigma: Simplex) -> Simplex:
        return self.image(sigma)

    @cached_property
    def fibers(self) -> "FiberIndex":
        return FiberIndex(self)

    def level(self, sigma: Simplex) -> int:
        """Filtration level ``dim f(sigma)``."""
        return len(self.image(sigma)) - 1

    def to_dict(self) -> dict:
        return {
            "domain": {"simplices": [list(s) for s in self.domain.maximal_simplices()]},
            "codomain": {"simplices": [list(s) for s in self.codomain.maximal_simplices()]},
            "vertex_map": {str(k): int(v) for k, v in sorted(self.vertex_map.items())},
        }


def validate_map(f: SimplicialMap) -> MapViolation | None:
    """``None`` when every domain simplex maps onto a codomain simplex, else the first violation."""
    for s in f.domain.simplices():
        img = tuple(sorted({f.vertex_map[u] for u in s}))
        if img not in f.codomain:
            return MapViolation(s, img)
    return None


def identity_map(K: SimplicialComplex) -> SimplicialMap:
    return SimplicialMap(K, K, {v: v for v in K.vertices})


def constant_map(K: SimplicialComplex, point: int = 0) -> SimplicialMap:
    return SimplicialMap(K, SimplicialComplex([(point,)]), {v: point for v in K.vertices})


class FiberIndex:
    """Domain simplices bucketed by their image ``tau`` and offset ``q = dim sigma - dim tau``."""

    def __init__(self, f: SimplicialMap):
        self.f = f
        buckets: dict[Simplex, dict[int, list[Simplex]]] = {tau: {} for tau in f.codomain.simplices()}
        for s in f.domain.simplices():
            tau = f.image(s)
            buckets[tau].setdefault(len(s) - len(tau), []).append(s)
        self._buckets = {tau: {q: tuple(sorted(ss)) for q, ss in qs.items()} for tau, qs in buckets.items()}
        self.position = {s: i for qs in self._buckets.values() for ss in qs.values() for i, s in enumerate(ss)}

    def __call__(self, tau: Simplex, q: int) -> tuple[Simplex, ...]:
        tau = tuple(tau)
        if tau not in self._buckets:
            raise KeyError(f"{list(tau)} is not a simplex of the codomain")
        return self._buckets[tau].get(q, ())

    def max_offset(self, tau: Simplex) -> int:
        return max(self._buckets[tuple(tau)], default=-1)

    def over(self, tau: Simplex) -> list[Simplex]:
        """All onto-fiber simplices over ``tau``, every offset."""
        return [s for q in sorted(self._buckets[tuple(tau)]) for s in self._buckets[tuple(tau)][q]]

    def total(self) -> int:
        return sum(len(ss) for qs in self._buckets.values() for ss in qs.values())


def fiber(f: SimplicialMap, tau: Simplex, q: int) -> tuple[Simplex, ...]:
    """Domain simplices of dimension ``dim tau + q`` whose image is exactly ``tau``."""
    if q < 0:
        raise ValueError("offset must be >= 0")
    return f.fibers(tau, q)


def bigraded_indices(f: SimplicialMap, p: int, q: int) -> list[int]:
    """Coordinates in ``C_{p+q}(X)`` of the simplices whose image has dimension <= p."""
    n = p + q
    if n < 0 or p < 0:
        return []
    return [i for i, s in enumerate(f.domain.simplices(n)) if len(set(f.vertex_map[u] for u in s)) - 1 <= p]


def bigraded_subspace(f: SimplicialMap, p: int, q: int, field: Field) -> Subspace:
    n = p + q
    ambient = f.domain.count(n) if n >= 0 else 0
    return Subspace.coordinate(field, ambient, bigraded_indices(f, p, q))
