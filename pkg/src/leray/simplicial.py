"""Finite simplicial complexes, boundary matrices and direct simplicial homology."""
from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable

import numpy as np

from .linalg import Field, QuotientSpace, Subspace, image, kernel, rank

Simplex = tuple[int, ...]


def as_simplex(vertices: Iterable[int]) -> Simplex:
    """Canonical (increasing) vertex tuple; rejects repeated vertices."""
    vs = tuple(int(v) for v in vertices)
    out = tuple(sorted(vs))
    if len(set(out)) != len(out):
        raise ValueError(f"simplex {list(vs)} repeats a vertex")
    if any(v < 0 for v in out):
        raise ValueError(f"simplex {list(vs)} has a negative vertex id")
    return out


def faces(sigma: Simplex) -> list[Simplex]:
    """Codimension-one faces, ``faces(sigma)[i]`` omitting the i-th vertex."""
    return [sigma[:i] + sigma[i + 1 :] for i in range(len(sigma))] if len(sigma) > 1 else []


def permutation_sign(seq) -> int:
    """Sign of the permutation that sorts ``seq`` (distinct entries)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class SimplicialComplex:
    """A finite simplicial complex, closed under faces.

    Simplices are increasing vertex tuples; that order is the orientation used
    for every chain space.  ``index[sigma]`` is the coordinate of ``sigma`` in
    ``C_{dim sigma}``.
    """

    def __init__(self, simplices: Iterable[Simplex]):
        by_dim: dict[int, set[Simplex]] = {}
        for s in simplices:
            s = as_simplex(s)
            if not s:
                continue
            by_dim.setdefault(len(s) - 1, set()).add(s)
        self._by_dim = {d: tuple(sorted(ss)) for d, ss in sorted(by_dim.items())}
        for d, ss in self._by_dim.items():
            if d == 0:
                continue
            lower = set(self._by_dim.get(d - 1, ()))
            for s in ss:
                for t in faces(s):
                    if t not in lower:
                        raise ValueError(f"complex is not closed under faces: {t} missing for {s}")
        self.index: dict[Simplex, int] = {s: i for ss in self._by_dim.values() for i, s in enumerate(ss)}

    @property
    def dim(self) -> int:
        return max(self._by_dim, default=-1)

    def simplices(self, d: int | None = None) -> tuple[Simplex, ...]:
        if d is None:
            return tuple(s for dd in sorted(self._by_dim) for s in self._by_dim[dd])
        return self._by_dim.get(d, ())

    def count(self, d: int) -> int:
        return len(self._by_dim.get(d, ()))

    @cached_property
    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.simplices(0))

    def __contains__(self, sigma) -> bool:
        return tuple(sigma) in self.index

    def __len__(self) -> int:
        return len(self.index)

    def __iter__(self):
        return iter(self.simplices())

    def __eq__(self, other):
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._by_dim == other._by_dim

    def __hash__(self):
        return hash(tuple(self._by_dim.items()))

    def __repr__(self):
        counts = [self.count(d) for d in range(self.dim + 1)]
        return f"SimplicialComplex(f-vector={counts})"

    def f_vector(self) -> list[int]:
        return [self.count(d) for d in range(self.dim + 1)]

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * n for d, n in enumerate(self.f_vector()))

    def maximal_simplices(self) -> list[Simplex]:
        covered = set()
        for s in self.simplices():
            covered.update(faces(s))
        return [s for s in self.simplices() if s not in covered]

    def face_pairs(self) -> list[tuple[Simplex, Simplex]]:
        """All pairs ``(tau, tau_face)`` with ``tau_face`` a face of ``tau`` (including itself)."""
        out = []
        for s in self.simplices():
            for k in range(1, len(s) + 1):
                for t in combinations(s, k):
                    out.append((s, t))
        return out

    def relabel(self, mapping: dict[int, int]) -> "SimplicialComplex":
        return SimplicialComplex(tuple(mapping[v] for v in s) for s in self.simplices())


def close_under_faces(generators: Iterable[Iterable[int]]) -> SimplicialComplex:
    """Smallest complex containing every generator."""
    out: set[Simplex] = set()
    for g in generators:
        s = as_simplex(g)
        if s in out:
            continue
        for k in range(1, len(s) + 1):
            out.update(combinations(s, k))
    return SimplicialComplex(out)


def skeleton(K: SimplicialComplex, j: int) -> SimplicialComplex:
    if j < -1:
        raise ValueError("skeleton index must be >= -1")
    return SimplicialComplex(s for s in K.simplices() if len(s) - 1 <= j)


def boundary_matrix(K: SimplicialComplex, d: int, field: Field) -> np.ndarray:
    """Matrix of ``C_d -> C_{d-1}``; ``C_{-1} = 0`` so ``d = 0`` gives zero rows."""
    if d < 0:
        raise ValueError("dimension must be >= 0")
    rows = K.count(d - 1) if d >= 1 else 0
    cols = K.simplices(d)
    m = field.zeros(rows, len(cols))
    if d == 0:
        return m
    one = field.element(1)
    minus = field.element(-1)
    for j, s in enumerate(cols):
        for i, t in enumerate(faces(s)):
            m[K.index[t], j] = one if i % 2 == 0 else minus
    return m


def _boundary_or_empty(K: SimplicialComplex, d: int, field: Field) -> np.ndarray:
    if d < 0 or d > K.dim + 1:
        return field.zeros(K.count(d - 1) if d >= 1 else 0, K.count(d))
    return boundary_matrix(K, d, field)


def homology(K: SimplicialComplex, d: int, field: Field) -> tuple[int, np.ndarray]:
    """``dim H_d(K)`` and representative cycles (rows, in the ``C_d`` coordinates)."""
    if d < 0 or d > K.dim:
        return 0, field.zeros(0, K.count(d) if d >= 0 else 0)
    cycles = kernel(_boundary_or_empty(K, d, field), field, ncols=K.count(d))
    bounds = image(_boundary_or_empty(K, d + 1, field), field)
    h = QuotientSpace(cycles, bounds)
    return h.dim, np.array(h.reps)


def betti_numbers(K: SimplicialComplex, field: Field) -> list[int]:
    """``dim H_d`` for ``d = 0..dim K`` via boundary ranks only."""
    ranks = [0] + [rank(boundary_matrix(K, d, field), field) for d in range(1, K.dim + 1)] + [0]
    return [K.count(d) - ranks[d] - ranks[d + 1] for d in range(K.dim + 1)]


def homology_dims(K: SimplicialComplex, field: Field) -> list[int]:
    return [homology(K, d, field)[0] for d in range(K.dim + 1)]


def full_space(K: SimplicialComplex, d: int, field: Field) -> Subspace:
    return Subspace.full(field, K.count(d))
