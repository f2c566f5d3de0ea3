"""The Leray spectral sequence of a simplicial map.

Every object lives inside a chain space ``C_n(X)``.  The filtration of ``X``
lifted from the skeleta of ``Y`` gives coordinate subspaces ``X[p, q]``
spanned by the ``(p+q)``-simplices whose image has dimension at most ``p``.
From those::

    Z[r, p, q] = X[p, q] & d^-1 X[p - r, q + r - 1]
    B[r, p, q] = X[p, q] & d X[p + r, q - r + 1]
    E[r, p, q] = Z[r, p, q] / (Z[r - 1, p - 1, q + 1] + B[r - 1, p, q])

and ``d^r`` is induced by the simplicial boundary on coset representatives.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

import numpy as np

from .linalg import (
    Field,
    LinalgError,
    LinearMap,
    QuotientSpace,
    Subspace,
    image,
    induced_map,
    inverse,
    kernel,
    preimage,
    quotient,
)
from .maps import SimplicialMap, bigraded_indices
from .simplicial import boundary_matrix, homology


class ConvergenceError(AssertionError):
    pass


@dataclass(frozen=True, eq=False)
class PageEntry:
    r: int
    p: int
    q: int
    space: QuotientSpace

    @property
    def dim(self) -> int:
        return self.space.dim


@dataclass(eq=False)
class Page:
    r: int
    entries: dict[tuple[int, int], PageEntry]
    differentials: dict[tuple[int, int], LinearMap]

    def dim(self, p: int, q: int) -> int:
        e = self.entries.get((p, q))
        return 0 if e is None else e.dim

    def rank(self, p: int, q: int) -> int:
        d = self.differentials.get((p, q))
        return 0 if d is None else d.rank

    def dims(self) -> dict[tuple[int, int], int]:
        return {k: e.dim for k, e in self.entries.items()}


@dataclass(eq=False)
class PageTurn:
    """Homology of ``(E^r, d^r)`` and its identification with ``E^{r+1}``.

    ``homology[(p, q)]`` is ``ker d / im d`` inside the coordinate space of
    ``E^r_{p,q}``; ``iso[(p, q)]`` is the matrix of the identification from
    those homology classes onto the coordinates of ``E^{r+1}_{p,q}``.
    """

    r: int
    homology: dict[tuple[int, int], QuotientSpace] = dc_field(default_factory=dict)
    iso: dict[tuple[int, int], np.ndarray] = dc_field(default_factory=dict)

    def dims(self) -> dict[tuple[int, int], int]:
        return {k: h.dim for k, h in self.homology.items()}


class LeraySpectralSequence:
    """Lazily computed pages of the Leray spectral sequence of ``f`` over ``field``.

    All cached values are immutable once computed, so one instance can be
    shared freely.
    """

    def __init__(self, f: SimplicialMap, field: Field):
        self.f = f
        self.field = field
        self.X = f.domain
        self.m = f.codomain.dim
        self._x: dict[tuple[int, int], Subspace] = {}
        self._z: dict[tuple[int, int, int], Subspace] = {}
        self._b: dict[tuple[int, int, int], Subspace] = {}
        self._e: dict[tuple[int, int, int], PageEntry] = {}
        self._d: dict[tuple[int, int, int], LinearMap] = {}

    # -- chain level --------------------------------------------------------

    def ambient(self, n: int) -> int:
        return self.X.count(n) if n >= 0 else 0

    @cached_property
    def _boundaries(self) -> dict[int, np.ndarray]:
        out = {}
        for n in range(0, self.X.dim + 2):
            if n <= self.X.dim:
                out[n] = boundary_matrix(self.X, n, self.field)
            else:
                out[n] = self.field.zeros(self.X.count(n - 1), 0)
        return out

    def boundary(self, n: int) -> np.ndarray:
        """``C_n -> C_{n-1}`` for any integer n (zero-sized outside the complex)."""
        if n in self._boundaries:
            return self._boundaries[n]
        return self.field.zeros(self.ambient(n - 1), self.ambient(n))

    def filtered(self, p: int, q: int) -> Subspace:
        """The coordinate subspace ``X[p, q]`` of ``C_{p+q}``."""
        key = (p, q)
        if key not in self._x:
            n = p + q
            ambient = self.ambient(n)
            if p >= self.m and ambient:
                self._x[key] = Subspace.full(self.field, ambient)
            else:
                self._x[key] = Subspace.coordinate(self.field, ambient, bigraded_indices(self.f, p, q))
        return self._x[key]

    def cycles(self, r: int, p: int, q: int) -> Subspace:
        """``Z^r_{p,q}``; r = -1 is allowed as it appears in the denominator of ``E^0``."""
        key = (r, p, q)
        if key not in self._z:
            n = p + q
            pre = preimage(self.boundary(n), self.filtered(p - r, q + r - 1))
            self._z[key] = pre & self.filtered(p, q)
        return self._z[key]

    def boundaries(self, r: int, p: int, q: int) -> Subspace:
        """``B^r_{p,q}``."""
        key = (r, p, q)
        if key not in self._b:
            n = p + q
            img = image(self.boundary(n + 1), self.field, self.filtered(p + r, q - r + 1))
            self._b[key] = img & self.filtered(p, q)
        return self._b[key]

    # -- pages ----------------------------------------------------------------

    def support(self) -> list[tuple[int, int]]:
        """Bidegrees ``0 <= p <= m``, ``0 <= p + q <= dim X`` (everything else is zero)."""
        return [(p, n - p) for p in range(self.m + 1) for n in range(self.X.dim + 1)]

    def entry(self, r: int, p: int, q: int) -> PageEntry:
        if r < 0:
            raise ValueError("page index must be >= 0")
        key = (r, p, q)
        if key not in self._e:
            den = self.cycles(r - 1, p - 1, q + 1) + self.boundaries(r - 1, p, q)
            self._e[key] = PageEntry(r, p, q, quotient(self.cycles(r, p, q), den))
        return self._e[key]

    def differential(self, r: int, p: int, q: int) -> LinearMap:
        """``d^r_{p,q}: E^r_{p,q} -> E^r_{p-r, q+r-1}``."""
        key = (r, p, q)
        if key not in self._d:
            src = self.entry(r, p, q)
            dst = self.entry(r, p - r, q + r - 1)
            self._d[key] = induced_map(self.boundary(p + q), src.space, dst.space)
        return self._d[key]

    def page(self, r: int) -> Page:
        keys = self.support()
        return Page(
            r,
            {k: self.entry(r, *k) for k in keys},
            {k: self.differential(r, *k) for k in keys},
        )

    def dims(self, r: int) -> dict[tuple[int, int], int]:
        return {k: self.entry(r, *k).dim for k in self.support()}

    # -- page turning ---------------------------------------------------------

    def turn_page(self, page: Page) -> tuple[Page, PageTurn]:
        """Homology of ``(E^r, d^r)`` computed from the page's own matrices, and
        the identification of each homology group with ``E^{r+1}`` computed at
        chain level."""
        r = page.r
        field = self.field
        turn = PageTurn(r)
        nxt = self.page(r + 1)
        for (p, q) in self.support():
            e = self.entry(r, p, q)
            out_d = self.differential(r, p, q)
            in_d = self.differential(r, p + r, q - r + 1)
            ker = kernel(out_d.matrix, field, ncols=e.dim)
            img = image(in_d.matrix, field)
            h = quotient(ker, img)
            turn.homology[(p, q)] = h
            target = nxt.entries[(p, q)]
            # E^{r+1} reps -> classes in E^r -> homology classes; that map is the inverse iso
            coords = e.space.coordinates(target.space.reps) if target.dim else field.zeros(0, e.dim)
            back = h.coordinates(coords).T if target.dim else field.zeros(h.dim, 0)
            if back.shape[0] != back.shape[1]:
                raise LinalgError(
                    f"page {r + 1} entry ({p},{q}) has dim {target.dim} but homology of page {r} has dim {h.dim}"
                )
            turn.iso[(p, q)] = inverse(back, field) if h.dim else back
            self._check_turn(e, target, h, turn.iso[(p, q)], self.boundaries(r, p, q))
        return nxt, turn

    def _check_turn(self, e: PageEntry, target: PageEntry, h: QuotientSpace, iso: np.ndarray, b_r: Subspace):
        if h.dim == 0:
            return
        field = self.field
        # chain(xi h) - chain(h) must lie in the old denominator plus B^r
        slack = e.space.denominator + b_r
        old = e.space.lift(h.reps)
        new = target.space.lift(iso.T)
        if not slack.contains_vectors(field.normalize(new - old)):
            raise LinalgError(f"page-turn identification at ({e.p},{e.q}) is inconsistent")

    def pages(self, upto: int) -> list[Page]:
        return [self.page(r) for r in range(upto + 1)]

    def limit_page(self) -> Page:
        """Page ``m + 1``, after checking that ``d^r`` vanishes for ``r = m+1, m+2``."""
        self.verify_convergence()
        return self.page(self.m + 1)

    def verify_convergence(self, extra: int = 1) -> None:
        for r in range(self.m + 1, self.m + 2 + extra):
            for (p, q) in self.support():
                d = self.differential(r, p, q)
                if not d.is_zero():
                    raise ConvergenceError(f"d^{r}_({p},{q}) is nonzero")

    def verify_square_zero(self, r: int) -> None:
        for (p, q) in self.support():
            first = self.differential(r, p, q)
            second = self.differential(r, p - r, q + r - 1)
            if np.any(self.field.matmul(second.matrix, first.matrix)):
                raise ConvergenceError(f"d^{r} o d^{r} != 0 at ({p},{q})")

    def total_homology(self, k: int) -> tuple[int, list[int]]:
        """``sum_p dim E^{m+1}_{p, k-p}`` and the per-p summands, ``p = 0..k``."""
        r = self.m + 1
        parts = [self.entry(r, p, k - p).dim if p <= self.m else 0 for p in range(k + 1)]
        return sum(parts), parts

    def check_total_homology(self, k: int) -> tuple[int, int]:
        """``(spectral, oracle)`` dims of ``H_k(X)``."""
        return self.total_homology(k)[0], homology(self.X, k, self.field)[0]


def spectral_sequence(f: SimplicialMap, field: Field) -> LeraySpectralSequence:
    return LeraySpectralSequence(f, field)
