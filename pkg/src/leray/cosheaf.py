"""Fiber chain complexes, Leray cosheaves and cosheaf homology.

Orientation of extension maps
-----------------------------
For ``tau' <= tau`` and ``sigma`` over ``tau`` with equal offsets, the
vertices ``D`` of ``sigma`` lying over ``E = tau - tau'`` are all alone.
Writing ``[sigma] = s_sigma [sigma', D]`` (``D`` listed in the order of
their images) and ``[tau] = s_tau [tau', E]``, the extension map sends
``sigma`` to ``s_sigma * s_tau * sigma'``.  This is a chain map for the
fiber boundaries and is strictly functorial; including the ``tau`` factor
is what lines the cosheaf boundary up with ``d^1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .linalg import (
    Field,
    LinalgError,
    QuotientSpace,
    Subspace,
    image,
    induced_map,
    kernel,
    quotient,
    rank,
)
from .maps import SimplicialMap
from .simplicial import Simplex, SimplicialComplex, faces, permutation_sign


class FunctorialityError(LinalgError):
    pass


class ChainMapError(LinalgError):
    pass


def entrance_morphisms(Y: SimplicialComplex) -> list[tuple[Simplex, Simplex]]:
    """Morphisms ``tau -> tau'`` of the entrance path category, one per face relation."""
    return Y.face_pairs()


@dataclass(frozen=True, eq=False)
class FiberChainComplex:
    """``F_q(tau)`` spanned by the onto-fiber simplices over ``tau`` at offset q."""

    tau: Simplex
    bases: dict[int, tuple[Simplex, ...]]
    boundary: dict[int, np.ndarray]  # q -> matrix F_q -> F_{q-1}
    field: Field

    @property
    def top(self) -> int:
        return max(self.bases, default=-1)

    def dim(self, q: int) -> int:
        return len(self.bases.get(q, ()))

    def d(self, q: int) -> np.ndarray:
        if q in self.boundary:
            return self.boundary[q]
        return self.field.zeros(self.dim(q - 1) if q >= 1 else 0, self.dim(q))

    def homology(self, q: int) -> QuotientSpace:
        z = kernel(self.d(q), self.field, ncols=self.dim(q))
        b = image(self.d(q + 1), self.field)
        return quotient(z, b)


def fiber_chain_complex(f: SimplicialMap, tau: Simplex, field: Field) -> FiberChainComplex:
    tau = tuple(tau)
    fibers = f.fibers
    top = fibers.max_offset(tau)
    bases = {q: fibers(tau, q) for q in range(top + 1)}
    bnd = {}
    for q in range(top + 1):
        rows = bases.get(q - 1, ())
        where = {s: i for i, s in enumerate(rows)}
        m = field.zeros(len(rows), len(bases[q]))
        for j, s in enumerate(bases[q]):
            for i, t in enumerate(faces(s)):
                k = where.get(t)
                if k is not None:
                    m[k, j] = field.element(-1 if i % 2 else 1)
        bnd[q] = m
    return FiberChainComplex(tau, bases, bnd, field)


def _extension_sign(f: SimplicialMap, sigma: Simplex, sub: Simplex, tau: Simplex, tau_face: Simplex) -> int:
    deleted = sorted((u for u in sigma if u not in set(sub)), key=lambda u: f.vertex_map[u])
    kept_targets = set(tau_face)
    lost = [v for v in tau if v not in kept_targets]
    return permutation_sign(list(sub) + deleted) * permutation_sign(list(tau_face) + lost)


def extension_image(f: SimplicialMap, sigma: Simplex, tau: Simplex, tau_face: Simplex) -> tuple[int, Simplex | None]:
    """``(sign, sigma')`` with ``sigma'`` the maximal face of ``sigma`` over ``tau_face``,
    or ``(0, None)`` when the offset drops."""
    keep = set(tau_face)
    sub = tuple(u for u in sigma if f.vertex_map[u] in keep)
    if len(sigma) - len(tau) != len(sub) - len(tau_face):
        return 0, None
    return _extension_sign(f, sigma, sub, tau, tau_face), sub


def extension_chain_map(
    f: SimplicialMap, tau: Simplex, tau_face: Simplex, field: Field
) -> dict[int, np.ndarray]:
    """Per-offset matrices of the chain map ``F(tau) -> F(tau_face)``."""
    tau, tau_face = tuple(tau), tuple(tau_face)
    if not set(tau_face) <= set(tau) or not tau_face:
        raise ValueError(f"{list(tau_face)} is not a face of {list(tau)}")
    fibers = f.fibers
    out = {}
    for q in range(fibers.max_offset(tau) + 1):
        src = fibers(tau, q)
        dst = fibers(tau_face, q)
        where = {s: i for i, s in enumerate(dst)}
        m = field.zeros(len(dst), len(src))
        for j, s in enumerate(src):
            sign, sub = extension_image(f, s, tau, tau_face)
            if sign:
                m[where[sub], j] = field.element(sign)
        out[q] = m
    return out


def check_chain_map(src: FiberChainComplex, dst: FiberChainComplex, maps: dict[int, np.ndarray]) -> None:
    field = src.field
    for q in range(src.top + 1):
        lower = maps.get(q - 1, field.zeros(dst.dim(q - 1), src.dim(q - 1)))
        left = field.matmul(dst.d(q), maps[q])
        right = field.matmul(lower, src.d(q))
        if not np.array_equal(left, right):
            raise ChainMapError(f"extension map {list(src.tau)} -> {list(dst.tau)} fails to commute at q={q}")


class Cosheaf:
    """A functor ``Ent(Y) -> Vect``: a dimension per simplex and a matrix per face relation.

    ``maps[(tau, tau_face)]`` has shape ``(dims[tau_face], dims[tau])``.
    Functoriality is checked on construction.
    """

    def __init__(self, Y: SimplicialComplex, dims: dict, maps: dict, field: Field, check: bool = True):
        self.Y = Y
        self.field = field
        self.dims = {tuple(t): int(dims.get(tuple(t), 0)) for t in Y.simplices()}
        self.maps: dict[tuple[Simplex, Simplex], np.ndarray] = {}
        for tau, face in Y.face_pairs():
            m = maps.get((tau, face))
            if m is None:
                m = field.eye(self.dims[tau]) if tau == face else field.zeros(self.dims[face], self.dims[tau])
            m = np.asarray(m, dtype=field.dtype)
            if m.shape != (self.dims[face], self.dims[tau]):
                raise ValueError(f"map {list(tau)} -> {list(face)} has shape {m.shape}")
            self.maps[(tau, face)] = field.normalize(m)
        if check:
            self.check_functorial()

    def __getitem__(self, tau) -> int:
        return self.dims[tuple(tau)]

    def map(self, tau: Simplex, face: Simplex) -> np.ndarray:
        return self.maps[(tuple(tau), tuple(face))]

    def check_functorial(self) -> None:
        field = self.field
        for tau in self.Y.simplices():
            if not np.array_equal(self.maps[(tau, tau)], field.eye(self.dims[tau])):
                raise FunctorialityError(f"map on {list(tau)} -> itself is not the identity")
            subs = [t for k in range(1, len(tau)) for t in combinations(tau, k)]
            for mid in subs:
                for low in subs:
                    if len(low) < len(mid) and set(low) <= set(mid):
                        direct = self.maps[(tau, low)]
                        composite = field.matmul(self.maps[(mid, low)], self.maps[(tau, mid)])
                        if not np.array_equal(direct, composite):
                            raise FunctorialityError(
                                f"maps {list(tau)} -> {list(mid)} -> {list(low)} do not compose"
                            )

    def support(self) -> list[Simplex]:
        return [t for t in self.Y.simplices() if self.dims[t]]

    def relation_ranks(self) -> dict[tuple[Simplex, Simplex], int]:
        return {k: rank(m, self.field) for k, m in self.maps.items() if k[0] != k[1]}

    @cached_property
    def chain_complex(self) -> "CosheafChainComplex":
        return cosheaf_chain_complex(self)


@dataclass(frozen=True, eq=False)
class CosheafChainComplex:
    """``C_p(Y; L) = (+)_{dim tau = p} L(tau)`` with blocks in ``Y.simplices(p)`` order."""

    cosheaf: Cosheaf
    offsets: dict[int, dict[Simplex, int]]
    sizes: dict[int, int]
    boundary: dict[int, np.ndarray]

    def d(self, p: int) -> np.ndarray:
        if p in self.boundary:
            return self.boundary[p]
        field = self.cosheaf.field
        return field.zeros(self.sizes.get(p - 1, 0), self.sizes.get(p, 0))


def cosheaf_chain_complex(L: Cosheaf) -> CosheafChainComplex:
    Y, field = L.Y, L.field
    offsets, sizes = {}, {}
    for p in range(Y.dim + 1):
        pos, total = {}, 0
        for t in Y.simplices(p):
            pos[t] = total
            total += L.dims[t]
        offsets[p], sizes[p] = pos, total
    bnd = {}
    for p in range(Y.dim + 1):
        m = field.zeros(sizes.get(p - 1, 0), sizes[p])
        if p >= 1:
            for tau in Y.simplices(p):
                if not L.dims[tau]:
                    continue
                c0 = offsets[p][tau]
                for i, face in enumerate(faces(tau)):
                    if not L.dims[face]:
                        continue
                    r0 = offsets[p - 1][face]
                    block = L.maps[(tau, face)]
                    if i % 2:
                        block = field.neg(block)
                    m[r0 : r0 + L.dims[face], c0 : c0 + L.dims[tau]] = block
        bnd[p] = m
    return CosheafChainComplex(L, offsets, sizes, bnd)


def cosheaf_homology(L: Cosheaf, p: int) -> tuple[int, QuotientSpace]:
    """``H_p(Y; L)`` with representatives in the ``C_p(Y; L)`` coordinates."""
    cc = L.chain_complex
    field = L.field
    n = cc.sizes.get(p, 0)
    if n == 0:
        h = QuotientSpace.of(Subspace.zero(field, 0))
        return 0, h
    z = kernel(cc.d(p), field, ncols=n)
    b = image(cc.d(p + 1), field)
    h = quotient(z, b)
    return h.dim, h


class LerayData:
    """Fiber chain complexes and extension maps of ``f``, computed once and shared."""

    def __init__(self, f: SimplicialMap, field: Field):
        self.f = f
        self.field = field
        self.Y = f.codomain
        self._fcc: dict[Simplex, FiberChainComplex] = {}
        self._ext: dict[tuple[Simplex, Simplex], dict[int, np.ndarray]] = {}
        self._homology: dict[tuple[Simplex, int], QuotientSpace] = {}
        self._cosheaves: dict[int, Cosheaf] = {}

    def complex(self, tau: Simplex) -> FiberChainComplex:
        tau = tuple(tau)
        if tau not in self._fcc:
            self._fcc[tau] = fiber_chain_complex(self.f, tau, self.field)
        return self._fcc[tau]

    def extension(self, tau: Simplex, face: Simplex) -> dict[int, np.ndarray]:
        key = (tuple(tau), tuple(face))
        if key not in self._ext:
            self._ext[key] = extension_chain_map(self.f, key[0], key[1], self.field)
        return self._ext[key]

    def fiber_homology(self, tau: Simplex, q: int) -> QuotientSpace:
        key = (tuple(tau), q)
        if key not in self._homology:
            self._homology[key] = self.complex(tau).homology(q)
        return self._homology[key]

    def cosheaf(self, q: int) -> Cosheaf:
        if q not in self._cosheaves:
            dims, maps = {}, {}
            for tau in self.Y.simplices():
                dims[tau] = self.fiber_homology(tau, q).dim
            for tau, face in self.Y.face_pairs():
                if tau == face:
                    continue
                src = self.fiber_homology(tau, q)
                dst = self.fiber_homology(face, q)
                ext = self.extension(tau, face).get(q)
                if ext is None:
                    ext = self.field.zeros(self.complex(face).dim(q), self.complex(tau).dim(q))
                maps[(tau, face)] = induced_map(ext, src, dst).matrix
            self._cosheaves[q] = Cosheaf(self.Y, dims, maps, self.field)
        return self._cosheaves[q]

    def check_chain_maps(self) -> None:
        for tau, face in self.Y.face_pairs():
            check_chain_map(self.complex(tau), self.complex(face), self.extension(tau, face))

    def check_functorial(self) -> None:
        """Strict functoriality of the chain-level extension maps."""
        field = self.field
        for tau in self.Y.simplices():
            subs = [t for k in range(1, len(tau)) for t in combinations(tau, k)]
            for mid in subs:
                for low in subs:
                    if len(low) < len(mid) and set(low) <= set(mid):
                        direct = self.extension(tau, low)
                        for q, m in direct.items():
                            upper = self.extension(tau, mid)[q]
                            lower = self.extension(mid, low).get(q)
                            if lower is None:
                                lower = field.zeros(m.shape[0], upper.shape[0])
                            if not np.array_equal(m, field.matmul(lower, upper)):
                                raise FunctorialityError(
                                    f"F({list(low)} <= {list(tau)}) != F({list(low)} <= {list(mid)}) o F({list(mid)} <= {list(tau)})"
                                )


def leray_cosheaf(f: SimplicialMap, q: int, field: Field) -> Cosheaf:
    if q < 0:
        raise ValueError("q must be >= 0")
    return LerayData(f, field).cosheaf(q)


def constant_cosheaf(Y: SimplicialComplex, field: Field) -> Cosheaf:
    dims = {t: 1 for t in Y.simplices()}
    maps = {(t, s): field.eye(1) for t, s in Y.face_pairs()}
    return Cosheaf(Y, dims, maps, field)


# --- comparison with the spectral sequence -------------------------------------


@dataclass(frozen=True)
class PageTwoReport:
    p: int
    q: int
    page_dim: int
    cosheaf_dim: int
    page0_match: bool
    page1_match: bool
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.page_dim == self.cosheaf_dim and self.page0_match and self.page1_match


def _fiber_projection(data: LerayData, p: int, q: int) -> tuple[np.ndarray, dict[Simplex, tuple[int, int]]]:
    """Matrix sending ``C_{p+q}(X)`` onto ``(+)_{dim tau = p} F_q(tau)`` (simplex to itself);
    chains over lower-dimensional simplices are dropped."""
    field, X = data.field, data.f.domain
    n = p + q
    blocks, total = {}, 0
    for tau in data.Y.simplices(p):
        size = data.complex(tau).dim(q)
        blocks[tau] = (total, size)
        total += size
    ambient = X.count(n) if n >= 0 else 0
    proj = field.zeros(total, ambient)
    if q >= 0:
        fibers = data.f.fibers
        for tau, (start, _) in blocks.items():
            for k, s in enumerate(fibers(tau, q)):
                proj[start + k, X.index[s]] = field.element(1)
    return proj, blocks


def _fiber_boundary(data: LerayData, blocks: dict, lower_blocks: dict, q: int) -> np.ndarray:
    field = data.field
    rows = sum(size for _, size in lower_blocks.values())
    cols = sum(size for _, size in blocks.values())
    m = field.zeros(rows, cols)
    for tau, (c0, cs) in blocks.items():
        r0, rs = lower_blocks[tau]
        if cs and rs:
            m[r0 : r0 + rs, c0 : c0 + cs] = data.complex(tau).d(q)
    return m


def _to_cosheaf_coords(data: LerayData, chains: np.ndarray, blocks: dict, q: int) -> np.ndarray:
    """Columns: coordinates in ``C_p(Y; L_q)`` of fiberwise cycles (rows of ``chains``)."""
    field = data.field
    parts = []
    for tau, (start, size) in blocks.items():
        h = data.fiber_homology(tau, q)
        if h.dim == 0:
            # still must be a cycle
            if size and chains.shape[0]:
                h.coordinates(chains[:, start : start + size])
            continue
        parts.append(h.coordinates(chains[:, start : start + size]).T)
    if not parts:
        return field.zeros(0, chains.shape[0])
    return np.concatenate(parts, axis=0)


def verify_prop2(f: SimplicialMap, p: int, q: int, field: Field, ss=None, data: LerayData | None = None) -> PageTwoReport:
    """Compare ``E^2_{p,q}`` with ``H_p(Y; L_q)``.

    Dimensions are compared directly.  At page 0 the simplex-to-itself
    identification must intertwine ``d^0`` with the fiberwise boundaries; at
    page 1 the induced identification ``nu`` must be invertible and satisfy
    ``nu d^1 = (-1)^q dL nu``.  The ``(-1)^q`` is a chain isomorphism
    (rescale ``C_p(Y; L_q)`` by ``(-1)^{pq}``), forced because extension maps
    must be chain maps.
    """
    from .spectral import LeraySpectralSequence

    ss = ss if ss is not None else LeraySpectralSequence(f, field)
    data = data if data is not None else LerayData(f, field)
    page_dim = ss.entry(2, p, q).dim
    L = data.cosheaf(q) if q >= 0 else None
    cosheaf_dim = cosheaf_homology(L, p)[0] if L is not None else 0
    detail = []

    # page 0
    proj, blocks = _fiber_projection(data, p, q)
    proj_lo, blocks_lo = _fiber_projection(data, p, q - 1)
    e0, e0_lo = ss.entry(0, p, q), ss.entry(0, p, q - 1)
    mu = field.matmul(proj, e0.space.reps.T)
    mu_lo = field.matmul(proj_lo, e0_lo.space.reps.T)
    page0 = mu.shape[0] == mu.shape[1] and rank(mu, field) == mu.shape[0]
    if page0 and q >= 0:
        d0 = ss.differential(0, p, q).matrix
        fb = _fiber_boundary(data, blocks, blocks_lo, q)
        page0 = np.array_equal(field.matmul(mu_lo, d0), field.matmul(fb, mu))
    if not page0:
        detail.append("page 0 identification fails")

    # page 1
    page1 = True
    if q >= 0:
        e1, e1_lo = ss.entry(1, p, q), ss.entry(1, p - 1, q)
        nu = _to_cosheaf_coords(data, field.matmul(e1.space.reps, proj.T), blocks, q)
        page1 = nu.shape[0] == nu.shape[1] == e1.dim and rank(nu, field) == e1.dim
        if page1:
            proj_p1, blocks_p1 = _fiber_projection(data, p - 1, q)
            nu_lo = _to_cosheaf_coords(data, field.matmul(e1_lo.space.reps, proj_p1.T), blocks_p1, q)
            d1 = ss.differential(1, p, q).matrix
            dl = L.chain_complex.d(p)
            if q % 2:
                dl = field.neg(dl)
            page1 = np.array_equal(field.matmul(nu_lo, d1), field.matmul(dl, nu))
        if not page1:
            detail.append("page 1 identification fails")
    if page_dim != cosheaf_dim:
        detail.append(f"dim E^2 = {page_dim} but dim H_p(Y; L_q) = {cosheaf_dim}")
    return PageTwoReport(p, q, page_dim, cosheaf_dim, page0, page1, "; ".join(detail))
