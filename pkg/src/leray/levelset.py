"""Cosheaves over a triangulated segment and their barcodes.

A cosheaf on the path ``v_0 - v_1 - ... - v_n`` is a zigzag module

    V(v_0) <- V(e_0) -> V(v_1) <- V(e_1) -> ... -> V(v_n)

Positions along the zigzag are numbered ``0 .. 2n``: ``v_i`` sits at ``2i`` and
``e_i`` at ``2i + 1``.  A bar is a position interval ``[s, t]``; an even end
is a closed vertex end, an odd end an open one.
"""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import total_ordering

import networkx as nx
import numpy as np

from .cosheaf import Cosheaf, LerayData, cosheaf_homology
from .linalg import Field, LinalgError, Subspace, image, inverse, kernel, preimage, rank, rref
from .simplicial import Simplex, SimplicialComplex, close_under_faces

KINDS = ("closed", "closed_open", "open", "open_closed")
_BRACKETS = {"closed": "[]", "closed_open": "[)", "open": "()", "open_closed": "(]"}
_TABLE = {"closed": (1, 0), "closed_open": (0, 0), "open": (0, 1), "open_closed": (0, 0)}


class NotALine(ValueError):
    pass


class DecompositionError(LinalgError):
    """The computed barcode disagrees with the rank invariant of its input."""


@dataclass(frozen=True)
class LineTriangulation:
    """Vertices of a path in order; ``edges[i]`` joins ``vertices[i]`` and ``vertices[i+1]``."""

    vertices: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.vertices) - 1

    @property
    def edges(self) -> tuple[Simplex, ...]:
        v = self.vertices
        return tuple(tuple(sorted((v[i], v[i + 1]))) for i in range(self.n))

    @property
    def length(self) -> int:
        """Number of zigzag positions."""
        return 2 * self.n + 1

    def simplex_at(self, pos: int) -> Simplex:
        if pos % 2 == 0:
            return (self.vertices[pos // 2],)
        return self.edges[pos // 2]

    def complex(self) -> SimplicialComplex:
        return close_under_faces([(v,) for v in self.vertices] + list(self.edges))

    @classmethod
    def path(cls, n: int) -> "LineTriangulation":
        return cls(tuple(range(n + 1)))

    @classmethod
    def of(cls, Y: SimplicialComplex) -> "LineTriangulation":
        """Recognise ``Y`` as a path; the walk starts at the endpoint with the smaller id."""
        if len(Y) == 0:
            raise NotALine("the empty complex is not a line")
        if Y.dim > 1:
            raise NotALine(f"complex has dimension {Y.dim}")
        g = nx.Graph()
        g.add_nodes_from(Y.vertices)
        g.add_edges_from(Y.simplices(1))
        if not nx.is_connected(g):
            raise NotALine("complex is not connected")
        if g.number_of_nodes() == 1:
            return cls(tuple(g.nodes))
        degrees = dict(g.degree)
        ends = sorted(v for v, d in degrees.items() if d == 1)
        if len(ends) != 2 or any(d > 2 for d in degrees.values()):
            raise NotALine("complex is not a path graph")
        order = [ends[0]]
        prev = None
        while len(order) < g.number_of_nodes():
            nxt = [u for u in g.neighbors(order[-1]) if u != prev]
            prev = order[-1]
            order.append(nxt[0])
        return cls(tuple(order))


@total_ordering
@dataclass(frozen=True)
class IntervalCosheaf:
    """The bar ``kind`` between vertex indices ``a <= b``: ``k`` on its support, 0 elsewhere."""

    kind: str
    a: int
    b: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown bar kind {self.kind!r}")
        if self.a < 0 or self.a > self.b:
            raise ValueError(f"bar endpoints must satisfy 0 <= a <= b, got {self.a}, {self.b}")
        if self.a == self.b and self.kind != "closed":
            raise ValueError(f"the {self.kind} bar on ({self.a},{self.a}) is empty")

    @classmethod
    def from_positions(cls, s: int, t: int) -> "IntervalCosheaf":
        left = "closed" if s % 2 == 0 else "open"
        right = "closed" if t % 2 == 0 else "open"
        kind = left if left == right else f"{left}_{right}"
        return cls(kind, s // 2, (t + 1) // 2)

    @property
    def positions(self) -> tuple[int, int]:
        s = 2 * self.a if self.kind in ("closed", "closed_open") else 2 * self.a + 1
        t = 2 * self.b if self.kind in ("closed", "open_closed") else 2 * self.b - 1
        return s, t

    def covers(self, s: int, t: int) -> bool:
        lo, hi = self.positions
        return lo <= s and t <= hi

    def support(self, line: LineTriangulation) -> list[Simplex]:
        lo, hi = self.positions
        if hi > 2 * line.n:
            raise ValueError(f"bar {self} does not fit on a line with {line.n} edges")
        return [line.simplex_at(k) for k in range(lo, hi + 1)]

    def to_cosheaf(self, line: LineTriangulation, field: Field) -> Cosheaf:
        supp = set(self.support(line))
        dims = {t: 1 for t in supp}
        maps = {(e, v): field.eye(1) for e in supp if len(e) == 2 for v in supp if len(v) == 1 and v[0] in e}
        return Cosheaf(line.complex(), dims, maps, field)

    def homology(self) -> tuple[int, int]:
        return bar_homology(self.kind, self.a, self.b)

    def _key(self):
        return (self.a, self.b, KINDS.index(self.kind))

    def __lt__(self, other):
        return self._key() < other._key()

    def __str__(self):
        lb, rb = _BRACKETS[self.kind]
        return f"{lb}{self.a},{self.b}{rb}"


class Barcode:
    """A multiset of bars."""

    def __init__(self, bars=()):
        self.counts: Counter = Counter(bars)

    def __iter__(self):
        for bar in sorted(self.counts):
            yield bar, self.counts[bar]

    def __len__(self):
        return sum(self.counts.values())

    def __eq__(self, other):
        return isinstance(other, Barcode) and self.counts == other.counts

    def __repr__(self):
        return "Barcode(" + ", ".join(f"{b}x{m}" if m > 1 else str(b) for b, m in self) + ")"

    def count(self, kind: str) -> int:
        return sum(m for b, m in self.counts.items() if b.kind == kind)

    def rank(self, s: int, t: int) -> int:
        """Number of bars covering positions ``s .. t``."""
        return sum(m for b, m in self.counts.items() if b.covers(s, t))

    def dims(self, length: int) -> list[int]:
        return [self.rank(k, k) for k in range(length)]

    def to_json(self) -> list[dict]:
        return [{"kind": b.kind, "a": b.a, "b": b.b, "multiplicity": m} for b, m in self]

    @classmethod
    def from_json(cls, items) -> "Barcode":
        bars = Counter()
        for it in items:
            bars[IntervalCosheaf(it["kind"], int(it["a"]), int(it["b"]))] += int(it.get("multiplicity", 1))
        return cls(bars.elements())

    def table(self) -> str:
        if not self.counts:
            return "  (empty)"
        return "\n".join(f"  {str(b):<10} x{m}" for b, m in self)


# --- zigzag modules -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Zigzag:
    """``arrows[k]`` is the matrix between positions ``k`` and ``k+1``, always from
    the odd (edge) position to the even (vertex) one."""

    field: Field
    dims: tuple[int, ...]
    arrows: tuple[np.ndarray, ...]

    @property
    def length(self) -> int:
        return len(self.dims)

    @staticmethod
    def forward(k: int) -> bool:
        """Does the arrow between ``k`` and ``k+1`` point right?"""
        return k % 2 == 1


def zigzag_of(L: Cosheaf, line: LineTriangulation | None = None) -> Zigzag:
    line = LineTriangulation.of(L.Y) if line is None else line
    if set(line.complex().simplices()) != set(L.Y.simplices()):
        raise NotALine("the cosheaf does not live on this line")
    dims = tuple(L[line.simplex_at(k)] for k in range(line.length))
    arrows = []
    for i, e in enumerate(line.edges):
        arrows.append(L.map(e, (line.vertices[i],)))
        arrows.append(L.map(e, (line.vertices[i + 1],)))
    return Zigzag(L.field, dims, tuple(arrows))


def _order_key(birth: int):
    # v_y += c v_x is a module automorphism when x sorts before y
    return (0, -birth) if birth % 2 else (1, birth)


def decompose_zigzag(z: Zigzag) -> list[tuple[int, int]]:
    """Position intervals of the interval summands, by left-to-right reduction."""
    field = z.field
    if not z.dims:
        return []
    done: list[tuple[int, int]] = []
    # live bars: (birth, vector in the current space)
    eye = field.eye(z.dims[0])
    live = [(0, eye[i]) for i in range(z.dims[0])]
    for k, m in enumerate(z.arrows):
        live.sort(key=lambda bv: _order_key(bv[0]))
        nxt_dim = z.dims[k + 1]
        if Zigzag.forward(k):
            live, dead = _push_forward(field, m, live, nxt_dim, k + 1)
        else:
            live, dead = _pull_back(field, m, live, nxt_dim, k + 1)
        done += [(b, k) for b in dead]
    done += [(b, len(z.dims) - 1) for b, _ in live]
    return sorted(done)


def _push_forward(field: Field, m: np.ndarray, live, nxt_dim: int, pos: int):
    """Apply ``m`` to every live vector, reducing each against the earlier ones."""
    kept, dead = [], []
    pivots: dict[int, np.ndarray] = {}
    for birth, v in live:
        w = field.matmul(m, v.reshape(-1, 1)).ravel() if nxt_dim else field.zeros(1, 0).ravel()
        while True:
            nz = np.flatnonzero(w)
            if nz.size == 0 or int(nz[0]) not in pivots:
                break
            c = int(nz[0])
            w = field.normalize(w - w[c] * pivots[c])
        if np.flatnonzero(w).size == 0:
            dead.append(birth)
            continue
        c = int(np.flatnonzero(w)[0])
        w = field.normalize(w * field.inv(w[c]))
        pivots[c] = w
        kept.append((birth, w))
    eye = field.eye(nxt_dim)
    kept += [(pos, eye[c]) for c in range(nxt_dim) if c not in pivots]
    return kept, dead


def _pull_back(field: Field, m: np.ndarray, live, nxt_dim: int, pos: int):
    """``m`` maps the next space into the current one; keep the bars spanning its image."""
    if not live:
        ker = kernel(m, field, ncols=nxt_dim)
        return [(pos, r) for r in ker.rows], []
    basis = np.stack([v for _, v in live], axis=1)  # columns in bar order
    # image vectors in bar coordinates
    img = image(m, field)
    if img.dim == 0:
        coords = field.zeros(0, len(live))
    else:
        coords = field.matmul(img.rows, inverse(basis, field).T)
    # echelon with pivot at the last bar in the order
    rev, piv = _rref_from_right(field, coords, len(live))
    survivors = []
    for row, p in zip(rev, piv):
        target = field.matmul(basis, row.reshape(-1, 1)).ravel()
        pre = _preimage_vector(field, m, target, nxt_dim)
        survivors.append((live[p][0], pre))
    dead = [live[i][0] for i in range(len(live)) if i not in set(piv)]
    ker = kernel(m, field, ncols=nxt_dim)
    survivors += [(pos, r) for r in ker.rows]
    return survivors, dead


def _rref_from_right(field: Field, rows: np.ndarray, n: int):
    """Row-reduce so every row's last nonzero entry is 1 and those columns are cleared."""
    if rows.shape[0] == 0:
        return [], []
    flipped, piv = rref(rows[:, ::-1], field)
    out = [r[::-1] for r in flipped]
    return out, [n - 1 - p for p in piv]


def _preimage_vector(field: Field, m: np.ndarray, target: np.ndarray, ncols: int) -> np.ndarray:
    aug = np.concatenate([np.asarray(m, dtype=field.dtype), target.reshape(-1, 1)], axis=1)
    rows, piv = rref(aug, field)
    if ncols in piv:
        raise LinalgError("vector is not in the image")
    x = field.zeros(1, ncols).ravel()
    for r, p in zip(rows, piv):
        x[p] = r[ncols]
    return x


def decompose(L: Cosheaf, line: LineTriangulation | None = None, check: bool = True) -> Barcode:
    line = LineTriangulation.of(L.Y) if line is None else line
    z = zigzag_of(L, line)
    bars = Barcode(IntervalCosheaf.from_positions(s, t) for s, t in decompose_zigzag(z))
    if check:
        check_barcode(z, bars)
    return bars


# --- the rank invariant -----------------------------------------------------------


def _block_diag(field: Field, a: int, m: np.ndarray) -> np.ndarray:
    out = field.zeros(a + m.shape[0], a + m.shape[1])
    out[:a, :a] = field.eye(a)
    out[a:, a:] = m
    return out


def rank_invariant(z: Zigzag) -> dict[tuple[int, int], int]:
    """For each ``s <= t``, the number of summands covering ``s .. t``.

    Computed from the composite relation ``R`` in ``V_s (+) V_t``: the count is
    ``dim R - dim(R & V_s (+) 0) - dim(R & 0 (+) V_t)``.
    """
    field = z.field
    out = {}
    for s in range(z.length):
        a = z.dims[s]
        rel = Subspace.from_vectors(field, 2 * a, np.concatenate([field.eye(a), field.eye(a)], axis=1))
        for t in range(s, z.length):
            if t > s:
                m = z.arrows[t - 1]
                if Zigzag.forward(t - 1):
                    rel = image(_block_diag(field, a, m), field, rel)
                else:
                    rel = preimage(_block_diag(field, a, m), rel)
            total = a + z.dims[t]
            left = Subspace.coordinate(field, total, range(a))
            right = Subspace.coordinate(field, total, range(a, total))
            out[(s, t)] = rel.dim - (rel & left).dim - (rel & right).dim
    return out


def check_barcode(z: Zigzag, bars: Barcode) -> None:
    """Pointwise dims, arrow ranks and the full rank invariant must all agree."""
    for k in range(z.length):
        if bars.rank(k, k) != z.dims[k]:
            raise DecompositionError(f"barcode has dim {bars.rank(k, k)} at position {k}, module has {z.dims[k]}")
    for k, m in enumerate(z.arrows):
        if bars.rank(k, k + 1) != rank(m, z.field):
            raise DecompositionError(f"arrow {k} -> {k + 1}: barcode rank {bars.rank(k, k + 1)} != {rank(m, z.field)}")
    for (s, t), r in rank_invariant(z).items():
        if bars.rank(s, t) != r:
            raise DecompositionError(f"rank over positions {s}..{t}: barcode {bars.rank(s, t)} != module {r}")


# --- homology ---------------------------------------------------------------------


def bar_homology(kind: str, a: int, b: int) -> tuple[int, int]:
    """``(dim H_0, dim H_1)`` of a bar cosheaf."""
    IntervalCosheaf(kind, a, b)
    return _TABLE[kind]


def recompute_bar_homology(bar: IntervalCosheaf, field: Field, n: int | None = None) -> tuple[int, int]:
    """The same pair, by running cosheaf homology on the bar as a cosheaf."""
    line = LineTriangulation.path(bar.b if n is None else n)
    L = bar.to_cosheaf(line, field)
    return cosheaf_homology(L, 0)[0], cosheaf_homology(L, 1)[0]


def homology_from_barcodes(barcodes: list[Barcode], k: int) -> int:
    """``dim H_k(X)``: closed bars of ``L_k`` plus open bars of ``L_{k-1}``."""
    total = 0
    if 0 <= k < len(barcodes):
        total += barcodes[k].count("closed")
    if 1 <= k <= len(barcodes):
        total += barcodes[k - 1].count("open")
    return total


def leray_barcodes(
    f, field: Field, top: int | None = None, workers: int = 1, check: bool = True, data: LerayData | None = None
) -> list[Barcode]:
    """Barcodes of ``L_0 .. L_top`` for a map onto a line (``top`` defaults to ``dim X``)."""
    line = LineTriangulation.of(f.codomain)
    data = LerayData(f, field) if data is None else data
    top = f.domain.dim if top is None else top
    cosheaves = [data.cosheaf(q) for q in range(top + 1)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda L: decompose(L, line, check), cosheaves))
    return [decompose(L, line, check) for L in cosheaves]
