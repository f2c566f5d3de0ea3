"""Reeb spaces of simplicial maps.

Two simplices of ``X`` are identified when they have the same image ``tau``
and lie in the same connected component of the onto-fiber over ``tau``.
Each such block becomes one cell of dimension ``dim tau``; its faces are the
blocks holding the corresponding faces of any member.  That always gives a
Delta-complex.  It is a simplicial complex only when no two cells share a
vertex set, which fails for many ordinary maps (two fiber-disjoint edges over
the same edge of ``Y`` whose endpoints are fiber-connected give a double
edge), so the simplicial view is validated rather than assumed.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np

from .cosheaf import LerayData
from .linalg import Field, rank
from .maps import SimplicialMap
from .simplicial import Simplex, SimplicialComplex, faces, homology_dims

Cell = tuple  # (tau, block index)


class ReebError(ValueError):
    """The identified simplices do not assemble into a simplicial complex."""

    def __init__(self, message: str, blocks=()):
        super().__init__(message)
        self.blocks = list(blocks)


class ReebHomologyViolation(AssertionError):
    pass


def fiber_components(f: SimplicialMap, tau: Simplex) -> list[tuple[Simplex, ...]]:
    """Components of the onto-fiber over ``tau`` under the face relation, sorted."""
    over = f.fibers.over(tuple(tau))
    g = nx.Graph()
    g.add_nodes_from(over)
    members = set(over)
    for s in over:
        for face in faces(s):
            if face in members:
                g.add_edge(s, face)
    comps = [tuple(sorted(c, key=lambda s: (len(s), s))) for c in nx.connected_components(g)]
    return sorted(comps, key=lambda c: c[0])


def restrict(f: SimplicialMap, sigma: Simplex, tau_face: Simplex) -> Simplex:
    """The face of ``sigma`` lying over ``tau_face``."""
    return tuple(u for u in sigma if f.vertex_map[u] in tau_face)


class ReebCells:
    """The quotient ``X / ~`` as a Delta-complex over ``Y``.

    ``cell_faces[c][i]`` is the cell obtained by dropping the i-th vertex of
    the image ``tau`` of ``c``.
    """

    def __init__(self, f: SimplicialMap):
        self.f = f
        Y = f.codomain
        self.blocks = {tau: fiber_components(f, tau) for tau in Y.simplices()}
        self.block_of: dict[Simplex, Cell] = {}
        for tau, comps in self.blocks.items():
            for idx, comp in enumerate(comps):
                for s in comp:
                    self.block_of[s] = (tau, idx)
        self.cell_faces: dict[Cell, tuple[Cell, ...]] = {}
        for tau, comps in self.blocks.items():
            for idx, comp in enumerate(comps):
                seen = None
                for s in comp:
                    fs = tuple(self.block_of[restrict(f, s, t)] for t in faces(tau)) if len(tau) > 1 else ()
                    if seen is None:
                        seen = fs
                    elif fs != seen:
                        raise ReebError(f"faces of block {idx} over {list(tau)} are not well defined", [(tau, comp)])
                self.cell_faces[(tau, idx)] = seen

    def cells(self, d: int | None = None) -> list[Cell]:
        return [c for c in self.cell_faces if d is None or len(c[0]) - 1 == d]

    @property
    def dim(self) -> int:
        return max((len(c[0]) - 1 for c in self.cell_faces), default=-1)

    def vertices_of(self, cell: Cell) -> tuple[Cell, ...]:
        tau, _ = cell
        if len(tau) == 1:
            return (cell,)
        out = []
        for v in tau:
            c = cell
            while len(c[0]) > 1:
                c = self.cell_faces[c][[i for i, t in enumerate(faces(c[0])) if v in t][0]]
            out.append(c)
        return tuple(out)

    def boundary_matrix(self, d: int, field: Field) -> np.ndarray:
        rows, cols = self.cells(d - 1), self.cells(d)
        m = field.zeros(len(rows), len(cols))
        if d == 0:
            return m
        pos = {c: i for i, c in enumerate(rows)}
        for j, c in enumerate(cols):
            for i, face in enumerate(self.cell_faces[c]):
                m[pos[face], j] = field.normalize(m[pos[face], j] + (1 if i % 2 == 0 else -1))
        return field.normalize(m)

    def homology_dims(self, field: Field) -> list[int]:
        ranks = {d: rank(self.boundary_matrix(d, field), field) for d in range(1, self.dim + 1)}
        return [len(self.cells(d)) - ranks.get(d, 0) - ranks.get(d + 1, 0) for d in range(self.dim + 1)]

    @cached_property
    def shared_vertex_sets(self) -> list[list[Cell]]:
        """Groups of distinct cells with the same vertex set (empty iff simplicial)."""
        groups: dict[tuple, list[Cell]] = {}
        for c in self.cell_faces:
            groups.setdefault(self.vertices_of(c), []).append(c)
        return [g for g in groups.values() if len(g) > 1]

    @property
    def is_simplicial(self) -> bool:
        return not self.shared_vertex_sets


@dataclass(eq=False)
class ReebSpace:
    f: SimplicialMap
    cells: ReebCells
    quotient: SimplicialComplex
    projection: dict[Simplex, Simplex]
    induced_map: SimplicialMap

    @property
    def blocks(self) -> dict[Simplex, list[tuple[Simplex, ...]]]:
        return self.cells.blocks

    def block_count(self, tau: Simplex) -> int:
        return len(self.blocks[tuple(tau)])

    def check_commutes(self) -> None:
        for s, t in self.projection.items():
            if self.induced_map(t) != self.f(s):
                raise ReebError(f"f~(projection({list(s)})) = {list(self.induced_map(t))} != f = {list(self.f(s))}")


def reeb_cells(f: SimplicialMap) -> ReebCells:
    return ReebCells(f)


def reeb_space(f: SimplicialMap, cells: ReebCells | None = None) -> ReebSpace:
    """The Reeb space as a simplicial complex with the induced map to ``Y``.

    Raises :class:`ReebError` naming the offending blocks when two blocks end
    up with the same vertex set.
    """
    cells = ReebCells(f) if cells is None else cells
    if cells.shared_vertex_sets:
        group = cells.shared_vertex_sets[0]
        tau = group[0][0]
        raise ReebError(
            f"{len(group)} blocks over {list(tau)} share one vertex set, so the quotient is not a simplicial complex",
            [(c[0], cells.blocks[c[0]][c[1]]) for c in group],
        )
    vid = {c: i for i, c in enumerate(cells.cells(0))}
    vmap = {i: c[0][0] for c, i in vid.items()}
    simplex_of = {c: tuple(sorted(vid[v] for v in cells.vertices_of(c))) for c in cells.cell_faces}
    Q = SimplicialComplex(simplex_of.values())
    projection = {s: simplex_of[c] for s, c in cells.block_of.items()}
    return ReebSpace(f, cells, Q, projection, SimplicialMap(Q, f.codomain, vmap))


def check_idempotent(r: ReebSpace) -> None:
    """The Reeb space of ``f~`` is ``X^f`` itself, vertex for vertex."""
    again = reeb_space(r.induced_map)
    relabel = {s[0]: cell[0] for s, cell in again.projection.items() if len(s) == 1}
    if set(r.quotient.relabel(relabel).simplices()) != set(again.quotient.simplices()):
        raise ReebError("the Reeb space of the induced map differs from the Reeb space")
    if any(len(c) != 1 for comps in again.blocks.values() for c in comps):
        raise ReebError("fibers of the induced map are not single simplices")


def check_component_correspondence(r: ReebSpace, field: Field, data: LerayData | None = None) -> None:
    """Blocks over each ``tau`` match, and ``L_0`` of ``f`` and ``f~`` agree in dims and ranks."""
    for tau, comps in r.blocks.items():
        n = len(fiber_components(r.induced_map, tau))
        if n != len(comps):
            raise ReebError(f"{len(comps)} components over {list(tau)} for f but {n} for f~")
    a = (LerayData(r.f, field) if data is None else data).cosheaf(0)
    b = LerayData(r.induced_map, field).cosheaf(0)
    if a.dims != b.dims or a.relation_ranks() != b.relation_ranks():
        raise ReebError("L_0 of f and of f~ differ")


@dataclass
class ReebReport:
    field: Field
    domain: list[int]
    reeb: list[int]
    blocks: dict[Simplex, int]
    simplicial: bool

    def dim(self, which: str, k: int) -> int:
        dims = self.domain if which == "domain" else self.reeb
        return dims[k] if k < len(dims) else 0

    @property
    def h0_equal(self) -> bool:
        return self.dim("domain", 0) == self.dim("reeb", 0)

    @property
    def h1_bounded(self) -> bool:
        return self.dim("reeb", 1) <= self.dim("domain", 1)

    @property
    def ok(self) -> bool:
        return self.h0_equal and self.h1_bounded

    def table(self) -> str:
        top = max(len(self.domain), len(self.reeb))
        lines = ["  k   H_k(X)   H_k(X^f)"]
        for k in range(top):
            note = ""
            if k == 0:
                note = "  equal" if self.h0_equal else "  VIOLATION: must be equal"
            elif k == 1:
                note = "  <=" if self.h1_bounded else "  VIOLATION: must be <="
            lines.append(f"  {k:<3} {self.dim('domain', k):<8} {self.dim('reeb', k):<8}{note}".rstrip())
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "field": self.field.name,
            "homology": {"domain": self.domain, "reeb": self.reeb},
            "h0_equal": self.h0_equal,
            "h1_bounded": self.h1_bounded,
            "simplicial": self.simplicial,
            "blocks": [{"tau": list(t), "count": n} for t, n in sorted(self.blocks.items(), key=lambda kv: (len(kv[0]), kv[0]))],
        }


def reeb_compare(f: SimplicialMap, field: Field, cells: ReebCells | None = None, strict: bool = True) -> ReebReport:
    """Homology of ``X`` against the quotient; raises :class:`ReebHomologyViolation` unless ``strict`` is off.

    The quotient's homology is taken from its Delta-complex structure, so the
    comparison is defined even when the quotient is not simplicial.
    """
    cells = ReebCells(f) if cells is None else cells
    rep = ReebReport(
        field,
        homology_dims(f.domain, field),
        cells.homology_dims(field),
        {tau: len(c) for tau, c in cells.blocks.items()},
        cells.is_simplicial,
    )
    if strict and not rep.ok:
        raise ReebHomologyViolation("Reeb space homology comparison failed:\n" + rep.table())
    return rep
