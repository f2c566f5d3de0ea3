"""Small maps with known answers, used by tests and the command line examples."""
from __future__ import annotations

from .maps import SimplicialMap, identity_map
from .simplicial import SimplicialComplex, close_under_faces

WITNESS_TRIANGLES = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 5), (2, 4, 5)]


def tetrahedron_boundary(vertices=(0, 1, 2, 3)) -> SimplicialComplex:
    a, b, c, d = vertices
    return close_under_faces([(a, b, c), (a, b, d), (a, c, d), (b, c, d)])


def witness_map() -> SimplicialMap:
    """Seven triangles on u0..u5 over the boundary of a tetrahedron on v0..v3.

    u3, u4, u5 all go to v3, so the fiber over v3 is a 3-cycle; the Reeb
    space closes up into a 2-sphere although ``X`` itself has no 2-cycle.
    """
    X = close_under_faces(WITNESS_TRIANGLES)
    return SimplicialMap(X, tetrahedron_boundary(), {0: 0, 1: 1, 2: 2, 3: 3, 4: 3, 5: 3})


def square_circle_map() -> SimplicialMap:
    """The 4-cycle a,b,c,d (ids 0..3) folded onto the path v0 - v1 - v2."""
    X = close_under_faces([(0, 1), (1, 2), (2, 3), (0, 3)])
    Y = close_under_faces([(0, 1), (1, 2)])
    return SimplicialMap(X, Y, {0: 0, 1: 1, 3: 1, 2: 2})


def hollow_triangle() -> SimplicialComplex:
    return close_under_faces([(0, 1), (1, 2), (0, 2)])


def hollow_triangle_identity() -> SimplicialMap:
    return identity_map(hollow_triangle())
