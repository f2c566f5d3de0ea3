import pytest

from leray.maps import MapViolation, SimplicialMap, bigraded_indices, constant_map, fiber, identity_map
from leray.simplicial import close_under_faces


def test_non_simplicial_assignment_is_rejected():
    X = close_under_faces([(0, 1)])
    Y = close_under_faces([(0,), (1,), (2,)])
    with pytest.raises(MapViolation) as exc:
        SimplicialMap(X, Y, {0: 0, 1: 2})
    assert exc.value.simplex == (0, 1)
    assert exc.value.image == (0, 2)


def test_missing_vertex_is_rejected():
    X = close_under_faces([(0, 1)])
    with pytest.raises(ValueError):
        SimplicialMap(X, X, {0: 0})


def test_identity_fibers(triangle):
    f = identity_map(triangle)
    for tau in triangle.simplices():
        assert fiber(f, tau, 0) == (tau,)
        assert fiber(f, tau, 1) == ()


def test_constant_map_fiber(triangle):
    f = constant_map(triangle, 7)
    assert fiber(f, (7,), 1) == ((0, 1), (0, 2), (1, 2))
    assert fiber(f, (7,), 0) == ((0,), (1,), (2,))


def test_witness_fiber_over_v3(witness):
    assert fiber(witness, (3,), 1) == ((3, 4), (3, 5), (4, 5))
    assert fiber(witness, (3,), 0) == ((3,), (4,), (5,))
    assert witness.fibers.max_offset((3,)) == 1
    assert witness.fibers.total() == len(witness.domain)


def test_witness_bigraded_subspace(witness):
    X = witness.domain
    tris = [X.simplices(2)[i] for i in bigraded_indices(witness, 1, 1)]
    assert tris == [(1, 3, 4), (2, 3, 5), (2, 4, 5)]
    assert len(bigraded_indices(witness, 2, 0)) == 7


def test_negative_offset_rejected(witness):
    with pytest.raises(ValueError):
        fiber(witness, (0,), -1)
    with pytest.raises(KeyError):
        fiber(witness, (0, 9), 0)
