from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from leray.linalg import (
    DimensionMismatch,
    Field,
    LinalgError,
    NotContained,
    QuotientSpace,
    Subspace,
    WellDefinednessError,
    image,
    induced_map,
    intersect,
    inverse,
    kernel,
    preimage,
    quotient,
    rank,
    reduce,
    rref,
)

from oracles import F2, codes, preimage_codes, span_codes

P = Field(5)
QQ = Field(None)
BIG = Field(2_147_483_647)


def test_field_parse_and_names():
    assert Field.parse("F2") == Field(2)
    assert Field.parse("F7").modulus == 7
    assert Field.parse("Q").is_rational
    assert Field(5).name == "F5" and QQ.name == "Q"
    with pytest.raises(ValueError):
        Field.parse("F4")
    with pytest.raises(ValueError):
        Field.parse("R")


def test_element_handles_fractions():
    assert P.element(Fraction(1, 2)) == 3
    assert P.element(-1) == 4
    assert QQ.element(Fraction(1, 3)) * 3 == 1


def test_large_prime_uses_exact_objects():
    assert BIG.dtype is object
    m = BIG.array([[2, 3], [4, 6]])
    assert rank(m, BIG) == 1
    inv = inverse(BIG.array([[3, 1], [1, 2]]), BIG)
    assert np.array_equal(BIG.matmul(inv, BIG.array([[3, 1], [1, 2]])), BIG.eye(2))


def test_rref_example():
    rows, piv = rref(QQ.array([[2, 4, 2], [1, 2, 3]]), QQ)
    assert piv == (0, 2)
    assert rows.tolist() == [[1, 2, 0], [0, 0, 1]]


def test_reduce_is_column_echelon():
    m = P.array([[1, 2], [2, 4], [0, 1]])
    e, r, piv = reduce(m, P)
    assert r == 2
    assert piv == (0, 2)
    assert e[0, 0] == 1 and e[0, 1] == 0


def test_rational_inverse_is_exact():
    n = 5
    h = QQ.array([[Fraction(1, i + j + 1) for j in range(n)] for i in range(n)])
    inv = inverse(h, QQ)
    assert np.array_equal(QQ.matmul(h, inv), QQ.eye(n))
    assert inv[0, 0] == 25


def test_singular_inverse_raises():
    with pytest.raises(LinalgError):
        inverse(P.array([[1, 2], [2, 4]]), P)


def test_kernel_and_image_rank_nullity(field):
    rng = np.random.default_rng(3)
    for _ in range(20):
        m = field.array(rng.integers(-2, 3, size=(4, 6)))
        k = kernel(m, field)
        im = image(m, field)
        assert k.dim + im.dim == 6
        assert not np.any(field.matmul(m, k.basis))


def test_subspace_equality_is_canonical(field):
    a = Subspace.from_vectors(field, 3, field.array([[1, 1, 0], [0, 1, 1]]))
    b = Subspace.from_vectors(field, 3, field.array([[1, 2, 1], [0, 1, 1], [1, 3, 2]]))
    assert a == b
    assert np.array_equal(a.rows, b.rows)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Subspace.full(P, 2) + Subspace.full(P, 3)


def test_zero_ambient():
    z = Subspace.zero(P, 0)
    assert z.dim == 0 and (z + z).dim == 0 and (z & z).dim == 0
    assert kernel(P.zeros(0, 0), P, ncols=0).dim == 0


def test_preimage_small():
    m = P.array([[1, 0, 0], [0, 1, 0]])
    w = Subspace.from_vectors(P, 2, P.array([[1, 1]]))
    pre = preimage(m, w)
    assert pre.dim == 2
    assert pre.contains_vectors(P.array([[0, 0, 1], [1, 1, 0]]))


def test_quotient_coordinates_roundtrip(field):
    num = Subspace.full(field, 4)
    den = Subspace.from_vectors(field, 4, field.array([[1, 1, 0, 0]]))
    q = quotient(num, den)
    assert q.dim == 3
    coords = field.array([[1, 2, 3]])
    assert np.array_equal(q.coordinates(q.lift(coords)), coords)
    assert not np.any(q.coordinates(field.array([[2, 2, 0, 0]])))


def test_quotient_requires_containment():
    num = Subspace.coordinate(P, 3, [0])
    den = Subspace.coordinate(P, 3, [1])
    with pytest.raises(NotContained):
        QuotientSpace(num, den)
    with pytest.raises(NotContained):
        quotient(Subspace.coordinate(P, 3, [0, 1]), den).coordinates(P.array([[0, 0, 1]]))


def test_induced_map_checks_well_definedness():
    num = Subspace.full(P, 2)
    den = Subspace.coordinate(P, 2, [0])
    q = quotient(num, den)
    swap = P.array([[0, 1], [1, 0]])
    with pytest.raises(WellDefinednessError):
        induced_map(swap, q, q)
    ok = induced_map(P.array([[1, 1], [0, 2]]), q, q)
    assert ok.matrix.tolist() == [[2]]


# --- exhaustive F_2 comparisons --------------------------------------------------


def _random_f2(rng, n, k):
    return rng.integers(0, 2, size=(k, n))


@pytest.mark.parametrize("seed", range(20))
def test_f2_operations_match_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    a = _random_f2(rng, n, int(rng.integers(0, 4)))
    b = _random_f2(rng, n, int(rng.integers(0, 4)))
    u, v = Subspace.from_vectors(F2, n, a), Subspace.from_vectors(F2, n, b)
    su, sv = span_codes(a, n), span_codes(b, n)
    assert span_codes(u.rows, n) == su
    assert span_codes((u & v).rows, n) == su & sv
    assert span_codes((u + v).rows, n) == span_codes(np.concatenate([a, b]), n)
    m = _random_f2(rng, n, int(rng.integers(1, 7))).T  # n x k maps F_2^k -> F_2^n
    pre = preimage(F2.array(m), u)
    assert span_codes(pre.rows, m.shape[1]) == preimage_codes(m, su, m.shape[1])


# --- properties --------------------------------------------------------------------

small = st.integers(min_value=-3, max_value=3)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@settings(max_examples=60, deadline=None)
@given(gens=matrices(3, 5), mix=matrices(3, 3), modulus=st.sampled_from([2, 3, 5, None]))
def test_echelon_basis_is_canonical(gens, mix, modulus):
    field = Field(modulus)
    g = field.array(gens, (3, 5))
    t = field.array(mix, (3, 3))
    u = Subspace.from_vectors(field, 5, g)
    if rank(t, field) == 3:
        assert Subspace.from_vectors(field, 5, field.matmul(t, g)) == u
    again = Subspace.from_vectors(field, 5, u.rows)
    assert again == u and np.array_equal(again.rows, u.rows)


@settings(max_examples=60, deadline=None)
@given(a=matrices(2, 5), b=matrices(2, 5), c=matrices(2, 5), modulus=st.sampled_from([2, 3, None]))
def test_modular_law_and_dimension_formula(a, b, c, modulus):
    field = Field(modulus)
    U = Subspace.from_vectors(field, 5, field.array(a, (2, 5)))
    V = Subspace.from_vectors(field, 5, field.array(b, (2, 5)))
    W = U + Subspace.from_vectors(field, 5, field.array(c, (2, 5)))
    assert (U + V).dim + (U & V).dim == U.dim + V.dim
    # U <= W  =>  U + (V & W) = (U + V) & W
    assert U + (V & W) == (U + V) & W
    assert intersect(U, W) == U


@settings(max_examples=40, deadline=None)
@given(m=matrices(4, 3), modulus=st.sampled_from([2, 5, None]))
def test_preimage_of_image_contains_source(m, modulus):
    field = Field(modulus)
    mat = field.array(m, (4, 3))
    full = Subspace.full(field, 3)
    assert preimage(mat, image(mat, field)) == full
    assert preimage(mat, Subspace.zero(field, 4)) == kernel(mat, field)


def test_codes_helper():
    assert codes(np.array([[1, 0], [0, 1]])) == {1, 2}
