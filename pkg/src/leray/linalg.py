"""Exact linear algebra over prime fields and the rationals.

Vectors are numpy rows.  Prime fields with small moduli use ``int64``
storage; large moduli and the rationals use ``object`` arrays holding Python
ints or ``gmpy2.mpq`` values, so no floating point path exists anywhere.

A :class:`Subspace` is stored as the reduced row-echelon form of its basis
vectors (stacked as rows).  Its ``basis`` property is the transpose, i.e. the
reduced column-echelon form.  Because reduced echelon form is unique, two
equal subspaces always carry bit-identical bases.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import gmpy2
import numpy as np

__all__ = [
    "Field",
    "F2",
    "QQ",
    "LinalgError",
    "DimensionMismatch",
    "NotContained",
    "WellDefinednessError",
    "Subspace",
    "QuotientSpace",
    "LinearMap",
    "rref",
    "reduce",
    "rank",
    "kernel",
    "image",
    "intersect",
    "subspace_sum",
    "preimage",
    "quotient",
    "induced_map",
    "inverse",
    "span",
]

# int64 products of two residues must not overflow during elimination and
# matrix products of moderate width
_INT64_MODULUS_LIMIT = 1 << 20


class LinalgError(ValueError):
    pass


class DimensionMismatch(LinalgError):
    pass


class NotContained(LinalgError):
    pass


class WellDefinednessError(LinalgError):
    """A linear map does not respect the subspaces it is asked to descend to."""


def _is_prime(n: int) -> bool:
    return n >= 2 and bool(gmpy2.is_prime(n))


@dataclass(frozen=True)
class Field:
    """The coefficient field: ``F_p`` when ``modulus`` is set, else ``Q``."""

    modulus: int | None = 2

    def __post_init__(self):
        if self.modulus is not None and not _is_prime(self.modulus):
            raise ValueError(f"modulus {self.modulus} is not prime")

    @classmethod
    def parse(cls, name: str) -> "Field":
        """``"F2"``, ``"F<p>"`` or ``"Q"``."""
        text = name.strip()
        if text in ("Q", "QQ"):
            return cls(None)
        if text.startswith("F") and text[1:].isdigit():
            return cls(int(text[1:]))
        raise ValueError(f"unknown field {name!r}; expected 'F<p>' or 'Q'")

    @property
    def is_rational(self) -> bool:
        return self.modulus is None

    @property
    def name(self) -> str:
        return "Q" if self.modulus is None else f"F{self.modulus}"

    @property
    def characteristic(self) -> int:
        return 0 if self.modulus is None else self.modulus

    @property
    def dtype(self):
        if self.modulus is not None and self.modulus < _INT64_MODULUS_LIMIT:
            return np.int64
        return object

    def __str__(self):
        return self.name

    # -- elements -----------------------------------------------------------

    def element(self, x):
        if self.modulus is None:
            return gmpy2.mpq(x)
        den = getattr(x, "denominator", 1)
        if den != 1:
            return int(x.numerator) * pow(int(den), -1, self.modulus) % self.modulus
        return int(x) % self.modulus

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.modulus is None:
            return gmpy2.mpq(1) / x
        return pow(int(x), -1, self.modulus)

    # -- arrays -------------------------------------------------------------

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.dtype is object:
            out = np.empty((rows, cols), dtype=object)
            out.fill(self.element(0))
            return out
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = self.element(1)
        return out

    def array(self, data, shape: tuple[int, int] | None = None) -> np.ndarray:
        """Coerce nested lists / integer arrays into a field matrix."""
        raw = np.array(data, dtype=object)
        if shape is not None:
            raw = raw.reshape(shape)
        if raw.ndim == 1:
            raw = raw.reshape(1, -1) if raw.size else raw.reshape(0, 0)
        out = np.empty(raw.shape, dtype=object)
        for idx, x in np.ndenumerate(raw):
            out[idx] = self.element(x)
        if self.dtype is object:
            return out
        return out.astype(np.int64)

    def normalize(self, a: np.ndarray) -> np.ndarray:
        if self.modulus is None:
            return a
        return a % self.modulus

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] != b.shape[0]:
            raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
        if a.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return self.normalize(a @ b)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self.normalize(-a)

    def scale(self, a: np.ndarray, c) -> np.ndarray:
        return self.normalize(a * self.element(c))


F2 = Field(2)
QQ = Field(None)


# --- elimination -------------------------------------------------------------


def rref(a: np.ndarray, field: Field) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row-echelon form; returns the nonzero rows and pivot columns."""
    a = field.normalize(np.array(a, dtype=field.dtype, copy=True))
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        piv = a[r, c]
        if piv != 1:
            a[r] = field.normalize(a[r] * field.inv(piv))
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = field.normalize(a[hit] - np.outer(col[hit], a[r]))
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


def reduce(m: np.ndarray, field: Field) -> tuple[np.ndarray, int, tuple[int, ...]]:
    """Reduced column-echelon form of ``m``.

    Returns ``(E, rank, pivots)`` where the columns of ``E`` are a basis of the
    column space and ``pivots[j]`` is the row holding the leading 1 of column j.
    """
    rows, piv = rref(np.asarray(m).T, field)
    return rows.T.copy(), len(piv), piv


def rank(m: np.ndarray, field: Field) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m, field)[1])


def inverse(m: np.ndarray, field: Field) -> np.ndarray:
    n = m.shape[0]
    if m.shape != (n, n):
        raise DimensionMismatch(f"inverse of non-square {m.shape}")
    aug = np.concatenate([np.asarray(m, dtype=field.dtype), field.eye(n)], axis=1)
    rows, piv = rref(aug, field)
    if piv[:n] != tuple(range(n)) or len(piv) < n:
        raise LinalgError("matrix is singular")
    return rows[:, n:].copy()


def _as_rows(field: Field, vectors, n: int) -> np.ndarray:
    """Stack of row vectors of width ``n`` (a single 1-d vector becomes one row)."""
    a = np.asarray(vectors, dtype=field.dtype)
    if a.ndim == 1:
        if a.size == 0 and n != 0:
            return field.zeros(0, n)
        a = a.reshape(1, n)
    if a.ndim != 2 or a.shape[1] != n:
        raise DimensionMismatch(f"expected vectors of length {n}, got shape {a.shape}")
    return a


# --- subspaces ----------------------------------------------------------------


class Subspace:
    """A subspace of ``field**ambient_dim`` in canonical echelon form."""

    __slots__ = ("field", "ambient_dim", "rows", "pivots")

    def __init__(self, field: Field, ambient_dim: int, rows: np.ndarray, pivots: tuple[int, ...]):
        self.field = field
        self.ambient_dim = ambient_dim
        self.rows = rows
        self.pivots = pivots
        rows.flags.writeable = False

    @classmethod
    def from_vectors(cls, field: Field, ambient_dim: int, vectors) -> "Subspace":
        if ambient_dim == 0 or len(vectors) == 0:
            return cls.zero(field, ambient_dim)
        vecs = _as_rows(field, vectors, ambient_dim)
        if vecs.shape[0] == 0:
            return cls.zero(field, ambient_dim)
        rows, piv = rref(vecs, field)
        return cls(field, ambient_dim, rows, piv)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, field.zeros(0, ambient_dim), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, field.eye(ambient_dim), tuple(range(ambient_dim)))

    @classmethod
    def coordinate(cls, field: Field, ambient_dim: int, indices) -> "Subspace":
        idx = sorted(set(int(i) for i in indices))
        rows = field.zeros(len(idx), ambient_dim)
        for k, i in enumerate(idx):
            rows[k, i] = field.element(1)
        return cls(field, ambient_dim, rows, tuple(idx))

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    @property
    def basis(self) -> np.ndarray:
        """Basis vectors as columns (reduced column-echelon form)."""
        return self.rows.T

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"ambient dimensions {self.ambient_dim} and {other.ambient_dim} differ")
        if self.field != other.field:
            raise DimensionMismatch(f"fields {self.field} and {other.field} differ")

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (
            self.field == other.field
            and self.ambient_dim == other.ambient_dim
            and self.pivots == other.pivots
            and np.array_equal(self.rows, other.rows)
        )

    def __hash__(self):
        return hash((self.field, self.ambient_dim, self.pivots))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, field={self.field})"

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def residual(self, vectors: np.ndarray) -> np.ndarray:
        """Reduce row vectors modulo this subspace (zero out the pivot columns)."""
        vectors = np.asarray(vectors, dtype=self.field.dtype)
        if self.dim == 0 or vectors.shape[0] == 0:
            return vectors.copy()
        coeffs = vectors[:, list(self.pivots)]
        return self.field.normalize(vectors - self.field.matmul(coeffs, self.rows))

    def contains_vectors(self, vectors: np.ndarray) -> bool:
        vectors = _as_rows(self.field, vectors, self.ambient_dim)
        return not np.any(self.residual(vectors))

    def contains(self, other: "Subspace") -> bool:
        self._check(other)
        return self.contains_vectors(other.rows)

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coefficients of row vectors in the echelon basis (one row per vector)."""
        vectors = _as_rows(self.field, vectors, self.ambient_dim)
        if not self.contains_vectors(vectors):
            raise NotContained("vector does not lie in the subspace")
        return vectors[:, list(self.pivots)].copy()

    def annihilator(self) -> "Subspace":
        """``{w : u . w = 0 for all u}``, identified with a subspace of the same space."""
        return kernel(self.rows, self.field, ncols=self.ambient_dim)


def span(field: Field, ambient_dim: int, vectors) -> Subspace:
    return Subspace.from_vectors(field, ambient_dim, vectors)


def kernel(m: np.ndarray, field: Field, ncols: int | None = None) -> Subspace:
    """``{v : m v = 0}`` as a subspace of ``field**cols``."""
    m = np.asarray(m, dtype=field.dtype)
    n = m.shape[1] if ncols is None else ncols
    if m.shape[0] == 0:
        return Subspace.full(field, n)
    rows, piv = rref(m, field)
    free = [c for c in range(n) if c not in set(piv)]
    if not free:
        return Subspace.zero(field, n)
    basis = field.zeros(len(free), n)
    for k, c in enumerate(free):
        basis[k, c] = field.element(1)
        if piv:
            basis[k, list(piv)] = field.neg(rows[:, c])
    # free-variable basis is already reduced: leading entries sit at distinct free columns
    out, p = rref(basis, field)
    return Subspace(field, n, out, p)


def image(m: np.ndarray, field: Field, source: Subspace | None = None) -> Subspace:
    """``m(source)``, or the column space of ``m`` when ``source`` is omitted."""
    m = np.asarray(m, dtype=field.dtype)
    if source is None:
        vecs = m.T
    else:
        if source.ambient_dim != m.shape[1]:
            raise DimensionMismatch(f"source ambient {source.ambient_dim} vs matrix {m.shape}")
        vecs = field.matmul(source.rows, m.T)
    return Subspace.from_vectors(field, m.shape[0], vecs)


def intersect(u: Subspace, v: Subspace) -> Subspace:
    u._check(v)
    if u.dim == 0 or v.dim == 0:
        return Subspace.zero(u.field, u.ambient_dim)
    if v.contains(u):
        return u
    if u.contains(v):
        return v
    relations = np.concatenate([u.annihilator().rows, v.annihilator().rows], axis=0)
    return kernel(relations, u.field, ncols=u.ambient_dim)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    u._check(v)
    if v.dim == 0:
        return u
    if u.dim == 0:
        return v
    return Subspace.from_vectors(u.field, u.ambient_dim, np.concatenate([u.rows, v.rows], axis=0))


def preimage(m: np.ndarray, w: Subspace) -> Subspace:
    """``{v : m v in w}``."""
    field = w.field
    m = np.asarray(m, dtype=field.dtype)
    if m.shape[0] != w.ambient_dim:
        raise DimensionMismatch(f"matrix has {m.shape[0]} rows but target ambient is {w.ambient_dim}")
    if w.is_full():
        return Subspace.full(field, m.shape[1])
    ann = w.annihilator()
    return kernel(field.matmul(ann.rows, m), field, ncols=m.shape[1])


# --- quotients and induced maps -------------------------------------------------


class QuotientSpace:
    """``numerator / denominator`` with a canonical basis of coset representatives.

    The representatives are the numerator reduced modulo the denominator's
    echelon basis, then put in echelon form; they therefore depend only on the
    two subspaces, never on how they were presented.
    """

    __slots__ = ("numerator", "denominator", "reps", "rep_pivots")

    def __init__(self, numerator: Subspace, denominator: Subspace):
        numerator._check(denominator)
        if not numerator.contains(denominator):
            raise NotContained("denominator is not contained in numerator")
        self.numerator = numerator
        self.denominator = denominator
        field = numerator.field
        reduced = denominator.residual(numerator.rows)
        keep = reduced[np.any(reduced != 0, axis=1)] if reduced.shape[0] else reduced
        if keep.shape[0]:
            reps, piv = rref(keep, field)
        else:
            reps, piv = field.zeros(0, numerator.ambient_dim), ()
        if len(piv) != numerator.dim - denominator.dim:
            raise LinalgError("quotient representatives have the wrong count")
        self.reps = reps
        self.rep_pivots = piv
        reps.flags.writeable = False

    @classmethod
    def of(cls, space: Subspace) -> "QuotientSpace":
        return cls(space, Subspace.zero(space.field, space.ambient_dim))

    @property
    def field(self) -> Field:
        return self.numerator.field

    @property
    def ambient_dim(self) -> int:
        return self.numerator.ambient_dim

    @property
    def dim(self) -> int:
        return self.reps.shape[0]

    def __repr__(self):
        return f"QuotientSpace(dim={self.dim}, num={self.numerator.dim}, den={self.denominator.dim})"

    def coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of the cosets of row vectors (which must lie in the numerator)."""
        field = self.field
        vectors = _as_rows(field, vectors, self.ambient_dim)
        reduced = self.denominator.residual(vectors)
        coords = reduced[:, list(self.rep_pivots)].copy()
        if self.dim:
            rest = field.normalize(reduced - field.matmul(coords, self.reps))
        else:
            rest = reduced
        if np.any(rest):
            raise NotContained("vector does not lie in the numerator")
        return coords

    def lift(self, coords: np.ndarray) -> np.ndarray:
        """Chains represented by coordinate rows."""
        coords = _as_rows(self.field, coords, self.dim)
        return self.field.matmul(coords, self.reps)


def quotient(num: Subspace, den: Subspace) -> QuotientSpace:
    return QuotientSpace(num, den)


Space = Union[Subspace, QuotientSpace]


def _as_quotient(s: Space) -> QuotientSpace:
    return s if isinstance(s, QuotientSpace) else QuotientSpace.of(s)


@dataclass(frozen=True, eq=False)
class LinearMap:
    """A map between (quotient) spaces, as a matrix acting on coordinate columns."""

    domain: QuotientSpace
    codomain: QuotientSpace
    matrix: np.ndarray

    @property
    def rank(self) -> int:
        return rank(self.matrix, self.domain.field)

    def is_zero(self) -> bool:
        return not np.any(self.matrix)

    def __matmul__(self, other: "LinearMap") -> np.ndarray:
        return self.domain.field.matmul(self.matrix, other.matrix)


def induced_map(m: np.ndarray, dom: Space, cod: Space) -> LinearMap:
    """The map ``dom -> cod`` induced by the ambient matrix ``m``.

    Raises :class:`WellDefinednessError` if ``m`` does not carry numerator into
    numerator and denominator into denominator.
    """
    dom, cod = _as_quotient(dom), _as_quotient(cod)
    field = dom.field
    m = np.asarray(m, dtype=field.dtype)
    if m.shape != (cod.ambient_dim, dom.ambient_dim):
        raise DimensionMismatch(f"matrix {m.shape} vs spaces {dom.ambient_dim} -> {cod.ambient_dim}")
    if dom.denominator.dim:
        den_img = field.matmul(dom.denominator.rows, m.T)
        if not cod.denominator.contains_vectors(den_img):
            raise WellDefinednessError("denominator is not mapped into denominator")
    num_img = field.matmul(dom.numerator.rows, m.T) if dom.numerator.dim else field.zeros(0, cod.ambient_dim)
    if not cod.numerator.contains_vectors(num_img):
        raise WellDefinednessError("numerator is not mapped into numerator")
    if dom.dim == 0:
        return LinearMap(dom, cod, field.zeros(cod.dim, 0))
    imgs = field.matmul(dom.reps, m.T)
    return LinearMap(dom, cod, cod.coordinates(imgs).T.copy())
