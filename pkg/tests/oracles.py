"""Exhaustive F_2 oracles: every vector of a small space, as numpy rows."""
from __future__ import annotations

import itertools

import numpy as np

from leray.linalg import Field

F2 = Field(2)


def all_vectors(n: int) -> np.ndarray:
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)


def codes(vectors: np.ndarray) -> set[int]:
    """Vectors as integers, so sets of vectors can be compared."""
    if vectors.shape[1] == 0:
        return {0} if vectors.shape[0] else set()
    weights = 1 << np.arange(vectors.shape[1], dtype=np.int64)
    return set((vectors % 2 @ weights).tolist())


def span_codes(gens: np.ndarray, n: int) -> set[int]:
    """Every F_2 combination of the rows of ``gens``."""
    gens = np.asarray(gens, dtype=np.int64).reshape(-1, n)
    k = gens.shape[0]
    if k == 0:
        return {0}
    coeffs = all_vectors(k)
    return codes((coeffs @ gens) % 2)


def preimage_codes(m: np.ndarray, target: set[int], ncols: int) -> set[int]:
    vs = all_vectors(ncols)
    imgs = (vs @ np.asarray(m, dtype=np.int64).T) % 2 if m.shape[0] else np.zeros((len(vs), 0), dtype=np.int64)
    if m.shape[0] == 0:
        img_codes = [0] * len(vs)
    else:
        weights = 1 << np.arange(m.shape[0], dtype=np.int64)
        img_codes = (imgs @ weights).tolist()
    keep = np.array([c in target for c in img_codes])
    return codes(vs[keep])


def rank2(m: np.ndarray) -> int:
    """Rank over F_2 from the size of the column space."""
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    return len(span_codes(m.T, m.shape[0])).bit_length() - 1
