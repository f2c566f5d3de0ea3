"""The eight acceptance criteria, one test each.

Each test prints a PASS/FAIL line (also collected into the pytest summary).
Run directly with ``python3 tests/test_acceptance.py`` for just those lines.
"""
import functools
import random
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ACCEPTANCE
from oracles import F2, all_vectors, codes, preimage_codes, span_codes

from leray import cli
from leray.cosheaf import LerayData, verify_prop2
from leray.corpus import corpus, path_corpus
from leray.fixtures import witness_map
from leray.levelset import (
    KINDS,
    IntervalCosheaf,
    LineTriangulation,
    bar_homology,
    homology_from_barcodes,
    leray_barcodes,
    rank_invariant,
    recompute_bar_homology,
    zigzag_of,
)
from leray.linalg import Field, Subspace, preimage, quotient
from leray.reeb import ReebCells, reeb_compare, reeb_space
from leray.simplicial import homology_dims
from leray.spectral import LeraySpectralSequence
from leray.verify import check_convergence

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def report(n, name, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {name}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE.append(line)
    assert ok, line


@functools.lru_cache(maxsize=None)
def main_corpus():
    return corpus(100, seed=0)


@functools.lru_cache(maxsize=None)
def spectral_sequences():
    return [LeraySpectralSequence(f, field) for f, field in main_corpus()]


def test_1_total_homology_reassembles():
    start = time.perf_counter()
    maps = main_corpus()
    bad = []
    for i, ss in enumerate(spectral_sequences()):
        f, field = maps[i]
        assert len(f.domain) <= 200 and f.codomain.dim <= 3
        oracle = homology_dims(f.domain, field)
        for k in range(f.domain.dim + 1):
            if ss.total_homology(k)[0] != oracle[k]:
                bad.append((i, k))
    elapsed = time.perf_counter() - start
    fields = sorted({field.name for _, field in maps})
    report(1, "sum_p dim E^{m+1}_{p,k-p} = dim H_k(X)", not bad and elapsed < 60,
           f"{len(maps)} maps over {'/'.join(fields)}, {len(bad)} mismatches, {elapsed:.1f}s")


def test_2_page_two_is_cosheaf_homology():
    bad, checked = [], 0
    for (f, field), ss in zip(main_corpus(), spectral_sequences()):
        data = LerayData(f, field)
        for p, q in ss.support():
            rep = verify_prop2(f, p, q, field, ss, data)
            checked += 1
            if rep.page_dim != rep.cosheaf_dim or not rep.ok:
                bad.append((p, q, rep.detail))
    report(2, "dim E^2_{p,q} = dim H_p(Y; L_q)", not bad, f"{checked} bidegrees, {len(bad)} mismatches")


def test_3_convergence():
    bad = [i for i, ss in enumerate(spectral_sequences()) if not check_convergence(ss).ok]
    report(3, "d^{m+1} = d^{m+2} = 0 and d^r d^r = 0 for r <= m+1", not bad, f"{len(bad)} failing maps")


def test_4_bar_table():
    expected = {"closed": (1, 0), "closed_open": (0, 0), "open": (0, 1), "open_closed": (0, 0)}
    table_ok = all(bar_homology(kind, 1, 3) == expected[kind] for kind in KINDS)
    rng = random.Random(4)
    bad = []
    for _ in range(50):
        kind = rng.choice(KINDS)
        a = rng.randint(0, 6)
        b = a + rng.randint(0 if kind == "closed" else 1, 4)
        bar = IntervalCosheaf(kind, a, b)
        n = b + rng.randint(0, 3)
        if recompute_bar_homology(bar, rng.choice([F2, Field(5), Field(None)]), n) != expected[kind]:
            bad.append(str(bar))
    report(4, "bar table and 50 recomputed bars", table_ok and not bad, f"table {'ok' if table_ok else 'wrong'}, {len(bad)} mismatches")


def test_5_barcodes_recover_homology():
    maps = path_corpus(50, seed=1)
    bad_h, bad_rank = [], []
    for i, (f, field) in enumerate(maps):
        line = LineTriangulation.of(f.codomain)
        assert line.n <= 10
        data = LerayData(f, field)
        bars = leray_barcodes(f, field, data=data, check=False)
        oracle = homology_dims(f.domain, field)
        if [homology_from_barcodes(bars, k) for k in range(len(oracle))] != oracle:
            bad_h.append(i)
        for q, bc in enumerate(bars):
            z = zigzag_of(data.cosheaf(q), line)
            if any(bc.rank(s, t) != r for (s, t), r in rank_invariant(z).items()):
                bad_rank.append((i, q))
    report(5, "homology from barcodes and rank invariants", not bad_h and not bad_rank,
           f"{len(maps)} path maps, {len(bad_h)} homology and {len(bad_rank)} rank mismatches")


def test_6_witness():
    f = witness_map()
    out = []
    for field in (F2, Field(5), Field(None)):
        ss = LeraySpectralSequence(f, field)
        data = LerayData(f, field)
        d2 = ss.differential(2, 2, 0)
        r = reeb_space(f)
        checks = {
            "H(X)": homology_dims(f.domain, field) == [1, 0, 0],
            "fiber H_1": data.fiber_homology((3,), 1).dim == 1,
            "E^2": ss.entry(2, 2, 0).dim == 1 and ss.entry(2, 0, 1).dim == 1,
            "d^2 invertible": d2.matrix.shape == (1, 1) and d2.rank == 1,
            "E^3": ss.entry(3, 2, 0).dim == 0 and ss.entry(3, 0, 1).dim == 0,
            "X^f": r.quotient.f_vector() == [4, 6, 4] and homology_dims(r.quotient, field) == [1, 0, 1],
        }
        out += [f"{k} over {field}" for k, ok in checks.items() if not ok]
    report(6, "witness fixture values", not out, ", ".join(out) or "all values over F2, F5, Q")


def test_7_reeb_bounds_and_verify_exit(monkeypatch, capsys):
    maps = main_corpus() + path_corpus(50, seed=1)
    bad, delta = [], 0
    for f, field in maps:
        cells = ReebCells(f)
        delta += not cells.is_simplicial
        rep = reeb_compare(f, field, cells, strict=False)
        if not (rep.h0_equal and rep.h1_bounded):
            bad.append(rep.table())
    witness = str(FIXTURES / "witness.json")
    clean = cli.main(["verify", witness])
    # a Reeb space with extra components must make verify fail
    monkeypatch.setattr(ReebCells, "homology_dims", lambda self, field: [2, 0, 1])
    broken = cli.main(["verify", witness])
    capsys.readouterr()
    report(7, "H_0(X^f) = H_0(X), H_1(X^f) <= H_1(X), verify exit code", not bad and clean == 0 and broken != 0,
           f"{len(maps)} maps ({delta} with Delta-complex quotients), {len(bad)} violations, exit {clean}/{broken}")


def _f2_instance(rng):
    n = rng.randint(1, 12)
    gens = lambda k: np.array([[rng.randint(0, 1) for _ in range(n)] for _ in range(k)], dtype=np.int64).reshape(k, n)
    return n, gens(rng.randint(0, 5)), gens(rng.randint(0, 5))


def test_8_f2_linear_algebra_by_enumeration():
    rng = random.Random(8)
    start = time.perf_counter()
    bad = []
    for i in range(1000):
        n, a, b = _f2_instance(rng)
        U = Subspace.from_vectors(F2, n, a)
        V = Subspace.from_vectors(F2, n, b)
        su, sv = span_codes(a, n), span_codes(b, n)
        ok = span_codes((U & V).rows, n) == su & sv
        ok &= span_codes((U + V).rows, n) == span_codes(np.concatenate([a, b]), n)
        k = rng.randint(1, 12)
        m = np.array([[rng.randint(0, 1) for _ in range(k)] for _ in range(n)], dtype=np.int64)
        ok &= span_codes(preimage(F2.array(m), U).rows, k) == preimage_codes(m, su, k)
        # quotient (U + V) / U: coordinates vanish exactly on U and separate the cosets
        W = U + V
        q = quotient(W, U)
        members = all_vectors(W.dim) @ W.rows % 2 if W.dim else np.zeros((1, n), dtype=np.int64)
        coords = q.coordinates(F2.array(members))
        zero = ~coords.any(axis=1)
        ok &= codes(members[zero]) == su
        ok &= len({tuple(c) for c in coords.tolist()}) == len(members) // len(su)
        if not ok:
            bad.append(i)
    elapsed = time.perf_counter() - start
    report(8, "F2 intersect/sum/preimage/quotient vs enumeration", not bad and elapsed < 30,
           f"1000 instances, ambient <= 12, {len(bad)} mismatches, {elapsed:.1f}s")


if __name__ == "__main__":
    import pytest

    sys.exit(pytest.main([__file__, "-q", "-s", "-p", "no:cacheprovider"]))
