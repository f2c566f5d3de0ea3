"""The invariant suite run by ``leray verify``."""
from __future__ import annotations

from dataclasses import dataclass

from .cosheaf import LerayData, verify_prop2
from .levelset import LineTriangulation, NotALine, homology_from_barcodes, leray_barcodes
from .linalg import Field, LinalgError
from .maps import SimplicialMap
from .reeb import ReebCells, check_component_correspondence, check_idempotent, reeb_compare, reeb_space
from .simplicial import homology_dims
from .spectral import ConvergenceError, LeraySpectralSequence


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""
    skipped: bool = False

    def line(self) -> str:
        status = "SKIP" if self.skipped else ("PASS" if self.ok else "FAIL")
        return f"{status}  {self.name}" + (f": {self.detail}" if self.detail else "")

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "skipped": self.skipped, "detail": self.detail}


def check_convergence(ss: LeraySpectralSequence) -> CheckResult:
    """Differentials vanish at r = m+1, m+2 and square to zero on every page up to m+1."""
    try:
        for r in range(ss.m + 2):
            ss.verify_square_zero(r)
        ss.verify_convergence()
    except ConvergenceError as exc:
        return CheckResult("convergence", False, str(exc))
    return CheckResult("convergence", True, f"limit page {ss.m + 1}")


def check_page_turns(ss: LeraySpectralSequence) -> CheckResult:
    """``H(E^r, d^r)`` matches ``E^{r+1}`` through the chain-level identification."""
    try:
        page = ss.page(0)
        for _ in range(ss.m + 2):
            page, _turn = ss.turn_page(page)
    except LinalgError as exc:
        return CheckResult("page turns", False, str(exc))
    return CheckResult("page turns", True, f"r = 0..{ss.m + 1}")


def check_reassembly(ss: LeraySpectralSequence, oracle: list[int]) -> CheckResult:
    bad = []
    for k in range(ss.X.dim + 1):
        got, parts = ss.total_homology(k)
        if got != oracle[k]:
            bad.append(f"k={k}: sum {parts} = {got} but H_{k}(X) = {oracle[k]}")
    return CheckResult("total homology", not bad, "; ".join(bad) or f"H(X) = {oracle}")


def check_page_two(ss: LeraySpectralSequence, data: LerayData) -> CheckResult:
    bad = []
    try:
        data.check_chain_maps()
        data.check_functorial()
    except LinalgError as exc:
        return CheckResult("E^2 vs cosheaf homology", False, str(exc))
    for p, q in ss.support():
        rep = verify_prop2(ss.f, p, q, ss.field, ss, data)
        if not rep.ok:
            bad.append(f"({p},{q}): {rep.detail}")
    return CheckResult("E^2 vs cosheaf homology", not bad, "; ".join(bad))


def check_levelset(f: SimplicialMap, field: Field, oracle: list[int], data: LerayData | None = None) -> CheckResult:
    try:
        LineTriangulation.of(f.codomain)
    except NotALine as exc:
        return CheckResult("barcodes", True, f"codomain is not a path ({exc})", skipped=True)
    try:
        bars = leray_barcodes(f, field, data=data)
    except LinalgError as exc:
        return CheckResult("barcodes", False, str(exc))
    got = [homology_from_barcodes(bars, k) for k in range(len(oracle))]
    ok = got == oracle
    return CheckResult("barcodes", ok, f"homology from barcodes {got}" + ("" if ok else f" but H(X) = {oracle}"))


def check_reeb(f: SimplicialMap, field: Field, data: LerayData | None = None) -> list[CheckResult]:
    cells = ReebCells(f)
    rep = reeb_compare(f, field, cells, strict=False)
    out = [CheckResult("reeb homology", rep.ok, f"H(X) = {rep.domain}, H(X^f) = {rep.reeb}")]
    if not cells.is_simplicial:
        out.append(CheckResult("reeb quotient", True, "quotient is a Delta-complex, not simplicial", skipped=True))
        return out
    try:
        r = reeb_space(f, cells)
        r.check_commutes()
        check_idempotent(r)
        check_component_correspondence(r, field, data)
    except (ValueError, LinalgError) as exc:
        out.append(CheckResult("reeb quotient", False, str(exc)))
    else:
        out.append(CheckResult("reeb quotient", True, f"f-vector {r.quotient.f_vector()}"))
    return out


def verify_all(f: SimplicialMap, field: Field) -> list[CheckResult]:
    ss = LeraySpectralSequence(f, field)
    data = LerayData(f, field)
    oracle = homology_dims(f.domain, field)
    results = [
        check_convergence(ss),
        check_page_turns(ss),
        check_reassembly(ss, oracle),
        check_page_two(ss, data),
        check_levelset(f, field, oracle, data),
    ]
    results += check_reeb(f, field, data)
    return results
