"""Command line entry point: ``leray COMMAND [INPUT] [options]``."""
from __future__ import annotations

import argparse
import sys

from .cosheaf import LerayData, cosheaf_homology
from .io import COMMANDS, InputError, JobSpec, dumps, parse_input
from .levelset import NotALine, homology_from_barcodes, leray_barcodes
from .linalg import Field, LinalgError
from .reeb import ReebCells, ReebError, reeb_compare, reeb_space
from .simplicial import homology
from .spectral import LeraySpectralSequence
from .verify import verify_all

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


def _simplex_key(s):
    return (len(s), s)


def _complex_json(K) -> dict:
    return {"simplices": [list(s) for s in sorted(K.maximal_simplices(), key=_simplex_key)]}


def _degrees(job: JobSpec, top: int) -> list[int]:
    return list(job.options.get("degrees", range(top + 1)))


def report_homology(job: JobSpec):
    X, field = job.domain, job.field
    dims = {k: homology(X, k, field)[0] for k in _degrees(job, X.dim)}
    text = "\n".join(f"H_{k}(X; {field}) = {d}" for k, d in dims.items())
    return text, {"homology": [{"degree": k, "dim": d} for k, d in dims.items()]}, True


def report_pages(job: JobSpec):
    r = int(job.options.get("r", 2))
    ss = LeraySpectralSequence(job.f, job.field)
    rows = []
    # entries with q < 0 are zero by construction
    for p, q in sorted(k for k in ss.support() if k[1] >= 0):
        d = ss.differential(r, p, q)
        rows.append({"p": p, "q": q, "dim": ss.entry(r, p, q).dim, "rank": d.rank, "target": [p - r, q + r - 1]})
    lines = [f"E^{r} over {job.field} (dim Y = {ss.m})", f"  {'p':>3} {'q':>3} {'dim':>5} {'rank d':>7}"]
    lines += [f"  {e['p']:>3} {e['q']:>3} {e['dim']:>5} {e['rank']:>7}" for e in rows]
    return "\n".join(lines), {"r": r, "entries": rows}, True


def report_cosheaf(job: JobSpec):
    data = LerayData(job.f, job.field)
    Y = job.codomain
    qs = [job.options["q"]] if "q" in job.options else list(range(job.domain.dim + 1))
    out, lines = [], []
    for q in qs:
        L = data.cosheaf(q)
        dims = [{"simplex": list(t), "dim": L[t]} for t in sorted(Y.simplices(), key=_simplex_key)]
        ranks = [
            {"from": list(t), "to": list(s), "rank": r}
            for (t, s), r in sorted(L.relation_ranks().items(), key=lambda kv: (_simplex_key(kv[0][0]), _simplex_key(kv[0][1])))
            if L[t] and L[s]
        ]
        hom = [cosheaf_homology(L, p)[0] for p in range(Y.dim + 1)]
        out.append({"q": q, "dims": dims, "ranks": ranks, "homology": hom})
        lines.append(f"L_{q} over {job.field}")
        lines += [f"  {str(tuple(e['simplex'])):<16} dim {e['dim']}" for e in dims if e["dim"]]
        lines += [f"  {tuple(e['from'])} -> {tuple(e['to'])}: rank {e['rank']}" for e in ranks]
        lines.append("  H_p(Y; L_%d) = %s" % (q, hom))
    return "\n".join(lines), {"cosheaves": out}, True


def report_levelset(job: JobSpec):
    top = job.domain.dim
    bars = leray_barcodes(job.f, job.field, top)
    qs = [job.options["q"]] if "q" in job.options else list(range(top + 1))
    hom = {k: homology_from_barcodes(bars, k) for k in _degrees(job, top)}
    lines = []
    for q in qs:
        lines.append(f"barcode of L_{q}")
        lines.append(bars[q].table() if q < len(bars) else "  (empty)")
    lines += [f"H_{k}(X) from barcodes = {d}" for k, d in hom.items()]
    doc = {
        "barcodes": [{"q": q, "bars": bars[q].to_json() if q < len(bars) else []} for q in qs],
        "homology": [{"degree": k, "dim": d} for k, d in hom.items()],
    }
    return "\n".join(lines), doc, True


def report_reeb(job: JobSpec):
    cells = ReebCells(job.f)
    rep = reeb_compare(job.f, job.field, cells, strict=False)
    doc = rep.to_json()
    lines = []
    if cells.is_simplicial:
        r = reeb_space(job.f, cells)
        doc["quotient"] = _complex_json(r.quotient)
        doc["induced_map"] = {str(k): v for k, v in sorted(r.induced_map.vertex_map.items())}
        lines.append(f"Reeb space: simplicial complex with f-vector {r.quotient.f_vector()}")
        lines.append("  maximal simplices: " + " ".join(str(tuple(s)) for s in doc["quotient"]["simplices"]))
    else:
        counts = [len(cells.cells(d)) for d in range(cells.dim + 1)]
        doc["cells"] = counts
        lines.append(f"Reeb space: Delta-complex with cell counts {counts} (not simplicial)")
    many = [b for b in doc["blocks"] if b["count"] != 1]
    lines += [f"  {b['count']} components over {tuple(b['tau'])}" for b in many]
    lines.append(rep.table())
    return "\n".join(lines), doc, rep.ok


def report_verify(job: JobSpec):
    results = verify_all(job.f, job.field)
    ok = all(r.ok for r in results)
    lines = [r.line() for r in results] + ["all checks passed" if ok else "some checks FAILED"]
    return "\n".join(lines), {"checks": [r.to_json() for r in results], "ok": ok}, ok


REPORTS = {
    "homology": report_homology,
    "pages": report_pages,
    "cosheaf": report_cosheaf,
    "levelset": report_levelset,
    "reeb": report_reeb,
    "verify": report_verify,
}


def run(job: JobSpec, as_json: bool = False) -> tuple[str, bool]:
    """Render the report for ``job``; the flag says whether every requested check held."""
    if job.command not in REPORTS:
        raise InputError(f"unknown command {job.command!r}", "command")
    text, doc, ok = REPORTS[job.command](job)
    if as_json:
        doc = {"command": job.command, "field": job.field.name, **doc}
        return dumps(doc), ok
    return text, ok


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leray", description="Leray spectral sequences, cosheaves, barcodes and Reeb spaces of simplicial maps.")
    p.add_argument("command", choices=COMMANDS + ("run",), help="what to compute; 'run' uses the document's own command")
    p.add_argument("input", nargs="?", default="-", help="JSON job document (default: standard input)")
    p.add_argument("--field", help="coefficient field: F2, F<p> or Q (overrides the document)")
    p.add_argument("--json", action="store_true", help="machine readable output")
    p.add_argument("--r", type=int, help="page index for 'pages'")
    p.add_argument("--degree", type=int, action="append", help="homology degree (repeatable)")
    p.add_argument("--q", type=int, help="fiber degree for 'cosheaf' and 'levelset'")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_intermixed_args(argv)
    try:
        if args.input == "-":
            text = sys.stdin.read()
        else:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        print(f"leray: cannot read {args.input}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    try:
        job = parse_input(text)
        if args.field:
            try:
                job.field = Field.parse(args.field)
            except ValueError as exc:
                raise InputError(str(exc), "--field") from exc
        if args.command != "run":
            job.command = args.command
        elif job.command is None:
            raise InputError("document has no command and 'run' was requested", "command")
        for key in ("r", "q"):
            if getattr(args, key) is not None:
                if getattr(args, key) < 0:
                    raise InputError("must be >= 0", f"--{key}")
                job.options[key] = getattr(args, key)
        if args.degree:
            job.options["degrees"] = sorted(set(args.degree))
        as_json = args.json or job.options.get("format") == "json"
    except InputError as exc:
        print(f"leray: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    try:
        out, ok = run(job, as_json)
    except (NotALine, ReebError, LinalgError) as exc:
        print(f"leray: {job.command} failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    print(out)
    return EXIT_OK if ok else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
