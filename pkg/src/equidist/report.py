"""Per-polynomial analysis records and their JSON / CSV encodings.

A record is a plain ordered ``dict`` so that two runs with the same inputs
serialize to identical bytes.  Floats are written with 17 significant
digits; exact integers that may exceed 53 bits (coefficients, leading
coefficient, discriminant, exact means) are written as decimal strings.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import bounds, energy, zmeasure
from .intpoly import IntPolynomial, exact_mean, is_squarefree, log_abs_int, power_sums
from .roots import NonConvergence, find_roots
from .testfn import DEFAULT_SECTOR_FUNCTIONS, TestFunction, parse_testfn

SCHEMA_VERSION = 1
DEFAULT_TESTFNS = ("cor22",) + tuple(f"sector:{a!r}:{b!r}:{e!r}" for a, b, e in DEFAULT_SECTOR_FUNCTIONS)


@dataclass(frozen=True)
class AnalysisOptions:
    sectors: tuple[tuple[float, float], ...] = tuple(zmeasure.dyadic_sectors(4))
    testfns: tuple[str, ...] = DEFAULT_TESTFNS
    r: float | None = None
    tol: float = 1e-12
    moments: tuple[int, ...] = (1, 2, 3)
    include_roots: bool = False
    energy: bool = True
    rhs_scale: float = 1.0
    M: float | None = None
    extra: dict = field(default_factory=dict, compare=False, hash=False)


@lru_cache(maxsize=32)
def testfn_named(name: str) -> TestFunction:
    return parse_testfn(name)


def _c(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _frac(x) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _scaled(rep: bounds.BoundReport, scale: float) -> bounds.BoundReport:
    if scale == 1.0:
        return rep
    return bounds.BoundReport(rep.kind, rep.lhs, rep.rhs * scale, rep.inputs, rep.flags)


def analyze(p: IntPolynomial, source: dict, opts: AnalysisOptions) -> dict:
    """Everything the package computes about one polynomial.

    Failures inside one stage are appended to ``errors`` and the remaining
    stages still run; only a root-finding failure ends the record early.
    """
    n = p.degree
    rec: dict = {
        "schema": SCHEMA_VERSION,
        "source": dict(source),
        "n": n,
        "polynomial": [str(c) for c in p.coeffs],
        "leading": str(p.leading),
        "squarefree": is_squarefree(p),
        "errors": [],
    }
    try:
        rs = find_roots(p, opts.tol)
    except NonConvergence as exc:
        rec["errors"].append({"stage": "roots", "error": str(exc)})
        rec["status"] = "numerical_failure"
        return rec
    cm = zmeasure.counting_measure(rs)
    rec["roots"] = {
        "max_radius": rs.max_radius,
        "max_modulus": float(np.max(np.abs(rs.values))),
        "extended": rs.extended,
        "in_disk": bool(np.all(np.abs(rs.values) <= 1 + rs.radii)),
        "at_origin": int(np.sum(np.abs(rs.values) <= rs.radii)),
    }
    if opts.include_roots:
        rec["roots"]["values"] = [list(t) for t in rs.triples()]

    mj = bounds.mahler_jensen(p, rs)
    sup = bounds.sup_norm(p)
    rec["mahler"] = {"value": mj.value, "log": mj.log_value, "error": mj.certified_error}
    rec["sup_norm"] = {"value": sup.value, "log": sup.log_value, "error": sup.certified_error,
                       "nth_root": math.exp(sup.log_value / n),
                       "cor23_ratio": sup.log_value / (math.sqrt(n) * math.log(n)) if n > 1 else math.nan}
    ex = exact_mean(p)
    s_n = zmeasure.mean(cm)
    rec["mean"] = {"exact": _frac(ex), "float": float(ex), "from_roots": _c(s_n), "abs": abs(s_n),
                   "cor22_ratio": abs(s_n) * math.sqrt(n / math.log(n)) if n > 1 else math.nan}
    sums = power_sums(p, max(opts.moments)) if opts.moments else []
    rec["moments"] = [
        {"m": m, "exact": _frac(sums[m - 1] / n), "from_roots": _c(zmeasure.moment(cm, m)),
         "abs": abs(zmeasure.moment(cm, m))}
        for m in opts.moments
    ]

    delta = bounds.cached_discriminant(p)
    rec["discriminant"] = str(delta)
    if delta:
        rec["log_abs_discriminant"] = log_abs_int(delta)

    reports = []
    for phi1, phi2 in opts.sectors:
        try:
            reports.append(bounds.erdos_turan_report(p, rs, phi1, phi2, sup if p[0] != 0 else None))
        except Exception as exc:
            rec["errors"].append({"stage": "erdos_turan", "sector": [phi1, phi2], "error": str(exc)})
    for name in opts.testfns:
        phi = testfn_named(name)
        try:
            reports.append(bounds.energy22_report(p, rs, phi))
            reports.append(bounds.main23_report(p, rs, phi, opts.r))
        except Exception as exc:
            rec["errors"].append({"stage": "testfn", "testfn": name, "error": str(exc)})
    reports.append(bounds.schur_mean_report(p, rs, opts.M))
    rec["reports"] = [_scaled(r, opts.rhs_scale).to_dict() for r in reports]

    if opts.energy:
        try:
            r = opts.r if opts.r is not None else bounds.default_radius(n, mj.value)
            rec["energy"] = energy.diagnostics(p, cm, r).to_dict()
        except (bounds.ZeroDiscriminant, energy.SingularPoint, NonConvergence) as exc:
            rec["errors"].append({"stage": "energy", "error": str(exc)})
    rec["status"] = "partial" if rec["errors"] else "ok"
    return rec


def violations(records: list[dict], eps_scale: float = 1e-9) -> list[dict]:
    """Binding reports with ``slack < -eps_scale (1 + |rhs|)``, with their source."""
    out = []
    for rec in records:
        for rep in rec.get("reports", []):
            if not rep["binding"]:
                continue
            rhs, slack = rep["rhs"], rep["slack"]
            if math.isnan(slack) or slack < -eps_scale * (1 + abs(rhs)):
                out.append({"source": rec["source"], "n": rec["n"], "polynomial": rec["polynomial"], "report": rep})
    return out


def sweep_summary(records: list[dict]) -> dict:
    ok = [r for r in records if "mean" in r]
    rows = [
        {
            "n": r["n"],
            "cor22_ratio": r["mean"]["cor22_ratio"],
            "sup_norm_nth_root": r["sup_norm"]["nth_root"],
            "cor23_ratio": r["sup_norm"]["cor23_ratio"],
            "moments_abs": [m["abs"] for m in r["moments"]],
        }
        for r in ok
    ]
    finite = [row["cor22_ratio"] for row in rows if math.isfinite(row["cor22_ratio"])]
    return {
        "degrees": len(records),
        "failed": sum(1 for r in records if r.get("status") == "numerical_failure"),
        "max_cor22_ratio": max(finite) if finite else None,
        "schur_reference": bounds.SCHUR_HISTORICAL,
        "rows": rows,
    }


# --- encoders ----------------------------------------------------------------------

def _num(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def dumps(obj, indent: int = 1, _level: int = 0) -> str:
    """JSON with 17-significant-digit floats and insertion-ordered keys."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, bool) or obj is None:
        return {True: "true", False: "false", None: "null"}[obj]
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}{dumps(str(k))}: {dumps(v, indent, _level + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, str, bool, np.floating, np.integer)) or v is None for v in obj):
            return "[" + ", ".join(dumps(v, indent, _level + 1) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


CSV_COLUMNS = ("schema", "record", "family", "n", "seed", "kind", "key", "lhs", "rhs", "slack", "binding", "flags")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return _num(x).strip('"')
    return str(x)


def csv_rows(records: list[dict]) -> list[list[str]]:
    """Flat rows: scalar statistics as ``stat`` rows, then one row per bound report."""
    rows = []
    for i, rec in enumerate(records):
        src = rec["source"]
        base = [SCHEMA_VERSION, i, src.get("family", "poly"), rec["n"], src.get("seed", "")]

        def stat(key, value):
            rows.append([_fmt(v) for v in base + ["stat", key, value, None, None, None, ""]])

        if "mean" not in rec:
            stat("status", rec.get("status"))
            continue
        stat("mahler", rec["mahler"]["value"])
        stat("sup_norm", rec["sup_norm"]["value"])
        stat("log_sup_norm", rec["sup_norm"]["log"])
        stat("sup_norm_nth_root", rec["sup_norm"]["nth_root"])
        stat("cor23_ratio", rec["sup_norm"]["cor23_ratio"])
        stat("mean_abs", rec["mean"]["abs"])
        stat("cor22_ratio", rec["mean"]["cor22_ratio"])
        for m in rec["moments"]:
            stat(f"moment_{m['m']}_abs", m["abs"])
        if "energy" in rec:
            e = rec["energy"]
            rows.append([_fmt(v) for v in base + ["energy", f"r={_fmt(e['r'])}", e["energy_sigma"], e["upper_bound"],
                                                  e["slack"], True, ""]])
        for rep in rec["reports"]:
            key = rep["inputs"].get("testfn") or ":".join(_fmt(a) for a in rep["inputs"].get("sector", []))
            rows.append([_fmt(v) for v in base + [rep["kind"], key, rep["lhs"], rep["rhs"], rep["slack"],
                                                  rep["binding"], ";".join(rep["flags"])]])
    return rows


def dumps_csv(records: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(csv_rows(records))
    return buf.getvalue()
