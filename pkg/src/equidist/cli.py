"""Command-line experiment runner.

    equidist analyze  --poly "z^64 - 1"
    equidist sweep    --family schur --M 10 --n-range 55:500:25 --format csv --output schur.csv
    equidist verify   (default suite: binomial, cyclotomic_product and schur, n <= 512)
    equidist generate --family schur --n 60 --M 5 --seed 7
    equidist energy   --family binomial --n 8 --r 0.05

Exit status: 0 success, 1 inequality violations, 2 usage or input error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

from . import energy, families, report, zmeasure
from .intpoly import IntPolynomial, dense_string, parse_poly
from .roots import NonConvergence, find_roots
from .testfn import parse_testfn

EXIT_OK, EXIT_VIOLATIONS, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

FAMILY_ALIASES = {"kronecker": "cyclotomic_product"}
VERIFY_FAMILIES = (("binomial", 1.0), ("cyclotomic_product", 1.0), ("schur", 10.0))
VERIFY_DEGREES = (8, 16, 32, 55, 64, 100, 128, 256, 512)


class UsageError(ValueError):
    pass


# --- argument parsing ----------------------------------------------------------------

def parse_sector(text: str) -> list[tuple[float, float]]:
    """``phi1:phi2`` (radians), ``deg:a:b`` (degrees) or ``dyadic[:level]``."""
    parts = text.split(":")
    try:
        if parts[0] == "dyadic":
            return zmeasure.dyadic_sectors(int(parts[1]) if len(parts) > 1 else 4)
        if parts[0] == "deg" and len(parts) == 3:
            a, b = math.radians(float(parts[1])), math.radians(float(parts[2]))
        elif len(parts) == 2:
            a, b = float(parts[0]), float(parts[1])
        else:
            raise ValueError
    except ValueError:
        raise UsageError(f"bad sector {text!r}; use phi1:phi2, deg:a:b or dyadic[:level]") from None
    if not 0 <= a < b <= 2 * math.pi:
        raise UsageError(f"sector {text!r} must satisfy 0 <= phi1 < phi2 <= 2 pi")
    return [(a, b)]


def parse_degrees(n: str | None, n_range: str | None) -> list[int]:
    if n_range:
        parts = n_range.split(":")
        try:
            a, b = int(parts[0]), int(parts[1])
            step = int(parts[2]) if len(parts) > 2 else 1
        except (ValueError, IndexError):
            raise UsageError(f"bad --n-range {n_range!r}; use a:b[:step]") from None
        if step < 1 or a < 1 or b < a:
            raise UsageError("--n-range needs 1 <= a <= b and step >= 1")
        return list(range(a, b + 1, step))
    if n:
        try:
            out = [int(x) for x in n.split(",")]
        except ValueError:
            raise UsageError(f"bad --n {n!r}") from None
        if min(out) < 1:
            raise UsageError("degrees must be >= 1")
        return out
    return []


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--family", help="binomial | cyclotomic_product (kronecker) | schur | multiplicity | random_disk")
    shared.add_argument("--poly", help='explicit polynomial, e.g. "z^4 - 1" or "-1,0,0,0,1"')
    shared.add_argument("--n", help="degree, or comma-separated degrees")
    shared.add_argument("--n-range", dest="n_range", help="inclusive degree range a:b[:step]")
    shared.add_argument("--M", type=float, default=None, help="leading-coefficient bound (schur, random_disk)")
    shared.add_argument("--m", type=int, default=None, help="multiplicity exponent (multiplicity family)")
    shared.add_argument("--seed", type=int, default=0)
    shared.add_argument("--tol", type=float, default=1e-12, help="root error-radius tolerance")
    shared.add_argument("--sectors", action="append", default=None, help="phi1:phi2 | deg:a:b | dyadic[:level]")
    shared.add_argument("--testfn", action="append", default=None, help="cor22 | cor23:n=64 | sector:phi1:phi2:eps")
    shared.add_argument("--r", type=float, default=None, help="smoothing radius (default 1/max(n, M(P)))")
    shared.add_argument("--jobs", type=int, default=1)
    shared.add_argument("--output", help="output file (default stdout)")
    shared.add_argument("--format", choices=("json", "csv"), default="json")
    shared.add_argument("--roots", action="store_true", help="include the roots in analyze output")
    shared.add_argument("--rhs-scale", dest="rhs_scale", type=float, default=1.0, help=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="equidist", description="Zeros of integer polynomials in the unit disk.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("analyze", "full record for one polynomial"),
        ("sweep", "one record per degree plus trend summary"),
        ("verify", "check every bound report; exit 1 on violations"),
        ("generate", "write coefficient lists, lowest degree first"),
        ("energy", "potential-theory diagnostics"),
    ):
        sub.add_parser(name, parents=[shared], help=text, description=text)
    return parser


@dataclass(frozen=True)
class Job:
    family: str | None
    n: int
    M: float
    seed: int
    m: int | None = None
    poly: tuple[int, ...] | None = None

    def source(self) -> dict:
        if self.poly is not None:
            return {"family": "poly"}
        src = {"family": self.family, "n": self.n, "M": self.M, "seed": self.seed}
        if self.m is not None:
            src["m"] = self.m
        return src

    def polynomial(self) -> IntPolynomial:
        if self.poly is not None:
            return IntPolynomial(self.poly)
        extras = {"m": self.m} if self.m is not None else {}
        return families.generate(families.FamilySpec(self.family, self.n, self.M, self.seed, extras))


def jobs_from_args(args, default_suite: bool = False) -> list[Job]:
    if args.poly:
        try:
            p = parse_poly(args.poly)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if p.is_zero or p.degree < 1:
            raise UsageError("the polynomial must have degree >= 1")
        return [Job(None, p.degree, 1.0, 0, poly=p.coeffs)]
    degrees = parse_degrees(args.n, args.n_range)
    if args.family is None:
        if default_suite:
            fams = VERIFY_FAMILIES
            degrees = degrees or list(VERIFY_DEGREES)
        else:
            raise UsageError("need --family or --poly")
    else:
        fam = FAMILY_ALIASES.get(args.family, args.family)
        if fam not in families.FAMILY_KINDS:
            raise UsageError(f"unknown family {args.family!r}")
        fams = ((fam, args.M if args.M is not None else (10.0 if fam == "schur" else 1.0)),)
    if not degrees:
        raise UsageError("need --n or --n-range")
    if args.M is not None and args.M < 1:
        raise UsageError("--M must be >= 1")
    return [Job(f, n, M, args.seed, args.m) for f, M in fams for n in degrees]


def options_from_args(args) -> report.AnalysisOptions:
    opts = report.AnalysisOptions(tol=args.tol, r=args.r, include_roots=args.roots, rhs_scale=args.rhs_scale)
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    if args.r is not None and not 0 < args.r < 1:
        raise UsageError("--r must lie in (0, 1)")
    if args.sectors:
        opts = replace(opts, sectors=tuple(s for text in args.sectors for s in parse_sector(text)))
    if args.testfn:
        for name in args.testfn:
            try:
                parse_testfn(name)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        opts = replace(opts, testfns=tuple(args.testfn))
    return opts


# --- commands --------------------------------------------------------------------------

def _analyze_job(job: Job, opts: report.AnalysisOptions) -> dict:
    try:
        p = job.polynomial()
    except (families.InfeasibleDegree, LookupError, ValueError) as exc:
        return {"schema": report.SCHEMA_VERSION, "source": job.source(), "n": job.n,
                "status": "generation_failure", "errors": [{"stage": "generate", "error": str(exc)}]}
    M = job.M if job.family in ("schur", "random_disk") else None
    return report.analyze(p, job.source(), replace(opts, M=M))


def run_jobs(jobs: list[Job], opts: report.AnalysisOptions, workers: int) -> list[dict]:
    """Analyze every job; results come back in job order whatever the worker count."""
    if workers <= 1 or len(jobs) <= 1:
        return [_analyze_job(j, opts) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_analyze_job, jobs, [opts] * len(jobs)))


def _encode(payload: dict, records: list[dict], fmt: str) -> str:
    if fmt == "csv":
        return report.dumps_csv(records)
    return report.dumps(payload) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    jobs = jobs_from_args(args)
    if len(jobs) != 1:
        raise UsageError("analyze takes exactly one polynomial; use sweep for several degrees")
    records = run_jobs(jobs, options_from_args(args), 1)
    _emit(_encode({"schema": report.SCHEMA_VERSION, "command": "analyze", "records": records}, records, args.format),
          args.output)
    return EXIT_NUMERIC if records[0].get("status") == "numerical_failure" else EXIT_OK


def cmd_sweep(args) -> int:
    jobs = jobs_from_args(args)
    records = run_jobs(jobs, options_from_args(args), args.jobs)
    payload = {"schema": report.SCHEMA_VERSION, "command": "sweep", "summary": report.sweep_summary(records),
               "records": records}
    _emit(_encode(payload, records, args.format), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    jobs = jobs_from_args(args, default_suite=True)
    records = run_jobs(jobs, options_from_args(args), args.jobs)
    bad = report.violations(records)
    failed = [r["source"] for r in records if r.get("status") in ("numerical_failure", "generation_failure")]
    payload = {
        "schema": report.SCHEMA_VERSION,
        "command": "verify",
        "polynomials": len(records),
        "reports": sum(len(r.get("reports", [])) for r in records),
        "violations": bad,
        "failures": failed,
    }
    _emit(_encode(payload, records, args.format), args.output)
    print(f"verify: {payload['reports']} reports, {len(bad)} violations, {len(failed)} failures", file=sys.stderr)
    if bad:
        return EXIT_VIOLATIONS
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_generate(args) -> int:
    lines = []
    for job in jobs_from_args(args):
        try:
            lines.append(dense_string(job.polynomial()))
        except (families.InfeasibleDegree, LookupError) as exc:
            raise UsageError(str(exc)) from None
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def cmd_energy(args) -> int:
    out = []
    for job in jobs_from_args(args):
        p = job.polynomial()
        rs = find_roots(p, args.tol)
        cm = zmeasure.counting_measure(rs)
        r = args.r if args.r is not None else 1 / max(p.degree, abs(p.leading))
        rec = {"source": job.source(), "polynomial": [str(c) for c in p.coeffs]}
        try:
            rec.update(energy.diagnostics(p, cm, r).to_dict())
            rec["discriminant_log_sum"] = energy.discriminant_log_sum(p)
        except (energy.SingularPoint, energy.ZeroDiscriminant) as exc:
            rec["error"] = str(exc)
        out.append(rec)
    _emit(report.dumps({"schema": report.SCHEMA_VERSION, "command": "energy", "records": out}) + "\n", args.output)
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "sweep": cmd_sweep, "verify": cmd_verify, "generate": cmd_generate,
            "energy": cmd_energy}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"equidist {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergence as exc:
        print(f"equidist {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"equidist {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
