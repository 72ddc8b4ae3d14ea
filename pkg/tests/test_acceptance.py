"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; they are also repeated in the terminal summary.
"""
import math
import random
import subprocess
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

from equidist.bounds import (
    energy22_report,
    energy22_rhs,
    erdos_turan_report,
    mahler_jensen,
    mahler_quadrature,
    main23_report,
    main23_rhs,
    schur_mean_report,
    sup_norm,
)
from equidist.energy import (
    SignedDifference,
    SmoothedMeasure,
    diagnostics,
    dirichlet_of_potential,
    discrete_energy,
    discriminant_log_sum,
)
from equidist.families import binomial, kronecker_product, schur_sample
from equidist.intpoly import IntPolynomial, derivative, discriminant, exact_mean, log_abs_int, power_sums
from equidist.roots import find_roots
from equidist.testfn import DEFAULT_SECTOR_FUNCTIONS, cor22_phi, cor23_for_degree, smoothed_indicator
from equidist.zmeasure import counting_measure, dyadic_sectors, mean, moment, sector_discrepancy

from .oracles import sylvester_resultant

RESULTS: dict[int, str] = {}

SWEEP_DEGREES = (8, 16, 32, 55, 64, 100, 128, 200, 256, 384, 512)
SCHUR_DEGREES = (55, 64, 100, 128, 200, 256, 384, 512)
SCHUR_SEEDS = (0, 1)
SCHUR_M = 10
EPS = 1e-9  # numeric slack scale: a bound holds when slack >= -EPS (1 + |rhs|)
LOG_SUP_CONSTANT = 1.0
COR23_CONSTANT = 4 * math.pi


def verdict(num: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {num:2d}: {detail}"
    RESULTS[num] = line
    print(line, flush=True)
    assert ok, line


@lru_cache(maxsize=None)
def roots_of(p: IntPolynomial):
    return find_roots(p)


def test_01_discriminant_exactness():
    t0 = time.perf_counter()
    bad = []
    for n in range(2, 31):
        p = binomial(n)
        d = discriminant(p)
        if abs(d) != n**n:
            bad.append(n)
        if n <= 8:
            # Delta = (-1)^{n(n-1)/2} Res(P, P') / a_n
            res = sylvester_resultant(list(p.coeffs), list(derivative(p).coeffs))
            if (-1) ** (n * (n - 1) // 2) * res != d:
                bad.append(n)
    dt = time.perf_counter() - t0
    verdict(1, not bad and dt < 10, f"|disc(z^n - 1)| = n^n for n = 2..30, Sylvester agrees n <= 8 ({dt:.2f}s)")


def test_02_energy_discriminant_identity():
    worst = 0.0
    count = 0
    for n in (2, 3, 5, 8, 13, 21, 34, 55, 64):
        for seed in range(3):
            p = kronecker_product(n, seed)
            cm = counting_measure(roots_of(p))
            from_roots = -(n**2) * discrete_energy(cm)
            exact = discriminant_log_sum(p)
            tol = 1e-9 * (1 + log_abs_int(discriminant(p)))
            worst = max(worst, abs(from_roots - exact) / tol)
            count += 1
    verdict(2, worst <= 1, f"{count} kronecker samples, worst error / tolerance = {worst:.3g}")


def test_03_mahler_consistency():
    rng = random.Random(2024)
    worst = 0.0
    for _ in range(50):
        n = rng.randint(1, 64)
        c = [rng.randint(-20, 20) for _ in range(n + 1)]
        c[-1] = c[-1] or 1
        p = IntPolynomial(c)
        a = mahler_jensen(p, roots_of(p)).value
        b = mahler_quadrature(p).value
        worst = max(worst, abs(a - b) / a)
    worst_lead = 0.0
    for n in (10, 30, 64):
        for seed in range(3):
            p = schur_sample(n, SCHUR_M, seed)
            worst_lead = max(worst_lead, abs(mahler_jensen(p, roots_of(p)).value - abs(p.leading)))
    ok = worst <= 1e-6 and worst_lead <= 1e-8
    verdict(3, ok, f"Jensen vs quadrature rel err {worst:.2e} (50 polys); |M - |a_n|| {worst_lead:.2e} on disk samples")


def test_04_sector_suite():
    t0 = time.perf_counter()
    sectors = dyadic_sectors(4)
    violations = 0
    reports = 0
    gaps = []
    binomial_ok = True
    for n in SWEEP_DEGREES:
        for p in (binomial(n), kronecker_product(n, 0), schur_sample(n, SCHUR_M, 0)):
            rs = roots_of(p)
            norm = sup_norm(p)
            for a, b in sectors:
                rep = erdos_turan_report(p, rs, a, b, norm)
                reports += 1
                violations += not rep.holds(EPS)
        cm = counting_measure(roots_of(binomial(n)))
        d = max(sector_discrepancy(cm, a, b) for a, b in sectors)
        binomial_ok &= d <= 2 / n
        gaps.append(16 * math.sqrt(math.log(2) / n) / max(d, 1 / n))
    dt = time.perf_counter() - t0
    ok = violations == 0 and binomial_ok and dt < 120
    verdict(
        4,
        ok,
        f"{reports} sector reports, {violations} violations; z^n - 1 discrepancy <= 2/n, "
        f"rhs/lhs gap {min(gaps):.1f}..{max(gaps):.1f} ({dt:.1f}s)",
    )


@pytest.fixture(scope="module")
def schur_sweep():
    phis = [cor22_phi()] + [smoothed_indicator(*s) for s in DEFAULT_SECTOR_FUNCTIONS]
    out = []
    for n in SCHUR_DEGREES:
        for seed in SCHUR_SEEDS:
            p = schur_sample(n, SCHUR_M, seed)
            out.append((p, roots_of(p)))
    return phis, out


def test_05_energy22_suite(schur_sweep):
    phis, samples = schur_sweep
    bad = 0
    worst = 0.0
    for p, rs in samples:
        for phi in phis:
            rep = energy22_report(p, rs, phi)
            bad += not (rep.binding and rep.holds(EPS))
            worst = max(worst, rep.lhs / rep.rhs)
    verdict(5, bad == 0, f"{len(samples) * len(phis)} (sample, phi) pairs, {bad} violations, max lhs/rhs {worst:.3g}")


def test_06_schur_mean(schur_sweep):
    _, samples = schur_sweep
    bad = 0
    worst_mean = 0.0
    for p, rs in samples:
        rep = schur_mean_report(p, rs, SCHUR_M)
        bad += not (rep.binding and rep.holds(EPS))
        worst_mean = max(worst_mean, abs(mean(counting_measure(rs)) - float(exact_mean(p))))
    ok = bad == 0 and worst_mean <= 1e-10
    verdict(6, ok, f"{len(samples)} samples, {bad} violations of 8 sqrt(log n / n); root mean error {worst_mean:.2e}")


def test_07_main_inequality_chain(schur_sweep):
    phis, samples = schur_sweep
    bad = 0
    for p, rs in samples:
        for phi in phis:
            rep = main23_report(p, rs, phi)
            rhs = main23_rhs(p, phi, rs=rs)
            e22 = energy22_rhs(p, phi.lipschitz_A, phi.support_R, rs)
            bad += not (rep.binding and rep.holds(EPS) and rhs <= e22)
    verdict(7, bad == 0, f"lhs <= main rhs <= energy rhs on {len(samples) * len(phis)} pairs, {bad} violations")


def test_08_energy_chain():
    configs = []
    for n in (2, 3, 4, 5, 6, 8):
        configs += [(binomial(n), r) for r in (1 / n, 0.05, 0.2)]
    for n in (12, 24, 40, 64):
        configs += [(kronecker_product(n, 1), r) for r in (1 / n, 0.05, 0.2)]
    bad = 0
    worst_rel = 0.0
    for p, r in configs:
        cm = counting_measure(roots_of(p))
        d = diagnostics(p, cm, r)
        bad += not (-EPS <= d.energy_sigma <= d.upper_bound + EPS * (1 + abs(d.upper_bound)))
        if p.degree <= 8 and r >= 0.05:
            sd = SignedDifference(SmoothedMeasure.from_counting(cm, r))
            grid = dirichlet_of_potential(sd)
            want = 2 * math.pi * d.energy_sigma
            worst_rel = max(worst_rel, abs(grid - want) / want)
    ok = len(configs) == 30 and bad == 0 and worst_rel <= 0.05
    verdict(8, ok, f"0 <= I <= bound on {len(configs)} configs ({bad} bad); D[p_sigma] vs 2 pi I within {worst_rel:.2%}")


def test_09_kronecker_trends():
    degrees = (8, 16, 32, 64, 128, 256, 512, 1024)
    table = {}
    for n in degrees:
        vals = []
        for seed in range(4):
            cm = counting_measure(roots_of(kronecker_product(n, seed)))
            vals.append([abs(moment(cm, m)) for m in (1, 2, 3)])
        table[n] = [max(v[i] for v in vals) for i in range(3)]
    decays = all(table[1024][i] < table[8][i] and table[1024][i] < 0.1 for i in range(3))
    roots_n = [math.exp(sup_norm(binomial(n)).log_value / n) for n in degrees]
    exact = all(abs(v - 2 ** (1 / n)) <= 1e-9 for v, n in zip(roots_n, degrees))
    monotone = all(a > b > 1 for a, b in zip(roots_n, roots_n[1:]))
    ok = decays and exact and monotone
    m8 = ", ".join(f"{v:.3f}" for v in table[8])
    m1024 = ", ".join(f"{v:.4f}" for v in table[1024])
    verdict(9, ok, f"max |moment 1..3| n=8: [{m8}] -> n=1024: [{m1024}]; binomial sup^(1/n) = 2^(1/n), decreasing")


def test_10_growth_diagnostics(schur_sweep):
    _, samples = schur_sweep
    growth = max(sup_norm(p).log_value / (math.sqrt(p.degree) * math.log(p.degree)) for p, _ in samples)
    ratios = [cor23_for_degree(n).dirichlet / math.log(n) for n in (8, 16, 32, 64, 128, 256, 512)]
    ok = growth <= LOG_SUP_CONSTANT and max(ratios) <= COR23_CONSTANT
    verdict(
        10,
        ok,
        f"max log sup / (sqrt n log n) = {growth:.3f} <= {LOG_SUP_CONSTANT}; "
        f"D(cor23)/log n in [{min(ratios):.2f}, {max(ratios):.2f}] <= 4 pi",
    )


def test_11_newton_oracle():
    polys = [kronecker_product(n, 2) for n in (16, 40, 64)]
    polys += [schur_sample(n, SCHUR_M, 3) for n in (20, 40, 64)]
    polys += [binomial(n) for n in (7, 64)]
    worst = 0.0
    for p in polys:
        cm = counting_measure(roots_of(p))
        for m, s in enumerate(power_sums(p, 16), start=1):
            worst = max(worst, abs(moment(cm, m) - complex(s / p.degree)))
    verdict(11, worst <= 1e-8, f"exact power sums vs root moments, m <= 16, {len(polys)} polys: max error {worst:.2e}")


def test_12_determinism(tmp_path):
    argv = ["sweep", "--family", "schur", "--M", "10", "--n", "55,64,100", "--seed", "7", "--jobs", "2"]
    outs = []
    for k in range(2):
        f = tmp_path / f"run{k}.json"
        subprocess.run([sys.executable, "-m", "equidist", *argv, "--output", str(f)], check=True)
        outs.append(f.read_bytes())
    verdict(12, outs[0] == outs[1] and len(outs[0]) > 0, f"two sweep runs byte-identical ({len(outs[0])} bytes)")
