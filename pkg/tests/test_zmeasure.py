import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidist.bounds import erdos_turan_rhs
from equidist.families import binomial, kronecker_product, schur_sample
from equidist.intpoly import exact_mean, parse_poly, power_sums
from equidist.roots import find_roots
from equidist.testfn import constant, cor22_phi
from equidist.zmeasure import (
    CountingMeasure,
    QuadratureError,
    counting_measure,
    dyadic_sectors,
    integrate,
    mean,
    moment,
    mu_integral,
    sector_count,
    sector_discrepancy,
)

from .oracles import trapezoid_circle

TWO_PI = 2 * math.pi


def cm_of(text_or_poly):
    p = parse_poly(text_or_poly) if isinstance(text_or_poly, str) else text_or_poly
    return counting_measure(find_roots(p))


def test_counting_measure_mass():
    cm = cm_of("z^3 - 1")
    assert cm.n == 3 and np.allclose(cm.weights, 1 / 3)
    assert math.isclose(cm.total_mass, 1.0)
    pts = sorted(cm_of("z^2 - 1").points, key=lambda z: z.real)
    assert np.allclose(pts, [-1, 1])


def test_empty_measure_rejected():
    with pytest.raises(ValueError):
        CountingMeasure(np.array([]))


def test_mean():
    for n in (2, 5, 16):
        assert abs(mean(cm_of(binomial(n)))) < 1e-14
    assert abs(mean(cm_of("z^2 - 3z + 2")) - 1.5) < 1e-14


def test_mean_matches_exact():
    tol = 1e-12
    for seed in range(5):
        p = schur_sample(70, 10, seed)
        assert abs(mean(cm_of(p)) - float(exact_mean(p))) <= p.degree * tol


def test_moments():
    cm = cm_of("z^4 - 1")
    assert abs(moment(cm, 2)) < 1e-14
    assert abs(moment(cm, 4) - 1) < 1e-14
    with pytest.raises(ValueError):
        moment(cm, 0)


def test_moments_match_power_sums():
    for n, seed in ((16, 0), (40, 1), (64, 2)):
        p = kronecker_product(n, seed)
        cm = cm_of(p)
        for m, s in enumerate(power_sums(p, 16), start=1):
            assert abs(moment(cm, m) * n - float(s)) < 1e-8


def test_sector_count_examples():
    cm = cm_of("z^4 - 1")
    assert sector_count(cm, 0, math.pi).count == 3
    assert sector_count(cm, math.pi / 4, 3 * math.pi / 4).count == 1
    sc = sector_count(cm, 0, math.pi)
    assert 0 <= sc.count <= sc.n


def test_sector_count_brute_force_z8():
    cm = cm_of("z^8 - 1")
    angles = [TWO_PI * k / 8 for k in range(8)]
    rng = np.random.default_rng(1)
    for _ in range(200):
        a, b = sorted(rng.uniform(0, TWO_PI, 2))
        # keep endpoints off the exact root angles so the oracle is unambiguous
        if min(abs(t - x) for t in angles for x in (a, b)) < 1e-6:
            continue
        assert sector_count(cm, a, b).count == sum(a <= t <= b for t in angles)


def test_closed_endpoints_and_boundary_flags():
    cm = cm_of("z^4 - 1")
    sc = sector_count(cm, math.pi / 2, math.pi)
    assert sc.count == 2 and sc.boundary_hits == 2


def test_origin_is_in_no_sector():
    cm = cm_of("z^3 - z")
    total = sum(sector_count(cm, a, b).count for a, b in dyadic_sectors(3))
    # zeros at angles 0 and pi each sit on two closed dyadic arcs
    assert total == 4
    assert all(sector_count(cm, a, b).count <= 2 for a, b in dyadic_sectors(3))


def test_partition_sums_to_nonzero_roots():
    # z^5 + z^2 + 3 has no positive real zero, so [0, 2pi] splits cleanly
    p = parse_poly("z^7 + z^4 + 3z^2")
    cm = cm_of(p)
    angles = np.angle(cm.points[cm.points != 0]) % TWO_PI
    edges = [0.0, 1.0, 2.5, 4.0, 5.2, TWO_PI]
    assert min(abs(t - e) for t in angles for e in edges) > 1e-6
    assert sum(sector_count(cm, a, b).count for a, b in zip(edges, edges[1:])) == p.degree - 2


def test_invalid_sectors():
    cm = cm_of("z^2 - 1")
    for a, b in ((1, 1), (2, 1), (-0.1, 1), (0, 7)):
        with pytest.raises(ValueError):
            sector_count(cm, a, b)


def test_discrepancy_examples():
    cm = cm_of("z^4 - 1")
    assert abs(sector_discrepancy(cm, 0, math.pi) - 0.25) < 1e-15
    # a thin sector missing every root
    assert abs(sector_discrepancy(cm, 0.3, 0.4) - 0.1 / TWO_PI) < 1e-15
    for n in (5, 16, 33):
        cm = cm_of(binomial(n))
        for a, b in dyadic_sectors(4):
            d = sector_discrepancy(cm, a, b)
            assert 0 <= d <= 2 / n
            assert d <= erdos_turan_rhs(binomial(n))


@given(st.floats(0, TWO_PI), st.floats(0.01, 3.0), st.floats(0, 2.5))
@settings(max_examples=60, deadline=None)
def test_discrepancy_rotation_invariant(a, width, rot):
    b = a + width
    if b >= TWO_PI or a + rot + width >= TWO_PI:
        return
    angles = np.array([0.2, 1.3, 2.9, 4.4, 5.7])
    turned = (angles + rot) % TWO_PI
    if min(abs(t - x) for t in turned for x in (a + rot, b + rot)) < 1e-9:
        return
    d0 = sector_discrepancy(CountingMeasure(np.exp(1j * angles)), a, b)
    d1 = sector_discrepancy(CountingMeasure(np.exp(1j * turned)), a + rot, b + rot)
    assert abs(d0 - d1) <= 1e-12


def test_integrate():
    cm = cm_of(binomial(12))
    assert integrate(cm, constant(0.0)) == 0
    assert abs(integrate(cm, cor22_phi())) < 1e-14
    phi = cor22_phi()
    want = (1 + 2 * (1 - math.log(2))) / 2
    assert abs(integrate(cm_of("z^2 - 3z + 2"), phi) - want) < 1e-14


def test_mu_integral():
    assert abs(mu_integral(lambda z: z.real)) < 1e-12
    assert abs(mu_integral(lambda z: z.real**2) - 0.5) < 1e-12
    assert abs(mu_integral(constant(3.5)) - 3.5) < 1e-12
    assert abs(mu_integral(cor22_phi())) < 1e-12


def test_mu_integral_stall():
    with pytest.raises(QuadratureError):
        mu_integral(lambda z: np.sign(np.sin(1e7 * np.angle(z))), tol=1e-14, max_points=2**12)


def test_integrate_on_roots_of_unity_equals_trapezoid():
    phi = cor22_phi()
    for n in (7, 24):
        cm = cm_of(binomial(n))
        assert abs(integrate(cm, phi) - trapezoid_circle(lambda z: float(phi(z)), n)) < 1e-13
