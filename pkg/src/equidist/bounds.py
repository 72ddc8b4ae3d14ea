"""Mahler measure, circle norms and the right-hand sides of the equidistribution bounds.

Every inequality instance is packaged as a :class:`BoundReport` holding both
sides, their difference and the inputs needed to reproduce it.  Reports whose
polynomial falls outside the theorem's hypotheses are still produced, but
carry ``flags`` and are marked non-binding.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize_scalar

from . import zmeasure
from .intpoly import IntPolynomial, PolynomialError, discriminant, exact_mean, is_squarefree, log_abs_int
from .roots import NonConvergence, RootSet, find_roots, verify_in_disk
from .testfn import TestFunction
from .zmeasure import CountingMeasure, QuadratureError

TWO_PI = 2 * math.pi
ENERGY22_MIN_DEGREE = 55
SCHUR_HISTORICAL = 1 - math.sqrt(math.e) / 2
REPORT_KINDS = ("erdos_turan", "energy_22", "main_23", "schur_mean")


class HypothesisViolation(ValueError):
    """The polynomial does not satisfy a theorem's hypotheses.

    ``value`` holds the right-hand side evaluated anyway, when it is defined.
    """

    def __init__(self, message: str, value: float | None = None, flags: tuple[str, ...] = ()):
        super().__init__(message)
        self.value = value
        self.flags = flags


class ZeroCoefficient(ValueError):
    """The constant coefficient vanishes where the bound needs ``a_0 != 0``."""


class ZeroDiscriminant(ValueError):
    """``Delta(P) = 0``: repeated zeros, so the energy bound is undefined."""


class InfeasibleRadius(ValueError):
    """The bracketed energy term is negative at this ``r``; shrink ``r``."""


@dataclass(frozen=True)
class NormValue:
    """A circle norm. ``log_value`` stays finite when ``value`` overflows."""

    value: float
    kind: str
    certified_error: float = 0.0
    log_value: float | None = None

    def __post_init__(self):
        if self.log_value is None:
            object.__setattr__(self, "log_value", math.log(self.value) if self.value > 0 else -math.inf)


@dataclass(frozen=True)
class BoundReport:
    kind: str
    lhs: float
    rhs: float
    inputs: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def binding(self) -> bool:
        return not self.flags

    def holds(self, eps_scale: float = 1e-9) -> bool:
        return self.slack >= -eps_scale * (1 + abs(self.rhs))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "binding": self.binding,
            "flags": list(self.flags),
            "inputs": dict(self.inputs),
        }


# --- helpers -------------------------------------------------------------------

def _scaled_coeffs(p: IntPolynomial) -> tuple[np.ndarray, float]:
    """Float coefficients divided by ``2**s`` so that sums of them stay finite."""
    big = max(abs(c).bit_length() for c in p.coeffs)
    s = max(0, big + len(p.coeffs).bit_length() - 900)
    c = np.array([float(a >> s if a >= 0 else -((-a) >> s)) for a in p.coeffs])
    return c, s * math.log(2.0)


def _abs_on_circle(c: np.ndarray):
    rev = c[::-1]
    return lambda t: abs(np.polyval(rev, complex(math.cos(t), math.sin(t))))


def deflate_origin(p: IntPolynomial) -> tuple[IntPolynomial, int]:
    """``p = z**k q`` with ``q(0) != 0``; returns ``(q, k)``."""
    if p.is_zero:
        raise PolynomialError("zero polynomial")
    k = next(i for i, c in enumerate(p.coeffs) if c != 0)
    return IntPolynomial(p.coeffs[k:]), k


@lru_cache(maxsize=256)
def cached_discriminant(p: IntPolynomial) -> int:
    return discriminant(p)


def _roots_or_best(p: IntPolynomial) -> RootSet:
    try:
        return find_roots(p)
    except NonConvergence as exc:
        if exc.best is None:
            raise
        return exc.best


# --- norms ---------------------------------------------------------------------

def log_mahler(leading: int, points: np.ndarray, radii: np.ndarray) -> tuple[float, float]:
    """``log M`` from Jensen's formula and a bound on its error from the radii."""
    mod = np.abs(points)
    base = float(np.sum(np.log(np.maximum(1.0, mod))))
    upper = float(np.sum(np.log(np.maximum(1.0, mod + radii))))
    return log_abs_int(leading) + base, upper - base


def mahler_jensen(p: IntPolynomial, rs: RootSet) -> NormValue:
    """``|a_n| prod max(1, |alpha_k|)``."""
    if rs.source_degree != p.degree:
        raise ValueError("root set does not belong to this polynomial")
    log_m, dlog = log_mahler(p.leading, rs.values, rs.radii)
    value = _exp(log_m)
    return NormValue(value, "mahler", value * math.expm1(dlog), log_m)


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _circle_breaks(p: IntPolynomial, rs: RootSet | None, near: float = 1e-3) -> list[float]:
    """Uniform panels plus the angles of zeros within ``near`` of the circle."""
    k = max(8, p.degree)
    pts = {TWO_PI * j / k for j in range(k + 1)}
    if rs is not None and len(rs):
        close = np.abs(np.abs(rs.values) - 1.0) <= near
        pts |= {float(a) for a in np.mod(np.angle(rs.values[close]), TWO_PI)}
    return sorted(pts)


def _panel_quad(f, breaks: list[float], tol: float) -> float:
    total = 0.0
    per = tol / len(breaks)
    for a, b in zip(breaks, breaks[1:]):
        if b - a <= 1e-15:
            continue
        res = quad(f, a, b, epsabs=per, epsrel=0.0, limit=200, full_output=1)
        val, err = res[0], res[1]
        if len(res) > 3 and err > max(10 * per, 1e-9):
            raise QuadratureError(f"circle quadrature stalled on [{a:.6g}, {b:.6g}] (err {err:.3g})")
        total += val
    return total / TWO_PI


def mahler_quadrature(p: IntPolynomial, tol: float = 1e-10, rs: RootSet | None = None) -> NormValue:
    """``exp((1/2 pi) int log|P(e^{it})| dt)`` by panel-wise adaptive quadrature.

    Panels break at the angles of zeros near the circle, where the logarithm
    is singular; ``|P|`` is floored at ``1e-300`` so a node landing on a zero
    does not produce ``-inf``.
    """
    if p.is_zero:
        raise PolynomialError("Mahler measure of the zero polynomial")
    if p.degree == 0:
        return NormValue(float(abs(p.leading)), "mahler", 0.0)
    if rs is None:
        rs = _roots_or_best(p)
    c, log_scale = _scaled_coeffs(p)
    absval = _abs_on_circle(c)

    def f(t):
        return math.log(max(absval(t), 1e-300))

    log_m = _panel_quad(f, _circle_breaks(p, rs), tol) + log_scale
    return NormValue(_exp(log_m), "mahler", _exp(log_m) * tol, log_m)


def lp_norm(p: IntPolynomial, pexp: float, tol: float = 1e-10, rs: RootSet | None = None) -> NormValue:
    """``((1/2 pi) int |P(e^{it})|**p dt)**(1/p)``."""
    if pexp <= 0:
        raise ValueError("p must be positive")
    if p.is_zero:
        return NormValue(0.0, f"l_p({pexp:g})", 0.0)
    if p.degree == 0:
        return NormValue(float(abs(p.leading)), f"l_p({pexp:g})", 0.0)
    if rs is None:
        rs = _roots_or_best(p)
    c, log_scale = _scaled_coeffs(p)
    # normalize by the grid maximum so the integrand sits in [0, ~1]
    top = float(np.max(np.abs(np.fft.fft(c, 16 * len(c)))))
    absval = _abs_on_circle(c / top)
    mean = _panel_quad(lambda t: absval(t) ** pexp, _circle_breaks(p, rs), tol)
    if mean <= 0:
        raise QuadratureError("l_p integral vanished")
    log_v = math.log(mean) / pexp + math.log(top) + log_scale
    return NormValue(_exp(log_v), f"l_p({pexp:g})", _exp(log_v) * tol / max(mean, 1e-300) / pexp, log_v)


def sup_norm(p: IntPolynomial, density: int = 32) -> NormValue:
    """``max_{|z|=1} |P(z)|`` from an FFT grid refined by golden-section search.

    The grid has ``N >= density * n >= 16 n`` points (a power of two).  The
    maximum lies within ``h/2 = pi/N`` of a node and ``|P|^2`` is a
    trigonometric polynomial of degree ``n``, so Bernstein's inequality for
    its second derivative gives ``||P||^2 <= grid_max^2 / (1 - (n h)^2 / 8)``;
    ``certified_error`` is that upper bound minus the reported value.
    """
    if p.is_zero:
        raise PolynomialError("sup norm of the zero polynomial")
    if density < 16:
        raise ValueError("grid density below 16 points per degree is not certified")
    n = p.degree
    if n == 0:
        return NormValue(float(abs(p.leading)), "sup", 0.0)
    c, log_scale = _scaled_coeffs(p)
    N = 1 << max(6, (density * n - 1).bit_length())
    vals = np.abs(np.fft.fft(c, N))
    grid_max = float(vals.max())
    absval = _abs_on_circle(c)
    h = TWO_PI / N
    # local maxima of the grid, best first
    left, right = np.roll(vals, 1), np.roll(vals, -1)
    peaks = np.nonzero((vals >= left) & (vals >= right))[0]
    peaks = peaks[np.argsort(-vals[peaks], kind="stable")][:8]
    best = grid_max
    for j in peaks:
        t = -h * float(j)  # fft evaluates at exp(-2 pi i j / N)
        try:
            res = minimize_scalar(lambda s: -absval(s), bracket=(t - h, t, t + h), method="golden", tol=1e-12)
        except ValueError:
            continue  # a tie with a neighbour: the node itself is the local top
        best = max(best, -float(res.fun))
    upper = grid_max / math.sqrt(1 - (n * h) ** 2 / 8)
    log_v = math.log(best) + log_scale
    return NormValue(_exp(log_v), "sup", max(0.0, upper - best) * _exp(log_scale), log_v)


# --- right-hand sides ------------------------------------------------------------

def erdos_turan_rhs(p: IntPolynomial, norm: NormValue | None = None) -> float:
    """``16 sqrt((1/n) log(||P||_inf / sqrt|a_0 a_n|))``."""
    if p.is_zero or p.degree < 1:
        raise PolynomialError("the sector bound needs degree >= 1")
    if p[0] == 0:
        raise ZeroCoefficient("a_0 = 0; deflate the zeros at the origin first")
    norm = norm or sup_norm(p)
    arg = norm.log_value - 0.5 * (log_abs_int(p[0]) + log_abs_int(p.leading))
    # ||P||^2 >= |a_0|^2 + |a_n|^2 >= 2 |a_0 a_n|, so arg >= log(2)/2
    assert arg > 0, f"sup norm below sqrt|a_0 a_n| (log ratio {arg})"
    return 16 * math.sqrt(arg / p.degree)


def hypotheses_22(p: IntPolynomial, min_degree: int = ENERGY22_MIN_DEGREE) -> tuple[str, ...]:
    flags = []
    if p.degree < min_degree:
        flags.append(f"degree<{min_degree}")
    if not is_squarefree(p):
        flags.append("not_squarefree")
    return tuple(flags)


def energy22_rhs(
    p: IntPolynomial, A: float, R: float, rs: RootSet | None = None, strict: bool = True
) -> float:
    """``A (2R + 1) sqrt(log max(n, M(P)) / n)`` with ``M`` from Jensen's formula.

    Raises :class:`HypothesisViolation` (carrying the value) for ``n < 55`` or
    repeated zeros unless ``strict`` is false.
    """
    n = p.degree
    if n < 1:
        raise PolynomialError("degree must be >= 1")
    rs = rs if rs is not None else _roots_or_best(p)
    log_m = mahler_jensen(p, rs).log_value
    value = A * (2 * R + 1) * math.sqrt(max(math.log(n), log_m) / n)
    flags = hypotheses_22(p)
    if flags and strict:
        raise HypothesisViolation(", ".join(flags), value, flags)
    return value


def energy_bracket(n: int, log_m: float, log_an2_delta: float, r: float) -> float:
    """``(2/n) log M - (1/n^2) log|a_n^2 Delta| - (1/n) log r + 4 r``."""
    return 2 * log_m / n - log_an2_delta / n**2 - math.log(r) / n + 4 * r


def log_an2_delta(p: IntPolynomial) -> float:
    delta = cached_discriminant(p)
    if delta == 0:
        raise ZeroDiscriminant("discriminant vanishes (repeated zeros)")
    return 2 * log_abs_int(p.leading) + log_abs_int(delta)


def default_radius(n: int, mahler: float) -> float:
    return 1.0 / max(n, mahler)


@dataclass(frozen=True)
class Main23Terms:
    r: float
    omega: float
    dirichlet: float
    log_mahler: float
    log_an2_delta: float
    bracket: float

    @property
    def rhs(self) -> float:
        return self.omega + math.sqrt(self.dirichlet / TWO_PI) * math.sqrt(self.bracket)


def main23_terms(p: IntPolynomial, phi: TestFunction, r: float | None = None, rs: RootSet | None = None) -> Main23Terms:
    n = p.degree
    if n < 1:
        raise PolynomialError("degree must be >= 1")
    rs = rs if rs is not None else _roots_or_best(p)
    m = mahler_jensen(p, rs)
    if r is None:
        r = default_radius(n, m.value)
    if not 0 < r < 1:
        raise ValueError("r must lie in (0, 1)")
    lad = log_an2_delta(p)
    bracket = energy_bracket(n, m.log_value, lad, r)
    if bracket < 0:
        raise InfeasibleRadius(f"energy bracket {bracket:.3g} < 0 at r = {r:g}")
    return Main23Terms(r, phi.lipschitz_A * r, phi.dirichlet_upper, m.log_value, lad, bracket)


def main23_rhs(p: IntPolynomial, phi: TestFunction, r: float | None = None, rs: RootSet | None = None) -> float:
    """``A r + sqrt(D[phi] / 2 pi) * bracket**(1/2)``; ``r`` defaults to ``1/max(n, M(P))``.

    The modulus of continuity enters through its certified bound ``A r`` and
    ``D[phi]`` through its upper error bar.
    """
    return main23_terms(p, phi, r, rs).rhs


# --- reports ---------------------------------------------------------------------

@lru_cache(maxsize=64)
def _mu(phi: TestFunction) -> float:
    return zmeasure.mu_integral(phi)


def _deviation(cm: CountingMeasure, phi: TestFunction) -> float:
    return abs(zmeasure.integrate(cm, phi) - _mu(phi))


def erdos_turan_report(
    p: IntPolynomial, rs: RootSet, phi1: float, phi2: float, norm: NormValue | None = None
) -> BoundReport:
    """Sector discrepancy against its bound, after deflating zeros at the origin."""
    q, k = deflate_origin(p)
    inputs = {"n": p.degree, "sector": [phi1, phi2]}
    if q.degree < 1:
        return BoundReport("erdos_turan", 0.0, 0.0, inputs, ("no_nonzero_roots",))
    if k:
        keep = np.abs(rs.values) > rs.radii
        rs = RootSet(rs.values[keep], rs.radii[keep], q.degree)
        inputs["deflated"] = k
        norm = None
    norm = norm or sup_norm(q)
    cm = zmeasure.counting_measure(rs)
    sc = zmeasure.sector_count(cm, phi1, phi2)
    lhs = abs(sc.fraction - (phi2 - phi1) / TWO_PI)
    inputs.update(count=sc.count, boundary_hits=sc.boundary_hits, sup_norm=norm.value, log_sup_norm=norm.log_value)
    return BoundReport("erdos_turan", lhs, erdos_turan_rhs(q, norm), inputs)


def energy22_report(p: IntPolynomial, rs: RootSet, phi: TestFunction) -> BoundReport:
    cm = zmeasure.counting_measure(rs)
    m = mahler_jensen(p, rs)
    try:
        rhs, flags = energy22_rhs(p, phi.lipschitz_A, phi.support_R, rs), ()
    except HypothesisViolation as exc:
        rhs, flags = exc.value, exc.flags
    inputs = {
        "n": p.degree,
        "mahler": m.value,
        "A": phi.lipschitz_A,
        "R": phi.support_R,
        "testfn": phi.name,
    }
    return BoundReport("energy_22", _deviation(cm, phi), rhs, inputs, flags)


def main23_report(p: IntPolynomial, rs: RootSet, phi: TestFunction, r: float | None = None) -> BoundReport:
    cm = zmeasure.counting_measure(rs)
    inputs = {"n": p.degree, "A": phi.lipschitz_A, "R": phi.support_R, "testfn": phi.name}
    lhs = _deviation(cm, phi)
    try:
        t = main23_terms(p, phi, r, rs)
    except (ZeroDiscriminant, InfeasibleRadius) as exc:
        flag = "zero_discriminant" if isinstance(exc, ZeroDiscriminant) else "infeasible_radius"
        return BoundReport("main_23", lhs, math.nan, inputs, (flag,))
    inputs.update(r=t.r, omega=t.omega, dirichlet=t.dirichlet, log_mahler=t.log_mahler, bracket=t.bracket)
    return BoundReport("main_23", lhs, t.rhs, inputs)


def schur_rhs(n: int) -> float:
    """``8 sqrt(log n / n)``."""
    return 8 * math.sqrt(math.log(n) / n)


def schur_mean_report(p: IntPolynomial, rs: RootSet, M: float | None = None) -> BoundReport:
    """``|s_n|`` against ``8 sqrt(log n / n)``.

    Flags (making the report non-binding) when ``n < max(M, 55)``, when the
    zeros are not simple, when some zero leaves the disk or when
    ``|a_n| > M``.  ``M`` defaults to ``|a_n|``.
    """
    n = p.degree
    M = abs(p.leading) if M is None else M
    flags = []
    if n < max(M, ENERGY22_MIN_DEGREE):
        flags.append("degree<max(M,55)")
    if abs(p.leading) > M:
        flags.append("leading>M")
    if not is_squarefree(p):
        flags.append("not_squarefree")
    if not verify_in_disk(rs):
        flags.append("zero_outside_disk")
    exact = exact_mean(p)
    lhs = abs(zmeasure.mean(zmeasure.counting_measure(rs)))
    inputs = {
        "n": n,
        "M": M,
        "mean_exact": _fraction_str(exact),
        "mean_float": float(exact),
        "schur_reference": SCHUR_HISTORICAL,
    }
    return BoundReport("schur_mean", lhs, schur_rhs(n) if n > 1 else math.inf, inputs, tuple(flags))


def _fraction_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
