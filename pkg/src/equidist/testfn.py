"""Compactly supported Lipschitz test functions on the plane.

A :class:`TestFunction` bundles a vectorized evaluator with a certified
Lipschitz constant ``A``, a support radius ``R`` and its Dirichlet integral
``D = iint |grad phi|^2 dA``.  Built-ins carry analytic gradients so their
Dirichlet integrals come from graded polar Gauss-Legendre quadrature; any
other function falls back to the central-difference grid estimate of
:func:`dirichlet_integral`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

TWO_PI = 2 * math.pi
E = math.e

Evaluator = Callable[[np.ndarray], np.ndarray]
Gradient = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


@dataclass(frozen=True)
class PolarLayout:
    """Where the integrand of a polar Dirichlet quadrature has kinks or peaks."""

    radial_breaks: tuple[float, ...]
    angular_breaks: tuple[float, ...] = ()
    radial_focus: tuple[float, ...] = ()
    angular_focus: tuple[float, ...] = ()
    finest: float = 1e-6


@dataclass(frozen=True, eq=False)
class TestFunction:
    name: str
    evaluator: Evaluator
    lipschitz_A: float
    support_R: float
    gradient: Gradient | None = None
    layout: PolarLayout | None = None
    dirichlet_grid_h: float = 1 / 256
    meta: dict = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def evaluate(self, z) -> np.ndarray:
        return self.evaluator(np.asarray(z, dtype=complex))

    def __call__(self, z):
        out = self.evaluate(z)
        return float(out) if np.ndim(out) == 0 else out

    @cached_property
    def _dirichlet(self) -> tuple[float, float]:
        if self.lipschitz_A == 0:
            return 0.0, 0.0
        if self.gradient is not None and self.layout is not None:
            return polar_dirichlet(self.gradient, self.layout)
        est = dirichlet_integral(self, self.dirichlet_grid_h)
        return est.value, est.error

    @property
    def dirichlet(self) -> float:
        return self._dirichlet[0]

    @property
    def dirichlet_error(self) -> float:
        return self._dirichlet[1]

    @property
    def dirichlet_upper(self) -> float:
        """Dirichlet integral plus its error bar, the value fed to bounds."""
        return self._dirichlet[0] + self._dirichlet[1]


# --- quadrature helpers --------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)


def _graded(a: float, b: float, foci, finest: float, uniform: int) -> list[float]:
    """Breakpoints on [a, b], geometrically refined toward any focus inside it."""
    pts = {a, b}
    for k in range(1, uniform):
        pts.add(a + (b - a) * k / uniform)
    for f in foci:
        if not (a <= f <= b):
            continue
        pts.add(f)
        for side in (a, b):
            w = abs(side - f)
            while w > finest:
                w *= 0.5
                pts.add(f + math.copysign(w, side - f))
    return sorted(p for p in pts if a <= p <= b)


def _gl_nodes(breaks: list[float]) -> tuple[np.ndarray, np.ndarray]:
    xs, ws = [], []
    for u, v in zip(breaks, breaks[1:]):
        if v <= u:
            continue
        half = 0.5 * (v - u)
        xs.append(u + half * (_GL_X + 1))
        ws.append(half * _GL_W)
    return np.concatenate(xs), np.concatenate(ws)


def _circular_breaks(angles, foci, finest: float) -> list[float]:
    base = sorted({a % TWO_PI for a in angles} | {0.0, TWO_PI})
    out: list[float] = []
    fs = [f % TWO_PI for f in foci] + [f % TWO_PI - TWO_PI for f in foci] + [f % TWO_PI + TWO_PI for f in foci]
    for u, v in zip(base, base[1:]):
        uniform = max(1, int(math.ceil((v - u) / (math.pi / 8))))
        seg = _graded(u, v, fs, finest, uniform)
        out.extend(seg if not out else seg[1:])
    return out


def polar_dirichlet(gradient: Gradient, layout: PolarLayout) -> tuple[float, float]:
    """Dirichlet integral by tensor Gauss-Legendre in polar coordinates.

    The error bar is the change from halving every panel.
    """

    def run(split: int) -> float:
        rb = []
        rbreaks = list(layout.radial_breaks)
        for u, v in zip(rbreaks, rbreaks[1:]):
            seg = _graded(u, v, layout.radial_focus, layout.finest, 2 * split)
            rb.extend(seg if not rb else seg[1:])
        tb = _circular_breaks(layout.angular_breaks, layout.angular_focus, layout.finest)
        if split > 1:
            tb = sorted(set(tb) | {0.5 * (u + v) for u, v in zip(tb, tb[1:])})
        rho, wr = _gl_nodes(rb)
        theta, wt = _gl_nodes(tb)
        total = 0.0
        chunk = max(1, 400000 // len(theta))
        for i in range(0, len(rho), chunk):
            r = rho[i : i + chunk, None]
            z = r * np.exp(1j * theta[None, :])
            gx, gy = gradient(z)
            total += float(np.sum((gx**2 + gy**2) * r * wr[i : i + chunk, None] * wt[None, :]))
        return total

    coarse, fine = run(1), run(2)
    return fine, abs(fine - coarse)


@dataclass(frozen=True)
class DirichletEstimate:
    value: float
    error: float
    coarse: float
    fine: float
    h: float


class DirichletNonConvergence(RuntimeError):
    def __init__(self, message: str, estimate: DirichletEstimate):
        super().__init__(message)
        self.estimate = estimate


def _grid_energy(phi: TestFunction, h: float) -> float:
    """``sum |central-difference gradient|^2 h^2`` over a grid offset by h/3."""
    L = phi.support_R + 2 * h
    m = int(math.ceil(2 * L / h))
    xs = -L + (np.arange(m) + 1 / 3) * h
    total = 0.0
    block = max(3, 2_000_000 // m)
    for i0 in range(1, m - 1, block):
        i1 = min(m - 1, i0 + block)
        ys = xs[i0 - 1 : i1 + 1]
        vals = phi.evaluate(xs[None, :] + 1j * ys[:, None])
        gy = (vals[2:, 1:-1] - vals[:-2, 1:-1]) / (2 * h)
        gx = (vals[1:-1, 2:] - vals[1:-1, :-2]) / (2 * h)
        total += float(np.sum(gx**2 + gy**2)) * h * h
    return total


def dirichlet_integral(phi: TestFunction, grid_h: float = 1 / 128, diverge_ratio: float = 0.5) -> DirichletEstimate:
    """Grid estimate of ``D[phi]`` at spacing ``h`` and ``h/2``.

    Central differences across the gradient kinks make the sums converge at
    first order, so the reported value is the Richardson combination
    ``2 D_{h/2} - D_h`` and the error bar is ``|D_{h/2} - D_h|``.  Raises
    :class:`DirichletNonConvergence` when the two sums differ by more than
    ``diverge_ratio`` of the finer one.
    """
    if grid_h <= 0:
        raise ValueError("grid_h must be positive")
    if not math.isfinite(phi.support_R):
        raise ValueError("grid Dirichlet integral needs a bounded support")
    coarse = _grid_energy(phi, grid_h)
    fine = _grid_energy(phi, grid_h / 2)
    est = DirichletEstimate(max(0.0, 2 * fine - coarse), abs(fine - coarse), coarse, fine, grid_h)
    if est.error > diverge_ratio * max(abs(fine), 1e-300) and fine > 0:
        raise DirichletNonConvergence(f"grid refinement changed D by {est.error:.3g}", est)
    return est


def modulus_of_continuity(phi: TestFunction, r: float, samples: int = 20000, seed: int = 0) -> float:
    """Sampled ``sup_{|z - w| <= r} |phi(z) - phi(w)|``, capped by ``A r``.

    The certified bound ``A r`` is what the main inequality uses; the sampled
    value shows how much of it is actually attained.
    """
    if r <= 0:
        raise ValueError("r must be positive")
    z, w = _random_pairs(phi, samples, r, seed)
    sampled = float(np.max(np.abs(phi.evaluate(z) - phi.evaluate(w))))
    return min(phi.lipschitz_A * r, sampled)


def _random_pairs(phi: TestFunction, count: int, max_dist: float, seed: int):
    rng = np.random.Generator(np.random.PCG64(seed))
    reach = (phi.support_R if math.isfinite(phi.support_R) else 3.0) + 1.0
    rad = reach * np.sqrt(rng.random(count))
    z = rad * np.exp(1j * TWO_PI * rng.random(count))
    d = max_dist * rng.random(count)
    w = z + d * np.exp(1j * TWO_PI * rng.random(count))
    return z, w


def lipschitz_audit(phi: TestFunction, pairs: int = 100000, seed: int = 0, max_dist: float = 0.5) -> float:
    """Largest observed ``|phi(z) - phi(w)| / |z - w|`` over random nearby pairs."""
    z, w = _random_pairs(phi, pairs, max_dist, seed)
    dist = np.abs(z - w)
    keep = dist > 0
    return float(np.max(np.abs(phi.evaluate(z[keep]) - phi.evaluate(w[keep])) / dist[keep]))


# --- built-ins -----------------------------------------------------------------

def zero() -> TestFunction:
    return constant(0.0)


def constant(c: float) -> TestFunction:
    """``phi == c``; unbounded support unless ``c == 0``."""
    support = 0.0 if c == 0 else math.inf
    return TestFunction(
        f"const:{c:g}",
        lambda z: np.full(np.shape(z), float(c)),
        0.0,
        support,
        gradient=lambda z: (np.zeros(np.shape(z)), np.zeros(np.shape(z))),
    )


def cor22_phi() -> TestFunction:
    """``Re z`` on the unit disk, ``Re z (1 - log|z|)`` out to ``|z| = e``, then 0.

    Certified with ``A = sqrt(5)/2`` (``|phi_x| <= 1``, ``|phi_y| <= 1/2``) and
    ``R = e``; on the unit circle it is ``Re z``, so its circle mean is 0.
    """

    def f(z):
        rho = np.abs(z)
        x = z.real
        with np.errstate(divide="ignore"):
            mid = x * (1 - np.log(np.where(rho > 0, rho, 1.0)))
        return np.where(rho <= 1, x, np.where(rho <= E, mid, 0.0))

    def grad(z):
        rho = np.abs(z)
        x, y = z.real, z.imag
        r2 = np.where(rho > 0, rho * rho, 1.0)
        mid_x = 1 - np.log(np.where(rho > 0, rho, 1.0)) - x * x / r2
        mid_y = -x * y / r2
        inner = rho <= 1
        ann = (rho > 1) & (rho <= E)
        gx = np.where(inner, 1.0, np.where(ann, mid_x, 0.0))
        gy = np.where(ann, mid_y, 0.0)
        return gx, gy

    layout = PolarLayout(radial_breaks=(0.0, 1.0, E))
    return TestFunction("cor22", f, math.sqrt(5) / 2, E, grad, layout)


def cor23_phi(z0: complex) -> TestFunction:
    """``log|z0 - w|`` on the unit disk, tapered by ``1 - log|w|`` to zero at ``|w| = e``.

    On the annulus the logarithm is taken of ``|1 - conj(z0) w|``, which agrees
    with ``|z0 - w|`` on the unit circle.  Needs ``|z0| > 1``.
    """
    z0 = complex(z0)
    m = abs(z0)
    if m <= 1:
        raise ValueError("cor23_phi needs |z0| > 1")
    c = 1 / z0.conjugate()
    zc = z0.conjugate()

    def f(w):
        rho = np.abs(w)
        with np.errstate(divide="ignore"):
            inner = np.log(np.abs(z0 - w))
            taper = 1 - np.log(np.where(rho > 0, rho, 1.0))
            mid = taper * np.log(np.abs(1 - zc * w))
        return np.where(rho <= 1, inner, np.where(rho <= E, mid, 0.0))

    def grad(w):
        rho = np.abs(w)
        d_in = w - z0
        g_in = d_in / np.abs(d_in) ** 2
        r2 = np.where(rho > 0, rho * rho, 1.0)
        L = np.log(np.abs(1 - zc * w))
        taper = 1 - np.log(np.where(rho > 0, rho, 1.0))
        d_c = w - c
        g_mid = -(w / r2) * L + taper * d_c / np.abs(d_c) ** 2
        g = np.where(rho <= 1, g_in, np.where(rho <= E, g_mid, 0.0))
        return g.real, g.imag

    l_max = max(math.log(1 + m * E), -math.log(m - 1))
    A = max(1 / (m - 1), l_max + m / (m - 1))
    angle = math.atan2(z0.imag, z0.real)
    layout = PolarLayout(
        radial_breaks=(0.0, 1.0, E),
        radial_focus=(1.0,),
        angular_focus=(angle,),
        finest=1e-4 * (m - 1),
    )
    n_equiv = 1 / (m - 1)
    return TestFunction(f"cor23:z0={z0:.6g}", f, A, E, grad, layout, meta={"n": n_equiv, "z0": z0})


def cor23_for_degree(n: int, angle: float = 0.0) -> TestFunction:
    """:func:`cor23_phi` at ``z0 = (1 + 1/n) e^{i angle}``."""
    tf = cor23_phi((1 + 1 / n) * complex(math.cos(angle), math.sin(angle)))
    return TestFunction(f"cor23:n={n}", tf.evaluator, tf.lipschitz_A, tf.support_R, tf.gradient, tf.layout, meta=tf.meta)


def _ramp(theta: np.ndarray, phi1: float, phi2: float, eps: float):
    """Angle profile (1 on the arc, linear to 0 over ``eps``) and its derivative."""
    t = np.mod(theta - phi1, TWO_PI)
    width = phi2 - phi1
    beyond = t - width
    before = TWO_PI - t
    inside = t <= width
    d = np.where(inside, 0.0, np.minimum(beyond, before))
    g = np.clip(1 - d / eps, 0.0, 1.0)
    slope = np.where(beyond < before, -1.0, 1.0) / eps
    dg = np.where(~inside & (d < eps), slope, 0.0)
    return g, dg


def _radial_profile(rho: np.ndarray):
    h = np.where(rho < 0.5, 2 * rho, np.where(rho <= 1.5, 1.0, np.clip(2 * (2 - rho), 0.0, None)))
    dh = np.where(rho < 0.5, 2.0, np.where(rho <= 1.5, 0.0, np.where(rho < 2, -2.0, 0.0)))
    return h, dh


def smoothed_indicator(phi1: float, phi2: float, eps: float) -> TestFunction:
    """Lipschitz stand-in for the indicator of the sector ``[phi1, phi2]``.

    Angular profile: 1 on the closed arc, linear ramps of width ``eps`` down
    to 0.  Radial profile: rises linearly from 0 at the origin to 1 at
    ``|z| = 1/2``, stays 1 up to ``3/2`` and falls to 0 at ``|z| = 2``.  On the
    unit circle the function is exactly the angular ramp, so its circle mean
    is ``(phi2 - phi1 + eps) / (2 pi)``.
    """
    if not (0 <= phi1 < phi2 <= TWO_PI):
        raise ValueError("need 0 <= phi1 < phi2 <= 2*pi")
    if not (0 < eps < (phi2 - phi1) / 2):
        raise ValueError("need 0 < eps < (phi2 - phi1)/2")
    if phi2 - phi1 + 2 * eps >= TWO_PI:
        raise ValueError("ramped sector wraps onto itself")

    def f(z):
        rho = np.abs(z)
        g, _ = _ramp(np.angle(z), phi1, phi2, eps)
        h, _ = _radial_profile(rho)
        return g * h

    def grad(z):
        rho = np.abs(z)
        theta = np.angle(z)
        g, dg = _ramp(theta, phi1, phi2, eps)
        h, dh = _radial_profile(rho)
        safe = np.where(rho > 0, rho, 1.0)
        f_r = g * dh
        f_t = np.where(rho > 0, dg * h / safe, 0.0)
        c, s = np.cos(theta), np.sin(theta)
        return f_r * c - f_t * s, f_r * s + f_t * c

    layout = PolarLayout(
        radial_breaks=(0.0, 0.5, 1.5, 2.0),
        angular_breaks=(phi1 - eps, phi1, phi2, phi2 + eps),
    )
    A = 2 * math.sqrt(1 + 1 / eps**2)
    return TestFunction(
        f"sector:{phi1:.6g}:{phi2:.6g}:{eps:.6g}", f, A, 2.0, grad, layout, meta={"phi1": phi1, "phi2": phi2, "eps": eps}
    )


def radial_hat(height: float = 1.0, radius: float = 1.0) -> TestFunction:
    """``height * max(0, 1 - |z|/radius)``; ``D = pi height^2``."""

    def f(z):
        return height * np.clip(1 - np.abs(z) / radius, 0.0, None)

    return TestFunction(f"hat:{height:g}:{radius:g}", f, abs(height) / radius, radius)


def random_lipschitz(seed: int, bumps: int = 4) -> TestFunction:
    """Sum of seeded cone bumps; ``A`` is the sum of the individual slopes."""
    rng = np.random.Generator(np.random.PCG64(seed))
    centers = 1.2 * np.sqrt(rng.random(bumps)) * np.exp(1j * TWO_PI * rng.random(bumps))
    widths = 0.2 + 0.8 * rng.random(bumps)
    heights = rng.uniform(-1, 1, bumps)

    def f(z):
        out = np.zeros(np.shape(z))
        for b, s, h in zip(centers, widths, heights):
            out = out + h * np.clip(1 - np.abs(z - b) / s, 0.0, None)
        return out

    A = float(np.sum(np.abs(heights) / widths))
    R = float(np.max(np.abs(centers) + widths))
    return TestFunction(f"random:{seed}", f, A, R)


def parse_testfn(spec: str) -> TestFunction:
    """``cor22`` | ``cor23:n=64`` | ``sector:phi1:phi2:eps`` | ``hat`` | ``random:seed``."""
    parts = spec.strip().split(":")
    kind = parts[0]
    try:
        if kind == "cor22" and len(parts) == 1:
            return cor22_phi()
        if kind == "cor23" and len(parts) == 2 and parts[1].startswith("n="):
            return cor23_for_degree(int(parts[1][2:]))
        if kind == "sector" and len(parts) == 4:
            return smoothed_indicator(float(parts[1]), float(parts[2]), float(parts[3]))
        if kind == "hat":
            return radial_hat(*(float(p) for p in parts[1:]))
        if kind == "random" and len(parts) == 2:
            return random_lipschitz(int(parts[1]))
        if kind == "zero":
            return zero()
    except ValueError as exc:
        raise ValueError(f"bad test function {spec!r}: {exc}") from None
    raise ValueError(f"unknown test function {spec!r}")


DEFAULT_SECTOR_FUNCTIONS = (
    (0.0, math.pi / 2, math.pi / 16),
    (math.pi / 3, math.pi, math.pi / 12),
    (math.pi, 7 * math.pi / 4, math.pi / 8),
)


def default_testfns() -> list[TestFunction]:
    """``cor22`` and three smoothed sector indicators."""
    return [cor22_phi()] + [smoothed_indicator(*a) for a in DEFAULT_SECTOR_FUNCTIONS]
