"""Logarithmic potentials and energies of zero distributions.

``tau^r`` replaces each zero by the uniform probability measure on the circle
of radius ``r`` around it; ``sigma = tau^r - mu`` has total mass zero, so its
energy ``I[sigma]`` is nonnegative.  Every kernel integral here is a 1-D
integral of a closed-form potential over a circle, split at the angles where
the ``max`` inside the logarithm switches branch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import ZeroDiscriminant, energy_bracket, log_an2_delta, log_mahler
from .intpoly import IntPolynomial, discriminant, log_abs_int
from .roots import NonConvergence
from .zmeasure import CountingMeasure

TWO_PI = 2 * math.pi


class SingularPoint(ValueError):
    """The evaluation point collides with a point mass."""


@dataclass(frozen=True)
class SmoothedMeasure:
    """Mass ``1/n`` spread uniformly on the circle ``|z - alpha_k| = r``."""

    centers: np.ndarray
    r: float

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=complex)
        if c.ndim != 1 or not len(c):
            raise ValueError("need at least one center")
        if not self.r > 0:
            raise ValueError("r must be positive")
        object.__setattr__(self, "centers", c)

    @property
    def n(self) -> int:
        return len(self.centers)

    @classmethod
    def from_counting(cls, cm: CountingMeasure, r: float) -> SmoothedMeasure:
        return cls(cm.points, r)


@dataclass(frozen=True)
class SignedDifference:
    """``tau^r - mu`` with ``mu`` the arclength probability on the unit circle."""

    smoothed: SmoothedMeasure


# --- potentials --------------------------------------------------------------------

def potential_mu(z):
    """``-log max(1, |z|)``."""
    out = -np.log(np.maximum(1.0, np.abs(z)))
    return float(out) if np.ndim(out) == 0 else out


def potential_smoothed(sm: SmoothedMeasure, z):
    """``(1/n) sum_k -log max(r, |z - alpha_k|)``."""
    zz = np.asarray(z, dtype=complex)
    d = np.abs(zz[..., None] - sm.centers)
    out = -np.mean(np.log(np.maximum(sm.r, d)), axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def potential_counting(cm: CountingMeasure, z):
    """``-(1/n) sum_k log|z - alpha_k|``; raises :class:`SingularPoint` on a zero."""
    zz = np.asarray(z, dtype=complex)
    d = np.abs(zz[..., None] - cm.points)
    if np.any(d <= cm.radii):
        raise SingularPoint("evaluation point lies within a root's error radius")
    out = -np.mean(np.log(d), axis=-1)
    return float(out) if np.ndim(out) == 0 else out


# --- circle averages of the closed-form potentials -------------------------------

_GL = {k: np.polynomial.legendre.leggauss(k) for k in (32, 64)}


def _circle_average(g, kinks: np.ndarray, nodes: int) -> np.ndarray:
    """``(1/2 pi) int_0^{2pi} g(t) dt`` per row, Gauss-Legendre between kinks.

    ``kinks`` is an ``(m, 2)`` array of angles in ``[0, pi]``; each row's
    integrand is even in ``t``, so ``[0, pi]`` is split at its kink and the
    result doubled.
    """
    x, w = _GL[nodes]
    m = len(kinks)
    total = np.zeros(m)
    edges = np.concatenate([np.zeros((m, 1)), np.sort(kinks, axis=1), np.full((m, 1), math.pi)], axis=1)
    for i in range(edges.shape[1] - 1):
        a, b = edges[:, i : i + 1], edges[:, i + 1 : i + 2]
        half = 0.5 * (b - a)
        t = a + half * (x[None, :] + 1)
        total += np.sum(g(t) * w[None, :], axis=1) * half[:, 0]
    return total / math.pi


def _averaged(g, kinks: np.ndarray, tol: float) -> np.ndarray:
    lo = _circle_average(g, kinks, 32)
    hi = _circle_average(g, kinks, 64)
    err = float(np.max(np.abs(hi - lo))) if len(hi) else 0.0
    if err > tol:
        raise NonConvergence(f"circle average changed by {err:.3g} between 32 and 64 nodes")
    return hi


def mutual_circle_energy(d, r: float, tol: float = 1e-12) -> np.ndarray:
    """``int -log max(r, |s - t|) dnu(s) dnu'(t)`` for two radius-``r`` circles at distance ``d``.

    Equals ``-log d`` when ``d >= 2r`` (harmonic mean value); otherwise the
    potential of one circle is averaged over the other.
    """
    d = np.atleast_1d(np.asarray(d, dtype=float))
    out = -np.log(np.where(d > 0, d, 1.0))
    out[d == 0] = -math.log(r)
    close = (d > 0) & (d < 2 * r)
    if close.any():
        dc = d[close][:, None]
        kink = np.arccos(np.clip(-dc / (2 * r), -1, 1))
        kinks = np.concatenate([kink, kink], axis=1)

        def g(t):
            return -np.log(np.maximum(r, np.abs(dc + r * np.exp(1j * t))))

        out[close] = _averaged(g, kinks, tol)
    return out


def circle_mu_potential(center, r: float, tol: float = 1e-12) -> np.ndarray:
    """Average of ``p_mu`` over the circle ``|z - center| = r``."""
    c = np.atleast_1d(np.asarray(center, dtype=complex))
    a = np.abs(c)
    out = np.zeros(len(c))
    outside = a - r >= 1
    out[outside] = -np.log(a[outside])
    mixed = ~outside & (a + r > 1)
    if mixed.any():
        am = a[mixed][:, None]
        cos_k = (1 - am**2 - r**2) / (2 * am * r)
        kink = np.arccos(np.clip(cos_k, -1, 1))
        kinks = np.concatenate([kink, kink], axis=1)

        def g(t):
            return -np.log(np.maximum(1.0, np.abs(am + r * np.exp(1j * t))))

        out[mixed] = _averaged(g, kinks, tol)
    return out


# --- energies --------------------------------------------------------------------

def _pair_distances(points: np.ndarray) -> np.ndarray:
    """Upper-triangle distances ``|alpha_j - alpha_k|``, ``j < k``, in fixed order."""
    j, k = np.triu_indices(len(points), 1)
    return np.abs(points[j] - points[k])


def smoothed_self_energy(sm: SmoothedMeasure, tol: float = 1e-12) -> float:
    """``int p_{tau^r} dtau^r``: ``-log r`` on the diagonal, circle averages off it."""
    n = sm.n
    off = 2 * float(np.sum(mutual_circle_energy(_pair_distances(sm.centers), sm.r, tol)))
    return (off - n * math.log(sm.r)) / n**2


def self_energy_estimate(cm: CountingMeasure, r: float) -> float:
    """The upper estimate ``(-sum_{j != k} log|alpha_j - alpha_k| - n log r) / n^2``."""
    n = cm.n
    d = _pair_distances(cm.points)
    if np.any(d == 0):
        raise SingularPoint("coincident points")
    return (-2 * float(np.sum(np.log(d))) - n * math.log(r)) / n**2


def cross_energy(sm: SmoothedMeasure, tol: float = 1e-12) -> float:
    """``int p_mu dtau^r``."""
    return float(np.mean(circle_mu_potential(sm.centers, sm.r, tol)))


def energy_sigma(sd: SignedDifference, tol: float = 1e-12) -> float:
    """``I[sigma] = int p_{tau^r} dtau^r - 2 int p_mu dtau^r`` (the ``mu``-``mu`` term is 0)."""
    sm = sd.smoothed
    return smoothed_self_energy(sm, tol) - 2 * cross_energy(sm, tol)


def energy_upper_bound(p: IntPolynomial, cm: CountingMeasure, r: float) -> float:
    """``(2/n) log M - (1/n^2) log|a_n^2 Delta| - (1/n) log r + 4 r``."""
    if not r > 0:
        raise ValueError("r must be positive")
    if cm.n != p.degree:
        raise ValueError("measure does not belong to this polynomial")
    log_m, _ = log_mahler(p.leading, cm.points, cm.radii)
    return energy_bracket(p.degree, log_m, log_an2_delta(p), r)


def discrete_energy(cm: CountingMeasure) -> float:
    """``(1/n^2) sum_{j != k} log(1 / |alpha_j - alpha_k|)``."""
    n = cm.n
    j, k = np.triu_indices(n, 1)
    d = np.abs(cm.points[j] - cm.points[k])
    if np.any(d <= cm.radii[j] + cm.radii[k]):
        raise SingularPoint("two roots coincide within their error radii")
    return -2 * float(np.sum(np.log(d))) / n**2


def discriminant_log_sum(p: IntPolynomial) -> float:
    """``log(|Delta| / |a_n|^{2n-2})``, the exact counterpart of ``sum_{j != k} log|alpha_j - alpha_k|``."""
    delta = discriminant(p)
    if delta == 0:
        raise ZeroDiscriminant("discriminant vanishes")
    return log_abs_int(delta) - (2 * p.degree - 2) * log_abs_int(p.leading)


def truncated_energy(cm: CountingMeasure, cutoff_M: float) -> float:
    """``(1/n^2) sum_{j,k} min(-log|alpha_j - alpha_k|, M)``, diagonal included."""
    if not cutoff_M > 0:
        raise ValueError("cutoff must be positive")
    n = cm.n
    d = _pair_distances(cm.points)
    with np.errstate(divide="ignore"):
        kern = np.minimum(-np.log(d), cutoff_M)
    return (n * cutoff_M + 2 * float(np.sum(kern))) / n**2


def potential_gradient_sq(sd: SignedDifference, z: np.ndarray) -> np.ndarray:
    """``|grad p_sigma|^2`` from the closed-form potentials."""
    sm = sd.smoothed
    g = np.zeros(z.shape, dtype=complex)
    for c in sm.centers:
        w = z - c
        aw = np.abs(w)
        g -= np.where(aw > sm.r, w / np.where(aw > 0, aw, 1.0) ** 2, 0.0) / sm.n
    az = np.abs(z)
    g += np.where(az > 1, z / np.where(az > 0, az, 1.0) ** 2, 0.0)
    return np.abs(g) ** 2


def dirichlet_of_potential(sd: SignedDifference, spacing: float | None = None, half_width: float = 6.0) -> float:
    """Midpoint-grid ``D[p_sigma]`` over a square; compare with ``2 pi I[sigma]``.

    Coarse by design: the gradient jumps on every smoothing circle, so only
    agreement to a few percent is expected.  The square must be large enough
    for the far field of ``p_sigma`` to be negligible.
    """
    h = spacing if spacing is not None else sd.smoothed.r / 4
    m = int(math.ceil(2 * half_width / h))
    xs = -half_width + (np.arange(m) + 0.5) * h
    total = 0.0
    block = max(1, 200_000 // m)
    for i in range(0, m, block):
        z = xs[None, :] + 1j * xs[i : i + block, None]
        total += float(np.sum(potential_gradient_sq(sd, z)))
    return total * h * h


@dataclass(frozen=True)
class EnergyDiagnostics:
    n: int
    r: float
    energy_sigma: float
    upper_bound: float
    self_energy: float
    self_estimate: float
    cross: float
    discrete: float

    @property
    def slack(self) -> float:
        return self.upper_bound - self.energy_sigma

    @property
    def self_estimate_slack(self) -> float:
        return self.self_estimate - self.self_energy

    def to_dict(self) -> dict:
        return {
            "kind": "energy",
            "n": self.n,
            "r": self.r,
            "energy_sigma": self.energy_sigma,
            "upper_bound": self.upper_bound,
            "slack": self.slack,
            "self_energy": self.self_energy,
            "self_estimate": self.self_estimate,
            "self_estimate_slack": self.self_estimate_slack,
            "cross": self.cross,
            "discrete_energy": self.discrete,
        }


def diagnostics(p: IntPolynomial, cm: CountingMeasure, r: float, tol: float = 1e-12) -> EnergyDiagnostics:
    sm = SmoothedMeasure.from_counting(cm, r)
    self_e = smoothed_self_energy(sm, tol)
    cross = cross_energy(sm, tol)
    return EnergyDiagnostics(
        p.degree,
        r,
        self_e - 2 * cross,
        energy_upper_bound(p, cm, r),
        self_e,
        self_energy_estimate(cm, r),
        cross,
        discrete_energy(cm),
    )
