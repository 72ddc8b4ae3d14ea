"""The normalized zero counting measure and the arclength measure on the circle."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .roots import NonConvergence, RootSet

TWO_PI = 2 * math.pi


class QuadratureError(NonConvergence):
    """A refinement loop failed to reach its tolerance."""


@dataclass(frozen=True)
class CountingMeasure:
    """Mass ``1/n`` at each point (zeros repeated by multiplicity).

    ``radii`` are the root error radii, used only to flag points that sit
    within numerical reach of a sector boundary.
    """

    points: np.ndarray
    radii: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        if pts.ndim != 1 or not len(pts):
            raise ValueError("a counting measure needs at least one point")
        object.__setattr__(self, "points", pts)
        if self.radii is None:
            object.__setattr__(self, "radii", np.zeros(len(pts)))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.n, 1.0 / self.n)

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())


@dataclass(frozen=True)
class SectorCount:
    phi1: float
    phi2: float
    count: int
    n: int
    boundary_hits: int = 0

    @property
    def fraction(self) -> float:
        return self.count / self.n


def counting_measure(rs: RootSet) -> CountingMeasure:
    if not len(rs):
        raise ValueError("empty root set")
    return CountingMeasure(rs.values, rs.radii)


def mean(cm: CountingMeasure) -> complex:
    """Arithmetic mean of the points."""
    return complex(np.mean(cm.points))


def moment(cm: CountingMeasure, m: int) -> complex:
    """``(1/n) sum alpha_k**m``."""
    if m < 1:
        raise ValueError("moment order must be positive")
    return complex(np.mean(cm.points**m))


def _check_sector(phi1: float, phi2: float) -> None:
    # phi2 == 2*pi is accepted: with arg in [0, 2pi) it equals the limit phi2 -> 2pi
    if not (0.0 <= phi1 < phi2 <= TWO_PI):
        raise ValueError(f"need 0 <= phi1 < phi2 <= 2*pi, got ({phi1}, {phi2})")


def _arc_distance(theta: np.ndarray, phi1: float, phi2: float) -> np.ndarray:
    """Circular distance from each angle to the closed arc [phi1, phi2]."""
    t = np.mod(theta - phi1, TWO_PI)
    width = phi2 - phi1
    beyond = t - width
    return np.where(t <= width, 0.0, np.minimum(beyond, TWO_PI - t))


def sector_count(cm: CountingMeasure, phi1: float, phi2: float) -> SectorCount:
    """Number of points with ``arg`` in the closed sector ``[phi1, phi2]``.

    Points at the origin belong to no sector.  A point whose angular error
    (radius over modulus) reaches the arc is counted as on the boundary, hence
    inside; ``boundary_hits`` records how many points were that close.
    """
    _check_sector(phi1, phi2)
    pts = cm.points
    mod = np.abs(pts)
    nonzero = mod > cm.radii
    theta = np.angle(pts[nonzero])
    slack = np.minimum(cm.radii[nonzero] / mod[nonzero], math.pi) + 8 * np.finfo(float).eps
    dist = _arc_distance(theta, phi1, phi2)
    inside = dist <= slack
    t = np.mod(theta - phi1, TWO_PI)
    near_edge = (np.abs(t) <= slack) | (np.abs(TWO_PI - t) <= slack) | (np.abs(t - (phi2 - phi1)) <= slack)
    return SectorCount(phi1, phi2, int(inside.sum()), cm.n, int(near_edge.sum()))


def sector_discrepancy(cm: CountingMeasure, phi1: float, phi2: float) -> float:
    """``|N(phi1, phi2)/n - (phi2 - phi1)/(2 pi)|``."""
    sc = sector_count(cm, phi1, phi2)
    return abs(sc.fraction - (phi2 - phi1) / TWO_PI)


def dyadic_sectors(level: int = 4) -> list[tuple[float, float]]:
    """The ``2**level`` closed arcs ``[2 pi j / 2**level, 2 pi (j+1) / 2**level]``."""
    m = 2**level
    return [(TWO_PI * j / m, TWO_PI * (j + 1) / m) for j in range(m)]


def integrate(cm: CountingMeasure, phi) -> float:
    """``(1/n) sum phi(alpha_k)`` for a test function (or any vectorized callable)."""
    f = phi.evaluate if hasattr(phi, "evaluate") else phi
    return float(np.mean(f(cm.points)))


def mu_integral(phi, tol: float = 1e-10, n0: int = 64, max_points: int = 2**22) -> float:
    """``(1/2 pi) int phi(e^{it}) dt`` by the trapezoid rule with grid doubling.

    Stops when three successive grids agree to ``tol``; the trapezoid rule is
    spectrally accurate for smooth periodic integrands and second order for
    Lipschitz ones, whose kinks can make a single pair agree by accident.
    """
    f = phi.evaluate if hasattr(phi, "evaluate") else phi
    n = n0
    prev = float(np.mean(f(np.exp(1j * TWO_PI * np.arange(n) / n))))
    agreed = False
    while n < max_points:
        # reuse the previous nodes; only the midpoints are new
        mids = np.exp(1j * TWO_PI * (np.arange(n) + 0.5) / n)
        cur = 0.5 * (prev + float(np.mean(f(mids))))
        n *= 2
        close = abs(cur - prev) <= tol
        if close and agreed:
            return cur
        agreed = close
        prev = cur
    raise QuadratureError(f"circle quadrature did not settle to {tol:g} within {max_points} points")
