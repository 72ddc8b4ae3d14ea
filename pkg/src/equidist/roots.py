"""All complex zeros of an integer polynomial, with a-posteriori error radii.

The solver is the Aberth-Ehrlich simultaneous iteration in double precision,
started from Newton-polygon circles.  Each root gets the inclusion radius
``n |P(z)| / |P'(z)|`` with ``|P(z)|`` inflated by a running rounding-error
bound.  When some radius exceeds the requested tolerance:

* repeated factors are split off exactly (square-free decomposition) and each
  factor is solved on its own, so multiple roots never reach the iteration;
* otherwise the Aberth corrections are recomputed with ``P/P'`` evaluated in
  extended precision (gmpy2), which drives the roots to double resolution.

The radii are a strong heuristic, not a ball-arithmetic proof.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import gmpy2
import numpy as np

from .intpoly import IntPolynomial, PolynomialError, is_squarefree, squarefree_decomposition

EPS = np.finfo(float).eps / 2  # unit roundoff


class DegreeZero(PolynomialError):
    """Root finding was asked of a constant polynomial."""


class NonConvergence(RuntimeError):
    """The iteration stopped before every radius met the tolerance."""

    def __init__(self, message: str, best: RootSet | None = None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class RootSet:
    """Zeros ``alpha_k`` (multiplicities repeated) with per-root error radii."""

    values: np.ndarray
    radii: np.ndarray
    source_degree: int
    multiplicity: np.ndarray = field(default=None)
    extended: bool = False

    def __post_init__(self):
        if self.multiplicity is None:
            object.__setattr__(self, "multiplicity", np.ones(len(self.values), dtype=int))

    def __len__(self) -> int:
        return len(self.values)

    @property
    def max_modulus(self) -> float:
        if not len(self.values):
            return 0.0
        return float(np.max(np.abs(self.values) + self.radii))

    @property
    def max_radius(self) -> float:
        return float(np.max(self.radii)) if len(self.radii) else 0.0

    @property
    def clustered(self) -> np.ndarray:
        return self.multiplicity > 1

    def triples(self) -> list[tuple[float, float, float]]:
        return [(float(z.real), float(z.imag), float(r)) for z, r in zip(self.values, self.radii)]


# --- double-precision kernels -------------------------------------------------

def _horner(c: np.ndarray, z: np.ndarray):
    """P, P' and the running error sum at each z (coefficients lowest first)."""
    p = np.full(z.shape, c[-1], dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    az = np.abs(z)
    err = np.abs(p)
    for a in c[-2::-1]:
        dp = dp * z + p
        p = p * z + a
        err = err * az + np.abs(p)
    return p, dp, err


def _newton_ratio(c: np.ndarray, z: np.ndarray):
    """``P(z)/P'(z)`` and the relative size of evaluation noise.

    Outside the unit disk the reversed polynomial in ``1/z`` is used so that
    nothing overflows for large degree.
    """
    n = len(c) - 1
    ratio = np.empty(z.shape, dtype=complex)
    noise = np.empty(z.shape)
    inside = np.abs(z) <= 1.0
    if inside.any():
        zi = z[inside]
        p, dp, err = _horner(c, zi)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio[inside] = p / dp
            noise[inside] = 8 * EPS * err / np.abs(dp)
    out = ~inside
    if out.any():
        zo = z[out]
        w = 1.0 / zo
        r, dr, err = _horner(c[::-1], w)
        denom = n * r - w * dr
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio[out] = zo * r / denom
            noise[out] = 8 * EPS * err * np.abs(zo) / np.abs(denom)
    return ratio, noise


def initial_points(c: np.ndarray) -> np.ndarray:
    """Starting points on the Newton-polygon circles of the coefficients.

    Each edge of the upper convex hull of ``(k, log|a_k|)`` contributes as many
    points as its width, spread evenly on a circle of the matching radius with
    a fixed angular offset to break symmetry.
    """
    n = len(c) - 1
    ks = [k for k in range(n + 1) if c[k] != 0]
    logs = {k: math.log(abs(c[k])) for k in ks}
    hull: list[int] = []
    for k in ks:
        while len(hull) >= 2:
            k1, k2 = hull[-2], hull[-1]
            # drop k2 if it lies on or below the segment k1 -> k
            if (logs[k2] - logs[k1]) * (k - k1) <= (logs[k] - logs[k1]) * (k2 - k1):
                hull.pop()
            else:
                break
        hull.append(k)
    pts = []
    offset = 0.0
    for k1, k2 in zip(hull, hull[1:]):
        width = k2 - k1
        radius = math.exp((logs[k1] - logs[k2]) / width)
        angles = 2 * math.pi * np.arange(width) / width + offset + 0.7
        pts.append(radius * np.exp(1j * angles))
        offset += 2 * math.pi / n * width + 0.3
    return np.concatenate(pts)


def aberth(c: np.ndarray, z0: np.ndarray | None = None, max_iter: int = 500) -> tuple[np.ndarray, np.ndarray, int]:
    """Aberth-Ehrlich iteration; returns roots, relative-noise radii, iterations."""
    n = len(c) - 1
    z = initial_points(c) if z0 is None else z0.astype(complex).copy()
    active = np.ones(n, dtype=bool)
    it = 0
    for it in range(1, max_iter + 1):
        idx = np.nonzero(active)[0]
        if not len(idx):
            break
        ratio, noise = _newton_ratio(c, z[idx])
        diff = z[idx, None] - z[None, :]
        diff[np.arange(len(idx)), idx] = np.inf
        s = np.sum(1.0 / diff, axis=1)
        with np.errstate(invalid="ignore", over="ignore"):
            corr = ratio / (1.0 - ratio * s)
        bad = ~np.isfinite(corr)
        corr[bad] = 0.0
        z[idx] -= corr
        done = (np.abs(ratio) <= noise) | (np.abs(corr) <= 2 * EPS * np.abs(z[idx])) | bad
        active[idx[done]] = False
    return z, active, it


def _radii_double(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    n = len(c) - 1
    ratio, noise = _newton_ratio(c, z)
    return n * (np.abs(ratio) + noise)


# --- extended precision -------------------------------------------------------

def _working_bits(p: IntPolynomial) -> int:
    big = max(abs(c).bit_length() for c in p.coeffs)
    return 2 * 53 + big + 2 * p.degree.bit_length() + 64


def _ratio_extended(coeffs: tuple[int, ...], z: np.ndarray, bits: int) -> np.ndarray:
    """``P/P'`` at double-precision points, evaluated with ``bits`` of precision.

    The points are exact dyadic rationals, so only the Horner recurrences round.
    """
    ctx = gmpy2.get_context().copy()
    ctx.precision = bits
    ctx.real_prec = ctx.imag_prec = bits
    out = np.empty(z.shape, dtype=complex)
    with gmpy2.context(ctx):
        cs = [gmpy2.mpc(c) for c in reversed(coeffs)]
        for i, zi in enumerate(z):
            x = gmpy2.mpc(float(zi.real), float(zi.imag))
            p, dp = cs[0], gmpy2.mpc(0)
            for a in cs[1:]:
                dp = dp * x + p
                p = p * x + a
            if dp == 0:
                out[i] = np.inf
            else:
                out[i] = complex(p / dp)
    return out


def _polish_extended(p: IntPolynomial, z: np.ndarray, tol: float, max_iter: int = 12):
    """Aberth steps whose ``P/P'`` is evaluated in extended precision.

    Roots are frozen as soon as their radius meets ``tol``; the radius of a
    point that is a root to double resolution is floored at ``n * eps * |z|``.
    """
    bits = _working_bits(p)
    z = z.copy()
    n = p.degree
    radii = np.full(n, np.inf)
    active = np.ones(n, dtype=bool)
    for _ in range(max_iter + 1):
        idx = np.nonzero(active)[0]
        if not len(idx):
            break
        ratio = _ratio_extended(p.coeffs, z[idx], bits)
        radii[idx] = n * np.maximum(np.abs(ratio), EPS * np.abs(z[idx]))
        ok = radii[idx] <= np.maximum(tol, 4 * n * EPS * np.abs(z[idx]))
        active[idx[ok]] = False
        idx, ratio = idx[~ok], ratio[~ok]
        if not len(idx) or _ == max_iter:
            break
        diff = z[idx, None] - z[None, :]
        diff[np.arange(len(idx)), idx] = np.inf
        s = np.sum(1.0 / diff, axis=1)
        with np.errstate(invalid="ignore", over="ignore"):
            corr = ratio / (1.0 - ratio * s)
        corr[~np.isfinite(corr)] = 0.0
        z[idx] -= corr
    return z, radii


# --- public API -----------------------------------------------------------------

def find_roots(p: IntPolynomial, tol: float = 1e-12, extended: bool = True, max_iter: int = 500) -> RootSet:
    """All ``deg p`` zeros of ``p`` with error radii at most ``tol``.

    Raises :class:`NonConvergence` (carrying the best root set found) when the
    radii cannot be brought under ``tol``; ``extended=False`` disables the
    extended-precision pass.
    """
    if p.is_zero or p.degree < 1:
        raise DegreeZero("root finding needs degree >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = p.degree
    lead_zeros = next(k for k, c in enumerate(p.coeffs) if c != 0)
    values, radii, mult = [np.zeros(lead_zeros, dtype=complex)], [np.zeros(lead_zeros)], [np.full(lead_zeros, lead_zeros, dtype=int)]
    used_ext = False
    q = IntPolynomial(p.coeffs[lead_zeros:])
    if q.degree >= 1:
        z, r, m, used_ext = _solve(q, tol, extended, max_iter)
        values.append(z)
        radii.append(r)
        mult.append(m)
    rs = RootSet(np.concatenate(values), np.concatenate(radii), n, np.concatenate(mult), used_ext)
    if rs.max_radius > tol:
        raise NonConvergence(f"max error radius {rs.max_radius:.3g} exceeds tol {tol:.3g}", rs)
    return rs


def _solve(q: IntPolynomial, tol: float, extended: bool, max_iter: int):
    n = q.degree
    if n == 1:
        a0, a1 = q.coeffs
        z = np.array([complex(-a0 / a1)])
        r = _radii_double(q.to_float_array(), z)
        return z, r, np.ones(1, dtype=int), False
    c = q.to_float_array()
    z, _, _ = aberth(c, max_iter=max_iter)
    r = _radii_double(c, z)
    ones = np.ones(n, dtype=int)
    if np.all(r <= tol) or not extended:
        return z, r, ones, False
    zp, rp = _polish_extended(q, z, tol / 16)
    if np.all(rp <= tol) or is_squarefree(q):
        return zp, rp, ones, True
    zs, rs, ms = [], [], []
    for factor, m in squarefree_decomposition(q):
        fz, fr, fm, _ = _solve(factor, tol, extended, max_iter)
        zs.append(np.repeat(fz, m))
        rs.append(np.repeat(fr, m))
        ms.append(np.repeat(fm * m, m))
    return np.concatenate(zs), np.concatenate(rs), np.concatenate(ms), True


def verify_in_disk(rs: RootSet, slack: float = 0.0) -> bool:
    """True iff every ``|alpha_k| <= 1 + radius_k + slack``."""
    return bool(np.all(np.abs(rs.values) <= 1.0 + rs.radii + slack))
