"""Seeded generators for integer polynomials with zeros in the closed unit disk.

All randomness flows through ``numpy.random.Generator(PCG64(seed))``, so a
``(kind, n, M, seed)`` tuple pins the output exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .intpoly import ONE, IntPolynomial, exact_quotient, is_squarefree, monomial

FAMILY_KINDS = ("binomial", "cyclotomic_product", "schur", "multiplicity", "random_disk")


class InfeasibleDegree(ValueError):
    """No admissible set of distinct cyclotomic factors has the requested degree."""


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    n: int
    M: float = 1.0
    seed: int = 0
    extras: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family {self.kind!r}; expected one of {FAMILY_KINDS}")
        if self.n < 1:
            raise ValueError("family degree must be >= 1")
        if self.M < 1:
            raise ValueError("leading-coefficient bound M must be >= 1")


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def binomial(n: int) -> IntPolynomial:
    """``z**n - 1``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return monomial(n) + IntPolynomial((-1,))


def _prime_factors(k: int) -> list[int]:
    out, d = [], 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


@lru_cache(maxsize=None)
def cyclotomic(k: int) -> IntPolynomial:
    """The ``k``-th cyclotomic polynomial.

    Built from ``Phi_{pm}(z) = Phi_m(z^p) / Phi_m(z)`` over the distinct primes
    of ``k`` followed by ``Phi_k(z) = Phi_rad(k)(z^(k/rad(k)))``; each step is an
    exact division, so degrees stay near ``phi(k)`` instead of ``k``.
    """
    if k < 1:
        raise ValueError("cyclotomic index must be >= 1")
    if k == 1:
        return IntPolynomial((-1, 1))
    primes = _prime_factors(k)
    rad = math.prod(primes)
    if rad != k:
        return cyclotomic(rad).compose_power(k // rad)
    p = primes[-1]
    m = k // p
    base = cyclotomic(m)
    return exact_quotient(base.compose_power(p), base)


def totients(limit: int) -> np.ndarray:
    phi = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


@lru_cache(maxsize=64)
def _candidates(n: int) -> tuple[np.ndarray, np.ndarray]:
    # k / phi(k) < 8 for every k below 10**12, so phi(k) <= n forces k < 8n
    limit = 8 * n + 8
    phi = totients(limit)
    ks = np.nonzero((phi <= n) & (np.arange(limit + 1) >= 3))[0]
    return ks, phi


def _select_indices(n: int, rng: np.random.Generator, exclude: frozenset = frozenset()) -> list[int]:
    """Distinct cyclotomic indices with totients summing to ``n``.

    Greedy pass over a shuffled candidate list with depth-first backtracking;
    the degree-one fillers 1 and 2 cover any odd or small leftover.
    """
    if n == 0:
        return []
    ks, phi = _candidates(n)
    order = [int(k) for k in rng.permutation(ks) if int(k) not in exclude]
    fillers = [f for f in (1, 2) if f not in exclude]
    if rng.integers(2):
        fillers = fillers[::-1]
    # seeded: close with the degree-one fillers as soon as they fit, or only
    # after the larger cyclotomics have been tried
    filler_first = bool(rng.integers(2))

    def finish(rem: int) -> list[int] | None:
        if rem == 0:
            return []
        if rem == 1 and fillers:
            return [fillers[0]]
        if rem == 2 and len(fillers) == 2:
            return sorted(fillers)
        return None

    failed: set[tuple[int, int]] = set()

    def search(pos: int, rem: int) -> list[int] | None:
        if rem == 0:
            return []
        if filler_first and (tail := finish(rem)) is not None:
            return tail
        if (pos, rem) in failed:
            return None
        for i in range(pos, len(order)):
            k = order[i]
            if phi[k] <= rem:
                rest = search(i + 1, rem - int(phi[k]))
                if rest is not None:
                    return [k] + rest
        if not filler_first and (tail := finish(rem)) is not None:
            return tail
        failed.add((pos, rem))
        return None

    found = search(0, n)
    if found is None:
        raise InfeasibleDegree(f"cannot reach degree {n} with distinct cyclotomic factors")
    return sorted(found)


def product_of(indices: list[int]) -> IntPolynomial:
    out = ONE
    for k in indices:
        out = out * cyclotomic(k)
    return out


def kronecker_indices(n: int, seed: int) -> list[int]:
    return _select_indices(n, rng_for(seed))


def kronecker_product(n: int, seed: int) -> IntPolynomial:
    """Monic product of distinct cyclotomic polynomials of total degree ``n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return product_of(kronecker_indices(n, seed))


def schur_sample(n: int, M: float, seed: int) -> IntPolynomial:
    """``a * K(z)`` with ``K`` a Kronecker product and ``1 <= |a| <= floor(M)``."""
    if n < 1 or M < 1:
        raise ValueError("need n >= 1 and M >= 1")
    rng = rng_for(seed)
    a = int(rng.integers(1, math.floor(M) + 1))
    if rng.integers(2):
        a = -a
    return product_of(_select_indices(n, rng)) * a


SMALL_CYCLOTOMICS = (1, 2, 3, 4, 6)


def multiplicity_family(n: int, m: int, seed: int, q_index: int | None = None) -> IntPolynomial:
    """``Q**m`` times a Kronecker cofactor of degree ``n - m deg Q`` avoiding ``Q``.

    ``Q`` is a seeded choice among the cyclotomics of degree at most two unless
    ``q_index`` is given.
    """
    rng = rng_for(seed)
    if q_index is None:
        options = [k for k in SMALL_CYCLOTOMICS if m * cyclotomic(k).degree <= n]
        if not options:
            raise InfeasibleDegree(f"no small cyclotomic fits m={m} into degree {n}")
        q_index = int(options[int(rng.integers(len(options)))])
    q = cyclotomic(q_index)
    rest = n - m * q.degree
    if rest < 0:
        raise InfeasibleDegree(f"m * deg Q = {m * q.degree} exceeds n = {n}")
    cofactor = product_of(_select_indices(rest, rng, exclude=frozenset({q_index})))
    return q**m * cofactor


@dataclass(frozen=True)
class DiskSample:
    """Outcome of rejection sampling; ``poly`` is None when nothing was accepted."""

    poly: IntPolynomial | None
    tried: int

    @property
    def found(self) -> bool:
        return self.poly is not None


def random_disk(n: int, M: int, seed: int, attempts: int = 1000) -> DiskSample:
    """Rejection-sample an integer polynomial in Z_n^1(D) with coefficients in [-M, M]."""
    from .roots import NonConvergence, find_roots, verify_in_disk

    if attempts < 1:
        raise ValueError("attempts must be >= 1")
    rng = rng_for(seed)
    M = int(M)
    for t in range(1, attempts + 1):
        cs = [int(c) for c in rng.integers(-M, M + 1, size=n + 1)]
        if cs[-1] == 0:
            cs[-1] = int(rng.choice([-1, 1])) * int(rng.integers(1, M + 1))
        p = IntPolynomial(cs)
        # |a_0| <= |a_n| * prod |alpha_k| <= |a_n| is necessary for membership
        if abs(cs[0]) > abs(cs[-1]) or not is_squarefree(p):
            continue
        try:
            rs = find_roots(p)
        except NonConvergence:
            continue
        if verify_in_disk(rs, 0.0):
            return DiskSample(p, t)
    return DiskSample(None, attempts)


def generate(spec: FamilySpec) -> IntPolynomial:
    """Dispatch a :class:`FamilySpec` to its generator."""
    if spec.kind == "binomial":
        return binomial(spec.n)
    if spec.kind == "cyclotomic_product":
        return kronecker_product(spec.n, spec.seed)
    if spec.kind == "schur":
        return schur_sample(spec.n, spec.M, spec.seed)
    if spec.kind == "multiplicity":
        m = int(spec.extras.get("m", max(1, math.isqrt(spec.n))))
        return multiplicity_family(spec.n, m, spec.seed, spec.extras.get("q"))
    sample = random_disk(spec.n, int(spec.M), spec.seed, int(spec.extras.get("attempts", 1000)))
    if sample.poly is None:
        raise LookupError(f"random_disk found nothing in {sample.tried} attempts")
    return sample.poly
