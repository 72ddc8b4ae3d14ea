"""Exact integer polynomials.

Coefficients are Python ints stored lowest degree first.  Everything here is
exact: resultants and discriminants come from a subresultant remainder
sequence, power sums are computed with :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class PolynomialError(ValueError):
    """Raised for malformed input or an operation undefined on the argument."""


@dataclass(frozen=True)
class IntPolynomial:
    """Polynomial with arbitrary-precision integer coefficients.

    ``coeffs[k]`` is the coefficient of ``z**k``.  Trailing zeros are stripped
    on construction; the zero polynomial has ``coeffs == ()`` and is the only
    value with ``is_zero`` set.
    """

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        cs = []
        for c in coeffs:
            if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
                if isinstance(c, Fraction) and c.denominator == 1:
                    c = c.numerator
                else:
                    raise PolynomialError(f"non-integer coefficient {c!r}")
            cs.append(int(c))
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        if self.is_zero:
            raise PolynomialError("the zero polynomial has no degree")
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise PolynomialError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        m = max(len(self), len(other))
        return IntPolynomial(self[k] + other[k] for k in range(m))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(other * c for c in self.coeffs)
        if self.is_zero or other.is_zero:
            return ZERO
        a = np.array(self.coeffs, dtype=object)
        b = np.array(other.coeffs, dtype=object)
        return IntPolynomial(np.convolve(a, b).tolist())

    __rmul__ = __mul__

    def __pow__(self, m: int) -> IntPolynomial:
        if m < 0:
            raise PolynomialError("negative power")
        result, base = ONE, self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    def __call__(self, z):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __str__(self) -> str:
        return format_poly(self)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    def primitive(self) -> IntPolynomial:
        """Divide out the content, normalising the leading coefficient positive."""
        if self.is_zero:
            return self
        g = self.content()
        if self.leading < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    def shift(self, k: int) -> IntPolynomial:
        """Multiply by ``z**k``."""
        if self.is_zero:
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def compose_power(self, p: int) -> IntPolynomial:
        """Return ``P(z**p)``."""
        out = [0] * (p * self.degree + 1)
        for k, c in enumerate(self.coeffs):
            out[p * k] = c
        return IntPolynomial(out)

    def to_float_array(self) -> np.ndarray:
        """Coefficients as float64, rescaled by a power of two if they overflow.

        The common factor is irrelevant for root finding and ratios.
        """
        big = max((abs(c).bit_length() for c in self.coeffs), default=0)
        s = max(0, big - 1000)
        return np.array([float(c >> s if c >= 0 else -((-c) >> s)) for c in self.coeffs])


ZERO = IntPolynomial(())
ONE = IntPolynomial((1,))
Z = IntPolynomial((0, 1))


def monomial(k: int, c: int = 1) -> IntPolynomial:
    return IntPolynomial((0,) * k + (c,))


# text format ---------------------------------------------------------------

_MINUS = "\u2212\u2013"
_TERM = re.compile(
    r"""^(?:(?P<c>\d+)\s*\*?\s*)?      # optional coefficient
         (?:(?P<var>[zx])(?:\s*\^\s*(?P<e>\d+))?)?$""",
    re.VERBOSE,
)


def parse_poly(text: str) -> IntPolynomial:
    """Parse a dense coefficient list or a sparse term string.

    >>> parse_poly("-1, 0, 1").coeffs
    (-1, 0, 1)
    >>> parse_poly("2*z^2 - 2").coeffs
    (-2, 0, 2)
    """
    if text is None:
        raise PolynomialError("empty polynomial text")
    s = text.strip()
    for ch in _MINUS:
        s = s.replace(ch, "-")
    if not s:
        raise PolynomialError("empty polynomial text")
    if "z" not in s and "x" not in s:
        parts = [p.strip() for p in s.strip("[]()").split(",")]
        try:
            return IntPolynomial(int(p) for p in parts)
        except ValueError:
            raise PolynomialError(f"malformed coefficient list: {text!r}") from None
    return _parse_sparse(s, text)


def _parse_sparse(s: str, original: str) -> IntPolynomial:
    s = s.replace(" ", "")
    if s[0] not in "+-":
        s = "+" + s
    pieces = re.findall(r"[+-][^+-]+", s)
    if "".join(pieces) != s:
        raise PolynomialError(f"malformed polynomial: {original!r}")
    out: dict[int, int] = {}
    for piece in pieces:
        sign = -1 if piece[0] == "-" else 1
        m = _TERM.match(piece[1:])
        if not m or (m.group("c") is None and m.group("var") is None):
            raise PolynomialError(f"malformed term {piece!r} in {original!r}")
        c = int(m.group("c")) if m.group("c") is not None else 1
        if m.group("var") is None:
            e = 0
        else:
            e = int(m.group("e")) if m.group("e") is not None else 1
        out[e] = out.get(e, 0) + sign * c
    deg = max(out)
    return IntPolynomial(out.get(k, 0) for k in range(deg + 1))


def format_poly(p: IntPolynomial) -> str:
    if p.is_zero:
        return "0"
    terms = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            var = "z" if k == 1 else f"z^{k}"
            body = var if a == 1 else f"{a}*{var}"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def dense_string(p: IntPolynomial) -> str:
    """Lowest-first comma-separated coefficients, the line format of generated files."""
    return ",".join(str(c) for c in p.coeffs) if not p.is_zero else "0"


# division ------------------------------------------------------------------

def pseudo_rem(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """``lc(b)**(deg a - deg b + 1) * a mod b``, computed without fractions."""
    if b.is_zero:
        raise PolynomialError("division by the zero polynomial")
    r = list(a.coeffs)
    db, lb = b.degree, b.leading
    bc = b.coeffs
    delta = len(r) - 1 - db
    if delta < 0:
        return a
    e = delta + 1
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * c for c in r]
        for i, c in enumerate(bc):
            r[shift + i] -= lr * c
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    rem = IntPolynomial(r)
    return rem * (lb**e) if e else rem


def exact_divmod(a: IntPolynomial, b: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial] | None:
    """Quotient and remainder over the integers, or None if a quotient
    coefficient is not integral."""
    if b.is_zero:
        raise PolynomialError("division by the zero polynomial")
    r = list(a.coeffs)
    db, lb = b.degree, b.leading
    if len(r) - 1 < db:
        return ZERO, a
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k]
        if c == 0:
            continue
        t, rem = divmod(c, lb)
        if rem:
            return None
        q[k - db] = t
        for i, bcoef in enumerate(b.coeffs):
            r[k - db + i] -= t * bcoef
    return IntPolynomial(q), IntPolynomial(r[:db])


def exact_quotient(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    """``a / b``; raises if ``b`` does not divide ``a`` over the integers."""
    res = exact_divmod(a, b)
    if res is None or not res[1].is_zero:
        raise PolynomialError("inexact polynomial division")
    return res[0]


def divides(b: IntPolynomial, a: IntPolynomial) -> bool:
    res = exact_divmod(a, b)
    return res is not None and res[1].is_zero


# calculus and elimination ---------------------------------------------------

def derivative(p: IntPolynomial) -> IntPolynomial:
    return IntPolynomial(k * c for k, c in enumerate(p.coeffs) if k > 0)


def resultant(p: IntPolynomial, q: IntPolynomial) -> int:
    """Exact resultant via the subresultant remainder sequence.

    Collins' recurrence keeps the remainders' coefficients polynomially
    bounded; every scalar division on the way is exact.
    """
    if p.is_zero or q.is_zero:
        raise PolynomialError("resultant with the zero polynomial")
    m, n = p.degree, q.degree
    if n == 0:
        return q.leading**m
    if m == 0:
        return p.leading**n
    a_cont, b_cont = p.content(), q.content()
    a, b = _div_scalar(p, a_cont), _div_scalar(q, b_cont)
    t = a_cont**n * b_cont**m
    s = 1
    if m < n:
        a, b = b, a
        if m % 2 and n % 2:
            s = -1
    g = h = 1
    while True:
        da, db = a.degree, b.degree
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = pseudo_rem(a, b)
        if r.is_zero:
            return 0
        a = b
        b = _div_scalar(r, g * h**delta)
        g = a.leading
        h = g**delta if delta == 1 else _exact_int_div(g**delta * h, h**delta)
        if b.degree == 0:
            da = a.degree
            h = _exact_int_div(b.leading**da * h, h**da)
            return s * t * h


def _div_scalar(p: IntPolynomial, d: int) -> IntPolynomial:
    out = []
    for c in p.coeffs:
        q, r = divmod(c, d)
        if r:
            raise PolynomialError("subresultant division was not exact")
        out.append(q)
    return IntPolynomial(out)


def _exact_int_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise PolynomialError("subresultant scalar division was not exact")
    return q


def discriminant(p: IntPolynomial) -> int:
    """``a_n**(2n-2) * prod_{j<k} (alpha_j - alpha_k)**2`` as an exact int."""
    if p.is_zero or p.degree < 1:
        raise PolynomialError("discriminant needs degree >= 1")
    n = p.degree
    if n == 1:
        return 1
    res = resultant(p, derivative(p))
    val = _exact_int_div(res, p.leading)
    return -val if (n * (n - 1) // 2) % 2 else val


def gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Z (content of the inputs is ignored)."""
    if p.is_zero:
        return q.primitive()
    if q.is_zero:
        return p.primitive()
    a, b = p.primitive(), q.primitive()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero:
        if b.degree == 0:
            return ONE
        r = pseudo_rem(a, b)
        a, b = b, r.primitive()
    return a.primitive()


_MOD_PRIMES = (2147483647, 2147483629, 2147483587)


def _gcd_degree_mod(a: list[int], b: list[int], p: int) -> int:
    """Degree of gcd(a, b) over GF(p); coefficient lists are lowest first."""
    a = np.array(a[::-1], dtype=np.int64) % p
    b = np.array(b[::-1], dtype=np.int64) % p
    a, b = np.trim_zeros(a, "f"), np.trim_zeros(b, "f")
    while len(b):
        inv = pow(int(b[0]), p - 2, p)
        b = b * inv % p
        while len(a) >= len(b):
            lead = int(a[0])
            if lead:
                a[: len(b)] = (a[: len(b)] - lead * b) % p
            a = a[1:]
        a = np.trim_zeros(a, "f")
        a, b = b, a
    return len(a) - 1


def is_squarefree(p: IntPolynomial) -> bool:
    """True iff ``p`` has no repeated complex zero.

    A trivial gcd of ``p`` and ``p'`` modulo a prime not dividing the
    leading coefficient (nor the degree) already proves square-freeness;
    the exact integer gcd is the fallback for unlucky primes.
    """
    if p.is_zero or p.degree < 1:
        raise PolynomialError("square-freeness needs degree >= 1")
    dp = derivative(p)
    for prime in _MOD_PRIMES:
        if p.leading % prime == 0 or p.degree % prime == 0:
            continue
        if _gcd_degree_mod(list(p.coeffs), [c % prime for c in dp.coeffs], prime) == 0:
            return True
    return gcd(p, dp).degree == 0


def squarefree_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Primitive square-free factors ``S_i`` with ``p = c * prod S_i**i``.

    Repeated-gcd (Musser) scheme; factors with ``S_i == 1`` are omitted.
    """
    if p.is_zero or p.degree < 1:
        raise PolynomialError("square-free decomposition needs degree >= 1")
    f = p.primitive()
    a = gcd(f, derivative(f))
    b = exact_quotient(f, a)
    out = []
    i = 1
    while b.degree > 0:
        c = gcd(a, b)
        s = exact_quotient(b, c)
        if s.degree > 0:
            out.append((s, i))
        a = exact_quotient(a, c)
        b = c
        i += 1
    return out


def factor_multiplicity(p: IntPolynomial, q: IntPolynomial) -> int:
    """Largest ``m`` with ``q**m`` dividing ``p`` over the integers."""
    if q.is_zero or q.degree < 1:
        raise PolynomialError("multiplicity needs a nonconstant factor")
    if p.is_zero:
        raise PolynomialError("every power divides the zero polynomial")
    m = 0
    while p.degree >= q.degree:
        res = exact_divmod(p, q)
        if res is None or not res[1].is_zero:
            break
        p = res[0]
        m += 1
    return m


def power_sums(p: IntPolynomial, m_max: int) -> list[Fraction]:
    """Newton power sums ``sum_k alpha_k**m`` for ``m = 1..m_max``."""
    if p.is_zero or p.degree < 1:
        raise PolynomialError("power sums need degree >= 1")
    n = p.degree
    an = p.leading
    # e-like coefficients: c_i = a_{n-i} / a_n
    c = [Fraction(p[n - i], an) for i in range(n + 1)]
    ps: list[Fraction] = []
    for m in range(1, m_max + 1):
        s = Fraction(-m) * c[m] if m <= n else Fraction(0)
        for i in range(1, min(m - 1, n) + 1):
            s -= c[i] * ps[m - i - 1]
        ps.append(s)
    return ps


def exact_mean(p: IntPolynomial) -> Fraction:
    """Mean of the zeros, ``-a_{n-1} / (n a_n)``."""
    n = p.degree
    return Fraction(-p[n - 1], n * p.leading)


def log_abs_int(x: int) -> float:
    """``log|x|`` for an arbitrarily large nonzero int, without float overflow."""
    if x == 0:
        raise PolynomialError("log of zero")
    x = abs(x)
    bits = x.bit_length()
    if bits <= 1000:
        return math.log(x)
    s = bits - 64
    return math.log(x >> s) + s * math.log(2.0)
