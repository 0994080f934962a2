"""Certified interval arithmetic with exact rational endpoints.

Used wherever a square root (or pi) enters an otherwise exact computation:
the result is always a rational interval guaranteed to contain the true
real value, so downstream sign decisions are rigorous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .polynomials import Polynomial, as_rational


@dataclass(frozen=True)
class RatInterval:
    """[lo, hi] with rational endpoints; encloses one unknown real."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    @classmethod
    def point(cls, q) -> "RatInterval":
        q = as_rational(q)
        return cls(q, q)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q) -> bool:
        q = as_rational(q)
        return self.lo <= q <= self.hi

    def sign(self):
        """+1 / -1 when the enclosure settles the sign, 0 for the exact
        point zero, None when the interval straddles zero."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def __add__(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "RatInterval":
        return RatInterval(-self.hi, -self.lo)

    def __mul__(self, other: "RatInterval") -> "RatInterval":
        cands = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RatInterval(min(cands), max(cands))

    def scale(self, q) -> "RatInterval":
        q = as_rational(q)
        if q >= 0:
            return RatInterval(self.lo * q, self.hi * q)
        return RatInterval(self.hi * q, self.lo * q)

    def reciprocal(self) -> "RatInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval straddles zero")
        return RatInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other: "RatInterval") -> "RatInterval":
        return self * other.reciprocal()

    def ipow(self, n: int) -> "RatInterval":
        if n < 0:
            return self.ipow(-n).reciprocal()
        if n == 0:
            return RatInterval.point(1)
        if n % 2 == 1 or self.lo >= 0:
            return RatInterval(self.lo**n, self.hi**n)
        if self.hi <= 0:
            return RatInterval(self.hi**n, self.lo**n)
        return RatInterval(Fraction(0), max(self.lo**n, self.hi**n))


def sqrt_rational(q, bits: int) -> RatInterval:
    """Enclosure of sqrt(q) with width at most 2**-bits (exact when q is a
    perfect rational square at this scale)."""
    q = as_rational(q)
    if q < 0:
        raise ValueError("square root of a negative rational")
    if q == 0:
        return RatInterval.point(0)
    n, d = q.numerator, q.denominator
    # sqrt(n/d) = sqrt(n*d)/d, bracketed by scaled integer square roots
    m = (n * d) << (2 * bits)
    s = math.isqrt(m)
    scale = d << bits
    if s * s == m:
        return RatInterval.point(Fraction(s, scale))
    return RatInterval(Fraction(s, scale), Fraction(s + 1, scale))


def sqrt_interval(iv: RatInterval, bits: int) -> RatInterval:
    if iv.lo < 0:
        raise ValueError("square root of an interval reaching below zero")
    return RatInterval(sqrt_rational(iv.lo, bits).lo, sqrt_rational(iv.hi, bits).hi)


def _atan_inv(m: int, bits: int) -> RatInterval:
    """Enclosure of atan(1/m) for integer m >= 2, by the alternating series."""
    x = Fraction(1, m)
    x2 = x * x
    term = x
    total = Fraction(0)
    k = 0
    cutoff = Fraction(1, 1 << (bits + 8))
    prev = total
    while True:
        prev = total
        total += term if k % 2 == 0 else -term
        k += 1
        term = term * x2 * (2 * k - 1) / (2 * k + 1)
        if term <= cutoff and k >= 2:
            break
    lo, hi = (prev, total) if total > prev else (total, prev)
    return RatInterval(lo, hi + cutoff)


@lru_cache(maxsize=None)
def pi_interval(bits: int = 128) -> RatInterval:
    """Machin enclosure of pi: 16*atan(1/5) - 4*atan(1/239)."""
    return _atan_inv(5, bits + 6).scale(16) - _atan_inv(239, bits + 6).scale(4)


def poly_range(p: Polynomial, x: RatInterval) -> RatInterval:
    """Interval Horner evaluation: contains p(t) for every t in x."""
    acc = RatInterval.point(0)
    for c in reversed(p.coeffs):
        acc = acc * x + RatInterval.point(c)
    return acc


def poly_at(p: Polynomial, x) -> RatInterval:
    return RatInterval.point(p.eval(x))
