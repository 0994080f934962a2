"""Exact univariate polynomial algebra over the rationals.

Coefficients are `fractions.Fraction` throughout and nothing in this module
touches floating point: root counts are certified integers obtained from
Sturm chains, and isolating intervals have exact rational endpoints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def as_rational(x) -> Fraction:
    """Coerce ints, strings ("3/4", "0.25") and Fractions to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class Interval:
    """Rational interval [lo, hi].

    Root-counting operations interpret intervals as half-open (lo, hi]:
    a root exactly at `lo` is excluded, one at `hi` is included.  A
    degenerate interval (lo == hi) pins a root exactly.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", as_rational(self.lo))
        object.__setattr__(self, "hi", as_rational(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"interval endpoints out of order: {self.lo} > {self.hi}")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def contains(self, q) -> bool:
        q = as_rational(q)
        return self.lo <= q <= self.hi


class Polynomial:
    """Dense univariate polynomial; coeffs[k] is the weight of x**k.

    The zero polynomial is the empty tuple and has degree -1.  Instances
    are immutable and hashable, so they are safe to share and cache.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # pragma: no cover - immutability guard
        raise AttributeError("Polynomial is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls(())

    @classmethod
    def one(cls) -> "Polynomial":
        return cls((1,))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((as_rational(c),))

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "Polynomial":
        if power < 0:
            raise ValueError("monomial power must be >= 0")
        return cls((0,) * power + (as_rational(coeff),))

    @classmethod
    def from_roots(cls, roots: Sequence) -> "Polynomial":
        p = cls.one()
        for r in roots:
            p = p * cls((-as_rational(r), 1))
        return p

    # -- basic queries ---------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __bool__(self):
        return not self.is_zero

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero or other.is_zero:
            return Polynomial.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    def scale(self, c) -> "Polynomial":
        c = as_rational(c)
        return Polynomial(tuple(a * c for a in self.coeffs))

    def shift_up(self, k: int) -> "Polynomial":
        """Multiply by x**k."""
        if self.is_zero:
            return self
        return Polynomial((Fraction(0),) * k + self.coeffs)

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(k * c for k, c in enumerate(self.coeffs) if k > 0))

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """self(inner(x)), by Horner over polynomials."""
        result = Polynomial.zero()
        for c in reversed(self.coeffs):
            result = result * inner + Polynomial.constant(c)
        return result

    def eval(self, x) -> Fraction:
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __call__(self, x) -> Fraction:
        return self.eval(x)

    # -- division ---------------------------------------------------

    def __divmod__(self, other: "Polynomial"):
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Polynomial.zero(), self
        quot = [Fraction(0)] * (dq + 1)
        dl = other.leading
        for k in range(dq, -1, -1):
            top = rem[k + other.degree]
            if top == 0:
                continue
            f = top / dl
            quot[k] = f
            for j, c in enumerate(other.coeffs):
                rem[k + j] -= f * c
        return Polynomial(quot), Polynomial(rem[: other.degree])

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return divmod(self, other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        q, r = divmod(self, other)
        if not r.is_zero:
            raise ValueError("division is not exact")
        return q

    # -- normalizations ---------------------------------------------------

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    def primitive(self) -> "Polynomial":
        """Scale by a positive rational so coefficients are coprime integers."""
        if self.is_zero:
            return self
        den = math.lcm(*(c.denominator for c in self.coeffs))
        num = math.gcd(*(abs(c.numerator) for c in self.coeffs))
        return self.scale(Fraction(den, num))

    def int_coeffs(self) -> list:
        """Primitive integer coefficient list (requires the scaled form)."""
        return [c.numerator for c in self.primitive().coeffs]


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor (1 for coprime, 0 only if both zero)."""
    while not b.is_zero:
        a, b = b, (a % b)
        if not b.is_zero:
            b = b.monic()
    return a.monic() if not a.is_zero else a


def squarefree_part(p: Polynomial) -> Polynomial:
    """p / gcd(p, p'): same roots, all simple.  Leading sign follows p."""
    if p.is_zero:
        raise ValueError("squarefree part of the zero polynomial")
    if p.degree == 0:
        return p
    return p.exact_div(poly_gcd(p, p.derivative()))


def squarefree_decomposition(p: Polynomial) -> list:
    """Yun decomposition: [(f1, 1), (f2, 2), ...] with p ~ prod fi**i.

    Factors are monic and pairwise coprime; multiplicity-0 entries are
    omitted.  Constant p yields an empty list.
    """
    if p.is_zero:
        raise ValueError("decomposition of the zero polynomial")
    if p.degree == 0:
        return []
    out = []
    g = poly_gcd(p, p.derivative())
    b = p.exact_div(g)
    c = p.derivative().exact_div(g)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        fi = poly_gcd(b, d)
        if fi.degree > 0:
            out.append((fi, i))
        b = b.exact_div(fi)
        c = d.exact_div(fi)
        d = c - b.derivative()
        i += 1
    return out


def _sign_changes(values: Sequence[int]) -> int:
    changes = 0
    prev = 0
    for v in values:
        if v == 0:
            continue
        if prev != 0 and v != prev:
            changes += 1
        prev = v
    return changes


class SturmChain:
    """Sturm chain of a squarefree polynomial, held as primitive integer
    coefficient lists for fast exact sign evaluation at rationals."""

    def __init__(self, squarefree: Polynomial):
        if squarefree.is_zero:
            raise ValueError("Sturm chain of the zero polynomial")
        chain = [squarefree.primitive()]
        d = squarefree.derivative()
        if not d.is_zero:
            chain.append(d.primitive())
            while chain[-1].degree > 0:
                r = -(chain[-2] % chain[-1])
                if r.is_zero:
                    break
                chain.append(r.primitive())
        self._chain = [[c.numerator for c in p.coeffs] for p in chain]
        self._variation_cache: dict = {}

    @staticmethod
    def _isign_at(ic: list, num: int, den: int) -> int:
        # sign of sum(ic[k] * (num/den)**k) == sign of sum(ic[k]*num**k*den**(d-k))
        acc = 0
        pw = 1
        d = len(ic) - 1
        for k, c in enumerate(ic):
            if c:
                acc += c * pw * den ** (d - k)
            pw *= num
        return (acc > 0) - (acc < 0)

    def variations_at(self, x: Fraction) -> int:
        key = x
        cached = self._variation_cache.get(key)
        if cached is not None:
            return cached
        num, den = x.numerator, x.denominator
        signs = [self._isign_at(ic, num, den) for ic in self._chain]
        v = _sign_changes(signs)
        self._variation_cache[key] = v
        return v

    def count(self, lo: Fraction, hi: Fraction) -> int:
        """Distinct roots in (lo, hi); endpoints must not be roots."""
        if lo >= hi:
            return 0
        return self.variations_at(lo) - self.variations_at(hi)


def _strip_endpoint_roots(sf: Polynomial, iv: Interval):
    """Remove simple roots of the squarefree poly at iv endpoints.

    Returns (stripped, hi_is_root): a root at lo is discarded (excluded by
    the half-open convention), a root at hi is reported separately.
    """
    work = sf
    if work.degree >= 0 and work.eval(iv.lo) == 0:
        work = work.exact_div(Polynomial((-iv.lo, 1)))
    hi_is_root = False
    if iv.hi != iv.lo and work.degree >= 0 and work.eval(iv.hi) == 0:
        hi_is_root = True
        work = work.exact_div(Polynomial((-iv.hi, 1)))
    return work, hi_is_root


def count_real_roots(p: Polynomial, iv: Interval) -> int:
    """Exact number of distinct real roots of p in (iv.lo, iv.hi]."""
    if p.is_zero:
        raise ValueError("root count of the zero polynomial")
    if p.degree == 0 or iv.lo == iv.hi:
        return 0
    sf = squarefree_part(p)
    work, hi_root = _strip_endpoint_roots(sf, iv)
    extra = 1 if hi_root else 0
    if work.degree <= 0:
        return extra
    return SturmChain(work).count(iv.lo, iv.hi) + extra


def count_real_roots_with_multiplicity(p: Polynomial, iv: Interval) -> int:
    """Roots in (iv.lo, iv.hi] counted with their multiplicities."""
    if p.is_zero:
        raise ValueError("root count of the zero polynomial")
    total = 0
    for factor, mult in squarefree_decomposition(p):
        total += mult * count_real_roots(factor, iv)
    return total


def isolate_roots(p: Polynomial, iv: Interval) -> list:
    """Disjoint isolating intervals, one per distinct root of p in (lo, hi].

    Returned intervals are either degenerate (an exact rational root) or
    carry exactly one root in their half-open (lo, hi] span.
    """
    if p.is_zero:
        raise ValueError("cannot isolate roots of the zero polynomial")
    if p.degree == 0 or iv.lo == iv.hi:
        return []
    sf = squarefree_part(p)
    work, hi_root = _strip_endpoint_roots(sf, iv)
    found = []
    if work.degree > 0:
        chain = SturmChain(work)

        def split(lo: Fraction, hi: Fraction):
            n = chain.count(lo, hi)
            if n == 0:
                return
            if n == 1:
                found.append(Interval(lo, hi))
                return
            mid = (lo + hi) / 2
            if work.eval(mid) == 0:
                found.append(Interval(mid, mid))
                # retreat to nearby non-root cut points around the exact hit
                delta = (hi - lo) / 4
                while True:
                    a = mid - delta
                    b = mid + delta
                    if (
                        work.eval(a) != 0
                        and work.eval(b) != 0
                        and chain.count(a, b) == 1
                    ):
                        break
                    delta /= 2
                split(lo, a)
                split(b, hi)
            else:
                split(lo, mid)
                split(mid, hi)

        split(iv.lo, iv.hi)
    if hi_root:
        found.append(Interval(iv.hi, iv.hi))
    found.sort(key=lambda r: (r.lo, r.hi))
    return found


def refine_root(p: Polynomial, iv: Interval, width) -> Interval:
    """Shrink an isolating interval by bisection to the requested width.

    The input must isolate a single root: either p changes sign across the
    endpoints or the squarefree Sturm count over (lo, hi] is exactly 1.
    """
    if p.is_zero:
        raise ValueError("cannot refine a root of the zero polynomial")
    width = as_rational(width)
    if iv.lo == iv.hi:
        if p.eval(iv.lo) != 0:
            raise ValueError("degenerate interval does not contain a root")
        return iv

    lo, hi = iv.lo, iv.hi
    s_lo = p.eval(lo)
    s_hi = p.eval(hi)
    sign_bracketed = s_lo * s_hi < 0

    sf = squarefree_part(p)
    chain = None
    if not sign_bracketed:
        work, hi_root = _strip_endpoint_roots(sf, iv)
        base = 1 if hi_root else 0
        inner = SturmChain(work).count(lo, hi) if work.degree > 0 else 0
        if inner + base != 1:
            raise ValueError("interval does not isolate exactly one root")
        if base == 1 and inner == 0:
            return Interval(iv.hi, iv.hi)
        chain = SturmChain(work)

    while hi - lo > width:
        mid = (lo + hi) / 2
        v = p.eval(mid)
        if v == 0:
            return Interval(mid, mid)
        if sign_bracketed:
            if s_lo * v < 0:
                hi, s_hi = mid, v
            else:
                lo, s_lo = mid, v
        else:
            if chain.count(lo, mid) == 1:
                hi = mid
            else:
                lo = mid
    return Interval(lo, hi)


def descartes_bound(p: Polynomial) -> int:
    """Sign changes of the coefficient sequence: an upper bound, of the same
    parity, for the number of positive roots counted with multiplicity."""
    if p.is_zero:
        raise ValueError("Descartes bound of the zero polynomial")
    return _sign_changes([(c > 0) - (c < 0) for c in p.coeffs])


def cauchy_root_bound(p: Polynomial) -> Fraction:
    """1 + max |c_k| / |lead|: every real root lies in [-bound, bound]."""
    if p.is_zero:
        raise ValueError("root bound of the zero polynomial")
    if p.degree == 0:
        return Fraction(1)
    lead = abs(p.leading)
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lead


def count_positive_roots_with_multiplicity(p: Polynomial) -> int:
    """Positive real roots with multiplicity, over (0, cauchy bound]."""
    return count_real_roots_with_multiplicity(
        p, Interval(Fraction(0), cauchy_root_bound(p))
    )


def format_poly(p: Polynomial, var: str = "h") -> str:
    """Render with exact coefficients, highest power first: '3/2*h^2 - h + 1'."""
    if p.is_zero:
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        if c == 0:
            continue
        mag = abs(c)
        if k == 0:
            body = str(mag)
        else:
            xk = var if k == 1 else f"{var}^{k}"
            body = xk if mag == 1 else f"{mag}*{xk}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
