"""Exact first-order averaged integrals for the perturbed circular center.

The unperturbed field is a circular center slowed by the positive factor
(1-alpha1*x)**m1 * (1-alpha2*x)**m2; the perturbation divides a degree-n
polynomial field by that same factor.  Orbits are circles labelled by
h = x**2 + y**2, traversed as x = sqrt(h)*sin(t), y = sqrt(h)*cos(t), and
the annulus of closed orbits ends at h_max = min(1/alpha1**2, 1/alpha2**2).

Every loop integral this module produces reduces exactly to

    rad1(h)/r1**(2*m1-1) + rad2(h)/r2**(2*m2-1) + tail(h),
    r_i = sqrt(1 - alpha_i**2 * h),

with rational polynomials rad1/rad2/tail.  A single global factor of pi is
kept symbolic: all stored polynomials are the integral values divided by pi.
When alpha1 == alpha2 the two radical parts collapse and the function is
pr(r) / r**(2*(m1+m2)-1) for a single rational polynomial pr in r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .intervals import RatInterval, pi_interval, poly_range, sqrt_interval
from .polynomials import Polynomial, as_rational


class AssemblyError(ValueError):
    pass


@dataclass(frozen=True)
class SystemFamily:
    """Parameters of the unperturbed field: both alphas nonzero."""

    alpha1: Fraction
    alpha2: Fraction
    m1: int
    m2: int

    def __post_init__(self):
        object.__setattr__(self, "alpha1", as_rational(self.alpha1))
        object.__setattr__(self, "alpha2", as_rational(self.alpha2))
        if self.alpha1 == 0 or self.alpha2 == 0:
            raise ValueError("alpha1 and alpha2 must both be nonzero")
        if self.m1 < 1 or self.m2 < 1:
            raise ValueError("m1 and m2 must be positive integers")

    @property
    def h_max(self) -> Fraction:
        """Right end of the annulus of closed orbits."""
        return min(1 / self.alpha1**2, 1 / self.alpha2**2)

    @property
    def is_confluent(self) -> bool:
        return self.alpha1 == self.alpha2

    @property
    def is_mirror(self) -> bool:
        """alpha2 == -alpha1: the two radicals coincide and can be merged."""
        return self.alpha1 == -self.alpha2


@dataclass
class PerturbCoeffs:
    """Sparse perturbation coefficient grid over 0 <= i+j <= n.

    `a` weights the x-component monomials, `b` the y-component; missing
    entries are zero.  Every entry must satisfy |value| <= box.
    """

    n: int
    a: dict = field(default_factory=dict)
    b: dict = field(default_factory=dict)
    box: Fraction = Fraction(1)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("perturbation degree must be >= 0")
        self.box = as_rational(self.box)
        if self.box <= 0:
            raise ValueError("coefficient box bound must be positive")
        for name in ("a", "b"):
            grid = getattr(self, name)
            clean = {}
            for (i, j), value in grid.items():
                value = as_rational(value)
                if i < 0 or j < 0 or i + j > self.n:
                    raise ValueError(f"{name}[{i},{j}] outside 0 <= i+j <= {self.n}")
                if abs(value) > self.box:
                    raise ValueError(f"|{name}[{i},{j}]| exceeds the box bound {self.box}")
                if value != 0:
                    clean[(i, j)] = value
            setattr(self, name, clean)

    @property
    def is_zero(self) -> bool:
        return not self.a and not self.b


@dataclass(frozen=True)
class MelnikovNormalForm:
    """rad1/r1**(2*m1-1) + rad2/r2**(2*m2-1) + tail, in units of pi."""

    family: SystemFamily
    rad1: Polynomial
    rad2: Polynomial
    tail: Polynomial
    merged: bool = False

    @property
    def is_zero(self) -> bool:
        return self.rad1.is_zero and self.rad2.is_zero and self.tail.is_zero

    def center_value(self) -> Fraction:
        """Exact value at h = 0, where both radicals equal 1."""
        return self.rad1.eval(0) + self.rad2.eval(0) + self.tail.eval(0)

    def __add__(self, other: "MelnikovNormalForm") -> "MelnikovNormalForm":
        if other.family != self.family:
            raise AssemblyError("cannot add normal forms of different families")
        return MelnikovNormalForm(
            self.family,
            self.rad1 + other.rad1,
            self.rad2 + other.rad2,
            self.tail + other.tail,
            self.merged,
        )

    def scale(self, c) -> "MelnikovNormalForm":
        return MelnikovNormalForm(
            self.family, self.rad1.scale(c), self.rad2.scale(c), self.tail.scale(c), self.merged
        )


@dataclass(frozen=True)
class ConfluentNormalForm:
    """pr(r) / r**(2*m-1) with r = sqrt(1 - alpha**2 * h), in units of pi."""

    family: SystemFamily
    pr: Polynomial
    m: int

    @property
    def is_zero(self) -> bool:
        return self.pr.is_zero

    def center_value(self) -> Fraction:
        """Exact value at h = 0 (r = 1)."""
        return self.pr.eval(1)

    def __add__(self, other: "ConfluentNormalForm") -> "ConfluentNormalForm":
        if other.family != self.family:
            raise AssemblyError("cannot add normal forms of different families")
        return ConfluentNormalForm(self.family, self.pr + other.pr, self.m)

    def scale(self, c) -> "ConfluentNormalForm":
        return ConfluentNormalForm(self.family, self.pr.scale(c), self.m)


@dataclass(frozen=True)
class PartialFractionRow:
    """Exact expansion of x**k / ((1-a1*x)**m1 * (1-a2*x)**m2).

    tilde_a[j-1] weights 1/(1-a1*x)**j for j = 1..m1, tilde_b likewise for
    the second factor, and tail holds the polynomial part (empty unless
    k >= m1 + m2).
    """

    k: int
    tilde_a: tuple
    tilde_b: tuple
    tail: tuple


def _double_factorial(n: int) -> int:
    # (-1)!! == 1 by convention
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


@lru_cache(maxsize=None)
def circle_moment(i: int, j: int) -> Polynomial:
    """Loop integral of x**i * y**j dt over the circle of label h.

    Zero unless both exponents are even; otherwise a single monomial
    (2 * (i-1)!! * (j-1)!! / (i+j)!!) * h**((i+j)/2), in units of pi.
    """
    if i < 0 or j < 0:
        raise ValueError("moment exponents must be >= 0")
    if i % 2 or j % 2:
        return Polynomial.zero()
    wallis = Fraction(
        2 * _double_factorial(i - 1) * _double_factorial(j - 1),
        _double_factorial(i + j),
    )
    return Polynomial.monomial((i + j) // 2, wallis)


@lru_cache(maxsize=None)
def _radial_numerator(m: int) -> Polynomial:
    """U_m(w) with loop integral of (1 - a*sin t)**-m dt == pi*U_m(w)/r**(2m-1),
    where w = r**2 = 1 - a**2.

    Derived from the integration-by-parts recurrence
    (m-1)*w*J_m = (2m-3)*J_{m-1} - (m-2)*J_{m-2}, seeded by J_1 = 2*pi/r.
    """
    if m < 1:
        raise ValueError("radical power must be >= 1")
    if m in (1, 2):
        return Polynomial.constant(2)
    w = Polynomial.x()
    u_prev2 = _radial_numerator(m - 2)
    u_prev1 = _radial_numerator(m - 1)
    return (u_prev1.scale(2 * m - 3) - (w * u_prev2).scale(m - 2)).scale(
        Fraction(1, m - 1)
    )


@dataclass(frozen=True)
class SingleFactorIntegral:
    """rad(h)/r**(2*m-1) + tail(h) with r = sqrt(1 - alpha**2*h), pi units."""

    alpha: Fraction
    m: int
    rad: Polynomial
    tail: Polynomial


def _u_poly(alpha: Fraction) -> Polynomial:
    """1 - alpha**2 * h as a polynomial in h."""
    return Polynomial((1, -(alpha * alpha)))


def pure_power_integral(m: int, alpha) -> SingleFactorIntegral:
    """Loop integral of dt / (1 - alpha*x)**m, m >= 1, in closed form."""
    alpha = as_rational(alpha)
    if m < 1:
        raise ValueError("power must be >= 1")
    rad = _radial_numerator(m).compose(_u_poly(alpha))
    return SingleFactorIntegral(alpha, m, rad, Polynomial.zero())


def power_moment(p: int, alpha) -> Polynomial:
    """Loop integral of (1 - alpha*x)**p dt for p >= 0 (a polynomial in h)."""
    alpha = as_rational(alpha)
    if p < 0:
        raise ValueError("moment power must be >= 0")
    out = Polynomial.zero()
    for q in range(0, p + 1, 2):
        c = (
            Fraction(2 * math.comb(p, q) * _double_factorial(q - 1), _double_factorial(q))
            * alpha**q
        )
        out = out + Polynomial.monomial(q // 2, c)
    return out


@lru_cache(maxsize=None)
def monomial_power_integral(k: int, m: int, alpha) -> SingleFactorIntegral:
    """Loop integral of x**k / (1 - alpha*x)**m dt.

    Reduces through x = (1 - (1-alpha*x))/alpha: residual negative powers
    feed the pure power integral, nonnegative ones are plain moments.  The
    1/alpha**k prefactor produced by the substitution is included.
    """
    alpha = as_rational(alpha)
    if k < 0 or m < 1:
        raise ValueError("need k >= 0 and m >= 1")
    u = _u_poly(alpha)
    rad = Polynomial.zero()
    tail = Polynomial.zero()
    scale = Fraction(1) / alpha**k
    for j in range(k + 1):
        c = scale * ((-1) ** j) * math.comb(k, j)
        if j < m:
            # lift 1/r**(2(m-j)-1) to the common denominator r**(2m-1)
            rad = rad + (_radial_numerator(m - j).compose(u) * u**j).scale(c)
        else:
            tail = tail + power_moment(j - m, alpha).scale(c)
    return SingleFactorIntegral(alpha, m, rad, tail)


def _solve_linear(matrix: list, rhs: list) -> list:
    """Exact Gaussian elimination; matrix is a list of rows."""
    n = len(matrix)
    aug = [list(row) + [r] for row, r in zip(matrix, rhs)]
    cols = len(matrix[0])
    if n != cols:
        raise ValueError("linear system must be square")
    for col in range(cols):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular partial-fraction system")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [aug[r][-1] for r in range(n)]


@lru_cache(maxsize=None)
def partial_fractions(k: int, family: SystemFamily) -> PartialFractionRow:
    """Expand x**k over the two distinct linear factors of the family.

    Requires alpha1 != alpha2; the confluent case goes through
    monomial_power_integral with the single factor instead.
    """
    if family.is_confluent:
        raise AssemblyError("partial fractions need distinct alphas")
    if k < 0:
        raise ValueError("k must be >= 0")
    m1, m2 = family.m1, family.m2
    f1 = Polynomial((1, -family.alpha1))
    f2 = Polynomial((1, -family.alpha2))
    tail_len = max(0, k - m1 - m2 + 1)
    # columns: multiplying each basis term by the full denominator
    basis = []
    for j in range(1, m1 + 1):
        basis.append(f1 ** (m1 - j) * f2**m2)
    for j in range(1, m2 + 1):
        basis.append(f1**m1 * f2 ** (m2 - j))
    full = f1**m1 * f2**m2
    for j in range(tail_len):
        basis.append(full.shift_up(j))
    size = len(basis)
    matrix = [[p.coeff(row) for p in basis] for row in range(size)]
    rhs = [Fraction(1) if row == k else Fraction(0) for row in range(size)]
    sol = _solve_linear(matrix, rhs)
    return PartialFractionRow(
        k,
        tuple(sol[:m1]),
        tuple(sol[m1 : m1 + m2]),
        tuple(sol[m1 + m2 :]),
    )


@lru_cache(maxsize=None)
def _pure_monomial_integral(k: int, family: SystemFamily) -> tuple:
    """(rad1, rad2, tail) for the loop integral of x**k / W dt, alpha1 != alpha2."""
    row = partial_fractions(k, family)
    u1 = _u_poly(family.alpha1)
    u2 = _u_poly(family.alpha2)
    rad1 = Polynomial.zero()
    rad2 = Polynomial.zero()
    for j, c in enumerate(row.tilde_a, start=1):
        if c:
            rad1 = rad1 + (_radial_numerator(j).compose(u1) * u1 ** (family.m1 - j)).scale(c)
    for j, c in enumerate(row.tilde_b, start=1):
        if c:
            rad2 = rad2 + (_radial_numerator(j).compose(u2) * u2 ** (family.m2 - j)).scale(c)
    tail = Polynomial.zero()
    for j, c in enumerate(row.tail):
        if c:
            tail = tail + circle_moment(j, 0).scale(c)
    return rad1, rad2, tail


@lru_cache(maxsize=None)
def monomial_integral(i: int, j: int, family: SystemFamily) -> MelnikovNormalForm:
    """Loop integral of x**i * y**j / W dt in normal form (alpha1 != alpha2).

    Odd powers of y integrate to zero by the t -> pi - t symmetry; even
    powers reduce through y**2 = h - x**2.
    """
    if family.is_confluent:
        raise AssemblyError("confluent family: use the single-radical path")
    if i < 0 or j < 0:
        raise ValueError("exponents must be >= 0")
    zero = Polynomial.zero()
    if j % 2 == 1:
        return MelnikovNormalForm(family, zero, zero, zero, family.is_mirror)
    kk = j // 2
    rad1 = rad2 = tail = zero
    for l in range(kk + 1):
        c = Fraction((-1) ** l * math.comb(kk, l))
        hpow = Polynomial.monomial(kk - l, c)
        r1, r2, t = _pure_monomial_integral(i + 2 * l, family)
        rad1 = rad1 + r1 * hpow
        rad2 = rad2 + r2 * hpow
        tail = tail + t * hpow
    return MelnikovNormalForm(family, rad1, rad2, tail, family.is_mirror)


@lru_cache(maxsize=None)
def _confluent_monomial(i: int, j: int, m: int, alpha) -> tuple:
    """(rad, tail) in h for the loop integral of x**i y**j/(1-alpha*x)**m dt."""
    if j % 2 == 1:
        return Polynomial.zero(), Polynomial.zero()
    kk = j // 2
    rad = tail = Polynomial.zero()
    for l in range(kk + 1):
        c = Fraction((-1) ** l * math.comb(kk, l))
        hpow = Polynomial.monomial(kk - l, c)
        sf = monomial_power_integral(i + 2 * l, m, alpha)
        rad = rad + sf.rad * hpow
        tail = tail + sf.tail * hpow
    return rad, tail


def assemble_melnikov(family: SystemFamily, coeffs: PerturbCoeffs) -> MelnikovNormalForm:
    """Exact normal form of the first-order integral, alpha1 != alpha2.

    Linear in the coefficients: a[i,j] weights the x**(i+1)*y**j integrand
    monomial and b[i,j] the x**i*y**(j+1) one.
    """
    if family.is_confluent:
        raise AssemblyError("confluent family passed to the two-radical assembly")
    zero = Polynomial.zero()
    total = MelnikovNormalForm(family, zero, zero, zero, family.is_mirror)
    for (i, j), value in sorted(coeffs.a.items()):
        total = total + monomial_integral(i + 1, j, family).scale(value)
    for (i, j), value in sorted(coeffs.b.items()):
        total = total + monomial_integral(i, j + 1, family).scale(value)
    return total


def assemble_confluent(family: SystemFamily, coeffs: PerturbCoeffs) -> ConfluentNormalForm:
    """Exact single-radical form for alpha1 == alpha2.

    The result is pr(r)/r**(2m-1) with m = m1 + m2: polynomial-in-h parts
    pick up the odd powers r**(2m-1) and above, the radical parts the even
    powers below 2m-1, and pr(1) = 0 since the function vanishes at h = 0.
    """
    if not family.is_confluent:
        raise AssemblyError("two distinct alphas passed to the confluent assembly")
    alpha = family.alpha1
    m = family.m1 + family.m2
    rad = tail = Polynomial.zero()
    for (i, j), value in sorted(coeffs.a.items()):
        r, t = _confluent_monomial(i + 1, j, m, alpha)
        rad = rad + r.scale(value)
        tail = tail + t.scale(value)
    for (i, j), value in sorted(coeffs.b.items()):
        r, t = _confluent_monomial(i, j + 1, m, alpha)
        rad = rad + r.scale(value)
        tail = tail + t.scale(value)
    # substitute h = (1 - r**2)/alpha**2 and clear to a single polynomial in r
    subst = Polynomial((1 / alpha**2, 0, -1 / alpha**2))
    pr = rad.compose(subst) + tail.compose(subst).shift_up(2 * m - 1)
    return ConfluentNormalForm(family, pr, m)


def assemble(family: SystemFamily, coeffs: PerturbCoeffs):
    """Dispatch to the confluent or two-radical assembly."""
    if family.is_confluent:
        return assemble_confluent(family, coeffs)
    return assemble_melnikov(family, coeffs)


def scaled_value(nf, h: RatInterval, bits: int) -> RatInterval:
    """Enclosure of the normal-form value divided by pi over an h-interval.

    The h-interval must stay inside [0, h_max); radical enclosures are
    computed to ~2**-bits and widen naturally near the annulus edge.
    """
    fam = nf.family
    if h.lo < 0 or h.hi >= fam.h_max:
        raise ValueError("evaluation point outside [0, h_max)")
    if isinstance(nf, ConfluentNormalForm):
        w = poly_range(_u_poly(fam.alpha1), h)
        r = sqrt_interval(w, bits)
        return poly_range(nf.pr, r) / r.ipow(2 * nf.m - 1)
    r1 = sqrt_interval(poly_range(_u_poly(fam.alpha1), h), bits)
    r2 = sqrt_interval(poly_range(_u_poly(fam.alpha2), h), bits)
    total = poly_range(nf.tail, h)
    if not nf.rad1.is_zero:
        total = total + poly_range(nf.rad1, h) / r1.ipow(2 * fam.m1 - 1)
    if not nf.rad2.is_zero:
        total = total + poly_range(nf.rad2, h) / r2.ipow(2 * fam.m2 - 1)
    return total


def certified_sign(nf, h, max_bits: int = 4096):
    """Sign of the normal form at rational h (pi dropped), or None if the
    enclosure still straddles zero at the bit cap."""
    point = RatInterval.point(as_rational(h))
    bits = 64
    while bits <= max_bits:
        try:
            s = scaled_value(nf, point, bits).sign()
        except ZeroDivisionError:
            s = None
        if s is not None:
            return s
        bits *= 2
    return None


def evaluate_normal_form(nf, h, precision: int = 30) -> RatInterval:
    """Rigorous enclosure of the integral value (pi included) at rational h,
    of width at most 10**-precision."""
    h = as_rational(h)
    if precision < 1:
        raise ValueError("precision must be a positive digit count")
    if h < 0 or h >= nf.family.h_max:
        raise ValueError("evaluation point outside [0, h_max)")
    if nf.is_zero:
        return RatInterval.point(0)
    target = Fraction(1, 10**precision)
    point = RatInterval.point(h)
    bits = 64
    while True:
        try:
            val = scaled_value(nf, point, bits) * pi_interval(bits)
        except ZeroDivisionError:
            val = None
        if val is not None and val.width <= target:
            return val
        bits *= 2
        if bits > 1 << 22:  # pragma: no cover - hard safety stop
            raise RuntimeError("enclosure did not reach the requested width")
