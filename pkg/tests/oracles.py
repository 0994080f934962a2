"""Test-side oracles, independent of the certified machinery they check."""

import math

from melcert.polynomials import squarefree_decomposition


def grid_scan_count(p, lo, hi, steps):
    """Distinct-root oracle on (lo, hi]: exact signs on a uniform grid.

    Counts grid points that are exact roots plus sign changes between
    consecutive nonzero signs.  Valid whenever adjacent roots of each
    squarefree factor are separated by more than one grid step; the
    multiplicity analysis runs the scan per Yun factor so even-order
    roots are seen too.
    """
    total = 0
    for factor, _mult in squarefree_decomposition(p):
        den = math.lcm(*(c.denominator for c in factor.coeffs))
        ic = [int(c * den) for c in factor.coeffs]
        deg = len(ic) - 1

        def sign_at(q):
            acc, pw = 0, 1
            for k, c in enumerate(ic):
                if c:
                    acc += c * pw * q.denominator ** (deg - k)
                pw *= q.numerator
            return (acc > 0) - (acc < 0)

        prev = sign_at(lo)
        count = 0
        if prev == 0:
            prev = None  # root at lo is excluded by the half-open convention
        for k in range(1, steps + 1):
            q = lo + (hi - lo) * k / steps
            s = sign_at(q)
            if s == 0:
                count += 1
                prev = None
            else:
                if prev is not None and s != prev:
                    count += 1
                prev = s
        total += count
    return total
