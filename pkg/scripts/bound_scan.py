#!/usr/bin/env python3
"""Random-sample survey of certified zero counts against the cycle bounds.

Draws seeded random families and coefficient grids for a few perturbation
degrees, runs the exact pipeline on each, and tabulates the worst certified
count next to the bound.  A quick desk-scale version of the acceptance
sweep; tune SAMPLES/configs freely.

Usage: python scripts/bound_scan.py [samples] [seed]
"""

import sys
import time
from fractions import Fraction

from melcert.melnikov import SystemFamily, assemble
from melcert.sampling import draw_alpha, draw_coeffs, draw_family, rng_for
from melcert.zeros import count_zeros, theorem_bound

TWO_RADICAL = [(2, 1, 1), (3, 1, 1), (2, 1, 2), (4, 2, 1)]
CONFLUENT = [(2, 1, 1), (3, 2, 1), (4, 1, 1)]


def survey(samples: int, seed: int):
    print(f"{'config':<22}{'bound':>6}{'max count_hi':>14}{'undecided':>11}{'secs':>8}")
    for tag, configs, confluent in (
        ("two-radical", TWO_RADICAL, False),
        ("confluent", CONFLUENT, True),
    ):
        for n, m1, m2 in configs:
            t0 = time.time()
            worst = undecided = 0
            bound = None
            for idx in range(samples):
                rng = rng_for(seed, idx)
                if confluent:
                    alpha = draw_alpha(rng)
                    fam = SystemFamily(alpha, alpha, m1, m2)
                else:
                    fam = draw_family(rng, m1, m2)
                nf = assemble(fam, draw_coeffs(rng, n, box=Fraction(1)))
                bound = theorem_bound(fam, n)
                if nf.is_zero:
                    continue
                report = count_zeros(nf, n=n)
                worst = max(worst, report.count_hi)
                undecided += 0 if report.decided else 1
                if bound is not None and report.count_hi > bound:
                    print(f"BOUND VIOLATION at sample {idx}: {fam}")
                    return 1
            label = f"{tag} n={n} m=({m1},{m2})"
            print(
                f"{label:<22}{bound:>6}{worst:>14}{undecided:>11}"
                f"{time.time() - t0:>8.1f}"
            )
    return 0


if __name__ == "__main__":
    samples = int(sys.argv[1]) if len(sys.argv) > 1 else 50
    seed = int(sys.argv[2]) if len(sys.argv) > 2 else 2024
    sys.exit(survey(samples, seed))
