"""Fraction of random draws where d(ch^1_k(x)) is nonzero in A/[A,A].

For inner models d(A) lies in [A,A], so the ch-invariance identity reads 0 = 0;
a Chevalley-Eilenberg differential on the thetas makes it a real test.

    python3 scripts/ch_nonvacuity.py [--trials 20] [--samples 5]
"""

import argparse
import random

from curvedpairs.chernsimons import cs_character, verify_ch_invariance
from curvedpairs.cli import random_element
from curvedpairs.models import random_instance


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--samples", type=int, default=5)
    ap.add_argument("--kmax", type=int, default=3)
    args = ap.parse_args()
    for label, shape in (("inner, m=3", dict(m=3)),
                         ("inner + eta, m=2 n=1", dict(m=2, n=1, h_mode="commutant")),
                         ("heisenberg base, m=3", dict(m=3, base="heisenberg"))):
        nonzero = total = ok = 0
        for seed in range(args.trials):
            A = random_instance(seed, **shape).algebra
            rng = random.Random(seed)
            for _ in range(args.samples):
                x = random_element(A, 1, rng)
                for k in range(1, args.kmax + 1):
                    total += 1
                    nonzero += bool(A.tr(A.d(cs_character(A, x, k))))
                    ok += verify_ch_invariance(A, x, k).ok
        print(f"{label:24} identity holds {ok}/{total}, d ch nonzero {nonzero}/{total}")


if __name__ == "__main__":
    main()
