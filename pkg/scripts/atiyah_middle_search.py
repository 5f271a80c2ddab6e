"""Search for middle weights where the sigma^k_i formula depends on R beyond its Atiyah class.

Perturbs R by a random r of theta-degree >= 2 and re-evaluates the split
formula.  Weights i <= 2 and i >= 2k never change; hits in between are
reported, not asserted.

    python3 scripts/atiyah_middle_search.py [--trials 20] [--kmax 3]
"""

import argparse
import random

from curvedpairs.cli import random_element
from curvedpairs.exactlin import Element
from curvedpairs.models import random_instance
from curvedpairs.semireg import atiyah_dependence


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--kmax", type=int, default=3)
    ap.add_argument("--m", type=int, default=3)
    args = ap.parse_args()
    changed: dict = {}
    edge_violations = 0
    for seed in range(args.trials):
        inst = random_instance(seed, m=args.m, dims=(1, 1))
        sp = inst.split()
        r = random_element(sp.algebra, 2, random.Random(seed))
        r = Element(r.space, {i: c for i, c in r.c.items() if inst._theta_deg[i] >= 2})
        for k in range(1, args.kmax + 1):
            for i, same in atiyah_dependence(sp, k, r).items():
                if not same:
                    changed[(k, i)] = changed.get((k, i), 0) + 1
                    edge_violations += i <= 2 or i >= 2 * k
    for k in range(1, args.kmax + 1):
        row = " ".join(f"i={i}:{changed.get((k, i), 0)}" for i in range(1, 2 * k + 2))
        print(f"k={k}  changed/trials  {row}")
    print(f"edge weights changed: {edge_violations}")
    return 1 if edge_violations else 0


if __name__ == "__main__":
    raise SystemExit(main())
