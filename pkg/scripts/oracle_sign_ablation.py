"""How much of the explicit sigma tables is actually tested by a given instance shape.

Drops the degree dependent position signs from the tables, then counts on how
many instances the split route still agrees.  Shapes whose degrees are too
sparse cannot see the position signs at all; the acceptance campaign uses the
shapes that can.

    python3 scripts/oracle_sign_ablation.py [--trials 5]
"""

import argparse
import copy

from curvedpairs import semireg
from curvedpairs.models import random_instance
from curvedpairs.semireg import compare_morphisms, oracle_morphism, sigma_taylor

SHAPES = [dict(m=2, dims=(1, 1)), dict(m=2, n=1, dims=(1, 1), h_mode="commutant"),
          dict(m=3, dims=(1, 1, 1)), dict(m=2, dims=(2, 1))]


def agreement(shape, k, trials):
    hits = 0
    for seed in range(trials):
        sp = random_instance(seed, **shape).split()
        hits += compare_morphisms(sigma_taylor(sp, k), oracle_morphism(sp, k)) is None
    return hits


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--kmax", type=int, default=3)
    args = ap.parse_args()
    full = copy.deepcopy(semireg.ORACLE_TABLES)
    stripped = {k: {i: [(c, f, (), 0) for c, f, _, _ in terms] for i, terms in tab.items()}
                for k, tab in full.items()}
    print(f"{'shape':56} {'k':>2} {'tables':>8} {'no position signs':>18}")
    for shape in SHAPES:
        for k in range(2, args.kmax + 1):
            semireg.ORACLE_TABLES.clear()
            semireg.ORACLE_TABLES.update(full)
            a = agreement(shape, k, args.trials)
            semireg.ORACLE_TABLES.clear()
            semireg.ORACLE_TABLES.update(stripped)
            b = agreement(shape, k, args.trials)
            print(f"{str(shape):56} {k:>2} {a:>4}/{args.trials:<3} {b:>10}/{args.trials}",
                  flush=True)
    semireg.ORACLE_TABLES.clear()
    semireg.ORACLE_TABLES.update(full)


if __name__ == "__main__":
    main()
