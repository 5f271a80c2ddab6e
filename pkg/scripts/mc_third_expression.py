"""The three MC pushforward expressions on MC and non-MC elements.

For non-MC x the Taylor sum still equals tr(ev_x W(s)), while tr(W(s(x)))
differs by -1/2 tr(F x) at k = 1, F = dbar x + x^2.  Three eta generators are
needed for the supertrace to see the degree 3 difference.

    python3 scripts/mc_third_expression.py [--trials 6]
"""

import argparse
from fractions import Fraction

from curvedpairs.models import model_mc_element, non_mc_element, random_instance
from curvedpairs.semireg import mc_pushforward


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=6)
    args = ap.parse_args()
    print(f"{'seed':>4} {'x':7} {'taylor=ev':>9} {'ev=direct':>9} {'gap=-tr(Fx)/2':>14}")
    for seed in range(args.trials):
        inst = random_instance(seed, m=1, n=3, dims=(1, 1), h_mode="commutant")
        sp = inst.split()
        A, ker = sp.algebra, sp.pair.target_kernel(1)
        for kind, x in (("mc", sp.P(model_mc_element(inst, seed))),
                        ("non-mc", non_mc_element(sp.lie, seed))):
            if x is None:
                continue
            r = mc_pushforward(sp, 1, x)
            F = sp.embed(sp.lie.mc_defect(x))
            gap = ker.reduce(A.mul(F, sp.embed(x))) * Fraction(-1, 2)
            print(f"{seed:>4} {kind:7} {str(r['taylor_eq_ev']):>9} {str(r['ev_eq_direct']):>9} "
                  f"{str(r['ev'] - r['direct'] == gap):>14}")


if __name__ == "__main__":
    main()
