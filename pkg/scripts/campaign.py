"""Run every verification suite at acceptance scale and tabulate counts and timings.

    python3 scripts/campaign.py [--json out.json] [--quick]
"""

import argparse
import json
import time

from curvedpairs.cli import CampaignConfig, run_suite

PLAN = [
    ("transgression", dict(trials=25, k=4, m=2, n=1, h_mode="commutant")),
    ("transgression", dict(seed=100, trials=25, k=4, m=3, base="heisenberg")),
    ("ch-invariance", dict(trials=25, k=4, m=2, n=1, h_mode="commutant")),
    ("ch-invariance", dict(seed=100, trials=25, k=4, m=3, base="heisenberg")),
    ("convolution", dict(trials=20, m=1, weight_bound=4)),
    *[("linf", dict(trials=20, k=k, m=3, dims=(1, 1, 1))) for k in (0, 1, 2)],
    *[("oracle-agreement", dict(trials=10, k=k, m=3, dims=(1, 1, 1))) for k in (0, 1, 2, 3)],
    *[("route-agreement", dict(trials=10, k=k, m=2, n=1, h_mode="commutant")) for k in (1, 2, 3)],
    *[("mc", dict(trials=20, k=k, m=2, n=1, h_mode="commutant")) for k in (1, 2, 3)],
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", help="write the rows here")
    ap.add_argument("--quick", action="store_true", help="two trials per row")
    args = ap.parse_args()
    rows = []
    print(f"{'suite':18} {'params':52} {'pass':>6} {'total':>6} {'time':>7}")
    for name, params in PLAN:
        if args.quick:
            params = {**params, "trials": 2}
        t0 = time.perf_counter()
        rep = run_suite(name, CampaignConfig(**params))
        dt = time.perf_counter() - t0
        c = rep.counts
        shown = ",".join(f"{k}={v}" for k, v in params.items())
        print(f"{name:18} {shown:52} {c['pass']:>6} {c['total']:>6} {dt:>6.1f}s", flush=True)
        rows.append({"suite": name, "params": params, **c, "seconds": round(dt, 2),
                     "first_failure": None if rep.ok else rep.first_failure().name})
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(rows, fh, indent=1, default=list)
    return 0 if all(r["fail"] == 0 for r in rows) else 1


if __name__ == "__main__":
    raise SystemExit(main())
