"""Command line entry point and the verification suites it drives.

Every suite is a pure function of a :class:`CampaignConfig` and returns a
:class:`Report`; the CLI only parses arguments, prints and sets the exit code
(0 all checks passed, 1 some check failed, 2 invalid input).
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import asdict, dataclass
from typing import Callable, Sequence

from .checks import Report
from .chernsimons import verify_ch_invariance, verify_transgression, w_form, w_form_via_v
from .convolution import ConvAlgebra, DGLieAlgebra, check_ev, verify_conv_axioms
from .curved import CurvedDGAlgebra, check_curved_axioms
from .exactlin import Element
from .models import (InstanceError, abelian_lie, build_grassmann_model, conjugation_mc_matrix,
                     gl_element, gl_lie, instance_digest, model_mc_element, non_mc_element, parse_instance,
                     random_instance, random_spec)
from .ncpoly import vtable_json, vtable_text
from .semireg import (SplitError, compare_morphisms, mc_pushforward, oracle_morphism,
                      sigma_taylor, verify_linf)

__all__ = ["CampaignConfig", "SUITES", "run_suite", "random_element", "random_phi",
           "campaign_lie", "ev_lie", "main"]


@dataclass
class CampaignConfig:
    """Parameters shared by all suites.

    Without ``instance`` trial t runs on ``random_instance(seed + t, m, n, dims)``;
    with it every trial uses the file.  ``samples`` random elements are drawn
    per trial from an rng seeded by (seed, t).
    """

    seed: int = 0
    trials: int = 1
    samples: int = 5
    k: int = 1
    weight_bound: int | None = None
    m: int = 2
    n: int = 0
    dims: tuple = (1, 1)
    h_mode: str = "zero"
    base: str = "none"
    instance: str | None = None
    phi_seed: int | None = None

    def digest(self) -> str:
        if self.instance is not None:
            return parse_instance(self.instance, validate=False).digest()
        return instance_digest({k: v for k, v in asdict(self).items() if k != "instance"})


def _rng(cfg: CampaignConfig, t: int) -> random.Random:
    return random.Random(f"{cfg.seed}:{t}")


def _instances(cfg: CampaignConfig):
    if cfg.instance is not None:
        inst = parse_instance(cfg.instance)
        for t in range(cfg.trials):
            yield t, inst
    else:
        for t in range(cfg.trials):
            yield t, random_instance(cfg.seed + t, cfg.m, cfg.n, cfg.dims, h_mode=cfg.h_mode,
                                     base=cfg.base)


def random_element(A: CurvedDGAlgebra, degree: int, rng: random.Random, bound: int = 2) -> Element:
    """Random integer combination of the basis vectors of the given degree."""
    idx = [i for i, d in enumerate(A.space.degrees) if d == degree]
    return Element(A.space, {i: rng.randint(-bound, bound) for i in idx})


def random_phi(sp, seed: int, bound: int = 1) -> list:
    """Random degree 0 linear map B -> I, as the images of the B basis."""
    rng = random.Random(seed)
    I = sp.I.basis
    out = []
    for d in sp.lie.space.degrees:
        v = sp.algebra.zero()
        for b in I:
            if b.degree() == d:
                v = v + b * rng.randint(-bound, bound)
        out.append(v)
    return out


def campaign_lie(seed: int) -> DGLieAlgebra:
    """Small DG-Lie sources: gl(1|1) with a random differential, or a random abelian one."""
    rng = random.Random(seed)
    if seed % 2 == 0:
        a = rng.choice([1, 2, -1, -2])
        return gl_lie([0, 1], [[0, 0], [a, 0]])
    # abelian on degrees (0, 1, 1, 2) with dbar^2 = 0 by construction
    c1, c2 = rng.randint(-2, 2), rng.randint(-2, 2)
    return abelian_lie([0, 1, 1, 2], {(0, 1): c1, (0, 2): c2, (1, 3): c2, (2, 3): -c1})


def ev_lie(seed: int):
    """gl(W) for W in degrees (0, 1, 2) and dbar = [a E10, -]: has non-MC degree 1 elements."""
    a = random.Random(seed).choice([1, 2, -1, -2])
    delta = [[0, 0, 0], [a, 0, 0], [0, 0, 0]]
    return gl_lie([0, 1, 2], delta), delta


# ---------------------------------------------------------------------------
# suites


def suite_axioms(cfg: CampaignConfig) -> Report:
    rep = Report("verify axioms")
    for t, inst in _instances(cfg):
        pre = f"trial{t}."
        rep.extend(check_curved_axioms(inst.algebra), pre)
        rep.extend(inst.pair.check(), pre + "pair.")
        if inst.trace is not None:
            rep.extend(inst.trace.check(), pre + "trace.")
        if inst.B is not None:
            sp = inst.split()
            rep.extend(sp.report, pre + "split.")
            rep.extend(sp.lie.check(), pre + "lie.")
    return rep


def suite_transgression(cfg: CampaignConfig) -> Report:
    """Transgression identity and W(x) = V^k(R, dx + x^2, x^2) x for k = 1..K."""
    rep = Report("verify transgression")
    for t, inst in _instances(cfg):
        A = inst.algebra
        rng = _rng(cfg, t)
        for s in range(cfg.samples):
            x = random_element(A, 1, rng)
            for k in range(1, cfg.k + 1):
                rep.extend(verify_transgression(A, x, k), f"trial{t}.x{s}.")
                ok = w_form(A, x, k) == w_form_via_v(A, x, k)
                rep.add(f"trial{t}.x{s}.w_equals_v_k{k}", ok)
    return rep


def suite_ch_invariance(cfg: CampaignConfig) -> Report:
    rep = Report("verify ch-invariance")
    for t, inst in _instances(cfg):
        A = inst.algebra
        rng = _rng(cfg, t)
        for s in range(cfg.samples):
            x = random_element(A, 1, rng)
            for k in range(1, cfg.k + 1):
                rep.extend(verify_ch_invariance(A, x, k), f"trial{t}.x{s}.")
    return rep


def suite_convolution(cfg: CampaignConfig, lie_hook: Callable | None = None) -> Report:
    """Star-derivation axioms of delta, and the behaviour of ev_x for MC and non-MC x.

    Generated trials pair ``campaign_lie(seed + t)`` with the model algebra for
    the axioms, and ``ev_lie(seed + t)`` for ev_x.  With an instance file the
    split Lie algebra B of the instance serves both purposes.  ``lie_hook``
    replaces the L used for the axioms (mutation tests).
    """
    rep = Report("verify convolution")
    W = cfg.weight_bound or 4
    for t, inst in _instances(cfg):
        pre = f"trial{t}."
        A = inst.algebra
        if cfg.instance is not None:
            sp = inst.split()
            L = Lev = sp.lie
            x_mc = sp.P(model_mc_element(inst, cfg.seed + t)) if inst.spec else Element(L.space)
        else:
            L = campaign_lie(cfg.seed + t)
            Lev, delta = ev_lie(cfg.seed + t)
            x_mc = gl_element(Lev, conjugation_mc_matrix(delta, [0, 1, 2], cfg.seed + t))
        if lie_hook is not None:
            L = lie_hook(L)
        rep.extend(L.check(), pre + "lie.")
        rep.extend(verify_conv_axioms(L, A, W), pre)
        C = ConvAlgebra(Lev, A, min(W, 3))
        rep.add(pre + "mc_witness_is_mc", Lev.is_mc(x_mc), None if Lev.is_mc(x_mc) else
                {"x": repr(x_mc)})
        rep.extend(check_ev(C, x_mc), pre + "ev_mc.")
        y = non_mc_element(Lev, cfg.seed + t)
        rep.add(pre + "non_mc_witness_found", y is not None)
        if y is not None:
            ev_rep = check_ev(C, y)
            mult, comm = ev_rep.checks
            rep.add(pre + "ev_non_mc.ev_multiplicative", mult.ok, mult.witness)
            rep.add(pre + "ev_non_mc.breaks_commutation", not comm.ok,
                    comm.witness if not comm.ok else {"x": repr(y)})
    return rep


def suite_linf(cfg: CampaignConfig) -> Report:
    rep = Report("verify linf")
    W = cfg.weight_bound or 2 * cfg.k + 2
    for t, inst in _instances(cfg):
        sp = inst.split()
        m = sigma_taylor(sp, cfg.k, max_weight=W)
        rep.extend(verify_linf(m, W), f"trial{t}.k{cfg.k}.")
    return rep


def suite_route_agreement(cfg: CampaignConfig) -> Report:
    rep = Report("verify route-agreement")
    W = cfg.weight_bound or 2 * cfg.k + 2
    for t, inst in _instances(cfg):
        pre = f"trial{t}.k{cfg.k}."
        sp = inst.split()
        split = sigma_taylor(sp, cfg.k)
        section0 = sigma_taylor(sp, cfg.k, route="section")
        w = compare_morphisms(split, section0)
        rep.add(pre + "split_equals_section0", w is None, w)
        phi_seed = cfg.seed + t if cfg.phi_seed is None else cfg.phi_seed
        phi = random_phi(sp, phi_seed)
        rep.add(pre + "phi_nonzero", any(phi), None if any(phi) else {"phi_seed": phi_seed})
        sec = sigma_taylor(sp, cfg.k, route="section", phi=phi, max_weight=W)
        rep.extend(verify_linf(sec, W), pre + "section_phi.")
        w = compare_morphisms(split, sec, max_weight=1)
        rep.add(pre + "same_linear_part", w is None, w)
    return rep


def suite_oracle_agreement(cfg: CampaignConfig, mutate: dict | None = None) -> Report:
    rep = Report("verify oracle-agreement")
    if not 0 <= cfg.k <= 3:
        raise ValueError("the explicit tables cover k <= 3")
    for t, inst in _instances(cfg):
        sp = inst.split()
        w = compare_morphisms(sigma_taylor(sp, cfg.k), oracle_morphism(sp, cfg.k, mutate))
        rep.add(f"trial{t}.k{cfg.k}.split_equals_tables", w is None, w)
    return rep


def suite_mc(cfg: CampaignConfig) -> Report:
    """MC pushforward: the three expressions agree and give a cocycle for x in MC(B)."""
    rep = Report("verify mc")
    for t, inst in _instances(cfg):
        pre = f"trial{t}.k{cfg.k}."
        sp = inst.split()
        if inst.spec is None:
            x = Element(sp.lie.space)
        else:
            x = sp.P(model_mc_element(inst, cfg.seed + t))
        rep.add(pre + "witness_is_mc", sp.lie.is_mc(x), None if sp.lie.is_mc(x) else
                {"x": repr(x)})
        res = mc_pushforward(sp, cfg.k, x)
        for key in ("taylor_eq_ev", "ev_eq_direct", "is_cocycle"):
            rep.add(pre + key, res[key], None if res[key] else
                    {"taylor": repr(res["taylor"]), "ev": repr(res["ev"]),
                     "direct": repr(res["direct"])})
        # for arbitrary degree 1 x the Taylor sum and ev_x W(s) still agree
        y = non_mc_element(sp.lie, cfg.seed + t)
        if y is not None:
            res = mc_pushforward(sp, cfg.k, y)
            rep.add(pre + "non_mc.taylor_eq_ev", res["taylor_eq_ev"], None if res["taylor_eq_ev"]
                    else {"taylor": repr(res["taylor"]), "ev": repr(res["ev"])})
    return rep


SUITES: dict[str, Callable[[CampaignConfig], Report]] = {
    "axioms": suite_axioms,
    "transgression": suite_transgression,
    "ch-invariance": suite_ch_invariance,
    "convolution": suite_convolution,
    "linf": suite_linf,
    "route-agreement": suite_route_agreement,
    "oracle-agreement": suite_oracle_agreement,
    "mc": suite_mc,
}


def run_suite(name: str, cfg: CampaignConfig) -> Report:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    rep = SUITES[name](cfg)
    rep.instance_digest = cfg.digest()
    return rep


# ---------------------------------------------------------------------------
# command line


def _dims(text: str) -> tuple:
    try:
        dims = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad dims {text!r}") from exc
    if not dims or any(d < 0 for d in dims):
        raise argparse.ArgumentTypeError(f"bad dims {text!r}")
    return dims


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--instance", help="instance JSON file (model or generic form)")

    gen = argparse.ArgumentParser(add_help=False)
    gen.add_argument("--m", type=int, default=2, help="number of theta generators")
    gen.add_argument("--n", type=int, default=0, help="number of eta generators")
    gen.add_argument("--dims", type=_dims, default=(1, 1),
                     help="dimensions of V per degree, e.g. 1,1")
    gen.add_argument("--h-mode", choices=("zero", "commutant"), default="zero")
    gen.add_argument("--base", choices=("none", "heisenberg"), default="none",
                     help="differential on the theta generators (heisenberg needs m >= 3)")

    p = argparse.ArgumentParser(prog="curvedpairs", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("vtable", parents=[common], help="print V^k_i for i = 0..2k")
    s.add_argument("--k", type=int, required=True)

    s = sub.add_parser("generate", parents=[common, gen], help="write a random model instance")
    s.add_argument("--coeff-bound", type=int, default=2)
    s.add_argument("--out", help="output file (default stdout)")

    s = sub.add_parser("verify", parents=[common, gen], help="run a verification suite")
    s.add_argument("suite", choices=sorted(SUITES))
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--samples", type=int, default=5, help="random elements per trial")
    s.add_argument("--weight-bound", type=int)
    s.add_argument("--phi-seed", type=int)

    s = sub.add_parser("sigma", parents=[common, gen], help="Taylor coefficients of sigma^k")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--route", choices=("split", "section"), default="split")
    s.add_argument("--phi-seed", type=int)
    s.add_argument("--weight-bound", type=int)

    s = sub.add_parser("report", parents=[common, gen], help="run every suite on one instance")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--samples", type=int, default=2)
    return p


def _config(args) -> CampaignConfig:
    return CampaignConfig(seed=args.seed, trials=getattr(args, "trials", 1),
                          samples=getattr(args, "samples", 5), k=getattr(args, "k", 1),
                          weight_bound=getattr(args, "weight_bound", None), m=args.m, n=args.n,
                          dims=args.dims, h_mode=args.h_mode, base=args.base,
                          instance=args.instance,
                          phi_seed=getattr(args, "phi_seed", None))


def _print_report(rep: Report, as_json: bool, out) -> None:
    if as_json:
        print(json.dumps(rep.to_json(), indent=1), file=out)
        return
    for c in rep.checks:
        line = f"{'PASS' if c.ok else 'FAIL'} {c.name}"
        if not c.ok and c.witness is not None:
            line += " " + json.dumps(c.witness)
        print(line, file=out)
    cnt = rep.counts
    print(f"{rep.command}: {cnt['pass']}/{cnt['total']} passed", file=out)


def _cmd_vtable(args, out) -> int:
    if args.k < 0:
        raise ValueError("k must be >= 0")
    if args.json:
        print(json.dumps({"k": args.k, "rows": vtable_json(args.k)}), file=out)
    else:
        out.write(vtable_text(args.k))
    return 0


def _cmd_generate(args, out) -> int:
    spec = random_spec(args.seed, args.m, args.n, args.dims, args.coeff_bound, args.h_mode,
                       args.base)
    build_grassmann_model(spec)  # validates and enforces the size cap
    text = json.dumps(spec.to_json(), indent=1) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def _cmd_verify(args, out) -> int:
    rep = run_suite(args.suite, _config(args))
    rep.command = "verify " + args.suite
    _print_report(rep, args.json, out)
    return 0 if rep.ok else 1


def _cmd_sigma(args, out) -> int:
    cfg = _config(args)
    inst = parse_instance(cfg.instance) if cfg.instance else random_instance(
        cfg.seed, cfg.m, cfg.n, cfg.dims, h_mode=cfg.h_mode, base=cfg.base)
    sp = inst.split()
    phi = random_phi(sp, args.phi_seed) if args.phi_seed is not None else None
    if phi is not None and args.route != "section":
        raise ValueError("--phi-seed needs --route section")
    W = args.weight_bound or 2 * args.k + 2
    m = sigma_taylor(sp, args.k, route=args.route, phi=phi, max_weight=W)
    rep = verify_linf(m, W)
    rep.command = "sigma"
    rep.instance_digest = inst.digest()
    if args.json:
        print(json.dumps({"sigma": m.to_json(), "report": rep.to_json()}, indent=1), file=out)
    else:
        labels = sp.lie.space.labels
        for t in sorted(m.coeffs.values, key=lambda t: (len(t), t)):
            print(f"sigma^{args.k}_{len(t)}({', '.join(labels[x] for x in t)}) = "
                  f"{m.coeffs.values[t]!r}", file=out)
        _print_report(rep, False, out)
    return 0 if rep.ok else 1


def _cmd_report(args, out) -> int:
    cfg = _config(args)
    rep = Report("report", cfg.digest())
    for name in SUITES:
        if name == "oracle-agreement" and cfg.k > 3:
            continue
        rep.extend(run_suite(name, cfg), name + ".")
    _print_report(rep, args.json, out)
    return 0 if rep.ok else 1


COMMANDS = {"vtable": _cmd_vtable, "generate": _cmd_generate, "verify": _cmd_verify,
            "sigma": _cmd_sigma, "report": _cmd_report}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    start = time.perf_counter()
    try:
        code = COMMANDS[args.command](args, out)
    except (InstanceError, SplitError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    print(f"wall-clock {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
