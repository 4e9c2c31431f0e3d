"""Command-line front end: compute, verify, inspect, oracle and bench."""

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass

from .arith import is_prime
from .bivariate import BivariatePoly, canonical_invariant, file_name
from .modpoly import (PhiStore, compute_detailed, inspect_volcano, random_isogenous_pair,
                      volcano_dot, weber_j, weber_root_pairs)


def default_cache():
    return os.environ.get("MODULARPOLY_CACHE",
                          os.path.join(os.path.expanduser("~"), ".cache", "modularpoly"))


@dataclass
class RunConfig:
    command: str
    l: int = None
    invariant: str = "j"
    modulus: int = None
    out: str = None
    cache: str = None
    seed: int = 0
    threads: int = 1
    selector: str = "heuristic"

    def validate(self):
        if self.l is not None:
            if self.l < 3 or not is_prime(self.l):
                raise ValueError("--l must be an odd prime")
            if self.invariant == "gamma2" and self.l == 3:
                raise ValueError("gamma2 needs l coprime to 3")
            if self.invariant == "weber_f" and self.l == 3:
                raise ValueError("weber-f needs l coprime to 6")
        if self.modulus is not None and self.modulus < 2:
            raise ValueError("--mod must be at least 2")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("--seed must be an unsigned 64-bit integer")
        if self.threads < 1:
            raise ValueError("--threads must be positive")
        return self


def _config(args):
    return RunConfig(
        command=args.command,
        l=getattr(args, "l", None),
        invariant=canonical_invariant(getattr(args, "inv", "j")),
        modulus=getattr(args, "mod", None),
        out=getattr(args, "out", None),
        cache=args.cache,
        seed=args.seed,
        threads=args.threads,
        selector=args.selector,
    ).validate()


def _say(msg):
    print(msg, file=sys.stderr)


def cmd_compute(cfg):
    t0 = time.time()
    store = PhiStore(cfg.cache)
    r = compute_detailed(cfg.l, cfg.invariant, cfg.modulus, seed=cfg.seed,
                         selector=cfg.selector, threads=cfg.threads, store=store,
                         cache_dir=cfg.cache)
    out = cfg.out or f"phi_{file_name(cfg.invariant)}_{cfg.l}.txt"
    r.poly.save(out)
    o = r.order
    print(f"l={cfg.l} inv={file_name(cfg.invariant)} D={o.D} h(O)={o.h_O} h(R)={o.h_R} "
          f"primes={len(r.primes)} discarded={len(r.discarded)} "
          f"bound_bits={r.bound_bits:.2f} max_bits={r.poly.max_bits()} "
          f"time={time.time() - t0:.2f}s out={out}")
    return 0


def _kronecker_ok(P):
    l, m = P.l, P.modulus
    if m and m % l:
        return None
    want = {(l + 1, 0): 1, (l, l): -1, (1, 1): -1}
    keys = set(P.coeffs) | set(want)
    return all((P[k] - want.get(k, 0)) % l == 0 for k in keys)


def _vanishing_ok(P, store, rng, count=20):
    """Phi(x, y) = 0 for random l-isogenous pairs, in the invariant's own coordinates."""
    l, inv = P.l, P.invariant
    if P.modulus:
        return None
    if inv == "weber_f":
        return _weber_ok(P, store, rng, count)
    from .ffpoly import cube_root
    done = 0
    while done < count:
        p, j1, j2 = random_isogenous_pair(l, rng)
        if inv == "gamma2":
            if p % 3 != 2:
                continue
            j1, j2 = cube_root(j1, p), cube_root(j2, p)
        if P.evaluate(j1, j2, p) != 0:
            return False
        done += 1
    return True


def _weber_ok(P, store, rng, count):
    phi = store.get("j", P.l)
    for p, x, y in weber_root_pairs(P, rng, count):
        if phi.evaluate(weber_j(x, p), weber_j(y, p), p) != 0:
            return False
    return True


def verify_poly(P, store=None, seed=0, count=20):
    """Named checks with True (pass), False (fail) or None (not applicable)."""
    store = store or PhiStore(None)
    bad = P.check_structure()
    rng = random.Random(seed)
    report = {
        "symmetry": True,  # terms are stored with a >= b, the reader implies the mirror
        "monic": "monic" not in bad,
        "degree": "degree" not in bad and P.degree == P.l + 1,
        "sparsity": "sparsity" not in bad,
        "kronecker": _kronecker_ok(P) if P.invariant == "j" else None,
    }
    try:
        report["isogeny_vanishing"] = _vanishing_ok(P, store, rng, count)
    except (ValueError, ArithmeticError, ZeroDivisionError):
        report["isogeny_vanishing"] = False
    return report


def cmd_verify(cfg, path):
    try:
        P = BivariatePoly.load(path)
    except (OSError, ValueError, KeyError) as exc:
        _say(f"error: cannot read {path}: {exc}")
        return 2
    rep = verify_poly(P, PhiStore(cfg.cache), cfg.seed)
    for k, v in rep.items():
        print(f"{k}: {'skip' if v is None else ('pass' if v else 'FAIL')}")
    return 0 if all(v is not False for v in rep.values()) else 1


def cmd_inspect(cfg, p, D, fmt):
    info = inspect_volcano(cfg.l, p, D, seed=cfg.seed, store=PhiStore(cfg.cache))
    if fmt == "dot":
        text = volcano_dot(info)
    else:
        info["counts"] = {
            "surface": len(info["surface"]),
            "surface_cycle_lengths": [len(c) for c in info["surface_cycles"]],
            "floor": sum(len(g) for g in info["floor_groups"]),
            "sibling_group_sizes": sorted({len(g) for g in info["floor_groups"]}),
        }
        text = json.dumps(info, indent=1) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_oracle(cfg):
    from .oracle import eval_interp_phi, phi_qexp
    P = phi_qexp(cfg.l) if cfg.invariant == "j" else eval_interp_phi(cfg.invariant, cfg.l)
    out = cfg.out or f"oracle_{file_name(cfg.invariant)}_{cfg.l}.txt"
    P.save(out)
    print(f"l={cfg.l} inv={file_name(cfg.invariant)} terms={len(P.coeffs)} "
          f"max_bits={P.max_bits()} out={out}")
    return 0


def cmd_bench(cfg, ls):
    store = PhiStore(cfg.cache)
    for l in ls:
        t0 = time.time()
        r = compute_detailed(l, cfg.invariant, cfg.modulus, seed=cfg.seed,
                             selector=cfg.selector, threads=cfg.threads, store=store,
                             cache_dir=cfg.cache)
        dt = time.time() - t0
        print(f"l={l} D={r.order.D} h(O)={r.order.h_O} primes={len(r.primes)} "
              f"max_bits={r.poly.max_bits()} time={dt:.2f}s per_prime={dt / len(r.primes):.4f}s")
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cache", default=default_cache(), help="cache directory")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--selector", choices=("heuristic", "randomized"), default="heuristic")
    common.add_argument("--inv", choices=("j", "gamma2", "weber-f"), default="j")
    common.add_argument("--out", help="output path")

    ap = argparse.ArgumentParser(prog="modularpoly", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("compute", parents=[common], help="compute Phi_l^g over Z or mod m")
    c.add_argument("--l", type=int, required=True)
    c.add_argument("--mod", type=lambda s: int(s, 0), help="reduce modulo m (explicit CRT)")
    v = sub.add_parser("verify", parents=[common], help="check a polynomial file")
    v.add_argument("file")
    i = sub.add_parser("inspect", parents=[common], help="dump the volcano structure for (l, p, D)")
    i.add_argument("--l", type=int, required=True)
    i.add_argument("--p", type=int, required=True)
    i.add_argument("--D", type=int, required=True)
    i.add_argument("--format", choices=("json", "dot"), default="json")
    o = sub.add_parser("oracle", parents=[common], help="small-l polynomial from the oracles")
    o.add_argument("--l", type=int, required=True)
    b = sub.add_parser("bench", parents=[common], help="time compute over several l")
    b.add_argument("--l", type=int, nargs="+", required=True)
    b.add_argument("--mod", type=lambda s: int(s, 0))
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "bench":
            ls = args.l
            args.l = None
            cfg = _config(args)
            return cmd_bench(cfg, ls)
        cfg = _config(args)
        if args.command == "compute":
            return cmd_compute(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.file)
        if args.command == "inspect":
            return cmd_inspect(cfg, args.p, args.D, args.format)
        if args.command == "oracle":
            return cmd_oracle(cfg)
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        _say(f"error: {exc}")
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
