"""Command line front end: ``python -m swanlab <command> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import conductor as cd
from .datum_rules import (BreakSeqCharP, check_hyodo, enumerate_valid_data,
                          validate_charp_breaks, validate_thm1)
from .errors import InvalidInput, RequiresConstantExtension, SwanlabError
from .local_field import CaseA, LocalField, kummer_reduce
from .residue_field import ratfun_str
from .serialize import datum_from_json, datum_to_json, format_elem, parse_elem


@dataclass
class Config:
    p: int = 3
    f: int = 1
    m: int = 0
    prec: int = 6
    degree_bound: int = 4
    iters: int = 30
    seed: int = 0
    auto_extend: bool = False
    json: bool = False

    def __post_init__(self):
        if self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p ** 0.5) + 1)):
            raise InvalidInput(f"p = {self.p} is not prime")
        if self.prec < 4:
            raise InvalidInput("prec must be at least 4")

    def field(self, m: Optional[int] = None) -> LocalField:
        return LocalField.build(self.p, self.m if m is None else m, self.f, self.prec)


def _emit(cfg: Config, obj: dict, text: str):
    print(json.dumps(obj, sort_keys=True) if cfg.json else text)


def _retry(cfg: Config, fn):
    """Call fn(K); on RequiresConstantExtension retry with larger m if allowed."""
    m = cfg.m
    while True:
        try:
            return fn(cfg.field(m))
        except RequiresConstantExtension as exc:
            if not cfg.auto_extend or m >= cfg.m + 4:
                raise
            m = exc.suggested_m if exc.suggested_m and exc.suggested_m > m else m + 1


def cmd_reduce(cfg: Config, expr: str) -> int:
    def run(K):
        u = parse_elem(expr, K)
        return K, kummer_reduce(u)

    K, (red, mult) = _retry(cfg, run)
    if isinstance(red, CaseA):
        obj = {"case": "A", "u": ratfun_str(red.ubar), "m": K.k.m}
        text = f"case A: ubar = {obj['u']} (m = {K.k.m})"
    else:
        obj = {"case": "B", "t": str(red.t), "w": ratfun_str(red.wbar), "m": K.k.m}
        text = f"case B: t = {red.t}, wbar = {obj['w']} (m = {K.k.m})"
    obj["multiplier_valuation"] = str(mult.val())
    _emit(cfg, obj, text)
    return 0


def cmd_swan(cfg: Config, expr: str, z: Optional[str]) -> int:
    def run(K):
        if z is None:
            return cd.ramification_datum(cd.CharP(K, parse_elem(expr, K)))
        chi = cd.CharTower(K, parse_elem(expr, K), parse_elem(z, K))
        return cd.ramification_datum(chi, auto_extend=cfg.auto_extend)

    if z is not None and cfg.m < 1:
        cfg.m = 1
    dat = _retry(cfg, run)
    obj = datum_to_json(dat, cfg.f)
    text = "\n".join(f"delta_{i + 1} = {q.delta}, omega_{i + 1} = ({ratfun_str(q.omega.a)}) ds/s"
                     for i, q in enumerate(dat.pairs))
    _emit(cfg, obj, text)
    return 0


def _load(path: str):
    with open(path) if path != "-" else sys.stdin as fh:
        return json.load(fh)


def cmd_validate(cfg: Config, path: str) -> int:
    dat = datum_from_json(_load(path))
    rep = validate_thm1(dat)
    if len(dat) == 2:
        rep.records += check_hyodo(dat).records
    lines = [f"{'ok  ' if r.passed else 'FAIL'} {r.cid}" for r in rep.records]
    _emit(cfg, rep.to_json(), "\n".join(lines + ["valid" if rep.passed else "invalid"]))
    return 0 if rep.passed else 1


def cmd_breaks(cfg: Config, breaks: list) -> int:
    rep = validate_charp_breaks(BreakSeqCharP(cfg.p, breaks))
    lines = [f"{'ok  ' if r.passed else 'FAIL'} {r.cid} {r.witness}" for r in rep.records]
    _emit(cfg, rep.to_json(), "\n".join(lines + ["pass" if rep.passed else "fail"]))
    return 0 if rep.passed else 1


def _describe(chi) -> dict:
    if isinstance(chi, cd.CharP):
        return {"kind": "order p", "m": chi.K.k.m, "u": format_elem(chi.u)}
    return {"kind": "order p^2", "m": chi.K.k.m, "u0": format_elem(chi.u0),
            "z": format_elem(chi.z)}


def cmd_construct(cfg: Config, path: str) -> int:
    dat = datum_from_json(_load(path))
    chi = cd.construct_from_datum(dat, N=cfg.prec, degree_bound=cfg.degree_bound,
                                  budget=cfg.iters, auto_extend=True)
    got = cd.ramification_datum(chi, auto_extend=True)
    obj = {"character": _describe(chi), "datum": datum_to_json(got, cfg.f)}
    if isinstance(chi, cd.CharP):
        red = chi.reduced
        text = (f"u with ubar = {ratfun_str(red.ubar)}" if isinstance(red, CaseA)
                else f"u = 1 + pi[{chi.p * red.t}] * w, wbar = {ratfun_str(red.wbar)}")
    else:
        text = (f"tower over m = {chi.K.k.m}:\n  u0 = {format_elem(chi.u0)}\n"
                f"  z = {format_elem(chi.z)}")
    _emit(cfg, obj, text + f"\nrecomputed: {got}")
    return 0


def cmd_minimize(cfg: Config, expr: str) -> int:
    trace = cd.MinimizeTrace()

    def run(K):
        return cd.minimize_swan(cd.CharP(K, parse_elem(expr, K)), budget=cfg.iters,
                                trace=trace, auto_extend=True)

    chi = _retry(cfg, run)
    dat = cd.swan_tower(chi, auto_extend=True)
    obj = {"iterations": len(trace.steps) - 1,
           "deltas": [str(s[0]) for s in trace.steps],
           "datum": datum_to_json(dat, cfg.f)}
    text = (f"minimal lift after {obj['iterations']} steps: deltas {' -> '.join(obj['deltas'])}\n"
            f"datum: {dat}")
    _emit(cfg, obj, text)
    return 0


def cmd_enumerate(cfg: Config, step: str, n: int, limit: int) -> int:
    data = enumerate_valid_data(cfg.p, Fraction(step), cfg.degree_bound, n_max=n,
                                seed=cfg.seed, f=cfg.f)
    data = data[:limit] if limit else data
    if cfg.json:
        print(json.dumps([datum_to_json(d, cfg.f) for d in data]))
    else:
        for d in data:
            print(d)
        print(f"{len(data)} data")
    return 0


def cmd_selftest(cfg: Config, suite: str) -> int:
    """Quick built-in checks (the full acceptance suite lives in the test tree)."""
    rng = random.Random(cfg.seed)
    results = []
    t0 = time.time()
    if suite in ("all", "oracle"):
        K = LocalField.build(cfg.p, max(cfg.m, 1), cfg.f, cfg.prec)
        from .residue_field import random_ratfun
        ok = True
        for _ in range(20):
            a = random_ratfun(K.F, 3, rng)
            try:
                chi = cd.CharP(K, K.lift(a))
                ok &= cd.swan_p(chi) == cd.swan_p_norm_oracle(chi)
            except SwanlabError:
                continue
        results.append(("oracle", ok))
    if suite in ("all", "thm1"):
        # random order p^2 towers: their data must satisfy the structure theorem
        from .residue_field import is_pth_power, random_ratfun
        K = LocalField.build(cfg.p, max(cfg.m, 1), cfg.f, cfg.prec)
        ok, done = True, 0
        while done < 6:
            a = random_ratfun(K.F, 2, rng)
            if is_pth_power(a) is not None:
                continue
            # lower breaks p/(p-1), p/(p-1) - p/e and 1/(p-1)
            shift = [None, Fraction(cfg.p, K.e), Fraction(1)][done % 3]
            u0 = K.lift(a) if shift is None else K.one() + K.lift(a).shift(shift)
            zt = Fraction(rng.randrange(1, 2 * K.e), K.e)
            z = K.one() + K.lift(random_ratfun(K.F, 2, rng)).shift(zt)
            try:
                dat = cd.ramification_datum(cd.CharTower(K, u0, z), check=False,
                                            auto_extend=True)
            except SwanlabError as exc:
                logging.info("selftest thm1: skipped tower (%s)", exc)
                continue
            ok &= validate_thm1(dat).passed
            done += 1
        results.append(("thm1", ok))
    if suite in ("all", "hyodo"):
        data = enumerate_valid_data(cfg.p, Fraction(1, 6 * (cfg.p - 1)), 2, seed=cfg.seed)
        results.append(("hyodo", all(check_hyodo(d).passed for d in data if len(d) == 2)))
    if not results:
        raise InvalidInput(f"unknown suite {suite!r}")
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    print(f"{time.time() - t0:.1f}s")
    return 0 if all(ok for _, ok in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="swanlab", description=__doc__)
    ap.add_argument("--p", type=int, default=3, help="residue characteristic (prime)")
    ap.add_argument("--f", type=int, default=1, help="degree of the constant field F_q over F_p")
    ap.add_argument("--m", type=int, default=0, help="ramification level: e = (p-1) p^m")
    ap.add_argument("--prec", type=int, default=6, help="p-adic precision N (work mod p^N)")
    ap.add_argument("--degree-bound", type=int, default=4, help="degree bound for residue searches")
    ap.add_argument("--iters", type=int, default=30, help="iteration cap for minimize")
    ap.add_argument("--seed", type=int, default=0, help="RNG seed")
    ap.add_argument("--auto-extend", action="store_true", help="extend constants when needed")
    ap.add_argument("--json", action="store_true", help="machine readable output")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="cmd", required=True)
    sp = sub.add_parser("reduce", help="Kummer-reduce a unit")
    sp.add_argument("expr")
    sp = sub.add_parser("swan", help="ramification datum of chi_u (or of a tower with --z)")
    sp.add_argument("expr")
    sp.add_argument("--z", default=None, help="level-2 class z of a tower")
    sp = sub.add_parser("validate", help="check a datum JSON file")
    sp.add_argument("path")
    sp = sub.add_parser("breaks", help="check a char-p break sequence")
    sp.add_argument("u", type=int, nargs="+")
    sp = sub.add_parser("construct", help="build a character from a datum JSON file")
    sp.add_argument("path")
    sp = sub.add_parser("minimize", help="minimal lift of an order p character")
    sp.add_argument("expr")
    sp = sub.add_parser("enumerate", help="list valid data on a delta grid")
    sp.add_argument("--step", default="1/6", help="delta grid step")
    sp.add_argument("--n", type=int, default=2, help="maximal number of pairs")
    sp.add_argument("--limit", type=int, default=0, help="print at most this many (0: all)")
    sp = sub.add_parser("selftest", help="run quick built-in checks")
    sp.add_argument("suite", nargs="?", default="all", help="oracle, thm1, hyodo or all")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        cfg = Config(args.p, args.f, args.m, args.prec, args.degree_bound, args.iters,
                     args.seed, args.auto_extend, args.json)
        if args.cmd == "reduce":
            return cmd_reduce(cfg, args.expr)
        if args.cmd == "swan":
            return cmd_swan(cfg, args.expr, args.z)
        if args.cmd == "validate":
            return cmd_validate(cfg, args.path)
        if args.cmd == "breaks":
            return cmd_breaks(cfg, args.u)
        if args.cmd == "construct":
            return cmd_construct(cfg, args.path)
        if args.cmd == "minimize":
            return cmd_minimize(cfg, args.expr)
        if args.cmd == "enumerate":
            return cmd_enumerate(cfg, args.step, args.n, args.limit)
        return cmd_selftest(cfg, args.suite)
    except RequiresConstantExtension as exc:
        flags = []
        if exc.suggested_m is not None:
            flags.append(f"--m {exc.suggested_m}")
        if exc.suggested_f is not None:
            flags.append(f"--f {exc.suggested_f}")
        print(f"error: {exc}; retry with {' '.join(flags) or '--auto-extend'}", file=sys.stderr)
        return 2
    except SwanlabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
