"""Command line entry point ``fricke``.

Exit codes: 0 success, 1 usage or parse error, 2 a verification witness
was found.  Seeds fall back to ``FRICKE_SEED`` and then to 0.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .autaction import (NotInE1, action_jet3, decompose_inn_a2, e_depth, eta1, filtration_suite,
                        in_E)
from .charpoly import var_name
from .freegroup import aut_depth, parse_automorphism, parse_word
from .graded import _pair_name, basis_S, basis_T, jet3, relations_deg2
from .numcheck import SuiteReport, lemma_suite, relations_suite
from .reduce import trace_reduce, trace_reduce_primed

EXIT_OK, EXIT_USAGE, EXIT_WITNESS = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _rank(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("n must be at least 2")
    return n


def _positive(text: str) -> int:
    k = int(text)
    if k < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return k


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FRICKE_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"FRICKE_SEED is not an integer: {env!r}")


def _threads(args) -> int:
    return args.threads if args.threads else (os.cpu_count() or 1)


# -- subcommands -------------------------------------------------------------

def cmd_reduce(args) -> int:
    w = parse_word(args.word, args.n)
    p = trace_reduce_primed(w) if args.primed else trace_reduce(w)
    if args.json:
        _emit(p.to_json_obj())
    else:
        print(p)
    return EXIT_OK


def cmd_basis(args) -> int:
    if args.grade == 1:
        names = [var_name(v, style="json") for v in basis_T(args.n)]
        plain = [var_name(v, primed=True) for v in basis_T(args.n)]
    else:
        names = [_pair_name(p) for p in basis_S(args.n)]
        plain = ["*".join(var_name(v, primed=True) for v in p) for p in basis_S(args.n)]
    if args.json:
        _emit({"n": args.n, "grade": args.grade, "size": len(names), "elements": names})
    else:
        print(f"# grade {args.grade} basis for n={args.n}: {len(names)} elements")
        print("\n".join(plain))
    return EXIT_OK


def _suite_out(report: SuiteReport, as_json: bool, header: str) -> int:
    if as_json:
        _emit(report.to_json_obj())
    else:
        print(header)
        for c in report.checks:
            print(f"{'PASS' if c.ok else 'FAIL'} {c.name} ({c.trials} trials, {len(c.failures)} failures)")
            for f in c.failures[:3]:
                print("  witness: " + json.dumps(f, sort_keys=True))
    return EXIT_OK if report.ok else EXIT_WITNESS


def cmd_relations(args) -> int:
    rels = relations_deg2(args.n)
    if args.verify:
        report = relations_suite(args.n, _seed(args), args.verify, _threads(args))
        return _suite_out(report, args.json, f"# {len(rels)} relations for n={args.n}")
    if args.json:
        _emit({"n": args.n, "relations": [{"label": r.label, "tag": r.tag, "poly": r.poly.to_json_obj()}
                                          for r in rels]})
    else:
        print(f"# {len(rels)} relations for n={args.n}")
        for r in rels:
            print(f"{r.label} [{r.tag}]: {r.poly}")
    return EXIT_OK


def cmd_jet(args) -> int:
    j = jet3(trace_reduce_primed(parse_word(args.word, args.n)))
    if args.json:
        _emit(j.to_json_obj())
    else:
        print(j)
    return EXIT_OK


def _automorphism(args):
    return parse_automorphism(args.map, args.n, args.inv)


def _out(args, obj, text) -> None:
    if args.json:
        _emit(obj)
    else:
        print(text)


def cmd_act(args) -> int:
    a = _automorphism(args)
    if args.jet:
        m = action_jet3(a)
        _out(args, m.to_json_obj(), m)
    elif args.check_e is not None:
        ok = in_E(a, args.check_e)
        _out(args, {"k": args.check_e, "member": ok}, f"in E({args.check_e}): {str(ok).lower()}")
    elif args.eta1:
        try:
            m = eta1(a)
        except NotInE1 as exc:
            raise UsageError(str(exc))
        _out(args, m.to_json_obj(), m)
    elif args.decompose:
        d = decompose_inn_a2(a)
        if d is None:
            _out(args, None, "no decomposition: not in Inn.A(2)")
        else:
            _out(args, {"exponents": list(d.exponents), "y": str(d.y), "residual": str(d.residual)},
                 f"inner part y = {d.y}  (exponents {list(d.exponents)})\n"
                 f"residual in A(2): {d.residual}")
    else:
        _out(args, {"map": str(a.forward), "inverse": str(a.inverse)}, a)
    return EXIT_OK


def cmd_depth(args) -> int:
    a = _automorphism(args)
    k = aut_depth(a, args.max_k)
    e = e_depth(a)
    if args.json:
        _emit({"andreadakis_depth": k, "max_k": args.max_k, "e_depth": e})
    else:
        print(f"A-depth: {k}{'+' if k == args.max_k else ''}")
        print(f"E-depth: {e}{'+' if e == 2 else ''}")
    return EXIT_OK


def cmd_verify(args) -> int:
    seed, threads = _seed(args), _threads(args)
    checks = []
    if args.suite in ("identities", "all"):
        checks += lemma_suite(seed, args.trials, threads, args.n).checks
    if args.suite in ("relations", "all"):
        checks += relations_suite(args.n, seed, args.trials, threads).checks
    if args.suite in ("filtration", "all"):
        if args.n < 3:
            raise UsageError("the filtration suite needs --n >= 3")
        checks += filtration_suite(args.n, seed, args.trials, threads).checks
    header = f"# suite={args.suite} n={args.n} trials={args.trials} seed={seed}"
    return _suite_out(SuiteReport(checks), args.json, header)


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fricke", description="Fricke characters of free groups and the Aut F_n action.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, json_flag=True):
        sp.add_argument("--n", type=_rank, required=True, help="rank of the free group")
        if json_flag:
            sp.add_argument("--json", action="store_true", help="JSON output with sorted keys")

    def seeded(sp):
        sp.add_argument("--seed", type=int, default=None, help="seed (default: $FRICKE_SEED or 0)")
        sp.add_argument("--threads", type=_positive, default=None,
                        help="worker threads (default: logical cores)")

    sp = sub.add_parser("reduce", help="trace normal form of a word")
    sp.add_argument("word")
    sp.add_argument("--primed", action="store_true", help="express in t' = t - 2")
    common(sp)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("basis", help="bases T (grade 1) and S (grade 2)")
    sp.add_argument("--grade", type=int, choices=(1, 2), required=True)
    common(sp)
    sp.set_defaults(func=cmd_basis)

    sp = sub.add_parser("relations", help="degree-2 relations in the character ideal")
    sp.add_argument("--verify", type=_positive, metavar="TRIALS", default=None,
                    help="check every relation at TRIALS random representations")
    common(sp)
    seeded(sp)
    sp.set_defaults(func=cmd_relations)

    sp = sub.add_parser("jet", help="coordinates of tr' w in J/J^3")
    sp.add_argument("word")
    common(sp)
    sp.set_defaults(func=cmd_jet)

    for name, func in (("act", cmd_act), ("depth", cmd_depth)):
        sp = sub.add_parser(name, help="action on J/J^3" if name == "act" else "filtration depths")
        sp.add_argument("--map", required=True,
                        help="'x1 -> w1; x2 -> w2' or nielsen:P12 / nielsen:I1 / nielsen:M12 / inner:<word>")
        sp.add_argument("--inv", default=None, help="images of the inverse, required for explicit maps")
        common(sp)
        sp.set_defaults(func=func)
    act = sub.choices["act"]
    g = act.add_mutually_exclusive_group()
    g.add_argument("--jet", action="store_true", help="matrix on the coordinates T, S")
    g.add_argument("--check-e", type=int, choices=(1, 2), dest="check_e")
    g.add_argument("--eta1", action="store_true", help="eta_1 as an S x T matrix")
    g.add_argument("--decompose", action="store_true", help="split as A(2) residual times inner")
    sub.choices["depth"].add_argument("--max-k", type=_positive, required=True, dest="max_k")

    sp = sub.add_parser("verify", help="randomized verification suites")
    sp.add_argument("--suite", choices=("identities", "relations", "filtration", "all"), required=True)
    sp.add_argument("--trials", type=_positive, default=100)
    common(sp)
    seeded(sp)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError) as exc:
        sys.stderr.write(f"fricke: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
