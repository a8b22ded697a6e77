"""Command line interface.

Exit status: 0 when every check passes, 1 when a check fails, 2 on input
errors (unreadable files, syntax or semantic errors).
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import certify, formats, gallery
from .diagram import TypeSignature, glue, validate
from .formats import ParseError, format_rational, parse, serialize
from .planner import BudgetExceeded
from .quantum import delta
from .tensors import BUDGET_ENV, Tensor, extended_trace, naive_trace, planned_trace, quantum_trace

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _load(path: str, kind: str, sig: TypeSignature | None = None, check: bool = True):
    try:
        return parse(kind, _read(path), sig=sig, check=check)
    except ParseError as exc:
        raise InputError(f"{path}:{exc.line}:{exc.col}: {exc.message}") from None
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _sig(args) -> TypeSignature | None:
    return _load(args.sig, "signature") if getattr(args, "sig", None) else None


def _rep_and_web(args, check=True):
    rep = _load(args.rep, "representation")
    web = _load(args.web, "web", sig=_sig(args) or rep.sig, check=check)
    return rep, web


def _pack(ref: str) -> gallery.ExamplePack:
    if ref in gallery.GALLERY:
        return gallery.build(ref)
    return _load(ref, "pack")


def cmd_validate(args) -> int:
    sig = _sig(args)
    web = _load(args.web, "web", sig=sig, check=False)
    problems = validate(sig or web.sig, web)
    for p in problems:
        print(p)
    print("valid" if not problems else f"invalid ({len(problems)} violations)")
    return EXIT_FAIL if problems else EXIT_OK


def cmd_trace(args) -> int:
    rep, web = _rep_and_web(args)
    fn = naive_trace if args.naive else planned_trace
    print(format_rational(fn(rep, web, budget=args.budget)))
    return EXIT_OK


def cmd_hat_trace(args) -> int:
    rep = _load(args.rep, "representation")
    if args.qweb:
        q = _load(args.qweb, "quantum_web", sig=_sig(args) or rep.sig)
        value = quantum_trace(rep, q, budget=args.budget)
        if not isinstance(value, Tensor):
            value = Tensor(0, 0, rep.dim, [value])
    else:
        web = _load(args.web, "web", sig=_sig(args) or rep.sig)
        value = extended_trace(rep, web, budget=args.budget)
    sys.stdout.write(serialize(value))
    return EXIT_OK


def cmd_glue(args) -> int:
    sig = _sig(args)
    w = _load(args.left, "web", sig=sig)
    x = _load(args.right, "web", sig=sig)
    sys.stdout.write(serialize(glue(w, x)))
    return EXIT_OK


def cmd_delta(args) -> int:
    sys.stdout.write(serialize(delta(args.k)))
    return EXIT_OK


def cmd_check_delta(args) -> int:
    rep = _load(args.rep, "representation")
    report = certify.check_delta_annihilation(rep, args.k)
    print(f"delta k={report.k} dim={rep.dim} hat_zero={'true' if report.hat_zero else 'false'}")
    return EXIT_OK if report.hat_zero else EXIT_FAIL


def cmd_check_relations(args) -> int:
    pack = _pack(args.pack)
    rep = _load(args.rep, "representation") if args.rep else pack.rep
    if rep is None:
        raise InputError(f"pack {pack.name} has no representation; pass --rep")
    ok = True
    for name, want, got in pack.check(rep):
        good = want == got
        ok &= good
        print(f"{'PASS' if good else 'FAIL'} {name} expected={'zero' if want else 'nonzero'} "
              f"actual={'zero' if got else 'nonzero'}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_connmat(args) -> int:
    rep = _load(args.rep, "representation")
    webs = certify.enumerate_webs(rep.sig, args.k, args.k, args.max_vertices, args.max_loops)
    M = certify.connection_matrix(rep, args.k, webs)
    print(f"connection matrix k={args.k} size={len(webs)}")
    for row in M.entries:
        print(" ".join(format_rational(x) for x in row))
    print(f"rank {M.rank()} bound {rep.dim ** (2 * args.k)}")
    return EXIT_OK


def cmd_rank_check(args) -> int:
    rep = _load(args.rep, "representation")
    ok = True
    for r in certify.rank_growth_check(rep, args.k_max, args.max_vertices, args.max_loops):
        ok &= r.passed
        print(f"{'PASS' if r.passed else 'FAIL'} k={r.k} webs={r.size} rank={r.rank} bound={r.bound}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_witness_search(args) -> int:
    text = _read(args.qweb)
    if formats.detect_kind(text) == "pack":
        pack = _load(args.qweb, "pack")
        rep = _load(args.rep, "representation") if args.rep else pack.rep
        targets = list(zip(pack.relation_names, pack.relations))
    else:
        if not args.rep:
            raise InputError("--rep is required unless --qweb is a pack")
        rep = _load(args.rep, "representation")
        targets = [("omega", _load(args.qweb, "quantum_web", sig=_sig(args) or rep.sig))]
    if rep is None:
        raise InputError("no representation; pass --rep")
    for name, q in targets:
        res = certify.annihilation_witness_search(rep, q, args.max_vertices, args.max_loops)
        if res.exhausted:
            print(f"{name}: exhausted after {res.examined} webs")
        else:
            print(f"{name}: witness found after {res.examined} webs, value {format_rational(res.value)}")
            sys.stdout.write(serialize(res.witness))
    return EXIT_OK


def cmd_gallery(args) -> int:
    if args.name is None or args.list:
        for name in gallery.GALLERY:
            print(name)
        return EXIT_OK
    try:
        pack = gallery.build(args.name)
    except KeyError as exc:
        raise InputError(str(exc.args[0])) from None
    sys.stdout.write(serialize(pack))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None,
                        help=f"term/entry budget (overrides ${BUDGET_ENV})")
    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--max-vertices", type=int, default=certify.DEFAULT_MAX_VERTICES)
    bounds.add_argument("--max-loops", type=int, default=certify.DEFAULT_MAX_LOOPS)

    ap = argparse.ArgumentParser(prog="webtrace", description="Traces of tensor representations of diagrams.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a web against its signature")
    p.add_argument("--web", required=True)
    p.add_argument("--sig")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("trace", parents=[common], help="p_R of a diagram")
    p.add_argument("--rep", required=True)
    p.add_argument("--web", required=True)
    p.add_argument("--sig")
    p.add_argument("--naive", action="store_true", help="use the coloring sum instead of the planner")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("hat-trace", parents=[common], help="extended trace of a web or quantum web")
    p.add_argument("--rep", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--web")
    g.add_argument("--qweb")
    p.add_argument("--sig")
    p.set_defaults(func=cmd_hat_trace)

    p = sub.add_parser("glue", parents=[common], help="glue a k,l-web with an l,k-web")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--sig")
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("delta", parents=[common], help="print the antisymmetrizer quantum web")
    p.add_argument("k", type=int)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("check-delta", parents=[common], help="check that p̂_R(Δ_{n+1}) vanishes")
    p.add_argument("--rep", required=True)
    p.add_argument("--k", type=int, default=None, help="evaluate Δ_k instead of Δ_{n+1}")
    p.set_defaults(func=cmd_check_delta)

    p = sub.add_parser("check-relations", parents=[common], help="evaluate a pack's relations")
    p.add_argument("pack", help="gallery pack name or pack file")
    p.add_argument("--rep")
    p.set_defaults(func=cmd_check_relations)

    p = sub.add_parser("connmat", parents=[common, bounds], help="connection matrix M_{p_R,k}")
    p.add_argument("k", type=int)
    p.add_argument("--rep", required=True)
    p.set_defaults(func=cmd_connmat)

    p = sub.add_parser("rank-check", parents=[common, bounds], help="rank(M_k) <= n^(2k) for k <= k_max")
    p.add_argument("k_max", type=int)
    p.add_argument("--rep", required=True)
    p.set_defaults(func=cmd_rank_check)

    p = sub.add_parser("witness-search", parents=[common, bounds], help="search W with p_R(ω·W) != 0")
    p.add_argument("--rep")
    p.add_argument("--qweb", required=True, help="quantum web or pack document")
    p.add_argument("--sig")
    p.set_defaults(func=cmd_witness_search)

    p = sub.add_parser("gallery", parents=[common], help="print a gallery pack document")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.set_defaults(func=cmd_gallery)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.budget is None and os.environ.get(BUDGET_ENV):
        args.budget = int(os.environ[BUDGET_ENV])
    try:
        return args.func(args)
    except (InputError, BudgetExceeded, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
