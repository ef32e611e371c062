"""Command-line front end: symplift {verify, suite, enumerate, closure, list-checks}.

Exit codes: 0 when nothing is falsified, 1 when some check is falsified,
2 on usage or resource errors.  JSON goes to stdout (or --json PATH), one
object per line; a human summary goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cocycles as cc
from .checks import COVERAGE, REGISTRY, CheckSpec, UnknownCheckError, coverage, run_check, run_suite
from .closure import DEFAULT_CAP, ClosureOverflowError, GroupHandle, close, congruence_intersection
from .standard_rep import standard_rep
from .transvections import canonical_lifts, parse_word
from .zmod import is_symplectic, parse_line


class UsageError(Exception):
    pass


def _emit(objs: list[dict], path: str | None) -> None:
    text = "".join(json.dumps(o, sort_keys=True) + "\n" for o in objs)
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summarize(verdicts) -> int:
    for v in verdicts:
        print(f"{v.status:>12}  {v.id} (g={v.params.get('g')}, {v.wall_time:.1f}s)", file=sys.stderr)
    counts = {s: sum(v.status == s for v in verdicts) for s in ("verified", "falsified", "inconclusive")}
    print(", ".join(f"{n} {s}" for s, n in counts.items()), file=sys.stderr)
    return 1 if counts["falsified"] else 0


def _parse_mod(text: str) -> int:
    text = text.strip()
    if text.startswith("2^"):
        k = int(text[2:])
    else:
        n = int(text)
        if n < 2 or n & (n - 1):
            raise UsageError(f"modulus {text} is not a power of 2")
        k = n.bit_length() - 1
    if k < 1:
        raise UsageError("modulus must be at least 2")
    return k


def _read_generators(path: str, k: int, g: int | None):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
    gens = []
    for ln in lines:
        if ln.startswith("g="):
            A = parse_line(ln)
            if A.k is not None and A.k < k:
                raise UsageError(f"generator given mod 2^{A.k} cannot be read mod 2^{k}")
            gens.append(A.reduce(k))
        else:
            if g is None:
                raise UsageError("word generators need --g")
            gens.append(canonical_lifts(g).evaluate(parse_word(ln, 2 * g + 1), k))
    if not gens:
        raise UsageError("no generators in file")
    return gens


def cmd_verify(args) -> int:
    spec = CheckSpec(args.check_id, g=args.g, seed=args.seed, trials=args.trials, sample=args.sample,
                     cap=args.cap, profile=args.profile, mutate_delta=args.mutate_delta)
    v = run_check(spec)
    _emit([v.to_json()], args.json)
    return _summarize([v])


def cmd_suite(args) -> int:
    verdicts = run_suite(args.profile, args.g, ids=args.only, mutate_delta=args.mutate_delta,
                         seed=args.seed, trials=args.trials, sample=args.sample)
    _emit([v.to_json() for v in verdicts], args.json)
    return _summarize(verdicts)


def cmd_enumerate(args) -> int:
    g = args.g
    if args.level == 4:
        phis = cc.enumerate_l4(g)
    else:
        c = cc.parse_bits(args.c, 2 * g) if args.c else None
        phis = cc.enumerate_l8(g, c)
    out = []
    for phi in phis:
        row = {"label": phi.serialize(),
               "star_values": {str(j): "".join(map(str, v)) for j, v in sorted(phi.star_values.items())}}
        if args.order:
            res = close(GroupHandle(2 if args.level == 4 else 3, g, cc.generator_matrices(phi)), cap=args.cap)
            row["order"] = res.order
            row["fingerprint"] = res.fingerprint()
        out.append(row)
    _emit(out, args.json)
    print(f"{len(out)} level-{args.level} quasi-cocycles at g={g}", file=sys.stderr)
    return 0


def cmd_closure(args) -> int:
    k = _parse_mod(args.mod)
    gens = _read_generators(args.gens, k, args.g)
    g = gens[0].g
    form = standard_rep(g).form
    for A in gens:
        if A.g != g:
            raise UsageError("generators have different dimensions")
        if not is_symplectic(A, form):
            raise UsageError("a generator is not symplectic for the chain form")
    res = close(GroupHandle(k, g, gens), cap=args.cap)
    row = {"g": g, "k": k, "generators": len(gens), "order": res.order, "fingerprint": res.fingerprint()}
    if k >= 2:
        inter = congruence_intersection(res, k - 1)
        row["top_layer_dim"] = inter.subspace.dim
        row["top_layer_order"] = inter.order
    _emit([row], args.json)
    print(f"order {res.order} mod 2^{k}", file=sys.stderr)
    return 0


def cmd_list(args) -> int:
    if args.coverage:
        _emit([{"operation": op, "checks": ids} for op, ids in coverage().items()], args.json)
    else:
        _emit([{"id": cid, "operations": COVERAGE[cid]} for cid in REGISTRY], args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symplift", description="Verify lifting statements for S_d in Sp_2g(Z/2^k).")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_id: bool = False):
        sp.add_argument("--g", type=int, default=2)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--trials", type=int, default=None if not with_id else 100)
        sp.add_argument("--sample", type=int, default=8, help="level-8 labels to close in the quick profile")
        sp.add_argument("--profile", choices=["quick", "full"], default="quick")
        sp.add_argument("--mutate-delta", action="store_true", help="use the meeting-pairs reading of delta")
        sp.add_argument("--json", metavar="PATH")

    v = sub.add_parser("verify", help="run one check")
    v.add_argument("check_id")
    common(v, with_id=True)
    v.add_argument("--cap", type=int, default=DEFAULT_CAP)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", help="run every registered check")
    common(s)
    s.add_argument("--only", nargs="*", metavar="ID")
    s.set_defaults(func=cmd_suite)

    e = sub.add_parser("enumerate", help="list quasi-cocycles")
    e.add_argument("--level", type=int, choices=[4, 8], required=True)
    e.add_argument("--g", type=int, default=2)
    e.add_argument("--c", help="fix the type c (level 8)")
    e.add_argument("--order", action="store_true", help="also close each subgroup")
    e.add_argument("--cap", type=int, default=DEFAULT_CAP)
    e.add_argument("--json", metavar="PATH")
    e.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("closure", help="close a generator file mod 2^k")
    c.add_argument("--mod", required=True, help="2^k or the modulus itself")
    c.add_argument("--gens", required=True, metavar="FILE")
    c.add_argument("--g", type=int, help="genus, needed for word generators")
    c.add_argument("--cap", type=int, default=DEFAULT_CAP)
    c.add_argument("--json", metavar="PATH")
    c.set_defaults(func=cmd_closure)

    lc = sub.add_parser("list-checks", help="list registered checks")
    lc.add_argument("--coverage", action="store_true")
    lc.add_argument("--json", metavar="PATH")
    lc.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, UnknownCheckError, ValueError, OSError) as exc:
        msg = f"unknown check id {exc.args[0]!r}" if isinstance(exc, UnknownCheckError) else str(exc)
        print(f"symplift: error: {msg}", file=sys.stderr)
        return 2
    except ClosureOverflowError as exc:
        print(f"symplift: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
