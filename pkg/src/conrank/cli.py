"""Command-line interface: ``conrank <command> ...``.

Exit codes: 0 success or Certified, 2 Refuted, 3 Inconclusive, 64 usage
errors, 65 bad input documents, 70-79 computation errors by module.
"""
import argparse
import random
import sys

from . import exact as ex
from . import io
from .betti import herzog_kuhl, koszul_betti, predict_truncation_betti
from .errors import ConrankError, DocumentError

EXIT_USAGE = 64
DEFAULT_PRIMES = (5, 7, 11, 13)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _read_doc(path):
    if path in (None, "-"):
        text = sys.stdin.read()
    else:
        try:
            with open(path) as fh:
                text = fh.read()
        except OSError as e:
            raise DocumentError(str(e)) from e
    return io.loads(text)


def _emit(doc, out):
    out.write(io.dumps(doc))


def _window(path):
    return io.window_from_json(_read_doc(path))


def _pencil(path):
    return io.pencil_from_json(_read_doc(path))


# ---- commands ----

def cmd_betti(args, out):
    W = _window(args.window)
    B = koszul_betti(W, i_max=args.i_max)
    if args.json:
        _emit(io.betti_to_json(B), out)
    else:
        print(B.render(), file=out)
    return 0


def cmd_truncate(args, out):
    from .graded import truncate
    W = truncate(_window(args.window), args.at)
    if args.betti:
        print(koszul_betti(W, i_max=args.i_max).render(), file=out)
    else:
        _emit(io.window_to_json(W), out)
    return 0


def cmd_predict(args, out):
    n = args.n if args.n is not None else len(args.strand) - 1
    B = predict_truncation_betti(tuple(args.strand), args.k, n)
    if args.json:
        _emit(io.betti_to_json(B), out)
    else:
        print(B.render(), file=out)
    return 0


def cmd_hk(args, out):
    h = herzog_kuhl(args.degrees)
    print(f"q={h.q}: " + " ".join(str(b) for b in h.betti), file=out)
    return 0


def cmd_catalog(args, out):
    from .betti import BettiTable
    from .catalog import candidate, compatible_candidates
    if args.strand:
        B = BettiTable.from_strand(tuple(args.strand), args.m)
        cands = compatible_candidates(B, args.n, args.max_multiplicity, rank=args.rank)
        for c in cands:
            a = args.strand[0] - c.strand[0]
            b = args.strand[1] - c.strand[1]
            print(f"{c.label}  t={c.t}  degrees={list(c.degrees)}  pencil {a}x{b}", file=out)
    else:
        for t in range(1, args.t_max + 1):
            c = candidate(t, 1, args.m, args.n)
            print(f"t={t}  degrees={list(c.degrees)}  betti={list(c.strand)}", file=out)
    return 0


def cmd_westwick(args, out):
    from .bundles import westwick_pencil
    _emit(io.pencil_to_json(westwick_pencil(args.n, args.k, args.field)), out)
    return 0


def cmd_construct(args, out):
    from . import bundles
    F = args.field
    if args.kind == "steiner":
        W = bundles.steiner_module(args.n, args.s, args.r, args.m, seed=args.seed, field=F,
                                   lo=args.lo, hi=args.hi)
        _emit(io.window_to_json(W), out)
    elif args.kind == "instanton":
        _emit(io.window_to_json(bundles.instanton_module(args.lo, args.hi or 6, F)), out)
    elif args.kind == "nullcorrelation":
        M = bundles.null_correlation_monad(args.c, args.d, args.e, seed=args.seed, field=F)
        _emit(io.window_to_json(bundles.monad_cohomology_module(M, args.lo, args.hi or 6, check=False)), out)
    elif args.kind == "linebundle":
        A = bundles.line_bundle_pipeline(args.s, seed=args.seed)
        _emit(io.pencil_to_json(A), out)
    return 0


def cmd_reduce(args, out):
    from .reduction import sample_reduction
    E, G = _window(args.E), _window(args.G)
    res = sample_reduction(E, G, attempts=args.attempts, seed=args.seed)
    _emit(io.reduction_to_json(res), out)
    return 0


def cmd_tree(args, out):
    from .tree import build_tree
    T = build_tree(_window(args.window), depth=args.depth, attempts=args.attempts, seed=args.seed,
                   max_multiplicity=args.max_multiplicity)
    if args.format == "json":
        _emit(T.to_json(), out)
    elif args.format == "dot":
        print(T.to_dot(), file=out)
    else:
        print(T.render(), file=out)
    return 0


def _generic_rank(A, seed, tries=20):
    from .pencil import eval_pencil
    rng = random.Random(seed)
    best = 0
    for _ in range(tries):
        pt = [rng.randint(-1000, 1000) for _ in range(A.n + 1)]
        if any(pt):
            best = max(best, ex.rank(eval_pencil(A, pt)))
    return best


def cmd_rankcheck(args, out):
    from .pencil import SPARE_PRIMES, assert_constant_rank
    A = _pencil(args.pencil)
    primes = list(dict.fromkeys(args.exhaustive or []))
    for q in DEFAULT_PRIMES:
        if len(primes) >= 2:
            break
        if q not in primes:
            primes.append(q)
    rho = args.rank if args.rank is not None else _generic_rank(A, args.seed)
    spares = () if args.no_spare_primes else SPARE_PRIMES
    v = assert_constant_rank(A, rho, primes=tuple(primes), samples=args.samples, seed=args.seed,
                             jobs=args.jobs, spare_primes=spares)
    if args.json:
        _emit(v.to_json(), out)
    else:
        line = f"{v.status} rank {rho}"
        if v.witness is not None:
            line += f": rank {v.witness_rank} at {list(v.witness)} over {v.witness_field}"
        print(line, file=out)
        for p in v.profiles:
            print(f"  {p.strategy}: {p.points} points, ranks {p.min_rank}..{p.max_rank}", file=out)
        for note in v.notes:
            print(f"  note: {note}", file=out)
    return v.exit_code


def cmd_skew(args, out):
    from .pencil import is_skew, left_skew_symmetrize
    A = _pencil(args.pencil)
    if args.action == "verify":
        ok = is_skew(A)
        print("skew" if ok else "not skew", file=out)
        return 0 if ok else 2
    S = left_skew_symmetrize(A, seed=args.seed)
    if S is None:
        print("no invertible left factor makes the pencil skew", file=out)
        return 2
    B = A.left_multiply(S)
    B.provenance = dict(A.provenance, left_factor=ex.to_strings(S))
    _emit(io.pencil_to_json(B), out)
    return 0


def cmd_examples(args, out):
    from .bundles import (builtin_pencil, check_monad, displayed_line_bundle_pencil,
                          special_instanton_monad, westwick_pencil)
    from .pencil import assert_constant_rank, find_sign_equivalence, is_skew
    code = 0
    A = displayed_line_bundle_pencil()
    signs = find_sign_equivalence(westwick_pencil(2, 2), A)
    v = assert_constant_rank(A, 4, primes=(5, 7), samples=args.samples, seed=args.seed)
    print(f"westwick-2-2: 5x5, matches westwick 2 2 up to signs: {signs is not None}; {v.status} rank 4",
          file=out)
    code = max(code, v.exit_code, 0 if signs is not None else 2)
    M = special_instanton_monad()
    try:
        check_monad(M)
        mon = "monad conditions hold"
    except ConrankError as e:
        mon, code = str(e), max(code, 2)
    S = builtin_pencil("skew-10x10")
    v = assert_constant_rank(S, 8, primes=(7, 11), samples=args.samples, seed=args.seed)
    print(f"instanton-2-2-special: {mon}; skew-10x10: skew {is_skew(S)}, {v.status} rank 8", file=out)
    code = max(code, v.exit_code, 0 if is_skew(S) else 2)
    return code


# ---- parser ----

def _field(s):
    try:
        return ex.field_from_name(s)
    except ConrankError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser():
    p = _Parser(prog="conrank", description="Linear pencils of constant rank from graded modules.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--field", type=_field, default=ex.QQ, help="QQ or GF(p)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("betti", help="Betti table of a window")
    s.add_argument("window", nargs="?", default="-")
    s.add_argument("--i-max", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_betti)

    s = sub.add_parser("truncate", help="truncate a window at a degree")
    s.add_argument("window", nargs="?", default="-")
    s.add_argument("--at", type=int, required=True)
    s.add_argument("--betti", action="store_true", help="print the Betti table instead")
    s.add_argument("--i-max", type=int)
    s.set_defaults(func=cmd_truncate)

    s = sub.add_parser("predict", help="Betti strand of a truncation from a linear strand")
    s.add_argument("strand", type=int, nargs="+")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("hk", help="minimal pure Betti numbers for a degree sequence")
    s.add_argument("degrees", type=int, nargs="+")
    s.set_defaults(func=cmd_hk)

    s = sub.add_parser("catalog", help="Artinian modules D(t), or those compatible with a strand")
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--t-max", type=int, default=4)
    s.add_argument("--strand", type=int, nargs="+")
    s.add_argument("--rank", type=int)
    s.add_argument("--max-multiplicity", type=int)
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("westwick", help="the (kn+1)x(kn+n-1) constant rank kn pencil")
    s.add_argument("n", type=int)
    s.add_argument("k", type=int)
    s.set_defaults(func=cmd_westwick)

    s = sub.add_parser("construct", help="section modules and the line-bundle pencil")
    s.add_argument("kind", choices=["steiner", "linebundle", "instanton", "nullcorrelation"])
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--s", type=int, default=1)
    s.add_argument("--r", type=int, default=2)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--c", type=int, default=1)
    s.add_argument("--d", type=int, default=0)
    s.add_argument("--e", type=int, default=0)
    s.add_argument("--lo", type=int, default=0)
    s.add_argument("--hi", type=int)
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("reduce", help="kernel of a sampled surjection E -> G")
    s.add_argument("E")
    s.add_argument("G")
    s.add_argument("--attempts", type=int, default=10)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("tree", help="construction tree of successive reductions")
    s.add_argument("window", nargs="?", default="-")
    s.add_argument("--depth", type=int, default=1)
    s.add_argument("--attempts", type=int, default=10)
    s.add_argument("--max-multiplicity", type=int)
    s.add_argument("--format", choices=["text", "json", "dot"], default="text")
    s.set_defaults(func=cmd_tree)

    s = sub.add_parser("rankcheck", help="certify constant rank of a pencil")
    s.add_argument("pencil", nargs="?", default="-")
    s.add_argument("--exhaustive", type=int, action="append", metavar="Q")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--rank", type=int, help="expected rank (default: rank at random points)")
    s.add_argument("--no-spare-primes", action="store_true",
                   help="do not replace primes of bad reduction")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_rankcheck)

    s = sub.add_parser("skew", help="check or find a left skew-symmetrization")
    s.add_argument("action", choices=["verify", "symmetrize"])
    s.add_argument("pencil", nargs="?", default="-")
    s.set_defaults(func=cmd_skew)

    s = sub.add_parser("paper-examples", help="materialize the built-in examples and re-certify them")
    s.add_argument("--samples", type=int, default=1000)
    s.set_defaults(func=cmd_examples)
    return p


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    try:
        return args.func(args, out)
    except ConrankError as e:
        print(f"conrank: {type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code
    except (ValueError, KeyError) as e:
        print(f"conrank: {e}", file=sys.stderr)
        return EXIT_USAGE


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
