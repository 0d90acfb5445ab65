"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 internal-consistency failure.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .errors import InternalConsistencyError, ValidationError
from .genus1 import aut_order, n1j
from .gw0 import MemoTable, n0
from .lattice import SurfaceKind, enumerate_classes, make_surface, parse_class, parse_surface
from .store import cache_file, export_table, load_cache, save_cache, table_text
from .verify import SUITES, run_verify_suite

CACHE_ENV = "GWCACHE_PATH"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="dpcurves", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, with_class=True):
        p.add_argument("--surface", required=True, help="p2, p2xK (0 <= K <= 8) or quadric")
        if with_class:
            p.add_argument("--class", dest="cls", required=True,
                           help='class string, e.g. "3;" or "3;1,1" or "1,1"')
        p.add_argument("--cache", default=None,
                       help=f"cache directory (default: ${CACHE_ENV} if set)")
        p.add_argument("--no-weyl", action="store_true",
                       help="recurse on raw classes instead of Weyl normal forms")

    p = sub.add_parser("n0", help="genus-0 count through delta points")
    common(p)

    p = sub.add_parser("genus1", help="fixed-j genus-one count with its full report")
    common(p)
    p.add_argument("--aut", default="generic", help="generic, j1728, j0 or a positive integer")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("table", help="genus-one table for many classes")
    common(p, with_class=False)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--classes", nargs="+", help="explicit class strings, kept in order")
    group.add_argument("--max-c1", type=int, help="all normal-form candidates with c1.beta <= N")
    p.add_argument("--aut", default="generic")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--output", default=None, help="write here instead of stdout")

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", choices=SUITES + ("all",))

    p = sub.add_parser("cache", help="warm or inspect a cache directory")
    common(p, with_class=False)
    p.add_argument("--warm", type=int, metavar="N", help="compute all classes with c1.beta <= N and save")
    return parser


def _cache_dir(args):
    explicit = args.cache is not None
    path = args.cache if explicit else os.environ.get(CACHE_ENV)
    if not path:
        return None
    if args.no_weyl:
        if explicit:
            raise ValidationError("--no-weyl results are not cached; drop --cache")
        return None
    return Path(path)


def _related_surfaces(surface):
    if surface.is_blowup:
        return [make_surface(SurfaceKind.P2_BLOWUP, k) for k in range(surface.k + 1)]
    return [surface]


def _open_memo(args, surface):
    memo = MemoTable(normalized=not args.no_weyl)
    directory = _cache_dir(args)
    if directory is not None:
        for s in _related_surfaces(surface):
            f = cache_file(directory, s)
            if f.exists():
                load_cache(f, s, memo)
    return memo, directory


def _close_memo(memo, directory, surface):
    if directory is None:
        return
    directory.mkdir(parents=True, exist_ok=True)
    for s in _related_surfaces(surface):
        if memo.entries(s.id):
            save_cache(memo, s, cache_file(directory, s))


def _cmd_n0(args, out):
    surface = parse_surface(args.surface)
    beta = parse_class(surface, args.cls)
    memo, directory = _open_memo(args, surface)
    value = n0(surface, beta, memo)
    _close_memo(memo, directory, surface)
    out.write(f"{value}\n")


def _cmd_genus1(args, out):
    surface = parse_surface(args.surface)
    beta = parse_class(surface, args.cls)
    aut = aut_order(args.aut)
    memo, directory = _open_memo(args, surface)
    _, report = n1j(surface, beta, aut, memo)
    _close_memo(memo, directory, surface)
    if args.format == "text":
        out.write(report.describe() + "\n")
    elif args.format == "json":
        out.write(json.dumps(report.as_dict()) + "\n")
    else:
        out.write(table_text([report], "csv"))


def _cmd_table(args, out):
    surface = parse_surface(args.surface)
    aut = aut_order(args.aut)
    if args.classes:
        classes = [parse_class(surface, c) for c in args.classes]
    else:
        if args.max_c1 < 1:
            raise ValidationError("--max-c1 must be >= 1")
        classes = enumerate_classes(surface, args.max_c1)
    memo, directory = _open_memo(args, surface)
    reports = [n1j(surface, beta, aut, memo)[1] for beta in classes]
    _close_memo(memo, directory, surface)
    if args.output:
        export_table(reports, args.format, args.output)
    else:
        out.write(table_text(reports, args.format))


def _cmd_verify(args, out):
    names = SUITES if args.suite == "all" else (args.suite,)
    ok = True
    for name in names:
        res = run_verify_suite(name)
        out.write(res.summary() + "\n")
        for msg in res.failures:
            out.write(f"  {msg}\n")
        ok &= res.ok
    return 0 if ok else 2


def _cmd_cache(args, out):
    surface = parse_surface(args.surface)
    if _cache_dir(args) is None:
        raise ValidationError(f"no cache directory: pass --cache or set ${CACHE_ENV}")
    memo, directory = _open_memo(args, surface)
    if args.warm is not None:
        for beta in enumerate_classes(surface, args.warm):
            n0(surface, beta, memo)
        _close_memo(memo, directory, surface)
    for s in _related_surfaces(surface):
        out.write(f"{s.id}: {len(memo.entries(s.id))} entries ({cache_file(directory, s)})\n")


COMMANDS = {
    "n0": _cmd_n0,
    "genus1": _cmd_genus1,
    "table": _cmd_table,
    "verify": _cmd_verify,
    "cache": _cmd_cache,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, out) or 0
    except ValidationError as exc:
        print(f"dpcurves: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"dpcurves: I/O error: {exc}", file=sys.stderr)
        return 1
    except InternalConsistencyError as exc:
        print(f"dpcurves: internal consistency failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
