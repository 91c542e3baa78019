"""Command-line front end: ``loopalgebra --genus G <command> ...``.

Exit status is 0 on success, 1 on domain errors (for example the level of
the identity) and 2 on usage errors, including unparseable words, whose
message carries the byte offset of the problem.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .goldman import goldman_bracket
from .hyperbolic import DEFAULT_TOL, NotHyperbolicError, RepresentationError, build_representation
from .render import render_svg
from .string_topology import (
    ElementSyntaxError,
    IntegralityError,
    component_homology,
    coproduct,
    delta,
    parse_element,
    product,
)
from .words import LevelUndefinedError, SurfaceGroup, WordSyntaxError

__all__ = ["main", "build_parser"]


class _UsageError(Exception):
    pass


def _genus(text: str) -> int:
    try:
        g = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"genus must be an integer, got {text!r}") from None
    if g < 2:
        raise argparse.ArgumentTypeError(f"genus must be at least 2, got {g}")
    return g


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _positive_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return x


def _add_globals(p: argparse.ArgumentParser, default) -> None:
    """Global flags; they are accepted before or after the command name."""
    p.add_argument("--genus", type=_genus, default=default, help="genus of the surface (at least 2, required)")
    p.add_argument("--budget", type=_positive_int, default=default,
                   help="conjugator length budget for intersection searches")
    p.add_argument("--tol", type=_positive_float, default=default,
                   help=f"numerical tolerance (default {DEFAULT_TOL:g})")
    p.add_argument("--format", choices=("text", "json"), default=default, help="output format (default text)")
    p.add_argument("--out", default=default, help="output file (render only; default standard output)")


_DEFAULTS = {"genus": None, "budget": None, "tol": DEFAULT_TOL, "format": "text", "out": None}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="loopalgebra",
        description="String topology of closed surfaces: words, conjugacy classes, the Goldman bracket "
        "and the BV algebra on loop space homology.",
    )
    _add_globals(p, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def word_cmd(name: str, help: str, n: int = 1):
        s = sub.add_parser(name, help=help)
        _add_globals(s, argparse.SUPPRESS)
        for k in range(n):
            s.add_argument(f"word{k + 1}" if n > 1 else "word", help="word, e.g. 'a1 b1 A1 B1' or 'a1^2'")
        return s

    word_cmd("reduce", "Dehn-reduce a word")
    word_cmd("identity", "decide whether a word is trivial")
    word_cmd("conjugate", "decide whether two words are conjugate", 2)
    word_cmd("level", "primitive root and level of a conjugacy class")
    word_cmd("abelianize", "image in H_1 as (a1..ag, b1..bg) coordinates")
    word_cmd("bracket", "Goldman bracket of two conjugacy classes", 2)
    word_cmd("homology", "ranks of H_0, H_1, H_2 of the loop space component")
    for name, help, n in (("product", "string product of two elements", 2),
                          ("delta", "BV operator of an element", 1),
                          ("coproduct", "string coproduct of an element", 1)):
        s = sub.add_parser(name, help=help)
        _add_globals(s, argparse.SUPPRESS)
        for k in range(n):
            s.add_argument(f"element{k + 1}" if n > 1 else "element",
                           help="element, e.g. 'E', '2*[a1^2] - ~[a1 b1]', '<b1>', or JSON")
    s = sub.add_parser("render", help="SVG of the closed geodesics in the Poincare disk")
    _add_globals(s, argparse.SUPPRESS)
    s.add_argument("words", nargs="+", help="one word per geodesic")
    s.add_argument("--size", type=_positive_int, default=600, help="picture size in pixels")
    return p


def _emit(args, text: str, data) -> str:
    if args.format == "json":
        if isinstance(data, str):
            return data
        return json.dumps(data, separators=(",", ":"))
    return text


def _run(args) -> str:
    G = SurfaceGroup(args.genus)
    cmd = args.command
    if cmd == "reduce":
        w = G.dehn_reduce(G.parse(args.word))
        return _emit(args, G.format(w), {"word": G.format(w)})
    if cmd == "identity":
        ok = G.is_identity(G.parse(args.word))
        return _emit(args, str(ok).lower(), {"identity": ok})
    if cmd == "conjugate":
        ok = G.are_conjugate(G.parse(args.word1), G.parse(args.word2))
        return _emit(args, str(ok).lower(), {"conjugate": ok})
    if cmd == "level":
        root, lev = G.primitive_root(G.parse(args.word))
        return _emit(args, f"root={G.format(root)} level={lev}", {"root": G.format(root), "level": lev})
    if cmd == "abelianize":
        v = G.abelianize(G.parse(args.word))
        return _emit(args, " ".join(map(str, v)), {"vector": list(v)})
    if cmd == "homology":
        c = G.canonical_class(G.parse(args.word))
        ranks = component_homology(c)
        text = " ".join(f"H{d}={r}" for d, r in enumerate(ranks))
        return _emit(args, text, {"class": str(c), "ranks": list(ranks)})
    if cmd == "bracket":
        rep = build_representation(args.genus, args.tol)
        c1, c2 = G.canonical_class(G.parse(args.word1)), G.canonical_class(G.parse(args.word2))
        b = goldman_bracket(c1, c2, args.budget, rep)
        return _emit(args, str(b), b.to_json())
    if cmd == "product":
        x = product(parse_element(args.element1, args.genus), parse_element(args.element2, args.genus), args.budget)
        return _emit(args, str(x), x.to_json())
    if cmd == "delta":
        x = delta(parse_element(args.element, args.genus))
        return _emit(args, str(x), x.to_json())
    if cmd == "coproduct":
        x = coproduct(parse_element(args.element, args.genus))
        return _emit(args, str(x), x.to_json())
    if cmd == "render":
        rep = build_representation(args.genus, args.tol)
        classes = [G.canonical_class(G.parse(w)) for w in args.words]
        return render_svg(classes, rep, size=args.size, budget=args.budget)
    raise _UsageError(f"unknown command {cmd!r}")  # pragma: no cover - argparse rejects it first


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    if args.genus is None:
        parser.print_usage(sys.stderr)
        print("loopalgebra: error: the following arguments are required: --genus", file=sys.stderr)
        return 2
    if args.out and args.command != "render":
        parser.print_usage(sys.stderr)
        print("loopalgebra: error: --out applies only to render", file=sys.stderr)
        return 2
    try:
        out = _run(args)
    except (WordSyntaxError, ElementSyntaxError, _UsageError) as e:
        print(f"loopalgebra: error: {e}", file=sys.stderr)
        return 2
    except (LevelUndefinedError, IntegralityError, NotHyperbolicError, RepresentationError, ValueError) as e:
        print(f"loopalgebra: error: {e}", file=sys.stderr)
        return 1
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
