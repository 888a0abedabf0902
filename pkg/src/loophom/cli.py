"""Command line interface: ``loophom <subcommand> ...``.

Subcommands: normalize, basis, steenrod, pi0, atlas, desusp, verify.
Exit status is 0 on success and nonzero on any error or failed check.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import atlas, checks, desusp, qsk
from .core import Element, LoopHomError, PrimeContext, Pi0Spec
from .dyer_lashof import FreeRAlgebra, SpacePresentation, normalize
from .expr import parse_expression
from .steenrod import a_annihilated_primitives, sq_act


def _seq(text: str) -> tuple[int, ...]:
    text = text.strip().strip("()")
    return tuple(int(t) for t in text.split(",") if t.strip()) if text else ()


def _pi0_from_arg(text: str) -> Pi0Spec:
    """``k=<k>`` selects a shipped table; a full ``pi0 k=...`` line is parsed as given."""
    text = text.strip()
    if text.startswith("pi0 "):
        return qsk.parse_pi0_line(text)
    if text.startswith("k="):
        return qsk.pi0_spec(int(text[2:]))
    raise ValueError(f"expected k=<k> or a pi0 line, got {text!r}")


def _space(name: str, path: str | None = None):
    """Atlas spaces by name, QS0, QBU on the c_J basis, or Q<atlas space>."""
    if path:
        return SpacePresentation.from_text(Path(path).read_text(encoding="utf-8"))
    if name == "QBU":
        return desusp.qbu()
    if name.startswith("Q") and name not in ("QS0",):
        return FreeRAlgebra.on_generators(atlas.load_space(name[1:]))
    return atlas.load_space(name)


def _render(e: Element, x_notation: bool) -> str:
    if x_notation and not e.is_zero and all(m.label() is None or m.label().is_zero for m, _ in e.items()):
        return qsk.to_x_notation(e).render()
    return e.render()


def _context(args):
    """Parsing context and whether to render in x-notation."""
    if getattr(args, "pi0", None):
        return qsk.context(_pi0_from_arg(args.pi0)), False
    name = getattr(args, "space", None)
    if getattr(args, "space_file", None) or (name and name != "QS0"):
        sp = _space(name, getattr(args, "space_file", None))
        ctx = sp.context() if hasattr(sp, "context") else None
        if ctx is None:
            raise ValueError(f"expressions cannot be parsed in {name}")
        return ctx, False
    return qsk.qs0_context(), True


# --------------------------------------------------------------------------
# subcommands


def cmd_normalize(args) -> int:
    ctx, xn = _context(args)
    e = normalize(parse_expression(args.expr, ctx))
    print(_render(e, xn))
    return 0


def cmd_basis(args) -> int:
    sp = _space(args.space, args.space_file)
    if args.dim is not None:
        for m in sp.basis(args.dim):
            print(m.render())
        return 0
    series = [len(sp.basis(d)) for d in range(args.max_dim + 1)] if not hasattr(sp, "poincare_series") \
        else sp.poincare_series(args.max_dim)
    print(" ".join(map(str, series)))
    return 0


def cmd_steenrod(args) -> int:
    if args.annihilated:
        sp = _space(args.annihilated)
        for d, x in a_annihilated_primitives(sp, args.max_dim):
            print(f"{d}: {x.render()}")
        return 0
    if args.r is None or args.expr is None:
        raise ValueError("steenrod needs --r and --expr, or --annihilated SPACE")
    ctx, xn = _context(args)
    print(_render(sq_act(args.r, normalize(parse_expression(args.expr, ctx))), xn))
    return 0


def cmd_pi0(args) -> int:
    spec = _pi0_from_arg(args.file_line) if args.file_line else qsk.pi0_spec(args.k)
    if args.verify_truncation:
        I, J, gamma = args.verify_truncation
        trace = qsk.verify_truncation(spec, gamma, _seq(I), _seq(J))
        print(trace.render())
        return 0
    if args.expr is None:
        print(qsk.format_pi0_line(spec))
        return 0
    e = qsk.eliminate_inverses(parse_expression(args.expr, qsk.context(spec)))
    if args.component:
        c = qsk.component(e)
        print("none" if c is None else str(c))
    else:
        print(e.render())
    return 0


def cmd_atlas(args) -> int:
    if args.x:
        print(atlas.x_class(*args.x).report())
    elif args.w:
        print(atlas.w_class(args.w[0], args.w[1], args.prime).report())
    elif args.nu is not None:
        print(atlas.nu(args.nu))
    elif args.qp is not None:
        print(atlas.q_of_p(args.qp))
    elif args.spherical is not None:
        print(",".join(map(str, sorted(atlas.spherical_dims(args.spherical)))))
    else:
        raise ValueError("atlas needs one of --x, --w, --nu, --qp, --spherical")
    return 0


def _w_spec(text: str):
    """``2,4`` names w_L with L=(2,4); ``3;4`` names w_(i,J) with i=3, J=(4,)."""
    if ";" in text:
        i, J = text.split(";", 1)
        return "iJ", _seq(J), int(i)
    return "L", _seq(text), 0


def cmd_desusp(args) -> int:
    if args.basis is not None:
        b = desusp.desusp_basis(args.basis, check_images=True)
        for d in range(1, args.basis + 1):
            gens = b.generators_in(d)
            print(f"{d}: series={b.series[d]} generators: {', '.join(map(str, gens)) or '-'}")
        if b.merges:
            for a, c in b.merges:
                print(f"merged {c} into {a}")
        return 0
    if args.decompose is not None:
        e = normalize(parse_expression(args.decompose, desusp.qbu().context()))
        print(desusp.primitive_decompose(e).render())
        return 0
    if args.w is not None:
        if args.k is None:
            raise ValueError("desusp --w needs --k")
        kind, J, i = _w_spec(args.w)
        w = desusp.w_desusp_class(kind, args.k, J, i)
        print(f"{w.name} degree={w.degree} in_image={str(w.in_j_image).lower()} note=\"{w.note}\"")
        return 0
    raise ValueError("desusp needs --basis, --decompose or --w")


def cmd_verify(args) -> int:
    if args.all:
        chosen = checks.all_checks(args.max_dim, args.seed, args.cases)
    elif args.suite:
        chosen = checks.suite(args.suite, max_dim=args.max_dim, seed=args.seed, d=args.d, cases=args.cases)
    else:
        raise ValueError(f"verify needs a suite name or --all ({', '.join(checks.SUITES)})")
    report = checks.run_checks(chosen, checks.echo(args.argv), timing=args.timing)
    out = report.render() if args.format == "report" else report.render_text()
    sys.stdout.write(out)
    if args.output:
        Path(args.output).write_text(report.render(), encoding="utf-8")
    return 0 if report.ok else 1


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def global_flags(p, suppress: bool):
        # subcommands repeat the flags without defaults so a value given before the subcommand survives
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--prime", type=int, default=d(2), help="working prime (default 2)")
        p.add_argument("--max-dim", type=int, default=d(16), help="working dimension bound (default 16)")
        p.add_argument("--seed", type=int, default=d(0), help="seed for randomized checks")
        p.add_argument("--format", choices=("text", "report"), default=d("text"))

    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, suppress=True)
    parser = argparse.ArgumentParser(prog="loophom", description="Homology of infinite loop spaces at the prime 2.")
    global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def context_flags(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--space", help="QS0 (default), QBU, an atlas space such as SO or BU")
        g.add_argument("--pi0", help="k=<k>, or a full 'pi0 k=... summands=... names=...' line")
        g.add_argument("--space-file", help="a SpacePresentation file")

    p = sub.add_parser("normalize", parents=[common], help="print the admissible normal form")
    p.add_argument("expr")
    context_flags(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("basis", parents=[common], help="monomial basis or Poincare series")
    p.add_argument("--space", default="SO")
    p.add_argument("--space-file")
    p.add_argument("--dim", type=int, help="list the basis in this dimension instead of the series")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("steenrod", parents=[common], help="dual Steenrod action")
    p.add_argument("--r", type=int)
    p.add_argument("--expr")
    p.add_argument("--annihilated", metavar="SPACE", help="list A-annihilated primitives up to --max-dim")
    context_flags(p)
    p.set_defaults(func=cmd_steenrod)

    p = sub.add_parser("pi0", parents=[common], help="component calculus on H_*QS^-k")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--file-line", help="a pi0 data line to use instead of the shipped table")
    p.add_argument("--expr")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--normalize", action="store_true", help="print the normal form (default)")
    mode.add_argument("--component", action="store_true", help="print the pi_0 component")
    mode.add_argument("--verify-truncation", nargs=3, metavar=("I", "J", "GAMMA"),
                      help="trace (Q^I[gamma_J])^(2^d) = 0; sequences as 2,1 or '' for empty")
    p.set_defaults(func=cmd_pi0)

    p = sub.add_parser("atlas", parents=[common], help="Bott-ladder predicates")
    p.add_argument("--x", nargs=2, type=int, metavar=("I", "K"))
    p.add_argument("--w", nargs=2, type=int, metavar=("I", "K"))
    p.add_argument("--nu", type=int, metavar="J")
    p.add_argument("--qp", type=int, metavar="P")
    p.add_argument("--spherical", type=int, metavar="K")
    p.set_defaults(func=cmd_atlas)

    p = sub.add_parser("desusp", parents=[common], help="H_*Q_0 Sigma^-1 BU and primitives of H_*QBU")
    p.add_argument("--basis", type=int, metavar="N")
    p.add_argument("--decompose", metavar="EXPR")
    p.add_argument("--w", metavar="SPEC", help="'2,4' for w_L, '3;4' for w_(i,J)")
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_desusp)

    p = sub.add_parser("verify", parents=[common], help="run regression suites")
    p.add_argument("suite", nargs="?", choices=checks.SUITES)
    p.add_argument("--all", action="store_true")
    p.add_argument("--d", type=int, choices=(1, 2, 3), help="restrict prop4 to one d")
    p.add_argument("--cases", type=int, default=10_000, help="randomized cases for the properties suite")
    p.add_argument("--timing", action="store_true", help="record wall-clock ms per check")
    p.add_argument("--output", help="also write the structured report here")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    try:
        PrimeContext(args.prime)
        if args.prime != 2 and args.command not in ("atlas",):
            PrimeContext(args.prime).require_two(args.command)
        return args.func(args)
    except (LoopHomError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
