"""Command-line interface: ``gcoherent <verb> <algebra> [options]``.

Exit status 0 on success, 1 when a computation or check fails, 2 on usage
errors.  The default output format comes from ``GCOHERENT_FORMAT``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import bchreal, coherent, liealg
from .latex import poly_latex
from .ring import Poly, RingError, parse_poly

FORMATS = ("plain", "latex", "json", "svg")
FORMAT_ENV = "GCOHERENT_FORMAT"
UNIT = 40          # px per unit root length
SHAFT_GAP = 6      # px between the two shafts of a double arrow


class UsageError(Exception):
    pass


class Unembeddable(ValueError):
    pass


# --- target resolution -------------------------------------------------------------

def load_algebra(target: str, constants: str = "symbolic"):
    if os.path.exists(target):
        with open(target, encoding="utf-8") as fh:
            text = fh.read()
        if text.lstrip().startswith("{"):
            text = json.loads(text)["definition"]
        return liealg.read_definition(text)
    try:
        return liealg.lookup(target, constants)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"unknown algebra {target!r}; see 'gcoherent list'") from exc


# --- rendering helpers --------------------------------------------------------------

def _poly_out(p: Poly, fmt: str) -> str:
    if fmt == "latex":
        return poly_latex(p)
    if fmt == "json":
        return json.dumps({"text": p.to_text(), "tree": p.to_tree()}, indent=2)
    return p.to_text()


def _report_out(rep, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"passed": rep.passed,
                           "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                                      for c in rep.checks]}, indent=2)
    return rep.to_text()


def _op_symbol(name: str) -> tuple:
    kind, label = name[0], name[2:-1]
    return {"e": "E", "f": "F", "h": "H", "x": "X"}[kind], label


# --- verbs ---------------------------------------------------------------------------

def cmd_list(args, fmt):
    names = liealg.catalog()
    if fmt == "json":
        return json.dumps(list(names), indent=2), 0
    return "\n".join(names), 0


def cmd_build(args, fmt):
    g = load_algebra(args.target, args.constants)
    text = liealg.write_definition(g)
    if fmt == "json":
        return json.dumps({"name": g.name,
                           "basis": [{"name": x.name, "root": list(x.root)} for x in g.basis],
                           "definition": text}, indent=2), 0
    if fmt == "latex":
        rows = []
        for a in range(g.dim):
            for b in range(a + 1, g.dim):
                br = g.bracket_basis(a, b)
                if br:
                    rhs = " + ".join(f"\\left({poly_latex(br[i])}\\right) {g.label(i)}"
                                     for i in sorted(br))
                    rows.append(f"[{g.label(a)}, {g.label(b)}] = {rhs}")
        return " \\\\\n".join(rows), 0
    return text.rstrip("\n"), 0


def cmd_validate(args, fmt):
    g = load_algebra(args.target, args.constants)
    rep = liealg.validate(g)
    return _report_out(rep, fmt), 0 if rep.passed else 1


def cmd_coherent(args, fmt):
    g = load_algebra(args.target, args.constants)
    st = coherent.coherent_state(g, 0, _vac(g, args))
    return _state_out(st, fmt), 0


def cmd_dual(args, fmt):
    g = load_algebra(args.target, args.constants)
    st = coherent.dual_state(g, args.convention, 0, _vac(g, args))
    return _state_out(st, fmt, dual=True), 0


def _vac(g, args):
    return coherent.vacuum(g, require_cyclic=not args.allow_noncyclic)


def _state_out(st, fmt, dual=False):
    if fmt == "latex":
        return st.to_latex(dual)
    if fmt == "json":
        return st.to_json()
    return st.to_text()


def cmd_norm(args, fmt):
    g = load_algebra(args.target, args.constants)
    p = coherent.norm_poly(g, args.convention, _vac(g, args))
    return _poly_out(p, fmt), 0


def cmd_oplus(args, fmt):
    g = load_algebra(args.target, args.constants)
    res = bchreal.oplus(g)
    if fmt == "json":
        return res.to_json(), 0
    if fmt == "latex":
        rows = r" \\ ".join(poly_latex(v) for v in res.values.values())
        return (r"\zeta\oplus\zeta' = \left(\begin{array}{c} " + rows
                + r" \end{array}\right)"), 0
    return res.to_text(), 0


def cmd_realize(args, fmt):
    g = load_algebra(args.target, args.constants)
    ops = bchreal.realize(g, args.method, _vac(g, args))
    if fmt == "json":
        return json.dumps({k: v.to_json() for k, v in ops.items()}, indent=2), 0
    rows = []
    for name, op in ops.items():
        sym, lbl = _op_symbol(name)
        if fmt == "latex":
            rows.append(f"{sym}_{{{lbl}}} = {op.to_latex()}")
        else:
            rows.append(f"{sym}[{lbl}] = {op.to_text()}")
    return ("\\\\\n" if fmt == "latex" else "\n").join(rows), 0


def cmd_check(args, fmt):
    g = load_algebra(args.target, args.constants)
    rep = bchreal.check_realization(g, vac=_vac(g, args))
    return _report_out(rep, fmt), 0 if rep.passed else 1


def cmd_vertex(args, fmt):
    g = load_algebra(args.target, args.constants)
    if args.root is None:
        raise UsageError("vertex needs --root")
    if args.root not in [l for l, _ in g.positive]:
        raise UsageError(f"{args.root!r} is not a raising label of {g.name}")
    zeta = {l: Poly() for l, _ in g.positive} if args.at_zero else None
    p = bchreal.vertex_matrix_element(g, args.root, zeta=zeta,
                                      convention=args.convention, path=args.path)
    return _poly_out(p, fmt), 0


def cmd_loop(args, fmt):
    g = load_algebra(args.target, args.constants)
    level = parse_poly(args.level) if args.level is not None else None
    p = coherent.km_norm_functional(g, args.modes, level, args.convention, _vac(g, args))
    return _poly_out(p, fmt), 0


def cmd_diagram(args, fmt):
    g = load_algebra(args.target, args.constants)
    return diagram(g), 0


VERBS = {
    "list": cmd_list, "build": cmd_build, "validate": cmd_validate,
    "coherent": cmd_coherent, "dual": cmd_dual, "norm": cmd_norm,
    "oplus": cmd_oplus, "realize": cmd_realize, "check": cmd_check,
    "vertex": cmd_vertex, "loop": cmd_loop, "diagram": cmd_diagram,
}


# --- root diagrams -----------------------------------------------------------------

def _embedding(g):
    """Map lattice coordinates to the plane, shortest root of unit length."""
    dims = {len(x.root) for x in g.basis}
    if len(dims) != 1:
        raise Unembeddable("roots of mixed dimension")
    d = dims.pop()
    if d > 2:
        raise Unembeddable(f"root lattice of rank {d} cannot be drawn in the plane")
    system = getattr(g, "system", None)
    if d == 1:
        # pseudo roots point up, a genuine rank-1 system lies horizontally
        basis = [(1.0, 0.0)] if system is not None else [(0.0, 1.0)]
    elif system is not None and system.rank == 2:
        (g11, g12), (_, g22) = system.gram
        a = math.sqrt(g11)
        basis = [(a, 0.0), (g12 / a, math.sqrt(g22 - g12 * g12 / g11))]
    else:
        basis = [(1.0, 0.0), (0.0, 1.0)]

    def embed(root):
        return (sum(c * b[0] for c, b in zip(root, basis)),
                sum(c * b[1] for c, b in zip(root, basis)))

    lengths = [math.hypot(*embed(x.root)) for x in g.basis if any(x.root)]
    unit = min(lengths) if lengths else 1.0
    return lambda root: tuple(v / unit for v in embed(root))


def _stack_tail(root, present):
    """Tail of a pseudo-root arrow: ``(k-1) u`` when ``root = k u`` and ``u`` is drawn."""
    for k in range(len(present) + 1, 1, -1):
        if all(c % k == 0 for c in root):
            u = tuple(c // k for c in root)
            if u in present:
                return tuple((k - 1) * c for c in u)
    return None


def diagram(g) -> str:
    """SVG root picture: circle for g0, one arrow per root space."""
    emb = _embedding(g)
    mult = {}
    for x in g.basis:
        mult[x.root] = mult.get(x.root, 0) + 1
    zero = tuple(0 for _ in g.basis[0].root)
    roots = sorted((r for r in mult if r != zero))
    present = set(roots)
    pts = [emb(r) for r in roots] + [(0.0, 0.0)]
    extent = max(max(abs(x), abs(y)) for x, y in pts) + 0.6
    half = extent * UNIT
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" '
           f'viewBox="{_f(-half)} {_f(-half)} {_f(2 * half)} {_f(2 * half)}" '
           f'class="root-diagram" data-algebra="{_esc(g.name)}">']
    if zero in mult:
        out.append(f'<circle class="g0" cx="0" cy="0" r="{_f(UNIT * 0.2)}" '
                   f'fill="none" stroke="black"/>')
        if mult[zero] > 1:
            out.append(f'<text class="dim" x="{_f(UNIT * 0.22)}" y="{_f(UNIT * 0.35)}" '
                       f'font-size="10">{mult[zero]}</text>')
    for r in roots:
        tail_root = _stack_tail(r, present)
        tail = emb(tail_root) if tail_root is not None else (0.0, 0.0)
        head = emb(r)
        m = mult[r]
        cls = "single" if m == 1 else "double" if m == 2 else "multi"
        if tail_root is not None:
            cls += " stacked"
        out.append(_arrow(tail, head, cls, m, _root_text(g, r)))
    out.append("</svg>")
    return "\n".join(out)


def _root_text(g, r):
    from .roots import root_name
    return root_name(r, g.root_names)


def _arrow(tail, head, cls, m, label):
    x0, y0 = tail[0] * UNIT, -tail[1] * UNIT
    x1, y1 = head[0] * UNIT, -head[1] * UNIT
    dx, dy = x1 - x0, y1 - y0
    n = math.hypot(dx, dy)
    ux, uy = dx / n, dy / n
    px, py = -uy, ux
    inset = UNIT * 0.2 if tail == (0.0, 0.0) else 0.0
    sx, sy = x0 + ux * inset, y0 + uy * inset
    parts = [f'<g class="arrow {cls}" data-root="{_esc(label)}">']
    offsets = (0.0,) if m == 1 else (-SHAFT_GAP / 2, SHAFT_GAP / 2)
    hl = 8.0
    for o in offsets:
        parts.append(f'<line class="shaft" x1="{_f(sx + px * o)}" y1="{_f(sy + py * o)}" '
                     f'x2="{_f(x1 - ux * hl + px * o)}" y2="{_f(y1 - uy * hl + py * o)}" '
                     f'stroke="black"/>')
    w = 4.0 + (SHAFT_GAP / 2 if m > 1 else 0.0)
    pts = [(x1, y1), (x1 - ux * hl + px * w, y1 - uy * hl + py * w),
           (x1 - ux * hl - px * w, y1 - uy * hl - py * w)]
    parts.append('<polygon class="head" points="'
                 + " ".join(f"{_f(a)},{_f(b)}" for a, b in pts) + '"/>')
    if m > 2:
        parts.append(f'<text class="mult" x="{_f(x1 + px * 8)}" y="{_f(y1 + py * 8 + 4)}" '
                     f'font-size="9">{m}</text>')
    parts.append("</g>")
    return "".join(parts)


def _f(x: float) -> str:
    s = f"{x:.2f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _esc(s: str) -> str:
    return s.replace("&", "&amp;").replace('"', "&quot;").replace("<", "&lt;")


# --- entry point ------------------------------------------------------------------------

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--output", "-o", default=None, help="write to a file")
    const = common.add_mutually_exclusive_group()
    const.add_argument("--symbolic", dest="constants", action="store_const",
                       const="symbolic", help="symbolic extraspecial constants (default)")
    const.add_argument("--numeric", dest="constants", action="store_const",
                       const="numeric", help="extraspecial signs fixed to +1")
    common.set_defaults(constants="symbolic")
    common.add_argument("--convention", choices=coherent.CONVENTIONS, default="chevalley")
    common.add_argument("--allow-noncyclic", action="store_true",
                        help="accept a vacuum that does not generate the module")

    p = argparse.ArgumentParser(prog="gcoherent",
                                description="Generalised coherent states for Lie algebras.")
    sub = p.add_subparsers(dest="verb", required=True)
    sub.add_parser("list", parents=[common], help="cataloged algebras")
    for verb, text in (("build", "print the definition file"),
                       ("validate", "antisymmetry, Jacobi and grading checks"),
                       ("coherent", "coherent state |zeta>"),
                       ("dual", "dual state <zeta|"),
                       ("norm", "p(zetabar, zeta') = <zeta|zeta'>"),
                       ("oplus", "deformed addition zeta (+) zeta'"),
                       ("realize", "differential operator realization"),
                       ("check", "verify the realization"),
                       ("vertex", "vertex operator matrix element"),
                       ("loop", "loop/affine norm functional p_k"),
                       ("diagram", "SVG root diagram")):
        sp = sub.add_parser(verb, parents=[common], help=text)
        sp.add_argument("target", help="catalog name or definition file")
        if verb == "realize":
            sp.add_argument("--method", choices=("closed_form", "solver"), default="closed_form")
        if verb == "vertex":
            sp.add_argument("--root", default=None)
            sp.add_argument("--at-zero", action="store_true", help="set zeta = 0")
            sp.add_argument("--path", choices=("oplus", "direct", "symmetric"), default="oplus")
        if verb == "loop":
            sp.add_argument("--modes", "-M", type=int, default=1)
            sp.add_argument("--level", default=None, help="level k (default: symbol k)")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    fmt = args.format or os.environ.get(FORMAT_ENV) or "plain"
    if fmt not in FORMATS:
        print(f"error: unknown format {fmt!r} in {FORMAT_ENV}", file=stderr)
        return 2
    if args.verb == "diagram":
        fmt = "svg"
    elif fmt == "svg":
        print("error: svg output is only available for 'diagram'", file=stderr)
        return 2
    try:
        text, status = VERBS[args.verb](args, fmt)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (RingError, ValueError, KeyError, ArithmeticError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stdout)
    if status:
        rep_fail = [ln for ln in text.splitlines() if ln.startswith("FAIL")]
        for ln in rep_fail:
            print(f"failed: {ln[5:]}", file=stderr)
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
