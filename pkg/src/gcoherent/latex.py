"""LaTeX rendering in the usual notation: kets, ``N_{a,b}``, primed/barred zetas."""

from __future__ import annotations

from fractions import Fraction

_COORD = {
    "zeta": r"\zeta_{%s}",
    "zetabar": r"\bar{\zeta}_{%s}",
    "zetap": r"\zeta'_{%s}",
    "zetabarp": r"\bar{\zeta}'_{%s}",
    "zetapp": r"\zeta''_{%s}",
    "zetabarpp": r"\bar{\zeta}''_{%s}",
}


def var_latex(v) -> str:
    label = v.label
    if v.kind == "N":
        # drop the series prefix used to keep magnitudes apart
        label = label.split(":", 1)[-1]
        return r"N_{%s}" % label
    if v.kind in _COORD:
        if "@" in label:
            root, mode = label.split("@", 1)
            return _COORD[v.kind] % f"{root},{mode}"
        return _COORD[v.kind] % label
    if v.kind == "lambda":
        return r"\lambda_{%s}" % label
    if v.kind == "kappa":
        return r"\kappa_{%s}" % label
    if v.kind == "I":
        return "i"
    if v.kind in ("t", "z"):
        return v.kind
    return label


def _power(v, e: int) -> str:
    base = var_latex(v)
    if e == 1:
        return base
    if "'" in base and v.kind in _COORD:
        # zeta'^2 reads badly; brace the base
        base = "{" + base + "}"
    return f"{base}^{{{e}}}"


def _coeff(c: Fraction, bare: bool) -> str:
    c = abs(c)
    if c == 1 and not bare:
        return ""
    if c.denominator == 1:
        return str(c.numerator)
    return r"\frac{%d}{%d}" % (c.numerator, c.denominator)


def poly_latex(p, names=None) -> str:
    from .ring import Var, _sorted_mono
    terms = p.sorted_terms()
    if not terms:
        return "0"
    out = []
    for k, (mono, c) in enumerate(terms):
        factors = " ".join(_power(Var._all[i], e) for i, e in _sorted_mono(mono))
        body = _coeff(c, bare=not factors) + (" " if factors and _coeff(c, False) else "") + factors
        sign = "-" if c < 0 else "+"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append(f" {sign} {body}")
    return "".join(out)


def ket(label) -> str:
    return r"|%s\rangle" % label


def bra(label) -> str:
    return r"\langle %s|" % label


def state_latex(components, labels, central=None, central_label="c", dual=False) -> str:
    """``sum_k a_k |k>`` with 1-based ket labels."""
    parts = []
    for i, (c, lbl) in enumerate(zip(components, labels)):
        if not c:
            continue
        k = bra(lbl) if dual else ket(lbl)
        body = poly_latex(c)
        if body == "1":
            parts.append(k)
        elif len(c.terms) > 1:
            parts.append(f"\\left({body}\\right){k}")
        else:
            parts.append(f"{body}{k}")
    if central is not None and central:
        k = bra(central_label) if dual else ket(central_label)
        parts.append(f"\\left({poly_latex(central)}\\right){k}")
    if not parts:
        return "0"
    s = parts[0]
    for p in parts[1:]:
        s += " - " + p[1:] if p.startswith("-") else " + " + p
    return s
