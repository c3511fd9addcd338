"""Exact scalar and polynomial arithmetic.

Everything downstream lives in one commutative ring: polynomials with
rational coefficients in two families of variables,

* symbolic constants (structure constants ``N[a,b]``, inner products
  ``kappa[a,b]``, weights ``lambda[i]``, user scalars such as the level
  ``k``, and the imaginary unit ``I``), and
* coordinates (``zeta[a]``, ``zetabar[a]``, primed copies, the formal
  deformation parameter ``t`` and the loop variable ``z``).

A constant may carry a *square relation* ``x**2 == c`` with ``c`` rational.
Chevalley structure constants satisfy ``N**2 == (p+1)**2`` once a sign
convention is fixed, and ``I**2 == -1``; reducing exponents modulo the
relation keeps a canonical form without any Groebner machinery.

Only the loop variable ``z`` may carry negative exponents.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from math import comb

__all__ = [
    "Var",
    "Poly",
    "const",
    "var",
    "zeta",
    "bernoulli",
    "parse_poly",
    "poly_from_tree",
    "RingError",
]


class RingError(ArithmeticError):
    pass


# kind -> (rank in term order, is_coordinate)
KINDS = {
    "I": (0, False),
    "N": (1, False),
    "kappa": (2, False),
    "lambda": (3, False),
    "sym": (4, False),
    "zeta": (10, True),
    "zetabar": (11, True),
    "zetap": (12, True),
    "zetabarp": (13, True),
    "zetapp": (14, True),
    "zetabarpp": (15, True),
    "t": (20, True),
    "z": (30, True),
}

_LABEL_RE = re.compile(r"^[^\[\]\s\*\^]*$")


class Var:
    """An interned ring variable identified by ``(kind, label)``.

    Two calls with the same kind and label return the same object, so
    identity comparison is structural equality.
    """

    __slots__ = ("kind", "label", "square", "index", "sort_key", "__weakref__")
    _registry: dict[tuple[str, str], "Var"] = {}
    _all: list["Var"] = []

    def __new__(cls, kind: str, label: str = "", square=None):
        if kind not in KINDS:
            raise ValueError(f"unknown variable kind {kind!r}")
        label = str(label)
        if not _LABEL_RE.match(label):
            raise ValueError(f"illegal character in label {label!r}")
        key = (kind, label)
        sq = None if square is None else Fraction(square)
        if sq is not None and KINDS[kind][1]:
            raise ValueError("square relations are only allowed on constants")
        obj = cls._registry.get(key)
        if obj is not None:
            if sq is not None and obj.square != sq:
                if obj.square is None:
                    raise RingError(
                        f"{obj} already in use without a square relation")
                raise RingError(
                    f"conflicting square relation for {obj}: {obj.square} vs {sq}")
            return obj
        obj = object.__new__(cls)
        obj.kind = kind
        obj.label = label
        obj.square = sq
        obj.index = len(cls._all)
        obj.sort_key = (KINDS[kind][0], _label_key(label))
        cls._registry[key] = obj
        cls._all.append(obj)
        return obj

    @property
    def is_coordinate(self) -> bool:
        return KINDS[self.kind][1]

    def __repr__(self):
        return self.token()

    def token(self) -> str:
        if self.kind in ("t", "z", "I") and not self.label:
            return self.kind
        if self.kind == "sym":
            return self.label
        return f"{self.kind}[{self.label}]"

    def __reduce__(self):
        return (Var, (self.kind, self.label, self.square))

    def __lt__(self, other):
        return self.sort_key < other.sort_key


def _label_key(label: str):
    # numbers sort numerically inside labels so zeta[2] < zeta[10]
    parts = re.split(r"(-?\d+)", label)
    return tuple((0, int(p), "") if re.fullmatch(r"-?\d+", p) else (1, 0, p)
                 for p in parts if p)


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


def _mono_mul(a: tuple, b: tuple):
    """Product of two monomials -> (rational factor, monomial)."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    factor = 1
    out = []
    i = j = 0
    all_vars = Var._all
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        if va < vb:
            out.append(a[i])
            i += 1
        elif vb < va:
            out.append(b[j])
            j += 1
        else:
            e = ea + eb
            sq = all_vars[va].square
            if sq is not None and e >= 2:
                factor *= sq ** (e // 2)
                e %= 2
            if e:
                out.append((va, e))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return factor, tuple(out)


class Poly:
    """Immutable multivariate polynomial with rational coefficients.

    ``terms`` maps a monomial (tuple of ``(var_index, exponent)`` pairs,
    sorted by var index) to a nonzero ``Fraction``.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            c = _as_fraction(terms)
            terms = {(): c} if c else {}
        self.terms = terms
        self._hash = None

    # --- construction helpers -------------------------------------------
    @classmethod
    def _clean(cls, terms: dict) -> "Poly":
        return cls({m: c for m, c in terms.items() if c})

    @classmethod
    def monomial(cls, v: Var, exp: int = 1, coeff=1) -> "Poly":
        if exp < 0 and v.kind != "z":
            raise RingError(f"negative exponent on {v}")
        if exp == 0:
            return cls(coeff)
        factor = 1
        if v.square is not None and exp >= 2:
            factor = v.square ** (exp // 2)
            exp %= 2
            if exp == 0:
                return cls(_as_fraction(coeff) * factor)
        c = _as_fraction(coeff) * factor
        return cls({((v.index, exp),): c} if c else {})

    # --- basic protocol -------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({(): Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"Poly({self.to_text()!r})"

    def __str__(self):
        return self.to_text()

    # --- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly()
            return Poly({m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Poly()
        if len(other.terms) == 1 and () in other.terms:
            return self * other.terms[()]
        if len(self.terms) == 1 and () in self.terms:
            return other * self.terms[()]
        out: dict = {}
        get = out.get
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                f, m = _mono_mul(ma, mb)
                v = get(m, 0) + ca * cb * f
                out[m] = v
        return Poly._clean(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division of polynomial by zero")
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Poly):
            return self * other.unit_inverse()
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.unit_inverse() ** (-n)
        result = Poly(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # --- inspection -----------------------------------------------------
    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def variables(self) -> set:
        return {Var._all[i] for m in self.terms for i, _ in m}

    def is_unit(self) -> bool:
        try:
            self.unit_inverse()
        except RingError:
            return False
        return True

    def unit_inverse(self) -> "Poly":
        """Inverse of a unit: a rational times a product of square-relation
        constants (and ``z`` powers)."""
        if len(self.terms) != 1:
            raise RingError(f"{self} is not a unit")
        (m, c), = self.terms.items()
        inv = Poly(Fraction(1) / c)
        for i, e in m:
            v = Var._all[i]
            if v.kind == "z":
                inv = inv * Poly.monomial(v, -e)
            elif v.square is not None and v.square != 0:
                # v**-1 == v / square
                inv = inv * (Poly.monomial(v, e) * (Fraction(1) / v.square ** e))
            else:
                raise RingError(f"{self} is not a unit")
        return inv

    def degree(self, v: Var | None = None) -> int:
        if not self.terms:
            return -1
        if v is None:
            return max(sum(e for _, e in m) for m in self.terms)
        return max((dict(m).get(v.index, 0) for m in self.terms), default=0)

    def coord_degree(self) -> int:
        """Total degree in coordinate variables only."""
        if not self.terms:
            return -1
        allv = Var._all
        return max(sum(e for i, e in m if allv[i].is_coordinate)
                   for m in self.terms)

    def min_degree(self, v: Var) -> int:
        return min((dict(m).get(v.index, 0) for m in self.terms), default=0)

    def coeff(self, v: Var, exp: int) -> "Poly":
        """Coefficient of ``v**exp`` (as a polynomial in the other variables)."""
        out = {}
        idx = v.index
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(idx, 0) == exp:
                d.pop(idx, None)
                out[tuple(sorted(d.items()))] = c
        return Poly(out)

    def split(self, is_coord=None):
        """Split into ``{coordinate monomial: constant-ring coefficient}``."""
        if is_coord is None:
            def is_coord(i):
                return Var._all[i].is_coordinate
        out: dict = {}
        for m, c in self.terms.items():
            cm = tuple(p for p in m if is_coord(p[0]))
            rm = tuple(p for p in m if not is_coord(p[0]))
            out.setdefault(cm, {})[rm] = c
        return {k: Poly(v) for k, v in out.items()}

    # --- maps -----------------------------------------------------------
    def diff(self, v: Var) -> "Poly":
        idx = v.index
        out: dict = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(idx, 0)
            if e == 0:
                continue
            if e == 1:
                del d[idx]
            else:
                d[idx] = e - 1
            nm = tuple(sorted(d.items()))
            out[nm] = out.get(nm, 0) + c * e
        return Poly._clean(out)

    def substitute(self, bindings: dict) -> "Poly":
        """Simultaneous substitution ``{Var: Poly}``; unbound variables stay."""
        if not bindings:
            return self
        bind = {v.index: (p if isinstance(p, Poly) else Poly(p))
                for v, p in bindings.items()}
        cache: dict = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                cache[key] = bind[i] ** e
            return cache[key]

        result = Poly()
        acc: dict = {}
        for m, c in self.terms.items():
            rest = tuple(p for p in m if p[0] not in bind)
            term = Poly({rest: c})
            for i, e in m:
                if i in bind:
                    term = term * power(i, e)
                    if not term:
                        break
            for tm, tc in term.terms.items():
                acc[tm] = acc.get(tm, 0) + tc
        result = Poly._clean(acc)
        return result

    def conj(self) -> "Poly":
        """Formal conjugation: constants are real except ``I``; coordinates
        map to their barred partners (``zeta <-> zetabar``, primes kept)."""
        pairs = {"zeta": "zetabar", "zetabar": "zeta", "zetap": "zetabarp",
                 "zetabarp": "zetap", "zetapp": "zetabarpp",
                 "zetabarpp": "zetapp"}
        bind = {}
        for v in self.variables():
            if v.kind == "I":
                bind[v] = -Poly.monomial(v)
            elif v.kind in pairs:
                bind[v] = Poly.monomial(Var(pairs[v.kind], v.label))
            elif v.kind == "z":
                # |z| = 1 on the circle
                bind[v] = Poly.monomial(v, -1)
        return self.substitute(bind)

    def evaluate(self, values: dict) -> Fraction:
        p = self.substitute(values)
        if not p.is_constant():
            raise RingError(f"unbound variables remain: {sorted(p.variables())}")
        return p.constant_term()

    def exact_divide(self, other: "Poly") -> "Poly":
        """Exact quotient ``self / other``; raises if not divisible."""
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        if other.is_unit():
            return self * other.unit_inverse()
        if any(Var._all[i].square is not None for m in other.terms for i, _ in m):
            raise RingError("exact division by a non-unit over a quotient ring")
        rem = self
        quot: dict = {}
        lead_m, lead_c = _leading(other)
        while rem:
            m, c = _leading(rem)
            qm = _mono_div(m, lead_m)
            if qm is None:
                raise RingError(f"{self} is not divisible by {other}")
            qc = c / lead_c
            quot[qm] = quot.get(qm, 0) + qc
            rem = rem - Poly({qm: qc}) * other
        return Poly._clean(quot)

    # --- serialization --------------------------------------------------
    def sorted_terms(self):
        """Terms in graded lexicographic order (constant term first)."""
        allv = Var._all

        def key(item):
            m, _ = item
            vs = [(allv[i].sort_key, -e) for i, e in m]
            vs.sort()
            return (sum(abs(e) for _, e in m), vs)

        return sorted(self.terms.items(), key=key)

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            factors = _mono_factors(m)
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not factors:
                body = str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = str(a) + "*" + "*".join(factors)
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def to_tree(self) -> list:
        tree = []
        for m, c in self.sorted_terms():
            tree.append({
                "coeff": str(c),
                "factors": [
                    [_var_tree(Var._all[i]), e] for i, e in _sorted_mono(m)],
            })
        return tree

    def to_latex(self, names=None) -> str:
        from .latex import poly_latex
        return poly_latex(self, names)


def _sorted_mono(m):
    allv = Var._all
    return sorted(m, key=lambda p: allv[p[0]].sort_key)


def _mono_factors(m):
    out = []
    for i, e in _sorted_mono(m):
        tok = Var._all[i].token()
        out.append(tok if e == 1 else f"{tok}^{e}")
    return out


def _var_tree(v: Var) -> dict:
    d = {"kind": v.kind, "label": v.label}
    if v.square is not None:
        d["square"] = str(v.square)
    return d


def _leading(p: Poly):
    allv = Var._all

    def key(item):
        m, _ = item
        return (sum(e for _, e in m),
                sorted(((allv[i].sort_key, e) for i, e in m), reverse=True))

    return max(p.terms.items(), key=key)


def _mono_div(a, b):
    da = dict(a)
    for i, e in b:
        if da.get(i, 0) < e:
            return None
        da[i] -= e
        if da[i] == 0:
            del da[i]
    return tuple(sorted(da.items()))


# --- convenience constructors ----------------------------------------------

def var(kind: str, label: str = "", square=None) -> Poly:
    return Poly.monomial(Var(kind, label, square))


def const(value) -> Poly:
    return Poly(_as_fraction(value))


def zeta(label: str, kind: str = "zeta") -> Poly:
    return Poly.monomial(Var(kind, label))


# --- parsing ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z_][A-Za-z_0-9]*(?:\[[^\]]*\])?)"
    r"|(?P<op>[-+*^()]))")


def parse_poly(text: str) -> Poly:
    """Parse the canonical text form produced by :meth:`Poly.to_text`.

    Also accepts parentheses and integer powers so hand-written fixtures
    can be entered naturally.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN_RE.match(text, pos)
        if not mt or mt.end() == pos:
            raise ValueError(f"cannot parse polynomial near {text[pos:]!r}")
        pos = mt.end()
        if mt.group("num"):
            tokens.append(("num", mt.group("num")))
        elif mt.group("var"):
            tokens.append(("var", mt.group("var")))
        elif mt.group("op"):
            tokens.append(("op", mt.group("op")))
    tokens.append(("end", ""))
    parser = _Parser(tokens)
    p = parser.expr()
    if parser.peek() != ("end", ""):
        raise ValueError(f"trailing input in {text!r}")
    return p


def _var_from_token(tok: str) -> Var:
    if "[" in tok:
        kind, label = tok[:-1].split("[", 1)
        if kind not in KINDS:
            raise ValueError(f"unknown variable kind in {tok!r}")
        key = (kind, label)
        return Var._registry.get(key) or Var(kind, label)
    if tok in ("t", "z", "I"):
        if tok == "I":
            return Var("I", "", -1)
        return Var(tok, "")
    return Var._registry.get(("sym", tok)) or Var("sym", tok)


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expr(self):
        sign = 1
        if self.peek() == ("op", "-"):
            self.take()
            sign = -1
        elif self.peek() == ("op", "+"):
            self.take()
        result = self.term() * sign
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self):
        result = self.factor()
        while self.peek() == ("op", "*"):
            self.take()
            result = result * self.factor()
        return result

    def factor(self):
        kind, val = self.take()
        if kind == "num":
            base = Poly(Fraction(val))
        elif kind == "var":
            base = Poly.monomial(_var_from_token(val))
        elif (kind, val) == ("op", "("):
            base = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
        elif (kind, val) == ("op", "-"):
            return -self.factor()
        else:
            raise ValueError(f"unexpected token {val!r}")
        if self.peek() == ("op", "^"):
            self.take()
            neg = False
            if self.peek() == ("op", "-"):
                self.take()
                neg = True
            k, n = self.take()
            if k != "num":
                raise ValueError("exponent must be an integer")
            e = int(n) * (-1 if neg else 1)
            if e < 0:
                if kind != "var":
                    raise ValueError("negative powers only on variables")
                return Poly.monomial(_var_from_token(val), e)
            base = base ** e
        return base


def poly_from_tree(tree: list) -> Poly:
    acc: dict = {}
    for term in tree:
        p = Poly(Fraction(term["coeff"]))
        for vt, e in term["factors"]:
            v = Var(vt["kind"], vt["label"], vt.get("square"))
            p = p * Poly.monomial(v, e)
        for m, c in p.terms.items():
            acc[m] = acc.get(m, 0) + c
    return Poly._clean(acc)


# --- Bernoulli numbers -----------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """Bernoulli number with ``B_1 = -1/2``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return Fraction(1)
    if n > 1 and n % 2:
        return Fraction(0)
    # sum_{k=0}^{n} C(n+1, k) B_k = 0
    s = sum(comb(n + 1, k) * bernoulli(k) for k in range(n))
    return -s / (n + 1)
