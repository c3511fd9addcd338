"""Deformed addition, BCH coefficients and differential-operator realizations.

Conventions
-----------
A realization assigns to every algebra element ``x`` a first-order operator
``D_x = sum_b R_x^b(zeta) d/dzeta_b + s_x(zeta)`` with

    D_x |zeta> = rho(x) |zeta>.

Because ``D_x`` acts on the coordinates, ``x -> D_x`` reverses brackets:
``[D_x, D_y] = -D_[x,y]``.  In closed form, with ``A = sum zeta_a e_a`` and
``U = exp(-ad A) x`` split into raising, Cartan and lowering parts,

    R_x = sum_n M_n (ad A)^n U_+ ,   s_x = sum_i P^i lambda_i,

where ``U_0 = sum_i P^i h_i`` and ``M_n = (-1)^n B_n / n!``.  For ``x = e_a``
these coefficients are the right-multiplication vertex coefficients
evaluated at ``-zeta``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .coherent import (PRIMES, CoherentState, Vacuum, coherent_state, dual_state,
                       pair, vacuum, zeta_var)
from .linalg import RingMatrix, exp_apply, solve_linear, Inconsistent
from .liealg import ValidationReport
from .ring import Poly, RingError, Var, bernoulli

__all__ = [
    "bch_coeff_M",
    "bch_coeff_N",
    "oplus",
    "OplusResult",
    "LogOutsidePositivePart",
    "AmbiguousModCenter",
    "SolverInconsistent",
    "DiffOperator",
    "vertex_coefficients",
    "realize",
    "check_realization",
    "vertex_matrix_element",
    "negate",
]


class LogOutsidePositivePart(RingError):
    pass


class AmbiguousModCenter(UserWarning):
    pass


class SolverInconsistent(RingError):
    pass


# --- coefficients ------------------------------------------------------------------

def bch_coeff_M(n: int) -> Fraction:
    """``M_n = (-1)^n B_n / n!``; the Taylor coefficients of ``u/(1 - e^-u)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return (-1) ** n * bernoulli(n) / factorial(n)


def bch_coeff_N(n: int, mu: int) -> Fraction:
    """``N_n = sum_{k=0}^{n-mu} B_k / (k! (n-k)!)``."""
    if n < 1 or not 0 <= mu <= n:
        raise ValueError("need n >= 1 and 0 <= mu <= n")
    return sum((bernoulli(k) / (factorial(k) * factorial(n - k))
                for k in range(n - mu + 1)), Fraction(0))


# --- algebra-level helpers ---------------------------------------------------------------

def _express(g, vec, gens):
    """Coordinates of ``vec`` in the span of the vectors ``gens``."""
    if not gens:
        if any(vec):
            raise Inconsistent("vector outside an empty span")
        return []
    a = RingMatrix([[gv[r] for gv in gens] for r in range(g.dim)])
    sol = solve_linear(a, list(vec))
    return list(sol.x)


def split_parts(g, vec):
    """Split an algebra vector into raising / Cartan / lowering coordinates.

    Returns ``(plus, cartan, minus)`` as coordinate lists over
    ``g.positive``, ``g.cartan`` and ``g.negative``.  Components along basis
    vectors outside all three lists raise :class:`Inconsistent`.
    """
    gens = [v for _, v in g.positive] + [v for _, v in g.cartan] + [v for _, v in g.negative]
    coords = _express(g, vec, gens)
    npos, ncar = len(g.positive), len(g.cartan)
    return coords[:npos], coords[npos:npos + ncar], coords[npos + ncar:]


def _combine(g, gens, coords):
    out = [Poly()] * g.dim
    for (_, v), c in zip(gens, coords):
        if c:
            out = [o + c * x for o, x in zip(out, v)]
    return tuple(out)


def _a_vector(g, family=0, sign=1):
    out = [Poly()] * g.dim
    for lbl, vec in g.positive:
        z = zeta_var(lbl, family) * sign
        out = [o + z * x for o, x in zip(out, vec)]
    return tuple(out)


def _ad_series(g, a, x, coeff):
    """``sum_n coeff(n) (ad a)^n x`` until the nested brackets vanish."""
    out = list(x)
    term = tuple(x)
    n = 0
    while True:
        n += 1
        term = g.bracket(a, term)
        if not any(term):
            return tuple(out)
        c = coeff(n)
        if c:
            out = [o + c * t for o, t in zip(out, term)]
        if n > 4 * g.dim + 8:
            raise RingError("ad series did not terminate; A is not ad-nilpotent")


# --- deformed addition ---------------------------------------------------------------

@dataclass
class OplusResult:
    values: dict
    ambiguous: bool = False

    def __getitem__(self, k):
        return self.values[k]

    def to_text(self) -> str:
        rows = [f"{k}: {v.to_text()}" for k, v in self.values.items()]
        if self.ambiguous:
            rows.append("(ambiguous modulo the kernel of ad on n+)")
        return "\n".join(rows)

    def to_json(self) -> str:
        return json.dumps({"components": {k: v.to_text() for k, v in self.values.items()},
                           "ambiguous_mod_center": self.ambiguous}, indent=2)


def symbolic_assignment(g, family: int = 0, sign: int = 1) -> dict:
    return {lbl: zeta_var(lbl, family) * sign for lbl, _ in g.positive}


def _x_matrix(g, assign: dict) -> RingMatrix:
    m = RingMatrix.zeros(g.dim)
    for lbl, vec in g.positive:
        c = assign.get(lbl, Poly())
        if c:
            m = m + g.adjoint(vec).scale(c)
    return m


def oplus(g, zeta: dict | None = None, zetap: dict | None = None, *more) -> OplusResult:
    """``zeta (+) zeta'`` defined by ``x(zeta) x(zeta') = x(zeta (+) zeta')``.

    Assignments map raising-generator labels to ring elements; missing
    labels are zero.  Extra positional assignments are multiplied on the
    right in order.  ``log(U)`` of the product ``U`` is applied to probe
    vectors and matched against ``ad e_a`` on the same probes, adding
    probes until the coordinates are determined.  If ``ad`` is not injective
    on the raising span the kernel components are set to zero and the
    result is flagged.
    """
    if zeta is None:
        zeta = symbolic_assignment(g, 0)
    if zetap is None:
        zetap = symbolic_assignment(g, 1)
    mats = [_x_matrix(g, a) for a in (zeta, zetap) + more]
    cols = [g.adjoint(vec) for _, vec in g.positive]
    probes = [v for _, v in g.cartan] + [v for _, v in g.negative]
    probes += [g.unit(i) for i in range(g.dim)]
    rows, rhs, sol = [], [], None
    for v in probes:
        logv = _log_apply(mats, v)
        adv = [m.apply(list(v)) for m in cols]
        for r in range(g.dim):
            row = [a[r] for a in adv]
            if any(row):
                rows.append(row)
                rhs.append(logv[r])
            elif logv[r]:
                raise LogOutsidePositivePart(
                    f"log(U) has a component outside span(ad e_a) in row {r}")
        if not rows:
            continue
        try:
            sol = solve_linear(RingMatrix(rows), rhs)
        except Inconsistent as exc:
            raise LogOutsidePositivePart(str(exc)) from exc
        if sol.unique:
            break
    if sol is None:
        values = {lbl: Poly() for lbl, _ in g.positive}
        return OplusResult(values, ambiguous=bool(g.positive))
    values = {lbl: v for (lbl, _), v in zip(g.positive, sol.x)}
    return OplusResult(values, ambiguous=not sol.unique)


def _log_apply(mats, v):
    """``log(exp(m1) ... exp(mk)) v`` by the Mercator series on vectors."""
    def u_apply(w):
        for m in reversed(mats):
            w = exp_apply(m, w)
        return w

    out = [Poly()] * len(v)
    term = list(v)
    for k in range(1, len(v) + 2):
        term = [a - b for a, b in zip(u_apply(term), term)]
        if not any(term):
            return out
        c = Fraction((-1) ** (k + 1), k)
        out = [o + c * t for o, t in zip(out, term)]
    raise RingError("product of exponentials is not unipotent")


def negate(assign: dict) -> dict:
    return {k: -v for k, v in assign.items()}


# --- differential operators --------------------------------------------------------------

@dataclass(frozen=True)
class DiffOperator:
    """``sum_b coeffs[b] d/d(kind[b]) + scalar``."""

    coeffs: tuple            # ((label, Poly), ...) sorted by label order given
    scalar: Poly = field(default_factory=Poly)
    kind: str = "zeta"

    @staticmethod
    def make(coeffs: dict, scalar=None, kind="zeta") -> "DiffOperator":
        items = tuple((k, v) for k, v in coeffs.items() if v)
        return DiffOperator(items, scalar if scalar is not None else Poly(), kind)

    def coeff_dict(self) -> dict:
        return dict(self.coeffs)

    def apply(self, p: Poly) -> Poly:
        out = self.scalar * p
        for lbl, c in self.coeffs:
            out = out + c * p.diff(Var(self.kind, lbl))
        return out

    def first_order(self, p: Poly) -> Poly:
        out = Poly()
        for lbl, c in self.coeffs:
            out = out + c * p.diff(Var(self.kind, lbl))
        return out

    def apply_vector(self, vec) -> tuple:
        return tuple(self.apply(p) for p in vec)

    def __add__(self, other):
        d = self.coeff_dict()
        for k, v in other.coeffs:
            d[k] = d.get(k, Poly()) + v
        return DiffOperator.make(d, self.scalar + other.scalar, self.kind)

    def scale(self, c) -> "DiffOperator":
        return DiffOperator.make({k: v * c for k, v in self.coeffs}, self.scalar * c, self.kind)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def commutator(self, other: "DiffOperator") -> "DiffOperator":
        labels = [k for k, _ in self.coeffs] + [k for k, _ in other.coeffs
                                                  if k not in self.coeff_dict()]
        a, b = self.coeff_dict(), other.coeff_dict()
        out = {}
        for lbl in labels:
            out[lbl] = (self.first_order(b.get(lbl, Poly()))
                        - other.first_order(a.get(lbl, Poly())))
        scalar = self.first_order(other.scalar) - other.first_order(self.scalar)
        return DiffOperator.make(out, scalar, self.kind)

    def substitute(self, bindings) -> "DiffOperator":
        return DiffOperator.make({k: v.substitute(bindings) for k, v in self.coeffs},
                                 self.scalar.substitute(bindings), self.kind)

    def __eq__(self, other):
        if not isinstance(other, DiffOperator):
            return NotImplemented
        return (self.coeff_dict() == other.coeff_dict() and self.scalar == other.scalar
                and self.kind == other.kind)

    def __hash__(self):
        return hash((frozenset(self.coeffs), self.scalar, self.kind))

    def to_text(self) -> str:
        parts = []
        for lbl, c in self.coeffs:
            t = c.to_text()
            parts.append(f"{t}*d[{lbl}]" if t != "1" else f"d[{lbl}]")
        if self.scalar:
            parts.append(self.scalar.to_text())
        return " + ".join(parts) if parts else "0"

    def to_latex(self) -> str:
        from .latex import poly_latex
        parts = []
        for lbl, c in self.coeffs:
            body = poly_latex(c)
            d = r"\partial_{%s}" % lbl
            if body == "1":
                parts.append(d)
            elif body == "-1":
                parts.append("-" + d)
            elif len(c.terms) > 1:
                parts.append(f"\\left({body}\\right){d}")
            else:
                parts.append(f"{body} {d}")
        if self.scalar:
            parts.append(poly_latex(self.scalar))
        if not parts:
            return "0"
        s = parts[0]
        for p in parts[1:]:
            s += " - " + p[1:] if p.startswith("-") else " + " + p
        return s

    def to_json(self) -> dict:
        return {"derivatives": {lbl: c.to_text() for lbl, c in self.coeffs},
                "scalar": self.scalar.to_text()}


# --- realizations ---------------------------------------------------------------------------

def _lambda_map(g, vac: Vacuum) -> dict:
    return {Var("lambda", lbl): w for (lbl, _), w in zip(g.cartan, vac.weight)}


def closed_form_operator(g, x, family: int = 0) -> DiffOperator:
    """Realization of the algebra vector ``x`` from the closed form."""
    a = _a_vector(g, family)
    u = _ad_series(g, a, x, lambda n: Fraction((-1) ** n, factorial(n)))
    plus, cart, minus = split_parts(g, u)
    uplus = _combine(g, g.positive, plus)
    r = _ad_series(g, a, uplus, bch_coeff_M)
    rc, _, rest = split_parts(g, r)
    if any(rest):
        raise RingError("raising part left the raising span")
    lam = g.weight_symbols()
    scalar = Poly()
    for c, l in zip(cart, lam):
        scalar = scalar + c * l
    coeffs = {lbl: c for (lbl, _), c in zip(g.positive, rc)}
    return DiffOperator.make(coeffs, scalar, PRIMES[family][0])


def _monomials(labels, kind, max_deg):
    vs = [Var(kind, l) for l in labels]
    out = [Poly(1)]
    for d in range(1, max_deg + 1):
        for combo in itertools.combinations_with_replacement(vs, d):
            m = Poly(1)
            for v in combo:
                m = m * Poly.monomial(v)
            out.append(m)
    return out


def solver_operator(g, x, vac: Vacuum | None = None, family: int = 0,
                    max_deg: int | None = None):
    """Solve ``D_x |zeta> = rho(x) |zeta>`` for polynomial coefficients.

    Unknowns are the coefficients of ``R^b`` and the scalar term over all
    monomials up to ``max_deg`` (default: the largest component degree of
    the state plus one).  The weight is numeric here, so the scalar term is
    returned with ``lambda`` already substituted.  Returns the operator and
    the kernel dimension of the linear system.
    """
    vac = vac or vacuum(g)
    st = coherent_state(g, family, vac)
    comps = st.full()
    kind = PRIMES[family][0]
    labels = [lbl for lbl, _ in g.positive]
    deg = max(c.coord_degree() for c in comps)
    max_deg = deg + 1 if max_deg is None else max_deg
    monos = _monomials(labels, kind, max_deg)
    target = g.rep(x).apply(list(comps))
    # unknown u_(b, m): coefficient of monomial m in R^b; b = None is the scalar
    unknowns = [(b, m) for b in labels + [None] for m in monos]
    xroot = _homogeneous_root(g, x)
    if xroot is not None:
        # the coefficient of d_b carries weight root(b) - root(x)
        roots = {l: _root_of_vec(g, v) for l, v in g.positive}
        zero = tuple(0 for _ in xroot)
        unknowns = [(b, m) for b, m in unknowns
                    if _radd(_mono_root(m, roots, kind, zero), xroot)
                    == (roots[b] if b is not None else zero)]
    columns = []
    for b, m in unknowns:
        if b is None:
            columns.append([m * c for c in comps])
        else:
            v = Var(kind, b)
            columns.append([m * c.diff(v) for c in comps])
    # equations: every coordinate monomial of every component
    rows_index = {}
    entries = {}
    for j, col in enumerate(columns):
        for comp, p in enumerate(col):
            for mono, coeff in p.split().items():
                key = (comp, mono)
                if key not in rows_index:
                    rows_index[key] = len(rows_index)
                entries[(rows_index[key], j)] = coeff
    rhs_terms = {}
    for comp, p in enumerate(target):
        for mono, coeff in p.split().items():
            key = (comp, mono)
            if key not in rows_index:
                raise SolverInconsistent(
                    f"target monomial outside the operator ansatz in component {comp + 1}")
            rhs_terms[rows_index[key]] = coeff
    nrows, ncols = len(rows_index), len(unknowns)
    if not nrows:
        if any(target):
            raise SolverInconsistent("no operator ansatz reproduces a nonzero action")
        return DiffOperator.make({}, Poly(), kind), 0
    a = RingMatrix([[entries.get((i, j), Poly()) for j in range(ncols)] for i in range(nrows)])
    b = [rhs_terms.get(i, Poly()) for i in range(nrows)]
    try:
        sol = solve_linear(a, b)
    except Inconsistent as exc:
        raise SolverInconsistent(str(exc)) from exc
    coeffs = {lbl: Poly() for lbl in labels}
    scalar = Poly()
    for (bl, m), val in zip(unknowns, sol.x):
        if not val:
            continue
        if bl is None:
            scalar = scalar + val * m
        else:
            coeffs[bl] = coeffs[bl] + val * m
    return DiffOperator.make(coeffs, scalar, kind), len(sol.kernel)


def _radd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _homogeneous_root(g, x):
    roots = {g.basis[i].root for i, c in enumerate(x) if c}
    return roots.pop() if len(roots) == 1 else None


def _mono_root(m, roots, kind, zero):
    (mono, _), = m.terms.items()
    out = zero
    for i, e in mono:
        v = Var._all[i]
        if v.kind == kind:
            out = _radd(out, tuple(e * c for c in roots[v.label]))
    return out


def generator_vectors(g) -> list:
    """``(name, vector)`` for every ``e_a``, ``f_a`` and ``h_i``."""
    out = [(f"e[{l}]", v) for l, v in g.positive]
    out += [(f"f[{l}]", v) for l, v in g.negative]
    out += [(f"h[{l}]", v) for l, v in g.cartan]
    return out


def realize(g, method: str = "closed_form", vac: Vacuum | None = None,
            family: int = 0) -> dict:
    """Operators for every generator (and basis element not covered).

    ``closed_form`` keeps the weights symbolic (``lambda[i]``); ``solver``
    works with the numeric weight of the vacuum.
    """
    items = generator_vectors(g)
    covered = {tuple(v) for _, v in items}
    items += [(f"x[{g.label(i)}]", g.unit(i)) for i in range(g.dim)
              if g.unit(i) not in covered]
    if method == "closed_form":
        return {name: closed_form_operator(g, v, family) for name, v in items}
    if method == "solver":
        vac = vac or vacuum(g)
        return {name: solver_operator(g, v, vac, family)[0] for name, v in items}
    raise ValueError("method must be 'closed_form' or 'solver'")


def operator_for(g, ops: dict, vec):
    """Linear combination of basis-element operators matching ``vec``."""
    basis_ops = basis_operators(g, ops)
    out = DiffOperator.make({}, Poly())
    for i, c in enumerate(vec):
        if c:
            out = out + basis_ops[i].scale(c)
    return out


def basis_operators(g, ops: dict) -> list:
    """Operators of the individual basis vectors recovered from ``ops``."""
    items = generator_vectors(g)
    named = {name: v for name, v in items}
    for i in range(g.dim):
        named.setdefault(f"x[{g.label(i)}]", g.unit(i))
    names = [n for n in ops if n in named]
    vecs = [named[n] for n in names]
    out = []
    for i in range(g.dim):
        target = g.unit(i)
        a = RingMatrix([[v[r] for v in vecs] for r in range(g.dim)])
        sol = solve_linear(a, list(target))
        op = DiffOperator.make({}, Poly())
        for n, c in zip(names, sol.x):
            if c:
                op = op + ops[n].scale(c)
        out.append(op)
    return out


def check_realization(g, ops: dict | None = None, vac: Vacuum | None = None,
                      family: int = 0) -> ValidationReport:
    """(i) ``D_x |zeta> = rho(x) |zeta>`` with weights substituted;
    (ii) ``[D_x, D_y] = -D_[x,y]`` on all basis pairs."""
    vac = vac or vacuum(g)
    ops = ops if ops is not None else realize(g, "closed_form", vac, family)
    st = coherent_state(g, family, vac).full()
    lam = _lambda_map(g, vac)
    items = dict(generator_vectors(g))
    for i in range(g.dim):
        items.setdefault(f"x[{g.label(i)}]", g.unit(i))
    rep = ValidationReport()
    for name, op in ops.items():
        vec = items[name]
        lhs = op.substitute(lam).apply_vector(st)
        rhs = tuple(g.rep(vec).apply(list(st)))
        rep.add(f"action {name}", lhs == rhs)
    bops = basis_operators(g, ops)
    bad = []
    for a in range(g.dim):
        for b in range(a + 1, g.dim):
            lhs = bops[a].commutator(bops[b])
            br = g.bracket(g.unit(a), g.unit(b))
            rhs = DiffOperator.make({}, Poly(), bops[a].kind)
            for c, coeff in enumerate(br):
                if coeff:
                    rhs = rhs + bops[c].scale(coeff)
            if lhs != -rhs:
                bad.append(f"[{g.label(a)},{g.label(b)}]")
    rep.add("commutators reverse the brackets", not bad, ", ".join(bad))
    return rep


def operators_agree_on_state(g, op1: DiffOperator, op2: DiffOperator,
                             vac: Vacuum | None = None, family: int = 0) -> bool:
    """Equality modulo operators that annihilate ``|zeta>``."""
    vac = vac or vacuum(g)
    st = coherent_state(g, family, vac).full()
    lam = _lambda_map(g, vac)
    return op1.substitute(lam).apply_vector(st) == op2.substitute(lam).apply_vector(st)


# --- vertex coefficients as printed -----------------------------------------------------

def _root_of_vec(g, vec):
    i = next(k for k, c in enumerate(vec) if c)
    return g.basis[i].root


def vertex_coefficients(g, source, p_factorial: str = "single", family: int = 0) -> dict:
    """Right-multiplication vertex coefficients ``V_source^b`` (and ``P^i``).

    ``source`` is a raising label ``"r"``, a lowering label ``"-r"`` or a
    Cartan source ``"h_r"`` (or its index).  The series are assembled from ``M_n`` or
    ``N_n`` and nested brackets ``[e_a1, [..., [e_an, x]]]`` summed over
    ordered root words, exactly as in the closed formulas: for lowering
    sources the coefficient ``N_n`` depends on ``mu``, the number of
    innermost letters needed before the partial sum re-enters the positive
    roots.  ``p_factorial`` selects whether the ``1/n!`` of the Cartan
    coefficients ``P^i`` is applied once (``"single"``) or twice.

    Returns ``{label: Poly}`` over raising labels, plus ``("P", h)`` keys for
    lowering sources.
    """
    kind = PRIMES[family][0]
    pos = list(g.positive)
    labels = [l for l, _ in pos]
    zeros = {l: Poly() for l in labels}
    cart_labels = [l for l, _ in g.cartan]
    i = _cartan_source(g, source)
    if i is not None:
        h = g.cartan[i][1]
        out = dict(zeros)
        for lbl, vec in pos:
            w = g.bracket(h, vec)
            j = next(k for k, c in enumerate(vec) if c)
            eig = w[j] * vec[j].unit_inverse()
            out[lbl] = eig * zeta_var(lbl, family)
        return out
    neg_labels = [l for l, _ in g.negative]
    lowering = source.startswith("-") and source[1:] in neg_labels
    if source in labels and not lowering:
        x = dict(pos)[source]
    elif lowering or source in neg_labels:
        key = source[1:] if lowering else source
        x = dict(g.negative)[key]
        lowering = True
    else:
        raise KeyError(f"unknown source {source!r}")
    out = dict(zeros)
    pcoef = {l: Poly() for l in cart_labels}
    posroots = {_root_of_vec(g, v) for _, v in pos}
    root_x = _root_of_vec(g, x)
    # breadth-first over words: state = (word, nested vector)
    frontier = [((), tuple(x))]
    n = 0
    if not lowering:
        plus = split_parts(g, x)[0]
        for lbl, c in zip(labels, plus):
            out[lbl] = out[lbl] + c
    while frontier:
        n += 1
        nxt = []
        for word, vec in frontier:
            for lbl, e in pos:
                w = g.bracket(e, vec)
                if not any(w):
                    continue
                word2 = (lbl,) + word
                nxt.append((word2, w))
                zmon = Poly(1)
                for l in word2:
                    zmon = zmon * zeta_var(l, family)
                p_, c_, m_ = split_parts(g, w)
                if lowering:
                    mu = _mu(g, root_x, word2, posroots)
                    if mu is not None:
                        coef = bch_coeff_N(n, mu)
                        for l2, c in zip(labels, p_):
                            if c:
                                out[l2] = out[l2] + coef * c * zmon
                    fac = Fraction(1, factorial(n))
                    if p_factorial == "double":
                        fac = fac * fac
                    for l2, c in zip(cart_labels, c_):
                        if c:
                            pcoef[l2] = pcoef[l2] + fac * c * zmon
                else:
                    coef = bch_coeff_M(n)
                    for l2, c in zip(labels, p_):
                        if c:
                            out[l2] = out[l2] + coef * c * zmon
        frontier = nxt
        if n > 4 * g.dim + 8:
            raise RingError("nested brackets did not terminate")
    if lowering:
        for l2, v in pcoef.items():
            out[("P", l2)] = v
    return out


def _cartan_source(g, source):
    """Index of a Cartan source given as an int or ``"h_<label>"``."""
    if isinstance(source, int):
        return source
    if source.startswith("h_"):
        return [l for l, _ in g.cartan].index(source[2:])
    return None


def _mu(g, root_x, word, posroots):
    """Smallest m with ``root_x + a_n + ... + a_{n-m+1}`` a positive root."""
    acc = tuple(root_x)
    for m, lbl in enumerate(reversed(word), start=1):
        vec = dict(g.positive)[lbl]
        r = _root_of_vec(g, vec)
        acc = tuple(a + b for a, b in zip(acc, r))
        if acc in posroots:
            return m
    return None


def vertex_operator_left(g, source, family: int = 0, **kw) -> DiffOperator:
    """Left-action operator assembled from the printed vertex coefficients:
    ``V(-zeta)`` as derivative coefficients and ``P(-zeta)`` against the weights."""
    v = vertex_coefficients(g, source, family=family, **kw)
    kind = PRIMES[family][0]
    flip = {Var(kind, l): -zeta_var(l, family) for l, _ in g.positive}
    coeffs = {k: c.substitute(flip) for k, c in v.items() if not isinstance(k, tuple)}
    scalar = Poly()
    lam = {l: s for (l, _), s in zip(g.cartan, g.weight_symbols())}
    for k, c in v.items():
        if isinstance(k, tuple):
            scalar = scalar + c.substitute(flip) * lam[k[1]]
    i = _cartan_source(g, source)
    if i is not None:
        # the Cartan coefficients are already those of the left action
        return DiffOperator.make(v, g.weight_symbols()[i], kind)
    return DiffOperator.make(coeffs, scalar, kind)


# --- vertex matrix elements ------------------------------------------------------------------

def _tau(g, beta, t):
    return {l: (t if l == beta else Poly()) for l, _ in g.positive}


def vertex_matrix_element(g, beta: str, zeta: dict | None = None,
                          zetap: dict | None = None, convention: str = "chevalley",
                          path: str = "oplus"):
    """Matrix element ``<zeta''| V_beta(zeta) |zeta'>`` by one of three paths.

    ``oplus``: ``d/dt p(zetabar'', zeta (+) tau(t) (+) (-zeta) (+) zeta')`` at ``t = 0``;
    ``direct``: ``<zeta''| D_y |zeta'>`` with ``y = Ad(x(zeta)) e_beta`` realized in the
    primed variables; ``symmetric``: ``d/dt p(zetabar'' (+) (-zeta), tau (+) (-zeta) (+) zeta')``.
    The last one is not an identity for the Chevalley-dual ``p``: already for
    ``A1`` it depends on ``zeta`` while the other two do not.
    """
    t = Poly.monomial(Var("t"))
    zeta = symbolic_assignment(g, 0) if zeta is None else zeta
    zetap = symbolic_assignment(g, 1) if zetap is None else zetap
    vac = vacuum(g)
    dual = dual_state(g, convention, 2, vac)
    if path == "oplus":
        res = oplus(g, zeta, _tau(g, beta, t), negate(zeta), zetap).values
        return _p_at(g, dual, res, vac, t)
    if path == "symmetric":
        res = oplus(g, _tau(g, beta, t), negate(zeta), zetap).values
        barred = {l: zeta_var(l, 2, bar=True) for l, _ in g.positive}
        shifted = oplus(g, barred, negate(zeta)).values
        d = dual.substitute({Var(PRIMES[2][1], l): v for l, v in shifted.items()})
        return _p_at(g, d, res, vac, t)
    if path == "direct":
        e = dict(g.positive)[beta]
        avec = [Poly()] * g.dim
        for l, vec in g.positive:
            c = zeta.get(l, Poly())
            avec = [o + c * x for o, x in zip(avec, vec)]
        y = _ad_series(g, tuple(avec), e, lambda n: Fraction(1, factorial(n)))
        op = closed_form_operator(g, y, family=1)
        st = coherent_state(g, 1, vac)
        lam = _lambda_map(g, vac)
        applied = op.substitute(lam).apply_vector(st.full())
        return pair(dual, CoherentState(tuple(range(len(applied))), applied))
    raise ValueError("path must be 'oplus', 'direct' or 'symmetric'")


def _p_at(g, dual, values, vac, t):
    st = coherent_state(g, 1, vac)
    bind = {Var(PRIMES[1][0], l): values.get(l, Poly()) for l, _ in g.positive}
    s = st.substitute(bind)
    p = pair(dual, s)
    return p.coeff(Var("t"), 1)
