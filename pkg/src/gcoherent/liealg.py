"""Lie algebras with a (generalised) root decomposition.

A :class:`LieAlgebra` stores a basis of labelled generators, each carrying a
root (an integer vector in a root lattice; the zero vector for ``g_0``) and a
sign telling whether it counts as a positive root, a negative root or a
Cartan element.  Brackets are a sparse structure tensor over the polynomial
ring, so structure constants may stay symbolic.

Besides the basis, an algebra records which vectors play the roles of the
raising generators ``e_a``, lowering generators ``f_a`` and Cartan
generators ``h_i``.  For most algebras these are just basis vectors, but the
worked examples use rescaled generators and the defaults can be overridden.

An algebra may also carry a *module*: matrices of a representation used by
the coherent-state machinery in place of the adjoint one.  The Heisenberg
algebra needs this, because its adjoint representation has no cyclic vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .linalg import RingMatrix, rank
from .ring import Poly, RingError, Var, parse_poly
from . import roots as R

__all__ = [
    "Generator",
    "LieAlgebra",
    "RootDatum",
    "ValidationReport",
    "InconsistentConstants",
    "NotCocycle",
    "build_chevalley",
    "build_named",
    "catalog",
    "central_extend",
    "loopify",
    "derived_and_center",
    "abelian",
    "heisenberg",
    "nonabelian2",
    "fan",
    "lookup",
    "validate",
    "structure_constant",
    "affine_cocycle",
    "normalized_form",
    "read_definition",
    "write_definition",
    "DefinitionError",
]


class InconsistentConstants(RingError):
    """Structure constants that violate the Jacobi identity."""


class NotCocycle(RingError):
    """A bilinear form that is not an antisymmetric 2-cocycle."""


@dataclass(frozen=True)
class Generator:
    name: str
    root: tuple          # zero vector for g_0
    sign: int            # +1 positive, -1 negative, 0 for g_0


@dataclass(frozen=True)
class RootDatum:
    positive_roots: tuple
    negative_roots: tuple
    cartan_dim: int
    multiplicity: dict
    proper_flags: dict


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    def add(self, name, passed, detail=""):
        self.checks.append(Check(name, bool(passed), detail))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_text(self) -> str:
        return "\n".join(f"{'PASS' if c.passed else 'FAIL'} {c.name}"
                         + (f": {c.detail}" if c.detail else "")
                         for c in self.checks)


class LieAlgebra:
    """Immutable Lie algebra given by a structure tensor.

    ``brackets`` maps ``(a, b)`` to ``{c: coeff}`` meaning
    ``[x_a, x_b] = sum coeff * x_c``.  Only one orientation of each pair needs
    to be present; the other is implied by antisymmetry.
    """

    def __init__(self, name, basis, brackets, *, root_names=(),
                 cartan_matrix=None, positive=None, negative=None,
                 cartan=None, module=None, vacuum_hint=None, notes=(),
                 truncated=(), relations=()):
        self.name = name
        self.basis = tuple(basis)
        self.dim = len(self.basis)
        self.root_names = tuple(root_names)
        self.cartan_matrix = cartan_matrix
        self.notes = tuple(notes)
        self.truncated = frozenset(truncated)
        self.vacuum_hint = vacuum_hint
        self.module = module
        self.relations = tuple(relations)
        self._index = {g.name: i for i, g in enumerate(self.basis)}
        if len(self._index) != self.dim:
            raise ValueError("basis labels must be distinct")
        table = {}
        for (a, b), comb_ in brackets.items():
            a, b = self.index(a), self.index(b)
            row = {self.index(c): Poly(v) if not isinstance(v, Poly) else v
                   for c, v in comb_.items()}
            row = {c: v for c, v in row.items() if v}
            if row:
                table[(a, b)] = row
        self.table = table
        self._ad = {}
        e_default = [(g.name, self.unit(i)) for i, g in enumerate(self.basis)
                     if g.sign > 0]
        f_default = [(g.name, self.unit(i)) for i, g in enumerate(self.basis)
                     if g.sign < 0]
        h_default = [(g.name, self.unit(i)) for i, g in enumerate(self.basis)
                     if g.sign == 0]
        self.positive = tuple(positive if positive is not None else e_default)
        self.negative = tuple(negative if negative is not None else f_default)
        self.cartan = tuple(cartan if cartan is not None else h_default)

    # --- basis helpers ---------------------------------------------------

    def index(self, x) -> int:
        if isinstance(x, int):
            if not 0 <= x < self.dim:
                raise IndexError(x)
            return x
        try:
            return self._index[x]
        except KeyError:
            raise KeyError(f"{self.name} has no generator {x!r}") from None

    def label(self, i: int) -> str:
        return self.basis[i].name

    def unit(self, i) -> tuple:
        i = self.index(i)
        return tuple(Poly(1 if k == i else 0) for k in range(self.dim))

    def vector(self, entries: dict) -> tuple:
        out = [Poly()] * self.dim
        for k, v in entries.items():
            out[self.index(k)] = out[self.index(k)] + v
        return tuple(out)

    @property
    def rank(self) -> int:
        return len(self.cartan)

    def weight_symbols(self) -> tuple:
        return tuple(Poly.monomial(Var("lambda", lbl)) for lbl, _ in self.cartan)

    # --- brackets ----------------------------------------------------------

    def bracket_basis(self, a: int, b: int) -> dict:
        if (a, b) in self.table:
            return self.table[(a, b)]
        if (b, a) in self.table:
            return {c: -v for c, v in self.table[(b, a)].items()}
        return {}

    def bracket(self, u, v) -> tuple:
        out = [Poly()] * self.dim
        for a, ua in enumerate(u):
            if not ua:
                continue
            for b, vb in enumerate(v):
                if not vb:
                    continue
                coeff = ua * vb
                for c, x in self.bracket_basis(a, b).items():
                    out[c] = out[c] + coeff * x
        return tuple(out)

    def structure(self, a, b) -> dict:
        """``[x_a, x_b]`` as ``{label: coeff}``."""
        a, b = self.index(a), self.index(b)
        return {self.label(c): v for c, v in self.bracket_basis(a, b).items()}

    def adjoint(self, x) -> RingMatrix:
        """Matrix of ``ad x`` for a basis index/label or a coordinate vector."""
        if isinstance(x, (int, str)):
            i = self.index(x)
            if i not in self._ad:
                cols = [self.bracket_basis(i, b) for b in range(self.dim)]
                self._ad[i] = RingMatrix([[cols[b].get(c, Poly()) for b in range(self.dim)]
                                          for c in range(self.dim)])
            return self._ad[i]
        m = RingMatrix.zeros(self.dim)
        for i, c in enumerate(x):
            if c:
                m = m + self.adjoint(i).scale(c)
        return m

    def rep(self, x) -> RingMatrix:
        """Representation matrix: the module if one is attached, else ``ad``."""
        if self.module is None:
            return self.adjoint(x)
        if isinstance(x, (int, str)):
            return self.module[self.index(x)]
        m = RingMatrix.zeros(self.module[0].shape[0])
        for i, c in enumerate(x):
            if c:
                m = m + self.module[i].scale(c)
        return m

    @property
    def rep_dim(self) -> int:
        return self.dim if self.module is None else self.module[0].shape[0]

    def with_bracket(self, a, b, combination: dict) -> "LieAlgebra":
        """Copy with ``[a, b]`` overwritten (used to corrupt tensors in tests)."""
        a, b = self.index(a), self.index(b)
        br = {k: v for k, v in self.table.items() if k not in ((a, b), (b, a))}
        br[(a, b)] = {self.index(c): v for c, v in combination.items()}
        return self._replace(brackets=br)

    def _replace(self, **kw) -> "LieAlgebra":
        args = dict(name=self.name, basis=self.basis, brackets=self.table,
                    root_names=self.root_names, cartan_matrix=self.cartan_matrix,
                    positive=self.positive, negative=self.negative,
                    cartan=self.cartan, module=self.module,
                    vacuum_hint=self.vacuum_hint, notes=self.notes,
                    truncated=self.truncated, relations=self.relations)
        args.update(kw)
        name = args.pop("name")
        basis = args.pop("basis")
        brackets = args.pop("brackets")
        out = LieAlgebra(name, basis, brackets, **args)
        for attr in _EXTRAS:
            if hasattr(self, attr):
                setattr(out, attr, getattr(self, attr))
        return out

    # --- root data ----------------------------------------------------------

    def root_label(self, root) -> str:
        return R.root_name(root, self.root_names)

    def root_datum(self) -> RootDatum:
        mult = {}
        sign = {}
        for g in self.basis:
            if g.sign == 0:
                continue
            mult[g.root] = mult.get(g.root, 0) + 1
            sign[g.root] = g.sign
        pos = tuple(r for r in mult if sign[r] > 0)
        negs = tuple(r for r in mult if sign[r] < 0)
        proper = {}
        for r in mult:
            ok = mult[r] == 1 and R.neg(r) in mult
            for n in range(2, 5):
                if R.scale(n, r) in mult or R.scale(-n, r) in mult:
                    ok = False
            proper[r] = ok
        cdim = sum(1 for g in self.basis if g.sign == 0)
        return RootDatum(pos, negs, cdim, mult, proper)

    def root_of(self, i) -> tuple:
        return self.basis[self.index(i)].root

    def zero_root(self) -> tuple:
        return tuple(0 for _ in self.basis[0].root) if self.basis else ()

    # --- misc ---------------------------------------------------------------

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim})"

    def invariant_form(self) -> RingMatrix:
        """Killing form ``tr(ad x ad y)``."""
        ads = [self.adjoint(i) for i in range(self.dim)]
        return RingMatrix([[_trace(ads[i] * ads[j]) for j in range(self.dim)]
                           for i in range(self.dim)])


_EXTRAS = ("chevalley", "series", "system", "base", "central_index", "loop")


def _trace(m: RingMatrix) -> Poly:
    out = Poly()
    for i in range(m.shape[0]):
        out = out + m[i, i]
    return out


# --- validation -------------------------------------------------------------

def _combo_text(g: LieAlgebra, vec) -> str:
    return " + ".join(f"({c.to_text()})*{g.label(i)}" for i, c in enumerate(vec) if c) or "0"


def validate(g: LieAlgebra) -> ValidationReport:
    """Check antisymmetry, Jacobi, the grading axioms and root properness."""
    rep = ValidationReport()
    bad = []
    for (a, b), row in g.table.items():
        if a == b:
            bad.append(f"[{g.label(a)},{g.label(a)}] != 0")
        elif (b, a) in g.table:
            other = g.table[(b, a)]
            for c in set(row) | set(other):
                if row.get(c, Poly()) + other.get(c, Poly()):
                    bad.append(f"[{g.label(a)},{g.label(b)}]")
                    break
    rep.add("antisymmetry", not bad, "; ".join(bad))

    units = [g.unit(i) for i in range(g.dim)]
    jac_bad = []
    for a, b, c in combinations(range(g.dim), 3):
        x, y, z = units[a], units[b], units[c]
        s = [p + q + r for p, q, r in zip(g.bracket(x, g.bracket(y, z)),
                                           g.bracket(y, g.bracket(z, x)),
                                           g.bracket(z, g.bracket(x, y)))]
        if any(s):
            jac_bad.append(f"({g.label(a)}, {g.label(b)}, {g.label(c)}) -> "
                           + _combo_text(g, s))
    rep.add("jacobi", not jac_bad, "; ".join(jac_bad))

    grade_bad = []
    for a in range(g.dim):
        for b in range(a + 1, g.dim):
            target = R.add(g.root_of(a), g.root_of(b))
            for c in g.bracket_basis(a, b):
                if g.root_of(c) != target:
                    grade_bad.append(f"[{g.label(a)},{g.label(b)}] has {g.label(c)}")
    rep.add("grading", not grade_bad, "; ".join(grade_bad))

    abelian0 = []
    g0 = [i for i, x in enumerate(g.basis) if x.sign == 0]
    for a, b in combinations(g0, 2):
        if g.bracket_basis(a, b):
            abelian0.append(f"[{g.label(a)},{g.label(b)}]")
    rep.add("g0 abelian", not abelian0, "; ".join(abelian0))

    datum = g.root_datum()
    rep.add("positive roots dominate",
            len(datum.positive_roots) >= len(datum.negative_roots))
    # proper roots must come with their mirror and stay one-dimensional
    sign_bad = [g.root_label(r) for r in datum.negative_roots
                if R.neg(r) not in datum.multiplicity]
    rep.add("negative roots mirrored", not sign_bad, ", ".join(sign_bad))
    if g.module is not None:
        rep.add("module is a representation", *_check_module(g))
    return rep


def _check_module(g: LieAlgebra):
    bad = []
    for a, b in combinations(range(g.dim), 2):
        lhs = g.rep(a) * g.rep(b) - g.rep(b) * g.rep(a)
        rhs = g.rep(g.bracket(g.unit(a), g.unit(b)))
        if lhs != rhs:
            bad.append(f"[{g.label(a)},{g.label(b)}]")
    return (not bad, "; ".join(bad))


# --- Chevalley algebras -------------------------------------------------------

# Basis layout per series: negative roots first, in the order that places the
# vacuum at the documented position, then positive roots, then the Cartan.
# Each entry: (root, scale) for root vectors; the Cartan is appended.
_LAYOUT = {
    "A1": [((-1,), Fraction(-1, 2)), ((1,), 1)],
    "A2": [((-1, 0), 1), ((0, -1), 1), ((-1, -1), -1),
           ((1, 0), 1), ((0, 1), 1), ((1, 1), 1)],
    "B2": [((-1, 0), -1), ((0, -1), -1), ((-1, -1), -1), ((-2, -1), -1),
           ((1, 0), 1), ((0, 1), 1), ((1, 1), 1), ((2, 1), 1)],
    "G2": [((-1, 0), -1), ((0, -1), -1), ((-1, -1), -1), ((-2, -1), -1),
           ((-1, 1), -1), ((-1, -2), -1),
           ((1, 0), 1), ((0, 1), 1), ((1, 1), 1), ((1, -1), 1), ((1, 2), 1),
           ((2, 1), 1)],
}
_CARTAN_SCALE = {"A1": Fraction(1, 2), "A2": -1, "B2": -1, "G2": -1}
_VACUUM = {"A1": 0, "A2": 2, "B2": 3, "G2": 3}
_DUAL_COXETER = {"A1": 2, "A2": 3, "B2": 3, "G2": 4}


def build_chevalley(series: str, constants: str = "symbolic", signs=None) -> LieAlgebra:
    """Semisimple algebra of rank <= 2 from Chevalley structure constants.

    ``constants`` is ``"symbolic"`` (extraspecial ``N`` kept as variables with
    their square relation) or ``"numeric"`` (extraspecial signs from
    ``signs``, default all ``+1``).

    Conventions: ``e_a`` is the Chevalley vector of ``a``, ``f_a = -e_{-a}``
    and ``h_i = -[E_i, E_{-i}]`` so that ``[e_a, f_a] = h_a`` and the lowest
    root vector has positive weights.  Basis vectors are rescaled copies of
    these, chosen so the vacuum and its neighbours sit where the worked
    examples put them.
    """
    series = series.upper()
    if series not in R.SYSTEMS:
        raise ValueError(f"unknown series {series!r}; expected one of {sorted(R.SYSTEMS)}")
    if constants not in ("symbolic", "numeric"):
        raise ValueError("constants must be 'symbolic' or 'numeric'")
    system = R.SYSTEMS[series]
    nc = R.ChevalleyConstants(system, symbolic=constants == "symbolic", signs=signs)
    names = system.names
    layout = _LAYOUT[series]
    basis = []
    scale = {}
    for root, s in layout:
        sign = 1 if system.is_positive(root) else -1
        basis.append(Generator(R.root_name(root, names), root, sign))
        scale[root] = Fraction(s)
    zero = tuple(0 for _ in names)
    hs = Fraction(_CARTAN_SCALE[series])
    for n in names:
        basis.append(Generator(f"h_{n}", zero, 0))
    rank_ = system.rank
    nroot = len(layout)

    # canonical Chevalley brackets, then transported to the scaled basis
    idx = {root: i for i, (root, _) in enumerate(layout)}

    def coroot_vec(a):
        # H_a in the canonical Cartan basis H_i, expressed in our h basis
        return {nroot + i: Fraction(c) / hs for i, c in enumerate(system.coroot_coords(a))
                if c}

    brackets = {}
    roots = list(idx)
    for i, a in enumerate(roots):
        for b in roots[i + 1:]:
            c = R.add(a, b)
            sa, sb = scale[a], scale[b]
            if c == zero:
                # [E_a, E_-a] = H_a
                comb_ = {k: v * sa * sb for k, v in coroot_vec(a).items()}
                brackets[(idx[a], idx[b])] = {k: Poly(v) for k, v in comb_.items()}
            elif system.is_root(c):
                n = nc(a, b)
                brackets[(idx[a], idx[b])] = {idx[c]: n * (sa * sb / scale[c])}
    for i in range(rank_):
        basis_root = tuple(1 if k == i else 0 for k in range(rank_))
        for a in roots:
            w = system.pairing(a, basis_root) * hs
            if w:
                brackets[(nroot + i, idx[a])] = {idx[a]: Poly(w)}

    # generators: e_a = E_a, f_a = -E_{-a}, h_i = -H_i
    def vec_of(root, coeff):
        v = [Poly()] * len(basis)
        v[idx[root]] = Poly(Fraction(coeff) / scale[root])
        return tuple(v)

    def hvec(i, coeff):
        v = [Poly()] * len(basis)
        v[nroot + i] = Poly(Fraction(coeff) / hs)
        return tuple(v)

    pos = [(R.root_name(a, names), vec_of(a, 1)) for a in system.positive]
    neg = [(R.root_name(a, names), vec_of(R.neg(a), -1)) for a in system.positive]
    cart = [(n, hvec(i, -1)) for i, n in enumerate(names)]
    notes = ["extraspecial pairs: " + ", ".join(
        f"({R.root_name(a, names)}, {R.root_name(b, names)})"
        for a, b in nc.extraspecial.values())]
    relations = tuple(f"N[{lbl}]^2 = {next(iter(v.variables())).square}"
                      for lbl, v in nc.symbols.items())
    g = LieAlgebra(f"{series}", basis, brackets, root_names=names,
                   cartan_matrix=system.cartan_matrix(),
                   positive=pos, negative=neg, cartan=cart,
                   vacuum_hint=_VACUUM[series], notes=notes, relations=relations)
    g.chevalley = nc
    g.series = series
    g.system = system
    return g


def structure_constant(g: LieAlgebra, a: str, b: str) -> Poly:
    """``N[a,b]`` in the algebra's generator convention: ``[e_a, e_b] = N e_{a+b}``.

    Negative roots are written with a leading ``-`` and use ``e_{-a} = -f_a``.
    """
    nc = getattr(g, "chevalley", None)
    if nc is None:
        raise ValueError(f"{g.name} has no Chevalley structure constants")
    return nc(_parse_root(a, g.root_names), _parse_root(b, g.root_names))


def _parse_root(text: str, names) -> tuple:
    import re
    out = [0] * len(names)
    t = text.replace(" ", "")
    if t and t[0] not in "+-":
        t = "+" + t
    for sgn, mag, nm in re.findall(r"([+-])(\d*)([A-Za-z]\w*)", t):
        out[names.index(nm)] += (int(mag) if mag else 1) * (1 if sgn == "+" else -1)
    return tuple(out)


# --- named non-semisimple algebras ---------------------------------------------

def abelian(n: int, names=None) -> LieAlgebra:
    names = names or [f"x{i + 1}" for i in range(n)]
    basis = [Generator(nm, (1,), 1) for nm in names]
    return LieAlgebra(f"abelian{n}", basis, {})


def heisenberg(n: int = 1, central=-2) -> LieAlgebra:
    """Heisenberg algebra graded ``g_1 + g_2``: ``[q_i, p_i] = central * c``.

    For ``n = 1`` the algebra carries the three-dimensional module in which
    ``q`` and ``p`` act as the matrices of the worked example and ``c`` acts
    as zero; its vacuum is the third basis vector.
    """
    central = Poly(central) if not isinstance(central, Poly) else central
    if n == 1:
        qs, ps = ["q"], ["p"]
    else:
        qs = [f"q{i + 1}" for i in range(n)]
        ps = [f"p{i + 1}" for i in range(n)]
    basis = ([Generator(q, (1,), 1) for q in qs] + [Generator(p, (1,), 1) for p in ps]
             + [Generator("c", (2,), 1)])
    br = {(q, p): {"c": central} for q, p in zip(qs, ps)}
    module = None
    dim = 2 * n + 1
    if n == 1:
        # q -> -E_23, p -> E_13, c -> 0; a module in which c acts trivially
        z = Poly()
        q = RingMatrix([[z, z, z], [z, z, Poly(-1)], [z, z, z]])
        p = RingMatrix([[z, z, Poly(1)], [z, z, z], [z, z, z]])
        module = (q, p, RingMatrix.zeros(3))
    return LieAlgebra(f"heisenberg({n})", basis, br, root_names=(),
                      module=module, vacuum_hint=dim - 1 if n == 1 else None,
                      notes=(f"[q,p] = {central.to_text()} c",))


def nonabelian2() -> LieAlgebra:
    """``span{h, e}`` with ``[e, h] = e``, graded ``g_0 + g_1``."""
    basis = [Generator("h", (0,), 0), Generator("e", (1,), 1)]
    return LieAlgebra("nonabelian2", basis, {("e", "h"): {"e": 1}}, vacuum_hint=0)


def fan(n: int = 3, printed: bool = False) -> LieAlgebra:
    """The fan algebra: ``A_1`` plus pseudo roots ``s, s+r, s-r``.

    Basis order ``(r, -r, s, s+r, s-r, h)``.  With ``printed=True`` only the
    brackets written in the worked example are kept; those violate Jacobi
    unless the ``N`` vanish.  The default completes them to the
    Jacobi-consistent algebra ``sl_2`` acting on its spin-one module
    ``span{e_{s+r}, e_s, e_{s-r}}``, with ``N[s,r]**2 = N[s,-r]**2 = 1``.
    """
    if n != 3:
        raise ValueError("only fan(3) is cataloged")
    basis = [Generator("r", (1, 0), 1), Generator("-r", (-1, 0), -1),
             Generator("s", (0, 1), 1), Generator("s+r", (1, 1), 1),
             Generator("s-r", (-1, 1), 1), Generator("h", (0, 0), 0)]
    nsr = Poly.monomial(Var("N", "s,r", 1))
    nsm = Poly.monomial(Var("N", "s,-r", 1))
    br = {
        ("s", "r"): {"s+r": nsr},
        ("s", "-r"): {"s-r": nsm},
        ("h", "r"): {"r": 2},
        ("h", "-r"): {"-r": -2},
        ("r", "-r"): {"h": 1},
    }
    notes = []
    rel = ()
    if not printed:
        br.update({
            ("h", "s+r"): {"s+r": 2},
            ("h", "s-r"): {"s-r": -2},
            ("-r", "s+r"): {"s": -2 * nsr},
            ("r", "s-r"): {"s": -2 * nsm},
        })
        rel = ("N[s,r]^2 = 1", "N[s,-r]^2 = 1")
    else:
        notes.append("printed brackets; Jacobi holds only if N[s,r] = N[s,-r] = 0")
    name = "fan(3)" + ("-printed" if printed else "")
    return LieAlgebra(name, basis, br, root_names=("r", "s"), vacuum_hint=1,
                      notes=notes, relations=rel)


def _a1_plus(extra, brackets_extra, name) -> LieAlgebra:
    basis = [Generator("r", (1, 0), 1), Generator("-r", (-1, 0), -1)]
    basis += [Generator(nm, root, 1) for nm, root in extra]
    basis.append(Generator("h", (0, 0), 0))
    br = {("h", "r"): {"r": 2}, ("h", "-r"): {"-r": -2}, ("r", "-r"): {"h": 1}}
    br.update(brackets_extra)
    return LieAlgebra(name, basis, br, root_names=("r", "s"), vacuum_hint=1,
                      notes=("direct sum of Lie algebras",))


def build_named(name: str) -> LieAlgebra:
    key = name.replace(" ", "").lower()
    if key.startswith("heisenberg"):
        n = int(key[len("heisenberg"):].strip("()") or 1)
        return heisenberg(n)
    if key in ("h1",):
        return heisenberg(1)
    if key == "nonabelian2":
        return nonabelian2()
    if key.startswith("fan"):
        printed = key.endswith("-printed")
        core = key[3:].replace("-printed", "").strip("()") or "3"
        return fan(int(core), printed=printed)
    if key == "a1_plus_line":
        return _a1_plus([("s", (0, 1))], {}, "a1_plus_line")
    if key == "a1_plus_two_lines":
        return _a1_plus([("s", (0, 1)), ("2s", (0, 2))], {}, "a1_plus_two_lines")
    if key == "a1_plus_plane":
        return _a1_plus([("s1", (0, 1)), ("s2", (0, 1))], {}, "a1_plus_plane")
    if key == "a1_plus_heisenberg":
        return _a1_plus([("s1", (0, 1)), ("s2", (0, 1)), ("2s", (0, 2))],
                        {("s1", "s2"): {"2s": 1}}, "a1_plus_heisenberg")
    if key.upper() in R.SYSTEMS:
        return build_chevalley(key.upper())
    raise ValueError(f"unknown algebra {name!r}")


CATALOG = ("A1", "A2", "B2", "G2", "heisenberg(1)", "nonabelian2", "fan(3)",
           "fan(3)-printed", "a1_plus_line", "a1_plus_two_lines", "a1_plus_plane",
           "a1_plus_heisenberg")


def catalog() -> tuple:
    return CATALOG


def lookup(name: str, constants: str = "symbolic") -> LieAlgebra:
    if name.upper() in R.SYSTEMS:
        return build_chevalley(name.upper(), constants)
    return build_named(name)


# --- extensions -----------------------------------------------------------------

def central_extend(g: LieAlgebra, cocycle: dict, central_name: str = "c",
                   central_root=None, positive: bool = False) -> LieAlgebra:
    """``g + F c`` with ``[x, y]_new = [x, y] + cocycle(x, y) c``.

    ``cocycle`` maps label pairs to ring elements; missing pairs are zero and
    the opposite orientation is implied.
    """
    idx = {}
    for (a, b), v in cocycle.items():
        a, b = g.index(a), g.index(b)
        v = Poly(v) if not isinstance(v, Poly) else v
        if a == b and v:
            raise NotCocycle(f"c({g.label(a)},{g.label(a)}) != 0")
        if (b, a) in idx:
            if idx[(b, a)] + v:
                raise NotCocycle(f"c not antisymmetric on ({g.label(a)},{g.label(b)})")
            continue
        idx[(a, b)] = v

    def c(a, b):
        if (a, b) in idx:
            return idx[(a, b)]
        if (b, a) in idx:
            return -idx[(b, a)]
        return Poly()

    # 2-cocycle identity: c([x,y],z) + c([y,z],x) + c([z,x],y) = 0
    for a, b, d in combinations(range(g.dim), 3):
        tot = Poly()
        for x, y, z in ((a, b, d), (b, d, a), (d, a, b)):
            for k, v in g.bracket_basis(x, y).items():
                tot = tot + v * c(k, z)
        if tot:
            raise NotCocycle(f"cocycle identity fails on ({g.label(a)}, "
                             f"{g.label(b)}, {g.label(d)})")
    if central_name in g._index:
        raise ValueError(f"label {central_name!r} already used")
    root = central_root if central_root is not None else g.zero_root()
    sign = 1 if positive else (0 if all(x == 0 for x in root) else 1)
    basis = list(g.basis) + [Generator(central_name, tuple(root), sign)]
    ci = g.dim
    br = {}
    for (a, b), row in g.table.items():
        br[(a, b)] = dict(row)
    for (a, b), v in idx.items():
        if (a, b) in br:
            br[(a, b)][ci] = br[(a, b)].get(ci, Poly()) + v
        elif (b, a) in br:
            br[(b, a)][ci] = br[(b, a)].get(ci, Poly()) - v
        else:
            br[(a, b)] = {ci: v}
    pad = lambda v: tuple(v) + (Poly(),)
    pos = [(l, pad(v)) for l, v in g.positive]
    if sign > 0:
        pos.append((central_name, tuple(Poly(1 if k == ci else 0) for k in range(ci + 1))))
    neg = [(l, pad(v)) for l, v in g.negative]
    cart = [(l, pad(v)) for l, v in g.cartan]
    ext = LieAlgebra(g.name + "+c", basis, br, root_names=g.root_names,
                     cartan_matrix=g.cartan_matrix, positive=pos, negative=neg,
                     cartan=cart, vacuum_hint=g.vacuum_hint,
                     notes=g.notes + ("central extension",), relations=g.relations,
                     truncated=g.truncated)
    ext.base = g
    ext.central_index = ci
    for attr in ("chevalley", "series", "system", "loop"):  # not base/central_index
        if hasattr(g, attr):
            setattr(ext, attr, getattr(g, attr))
    return ext


def loopify(g: LieAlgebra, M: int) -> LieAlgebra:
    """Mode-truncated loop algebra: basis ``x@n`` for ``-M <= n <= M``.

    Brackets whose mode leaves the window are dropped; the dropped pairs are
    recorded in ``truncated``.
    """
    if M < 0:
        raise ValueError("mode bound must be non-negative")
    modes = list(range(-M, M + 1))
    basis = []
    pos_index = {}
    for n in modes:
        for i, x in enumerate(g.basis):
            pos_index[(i, n)] = len(basis)
            basis.append(Generator(f"{x.name}@{n}", tuple(x.root) + (n,), x.sign))
    br = {}
    trunc = set()
    for (a, b), row in g.table.items():
        for m in modes:
            for n in modes:
                if m + n not in modes:
                    trunc.add((f"{g.label(a)}@{m}", f"{g.label(b)}@{n}"))
                    continue
                br[(pos_index[(a, m)], pos_index[(b, n)])] = {
                    pos_index[(c, m + n)]: v for c, v in row.items()}

    def lift(vec, n):
        out = [Poly()] * len(basis)
        for i, v in enumerate(vec):
            out[pos_index[(i, n)]] = v
        return tuple(out)

    pos = [(f"{l}@{n}", lift(v, n)) for n in modes for l, v in g.positive]
    neg = [(f"{l}@{n}", lift(v, n)) for n in modes for l, v in g.negative]
    cart = [(f"{l}@{n}", lift(v, n)) for n in modes for l, v in g.cartan]
    lg = LieAlgebra(f"loop({g.name},{M})", basis, br,
                    root_names=tuple(g.root_names) + ("delta",),
                    positive=pos, negative=neg, cartan=cart,
                    notes=g.notes + (f"modes {-M}..{M}",), truncated=trunc,
                    relations=g.relations)
    lg.loop = (g, M, pos_index)
    return lg


def affine_cocycle(lg: LieAlgebra, level=None, form=None) -> dict:
    """``c(x@m, y@n) = k m delta_{m,-n} kappa(x, y)`` for a loop algebra."""
    g, M, pos_index = lg.loop
    if level is None:
        level = Poly.monomial(Var("sym", "k"))
    kappa = form if form is not None else normalized_form(g)
    out = {}
    for (a, m), i in pos_index.items():
        for (b, n), j in pos_index.items():
            if i < j and m == -n and m != 0:
                v = kappa[a, b]
                if v:
                    out[(i, j)] = level * m * v
    return out


def normalized_form(g: LieAlgebra) -> RingMatrix:
    """Invariant form ``kappa``: the Killing form divided by ``2 h^v``."""
    series = getattr(g, "series", None)
    kf = g.invariant_form()
    if series in _DUAL_COXETER:
        return kf.scale(Fraction(1, 2 * _DUAL_COXETER[series]))
    return kf


def derived_and_center(g: LieAlgebra):
    """Spanning sets (coordinate vectors) of ``[g, g]`` and ``Z(g)``."""
    from .linalg import solve_linear
    span = []
    for a in range(g.dim):
        for b in range(a + 1, g.dim):
            v = g.bracket(g.unit(a), g.unit(b))
            if any(v):
                trial = span + [v]
                if rank(RingMatrix([list(x) for x in trial])) == len(trial):
                    span.append(v)
    # center: kernel of x -> ([x, b])_b stacked over all b
    rows = []
    for b in range(g.dim):
        adb = g.adjoint(b)
        for r in range(g.dim):
            rows.append([-adb[r, a] for a in range(g.dim)])
    sol = solve_linear(RingMatrix(rows), [Poly()] * len(rows))
    centre = [tuple(k) for k in sol.kernel]
    return span, centre


# --- definition files --------------------------------------------------------------

FORMAT_HEADER = "gcoherent-algebra 1"


def write_definition(g: LieAlgebra) -> str:
    lines = [FORMAT_HEADER, f"name {g.name}"]
    if g.root_names:
        lines.append("roots " + " ".join(g.root_names))
    for rel in g.relations:
        lines.append(f"relation {rel}")
    for x in g.basis:
        sign = {1: "+", -1: "-", 0: "0"}[x.sign]
        lines.append(f"generator {x.name} {sign} " + " ".join(str(c) for c in x.root))
    for (a, b) in sorted(g.table):
        row = g.table[(a, b)]
        rhs = " + ".join(f"({row[c].to_text()}) {{{g.label(c)}}}" for c in sorted(row))
        lines.append(f"bracket {{{g.label(a)}}} {{{g.label(b)}}} = {rhs}")
    defaults = LieAlgebra(g.name, g.basis, {})
    for kind, cur, dflt in (("e", g.positive, defaults.positive),
                            ("f", g.negative, defaults.negative),
                            ("h", g.cartan, defaults.cartan)):
        if tuple(cur) != tuple(dflt):
            for lbl, vec in cur:
                rhs = " + ".join(f"({c.to_text()}) {{{g.label(i)}}}"
                                 for i, c in enumerate(vec) if c)
                lines.append(f"element {kind} {{{lbl}}} = {rhs}")
    if g.module is not None:
        n = g.rep_dim
        lines.append(f"module {n}")
        for i, m in enumerate(g.module):
            for r in range(n):
                for c in range(n):
                    if m[r, c]:
                        lines.append(f"rep {{{g.label(i)}}} {r} {c} {m[r, c].to_text()}")
    if g.cartan_matrix is not None:
        lines.append("cartan " + "; ".join(" ".join(str(x) for x in row)
                                            for row in g.cartan_matrix))
    if g.vacuum_hint is not None:
        lines.append(f"vacuum {g.vacuum_hint}")
    for note in g.notes:
        lines.append(f"note {note}")
    return "\n".join(lines) + "\n"


class DefinitionError(ValueError):
    pass


def _braced(text: str):
    import re
    return re.findall(r"\{([^}]*)\}", text)


def _parse_combination(rhs: str) -> dict:
    import re
    out = {}
    for coeff, label in re.findall(r"\(([^{}]*)\)\s*\{([^}]*)\}", rhs):
        out[label] = out.get(label, Poly()) + parse_poly(coeff)
    return out


def read_definition(text: str) -> LieAlgebra:
    try:
        return _read_definition(text)
    except KeyError as exc:
        raise DefinitionError(f"undeclared generator {exc}") from exc


def _read_definition(text: str) -> LieAlgebra:
    lines = [ln.rstrip() for ln in text.splitlines() if ln.strip()
             and not ln.lstrip().startswith("#")]
    if not lines or lines[0].strip() != FORMAT_HEADER:
        raise DefinitionError(f"expected header {FORMAT_HEADER!r}")
    name = "algebra"
    root_names = ()
    relations = []
    basis = []
    raw_br = []
    elements = {"e": [], "f": [], "h": []}
    module_dim = None
    reps = []
    cartan = None
    vacuum = None
    notes = []
    for ln in lines[1:]:
        key, _, rest = ln.strip().partition(" ")
        if key == "name":
            name = rest.strip()
        elif key == "roots":
            root_names = tuple(rest.split())
        elif key == "relation":
            lhs, _, rhs = rest.partition("=")
            tok = lhs.strip()
            if not tok.endswith("^2"):
                raise DefinitionError(f"unsupported relation {rest!r}")
            kind, label = tok[:-2][:-1].split("[", 1)
            Var(kind, label, Fraction(rhs.strip()))
            relations.append(rest.strip())
        elif key == "generator":
            parts = rest.split()
            sign = {"+": 1, "-": -1, "0": 0}[parts[1]]
            basis.append(Generator(parts[0], tuple(int(x) for x in parts[2:]), sign))
        elif key == "bracket":
            lhs, _, rhs = rest.partition("=")
            a, b = _braced(lhs)
            raw_br.append((a, b, rhs))
        elif key == "element":
            kind, _, rhs0 = rest.partition(" ")
            lhs, _, rhs = rhs0.partition("=")
            elements[kind].append((_braced(lhs)[0], rhs))
        elif key == "module":
            module_dim = int(rest)
        elif key == "rep":
            lbl = _braced(rest)[0]
            tail = rest.split("}", 1)[1].split(None, 2)
            reps.append((lbl, int(tail[0]), int(tail[1]), tail[2]))
        elif key == "cartan":
            cartan = tuple(tuple(int(x) for x in row.split()) for row in rest.split(";"))
        elif key == "vacuum":
            vacuum = int(rest)
        elif key == "note":
            notes.append(rest)
        else:
            raise DefinitionError(f"unknown directive {key!r}")
    br = {(a, b): _parse_combination(rhs) for a, b, rhs in raw_br}
    shell = LieAlgebra(name, basis, {})

    def elems(kind):
        if not elements[kind]:
            return None
        return [(lbl, shell.vector(_parse_combination(rhs))) for lbl, rhs in elements[kind]]

    module = None
    if module_dim is not None:
        mats = [[[Poly()] * module_dim for _ in range(module_dim)] for _ in basis]
        for lbl, r, c, txt in reps:
            mats[shell.index(lbl)][r][c] = parse_poly(txt)
        module = tuple(RingMatrix(m) for m in mats)
    g = LieAlgebra(name, basis, br, root_names=root_names, cartan_matrix=cartan,
                   positive=elems("e"), negative=elems("f"), cartan=elems("h"),
                   module=module, vacuum_hint=vacuum, notes=notes,
                   relations=relations)
    return g
