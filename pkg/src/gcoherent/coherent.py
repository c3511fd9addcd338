"""Vacuum vectors, coherent states and normalization polynomials.

The coherent state of an algebra with raising generators ``e_a`` and vacuum
``v0`` is ``|zeta> = exp(sum_a zeta_a rho(e_a)) v0``, computed exactly since
``rho(e_a)`` is nilpotent.  ``rho`` is the adjoint representation unless
the algebra carries a module.

Three dual conventions are available:

``chevalley``
    the state with ``zeta -> -zetabar``, transposed;
``conjugate_transpose``
    formal complex conjugation (``zeta -> zetabar``, ``I -> -I``), transposed;
``involution``
    the row vector ``v0^T exp(-sum_a zetabar_a rho(f_a))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .linalg import NotNilpotent, RingMatrix, exp_apply, rank
from .ring import Poly, RingError, Var
from .latex import state_latex, poly_latex

__all__ = [
    "CONVENTIONS",
    "CoherentState",
    "Vacuum",
    "NoVacuum",
    "NotAnExtension",
    "WindowOverflow",
    "vacuum",
    "coherent_state",
    "dual_state",
    "norm_poly",
    "central_split",
    "loop_coherent",
    "km_norm_functional",
    "affine_algebra",
]

CONVENTIONS = ("chevalley", "conjugate_transpose", "involution")

# variable kinds for the three zeta families and their conjugates
PRIMES = {0: ("zeta", "zetabar"), 1: ("zetap", "zetabarp"), 2: ("zetapp", "zetabarpp")}


class NoVacuum(RingError):
    """No joint eigenvector in the joint kernel of the lowering operators is cyclic."""


class NotAnExtension(RingError):
    pass


class WindowOverflow(RingError):
    """A loop computation needed brackets outside the truncated mode window."""


@dataclass(frozen=True)
class Vacuum:
    vector: tuple
    weight: tuple
    index: int | None = None     # basis position when v0 is a basis vector
    cyclic: bool = True


@dataclass(frozen=True)
class CoherentState:
    labels: tuple
    components: tuple
    central_part: Poly | None = None
    central_label: str = "c"

    def full(self) -> tuple:
        if self.central_part is None:
            return self.components
        return self.components + (self.central_part,)

    def substitute(self, bindings) -> "CoherentState":
        cp = None if self.central_part is None else self.central_part.substitute(bindings)
        return CoherentState(self.labels,
                             tuple(c.substitute(bindings) for c in self.components),
                             cp, self.central_label)

    def to_json(self) -> str:
        d = {lbl: c.to_text() for lbl, c in zip(self.labels, self.components)}
        if self.central_part is not None:
            d[self.central_label] = self.central_part.to_text()
        return json.dumps(d, indent=2)

    def to_text(self) -> str:
        rows = [f"|{i + 1}> {lbl}: {c.to_text()}"
                for i, (lbl, c) in enumerate(zip(self.labels, self.components))]
        if self.central_part is not None:
            rows.append(f"|{self.central_label}>: {self.central_part.to_text()}")
        return "\n".join(rows)

    def to_latex(self, dual=False) -> str:
        return state_latex(self.components, range(1, len(self.components) + 1),
                           self.central_part, self.central_label, dual=dual)


def zeta_var(label: str, family: int = 0, bar: bool = False) -> Poly:
    return Poly.monomial(Var(PRIMES[family][1 if bar else 0], label))


def _state_labels(g) -> tuple:
    if g.module is None:
        return tuple(x.name for x in g.basis)
    return tuple(str(i + 1) for i in range(g.rep_dim))


# --- vacuum --------------------------------------------------------------------

def _joint_kernel(mats, n):
    from .linalg import solve_linear
    if not mats:
        return [tuple(Poly(1 if k == i else 0) for k in range(n)) for i in range(n)]
    rows = [list(m.data[r]) for m in mats for r in range(n)]
    sol = solve_linear(RingMatrix(rows), [Poly()] * len(rows))
    return [tuple(k) for k in sol.kernel]


def _eigen_weight(mats, v):
    k = next(i for i, c in enumerate(v) if c)
    weights = []
    for m in mats:
        w = m.apply(v)
        if not v[k].is_unit():
            return None
        lam = w[k] * v[k].unit_inverse()
        if any(a - lam * b for a, b in zip(w, v)):
            return None
        weights.append(lam)
    return tuple(weights)


def is_cyclic(g, v) -> bool:
    """Full column rank of the coefficient matrix of ``exp(X) v``."""
    comps = _raw_state(g, v)
    monos = {}
    for c in comps:
        for m, coeff in c.split().items():
            monos.setdefault(m, None)
    keys = list(monos)
    mat = RingMatrix([[c.split().get(m, Poly()) for m in keys] for c in comps])
    return rank(mat) == g.rep_dim


def vacuum(g, require_cyclic: bool = True, index: int | None = None) -> Vacuum:
    """Vacuum vector: killed by every ``f_a``, eigenvector of every ``h_i``.

    Candidates are the joint-kernel basis vectors; the algebra's recorded
    position wins when valid, otherwise the lowest basis index.  ``index``
    forces a particular basis vector.
    """
    n = g.rep_dim
    fs = [g.rep(v) for _, v in g.negative]
    hs = [g.rep(v) for _, v in g.cartan]
    if index is not None:
        cands = [tuple(Poly(1 if k == index else 0) for k in range(n))]
        if any(any(f.apply(cands[0])) for f in fs):
            raise NoVacuum(f"basis vector {index + 1} is not annihilated by the lowering operators")
    else:
        kernel = _joint_kernel(fs, n)
        units = []
        for i in range(n):
            u = tuple(Poly(1 if k == i else 0) for k in range(n))
            if all(not any(f.apply(u)) for f in fs):
                units.append(u)
        cands = units + [k for k in kernel if k not in units]
        hint = g.vacuum_hint
        if hint is not None:
            cands.sort(key=lambda v: (0 if _pos(v) == hint else 1, _pos(v)))
    for v in cands:
        w = _eigen_weight(hs, v)
        if w is None:
            continue
        cyc = is_cyclic(g, v)
        if cyc or not require_cyclic:
            return Vacuum(v, w, _pos(v) if sum(1 for c in v if c) == 1 else None, cyc)
    raise NoVacuum(f"{g.name}: no cyclic joint eigenvector in the kernel of the lowering operators")


def _pos(v):
    return next(i for i, c in enumerate(v) if c)


# --- states --------------------------------------------------------------------

def _raw_state(g, v, family: int = 0, label_map=None):
    x = None
    for lbl, vec in g.positive:
        name = label_map(lbl) if label_map else lbl
        term = g.rep(vec).scale(zeta_var(name, family))
        x = term if x is None else x + term
    if x is None:
        return tuple(v)
    return tuple(exp_apply(x, v))


def coherent_state(g, family: int = 0, vac: Vacuum | None = None) -> CoherentState:
    """``exp(sum zeta_a rho(e_a)) v0``; the central component is split off for
    centrally extended algebras."""
    vac = vac or vacuum(g)
    comps = _raw_state(g, vac.vector, family)
    labels = _state_labels(g)
    ci = getattr(g, "central_index", None)
    if ci is not None and g.module is None:
        rest = tuple(c for i, c in enumerate(comps) if i != ci)
        return CoherentState(tuple(l for i, l in enumerate(labels) if i != ci), rest,
                             comps[ci], labels[ci])
    return CoherentState(labels, comps)


def _bar_map(g, family: int, sign: int):
    kind, bkind = PRIMES[family]
    out = {}
    for lbl, _ in g.positive:
        out[Var(kind, lbl)] = zeta_var(lbl, family, bar=True) * sign
    return out


def _conj(p: Poly, family: int) -> Poly:
    # formal conjugation of a state written in family ``family``
    q = p.conj()
    return q


def dual_state(g, convention: str = "chevalley", family: int = 0,
               vac: Vacuum | None = None) -> CoherentState:
    """The covector ``<zeta|`` in barred variables of the given family."""
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}; expected one of {CONVENTIONS}")
    vac = vac or vacuum(g)
    if convention == "involution":
        y = None
        for lbl, vec in g.negative:
            term = g.rep(vec).scale(zeta_var(_mirror_label(g, lbl), family, bar=True) * -1)
            y = term if y is None else y + term
        comps = tuple(vac.vector) if y is None else tuple(exp_apply(y.transpose(), vac.vector))
        st = CoherentState(_state_labels(g), comps)
        return _split_central(g, st)
    st = coherent_state(g, family, vac)
    if convention == "chevalley":
        return st.substitute(_bar_map(g, family, -1))
    comps = tuple(_conj(c, family) for c in st.components)
    cp = None if st.central_part is None else _conj(st.central_part, family)
    return CoherentState(st.labels, comps, cp, st.central_label)


def _split_central(g, st):
    ci = getattr(g, "central_index", None)
    if ci is None or g.module is not None:
        return st
    comps = st.components
    return CoherentState(tuple(l for i, l in enumerate(st.labels) if i != ci),
                         tuple(c for i, c in enumerate(comps) if i != ci),
                         comps[ci], st.labels[ci])


def _mirror_label(g, lbl):
    """Label of the raising generator paired with lowering generator ``lbl``."""
    pos = {l for l, _ in g.positive}
    if lbl in pos:
        return lbl
    i = g._index.get(lbl)
    if i is not None:
        root = tuple(-x for x in g.basis[i].root)
        for l, vec in g.positive:
            j = next(k for k, c in enumerate(vec) if c)
            if g.basis[j].root == root:
                return l
    raise ValueError(f"no raising partner for {lbl!r}")


def pair(dual: CoherentState, state: CoherentState) -> Poly:
    tot = Poly()
    for a, b in zip(dual.full(), state.full()):
        tot = tot + a * b
    return tot


def norm_poly(g, convention: str = "chevalley", vac: Vacuum | None = None) -> Poly:
    """``p(zetabar, zeta') = <zeta|zeta'>``."""
    vac = vac or vacuum(g)
    d = dual_state(g, convention, 0, vac)
    s = coherent_state(g, 1, vac)
    return pair(d, s)


# --- central extensions ---------------------------------------------------------------

def central_split(ext, base, convention: str = "conjugate_transpose",
                  vac: Vacuum | None = None, require_cyclic: bool = False):
    """``(|zeta>_0, c(zeta, v0))`` for ``ext = central_extend(base, ...)``.

    Both the state split and ``p = p_0 + c* c'`` are checked; a mismatch
    raises :class:`NotAnExtension`.
    """
    ci = getattr(ext, "central_index", None)
    if ci is None or ext.dim != base.dim + 1:
        raise NotAnExtension(f"{ext.name} is not a one-dimensional central extension")
    for a in range(base.dim):
        for b in range(base.dim):
            lhs = {k: v for k, v in ext.bracket_basis(a, b).items() if k != ci}
            if lhs != base.bracket_basis(a, b):
                raise NotAnExtension(f"brackets differ on ({base.label(a)}, {base.label(b)})")
    bvac = vac or vacuum(base, require_cyclic=require_cyclic)
    evac = Vacuum(tuple(bvac.vector) + (Poly(),), bvac.weight, bvac.index, bvac.cyclic)
    st = coherent_state(ext, 0, evac)
    st0 = coherent_state(base, 0, bvac)
    if st.components != st0.components:
        raise NotAnExtension("state of the extension does not restrict to the base state")
    c = st.central_part
    if convention != "involution":
        p = pair(dual_state(ext, convention, 0, evac), coherent_state(ext, 1, evac))
        p0 = pair(dual_state(base, convention, 0, bvac), coherent_state(base, 1, bvac))
        cbar = dual_state(ext, convention, 0, evac).central_part
        cprime = coherent_state(ext, 1, evac).central_part
        if p != p0 + cbar * cprime:
            raise NotAnExtension("p does not split as p0 + c* c'")
    return st0, c


# --- loops -------------------------------------------------------------------------

def mode_label(label: str, n: int) -> str:
    return f"{label}@{n}"


def laurent_zeta(label: str, M: int, family: int = 0, bar: bool = False) -> Poly:
    """``zeta_a(z) = sum_{|n| <= M} zeta_{a,n} z^n``; barred copies use ``z^{-n}``."""
    z = Var("z")
    out = Poly()
    for n in range(-M, M + 1):
        out = out + zeta_var(mode_label(label, n), family, bar) * Poly.monomial(z, -n if bar else n)
    return out


def required_window(g, M: int, vac: Vacuum | None = None) -> int:
    """Largest mode reached when expanding the loop coherent state."""
    vac = vac or vacuum(g)
    st = coherent_state(g, 0, vac)
    deg = max((c.coord_degree() for c in st.full()), default=0)
    return deg * M


def loop_coherent(g, M: int, window: int | None = None, family: int = 0,
                  vac: Vacuum | None = None) -> CoherentState:
    """Coherent state of the loop algebra with modes ``-M..M``.

    Components are Laurent polynomials in ``z``.  ``window`` is the mode
    window of a truncated loop algebra; if the expansion needs modes outside
    it the brackets were truncated and :class:`WindowOverflow` is raised.
    """
    vac = vac or vacuum(g)
    need = required_window(g, M, vac)
    if window is not None and need > window:
        raise WindowOverflow(f"modes up to {need} needed, window is {window}")
    st = coherent_state(g, family, vac)
    kind = PRIMES[family][0]
    bind = {Var(kind, lbl): laurent_zeta(lbl, M, family) for lbl, _ in g.positive}
    return st.substitute(bind)


def loop_state_via_algebra(lg, family: int = 0, vac_index: int | None = None):
    """Coherent state computed inside a truncated loop algebra itself.

    Returns the components re-assembled as Laurent polynomials over the base
    basis, for comparison with :func:`loop_coherent`.
    """
    g, M, pos_index = lg.loop
    base_vac = vacuum(g) if vac_index is None else vacuum(g, index=vac_index)
    v = [Poly()] * lg.dim
    for i, c in enumerate(base_vac.vector):
        v[pos_index[(i, 0)]] = c
    x = None
    for lbl, vec in lg.positive:
        term = lg.adjoint(vec).scale(zeta_var(lbl, family))
        x = term if x is None else x + term
    comps = exp_apply(x, v)
    z = Var("z")
    out = [Poly()] * g.dim
    for (i, n), k in pos_index.items():
        out[i] = out[i] + comps[k] * Poly.monomial(z, n)
    return tuple(out)


def zero_coefficient(p: Poly) -> Poly:
    """Constant Fourier coefficient: the ``z^0`` part of a Laurent polynomial."""
    z = Var("z")
    return Poly({m: c for m, c in p.terms.items()
                 if all(Var._all[i] is not z for i, _ in m)})


def affine_central_term(g, M: int, level=None, family: int = 0, bar: bool = False,
                        vac: Vacuum | None = None, sign: int = 1) -> Poly:
    """``c(zeta) = k (z d/dz zeta | v0)`` with the invariant form of ``g``.

    For ``bar=True`` the conjugate ``c*(zetabar)`` is returned (``z -> 1/z``);
    ``sign=-1`` additionally applies ``zetabar -> -zetabar`` as in the
    substitution dual.
    """
    from .liealg import normalized_form
    vac = vac or vacuum(g)
    if level is None:
        level = Poly.monomial(Var("sym", "k"))
    kappa = normalized_form(g)
    z = Var("z")
    out = Poly()
    for lbl, vec in g.positive:
        pairing = Poly()
        for a, ca in enumerate(vec):
            if ca:
                for b, vb in enumerate(vac.vector):
                    if vb:
                        pairing = pairing + ca * vb * kappa[a, b]
        if not pairing:
            continue
        zz = laurent_zeta(lbl, M, family, bar)
        deriv = Poly({m: c * _zexp(m, z) for m, c in zz.terms.items()})
        out = out + deriv * pairing * (sign if bar else 1)
    return out * level


def _zexp(m, z) -> int:
    for i, e in m:
        if Var._all[i] is z:
            return e
    return 0


def km_norm_functional(g, M: int, level=None, convention: str = "chevalley",
                       vac: Vacuum | None = None) -> Poly:
    """``p_k = [z^0] ( p_0(zetabar(z), zeta'(z)) + c*(zetabar) c(zeta') )``."""
    if convention == "involution":
        raise ValueError("the loop functional is defined for substitution conventions")
    vac = vac or vacuum(g)
    p0 = norm_poly(g, convention, vac)
    bind = {}
    for lbl, _ in g.positive:
        bind[Var("zetabar", lbl)] = laurent_zeta(lbl, M, 0, bar=True)
        bind[Var("zetap", lbl)] = laurent_zeta(lbl, M, 1)
    loop_p = p0.substitute(bind)
    sign = -1 if convention == "chevalley" else 1
    cbar = affine_central_term(g, M, level, 0, True, vac, sign)
    cprime = affine_central_term(g, M, level, 1, False, vac)
    return zero_coefficient(loop_p + cbar * cprime)


def affine_algebra(g, M: int, level=None):
    """Truncated affine algebra: ``loopify(g, M)`` centrally extended by
    ``c(x@m, y@n) = k m delta_{m,-n} kappa(x, y)``."""
    from .liealg import affine_cocycle, central_extend, loopify
    lg = loopify(g, M)
    cocycle = affine_cocycle(lg, level)
    ext = central_extend(lg, cocycle, central_name="K")
    ext.loop = lg.loop
    return lg, ext


def spread_vacuum(lg, base_vac: Vacuum) -> tuple:
    """``v0`` copied into every mode of a loop algebra (``v_n = v`` for all n)."""
    g, M, pos_index = lg.loop
    v = [Poly()] * lg.dim
    for (i, n), k in pos_index.items():
        v[k] = base_vac.vector[i]
    return tuple(v)


def state_to_latex(st: CoherentState, dual=False) -> str:
    return st.to_latex(dual)


def poly_to_latex(p: Poly) -> str:
    return poly_latex(p)
