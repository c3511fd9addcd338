"""Rank <= 2 root systems and Chevalley structure constants.

Structure constants follow Carter's construction: signs of the extraspecial
pairs are free, everything else follows from the standard identities

* ``N[b,a] = -N[a,b]``
* ``N[a,b]/(c,c) = N[b,c]/(a,a) = N[c,a]/(b,b)`` when ``a+b+c = 0``
* ``N[-a,-b] = -N[a,b]`` and ``N[a,b]**2 = (p+1)**2``
* the four-root identity for ``a+b+c+d = 0``.

In symbolic mode each extraspecial constant is a ring variable with the
square relation ``N**2 == (p+1)**2``, so every other ``N`` is a polynomial
in those variables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ring import Poly, Var

Root = tuple


def add(a: Root, b: Root) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Root, b: Root) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def neg(a: Root) -> Root:
    return tuple(-x for x in a)


def scale(n: int, a: Root) -> Root:
    return tuple(n * x for x in a)


def root_name(root: Root, names) -> str:
    """``(2, 1)`` with names ``('r', 's')`` -> ``'2r+s'``."""
    if not names:
        return ",".join(str(x) for x in root)
    out = ""
    for c, n in zip(root, names):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else str(abs(c))
        out += f"{sign}{mag}{n}"
    if not out:
        return "0"
    return out[1:] if out[0] == "+" else out


@dataclass(frozen=True)
class RootSystem:
    series: str
    names: tuple          # lattice basis names
    gram: tuple           # inner products of the lattice basis
    simple: tuple         # simple roots in lattice coordinates
    positive: tuple       # positive roots, in presentation order

    @property
    def rank(self) -> int:
        return len(self.names)

    @property
    def roots(self) -> tuple:
        return self.positive + tuple(neg(a) for a in self.positive)

    def is_root(self, a: Root) -> bool:
        return a in self.positive or neg(a) in self.positive

    def is_positive(self, a: Root) -> bool:
        return a in self.positive

    def inner(self, a: Root, b: Root) -> Fraction:
        n = len(a)
        return Fraction(sum(a[i] * self.gram[i][j] * b[j]
                            for i in range(n) for j in range(n)))

    def norm(self, a: Root) -> Fraction:
        return self.inner(a, a)

    def pairing(self, b: Root, a: Root) -> Fraction:
        """``<b, a^v> = 2 (b|a)/(a|a)``."""
        return 2 * self.inner(b, a) / self.norm(a)

    def simple_coords(self, a: Root) -> tuple:
        # solve a = sum c_i simple_i (rank <= 2, exact)
        s = self.simple
        if self.rank == 1:
            return (Fraction(a[0], s[0][0]),)
        (p, q), (u, v) = s
        det = p * v - q * u
        c1 = Fraction(a[0] * v - a[1] * u, det)
        c2 = Fraction(p * a[1] - q * a[0], det)
        return (c1, c2)

    def height(self, a: Root) -> int:
        return int(sum(self.simple_coords(a)))

    def order_key(self, a: Root):
        return (self.height(a), self.positive.index(a))

    def string_p(self, a: Root, b: Root) -> int:
        """Largest ``p`` with ``b - p a`` a root (``b`` itself counts)."""
        p = 0
        while self.is_root(sub(b, scale(p + 1, a))):
            p += 1
        return p

    def cartan_matrix(self) -> tuple:
        return tuple(tuple(int(self.pairing(aj, ai)) for aj in self.simple)
                     for ai in self.simple)

    def coroot_coords(self, a: Root) -> tuple:
        """``a^v`` expanded over the coroots of the lattice basis."""
        basis = [tuple(1 if k == i else 0 for k in range(self.rank))
                 for i in range(self.rank)]
        return tuple(Fraction(a[i]) * self.norm(basis[i]) / self.norm(a)
                     for i in range(self.rank))


SYSTEMS = {
    "A1": RootSystem("A1", ("r",), ((2,),), ((1,),), ((1,),)),
    "A2": RootSystem("A2", ("r", "s"), ((2, -1), (-1, 2)),
                     ((1, 0), (0, 1)), ((1, 0), (0, 1), (1, 1))),
    "B2": RootSystem("B2", ("r", "s"), ((2, -2), (-2, 4)),
                     ((1, 0), (0, 1)), ((1, 0), (0, 1), (1, 1), (2, 1))),
    # r and s are both short; the simple roots are s and r-s
    "G2": RootSystem("G2", ("r", "s"), ((2, -1), (-1, 2)),
                     ((0, 1), (1, -1)),
                     ((1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1))),
}


class ChevalleyConstants:
    """Structure constants ``N[a,b]`` of a Chevalley basis.

    ``signs`` maps each sum root to the sign of its extraspecial pair in
    numeric mode; ``symbolic=True`` replaces those signs by variables.
    """

    def __init__(self, system: RootSystem, symbolic: bool = True, signs=None):
        self.system = system
        self.symbolic = symbolic
        self.signs = dict(signs or {})
        self._memo: dict = {}
        self.extraspecial = self._extraspecial_pairs()
        self.symbols: dict = {}
        for xi, (a, b) in self.extraspecial.items():
            p = system.string_p(a, b)
            mag = p + 1
            if symbolic:
                # orient the symbol as the pair appears in presentation order
                pa, pb = system.positive.index(a), system.positive.index(b)
                first, second = (a, b) if pa < pb else (b, a)
                # series prefix: the same pair has different magnitudes in
                # different algebras (N[r,s]**2 is 1 in A2 but 4 in G2)
                label = (f"{system.series}:" + root_name(first, system.names)
                         + "," + root_name(second, system.names))
                v = Poly.monomial(Var("N", label, mag * mag))
                self.symbols[label] = v
                self._memo[(a, b)] = v if (first, second) == (a, b) else -v
            else:
                sign = self.signs.get(xi, 1)
                if sign not in (1, -1):
                    raise ValueError("extraspecial signs must be +1 or -1")
                self._memo[(a, b)] = Poly(sign * mag)

    def _extraspecial_pairs(self) -> dict:
        s = self.system
        out = {}
        pos = sorted(s.positive, key=s.order_key)
        for xi in pos:
            pairs = [(a, sub(xi, a)) for a in pos
                     if s.is_positive(sub(xi, a))
                     and s.order_key(a) < s.order_key(sub(xi, a))]
            if pairs:
                out[xi] = min(pairs, key=lambda ab: s.order_key(ab[0]))
        return out

    def __call__(self, a: Root, b: Root) -> Poly:
        return self.N(a, b)

    def N(self, a: Root, b: Root, _depth: int = 0) -> Poly:
        s = self.system
        c = add(a, b)
        if not s.is_root(c) or not s.is_root(a) or not s.is_root(b):
            return Poly()
        key = (a, b)
        if key in self._memo:
            return self._memo[key]
        if _depth > 64:
            raise RecursionError("structure constant recursion did not terminate")
        d = _depth + 1
        pa, pb = s.is_positive(a), s.is_positive(b)
        if pa and pb:
            if s.order_key(a) > s.order_key(b):
                val = -self.N(b, a, d)
            else:
                a1, b1 = self.extraspecial[c]
                total = Poly()
                if s.is_root(sub(b, a1)):
                    total = total + (self.N(b, neg(a1), d) * self.N(a, neg(b1), d)
                                     * (1 / s.norm(sub(b, a1))))
                if s.is_root(sub(a, a1)):
                    total = total + (self.N(neg(a1), a, d) * self.N(b, neg(b1), d)
                                     * (1 / s.norm(sub(a, a1))))
                val = total * self.N(a1, b1, d).unit_inverse() * s.norm(c)
        elif not pa and not pb:
            val = -self.N(neg(a), neg(b), d)
        else:
            g = neg(c)
            # cyclic identity, rotate to a same-sign pair
            if pa:  # a > 0 > b
                if s.is_positive(g):
                    val = self.N(g, a, d) * (s.norm(g) / s.norm(b))
                else:
                    val = self.N(b, g, d) * (s.norm(g) / s.norm(a))
            else:   # a < 0 < b
                if s.is_positive(g):
                    val = self.N(b, g, d) * (s.norm(g) / s.norm(a))
                else:
                    val = self.N(g, a, d) * (s.norm(g) / s.norm(b))
        self._memo[key] = val
        return val
